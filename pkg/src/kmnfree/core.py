"""Finite two-sorted incidence structures and K_{m,n}-freeness machinery.

A structure has points, lines, and a symmetric incidence relation between
them.  Everything downstream (completions, closures, amalgams, independence
checkers) is built on the small vocabulary here:

* ``IncidenceStructure``: an immutable value.  Elements are opaque integer
  ids assigned in creation order; each has a sort and a display name.
* ``StructureBuilder``: the one mutable construction path.  Incidence adds
  are guarded by an incremental freeness check by default.
* ``is_kmn_free`` / ``satisfies_complete``: the forbidden-configuration scan
  and the "every m points on exactly n-1 lines, every n lines on exactly m-1
  points" test, both with deterministic witnesses.
* ``isomorphic_over``: backtracking isomorphism extending a partial base map,
  deterministic (returns the lexicographically least isomorphism).

Deterministic subset scans use colexicographic order throughout (subsets
compared by largest element first), so reported witnesses are stable.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Mapping, Optional, Sequence


class Sort(enum.Enum):
    POINT = "point"
    LINE = "line"

    def opposite(self) -> "Sort":
        return Sort.LINE if self is Sort.POINT else Sort.POINT


class ParameterError(ValueError):
    """Bad structural parameters or malformed arguments."""


class SortError(ValueError):
    """An element was used with the wrong sort."""


class PreconditionError(ValueError):
    """A documented operation precondition does not hold."""


class BudgetError(RuntimeError):
    """A stage or element budget was exhausted before the answer was known."""


@dataclass(frozen=True)
class StructParams:
    """The forbidden-configuration parameters: no m points on n common lines."""

    m: int
    n: int

    def __post_init__(self) -> None:
        if not (isinstance(self.m, int) and isinstance(self.n, int)):
            raise ParameterError("m and n must be integers")
        if self.m < 1 or self.n < 1:
            raise ParameterError(f"m and n must be >= 1, got ({self.m}, {self.n})")


@dataclass(frozen=True)
class FreenessWitness:
    """A complete K_{m,n}: m points all incident with the same n lines."""

    points: frozenset
    lines: frozenset


class FreenessViolationError(ValueError):
    """Raised by guarded mutation that would complete a K_{m,n}."""

    def __init__(self, witness: FreenessWitness, context: str = ""):
        self.witness = witness
        pts = sorted(witness.points)
        lns = sorted(witness.lines)
        prefix = f"{context}: " if context else ""
        super().__init__(
            f"{prefix}would complete K_(m,n): points {pts} x lines {lns}"
        )


def colex_combinations(items: Sequence[int], k: int) -> Iterator[tuple]:
    """k-subsets of ``items`` (assumed sorted) in colexicographic order.

    Colex compares subsets by their largest element, then the next largest,
    and so on; equivalently, subsets of items[:j] come before any subset
    containing items[j].
    """
    if k < 0:
        return
    if k == 0:
        yield ()
        return
    for top_idx in range(k - 1, len(items)):
        top = items[top_idx]
        for rest in colex_combinations(items[:top_idx], k - 1):
            yield rest + (top,)


class IncidenceStructure:
    """An immutable finite two-sorted incidence structure.

    Element ids are 0..N-1 in creation order.  Adjacency is stored per
    element as a frozenset of opposite-sort ids.
    """

    __slots__ = ("params", "_sorts", "_names", "_adj", "_by_name", "_hash")

    def __init__(
        self,
        params: StructParams,
        sorts: tuple,
        names: tuple,
        adj: tuple,
    ):
        self.params = params
        self._sorts = sorts
        self._names = names
        self._adj = adj
        self._by_name = {name: e for e, name in enumerate(names)}
        self._hash = None

    # -- basic accessors ---------------------------------------------------

    def __len__(self) -> int:
        return len(self._sorts)

    def elements(self) -> range:
        return range(len(self._sorts))

    @property
    def points(self) -> tuple:
        return tuple(e for e in self.elements() if self._sorts[e] is Sort.POINT)

    @property
    def lines(self) -> tuple:
        return tuple(e for e in self.elements() if self._sorts[e] is Sort.LINE)

    def sort(self, e: int) -> Sort:
        return self._sorts[e]

    def is_point(self, e: int) -> bool:
        return self._sorts[e] is Sort.POINT

    def is_line(self, e: int) -> bool:
        return self._sorts[e] is Sort.LINE

    def name(self, e: int) -> str:
        return self._names[e]

    def names(self, es: Iterable[int]) -> list:
        return sorted(self._names[e] for e in es)

    def by_name(self, name: str) -> int:
        try:
            return self._by_name[name]
        except KeyError:
            raise ParameterError(f"no element named {name!r}") from None

    def has_name(self, name: str) -> bool:
        return name in self._by_name

    def neighbors(self, e: int) -> frozenset:
        """All elements of the opposite sort incident with e."""
        return self._adj[e]

    def degree(self, e: int) -> int:
        return len(self._adj[e])

    def incident(self, p: int, l: int) -> bool:
        return l in self._adj[p]

    def incidences(self) -> Iterator[tuple]:
        """(point, line) pairs, sorted."""
        for p in self.points:
            for l in sorted(self._adj[p]):
                yield (p, l)

    def incidence_count(self) -> int:
        return sum(len(self._adj[p]) for p in self.points)

    # -- equality / hashing -------------------------------------------------

    def _key(self):
        return (self.params, self._sorts, self._names, self._adj)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IncidenceStructure):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __repr__(self) -> str:
        return (
            f"<IncidenceStructure ({self.params.m},{self.params.n})-free "
            f"{len(self.points)}P {len(self.lines)}L "
            f"{self.incidence_count()}I>"
        )


def new_structure(params: StructParams) -> IncidenceStructure:
    """An empty structure with the given parameters."""
    return IncidenceStructure(params, (), (), ())


class StructureBuilder:
    """Mutable builder; ``build()`` snapshots an immutable structure.

    Incidence adds are guarded: add_incidence refuses (with a witness) any
    incidence that would complete a K_{m,n}, unless guard=False.
    """

    def __init__(self, params: StructParams):
        self.params = params
        self._sorts: list = []
        self._names: list = []
        self._adj: list = []
        self._used_names: set = set()

    @classmethod
    def from_structure(cls, s: IncidenceStructure) -> "StructureBuilder":
        b = cls(s.params)
        b._sorts = list(s._sorts)
        b._names = list(s._names)
        b._adj = [set(a) for a in s._adj]
        b._used_names = set(s._names)
        return b

    def __len__(self) -> int:
        return len(self._sorts)

    def sort(self, e: int) -> Sort:
        return self._sorts[e]

    def name(self, e: int) -> str:
        return self._names[e]

    def by_name(self, name: str) -> int:
        return self._names.index(name)

    def neighbors(self, e: int) -> set:
        return self._adj[e]

    def points(self) -> list:
        return [e for e in range(len(self._sorts)) if self._sorts[e] is Sort.POINT]

    def lines(self) -> list:
        return [e for e in range(len(self._sorts)) if self._sorts[e] is Sort.LINE]

    def _add_element(self, sort: Sort, name: Optional[str]) -> int:
        e = len(self._sorts)
        if name is None:
            prefix = "p" if sort is Sort.POINT else "l"
            name = f"{prefix}{e}"
            while name in self._used_names:
                name = "_" + name
        elif name in self._used_names:
            raise ParameterError(f"duplicate element name {name!r}")
        self._sorts.append(sort)
        self._names.append(name)
        self._adj.append(set())
        self._used_names.add(name)
        return e

    def add_point(self, name: Optional[str] = None) -> int:
        return self._add_element(Sort.POINT, name)

    def add_line(self, name: Optional[str] = None) -> int:
        return self._add_element(Sort.LINE, name)

    def completion_witness(self, p: int, l: int) -> Optional[FreenessWitness]:
        """The K_{m,n} that adding incidence (p, l) would complete, if any.

        Any such configuration has its other m-1 points already on l, so scan
        (m-1)-subsets of l's point set; the candidate lines are those through
        all of them and through p (counting l as through p once added).
        """
        m, n = self.params.m, self.params.n
        pts_on_l = sorted(self._adj[l] - {p})
        for sigma in colex_combinations(pts_on_l, m - 1):
            common = self._adj[p] | {l}
            for q in sigma:
                common = common & self._adj[q]
                if len(common) < n:
                    break
            else:
                if len(common) >= n:
                    rest = sorted(common - {l})[: n - 1]
                    return FreenessWitness(
                        points=frozenset(sigma) | {p},
                        lines=frozenset(rest) | {l},
                    )
        return None

    def add_incidence(self, p: int, l: int, guard: bool = True) -> None:
        if self._sorts[p] is not Sort.POINT:
            raise SortError(f"element {p} ({self._names[p]!r}) is not a point")
        if self._sorts[l] is not Sort.LINE:
            raise SortError(f"element {l} ({self._names[l]!r}) is not a line")
        if l in self._adj[p]:
            return
        if guard:
            w = self.completion_witness(p, l)
            if w is not None:
                raise FreenessViolationError(w)
        self._adj[p].add(l)
        self._adj[l].add(p)

    def build(self) -> IncidenceStructure:
        return IncidenceStructure(
            self.params,
            tuple(self._sorts),
            tuple(self._names),
            tuple(frozenset(a) for a in self._adj),
        )


def add_incidence(
    s: IncidenceStructure, p: int, l: int, guard: bool = True
) -> IncidenceStructure:
    """Functional incidence add: returns a new structure, s unchanged."""
    b = StructureBuilder.from_structure(s)
    b.add_incidence(p, l, guard=guard)
    return b.build()


def is_kmn_free(s: IncidenceStructure):
    """(True, None) if s has no complete K_{m,n}; else (False, witness).

    Any K_{m,n} has all m points on each of its n lines, so scanning
    m-subsets of each line's point set covers every occurrence.  Witness is
    the colex-first one.
    """
    m, n = s.params.m, s.params.n
    for l in s.lines:
        pts = sorted(s.neighbors(l))
        if len(pts) < m:
            continue
        for sigma in colex_combinations(pts, m):
            common = None
            for q in sigma:
                common = set(s.neighbors(q)) if common is None else common & s.neighbors(q)
                if len(common) < n:
                    break
            else:
                if common is not None and len(common) >= n:
                    lines = tuple(sorted(common))[:n]
                    return False, FreenessWitness(
                        points=frozenset(sigma), lines=frozenset(lines)
                    )
    return True, None


def common_neighbors(s: IncidenceStructure, ys: Iterable[int]) -> frozenset:
    """Elements incident with every member of ys (ys same-sort, nonempty)."""
    ys = sorted(set(ys))
    if not ys:
        raise ParameterError("common_neighbors requires a nonempty element set")
    sorts = {s.sort(y) for y in ys}
    if len(sorts) != 1:
        raise SortError("common_neighbors requires a same-sort element set")
    acc = set(s.neighbors(ys[0]))
    for y in ys[1:]:
        acc &= s.neighbors(y)
    return frozenset(acc)


@dataclass(frozen=True)
class CompletenessReport:
    """Result of the T^c test; witness identifies the first failing subset."""

    passed: bool
    witness_kind: Optional[str] = None  # "points" or "lines"
    witness: Optional[frozenset] = None
    count: Optional[int] = None


def satisfies_complete(s: IncidenceStructure) -> CompletenessReport:
    """Does every m-set of points lie on exactly n-1 common lines, and every
    n-set of lines pass through exactly m-1 common points?

    Vacuously true when there are fewer than m points and fewer than n lines.
    Point subsets are scanned before line subsets, colex within each.
    """
    m, n = s.params.m, s.params.n
    pts = sorted(s.points)
    for sigma in colex_combinations(pts, m):
        cnt = len(common_neighbors(s, sigma)) if sigma else 0
        if cnt != n - 1:
            return CompletenessReport(False, "points", frozenset(sigma), cnt)
    lns = sorted(s.lines)
    for tau in colex_combinations(lns, n):
        cnt = len(common_neighbors(s, tau)) if tau else 0
        if cnt != m - 1:
            return CompletenessReport(False, "lines", frozenset(tau), cnt)
    return CompletenessReport(True)


@dataclass(frozen=True)
class IsoResult:
    """mapping is None if no isomorphism extends the base; base_conflict is
    set when the base itself is not a partial embedding."""

    mapping: Optional[dict]
    base_conflict: bool = False

    def __bool__(self) -> bool:
        return self.mapping is not None


def isomorphic_over(
    s1: IncidenceStructure,
    s2: IncidenceStructure,
    base: Mapping[int, int],
) -> IsoResult:
    """Search for an isomorphism s1 -> s2 extending ``base``.

    Deterministic: unmapped s1-elements are assigned in id order and
    candidates tried in id order, so the first isomorphism found is the
    lexicographically least extension.  Returns IsoResult(None) if none
    exists; base_conflict is set when the base map itself is not a partial
    embedding.  Malformed bases (sort clash, non-injective) raise instead.
    """
    if s1.params != s2.params:
        return IsoResult(None)
    base = dict(base)
    for a, b in base.items():
        if a not in s1.elements() or b not in s2.elements():
            raise ParameterError("base map references unknown elements")
        if s1.sort(a) is not s2.sort(b):
            raise SortError(
                f"base maps {s1.name(a)!r} to {s2.name(b)!r} of different sort"
            )
    if len(set(base.values())) != len(base):
        raise ParameterError("base map is not injective")
    # base must be a partial embedding: incidences among mapped elements agree
    items = sorted(base.items())
    for i, (a, fa) in enumerate(items):
        for b, fb in items[:i]:
            if s1.sort(a) is s1.sort(b):
                continue
            if s1.incident(*((a, b) if s1.is_point(a) else (b, a))) != s2.incident(
                *((fa, fb) if s2.is_point(fa) else (fb, fa))
            ):
                return IsoResult(None, base_conflict=True)

    if len(s1.points) != len(s2.points) or len(s1.lines) != len(s2.lines):
        return IsoResult(None)

    def degseq(st, es):
        return sorted(st.degree(e) for e in es)

    if degseq(s1, s1.points) != degseq(s2, s2.points):
        return IsoResult(None)
    if degseq(s1, s1.lines) != degseq(s2, s2.lines):
        return IsoResult(None)

    mapping = dict(base)
    used = set(base.values())
    order = [e for e in s1.elements() if e not in mapping]

    def feasible(a: int, b: int) -> bool:
        if s1.degree(a) != s2.degree(b):
            return False
        for u, fu in mapping.items():
            if s1.sort(u) is s1.sort(a):
                continue
            if (u in s1.neighbors(a)) != (fu in s2.neighbors(b)):
                return False
        return True

    def search(idx: int) -> bool:
        if idx == len(order):
            return True
        a = order[idx]
        want = s1.sort(a)
        for b in s2.elements():
            if b in used or s2.sort(b) is not want:
                continue
            if feasible(a, b):
                mapping[a] = b
                used.add(b)
                if search(idx + 1):
                    return True
                del mapping[a]
                used.discard(b)
        return False

    if search(0):
        return IsoResult(dict(sorted(mapping.items())))
    return IsoResult(None)


def induced(s: IncidenceStructure, keep: Iterable[int]):
    """The induced substructure on ``keep``; returns (structure, old->new)."""
    keep = sorted(set(keep))
    for e in keep:
        if e not in s.elements():
            raise ParameterError(f"element {e} not in structure")
    remap = {}
    b = StructureBuilder(s.params)
    for e in keep:
        if s.is_point(e):
            remap[e] = b.add_point(s.name(e))
        else:
            remap[e] = b.add_line(s.name(e))
    for e in keep:
        if s.is_point(e):
            for l in sorted(s.neighbors(e)):
                if l in remap:
                    b.add_incidence(remap[e], remap[l], guard=False)
    return b.build(), remap


def interpret_reduct(
    s: IncidenceStructure,
    c_points: Sequence[int],
    d_lines: Sequence[int],
    m0: int,
    n0: int,
):
    """The (m0, n0)-structure interpreted from s over biclique parameters.

    c_points (m - m0 points) and d_lines (n - n0 lines) must form a complete
    biclique in s.  The reduct's points are the points outside c_points
    incident with every parameter line; its lines are the lines outside
    d_lines incident with every parameter point; incidence is induced.
    Returns (structure, old->new map).
    """
    m, n = s.params.m, s.params.n
    c_points = sorted(set(c_points))
    d_lines = sorted(set(d_lines))
    if m0 < 1 or n0 < 1 or m0 > m or n0 > n:
        raise ParameterError(f"target parameters ({m0},{n0}) out of range for ({m},{n})")
    if len(c_points) != m - m0:
        raise ParameterError(f"need {m - m0} parameter points, got {len(c_points)}")
    if len(d_lines) != n - n0:
        raise ParameterError(f"need {n - n0} parameter lines, got {len(d_lines)}")
    for p in c_points:
        if not s.is_point(p):
            raise SortError(f"parameter {s.name(p)!r} is not a point")
    for l in d_lines:
        if not s.is_line(l):
            raise SortError(f"parameter {s.name(l)!r} is not a line")
    for p in c_points:
        for l in d_lines:
            if not s.incident(p, l):
                raise PreconditionError(
                    f"parameters are not a complete biclique: {s.name(p)!r} not on {s.name(l)!r}"
                )
    cset, dset = set(c_points), set(d_lines)
    pts0 = [p for p in s.points if p not in cset and dset <= s.neighbors(p)]
    lns0 = [l for l in s.lines if l not in dset and cset <= s.neighbors(l)]
    b = StructureBuilder(StructParams(m0, n0))
    remap = {}
    for p in pts0:
        remap[p] = b.add_point(s.name(p))
    for l in lns0:
        remap[l] = b.add_line(s.name(l))
    for p in pts0:
        for l in sorted(s.neighbors(p)):
            if l in remap:
                b.add_incidence(remap[p], remap[l], guard=False)
    return b.build(), remap
