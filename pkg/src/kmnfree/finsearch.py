"""Backtracking search for finite complete (2,2) structures and embeddings.

A finite complete (2,2) structure of order q has q^2+q+1 points, the
same number of lines, q+1 points per line, and every pair of points on
exactly one common line (degenerate cases such as the order-1 triangle
are admitted; there is no non-degeneracy requirement).  The search
builds the line set directly: at every step the lexicographically least
point pair not yet covered must be covered by some line, so candidates
are exactly the admissible lines through that pair, tried in
lexicographic order.  That rule never discards a solution, keeps the
search deterministic, and fixes the very first line to the least
possible point set.

Embedding queries reuse found planes through a cache keyed by order.
All searches are budgeted in decision nodes; a budget hit is reported
as UNKNOWN rather than an error, since exhausting the space is the only
way to conclude NONE.
"""

from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Dict, List, Optional, Tuple

from .core import (
    BudgetError,
    IncidenceStructure,
    ParameterError,
    PreconditionError,
    StructParams,
    StructureBuilder,
    is_kmn_free,
    satisfies_complete,
)
from .completion import free_completion, deficient_sets

__all__ = [
    "SearchStatus",
    "PlaneResult",
    "EmbedResult",
    "CompletionResult",
    "find_projective_plane",
    "enumerate_projective_planes",
    "embed_in_finite_plane",
    "embed_search_general",
    "clear_plane_cache",
]


class SearchStatus(Enum):
    FOUND = "found"
    NONE = "none"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class PlaneResult:
    status: SearchStatus
    plane: Optional[IncidenceStructure] = None
    nodes: int = 0

    def __bool__(self) -> bool:
        return self.status is SearchStatus.FOUND


@dataclass(frozen=True)
class EmbedResult:
    status: SearchStatus
    mapping: Optional[Dict[int, int]] = None
    plane: Optional[IncidenceStructure] = None
    nodes: int = 0

    def __bool__(self) -> bool:
        return self.status is SearchStatus.FOUND


@dataclass(frozen=True)
class CompletionResult:
    status: SearchStatus
    structure: Optional[IncidenceStructure] = None
    embedding: Optional[Dict[int, int]] = None
    nodes: int = 0
    detail: str = ""

    def __bool__(self) -> bool:
        return self.status is SearchStatus.FOUND


class _PlaneSearch:
    """DFS over line sets of a complete (2,2) structure of one order.

    Lines are (q+1)-subsets of range(v), v = q^2+q+1.  Any two points
    may share at most one line, and a finished solution covers every
    pair exactly once, which forces the line count and the degrees.
    With ``canonical`` set, each new line must cover the least
    uncovered pair, with its remaining points above that pair (forced
    for the least pair, so no solutions are lost); otherwise lines are
    built in plain lexicographic order, which is far slower but useful
    as an oracle at order 1.
    """

    def __init__(self, order: int, node_budget: int, canonical: bool = True):
        if order < 1:
            raise ParameterError("plane order must be >= 1")
        self.q = order
        self.v = order * order + order + 1
        self.k = order + 1
        self.budget = node_budget
        self.nodes = 0
        self.canonical = canonical
        self.pair_used = [[False] * self.v for _ in range(self.v)]
        self.deg = [0] * self.v
        self.lines: List[Tuple[int, ...]] = []
        self.solutions: List[List[Tuple[int, ...]]] = []
        self.exhausted = False

    def _least_uncovered(self) -> Optional[Tuple[int, int]]:
        for a in range(self.v):
            row = self.pair_used[a]
            for b in range(a + 1, self.v):
                if not row[b]:
                    return (a, b)
        return None

    def _place(self, line: Tuple[int, ...]) -> None:
        for x, y in combinations(line, 2):
            self.pair_used[x][y] = self.pair_used[y][x] = True
        for x in line:
            self.deg[x] += 1
        self.lines.append(line)

    def _unplace(self, line: Tuple[int, ...]) -> None:
        for x, y in combinations(line, 2):
            self.pair_used[x][y] = self.pair_used[y][x] = False
        for x in line:
            self.deg[x] -= 1
        self.lines.pop()

    def _admissible(self, line: Tuple[int, ...]) -> bool:
        for x in line:
            if self.deg[x] >= self.k:
                return False
        for x, y in combinations(line, 2):
            if self.pair_used[x][y]:
                return False
        return True

    def _candidates(self):
        pair = self._least_uncovered()
        if pair is None:
            return None  # complete
        a, b = pair
        if self.deg[a] >= self.k or self.deg[b] >= self.k:
            return iter(())  # dead end: the pair can never be covered
        if self.canonical:
            pool = [
                p
                for p in range(b + 1, self.v)
                if self.deg[p] < self.k
                and not self.pair_used[a][p]
                and not self.pair_used[b][p]
            ]
            return (
                (a, b) + rest
                for rest in combinations(pool, self.k - 2)
                if self._admissible((a, b) + rest)
            )
        # plain order: any lex-greater admissible line covering the pair
        floor = self.lines[-1] if self.lines else ()
        return (
            cand
            for cand in combinations(range(self.v), self.k)
            if cand > floor and a in cand and b in cand and self._admissible(cand)
        )

    def run(self, first_only: bool, limit: Optional[int] = None) -> None:
        try:
            self._dfs(first_only, limit)
            self.exhausted = True
        except StopIteration:
            pass

    def _dfs(self, first_only: bool, limit: Optional[int]) -> None:
        cands = self._candidates()
        if cands is None:
            self.solutions.append(list(self.lines))
            if first_only or (limit is not None and len(self.solutions) >= limit):
                raise StopIteration
            return
        for cand in cands:
            if self.nodes >= self.budget:
                raise StopIteration
            self.nodes += 1
            self._place(cand)
            self._dfs(first_only, limit)
            self._unplace(cand)

    def to_structure(self, lines: List[Tuple[int, ...]]) -> IncidenceStructure:
        bld = StructureBuilder(StructParams(2, 2))
        for _ in range(self.v):
            bld.add_point()
        for line in lines:
            l = bld.add_line()
            for p in line:
                bld.add_incidence(p, l)
        s = bld.build()
        report = satisfies_complete(s)
        if not report.passed:
            raise RuntimeError("postcondition failure: found plane is incomplete")
        return s


_plane_cache: Dict[int, PlaneResult] = {}


def clear_plane_cache() -> None:
    _plane_cache.clear()


def find_projective_plane(
    order: int, node_budget: int = 10_000_000, symmetry_breaking: bool = True
) -> PlaneResult:
    """First complete (2,2) structure of the given order, by backtracking.

    FOUND results (and exhaustive NONE results) are cached per order and
    reused by the embedding searches.  UNKNOWN means the node budget ran
    out before the space was exhausted.
    """
    if symmetry_breaking and order in _plane_cache:
        return _plane_cache[order]
    search = _PlaneSearch(order, node_budget, canonical=symmetry_breaking)
    search.run(first_only=True)
    if search.solutions:
        result = PlaneResult(
            SearchStatus.FOUND, search.to_structure(search.solutions[0]), search.nodes
        )
    elif search.exhausted:
        result = PlaneResult(SearchStatus.NONE, nodes=search.nodes)
    else:
        result = PlaneResult(SearchStatus.UNKNOWN, nodes=search.nodes)
    if symmetry_breaking and result.status is not SearchStatus.UNKNOWN:
        _plane_cache[order] = result
    return result


def enumerate_projective_planes(
    order: int, node_budget: int = 10_000_000, limit: Optional[int] = None
):
    """All labeled solutions of the canonical search, for uniqueness tests.

    Returns (planes, exhausted, nodes).  ``exhausted`` is False when the
    node budget (or ``limit``) cut the enumeration short, in which case
    the list is a prefix of the full solution set.
    """
    search = _PlaneSearch(order, node_budget, canonical=True)
    search.run(first_only=False, limit=limit)
    planes = [search.to_structure(sol) for sol in search.solutions]
    return planes, search.exhausted, search.nodes


def _assignment_order(s: IncidenceStructure) -> List[int]:
    # most-constrained-first: repeatedly take the element with the most
    # already-ordered neighbors, breaking ties toward lower ids
    chosen: List[int] = []
    placed = set()
    remaining = set(s.elements())
    while remaining:
        best = max(remaining, key=lambda e: (len(s.neighbors(e) & placed), -e))
        chosen.append(best)
        placed.add(best)
        remaining.remove(best)
    return chosen


def _induced_embedding(
    small: IncidenceStructure,
    big: IncidenceStructure,
    node_budget: int,
) -> Tuple[SearchStatus, Optional[Dict[int, int]], int]:
    """Backtracking search for an induced embedding small -> big."""
    order = _assignment_order(small)
    pts = sorted(big.points)
    lns = sorted(big.lines)
    mapping: Dict[int, int] = {}
    used = set()
    nodes = 0

    def consistent(e: int, img: int) -> bool:
        for other, img_other in mapping.items():
            if small.sort(other) is small.sort(e):
                continue
            p, l = (e, other) if small.is_point(e) else (other, e)
            ip, il = (img, img_other) if small.is_point(e) else (img_other, img)
            if small.incident(p, l) != big.incident(ip, il):
                return False
        return True

    def dfs(idx: int) -> Optional[bool]:
        # None signals budget exhaustion up the stack
        nonlocal nodes
        if idx == len(order):
            return True
        e = order[idx]
        for img in pts if small.is_point(e) else lns:
            if img in used:
                continue
            if nodes >= node_budget:
                return None
            nodes += 1
            if not consistent(e, img):
                continue
            mapping[e] = img
            used.add(img)
            hit = dfs(idx + 1)
            if hit:
                return True
            del mapping[e]
            used.remove(img)
            if hit is None:
                return None
        return False

    outcome = dfs(0)
    if outcome is None:
        return SearchStatus.UNKNOWN, None, nodes
    if outcome:
        return SearchStatus.FOUND, dict(mapping), nodes
    return SearchStatus.NONE, None, nodes


def embed_in_finite_plane(
    a: IncidenceStructure, order: int, node_budget: int = 10_000_000
) -> EmbedResult:
    """Induced embedding of ``a`` into a plane of the given order.

    The plane comes from find_projective_plane (cached).  The embedding
    is injective, sort-preserving, and induced: incidence between image
    elements holds exactly when it holds in ``a``.
    """
    if a.params != StructParams(2, 2):
        raise ParameterError("plane embedding is a (2, 2) operation")
    free, wit = is_kmn_free(a)
    if not free:
        raise PreconditionError(f"input contains a complete grid: {wit}")
    plane_result = find_projective_plane(order, node_budget)
    if plane_result.status is not SearchStatus.FOUND:
        return EmbedResult(plane_result.status, nodes=plane_result.nodes)
    plane = plane_result.plane
    if len(a.points) > len(plane.points) or len(a.lines) > len(plane.lines):
        return EmbedResult(SearchStatus.NONE, plane=plane, nodes=0)
    status, mapping, nodes = _induced_embedding(a, plane, node_budget)
    return EmbedResult(status, mapping=mapping, plane=plane, nodes=nodes)


def embed_search_general(
    a: IncidenceStructure,
    max_elements: int = 200,
    node_budget: int = 10_000_000,
) -> CompletionResult:
    """Bounded search for a finite complete structure inducing ``a``.

    Two routes: run the staged free completion, which settles the matter
    whenever it converges within the size bound (always, when m or n
    is 1); at (2, 2), additionally try embedding into planes of order
    up to 3 whose size fits the bound.  NONE and FOUND are claims about
    the searched bound only, which the detail string spells out.
    """
    free, wit = is_kmn_free(a)
    if not free:
        raise PreconditionError(f"input contains a complete grid: {wit}")

    try:
        run = free_completion(a, stages=64, element_cap=max_elements)
        final = run.final.structure
        if not deficient_sets(final):
            report = satisfies_complete(final)
            if report.passed:
                return CompletionResult(
                    SearchStatus.FOUND,
                    structure=final,
                    embedding={e: e for e in a.elements()},
                    detail=f"free completion converged at {len(final)} elements",
                )
    except BudgetError:
        pass  # completion outgrew the bound; fall through

    if a.params != StructParams(2, 2):
        return CompletionResult(
            SearchStatus.UNKNOWN,
            detail=f"free completion did not converge within {max_elements} elements",
        )

    max_order = 3
    attempted = []
    uncertain = False
    nodes = 0
    for q in range(1, max_order + 1):
        if 2 * (q * q + q + 1) > max_elements:
            break
        result = embed_in_finite_plane(a, q, node_budget)
        nodes += result.nodes
        attempted.append(q)
        if result.status is SearchStatus.FOUND:
            return CompletionResult(
                SearchStatus.FOUND,
                structure=result.plane,
                embedding=result.mapping,
                nodes=nodes,
                detail=f"embedded in the order-{q} plane",
            )
        if result.status is SearchStatus.UNKNOWN:
            uncertain = True
    if not attempted or uncertain:
        return CompletionResult(
            SearchStatus.UNKNOWN,
            nodes=nodes,
            detail="search bounds too tight to decide",
        )
    return CompletionResult(
        SearchStatus.NONE,
        nodes=nodes,
        detail=f"no completion within orders {attempted} or the size bound",
    )
