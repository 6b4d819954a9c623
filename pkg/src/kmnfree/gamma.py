"""Point-line machinery special to the (2, 2) parameters.

In a complete (2, 2) structure any two distinct points lie on a unique
common line and any two distinct lines meet in a unique point, so there
is a total binary operation H: for distinct same-sort arguments it
returns the connecting line / intersection point, otherwise it returns
its first argument.  Iterating H from a generating tuple names every
element of the canonical completion by a term, and those terms are how
this module certifies that two completions differ.

Contents:

* ``HTerm`` / ``h_eval`` / ``h_term_eval`` -- the operation, evaluated
  inside a lazy completion workspace so that missing values are spawned
  on demand (one forced element per evaluation step suffices).
* ``gamma`` -- a family of K_{2,2}-free structures indexed by bit
  strings.  Level 0 is a quadrangle completed one round (7 points,
  9 lines); every later level adds six forced points and three forced
  lines, then one extra line (bit 0) or two (bit 1) through a triple of
  fresh points.  Bit strings with a common prefix agree on the shared
  levels, and ``separating_check`` exhibits an H-term equation holding
  along the 0-branch but failing along the 1-branch.
* ``bm_witness`` -- the small configuration whose closure behaviour
  separates independence over the empty base from independence over the
  c-lines, and ``tp2_pattern`` which wraps it as an existential pattern
  (consistent alone, 3-inconsistent across an independent sequence).
* ``nonfree_completion_probe`` -- from a seed whose staged completion
  keeps growing, build a second completion that is provably not
  isomorphic to the free one over the seed, by closing a 7-line
  configuration into a Fano subplane that free completion never forms.
"""

from dataclasses import dataclass, field
from typing import Dict, Iterable, Optional, Sequence, Tuple, Union

from .core import (
    BudgetError,
    IncidenceStructure,
    ParameterError,
    Sort,
    StructParams,
    StructureBuilder,
    common_neighbors,
    induced,
    is_kmn_free,
    isomorphic_over,
)
from .completion import (
    CompletionStage,
    LazyCompletion,
    complete_step,
    deficient_sets,
    initial_stage,
)
from .closure import Ternary, generates

__all__ = [
    "HTerm",
    "h_eval",
    "h_term_eval",
    "GammaStructure",
    "GammaReport",
    "gamma",
    "gamma_invariants",
    "separating_check",
    "bm_witness",
    "tp2_pattern",
    "ProbeCertificate",
    "ProbeResult",
    "nonfree_completion_probe",
    "fano_plane",
]


# ---------------------------------------------------------------------------
# H-terms


@dataclass(frozen=True)
class HTerm:
    """A binary tree over variable leaves, denoting iterated H applications.

    Leaves carry a 0-based index into the assignment tuple; internal
    nodes have both children set.  Exactly one of the two forms holds.
    """

    var: Optional[int] = None
    left: Optional["HTerm"] = None
    right: Optional["HTerm"] = None

    def __post_init__(self):
        is_leaf = self.var is not None
        has_children = self.left is not None or self.right is not None
        if is_leaf and has_children:
            raise ParameterError("a leaf term cannot have children")
        if is_leaf:
            if self.var < 0:
                raise ParameterError("variable index must be non-negative")
        elif self.left is None or self.right is None:
            raise ParameterError("an internal term needs both children")

    @classmethod
    def leaf(cls, index: int) -> "HTerm":
        return cls(var=index)

    @classmethod
    def h(cls, left: "HTerm", right: "HTerm") -> "HTerm":
        return cls(left=left, right=right)

    @property
    def is_leaf(self) -> bool:
        return self.var is not None

    def arity(self) -> int:
        """Smallest assignment length this term can be evaluated on."""
        if self.is_leaf:
            return self.var + 1
        return max(self.left.arity(), self.right.arity())

    def __str__(self) -> str:
        if self.is_leaf:
            return f"x{self.var + 1}"
        return f"H({self.left},{self.right})"


def h_eval(work: LazyCompletion, x: int, y: int) -> int:
    """The H operation on workspace elements x and y.

    For distinct points: the unique line through both.  For distinct
    lines: the unique point on both.  Anything else (equal arguments or
    mixed sorts) evaluates to x.  Missing values are spawned by a single
    targeted completion step, so the only budget in play is the
    workspace's element cap.
    """
    if work.params != StructParams(2, 2):
        raise ParameterError("H is only defined at parameters (2, 2)")
    for e in (x, y):
        if not 0 <= e < len(work):
            raise ParameterError(f"element {e} not in workspace")
    if x == y or work.sort(x) is not work.sort(y):
        # the "otherwise" branch of the definition; also covers mixed sorts
        return x
    if work.sort(x) is Sort.POINT:
        (value,) = work.lines_through((x, y))
    else:
        (value,) = work.points_on((x, y))
    return value


def h_term_eval(work: LazyCompletion, term: HTerm, assignment: Sequence[int]) -> int:
    """Evaluate ``term`` under ``assignment``, recursively via h_eval."""
    if term.is_leaf:
        if not 0 <= term.var < len(assignment):
            raise ParameterError(
                f"term variable x{term.var + 1} exceeds assignment arity "
                f"{len(assignment)}"
            )
        return assignment[term.var]
    return h_eval(
        work,
        h_term_eval(work, term.left, assignment),
        h_term_eval(work, term.right, assignment),
    )


# ---------------------------------------------------------------------------
# the branching family


BitString = Union[str, Sequence[int]]


def _parse_bits(eta: BitString) -> Tuple[int, ...]:
    if isinstance(eta, str):
        raw: Iterable = eta
    else:
        raw = eta
    bits = []
    for ch in raw:
        b = int(ch)
        if b not in (0, 1):
            raise ParameterError(f"bit string may only contain 0 and 1, got {ch!r}")
        bits.append(b)
    return tuple(bits)


@dataclass(frozen=True)
class GammaStructure:
    """One member of the branching family, with element names and terms.

    ``structure`` carries the canonical names (a1..a4, r1..r6, b^k_i,
    s^k_i, c^k_i, t^k or t^k_1/t^k_2).  ``term_provenance`` maps every
    element id to an HTerm over (a1, a2, a3, a4) whose evaluation in any
    completion of the structure returns that element.
    """

    eta: Tuple[int, ...]
    structure: IncidenceStructure
    term_provenance: Dict[int, HTerm]

    def id_of(self, name: str) -> int:
        return self.structure.by_name(name)


def gamma(eta: BitString) -> GammaStructure:
    """Build the level-|eta| member of the branching family.

    Level 0: points a1..a4; lines r1..r6 connecting the six pairs of
    them; points b^0_1..b^0_3 on the three disjoint open line pairs
    {r1,r6}, {r2,r5}, {r3,r4}; lines s^0_1..s^0_3 connecting the b-pairs
    {1,2}, {1,3}, {2,3}.  Level k+1 (driven by eta[k]): points b^{k+1}_i
    on {r1,s^k_3}, {r2,s^k_2}, {r3,s^k_1}; lines s^{k+1}_i connecting
    the new b-pairs; points c^{k+1}_i on {r4,s^k_1}, {r5,s^k_2},
    {r6,s^k_3}; then for bit 0 one line t^{k+1} through all three
    c-points, for bit 1 lines t^{k+1}_1 through c1,c2 and t^{k+1}_2
    through c2,c3.  Every addition closes an open pair, so the guarded
    builder doubles as a freeness proof of the construction.
    """
    bits = _parse_bits(eta)
    bld = StructureBuilder(StructParams(2, 2))
    prov: Dict[int, HTerm] = {}

    a = [bld.add_point(f"a{i}") for i in range(1, 5)]
    for i, e in enumerate(a):
        prov[e] = HTerm.leaf(i)

    # connecting lines of the six point pairs, in the fixed order
    # {a1,a2}, {a1,a3}, {a1,a4}, {a2,a3}, {a2,a4}, {a3,a4}
    r_pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    r = []
    for idx, (i, j) in enumerate(r_pairs):
        l = bld.add_line(f"r{idx + 1}")
        bld.add_incidence(a[i], l)
        bld.add_incidence(a[j], l)
        prov[l] = HTerm.h(prov[a[i]], prov[a[j]])
        r.append(l)

    def intersection_point(name: str, l1: int, l2: int) -> int:
        p = bld.add_point(name)
        bld.add_incidence(p, l1)
        bld.add_incidence(p, l2)
        prov[p] = HTerm.h(prov[l1], prov[l2])
        return p

    def connecting_line(name: str, p1: int, p2: int) -> int:
        l = bld.add_line(name)
        bld.add_incidence(p1, l)
        bld.add_incidence(p2, l)
        prov[l] = HTerm.h(prov[p1], prov[p2])
        return l

    # level 0: intersection points of {r1,r6}, {r2,r5}, {r3,r4}, then
    # connecting lines of the b-pairs {1,2}, {1,3}, {2,3}
    b_prev = [
        intersection_point("b^0_1", r[0], r[5]),
        intersection_point("b^0_2", r[1], r[4]),
        intersection_point("b^0_3", r[2], r[3]),
    ]
    s_prev = [
        connecting_line("s^0_1", b_prev[0], b_prev[1]),
        connecting_line("s^0_2", b_prev[0], b_prev[2]),
        connecting_line("s^0_3", b_prev[1], b_prev[2]),
    ]

    for k, bit in enumerate(bits, start=1):
        b_new = [
            intersection_point(f"b^{k}_1", r[0], s_prev[2]),
            intersection_point(f"b^{k}_2", r[1], s_prev[1]),
            intersection_point(f"b^{k}_3", r[2], s_prev[0]),
        ]
        s_new = [
            connecting_line(f"s^{k}_1", b_new[0], b_new[1]),
            connecting_line(f"s^{k}_2", b_new[0], b_new[2]),
            connecting_line(f"s^{k}_3", b_new[1], b_new[2]),
        ]
        c_new = [
            intersection_point(f"c^{k}_1", r[3], s_prev[0]),
            intersection_point(f"c^{k}_2", r[4], s_prev[1]),
            intersection_point(f"c^{k}_3", r[5], s_prev[2]),
        ]
        if bit == 0:
            t = bld.add_line(f"t^{k}")
            for c in c_new:
                bld.add_incidence(c, t)
            prov[t] = HTerm.h(prov[c_new[0]], prov[c_new[1]])
        else:
            connecting_line(f"t^{k}_1", c_new[0], c_new[1])
            connecting_line(f"t^{k}_2", c_new[1], c_new[2])
        b_prev, s_prev = b_new, s_new

    return GammaStructure(bits, bld.build(), prov)


@dataclass(frozen=True)
class GammaReport:
    ok: bool
    failures: Tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


def gamma_invariants(g: GammaStructure) -> GammaReport:
    """Check the structural guarantees of a family member.

    Verified: K_{2,2}-freeness; every proper prefix embeds name-for-name
    as an induced substructure; {a1..a4} generates the whole structure
    under ambient closure; the six designated line pairs at the top
    level are open; element and incidence counts match the closed forms
    |P| = 7 + 6k, |L| = 9 + sum(4 + bit), |I| = 24 + sum(21 + bit).
    """
    s = g.structure
    failures = []

    free, wit = is_kmn_free(s)
    if not free:
        failures.append(f"freeness: complete (2,2) sub-grid at {wit}")

    k = len(g.eta)
    want_p = 7 + 6 * k
    want_l = 9 + sum(4 + b for b in g.eta)
    want_i = 24 + sum(21 + b for b in g.eta)
    if len(s.points) != want_p:
        failures.append(f"counts: {len(s.points)} points, expected {want_p}")
    if len(s.lines) != want_l:
        failures.append(f"counts: {len(s.lines)} lines, expected {want_l}")
    if s.incidence_count() != want_i:
        failures.append(
            f"counts: {s.incidence_count()} incidences, expected {want_i}"
        )

    # proper prefixes embed name-for-name with no extra incidences among them
    for cut in range(k):
        prefix = gamma(g.eta[:cut])
        ps = prefix.structure
        trouble = None
        for e in ps.elements():
            nm = ps.name(e)
            if not s.has_name(nm):
                trouble = f"missing element {nm}"
                break
            if s.sort(s.by_name(nm)) is not ps.sort(e):
                trouble = f"sort clash at {nm}"
                break
        if trouble is None:
            for p in ps.points:
                for l in ps.lines:
                    here = s.incident(s.by_name(ps.name(p)), s.by_name(ps.name(l)))
                    if here != ps.incident(p, l):
                        trouble = f"incidence mismatch at ({ps.name(p)}, {ps.name(l)})"
                        break
                if trouble:
                    break
        if trouble:
            failures.append(f"prefix {g.eta[:cut]}: {trouble}")

    seed = frozenset(s.by_name(f"a{i}") for i in range(1, 5))
    verdict, missing = generates(s, seed, frozenset(s.elements()))
    if verdict is not Ternary.YES:
        shown = sorted(s.name(e) for e in missing)[:4]
        failures.append(f"generation: closure of a1..a4 misses {shown}")

    open_pairs = [
        ("r1", f"s^{k}_3"),
        ("r2", f"s^{k}_2"),
        ("r3", f"s^{k}_1"),
        ("r4", f"s^{k}_1"),
        ("r5", f"s^{k}_2"),
        ("r6", f"s^{k}_3"),
    ]
    for n1, n2 in open_pairs:
        if not (s.has_name(n1) and s.has_name(n2)):
            failures.append(f"open pairs: element {n1} or {n2} missing")
            continue
        shared = common_neighbors(s, (s.by_name(n1), s.by_name(n2)))
        if shared:
            failures.append(
                f"open pairs: {{{n1},{n2}}} meets at {sorted(s.names(shared))}"
            )

    return GammaReport(not failures, tuple(failures))


def separating_check(eta: BitString) -> bool:
    """Does the one-bit split after ``eta`` change an H-term equation?

    Build both one-longer extensions and evaluate the terms u1, u2, u3
    naming the level-(k+1) c-points over (a1..a4).  Along bit 0 the
    values H(u1,u2) and H(u2,u3) must coincide (the single added t-line)
    and along bit 1 they must differ (the two added t-lines).  Term
    evaluations are additionally checked against the named elements, so
    a provenance bug cannot silently pass.
    """
    bits = _parse_bits(eta)
    k1 = len(bits) + 1
    results = []
    for bit in (0, 1):
        g = gamma(bits + (bit,))
        s = g.structure
        work = LazyCompletion(s)
        assignment = tuple(s.by_name(f"a{i}") for i in range(1, 5))
        values = []
        for i in range(1, 4):
            c_id = s.by_name(f"c^{k1}_{i}")
            got = h_term_eval(work, g.term_provenance[c_id], assignment)
            if got != c_id:
                return False
            values.append(got)
        e12 = h_eval(work, values[0], values[1])
        e23 = h_eval(work, values[1], values[2])
        results.append((s, e12, e23))

    s0, e12_0, e23_0 = results[0]
    s1, e12_1, e23_1 = results[1]
    joined = e12_0 == e23_0 and e12_0 == s0.by_name(f"t^{k1}")
    split = (
        e12_1 != e23_1
        and e12_1 == s1.by_name(f"t^{k1}_1")
        and e23_1 == s1.by_name(f"t^{k1}_2")
    )
    return joined and split


# ---------------------------------------------------------------------------
# witness configurations


def bm_witness(m: int, n: int) -> IncidenceStructure:
    """The configuration separating independence over nested bases.

    Points a1, b, w1..w_{m-1} and lines a2, c1..c_{n-1}, z with
    incidences (a1,z), (b,z) and (w_i, a2), (w_i, c_j), (w_i, z) for all
    i, j.  The pair {a1, a2} is independent from {b, c-lines} over the
    empty set but not over the c-lines, because the w-points and z sit
    in the closure once the c-lines are in the base.
    """
    if m < 2 or n < 2:
        raise ParameterError("the configuration needs m, n >= 2")
    bld = StructureBuilder(StructParams(m, n))
    a1 = bld.add_point("a1")
    b = bld.add_point("b")
    w = [bld.add_point(f"w{i}") for i in range(1, m)]
    a2 = bld.add_line("a2")
    c = [bld.add_line(f"c{j}") for j in range(1, n)]
    z = bld.add_line("z")
    bld.add_incidence(a1, z)
    bld.add_incidence(b, z)
    for wi in w:
        bld.add_incidence(wi, a2)
        for cj in c:
            bld.add_incidence(wi, cj)
        bld.add_incidence(wi, z)
    return bld.build()


def tp2_pattern(m: int, n: int):
    """The existential pattern over the bm configuration.

    Shared variables (x1, x2) play (a1, a2); the per-instance parameters
    are (b, c1..c_{n-1}); the witnesses (w1..w_{m-1}, z) are
    existentially quantified.  A realization must induce exactly the
    configuration's diagram.  One instance is satisfiable over a closed
    base, while (m+1)(n-1) instances over a pairwise independent
    parameter sequence are jointly unsatisfiable (3 at (2,2)).
    """
    from .amalgam import ExistentialPattern

    g = bm_witness(m, n)
    shared = (g.by_name("a1"), g.by_name("a2"))
    params = (g.by_name("b"),) + tuple(g.by_name(f"c{j}") for j in range(1, n))
    witnesses = tuple(g.by_name(f"w{i}") for i in range(1, m)) + (g.by_name("z"),)
    return ExistentialPattern(g, shared, params, witnesses, exact=True)


# ---------------------------------------------------------------------------
# the non-free completion probe


def fano_plane() -> IncidenceStructure:
    """The 7-point projective plane, via the difference set {1,2,4} mod 7."""
    bld = StructureBuilder(StructParams(2, 2))
    pts = [bld.add_point(f"f{i}") for i in range(7)]
    for l in range(7):
        line = bld.add_line(f"g{l}")
        for d in (1, 2, 4):
            bld.add_incidence(pts[(l + d) % 7], line)
    return bld.build()


@dataclass(frozen=True)
class ProbeCertificate:
    """Evidence that the probe's completion is not the free one.

    On the probe side every pair from the c-triple connects through the
    one added line; on the free side the three pairs get three distinct
    connecting lines.  ``shared_line`` is an id in the probe structure;
    ``free_lines`` are ids in ``free_side``, the free workspace snapshot
    after those connections, size-matched to the probe structure plus
    its own connection round (which adds nothing).  ``iso_over_seed``
    records the failed isomorphism search over the seed elements, which
    keep their ids in both structures.
    """

    shared_line: int
    free_lines: Tuple[int, int, int]
    free_side: IncidenceStructure
    iso_over_seed: bool


@dataclass(frozen=True)
class ProbeResult:
    ok: bool
    reason: str = ""
    b0: Optional[IncidenceStructure] = None
    fano_witness: frozenset = frozenset()
    names: Dict[str, int] = field(default_factory=dict)
    working_stage: int = -1
    certificate: Optional[ProbeCertificate] = None

    def __bool__(self) -> bool:
        return self.ok


def _probe_name(bld: StructureBuilder, base: str) -> str:
    name = base
    while True:
        try:
            bld.by_name(name)
        except ValueError:
            return name
        name += "'"


def nonfree_completion_probe(
    a: IncidenceStructure,
    stage_budget: int = 8,
    element_cap: int = 100_000,
    search_budget: int = 1_000_000,
) -> ProbeResult:
    """Search for a completion of ``a`` that free completion cannot reach.

    Precondition probe: staged completion must keep strictly growing
    until some stage J contains a point of degree >= 7 (evidence that
    the completion is infinite).  A seed with nothing to complete
    reports "no deficiencies"; a staged run that stops growing reports
    "free completion converged finite"; both are decided negatives.

    Construction: inside stage J, find lines r1..r7 in id order such
    that no point lies on three of them, the pairs {r1,r2}, {r1,r3},
    {r2,r3} already meet (points a12, a13, a23), and some ri among
    r4..r6 forms an open pair with r7.  Add the forced point b on
    {ri, r7}, forced lines s12, s13, s23 connecting b to the a-points,
    forced points c1, c2, c3 on {r1,s23}, {r2,s13}, {r3,s12}, and one
    unforced line t through c1, c2, c3.  The result B0 is still
    generated by the seed, and {a12, a13, a23, b, c1, c2, c3} with
    {r1, r2, r3, s12, s13, s23, t} is a Fano subplane, which free
    completion never contains; the returned certificate pins the
    divergence down to connecting-line values on the c-triple.
    """
    if a.params != StructParams(2, 2):
        raise ParameterError("the probe runs at parameters (2, 2)")
    if not deficient_sets(a):
        return ProbeResult(False, reason="no deficiencies")

    stage = initial_stage(a)
    stages = [stage]
    working: Optional[CompletionStage] = None
    for _ in range(stage_budget):
        if len(stage.structure) > 3_000:
            raise BudgetError(
                "growth precondition unverified: stage too large to expand"
            )
        nxt = complete_step(stage)
        if len(nxt.structure) == len(stage.structure):
            return ProbeResult(False, reason="free completion converged finite")
        if len(nxt.structure) > element_cap:
            raise BudgetError("growth precondition unverified: element cap hit")
        stages.append(nxt)
        stage = nxt
        if any(stage.structure.degree(p) >= 7 for p in stage.structure.points):
            working = stage
            break
    if working is None:
        raise BudgetError(
            f"growth precondition unverified within {stage_budget} stages"
        )

    s = working.structure
    lines = sorted(s.lines)
    nbrs = {l: s.neighbors(l) for l in lines}

    chosen: list = []
    budget = [search_budget]

    def meets(l1: int, l2: int) -> bool:
        return bool(nbrs[l1] & nbrs[l2])

    def admissible(l: int) -> bool:
        pos = len(chosen)
        for p in nbrs[l]:
            if sum(1 for c in chosen if p in nbrs[c]) >= 2:
                return False  # p would lie on three chosen lines
        if pos == 1 and not meets(chosen[0], l):
            return False
        if pos == 2 and not (meets(chosen[0], l) and meets(chosen[1], l)):
            return False
        if pos == 6 and not any(not meets(chosen[i], l) for i in (3, 4, 5)):
            return False
        return True

    def search(start: int) -> bool:
        if len(chosen) == 7:
            return True
        for idx in range(start, len(lines)):
            if budget[0] <= 0:
                raise BudgetError("line-selection search exhausted its budget")
            budget[0] -= 1
            l = lines[idx]
            if not admissible(l):
                continue
            chosen.append(l)
            if search(idx + 1):
                return True
            chosen.pop()
        return False

    if not search(0):
        raise BudgetError("line-selection search exhausted")

    r = list(chosen)
    open_i = next(i for i in (3, 4, 5) if not meets(r[i], r[6]))

    def meet_point(l1: int, l2: int) -> int:
        (p,) = nbrs[l1] & nbrs[l2]
        return p

    a12 = meet_point(r[0], r[1])
    a13 = meet_point(r[0], r[2])
    a23 = meet_point(r[1], r[2])

    bld = StructureBuilder.from_structure(s)
    b_pt = bld.add_point(_probe_name(bld, "b"))
    bld.add_incidence(b_pt, r[open_i])
    bld.add_incidence(b_pt, r[6])
    s_lines = {}
    for label, anchor in (("s12", a12), ("s13", a13), ("s23", a23)):
        l = bld.add_line(_probe_name(bld, label))
        bld.add_incidence(anchor, l)
        bld.add_incidence(b_pt, l)
        s_lines[label] = l
    c_pts = []
    for i, (ri, sl) in enumerate(
        ((r[0], s_lines["s23"]), (r[1], s_lines["s13"]), (r[2], s_lines["s12"])),
        start=1,
    ):
        c = bld.add_point(_probe_name(bld, f"c{i}"))
        bld.add_incidence(c, ri)
        bld.add_incidence(c, sl)
        c_pts.append(c)
    t = bld.add_line(_probe_name(bld, "t"))
    for c in c_pts:
        bld.add_incidence(c, t)
    b0 = bld.build()

    names = {f"r{i + 1}": r[i] for i in range(7)}
    names.update(
        {
            "r_open": r[open_i],
            "a12": a12,
            "a13": a13,
            "a23": a23,
            "b": b_pt,
            "s12": s_lines["s12"],
            "s13": s_lines["s13"],
            "s23": s_lines["s23"],
            "c1": c_pts[0],
            "c2": c_pts[1],
            "c3": c_pts[2],
            "t": t,
        }
    )
    witness = frozenset(
        [a12, a13, a23, b_pt, *c_pts, r[0], r[1], r[2], *s_lines.values(), t]
    )
    if len(witness) != 14:
        raise RuntimeError("postcondition failure: witness elements collide")
    sub, _ = induced(b0, witness)
    if not isomorphic_over(sub, fano_plane(), {}):
        raise RuntimeError("postcondition failure: witness is not a Fano subplane")

    # divergence certificate: redo the forced part of the construction in a
    # free workspace over stage J (no t), where the c-triple cannot be
    # collinear, then fail the isomorphism search over the seed.
    wa = LazyCompletion(s, element_cap=element_cap)
    (b_f,) = wa.points_on((r[open_i], r[6]))
    (s12_f,) = wa.lines_through((a12, b_f))
    (s13_f,) = wa.lines_through((a13, b_f))
    (s23_f,) = wa.lines_through((a23, b_f))
    (c1_f,) = wa.points_on((r[0], s23_f))
    (c2_f,) = wa.points_on((r[1], s13_f))
    (c3_f,) = wa.points_on((r[2], s12_f))
    free_lines = []
    for pair in ((c1_f, c2_f), (c1_f, c3_f), (c2_f, c3_f)):
        (l,) = wa.lines_through(pair)
        free_lines.append(l)
    if len(set(free_lines)) != 3:
        raise RuntimeError("postcondition failure: free side merged a connection")

    wb = LazyCompletion(b0, element_cap=element_cap)
    for pair in ((c_pts[0], c_pts[1]), (c_pts[0], c_pts[2]), (c_pts[1], c_pts[2])):
        (l,) = wb.lines_through(pair)
        if l != t:
            raise RuntimeError("postcondition failure: probe side is not collinear")

    free_side = wa.snapshot()
    seed_map = {e: e for e in a.elements()}
    iso = isomorphic_over(wb.snapshot(), free_side, seed_map)

    certificate = ProbeCertificate(
        shared_line=t,
        free_lines=tuple(free_lines),
        free_side=free_side,
        iso_over_seed=bool(iso),
    )
    if certificate.iso_over_seed:
        raise RuntimeError("postcondition failure: completions are isomorphic")

    return ProbeResult(
        True,
        b0=b0,
        fano_witness=witness,
        names=names,
        working_stage=working.k,
        certificate=certificate,
    )
