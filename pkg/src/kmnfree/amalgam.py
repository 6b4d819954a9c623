"""Amalgamation machinery for K_{m,n}-free structures.

Four constructions live here:

* safe diagrams: finite K-free diagrams over base variables x̄ and extension
  variables ȳ where each extension point touches at most n-1 base lines and
  each extension line at most m-1 base points.  Realizing such a diagram over
  any anchor tuple matching its base part keeps the structure K-free.
* free amalgamation: disjoint union of two structures over a common induced
  base, no new incidences, verified K-free.
* independence gluing: the three-way amalgam X_abc of pairwise joins X_ab,
  X_ac, X_bc over closed sides X_a, X_b, X_c and a common base D.  All
  hypotheses (shape, closedness, independence) are checked by name and any
  failure is reported as the specific hypothesis that broke.
* a consistency oracle for existential incidence patterns: given a base, a
  diagram with shared variables, per-instance parameters and per-instance
  witness variables, decide whether some identification of the variables
  (with each other, or with elements of the base's canonical closure) yields
  a K-free realization of every instance.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, Optional, Sequence

from .closure import is_i_closed
from .completion import LazyCompletion
from .core import (
    BudgetError,
    FreenessViolationError,
    IncidenceStructure,
    ParameterError,
    PreconditionError,
    Sort,
    StructureBuilder,
    induced,
    is_kmn_free,
)


# ---------------------------------------------------------------------------
# safe diagrams


@dataclass(frozen=True)
class SafeDiagram:
    """A diagram over base variables ``base_vars`` and extension variables
    ``ext_vars`` (element ids of ``structure``, which they must partition).
    Variable order matters: anchors are matched to base_vars by position."""

    structure: IncidenceStructure
    base_vars: tuple
    ext_vars: tuple

    def __post_init__(self):
        seen = list(self.base_vars) + list(self.ext_vars)
        if len(set(seen)) != len(seen):
            raise ParameterError("diagram variables must be distinct")
        if set(seen) != set(self.structure.elements()):
            raise ParameterError(
                "base_vars and ext_vars must partition the diagram elements"
            )


@dataclass(frozen=True)
class SafetyReport:
    ok: bool
    condition: Optional[int]  # 1 = freeness, 2 = point degree, 3 = line degree
    detail: str

    def __bool__(self) -> bool:
        return self.ok


def validate_safe_diagram(d: SafeDiagram) -> SafetyReport:
    """Check the three safety conditions; reports the first violated one."""
    s = d.structure
    m, n = s.params.m, s.params.n
    ok, witness = is_kmn_free(s)
    if not ok:
        return SafetyReport(False, 1, f"diagram contains a forbidden biclique: {witness}")
    base = set(d.base_vars)
    for y in d.ext_vars:
        into_base = len(s.neighbors(y) & base)
        if s.is_point(y) and into_base > n - 1:
            return SafetyReport(
                False,
                2,
                f"extension point {s.name(y)!r} meets {into_base} base lines, "
                f"allowed at most {n - 1}",
            )
        if s.is_line(y) and into_base > m - 1:
            return SafetyReport(
                False,
                3,
                f"extension line {s.name(y)!r} meets {into_base} base points, "
                f"allowed at most {m - 1}",
            )
    return SafetyReport(True, None, "safe")


@dataclass(frozen=True)
class Extension:
    structure: IncidenceStructure
    ext_images: dict  # diagram ext var id -> new element id


def extension_witness(
    s: IncidenceStructure, anchor: Sequence[int], d: SafeDiagram
) -> Extension:
    """Extend ``s`` by fresh elements realizing the extension part of ``d``
    over ``anchor``.

    The anchor must realize the base part of the diagram exactly: same sorts,
    distinct elements, and incidences among anchor elements agreeing with the
    diagram's base incidences in both directions.  Only incidences touching a
    fresh element are added, so K-freeness of the result follows from the
    diagram's own freeness; it is re-verified defensively.
    """
    report = validate_safe_diagram(d)
    if not report:
        raise PreconditionError(f"diagram is not safe: {report.detail}")
    ok, witness = is_kmn_free(s)
    if not ok:
        raise PreconditionError(f"host structure is not K-free: {witness}")
    anchor = tuple(anchor)
    if len(anchor) != len(d.base_vars):
        raise PreconditionError(
            f"anchor has {len(anchor)} elements, diagram has {len(d.base_vars)} base variables"
        )
    if len(set(anchor)) != len(anchor):
        raise PreconditionError("anchor elements must be distinct")
    dg = d.structure
    for v, a in zip(d.base_vars, anchor):
        if a not in s.elements():
            raise ParameterError(f"anchor element {a} is not in the structure")
        if dg.sort(v) is not s.sort(a):
            raise PreconditionError(
                f"anchor element {s.name(a)!r} has the wrong sort for variable {dg.name(v)!r}"
            )
    pos = {v: a for v, a in zip(d.base_vars, anchor)}
    for u, v in itertools.combinations(d.base_vars, 2):
        du, dv = (u, v) if dg.is_point(u) else (v, u)
        if dg.is_point(du) and dg.is_line(dv):
            want = dg.incident(du, dv)
            have = s.incident(pos[du], pos[dv])
            if want != have:
                raise PreconditionError(
                    f"anchor does not realize the base diagram: incidence "
                    f"({dg.name(du)!r}, {dg.name(dv)!r}) is {want} in the diagram "
                    f"but {have} on the anchor"
                )

    b = StructureBuilder.from_structure(s)
    images = {}
    for y in d.ext_vars:
        images[y] = b.add_point() if dg.is_point(y) else b.add_line()
    full = dict(pos)
    full.update(images)
    for y in d.ext_vars:
        for nb in sorted(dg.neighbors(y)):
            if nb in images and dg.is_line(y):
                continue  # handled from the point side
            p, l = (y, nb) if dg.is_point(y) else (nb, y)
            b.add_incidence(full[p], full[l], guard=False)
    out = b.build()
    ok, witness = is_kmn_free(out)
    if not ok:
        raise FreenessViolationError(witness, "extension")
    return Extension(out, images)


# ---------------------------------------------------------------------------
# free amalgamation


def _check_induced_embedding(
    small: IncidenceStructure,
    big: IncidenceStructure,
    mapping: Dict[int, int],
    label: str,
) -> None:
    if set(mapping) != set(small.elements()):
        raise PreconditionError(f"{label}: embedding does not cover the base")
    if len(set(mapping.values())) != len(mapping):
        raise PreconditionError(f"{label}: embedding is not injective")
    for e, im in mapping.items():
        if im not in big.elements():
            raise PreconditionError(f"{label}: image {im} is not in the target")
        if small.sort(e) is not big.sort(im):
            raise PreconditionError(f"{label}: embedding breaks sorts at {small.name(e)!r}")
    for p in small.points:
        for l in small.lines:
            if small.incident(p, l) != big.incident(mapping[p], mapping[l]):
                raise PreconditionError(
                    f"{label}: embedding is not induced at "
                    f"({small.name(p)!r}, {small.name(l)!r})"
                )


@dataclass(frozen=True)
class Amalgam:
    structure: IncidenceStructure
    left_map: dict  # left structure id -> amalgam id
    right_map: dict  # right structure id -> amalgam id


def _fresh_name(taken: set, want: str) -> str:
    name = want
    while name in taken:
        name += "'"
    return name


def free_amalgam(
    base: IncidenceStructure,
    left: IncidenceStructure,
    right: IncidenceStructure,
    left_embedding: Dict[int, int],
    right_embedding: Dict[int, int],
) -> Amalgam:
    """Disjoint union of ``left`` and ``right`` over ``base``.

    No incidences are added beyond those of the two sides.  The result is
    returned only if K-free; a violation raises FreenessViolationError with
    its witness (this can only happen when the base is not complete).
    Name clashes between the two sides outside the base are resolved by
    priming the right-hand name.
    """
    if not (base.params == left.params == right.params):
        raise ParameterError("all three structures must share parameters")
    _check_induced_embedding(base, left, left_embedding, "base into left")
    _check_induced_embedding(base, right, right_embedding, "base into right")

    b = StructureBuilder(base.params)
    left_map = {}
    taken = set()
    for e in left.elements():
        nm = _fresh_name(taken, left.name(e))
        taken.add(nm)
        left_map[e] = b.add_point(nm) if left.is_point(e) else b.add_line(nm)
    right_map = {}
    shared = {right_embedding[a]: left_map[left_embedding[a]] for a in base.elements()}
    for e in right.elements():
        if e in shared:
            right_map[e] = shared[e]
            continue
        nm = _fresh_name(taken, right.name(e))
        taken.add(nm)
        right_map[e] = b.add_point(nm) if right.is_point(e) else b.add_line(nm)
    for p, l in left.incidences():
        b.add_incidence(left_map[p], left_map[l], guard=False)
    for p, l in right.incidences():
        b.add_incidence(right_map[p], right_map[l], guard=False)
    out = b.build()
    ok, witness = is_kmn_free(out)
    if not ok:
        raise FreenessViolationError(witness, "free amalgam")
    return Amalgam(out, left_map, right_map)


# ---------------------------------------------------------------------------
# three-way independence gluing


class GlueHypothesisError(PreconditionError):
    """A named hypothesis of the gluing operation failed."""

    def __init__(self, hypothesis: str, detail: str):
        super().__init__(f"hypothesis {hypothesis} fails: {detail}")
        self.hypothesis = hypothesis
        self.detail = detail


@dataclass(frozen=True)
class GlueProblem:
    """Inputs for the three-way glue, identified by element names.

    ``d_names`` is the common base; x_a, x_b, x_c are the closed sides; x_ab,
    x_ac, x_bc the pairwise joins.  A name means the same element wherever it
    appears.
    """

    d_names: frozenset
    x_a: IncidenceStructure
    x_b: IncidenceStructure
    x_c: IncidenceStructure
    x_ab: IncidenceStructure
    x_ac: IncidenceStructure
    x_bc: IncidenceStructure


@dataclass(frozen=True)
class Glued:
    structure: IncidenceStructure
    ids: dict  # name -> element id in the glued structure


def _names(s: IncidenceStructure) -> frozenset:
    return frozenset(s.name(e) for e in s.elements())


def _ids_for(s: IncidenceStructure, names: Iterable[str]) -> frozenset:
    return frozenset(s.by_name(nm) for nm in names)


def _check_join_embedding(part: IncidenceStructure, join: IncidenceStructure, hyp: str):
    mapping = {}
    for e in part.elements():
        nm = part.name(e)
        if not join.has_name(nm):
            raise GlueHypothesisError(hyp, f"element {nm!r} missing from the join")
        mapping[e] = join.by_name(nm)
    try:
        _check_induced_embedding(part, join, mapping, hyp)
    except PreconditionError as exc:
        raise GlueHypothesisError(hyp, str(exc)) from None


def independence_glue(
    g: GlueProblem, stage_budget: int = 8, element_cap: int = 100_000
) -> Glued:
    """Glue the three joins into X_abc, verifying every hypothesis.

    Hypotheses checked, in order, each raising GlueHypothesisError with its
    name on failure: sort coherence across all six structures; D contained in
    each side; pairwise side intersections equal to D; join supports and
    pairwise join intersections; induced embeddings of sides into joins; D
    I-closed in each join; a I-indep b over D in X_ab; a I-indep c over D in
    X_ac; b alg-indep c over D in X_bc.  The glued union adds no incidences
    and is verified K-free unconditionally.
    """
    from .indep import IndepQuery, Relation, Status, check

    structs = {
        "X_a": g.x_a,
        "X_b": g.x_b,
        "X_c": g.x_c,
        "X_ab": g.x_ab,
        "X_ac": g.x_ac,
        "X_bc": g.x_bc,
    }
    params = g.x_a.params
    for label, s in structs.items():
        if s.params != params:
            raise ParameterError(f"{label} has mismatched parameters")

    sorts: Dict[str, Sort] = {}
    for label, s in structs.items():
        for e in s.elements():
            nm = s.name(e)
            if nm in sorts and sorts[nm] is not s.sort(e):
                raise GlueHypothesisError(
                    "sorts:consistent",
                    f"name {nm!r} is a point in one structure and a line in {label}",
                )
            sorts.setdefault(nm, s.sort(e))

    na, nb, nc = _names(g.x_a), _names(g.x_b), _names(g.x_c)
    for label, names in (("X_a", na), ("X_b", nb), ("X_c", nc)):
        if not g.d_names <= names:
            raise GlueHypothesisError(
                f"base:D<={label}", f"missing {sorted(g.d_names - names)}"
            )
    for (l1, n1), (l2, n2) in itertools.combinations(
        (("X_a", na), ("X_b", nb), ("X_c", nc)), 2
    ):
        if n1 & n2 != g.d_names:
            raise GlueHypothesisError(
                f"intersection:{l1}^{l2}=D",
                f"intersection is {sorted(n1 & n2)}, expected {sorted(g.d_names)}",
            )

    nab, nac, nbc = _names(g.x_ab), _names(g.x_ac), _names(g.x_bc)
    join_pairs = (
        ("X_ab", nab, "X_ac", nac, "X_a", na),
        ("X_ab", nab, "X_bc", nbc, "X_b", nb),
        ("X_ac", nac, "X_bc", nbc, "X_c", nc),
    )
    for l1, n1, l2, n2, lp, np_ in join_pairs:
        if n1 & n2 != np_:
            raise GlueHypothesisError(
                f"intersection:{l1}^{l2}={lp}",
                f"intersection is {sorted(n1 & n2)}, expected {sorted(np_)}",
            )

    _check_join_embedding(g.x_a, g.x_ab, "embedding:X_a<=X_ab")
    _check_join_embedding(g.x_b, g.x_ab, "embedding:X_b<=X_ab")
    _check_join_embedding(g.x_a, g.x_ac, "embedding:X_a<=X_ac")
    _check_join_embedding(g.x_c, g.x_ac, "embedding:X_c<=X_ac")
    _check_join_embedding(g.x_b, g.x_bc, "embedding:X_b<=X_bc")
    _check_join_embedding(g.x_c, g.x_bc, "embedding:X_c<=X_bc")

    for label, join in (("X_ab", g.x_ab), ("X_ac", g.x_ac), ("X_bc", g.x_bc)):
        closed, violator = is_i_closed(join, _ids_for(join, g.d_names))
        if not closed:
            raise GlueHypothesisError(
                f"closed:D in {label}",
                f"forced element {join.name(violator)!r} missing from D",
            )

    indep_checks = (
        ("indep:a_I_b", g.x_ab, na, nb, Relation.I),
        ("indep:a_I_c", g.x_ac, na, nc, Relation.I),
        ("indep:b_alg_c", g.x_bc, nb, nc, Relation.ALG),
    )
    for hyp, join, n1, n2, rel in indep_checks:
        q = IndepQuery(
            ambient=join,
            a=_ids_for(join, n1),
            b=_ids_for(join, n2),
            c=_ids_for(join, g.d_names),
            relation=rel,
            stage_budget=stage_budget,
            element_cap=element_cap,
        )
        verdict = check(q)
        if verdict.status is Status.DEPENDENT:
            raise GlueHypothesisError(hyp, f"dependent, witness {verdict.witness}")
        if verdict.status is Status.UNKNOWN:
            raise BudgetError(
                f"could not verify hypothesis {hyp} within budget: {verdict.detail}"
            )

    b = StructureBuilder(params)
    ids: Dict[str, int] = {}
    for nm in sorted(sorts):
        ids[nm] = b.add_point(nm) if sorts[nm] is Sort.POINT else b.add_line(nm)
    for join in (g.x_ab, g.x_ac, g.x_bc):
        for p, l in join.incidences():
            b.add_incidence(ids[join.name(p)], ids[join.name(l)], guard=False)
    out = b.build()
    ok, witness = is_kmn_free(out)
    if not ok:
        raise FreenessViolationError(witness, "glued structure")
    return Glued(out, ids)


# ---------------------------------------------------------------------------
# existential-pattern consistency


@dataclass(frozen=True)
class ExistentialPattern:
    """A diagram over three kinds of variables.

    ``shared_vars`` are free variables common to all instances; ``param_vars``
    are slots filled per instance by base elements; ``witness_vars`` are
    existential variables instantiated freshly per instance.  ``exact`` means
    each instance must realize the diagram as an induced substructure
    (incidences among its images exactly those of the diagram, all images
    distinct); otherwise only the diagram's incidences are required.
    """

    diagram: IncidenceStructure
    shared_vars: tuple
    param_vars: tuple
    witness_vars: tuple
    exact: bool = True

    def __post_init__(self):
        seen = list(self.shared_vars) + list(self.param_vars) + list(self.witness_vars)
        if len(set(seen)) != len(seen):
            raise ParameterError("pattern variables must be distinct")
        if set(seen) != set(self.diagram.elements()):
            raise ParameterError("variables must partition the diagram elements")


@dataclass(frozen=True)
class QuotientAssignment:
    """How variable occurrences are identified in a candidate realization.

    ``blocks`` partitions the occurrence pool (shared variables and every
    per-instance witness copy); all occurrences in a block become one
    element.  ``targets[i]`` is the closure element the i-th block lands on,
    or None for a fresh element.  Parameters are never part of the pool.
    """

    blocks: tuple  # tuple of tuples of occurrence tokens
    targets: tuple  # parallel: Optional[int] closure ids

    @property
    def merges(self) -> int:
        return sum(len(blk) - 1 for blk in self.blocks)


class PatternStatus(Enum):
    CONSISTENT = "CONSISTENT"
    INCONSISTENT = "INCONSISTENT"
    UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class PatternVerdict:
    status: PatternStatus
    quotient: Optional[QuotientAssignment]
    stage: int
    converged: bool
    candidates: int
    detail: str


def _set_partitions(items: Sequence) -> list:
    """All partitions of items into nonempty blocks, canonical order."""
    items = list(items)
    if not items:
        return [()]
    out = []

    def rec(idx, blocks):
        if idx == len(items):
            out.append(tuple(tuple(blk) for blk in blocks))
            return
        x = items[idx]
        for blk in blocks:
            blk.append(x)
            rec(idx + 1, blocks)
            blk.pop()
        blocks.append([x])
        rec(idx + 1, blocks)
        blocks.pop()

    rec(0, [])
    return out


def pattern_consistent(
    base: IncidenceStructure,
    pattern: ExistentialPattern,
    instances: Sequence[Sequence[int]],
    stage_budget: int = 1,
    candidate_budget: int = 1_000_000,
    element_cap: int = 100_000,
) -> PatternVerdict:
    """Decide joint satisfiability of the pattern instances over the base.

    The base is identified with its canonical completion; candidates extend
    the stage-``stage_budget`` closure A_T of the base elements by the quotient
    image of the variable pool.  A candidate is refuted if it demands an
    incidence between two closure elements that the closure lacks, if some
    instance's induced image misses the diagram (exact mode), or if the
    result is not K-free; refutations are sound at any stage.  A surviving
    candidate certifies CONSISTENT only when the closure converged (then the
    K-free extension of the closed base embeds into the monster over it);
    otherwise the verdict is UNKNOWN.  INCONSISTENT means every assignment
    was refuted, which rules out monster realizations outright: any
    realization would induce an assignment in the searched space (variables
    landing on closure elements use them as targets, the rest stay fresh) and
    its candidate would have survived.
    """
    dg = pattern.diagram
    if dg.params != base.params:
        raise ParameterError("pattern diagram and base must share parameters")
    for inst in instances:
        if len(inst) != len(pattern.param_vars):
            raise ParameterError(
                f"instance {tuple(inst)} does not match the parameter arity "
                f"{len(pattern.param_vars)}"
            )
        for v, e in zip(pattern.param_vars, inst):
            if e not in base.elements():
                raise ParameterError(f"parameter {e} is not a base element")
            if dg.sort(v) is not base.sort(e):
                raise ParameterError(
                    f"parameter {base.name(e)!r} has the wrong sort for {dg.name(v)!r}"
                )

    work = LazyCompletion(base, element_cap=element_cap)
    run = work.closure(base.elements(), stage_budget=stage_budget)
    a_t = run.closure_set
    ambient = work.snapshot()
    stage = len(run.stages) - 1

    if not instances:
        return PatternVerdict(
            PatternStatus.CONSISTENT,
            QuotientAssignment((), ()),
            stage,
            run.converged,
            0,
            "no instances",
        )

    # occurrence pool: shared variables once, witness variables per instance
    pool = [("s", v) for v in pattern.shared_vars]
    for j in range(len(instances)):
        pool += [("w", j, v) for v in pattern.witness_vars]
    token_sort = {}
    for tok in pool:
        token_sort[tok] = dg.sort(tok[1] if tok[0] == "s" else tok[2])
    pts = [t for t in pool if token_sort[t] is Sort.POINT]
    lns = [t for t in pool if token_sort[t] is Sort.LINE]

    existing_pts = sorted(e for e in a_t if ambient.is_point(e))
    existing_lns = sorted(e for e in a_t if ambient.is_line(e))

    # required incidences per instance as (point token-or-id, line token-or-id)
    def resolve_token(j, v):
        if v in pattern.shared_vars:
            return ("s", v)
        if v in pattern.witness_vars:
            return ("w", j, v)
        k = pattern.param_vars.index(v)
        return instances[j][k]

    inst_elems = []  # per instance: list of token-or-id for every diagram var
    required = []  # (ptok, ltok) pairs across all instances, deduplicated
    seen_req = set()
    for j in range(len(instances)):
        elems = [resolve_token(j, v) for v in sorted(dg.elements())]
        inst_elems.append(elems)
        for p, l in dg.incidences():
            pair = (resolve_token(j, p), resolve_token(j, l))
            if pair not in seen_req:
                seen_req.add(pair)
                required.append(pair)

    part_product = []
    for pp in _set_partitions(pts):
        for lp in _set_partitions(lns):
            blocks = pp + lp
            merges = sum(len(b) - 1 for b in blocks)
            part_product.append((merges, blocks))
    part_product.sort(key=lambda t: (t[0], t[1]))

    ground, ground_map = induced(ambient, a_t)
    candidates = 0
    survivor = None

    def evaluate(blocks, chosen) -> bool:
        """True if the candidate for this assignment survives every check."""
        block_of = {}
        for i, blk in enumerate(blocks):
            for tok in blk:
                block_of[tok] = i

        def image_key(t):
            # token -> its target id or a fresh-block marker; base id -> itself
            if isinstance(t, tuple):
                tgt = chosen[block_of[t]]
                return tgt if tgt is not None else ("fresh", block_of[t])
            return t

        for ptok, ltok in required:
            pe, le = image_key(ptok), image_key(ltok)
            if isinstance(pe, int) and isinstance(le, int):
                if not ambient.incident(pe, le):
                    return False
        for elems in inst_elems:
            keys = [image_key(t) for t in elems]
            if len(set(keys)) != len(keys):
                return False

        b = StructureBuilder.from_structure(ground)
        placed = {}
        for i, (blk, tgt) in enumerate(zip(blocks, chosen)):
            if tgt is not None:
                eid = ground_map[tgt]
            else:
                eid = (
                    b.add_point()
                    if token_sort[blk[0]] is Sort.POINT
                    else b.add_line()
                )
            for tok in blk:
                placed[tok] = eid

        def image(t):
            return placed[t] if isinstance(t, tuple) else ground_map[t]

        for ptok, ltok in required:
            b.add_incidence(image(ptok), image(ltok), guard=False)
        cand = b.build()

        ok, _ = is_kmn_free(cand)
        if not ok:
            return False
        if pattern.exact:
            dg_elems = sorted(dg.elements())
            for elems in inst_elems:
                mapped = dict(zip(dg_elems, (image(t) for t in elems)))
                for p in dg.points:
                    for l in dg.lines:
                        if dg.incident(p, l) != cand.incident(mapped[p], mapped[l]):
                            return False
        return True

    def target_options(blk):
        pool_e = existing_pts if token_sort[blk[0]] is Sort.POINT else existing_lns
        return [None] + pool_e

    for merges, blocks in part_product:
        # injective-per-sort target choices, fresh (None) first
        def rec(i, chosen, used):
            nonlocal candidates, survivor
            if survivor is not None:
                return
            if i == len(blocks):
                candidates += 1
                if candidates > candidate_budget:
                    raise BudgetError("candidate budget exhausted")
                if evaluate(blocks, chosen):
                    survivor = QuotientAssignment(tuple(blocks), tuple(chosen))
                return
            for tgt in target_options(blocks[i]):
                if tgt is not None and tgt in used:
                    continue
                rec(i + 1, chosen + [tgt], used | ({tgt} if tgt is not None else set()))

        try:
            rec(0, [], set())
        except BudgetError:
            return PatternVerdict(
                PatternStatus.UNKNOWN,
                None,
                stage,
                run.converged,
                candidates,
                f"candidate budget {candidate_budget} exhausted",
            )
        if survivor is not None:
            break

    if survivor is not None:
        if run.converged:
            return PatternVerdict(
                PatternStatus.CONSISTENT,
                survivor,
                stage,
                True,
                candidates,
                "surviving quotient over the converged closure",
            )
        return PatternVerdict(
            PatternStatus.UNKNOWN,
            survivor,
            stage,
            False,
            candidates,
            "a quotient survives but the base closure did not converge "
            f"within {stage_budget} stages",
        )
    return PatternVerdict(
        PatternStatus.INCONSISTENT,
        None,
        stage,
        run.converged,
        candidates,
        f"all {candidates} assignments refuted at closure stage {stage}",
    )
