"""Algebraic closure relative to a fixed ambient structure.

The closure operator adds, at each stage, every ambient line incident with m
distinct points already collected and every ambient point incident with n
distinct lines already collected.  Nothing is ever created: these operators
see exactly the elements the ambient structure has.  In a complete ambient
structure the fixpoint is the model-theoretic algebraic closure of the seed;
in a partial one it is the closure relative to that structure.

For closures in the canonical completion of a partial structure (where
forced elements may not exist yet and must be spawned), use
``completion.LazyCompletion.closure`` instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional

from .core import (
    IncidenceStructure,
    ParameterError,
    Sort,
    colex_combinations,
    common_neighbors,
)


class Ternary(Enum):
    YES = "YES"
    NO = "NO"
    UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class ClosureStages:
    stages: tuple  # frozensets of element ids, stages[0] == seed
    converged: bool

    @property
    def closure_set(self) -> frozenset:
        return self.stages[-1]

    def sizes(self) -> list:
        return [len(s) for s in self.stages]


def _validate_subset(s: IncidenceStructure, elems: Iterable[int]) -> frozenset:
    out = frozenset(elems)
    for e in out:
        if e not in s.elements():
            raise ParameterError(f"element {e} is not in the structure")
    return out


def _step(s: IncidenceStructure, cur: frozenset) -> frozenset:
    m, n = s.params.m, s.params.n
    pts = sorted(e for e in cur if s.is_point(e))
    lns = sorted(e for e in cur if s.is_line(e))
    nxt = set(cur)
    for sigma in colex_combinations(pts, m):
        nxt |= common_neighbors(s, sigma)
    for tau in colex_combinations(lns, n):
        nxt |= common_neighbors(s, tau)
    return frozenset(nxt)


def closure_stages(
    s: IncidenceStructure, seed: Iterable[int], budget: int = 8
) -> ClosureStages:
    """Stages of the closure of ``seed`` inside ``s``.

    The sequence is monotone and bounded by the ambient element count, so
    with a generous budget it always converges; a small budget may truncate
    the record (converged=False) without affecting recorded stages.
    """
    if budget < 0:
        raise ParameterError("budget must be >= 0")
    cur = _validate_subset(s, seed)
    stages = [cur]
    for _ in range(budget):
        nxt = _step(s, cur)
        if nxt == cur:
            return ClosureStages(tuple(stages), True)
        cur = nxt
        stages.append(cur)
    return ClosureStages(tuple(stages), _step(s, cur) == cur)


def i_closure(s: IncidenceStructure, seed: Iterable[int]) -> frozenset:
    """The closure of ``seed`` in ``s``, run to its fixpoint."""
    cur = _validate_subset(s, seed)
    while True:
        nxt = _step(s, cur)
        if nxt == cur:
            return cur
        cur = nxt


def is_i_closed(s: IncidenceStructure, subset: Iterable[int]):
    """Is ``subset`` closed in ``s``?  Returns (bool, violator).

    The violator is the least-id ambient element forced by some m-set of
    points (or n-set of lines) of the subset but missing from it.
    """
    m, n = s.params.m, s.params.n
    sub = _validate_subset(s, subset)
    pts = sorted(e for e in sub if s.is_point(e))
    lns = sorted(e for e in sub if s.is_line(e))
    missing = set()
    for sigma in colex_combinations(pts, m):
        missing |= common_neighbors(s, sigma) - sub
    for tau in colex_combinations(lns, n):
        missing |= common_neighbors(s, tau) - sub
    if missing:
        return False, min(missing)
    return True, None


def generates(
    s: IncidenceStructure,
    seed: Iterable[int],
    target: Iterable[int],
    budget: Optional[int] = None,
):
    """Does the closure of ``seed`` in ``s`` contain ``target``?

    Returns (Ternary, detail).  YES as soon as every target element has been
    collected (sound at any stage); NO once the closure converges without
    them (detail = the missing elements); UNKNOWN only when a finite budget
    truncates the run first.
    """
    tgt = _validate_subset(s, target)
    cur = _validate_subset(s, seed)
    steps = 0
    while True:
        if tgt <= cur:
            return Ternary.YES, frozenset()
        nxt = _step(s, cur)
        if nxt == cur:
            return Ternary.NO, tgt - cur
        if budget is not None and steps >= budget:
            return Ternary.UNKNOWN, tgt - cur
        cur = nxt
        steps += 1
