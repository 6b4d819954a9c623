"""Shared fixtures and small builders used across the suite."""

import random

import pytest

from kmnfree import (
    StructParams,
    StructureBuilder,
    free_completion,
    i_closure,
)


def build(m, n, points=(), lines=(), incidences=(), guard=True):
    """Construct a structure from name lists; incidences are name pairs."""
    bld = StructureBuilder(StructParams(m, n))
    for nm in points:
        bld.add_point(nm)
    for nm in lines:
        bld.add_line(nm)
    for pn, ln in incidences:
        bld.add_incidence(bld.by_name(pn), bld.by_name(ln), guard=guard)
    return bld.build()


def quadrangle_structure():
    return build(2, 2, points=("p1", "p2", "p3", "p4"))


@pytest.fixture
def quadrangle():
    return quadrangle_structure()


@pytest.fixture
def triangle_points():
    # three points, no lines: free completion converges (one stage of
    # connecting lines, then nothing is deficient)
    return build(2, 2, points=("p1", "p2", "p3"))


@pytest.fixture(scope="session")
def quad_run():
    """Stages 0..5 of the quadrangle completion (46 elements at stage 5)."""
    return free_completion(quadrangle_structure(), stages=5)


def random_free_structure(rng: random.Random, m=2, n=2, max_elements=10,
                          incidence_tries=None):
    """A random K_{m,n}-free structure built by guarded incidence adds.

    Rejected adds (ones that would complete a forbidden grid) are simply
    skipped, so the result is free by construction.
    """
    from kmnfree import FreenessViolationError

    bld = StructureBuilder(StructParams(m, n))
    total = rng.randint(1, max_elements)
    n_points = rng.randint(0, total)
    pts = [bld.add_point(f"p{i}") for i in range(n_points)]
    lns = [bld.add_line(f"l{i}") for i in range(total - n_points)]
    if incidence_tries is None:
        incidence_tries = rng.randint(0, 2 * total)
    for _ in range(incidence_tries):
        if not pts or not lns:
            break
        p, l = rng.choice(pts), rng.choice(lns)
        try:
            bld.add_incidence(p, l)
        except FreenessViolationError:
            pass
    return bld.build()


def random_closed_subset(rng: random.Random, s):
    """The closure of a random subset of s, inside s."""
    elems = sorted(s.elements())
    k = rng.randint(0, len(elems))
    return i_closure(s, rng.sample(elems, k))
