"""Backtracking search for finite projective planes, with embeddings.

A plane of order q has q^2+q+1 points and as many lines, q+1 points per
line. The searcher builds them incidence by incidence with symmetry
breaking; found planes are cached. Partial structures can then be
embedded into a found plane, which decides questions the free
completion leaves open.
"""

import time

from kmnfree import (
    SearchStatus,
    StructParams,
    StructureBuilder,
    embed_in_finite_plane,
    embed_search_general,
    enumerate_projective_planes,
    find_projective_plane,
    free_completion,
)


def quadrangle():
    b = StructureBuilder(StructParams(2, 2))
    for i in range(1, 5):
        b.add_point(f"p{i}")
    return b.build()


def main():
    for q in (1, 2, 3):
        t0 = time.perf_counter()
        r = find_projective_plane(q)
        dt = time.perf_counter() - t0
        print(f"order {q}: {r.status.name:7s} "
              f"{len(r.plane.points)} points, {r.nodes} nodes, {dt:.2f}s")

    planes, exhausted, nodes = enumerate_projective_planes(2)
    print(f"order 2 labelled planes: {len(planes)} "
          f"(exhausted={exhausted}, {nodes} nodes)")

    # second completion stage of the quadrangle: 13 elements
    s13 = free_completion(quadrangle(), 2).final.structure
    e = embed_in_finite_plane(s13, 3)
    print(f"13-element stage into the order-3 plane: {e.status.name}")
    if e.status is SearchStatus.FOUND:
        p1 = s13.by_name("p1")
        print(f"  p1 -> plane element {e.mapping[p1]}")

    r = embed_search_general(quadrangle(), max_elements=60)
    print(f"general search on the bare quadrangle: {r.status.name} "
          f"({r.detail})")


if __name__ == "__main__":
    main()
