"""Free amalgamation and three-way independence gluing.

The free amalgam pastes two structures along a common base without
inventing any new incidences. The glue step goes further: given three
pairwise amalgams that satisfy a list of compatibility hypotheses, it
produces one structure containing all three, and names the first
hypothesis that fails when they don't.
"""

from kmnfree import (
    GlueHypothesisError,
    GlueProblem,
    StructParams,
    StructureBuilder,
    free_amalgam,
    independence_glue,
    is_kmn_free,
)


def named(s):
    return {e: s.name(e) for e in sorted(s.elements())}


def build_points(*names):
    b = StructureBuilder(StructParams(2, 2))
    for n in names:
        b.add_point(n)
    return b.build()


def main():
    base = build_points("d")
    left = build_points("d", "a1", "a2")
    right = build_points("d", "b1")

    lmap = {base.by_name("d"): left.by_name("d")}
    rmap = {base.by_name("d"): right.by_name("d")}
    am = free_amalgam(base, left, right, lmap, rmap)
    print("amalgam elements:", sorted(named(am.structure).values()))
    print("still free:", is_kmn_free(am.structure)[0])

    def side(*names):
        return build_points("d", *names)

    def join(x, y):
        mx = {base.by_name("d"): x.by_name("d")}
        my = {base.by_name("d"): y.by_name("d")}
        return free_amalgam(base, x, y, mx, my).structure

    xa, xb, xc = side("a1"), side("b1"), side("c1")
    g = GlueProblem(frozenset({"d"}), xa, xb, xc,
                    join(xa, xb), join(xa, xc), join(xb, xc))
    glued = independence_glue(g)
    print("glued elements:", sorted(glued.ids))
    print("glued structure free:", is_kmn_free(glued.structure)[0])

    # sabotage: drop the base point from one side
    broken = build_points("b1")
    bad = GlueProblem(frozenset({"d"}), xa, broken, xc,
                      g.x_ab, g.x_ac, g.x_bc)
    try:
        independence_glue(bad)
    except GlueHypothesisError as exc:
        print(f"rejected, failing hypothesis: {exc.hypothesis}")
        print(f"  detail: {exc.detail}")


if __name__ == "__main__":
    main()
