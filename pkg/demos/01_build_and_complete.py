"""Build a small structure by hand and watch its free completion grow.

Four points, no two of them joined yet: every pair is "deficient", so
stage 1 spawns the six connecting lines, stage 2 gives crossing lines
their meeting points, and so on. The growth never stops for this seed;
we just cut it off after a few rounds.
"""

from kmnfree import (
    StructParams,
    StructureBuilder,
    deficient_sets,
    free_completion,
    i_closure,
    is_i_closed,
)


def main():
    b = StructureBuilder(StructParams(2, 2))
    ids = [b.add_point(f"p{i}") for i in range(1, 5)]
    s = b.build()
    print(f"seed: {len(s.points)} points, {len(s.lines)} lines")

    d = deficient_sets(s)
    print(f"deficient point pairs at stage 0: {len(d.point_sets)}")

    run = free_completion(s, 4)
    print(f"sizes by stage: {run.sizes()}")

    final = run.final
    for e, p in sorted(final.provenance.items()):
        if p.stage == 1 and final.structure.is_line(e):
            spawn = ", ".join(sorted(final.structure.name(x)
                                     for x in p.spawner))
            print(f"  stage-1 line {final.structure.name(e)!r} "
                  f"spawned by {{{spawn}}}")

    # closure inside the finite stage-2 structure
    s2 = run.stages[2].structure
    seed = frozenset(ids[:2])
    closed = i_closure(s2, seed)
    print(f"closure of {{p1, p2}} inside stage 2 has {len(closed)} elements "
          f"(closed: {is_i_closed(s2, closed)[0]})")


if __name__ == "__main__":
    main()
