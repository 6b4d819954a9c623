"""The four independence checkers on one small configuration.

The configuration is rigged so that two sets look independent over the
empty base but a hidden interaction appears once the parameter line
enters the base. The strong relation sees it, the weak one does not,
and the forking-style relation digs it out by quantifying over small
closed supersets of the base.
"""

from kmnfree import IndepQuery, Relation, Status, bm_witness, check


def show(tag, v):
    extra = ""
    if v.status is Status.DEPENDENT and v.witness is not None:
        extra = f"  witness={v.witness}"
    if v.detail:
        extra += f"  ({v.detail})"
    print(f"{tag:28s} -> {v.status.name}{extra}")


def main():
    g = bm_witness(2, 2)
    names = {e: g.name(e) for e in g.elements()}
    print("configuration:", ", ".join(sorted(names.values())))

    a = frozenset({g.by_name("a1"), g.by_name("a2")})
    b = frozenset({g.by_name("b")})
    cbar = frozenset({g.by_name("c1")})

    show("A I B over {}", check(IndepQuery(g, a, b, frozenset(), Relation.I)))
    show("A I B over {c1}", check(IndepQuery(g, a, b, cbar, Relation.I)))
    show("A alg B over {c1}",
         check(IndepQuery(g, a, b, cbar, Relation.ALG)))
    show("A d B over {}",
         check(IndepQuery(g, a, frozenset({g.by_name("b"), g.by_name("c1")}),
                          frozenset(), Relation.DIV)))
    show("A otimes B over {}",
         check(IndepQuery(g, a, b, frozenset(), Relation.OTIMES)))


if __name__ == "__main__":
    main()
