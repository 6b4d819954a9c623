"""Round-trip a structure through the JSON document format, then render
the same structure as Graphviz DOT for quick visual inspection."""

from kmnfree import StructParams, StructureBuilder, isomorphic_over, parse_structure
from kmnfree.cli import emit_structure


def triangle():
    b = StructureBuilder(StructParams(2, 2))
    xs = [b.add_point(f"x{i}") for i in (1, 2, 3)]
    es = {(i, j): b.add_line(f"e{i}{j}") for i, j in ((1, 2), (1, 3), (2, 3))}
    s = b.build()
    for (i, j), l in es.items():
        b.add_incidence(xs[i - 1], l)
        b.add_incidence(xs[j - 1], l)
    return b.build()


def main():
    s = triangle()
    text = emit_structure(s)
    print("--- JSON document ---")
    print(text)

    back = parse_structure(text)
    base = {e: back.by_name(s.name(e)) for e in s.elements()}
    print(f"parse(emit(s)) isomorphic to s: "
          f"{bool(isomorphic_over(s, back, base))}")
    print(f"byte-stable: {emit_structure(back) == text}")

    print("--- DOT ---")
    print(emit_structure(s, fmt="dot"))


if __name__ == "__main__":
    main()
