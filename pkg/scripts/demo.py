"""Print the dual tables of the smallest fixtures and the model comparisons."""

from mhad.duality import Duality, biduality_report
from mhad.examples import (crossed_product, crossed_product_model, finite_group, groupoid_algebroid,
                           groupoid_from_group, pair_groupoid, translation_spec, yd_algebroid, yd_model,
                           model_report)
from mhad.linalg import fmt


def table(A):
    n = A.dim
    width = max(len(l) for l in A.labels) + 2
    print(" " * width + "".join(l.ljust(width) for l in A.labels))
    for i in range(n):
        cells = []
        for j in range(n):
            v = A.mult.get((i, j), {})
            cells.append(" + ".join(f"{fmt(c)}*{A.labels[k]}" if c != 1 else A.labels[k] for k, c in sorted(v.items())) or "0")
        print(A.labels[i].ljust(width) + "".join(c.ljust(width) for c in cells))


def main():
    for g in (groupoid_from_group(*finite_group("Z2"), name="G2"), pair_groupoid(2, name="P2"),
              pair_groupoid(2, [1, 4], name="P2(1,4)")):
        d = Duality(groupoid_algebroid(g))
        print(f"\ndual of {g.name} in the basis e_a . phi")
        table(d.algebra)
        print("biduality:", "PASS" if biduality_report(d)[0].ok else "FAIL")
    for build, model, name in ((crossed_product, crossed_product_model, "SH8"), (yd_algebroid, yd_model, "YD4")):
        s = translation_spec(coaction=True, name=name)
        mm = build(s)
        d = Duality(mm)
        print()
        print(model_report(d, model(s, mm, d)))


if __name__ == "__main__":
    main()
