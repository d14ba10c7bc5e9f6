"""Independent expectations the library output is compared against."""

from functools import lru_cache

from mhad.duality import Duality
from mhad.examples import (crossed_product, finite_group, groupoid_algebroid, groupoid_dual_oracle,
                           groupoid_from_group, hopf_algebroid, hopf_instances, pair_groupoid,
                           translation_spec, trivial_algebroid, yd_algebroid)
from mhad.linalg import inverse, kron

FIXTURES = ("G2", "P2", "P2(1,4)", "TRIV", "SH8", "YD4", "kS3")


@lru_cache(maxsize=None)
def fixture(name):
    if name == "G2":
        return groupoid_algebroid(groupoid_from_group(*finite_group("Z2"), name="G2"))
    if name == "P2":
        return groupoid_algebroid(pair_groupoid(2, name="P2"))
    if name == "P2(1,4)":
        return groupoid_algebroid(pair_groupoid(2, [1, 4], name="P2(1,4)"))
    if name == "TRIV":
        return trivial_algebroid()
    if name == "SH8":
        return crossed_product(translation_spec(name="SH8"))
    if name == "YD4":
        return yd_algebroid(translation_spec(coaction=True, name="YD4"))
    if name == "kS3":
        return hopf_algebroid(hopf_instances("kS3"))
    raise KeyError(name)


@lru_cache(maxsize=None)
def duality(name):
    return Duality(fixture(name))


def matrix_unit_table(m):
    """``E_ij E_kl = delta_jk E_il`` on the basis ``E_ij`` ordered row-major."""
    idx = lambda i, j: i * m + j
    return {(idx(i, j), idx(k, l)): {idx(i, l): 1}
            for i in range(m) for j in range(m) for k in range(m) for l in range(m) if j == k}


def cyclic_group_table(m):
    return {(a, b): {(a + b) % m: 1} for a in range(m) for b in range(m)}


def same_table(A, table):
    want = {k: {i: c for i, c in v.items()} for k, v in table.items()}
    got = {k: dict(v) for k, v in A.mult.items() if v}
    return got == want


def dual_against_groupoid_oracle(g):
    """Exact comparison of the generic dual with the closed-form groupoid dual.

    Returns the list of mismatching structure names (empty when all agree).
    """
    o = groupoid_dual_oracle(g)
    d = Duality(groupoid_algebroid(g))
    D, n, dc = d.algebra, d.algebra.dim, d.dual_core
    H = o.to_hat
    Hi = inverse(H)
    HH = kron(H, H)
    bad = []
    if not all(Hi(D.mul(H.columns[i], H.columns[j])) == o.mult.get((i, j), {}) for i in range(n) for j in range(n)):
        bad.append("product")
    if not all(Hi(D.apply_star(H.columns[i])) == o.star[i] for i in range(n)):
        bad.append("involution")
    for key, table in (("LT", o.lt), ("TR", o.tr)):
        T = dc.target(key)
        if not all(T.equal(dc.maps[key](HH.columns[i * n + j]), HH(table.get((i, j), {})))
                   for i in range(n) for j in range(n)):
            bad.append(key)
    if not all(d.dual.psiB(H.columns[i]) == o.right_integral[i] for i in range(n)):
        bad.append("right integral")
    return bad
