import itertools

import pytest

from mhad.examples import crossed_product_model, hopf_algebroid, hopf_instances, translation_spec
from mhad.linalg import ONE, LinMap
from mhad.morphisms import (MorphismSpec, base_report, check_antipode_preserved, check_morphism_into_dual,
                            compose, delta_report, dual_morphism, extension_report, validate_morphism)

from oracles import duality, fixture


@pytest.mark.parametrize("name", ["P2", "kS3", "G2"])
def test_extended_comultiplications(name):
    assert extension_report(fixture(name).core).ok


def identity(name):
    mm = fixture(name)
    return MorphismSpec.from_elements(mm.core, mm.core, LinMap.identity(mm.n), f"id {name}")


@pytest.mark.parametrize("name", ["P2", "kS3", "SH8"])
def test_identity(name):
    spec = identity(name)
    assert validate_morphism(spec).ok
    assert check_antipode_preserved(spec).ok


def test_hopf_into_crossed_product_composed_with_identity():
    H = hopf_algebroid(hopf_instances("kZ2"))
    mm = fixture("SH8")
    f = MorphismSpec.from_elements(H.core, mm.core, mm.embed_H, "H->SH8")
    g = compose(f, identity("SH8"))
    assert validate_morphism(g).ok
    assert all(g.element({k: ONE}) == f.element({k: ONE}) for k in range(H.n))


def test_exhaustive_and_unit_delta_checks_agree():
    spec = identity("P2")
    assert delta_report(spec, exhaustive=True).ok == delta_report(spec, exhaustive=False).ok


def test_all_automorphisms_of_pair_groupoid_functions():
    """Among the 24 arrow permutations exactly those induced by groupoid
    automorphisms pass the base conditions, and all of those validate."""
    mm = fixture("P2")
    passing = []
    for perm in itertools.permutations(range(4)):
        spec = MorphismSpec.from_elements(mm.core, mm.core, LinMap(4, 4, [{perm[i]: ONE} for i in range(4)]), str(perm))
        if base_report(spec).ok:
            passing.append(perm)
            assert validate_morphism(spec).ok
    # identity and the relabelling of the two objects
    assert passing == [(0, 1, 2, 3), (3, 2, 1, 0)]


def test_hat_into_dual_of_crossed_product():
    d = duality("SH8")
    s = translation_spec(coaction=True, name="SH8")
    md = crossed_product_model(s, d.mm, d)
    Hh = hopf_algebroid(md.hopf_dual.hopf)
    spec = dual_morphism(Hh.core, d, md.L @ md.hat_embedding, "H^->SH8^")
    assert check_morphism_into_dual(spec, d).ok
    assert check_antipode_preserved(spec).ok


def test_rank_one_reading_of_the_hat_embedding_is_degenerate():
    """v -> |1><1| (x) v with |1><1| the rank-one operator is multiplicative but
    not non-degenerate: its image generates only half of the dual."""
    d = duality("SH8")
    s = translation_spec(coaction=True, name="SH8")
    md = crossed_product_model(s, d.mm, d)
    nC, m = s.C.dim, md.hopf_dual.hopf.H.dim
    one = s.C.one()
    rank_one = LinMap(nC * nC * m, m, [{(a * nC + b) * m + k: ca * cb for a, ca in one.items() for b, cb in one.items()}
                                       for k in range(m)])
    Hh = hopf_algebroid(md.hopf_dual.hopf)
    spec = dual_morphism(Hh.core, d, md.L @ rank_one, "rank one")
    rep = base_report(spec)
    assert rep.get("pi is multiplicative").passed
    assert not rep.get("pi is non-degenerate").passed
    # the comultiplication and antipode parts still hold
    assert delta_report(spec).ok
    assert check_antipode_preserved(spec).ok
