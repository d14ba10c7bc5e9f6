import pytest

from mhad.examples import SpecError, finite_group, groupoid_from_group, pair_groupoid
from mhad.wmha import (algebroid_to_wmha, base_frobenius, eps_s, eps_t, groupoid_wmha, iota_report,
                       local_units_report, round_trip_report, wmha_antipode, wmha_report, wmha_to_algebroid)
from mhad.integration import full_battery
from mhad.linalg import ONE, rank

from oracles import fixture


@pytest.mark.parametrize("g", [pair_groupoid(2), pair_groupoid(3), groupoid_from_group(*finite_group("Z2"))],
                         ids=["P2", "P3", "G2"])
def test_round_trip(g):
    rep = round_trip_report(groupoid_wmha(g))
    assert rep.ok, [c.name for c in rep.failures()]


def test_weak_hopf_axioms_of_pair_groupoid():
    w = groupoid_wmha(pair_groupoid(2))
    assert wmha_report(w).ok
    S = wmha_antipode(w)
    # the antipode of functions on a groupoid is f -> f o inv
    g = pair_groupoid(2)
    idx = {a: i for i, a in enumerate(g.arrows)}
    assert all(S.columns[idx[a]] == {idx[g.inv[a]]: ONE} for a in g.arrows)


def test_target_and_source_counital_maps():
    w = groupoid_wmha(pair_groupoid(2))
    t, s = eps_t(w), eps_s(w)
    # both are idempotent projections onto the two-dimensional base algebras
    assert t @ t == t and s @ s == s
    assert rank(t) == rank(s) == 2


def test_algebroid_of_weak_hopf_passes_battery():
    assert full_battery(wmha_to_algebroid(groupoid_wmha(pair_groupoid(2)))).ok


@pytest.mark.parametrize("name,frobenius", [("P2", True), ("G2", True), ("TRIV", True), ("kS3", True),
                                            ("P2(1,4)", False), ("SH8", False), ("YD4", False)])
def test_frobenius_bases(name, frobenius):
    assert base_frobenius(fixture(name))[0].ok == frobenius
    rep = local_units_report(fixture(name))
    assert rep.ok
    assert (rep.get("A has local units").skipped) != frobenius


@pytest.mark.parametrize("name", ["P2", "G2", "kS3"])
def test_iota(name):
    assert iota_report(fixture(name)).ok


def test_non_frobenius_base_has_no_weak_hopf_form():
    with pytest.raises(SpecError):
        algebroid_to_wmha(fixture("SH8"))
