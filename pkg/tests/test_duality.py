import pytest

from mhad.duality import (Duality, biduality_report, cointegral_integral_report, cointegrals,
                          dual_multiplier_report, dualize, left_integral_space)
from mhad.examples import function_algebra_of_group, group_algebra, hopf_algebroid, pair_groupoid
from mhad.integration import full_battery
from mhad.linalg import ONE

from oracles import FIXTURES, dual_against_groupoid_oracle, duality, fixture


@pytest.mark.parametrize("name", FIXTURES)
def test_dualize_is_green(name):
    res = dualize(fixture(name))
    assert res.report.ok, [c.name for c in res.report.failures()]
    assert set(res.pairings) >= {"aba", "aca"}


@pytest.mark.parametrize("name", FIXTURES)
def test_dual_has_same_dimension(name):
    assert duality(name).algebra.dim == fixture(name).n


def test_group_algebra_dual_is_function_algebra():
    # dual of kS3 over the trivial base: commutative, with idempotent basis after rescaling
    D = duality("kS3").algebra
    for i in range(D.dim):
        for j in range(D.dim):
            assert D.mult.get((i, j), {}) == D.mult.get((j, i), {})
    assert D.mult.get((0, 0)) == {0: ONE}


def test_function_algebra_dual_is_group_algebra():
    d = Duality(hopf_algebroid(function_algebra_of_group("S3")))
    H = group_algebra("S3").H
    # e_g . phi for phi the counting integral multiply like the group
    assert d.algebra.mult == H.mult


@pytest.mark.parametrize("weights", [None, [1, 4], [9, 1]])
def test_groupoid_dual_oracle(weights):
    assert dual_against_groupoid_oracle(pair_groupoid(2, weights)) == []


def test_pair3_dual_oracle():
    assert dual_against_groupoid_oracle(pair_groupoid(3, [1, 4, 9])) == []


@pytest.mark.parametrize("name", ["P2", "SH8", "kS3"])
def test_double_dual_battery(name):
    d2 = Duality(duality(name).dual)
    assert full_battery(d2.dual).ok


@pytest.mark.parametrize("name", FIXTURES)
def test_biduality(name):
    rep, j = biduality_report(duality(name))
    assert rep.ok
    assert j.rows == j.cols == fixture(name).n


@pytest.mark.parametrize("name", ["P2", "G2", "P2(1,4)", "kS3"])
def test_cointegrals(name):
    d = duality(name)
    c = cointegrals(d)
    assert c.report.ok and c.dual_unital
    assert cointegral_integral_report(d).ok


def test_left_integrals_of_pair_groupoid_are_one_dimensional_per_unit():
    assert left_integral_space(fixture("P2")).dim == 2


@pytest.mark.parametrize("name", FIXTURES)
def test_dual_multipliers(name):
    assert dual_multiplier_report(duality(name)).ok
