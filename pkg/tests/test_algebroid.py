import pytest

from mhad.algebroid import algebroid_battery, check_H1_H2, compute_counits, validate_bialgebroid
from mhad.controls import cyclic_table, loop_algebroid
from mhad.examples import groupoid_algebroid, pair_groupoid
from mhad.integration import check_modular_element, full_battery
from mhad.linalg import ONE

from oracles import FIXTURES, fixture


@pytest.mark.parametrize("name", FIXTURES)
def test_algebroid_battery(name):
    reg, rep = algebroid_battery(fixture(name).core)
    assert reg is not None, rep.to_text()
    assert rep.ok, [c.name for c in rep.failures()]


@pytest.mark.parametrize("name", FIXTURES)
def test_full_battery(name):
    rep = full_battery(fixture(name))
    assert rep.ok, [c.name for c in rep.failures()]
    assert not any(c.skipped for c in rep.checks if c.name.startswith("algebroid"))


def test_pair_groupoid_tensor_squares():
    # for P2 each Takeuchi square is spanned by pairs of arrows with matching endpoints
    core = fixture("P2").core
    assert core.tensors["TB"].dim == 8
    assert core.tensors["TC"].dim == 8


def test_scalar_counit_is_unit_evaluation():
    mm = fixture("P2")
    # eps(f) = sum of f over the units
    assert mm.eps == {0: ONE, 3: ONE}


def test_modular_element_of_weighted_pair_groupoid():
    g = pair_groupoid(2, [1, 4])
    mm = groupoid_algebroid(g)
    delta = mm.delta.lam(mm.A.one())
    expect = {i: 1 / g.D(a) for i, a in enumerate(g.arrows)}
    assert delta == expect
    assert check_modular_element(mm).ok


@pytest.mark.parametrize("table,hopf", [(cyclic_table(5), True), (None, False)])
def test_hopf_criteria_agree_on_loops(table, hopf):
    mm = loop_algebroid(table) if table else loop_algebroid()
    bi = validate_bialgebroid(mm.core)
    assert bi.ok == hopf
    _, rep = check_H1_H2(mm.core)
    assert rep.get("both criteria agree").passed


def test_counits_of_group_algebra():
    core = fixture("kS3").core
    counits, rep = compute_counits(core)
    assert rep.ok
    assert all(counits.epsB.columns[i] == {0: ONE} for i in range(core.n))
