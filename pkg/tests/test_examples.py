import pytest

from mhad.duality import Duality
from mhad.examples import (SmashSpec, SpecError, check_groupoid, check_hopf, check_module_algebra,
                           check_yetter_drinfeld, crossed_product, crossed_product_model, dual_hopf,
                           groupoid_algebroid, hopf_instances, model_report, pair_groupoid, scalar_spec,
                           translation_spec, yd_algebroid, yd_model)
from mhad.integration import full_battery
from mhad.linalg import ONE, LinMap


@pytest.mark.parametrize("kind", ["kZ2", "kZ3", "kS3", "k^Z2", "k^S3"])
def test_hopf_instances(kind):
    h = hopf_instances(kind)
    assert check_hopf(h) is None


@pytest.mark.parametrize("kind", ["kZ2", "kS3", "k^S3"])
def test_dual_hopf_and_double_dual(kind):
    hd = dual_hopf(hopf_instances(kind))
    assert check_hopf(hd.hopf) is None
    assert check_hopf(dual_hopf(hd.hopf).hopf) is None


def test_group_haar_integral():
    h = hopf_instances("kZ2")
    assert h.phi == {0: ONE}


def test_broken_group_law_is_rejected():
    g = pair_groupoid(2)
    g.compose[("(1,2)", "(2,1)")] = "(2,2)"
    assert check_groupoid(g) is not None
    with pytest.raises(SpecError):
        groupoid_algebroid(g)


def test_zero_weight_is_rejected():
    with pytest.raises(SpecError):
        groupoid_algebroid(pair_groupoid(2, [1, 0]))


def test_translation_is_module_algebra_and_yd():
    s = translation_spec(coaction=True)
    assert check_module_algebra(s) is None
    assert check_yetter_drinfeld(s) is None


def test_non_multiplicative_coaction_is_rejected():
    s = translation_spec(coaction=True)
    m = s.C.dim
    # y -> y (x) u_g is counital and coassociative but not an algebra map
    s.coaction = LinMap(m * m, m, [{y * m + 1: ONE} for y in range(m)])
    assert check_yetter_drinfeld(s) is not None


def test_bad_action_is_rejected():
    s = translation_spec()
    s.action = [LinMap.identity(2), LinMap(2, 2, [{0: ONE}, {0: ONE}])]
    assert check_module_algebra(s) is not None


def test_dimensions():
    s = translation_spec(coaction=True)
    assert crossed_product(s).n == 8
    assert yd_algebroid(s).n == 4


@pytest.mark.parametrize("build,model,spec", [
    (crossed_product, crossed_product_model, lambda: translation_spec()),
    (yd_algebroid, yd_model, lambda: translation_spec(coaction=True)),
    (yd_algebroid, yd_model, lambda: translation_spec("Z3", coaction=True)),
    (crossed_product, crossed_product_model, lambda: scalar_spec(hopf_instances("kZ2"))),
    (yd_algebroid, yd_model, lambda: scalar_spec(hopf_instances("kS3"), coaction=True)),
])
def test_models(build, model, spec):
    s = spec()
    mm = build(s)
    assert full_battery(mm).ok
    d = Duality(mm)
    rep = model_report(d, model(s, mm, d))
    assert rep.ok, rep.to_text()


def test_model_detects_wrong_identification():
    s = translation_spec()
    mm = crossed_product(s)
    d = Duality(mm)
    md = crossed_product_model(s, mm, d)
    # swap two columns of the identification: no longer multiplicative
    cols = list(md.L.columns)
    cols[0], cols[1] = cols[1], cols[0]
    md.L = LinMap(md.L.rows, md.L.cols, cols)
    assert not model_report(d, md).ok


def test_smash_spec_act():
    s = translation_spec()
    assert isinstance(s, SmashSpec)
    assert s.act({1: ONE}, {0: ONE}) == {1: ONE}
