"""Property tests over randomly generated finite groupoids and group Hopf algebras."""

from hypothesis import HealthCheck, given, settings, strategies as st

from mhad.duality import Duality, biduality_report, dualize
from mhad.examples import GroupoidSpec, check_groupoid, groupoid_algebroid, hopf_algebroid, hopf_instances
from mhad.integration import full_battery
from mhad.wmha import groupoid_wmha, round_trip_report

from oracles import dual_against_groupoid_oracle

SQUARES = [1, 4, 9, "1/4", "4/9"]


def pair_times_cyclic(k, m, weights, name="PxZ"):
    """Arrows ``(i, j, g)`` from object ``j`` to object ``i`` with group label ``g`` in ``Z/m``."""
    arrows = [f"{i}{j}{g}" for i in range(k) for j in range(k) for g in range(m)]
    units = [f"{i}{i}0" for i in range(k)]
    src = {a: f"{a[1]}{a[1]}0" for a in arrows}
    tgt = {a: f"{a[0]}{a[0]}0" for a in arrows}
    compose = {}
    for a in arrows:
        for b in arrows:
            if a[1] == b[0]:
                compose[(a, b)] = f"{a[0]}{b[1]}{(int(a[2]) + int(b[2])) % m}"
    inv = {a: f"{a[1]}{a[0]}{(-int(a[2])) % m}" for a in arrows}
    return GroupoidSpec(arrows, units, src, tgt, compose, inv, dict(zip(units, weights)), name)


groupoids = st.integers(1, 2).flatmap(
    lambda k: st.tuples(st.just(k), st.integers(1, 2) if k == 2 else st.integers(1, 3),
                        st.lists(st.sampled_from(SQUARES), min_size=k, max_size=k))
).map(lambda t: pair_times_cyclic(*t))

slow = settings(max_examples=12, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@given(groupoids)
@slow
def test_generated_groupoids_are_valid(g):
    assert check_groupoid(g) is None


@given(groupoids)
@slow
def test_groupoid_battery_and_dual(g):
    mm = groupoid_algebroid(g)
    assert full_battery(mm).ok
    assert dualize(mm).report.ok


@given(groupoids)
@slow
def test_dual_matches_oracle(g):
    assert dual_against_groupoid_oracle(g) == []


@given(groupoids)
@slow
def test_biduality_holds(g):
    assert biduality_report(Duality(groupoid_algebroid(g)))[0].ok


@given(groupoids.filter(lambda g: len(g.arrows) <= 4))
@settings(max_examples=6, deadline=None)
def test_weak_hopf_round_trip(g):
    assert round_trip_report(groupoid_wmha(g)).ok


@given(st.sampled_from(["kZ2", "kZ3", "k^Z3", "kS3", "k^S3"]))
@settings(max_examples=5, deadline=None)
def test_hopf_algebras_dualize(kind):
    mm = hopf_algebroid(hopf_instances(kind))
    assert full_battery(mm).ok
    res = dualize(mm)
    assert res.report.ok
    assert biduality_report(res.duality)[0].ok
