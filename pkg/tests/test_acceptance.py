"""One verdict per acceptance criterion, printed in the terminal summary."""

import json
import time

from mhad.algebroid import check_H1_H2
from mhad.controls import controls, run_control
from mhad.duality import Duality, biduality_report, cointegral_integral_report, cointegrals
from mhad.examples import (crossed_product_model, dual_hopf, groupoid_from_group, finite_group, hopf_algebroid,
                           hopf_instances, model_report, pair_groupoid, translation_spec, yd_model)
from mhad.integration import full_battery
from mhad.linalg import LinMap
from mhad.morphisms import (MorphismSpec, check_antipode_preserved, check_morphism_into_dual, dual_morphism,
                            validate_morphism)
from mhad.report import jsonable
from mhad.wmha import base_frobenius, groupoid_wmha, local_units_report, round_trip_report

from oracles import (FIXTURES, cyclic_group_table, dual_against_groupoid_oracle, duality, fixture,
                     matrix_unit_table, same_table)


def _failed(reports):
    return [f"{r.title}: {c.name}" for r in reports for c in r.failures()]


def test_criterion_1_axiom_batteries(record):
    t = time.perf_counter()
    bad = {}
    for name in FIXTURES:
        rep = full_battery(fixture(name))
        if not rep.ok:
            bad[name] = _failed([rep])
    elapsed = time.perf_counter() - t
    record(1, not bad, f"{len(FIXTURES)} fixtures, batteries in {elapsed:.1f}s" + (f"; failures {bad}" if bad else ""))
    assert not bad


def test_criterion_2_duality_oracles(record):
    g2 = groupoid_from_group(*finite_group("Z2"), name="G2")
    p2 = pair_groupoid(2, name="P2")
    p2w = pair_groupoid(2, [1, 4], name="P2(1,4)")
    # with unit weights e_g . phi is exactly the oracle basis, so the raw tables must match
    checks = {
        "G2 = kZ/2 table": same_table(duality("G2").algebra, cyclic_group_table(2)),
        "P2 = 2x2 matrix units": same_table(duality("P2").algebra, matrix_unit_table(2)),
        "G2 oracle": not dual_against_groupoid_oracle(g2),
        "P2 oracle": not dual_against_groupoid_oracle(p2),
        "P2(1,4) twisted oracle": not dual_against_groupoid_oracle(p2w),
    }
    ok = all(checks.values())
    record(2, ok, ", ".join(k for k, v in checks.items() if not v) or "all structure constants equal")
    assert ok


def test_criterion_3_example_family_duals(record):
    out = {}
    for name, model in (("SH8", crossed_product_model), ("YD4", yd_model)):
        s = translation_spec(coaction=True, name=name)
        d = duality(name)
        out[name] = model_report(d, model(s, d.mm, d))
    ok = all(r.ok for r in out.values())
    record(3, ok, "; ".join(f"{k}: {len(r.checks)} checks" for k, r in out.items()) if ok else str(_failed(out.values())))
    assert ok


def test_criterion_4_biduality(record):
    reps = [biduality_report(duality(name))[0] for name in FIXTURES]
    ok = all(r.ok for r in reps)
    record(4, ok, f"{len(reps)} fixtures incl. phi^^ and psi^^" if ok else str(_failed(reps)))
    assert ok


def test_criterion_5_dual_integrals(record):
    reps = [duality(name).integral_report() for name in FIXTURES]
    names = {c.name for r in reps for c in r.checks}
    wanted = {"phi^((psi.S(a)) w) = w(a)", "psi^(w (S(b).phi)) = w(b)", "psi^((a.phi)^* (b.phi)) = phi(a^* b)"}
    ok = all(r.ok for r in reps) and wanted <= names
    record(5, ok, f"{len(reps)} fixtures" if ok else str(_failed(reps)))
    assert ok


def morphism_fixtures():
    """(name, spec, duality or None) for the morphism fixtures."""
    out = []
    for name in ("P2", "kS3"):
        mm = fixture(name)
        out.append((f"identity on {name}", MorphismSpec.from_elements(mm.core, mm.core, LinMap.identity(mm.n), "id"), None))
    H = hopf_algebroid(hopf_instances("kZ2"))
    for name, model in (("SH8", crossed_product_model), ("YD4", yd_model)):
        d = duality(name)
        mm = d.mm
        out.append((f"H -> {name}", MorphismSpec.from_elements(H.core, mm.core, mm.embed_H, f"H->{name}"), None))
        md = model(translation_spec(coaction=True, name=name), mm, d)
        Hh = hopf_algebroid(md.hopf_dual.hopf)
        out.append((f"H^ -> dual {name}", dual_morphism(Hh.core, d, md.L @ md.hat_embedding, f"H^->{name}^"), d))
    return out


def test_criterion_6_executable_theorems(record):
    problems = []
    for name, spec, d in morphism_fixtures():
        v = check_morphism_into_dual(spec, d) if d is not None else validate_morphism(spec)
        if not v.ok:
            problems.append(f"{name} does not validate")
        if not check_antipode_preserved(spec).ok:
            problems.append(f"{name}: pi o S != S o pi")
    cores = [fixture(n).core for n in FIXTURES] + [duality(n).dual_core for n in FIXTURES]
    for core in cores:
        if not check_H1_H2(core)[1].get("both criteria agree").passed:
            problems.append(f"{core.name}: Hopf criteria disagree")
    for name in FIXTURES:
        rep = full_battery(fixture(name))
        for label in ("measured: left invariance forms agree", "measured: right invariance forms agree"):
            c = rep.get(label)
            if c is None or not c.passed:
                problems.append(f"{name}: {label}")
    record(6, not problems, "6 morphisms, Hopf criteria on 14 algebroids, invariance forms on 7"
           if not problems else "; ".join(problems))
    assert not problems


def test_criterion_7_cointegrals(record):
    problems = []
    for name in ("P2", "G2"):
        d = duality(name)
        c = cointegrals(d)
        if not (c.report.ok and c.normalized_left is not None and c.dual_unital):
            problems.append(f"{name}: {_failed([c.report]) or 'no normalized cointegral'}")
        ci = cointegral_integral_report(d)
        if not ci.ok:
            problems.append(f"{name}: {_failed([ci])}")
    record(7, not problems, "normalized cointegral and dual unit derived from each other" if not problems else "; ".join(problems))
    assert not problems


def test_criterion_8_weak_hopf_bridge(record):
    rt = round_trip_report(groupoid_wmha(pair_groupoid(2, name="P2")))
    problems = [] if rt.ok else _failed([rt])
    frob = []
    for name in FIXTURES:
        mm = fixture(name)
        if base_frobenius(mm)[0].ok:
            frob.append(name)
            lu = local_units_report(mm)
            if not lu.ok:
                problems += _failed([lu])
    record(8, not problems and bool(frob),
           f"round trip exact; local units on {', '.join(frob)}" if not problems else "; ".join(problems))
    assert not problems and frob


def test_criterion_9_negative_controls(record):
    lines = []
    ok = True
    for c in controls():
        o = run_control(c)
        ok &= o.ok
        f = o.failures[0] if o.failures else None
        wit = json.dumps(jsonable(f.witness), sort_keys=True) if f else "-"
        lines.append(f"{c.name}: {'ok' if o.ok else 'BAD'} [{f.name if f else 'no failure'} witness={wit}]"
                     + (f" stray={[s.name for s in o.stray]}" if o.stray else ""))
    for line in lines:
        print("  ", line)
    record(9, ok, " | ".join(lines))
    assert ok
