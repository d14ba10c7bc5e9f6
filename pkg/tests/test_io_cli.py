import json

import pytest
from click.testing import CliRunner
from hypothesis import given, settings, strategies as st

from mhad import io
from mhad.cli import main
from mhad.examples import finite_group, groupoid_from_group, pair_groupoid, translation_spec
from mhad.wmha import groupoid_wmha

from oracles import fixture


def roundtrip(value, kind=None):
    text = io.dumps(value, kind)
    spec = io.loads(text)
    return text, spec, io.dumps(spec)


def test_save_then_load_g2(tmp_path):
    g = groupoid_from_group(*finite_group("Z2"), name="G2")
    p = tmp_path / "g2.json"
    io.save(g, str(p))
    spec = io.load(str(p))
    assert spec.kind == "groupoid"
    assert spec.value.arrows == g.arrows and spec.value.compose == g.compose
    assert io.dumps(spec) == p.read_text()


@pytest.mark.parametrize("make,kind", [
    (lambda: fixture("SH8"), None),
    (lambda: fixture("kS3").core, None),
    (lambda: fixture("P2").A, None),
    (lambda: translation_spec(), "smash"),
    (lambda: translation_spec(coaction=True), "yd"),
    (lambda: groupoid_wmha(pair_groupoid(2)), None),
])
def test_round_trip_is_bit_exact(make, kind):
    text, spec, text2 = roundtrip(make(), kind)
    assert text == text2


def test_loaded_measured_algebroid_is_structurally_equal():
    mm = fixture("P2(1,4)")
    back = io.loads(io.dumps(mm)).value
    assert back.core.maps == mm.core.maps
    assert back.phi == mm.phi and back.psi == mm.psi


@given(st.lists(st.sampled_from([1, 4, 9, "1/4", "9/16"]), min_size=2, max_size=3))
@settings(max_examples=20, deadline=None)
def test_weighted_groupoid_round_trip(ws):
    g = pair_groupoid(len(ws), ws)
    text, spec, text2 = roundtrip(g)
    assert text == text2
    assert all(spec.value.weight(u) == g.weight(u) for u in g.units)


def _doc():
    return json.loads(io.dumps(pair_groupoid(2)))


def test_malformed_rational_rejected():
    doc = _doc()
    doc["payload"]["weights"] = {"(1,1)": "1/0"}
    with pytest.raises(io.SpecFileError) as e:
        io.from_document(doc)
    assert e.value.pointer == "/payload/weights/(1,1)"


def test_unknown_kind_rejected():
    doc = _doc()
    doc["kind"] = "hopfoid"
    with pytest.raises(io.SpecFileError) as e:
        io.from_document(doc)
    assert e.value.pointer == "/kind"


def test_unknown_field_rejected():
    doc = _doc()
    doc["payload"]["colour"] = "red"
    with pytest.raises(io.SpecFileError):
        io.from_document(doc)


def test_shape_errors_carry_a_pointer():
    doc = json.loads(io.dumps(fixture("G2")))
    doc["payload"]["phiC"]["rows"] = 5
    with pytest.raises(io.SpecFileError) as e:
        io.from_document(doc)
    assert e.value.pointer.endswith("/phiC")


def test_non_rational_string_rejected():
    doc = _doc()
    doc["payload"]["weights"] = {"(1,1)": "0.5"}
    with pytest.raises(io.SpecFileError):
        io.from_document(doc)


# ---------------------------------------------------------------------------
# command line


@pytest.fixture
def run(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    runner = CliRunner()

    def _run(*args, input=None):
        return runner.invoke(main, list(args), input=input, catch_exceptions=False)

    return _run


def test_gen_pipe_validate(run):
    out = run("gen", "groupoid", "pair2")
    assert out.exit_code == 0
    res = run("validate", "-", input=out.output)
    assert res.exit_code == 0, res.output


def test_dualize_twice_then_bidual_check(run):
    assert run("gen", "groupoid", "group:Z2", "-o", "g2.json").exit_code == 0
    assert run("dualize", "g2.json", "-o", "d.json").exit_code == 0
    assert run("dualize", "d.json", "-o", "dd.json").exit_code == 0
    res = run("bidual-check", "dd.json", "--against", "g2.json")
    assert res.exit_code == 0, res.output
    assert "spec equals the double dual" in res.output


def test_dualize_output_revalidates(run):
    run("gen", "yd", "Z2", "-o", "yd.json")
    run("dualize", "yd.json", "-o", "d.json")
    assert "pairings" in json.loads(open("d.json").read())["attachments"]
    assert run("validate", "d.json").exit_code == 0


def test_validate_corrupted_spec(run):
    doc = _doc()
    doc["payload"]["compose"] = [c for c in doc["payload"]["compose"] if c[2] != "(2,2)"]
    with open("bad.json", "w") as fh:
        json.dump(doc, fh)
    res = run("validate", "bad.json")
    assert res.exit_code == 1
    assert "witness=" in res.output


def test_schema_error_exit(run):
    with open("bad.json", "w") as fh:
        json.dump({"schemaVersion": "1", "kind": "nope", "payload": {}}, fh)
    res = run("validate", "bad.json")
    assert res.exit_code != 0
    assert "/kind" in res.output


@pytest.mark.parametrize("which", ["identity:pair2", "hopf-smash:Z2", "hopf-yd:Z2", "dual-smash:Z2", "dual-yd:Z2"])
def test_morphism_check(run, which):
    run("gen", "morphism", which, "-o", "m.json")
    res = run("morphism-check", "m.json")
    assert res.exit_code == 0, res.output


def test_reports_are_deterministic(run, monkeypatch):
    run("gen", "smash", "Z2", "-o", "s.json")
    a = run("report", "s.json", "--format", "json", "--no-timings")
    monkeypatch.setenv("MHAD_THREADS", "3")
    b = run("report", "s.json", "--format", "json", "--no-timings")
    assert a.exit_code == b.exit_code == 0
    assert a.output == b.output
    assert json.loads(a.output)["toolVersion"]


def test_timings_reported(run):
    run("gen", "trivial", "-o", "t.json")
    res = run("validate", "t.json", "--format", "json")
    assert "timings" in json.loads(res.output)
