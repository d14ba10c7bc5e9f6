"""Command-line driver: ``mhad validate|dualize|bidual-check|morphism-check|gen|report``."""

from __future__ import annotations

import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List, Optional, Tuple

import click

from . import __version__
from .algebra import validate_algebra
from .algebroid import algebroid_battery
from .duality import Duality, biduality_report, dualize
from .examples import (SpecError, check_groupoid, crossed_product, crossed_product_model, 
                       hopf_algebroid, hopf_instances, pair_groupoid, groupoid_from_group, finite_group,
                       translation_spec, trivial_algebroid, yd_algebroid, yd_model)
from .integration import full_battery
from .io import MorphismFile, SpecFile, SpecFileError, atomic_write, dumps, load, to_measured
from .linalg import LinMap
from .morphisms import MorphismSpec, check_antipode_preserved, check_morphism_into_dual, dual_morphism, validate_morphism
from .report import Report
from .wmha import groupoid_wmha, wmha_report, wmha_to_algebroid


def threads() -> int:
    try:
        return max(1, int(os.environ.get("MHAD_THREADS", "1")))
    except ValueError:
        return 1


def run_jobs(jobs: List[Tuple[str, Callable[[], Report]]]) -> Tuple[List[Report], Dict[str, float]]:
    """Run independent batteries, at most ``MHAD_THREADS`` at a time; results keep job order."""
    timings: Dict[str, float] = {}

    def timed(item):
        name, fn = item
        t = time.perf_counter()
        r = fn()
        timings[name] = round(time.perf_counter() - t, 3)
        return r

    with ThreadPoolExecutor(max_workers=threads()) as ex:
        reports = list(ex.map(timed, jobs))
    return reports, timings


def algebra_report(A) -> Report:
    r = validate_algebra(A)
    rep = Report(f"algebra {A.name}")
    rep.add("associative", r.associative, r.witnesses.get("associative"))
    rep.add("non-degenerate", r.nondegenerate, r.witnesses.get("nondegenerate"))
    rep.add("idempotent", r.idempotent)
    if r.unit_ok is not None:
        rep.add("unit", r.unit_ok)
    if r.star_ok is not None:
        rep.add("involution", r.star_ok, r.witnesses.get("star"))
    return rep


# ---------------------------------------------------------------------------
# morphism files


def _core(spec: SpecFile):
    if spec.kind == "algebroid":
        return spec.value
    return to_measured(spec).core


def build_morphism(m: MorphismFile) -> Tuple[MorphismSpec, Optional[Duality]]:
    src = _core(m.source)
    if m.target_dual:
        d = Duality(to_measured(m.target))
        return dual_morphism(src, d, m.images, m.name), d
    return MorphismSpec.from_elements(src, _core(m.target), m.images, m.name), None


def morphism_reports(m: MorphismFile) -> List[Report]:
    spec, d = build_morphism(m)
    first = check_morphism_into_dual(spec, d) if d is not None else validate_morphism(spec)
    return [first, check_antipode_preserved(spec)]


def validation_jobs(spec: SpecFile) -> List[Tuple[str, Callable[[], Report]]]:
    v, kind = spec.value, spec.kind
    if kind == "algebra":
        return [("algebra", lambda: algebra_report(v))]
    if kind == "algebroid":
        return [("algebroid", lambda: algebroid_battery(v)[1])]
    if kind == "morphism":
        return [("morphism", lambda: _merge(f"morphism {v.name}", morphism_reports(v)))]
    if kind == "groupoid":
        err = check_groupoid(v)
        if err:
            def bad():
                rep = Report(f"groupoid {v.name}")
                rep.add("groupoid axioms", False, err)
                return rep
            return [("groupoid", bad)]
    if kind == "wmha":
        def weak():
            rep = Report(f"weak Hopf {v.name}")
            w = wmha_report(v)
            rep.extend(w, "weak Hopf: ")
            if w.ok:
                rep.extend(full_battery(wmha_to_algebroid(v, check=False)), "algebroid: ")
            return rep
        return [("wmha", weak)]
    return [("battery", lambda: full_battery(to_measured(spec)))]


def _merge(title: str, reports: List[Report]) -> Report:
    out = Report(title)
    for r in reports:
        out.extend(r, f"{r.title}: ")
    return out


# ---------------------------------------------------------------------------
# output


def render(reports: List[Report], fmt: str, timings: Optional[Dict[str, float]]) -> str:
    if fmt == "json":
        doc = {"toolVersion": __version__, "ok": all(r.ok for r in reports), "reports": [r.to_dict() for r in reports]}
        if timings is not None:
            doc["timings"] = timings
        text = json.dumps(doc, sort_keys=True, indent=1) + "\n"
    else:
        text = "\n".join(r.to_text() for r in reports) + "\n"
        if timings is not None:
            text += "timings: " + ", ".join(f"{k}={v}s" for k, v in timings.items()) + "\n"
    return text


def emit(reports: List[Report], fmt: str, timings: Optional[Dict[str, float]], err: bool = False) -> bool:
    ok = all(r.ok for r in reports)
    click.echo(render(reports, fmt, timings), nl=False, err=err)
    if not ok:
        first = next(c for r in reports for c in r.checks if not c.passed)
        click.echo(f"FAILED: {first.name}", err=True)
    return ok


def _load(path: str) -> SpecFile:
    try:
        return load(path)
    except SpecFileError as e:
        raise click.ClickException(f"invalid spec: {e}")
    except OSError as e:
        raise click.ClickException(str(e))


format_opt = click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text", show_default=True)
timings_opt = click.option("--timings/--no-timings", default=True, show_default=True,
                           help="Include wall-clock timings (omit for byte-comparable reports).")


@click.group()
@click.version_option(__version__, prog_name="mhad")
def main():
    """Exact checks for finite measured multiplier Hopf algebroids."""


@main.command()
@click.argument("spec")
@format_opt
@timings_opt
def validate(spec, fmt, timings):
    """Run the axiom batteries on SPEC ("-" reads stdin)."""
    s = _load(spec)
    reports, t = run_jobs(validation_jobs(s))
    sys.exit(0 if emit(reports, fmt, t if timings else None) else 1)


@main.command("dualize")
@click.argument("spec")
@click.option("-o", "--out", default="-", show_default=True)
@click.option("--battery/--no-battery", default=True, help="Also validate the dual.")
@click.option("--report-format", type=click.Choice(["text", "json"]), default="text")
def dualize_cmd(spec, out, battery, report_format):
    """Write the dual of SPEC as a measured-algebroid spec with its pairing grids."""
    mm = to_measured(_load(spec))
    res = dualize(mm, battery=battery)
    atomic_write(out, dumps(SpecFile("measured", res.dual, {"pairings": res.pairings})))
    if not res.report.ok:
        emit([res.report], report_format, None, err=True)
        sys.exit(1)


@main.command("bidual-check")
@click.argument("spec")
@click.option("--against", default=None, help="Spec whose double dual SPEC should be.")
@format_opt
@timings_opt
def bidual_check(spec, against, fmt, timings):
    """Check that a -> a^vv is an isomorphism onto the double dual.

    With ``--against ORIG``, SPEC is taken to be a double dual and is also
    compared structurally with the double dual computed from ORIG.
    """
    if against is None:
        mm = to_measured(_load(spec))
        jobs = [("biduality", lambda: biduality_report(Duality(mm))[0])]
    else:
        given = to_measured(_load(spec))
        orig = to_measured(_load(against))

        def job():
            d1 = Duality(orig)
            rep, _ = biduality_report(d1)
            d2dual = Duality(d1.dual).dual
            rep.add("spec equals the double dual of the original",
                    dumps(SpecFile("measured", given)) == dumps(SpecFile("measured", d2dual.replace(name=given.name))))
            return rep
        jobs = [("biduality", job)]
    reports, t = run_jobs(jobs)
    sys.exit(0 if emit(reports, fmt, t if timings else None) else 1)


@main.command("morphism-check")
@click.argument("spec")
@format_opt
@timings_opt
def morphism_check(spec, fmt, timings):
    """Validate a morphism spec, including antipode preservation."""
    s = _load(spec)
    if s.kind != "morphism":
        raise click.ClickException(f"expected a morphism spec, got {s.kind}")
    t0 = time.perf_counter()
    reports = morphism_reports(s.value)
    t = {"morphism": round(time.perf_counter() - t0, 3)}
    sys.exit(0 if emit(reports, fmt, t if timings else None) else 1)


@main.command()
@click.argument("spec")
@format_opt
@timings_opt
def report(spec, fmt, timings):
    """Batteries, dual and biduality for SPEC in one report."""
    s = _load(spec)
    jobs = validation_jobs(s)
    if s.kind in ("measured", "groupoid", "smash", "yd", "wmha"):
        mm = to_measured(s)
        jobs.append(("dualize", lambda: dualize(mm).report))
        jobs.append(("biduality", lambda: biduality_report(Duality(mm))[0]))
    reports, t = run_jobs(jobs)
    sys.exit(0 if emit(reports, fmt, t if timings else None) else 1)


# ---------------------------------------------------------------------------
# generators


def _groupoid(param: str):
    if param.startswith("pair"):
        body, _, w = param[4:].partition(":")
        weights = w.split(",") if w else None
        return pair_groupoid(int(body), weights, name=param)
    if param.startswith("group:"):
        els, mul = finite_group(param[6:])
        return groupoid_from_group(els, mul, name=param[6:])
    raise click.BadParameter(f"unknown groupoid {param!r}; use pairN[:w1,...] or group:G")


def generate(family: str, param: str) -> SpecFile:
    if family == "groupoid":
        return SpecFile("groupoid", _groupoid(param))
    if family == "wmha":
        return SpecFile("wmha", groupoid_wmha(_groupoid(param)))
    if family == "hopf":
        return SpecFile("measured", hopf_algebroid(hopf_instances(param)))
    if family == "trivial":
        return SpecFile("measured", trivial_algebroid())
    if family == "smash":
        return SpecFile("smash", translation_spec(param))
    if family == "yd":
        return SpecFile("yd", translation_spec(param, coaction=True))
    if family == "morphism":
        return _gen_morphism(param)
    raise click.BadParameter(f"unknown family {family!r}")


def _gen_morphism(param: str) -> SpecFile:
    kind, _, arg = param.partition(":")
    if kind == "identity":
        g = SpecFile("groupoid", _groupoid(arg or "pair2"))
        n = to_measured(g).n
        return SpecFile("morphism", MorphismFile(g, g, LinMap.identity(n), name=f"id {arg}"))
    G = arg or "Z2"
    h = hopf_instances(f"k{G}")
    if kind in ("hopf-smash", "hopf-yd"):
        s = translation_spec(G, coaction=True)
        mm = crossed_product(s) if kind == "hopf-smash" else yd_algebroid(s)
        tgt = SpecFile("smash" if kind == "hopf-smash" else "yd", s)
        return SpecFile("morphism", MorphismFile(SpecFile("measured", hopf_algebroid(h)), tgt, mm.embed_H,
                                                 name=f"H -> {mm.name}"))
    if kind in ("dual-smash", "dual-yd"):
        s = translation_spec(G, coaction=True)
        build, model = (crossed_product, crossed_product_model) if kind == "dual-smash" else (yd_algebroid, yd_model)
        mm = build(s)
        d = Duality(mm)
        md = model(s, mm, d)
        src = SpecFile("measured", hopf_algebroid(md.hopf_dual.hopf))
        tgt = SpecFile("smash" if kind == "dual-smash" else "yd", s)
        return SpecFile("morphism", MorphismFile(src, tgt, md.L @ md.hat_embedding, True, name=f"H^ -> dual {mm.name}"))
    raise click.BadParameter(f"unknown morphism {param!r}")


@main.command()
@click.argument("family", type=click.Choice(["groupoid", "wmha", "hopf", "trivial", "smash", "yd", "morphism"]))
@click.argument("param", default="")
@click.option("-o", "--out", default="-", show_default=True)
def gen(family, param, out):
    """Generate a spec.

    \b
    groupoid pair2 | pair2:1,4 | group:Z2      wmha pair2
    hopf kS3 | k^S3                            trivial
    smash Z2                                   yd Z2
    morphism identity:pair2 | hopf-smash:Z2 | hopf-yd:Z2 | dual-smash:Z2 | dual-yd:Z2
    """
    try:
        spec = generate(family, param)
    except SpecError as e:
        raise click.ClickException(str(e))
    atomic_write(out, dumps(spec))


if __name__ == "__main__":
    main()
