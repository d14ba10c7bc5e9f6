"""JSON spec files: exact, schema-checked serialization of every spec type.

Rationals travel as strings ``"p/q"``; a scalar of Q(i) is the pair
``re, im``.  Sparse data is a list of tuples with the scalar last, e.g. an
algebra table row ``[i, j, k, re, im]`` for ``e_i e_j += (re + i im) e_k``.
"""

from __future__ import annotations

import json
import os
import sys
import tempfile
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Any, Dict, List, Optional

import jsonschema

from .algebra import FiniteAlgebra, Multiplier
from .algebroid import AlgebroidData
from .bimodule import BaseEmbedding
from .examples import GroupoidSpec, HopfData, SmashSpec, crossed_product, groupoid_algebroid, yd_algebroid
from .integration import MeasuredAlgebroid
from .linalg import LinMap, Vec, fmt_rational, mk, parse_rational, re_im
from .wmha import WMHASpec, wmha_to_algebroid

SCHEMA_VERSION = "1"
KINDS = ("algebra", "algebroid", "measured", "groupoid", "wmha", "smash", "yd", "morphism")


class SpecFileError(ValueError):
    """Invalid spec file; ``pointer`` is a JSON pointer into the document."""

    def __init__(self, message: str, pointer: str = ""):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer or "/"


@dataclass
class MorphismFile:
    source: "SpecFile"
    target: "SpecFile"
    images: LinMap
    target_dual: bool = False
    name: str = ""


@dataclass
class SpecFile:
    kind: str
    value: Any
    attachments: Dict[str, Any] = field(default_factory=dict)
    schemaVersion: str = SCHEMA_VERSION


@lru_cache(maxsize=1)
def schema() -> dict:
    text = resources.files("mhad").joinpath("schemas/specfile.schema.json").read_text()
    return json.loads(text)


def _pointer(path) -> str:
    return "".join(f"/{p}" for p in path)


def validate_document(doc: Any) -> None:
    validator = jsonschema.Draft202012Validator(schema())
    errors = sorted(validator.iter_errors(doc), key=lambda e: (len(e.absolute_path), list(map(str, e.absolute_path))))
    if errors:
        best = jsonschema.exceptions.best_match(errors)
        raise SpecFileError(best.message, _pointer(best.absolute_path))


# ---------------------------------------------------------------------------
# encoding


def _sc(x) -> List[str]:
    a, b = re_im(x)
    return [fmt_rational(a), fmt_rational(b)]


def enc_vec(v: Vec) -> list:
    return [[k] + _sc(c) for k, c in sorted(v.items()) if c]


def enc_matrix(M: LinMap) -> dict:
    entries = []
    for c, col in enumerate(M.columns):
        for r, x in sorted(col.items()):
            if x:
                entries.append([r, c] + _sc(x))
    entries.sort()
    return {"rows": M.rows, "cols": M.cols, "entries": entries}


def enc_algebra(A: FiniteAlgebra) -> dict:
    mult = []
    for (i, j), v in sorted(A.mult.items()):
        for k, c in sorted(v.items()):
            if c:
                mult.append([i, j, k] + _sc(c))
    return {
        "name": A.name,
        "dim": A.dim,
        "labels": list(A.labels),
        "mult": mult,
        "unit": enc_vec(A.unit) if A.unit is not None else None,
        "star": enc_matrix(A.star) if A.star is not None else None,
    }


def enc_base(emb: BaseEmbedding) -> dict:
    return {
        "label": emb.label,
        "algebra": enc_algebra(emb.algebra),
        "images": [{"lam": enc_matrix(m.lam), "rho": enc_matrix(m.rho)} for m in emb.images],
    }


def enc_algebroid(core: AlgebroidData) -> dict:
    out = {"name": core.name, "A": enc_algebra(core.A), "B": enc_base(core.B), "C": enc_base(core.C),
           "tB": enc_matrix(core.tB), "tC": enc_matrix(core.tC)}
    for k in ("TL", "TR", "LT", "RT"):
        out[k] = enc_matrix(core.maps[k])
    return out


def enc_measured(mm: MeasuredAlgebroid) -> dict:
    return {"name": mm.name, "algebroid": enc_algebroid(mm.core), "muB": enc_vec(mm.muB),
            "muC": enc_vec(mm.muC), "phiC": enc_matrix(mm.phiC), "psiB": enc_matrix(mm.psiB)}


def enc_groupoid(g: GroupoidSpec) -> dict:
    return {
        "name": g.name,
        "arrows": list(g.arrows),
        "units": list(g.units),
        "src": dict(g.src),
        "tgt": dict(g.tgt),
        "compose": [[a, b, c] for (a, b), c in sorted(g.compose.items())],
        "inv": dict(g.inv),
        "weights": {u: fmt_rational(g.weight(u)) for u in sorted(g.weights)},
    }


def enc_hopf(h: HopfData) -> dict:
    return {"name": h.name, "H": enc_algebra(h.H), "Delta": enc_matrix(h.Delta), "eps": enc_vec(h.eps),
            "S": enc_matrix(h.S), "phi": enc_vec(h.phi), "psi": enc_vec(h.psi),
            "group": list(h.group) if h.group is not None else None}


def enc_wmha(w: WMHASpec) -> dict:
    return {"name": w.name, "A": enc_algebra(w.A), "Delta": enc_matrix(w.Delta), "eps": enc_vec(w.eps),
            "phi": enc_vec(w.phi), "psi": enc_vec(w.psi)}


def enc_smash(s: SmashSpec) -> dict:
    return {"name": s.name, "C": enc_algebra(s.C), "H": enc_hopf(s.H),
            "action": [enc_matrix(m) for m in s.action], "muC": enc_vec(s.muC),
            "coaction": enc_matrix(s.coaction) if s.coaction is not None else None}


def enc_morphism(m: MorphismFile) -> dict:
    return {"name": m.name, "source": to_document(m.source), "target": to_document(m.target),
            "targetDual": m.target_dual, "images": enc_matrix(m.images)}


_ENCODERS = {
    "algebra": enc_algebra, "algebroid": enc_algebroid, "measured": enc_measured,
    "groupoid": enc_groupoid, "wmha": enc_wmha, "smash": enc_smash, "yd": enc_smash,
    "morphism": enc_morphism,
}

_TYPES = [
    (FiniteAlgebra, "algebra"), (AlgebroidData, "algebroid"), (MeasuredAlgebroid, "measured"),
    (GroupoidSpec, "groupoid"), (WMHASpec, "wmha"), (SmashSpec, "smash"), (MorphismFile, "morphism"),
]


def kind_of(value: Any) -> str:
    for t, k in _TYPES:
        if isinstance(value, t):
            return k
    raise TypeError(f"no spec kind for {type(value).__name__}")


def to_document(spec: "SpecFile | Any", kind: Optional[str] = None) -> dict:
    if not isinstance(spec, SpecFile):
        spec = SpecFile(kind or kind_of(spec), spec)
    doc = {"schemaVersion": spec.schemaVersion, "kind": spec.kind, "payload": _ENCODERS[spec.kind](spec.value)}
    if spec.attachments:
        doc["attachments"] = {"pairings": {k: enc_matrix(v) for k, v in sorted(spec.attachments.get("pairings", {}).items())}}
    return doc


def dumps(spec: "SpecFile | Any", kind: Optional[str] = None) -> str:
    return json.dumps(to_document(spec, kind), sort_keys=True, indent=1) + "\n"


def atomic_write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        return
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".mhad-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def save(value: "SpecFile | Any", path: str, kind: Optional[str] = None) -> None:
    atomic_write(path, dumps(value, kind))


# ---------------------------------------------------------------------------
# decoding; every helper carries the JSON pointer of what it reads


def _scalar(re: str, im: str, ptr: str):
    try:
        return mk(parse_rational(re), parse_rational(im))
    except (ValueError, ZeroDivisionError) as e:
        raise SpecFileError(f"bad rational: {e}", ptr) from None


def dec_vec(data: list, ptr: str, dim: Optional[int] = None) -> Vec:
    out: Vec = {}
    for n, (k, re, im) in enumerate(data):
        if dim is not None and k >= dim:
            raise SpecFileError(f"index {k} out of range {dim}", f"{ptr}/{n}")
        c = _scalar(re, im, f"{ptr}/{n}")
        if c:
            out[k] = out.get(k, 0) + c
    return {k: c for k, c in out.items() if c}


def dec_matrix(data: dict, ptr: str) -> LinMap:
    rows, cols = data["rows"], data["cols"]
    columns: List[Vec] = [{} for _ in range(cols)]
    for n, (r, c, re, im) in enumerate(data["entries"]):
        if r >= rows or c >= cols:
            raise SpecFileError(f"entry ({r}, {c}) outside {rows}x{cols}", f"{ptr}/entries/{n}")
        x = _scalar(re, im, f"{ptr}/entries/{n}")
        if x:
            columns[c][r] = columns[c].get(r, 0) + x
    return LinMap(rows, cols, [{r: x for r, x in col.items() if x} for col in columns])


def _shape(M: LinMap, rows: int, cols: int, ptr: str) -> LinMap:
    if (M.rows, M.cols) != (rows, cols):
        raise SpecFileError(f"expected a {rows}x{cols} matrix, got {M.rows}x{M.cols}", ptr)
    return M


def dec_algebra(data: dict, ptr: str) -> FiniteAlgebra:
    n = data["dim"]
    mult: Dict[tuple, Vec] = {}
    for m, (i, j, k, re, im) in enumerate(data["mult"]):
        if max(i, j, k) >= n:
            raise SpecFileError(f"index out of range {n}", f"{ptr}/mult/{m}")
        c = _scalar(re, im, f"{ptr}/mult/{m}")
        row = mult.setdefault((i, j), {})
        row[k] = row.get(k, 0) + c
    mult = {key: {k: c for k, c in v.items() if c} for key, v in mult.items()}
    labels = data.get("labels")
    if labels is not None and len(labels) != n:
        raise SpecFileError("label count differs from dim", f"{ptr}/labels")
    unit = data.get("unit")
    star = data.get("star")
    return FiniteAlgebra(
        n, mult, labels=labels,
        unit=dec_vec(unit, f"{ptr}/unit", n) if unit is not None else None,
        star=_shape(dec_matrix(star, f"{ptr}/star"), n, n, f"{ptr}/star") if star is not None else None,
        name=data.get("name", ""),
    )


def dec_base(data: dict, ptr: str, n: int) -> BaseEmbedding:
    alg = dec_algebra(data["algebra"], f"{ptr}/algebra")
    images = []
    for k, im in enumerate(data["images"]):
        p = f"{ptr}/images/{k}"
        images.append(Multiplier(_shape(dec_matrix(im["lam"], p + "/lam"), n, n, p + "/lam"),
                                 _shape(dec_matrix(im["rho"], p + "/rho"), n, n, p + "/rho")))
    if len(images) != alg.dim:
        raise SpecFileError("one image per base basis element is required", f"{ptr}/images")
    return BaseEmbedding(alg, images, data.get("label", ""))


def dec_algebroid(data: dict, ptr: str) -> AlgebroidData:
    A = dec_algebra(data["A"], f"{ptr}/A")
    n = A.dim
    B = dec_base(data["B"], f"{ptr}/B", n)
    C = dec_base(data["C"], f"{ptr}/C", n)
    tB = _shape(dec_matrix(data["tB"], f"{ptr}/tB"), B.dim, B.dim, f"{ptr}/tB")
    tC = _shape(dec_matrix(data["tC"], f"{ptr}/tC"), C.dim, C.dim, f"{ptr}/tC")
    maps = {k: _shape(dec_matrix(data[k], f"{ptr}/{k}"), n * n, n * n, f"{ptr}/{k}")
            for k in ("TL", "TR", "LT", "RT")}
    return AlgebroidData(A, B, C, tB, tC, name=data.get("name", ""), **maps)


def dec_measured(data: dict, ptr: str) -> MeasuredAlgebroid:
    core = dec_algebroid(data["algebroid"], f"{ptr}/algebroid")
    nB, nC, n = core.B.dim, core.C.dim, core.n
    return MeasuredAlgebroid(
        core,
        dec_vec(data["muB"], f"{ptr}/muB", nB),
        dec_vec(data["muC"], f"{ptr}/muC", nC),
        _shape(dec_matrix(data["phiC"], f"{ptr}/phiC"), nC, n, f"{ptr}/phiC"),
        _shape(dec_matrix(data["psiB"], f"{ptr}/psiB"), nB, n, f"{ptr}/psiB"),
        name=data.get("name", ""),
    )


def dec_groupoid(data: dict, ptr: str) -> GroupoidSpec:
    weights = {}
    for u, w in data.get("weights", {}).items():
        weights[u] = _scalar(w, "0", f"{ptr}/weights/{u}")
    return GroupoidSpec(
        list(data["arrows"]), list(data["units"]), dict(data["src"]), dict(data["tgt"]),
        {(a, b): c for a, b, c in data["compose"]}, dict(data["inv"]), weights, data.get("name", ""),
    )


def dec_hopf(data: dict, ptr: str) -> HopfData:
    H = dec_algebra(data["H"], f"{ptr}/H")
    n = H.dim
    return HopfData(
        H,
        _shape(dec_matrix(data["Delta"], f"{ptr}/Delta"), n * n, n, f"{ptr}/Delta"),
        dec_vec(data["eps"], f"{ptr}/eps", n),
        _shape(dec_matrix(data["S"], f"{ptr}/S"), n, n, f"{ptr}/S"),
        dec_vec(data["phi"], f"{ptr}/phi", n),
        dec_vec(data["psi"], f"{ptr}/psi", n),
        name=data.get("name", ""),
        group=data.get("group"),
    )


def dec_wmha(data: dict, ptr: str) -> WMHASpec:
    A = dec_algebra(data["A"], f"{ptr}/A")
    n = A.dim
    return WMHASpec(A, _shape(dec_matrix(data["Delta"], f"{ptr}/Delta"), n * n, n, f"{ptr}/Delta"),
                    dec_vec(data["eps"], f"{ptr}/eps", n), dec_vec(data["phi"], f"{ptr}/phi", n),
                    dec_vec(data["psi"], f"{ptr}/psi", n), name=data.get("name", ""))


def dec_smash(data: dict, ptr: str) -> SmashSpec:
    C = dec_algebra(data["C"], f"{ptr}/C")
    h = dec_hopf(data["H"], f"{ptr}/H")
    m, nH = C.dim, h.H.dim
    action = [_shape(dec_matrix(a, f"{ptr}/action/{k}"), m, m, f"{ptr}/action/{k}")
              for k, a in enumerate(data["action"])]
    if len(action) != nH:
        raise SpecFileError("one action matrix per basis element of H is required", f"{ptr}/action")
    co = data.get("coaction")
    return SmashSpec(C, h, action, dec_vec(data["muC"], f"{ptr}/muC", m),
                     _shape(dec_matrix(co, f"{ptr}/coaction"), m * nH, m, f"{ptr}/coaction") if co is not None else None,
                     name=data.get("name", ""))


def dec_morphism(data: dict, ptr: str) -> MorphismFile:
    src = from_document(data["source"], f"{ptr}/source")
    tgt = from_document(data["target"], f"{ptr}/target")
    return MorphismFile(src, tgt, dec_matrix(data["images"], f"{ptr}/images"),
                        bool(data.get("targetDual", False)), data.get("name", ""))


_DECODERS = {
    "algebra": dec_algebra, "algebroid": dec_algebroid, "measured": dec_measured,
    "groupoid": dec_groupoid, "wmha": dec_wmha, "smash": dec_smash, "yd": dec_smash,
    "morphism": dec_morphism,
}


def from_document(doc: Any, ptr: str = "") -> SpecFile:
    if not ptr:
        validate_document(doc)
    value = _DECODERS[doc["kind"]](doc["payload"], f"{ptr}/payload")
    att = {}
    pairings = doc.get("attachments", {}).get("pairings")
    if pairings:
        att["pairings"] = {k: dec_matrix(v, f"{ptr}/attachments/pairings/{k}") for k, v in pairings.items()}
    return SpecFile(doc["kind"], value, att, doc["schemaVersion"])


def loads(text: str) -> SpecFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise SpecFileError(f"not JSON: {e.msg} at line {e.lineno}") from None
    return from_document(doc)


def load(path: str) -> SpecFile:
    if path == "-":
        return loads(sys.stdin.read())
    with open(path) as fh:
        return loads(fh.read())


# ---------------------------------------------------------------------------
# construction of the measured algebroid a spec describes


def to_measured(spec: SpecFile) -> MeasuredAlgebroid:
    v = spec.value
    if spec.kind == "measured":
        return v
    if spec.kind == "groupoid":
        return groupoid_algebroid(v)
    if spec.kind == "smash":
        return crossed_product(v)
    if spec.kind == "yd":
        return yd_algebroid(v)
    if spec.kind == "wmha":
        return wmha_to_algebroid(v)
    raise SpecFileError(f"a {spec.kind} spec does not describe a measured algebroid", "/kind")
