"""Morphisms of algebroids: extended comultiplications, the morphism
conditions, antipode and counit compatibility, and the test for morphisms
into a dual."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import List, Optional, Tuple

from .algebra import Multiplier
from .algebroid import AlgebroidData, HopfStructure, check_counit_antipode
from .bimodule import BalancedTensor, tensor
from .linalg import ONE, LinMap, Subspace, Vec, inverse, vaxpy, vdot
from .report import Report


def _clean(v: Vec) -> Vec:
    return {k: c for k, c in v.items() if c}


def _legs(t: Vec, f: LinMap, g: LinMap, n: int) -> Vec:
    """``(f (x) g)(t)`` for ``t`` in ``A (x) A``."""
    out: Vec = {}
    for k, c in t.items():
        p, q = divmod(k, n)
        u, v = f.columns[p], g.columns[q]
        for i, x in u.items():
            for j, y in v.items():
                vaxpy(out, c * x * y, {i * n + j: ONE})
    return out


# ---------------------------------------------------------------------------
# comultiplications on multipliers


class ExtendedComultiplication:
    """``Delta_C(T) = T_rho (T (x) 1) T_rho^-1`` on ``A^C (x) _CA`` and
    ``Delta_B(T)`` acting from the right on ``A_B (x) ^BA`` through ``T_lambda``,
    both as matrices in quotient coordinates."""

    def __init__(self, core: AlgebroidData):
        self.core = core
        n = core.n
        self.n = n
        self.TC: BalancedTensor = core.tensors["TC"]
        self.TB: BalancedTensor = core.tensors["TB"]
        self.srcR: BalancedTensor = core.tensors["src_TR"]
        self.srcL: BalancedTensor = core.tensors["src_LT"]
        self.Mr = self.TC.project_map() @ core.maps["TR"] @ self.srcR.section_map()
        self.Ml = self.TB.project_map() @ core.maps["LT"] @ self.srcL.section_map()
        self.Mr_inv = inverse(self.Mr)
        self.Ml_inv = inverse(self.Ml)

    def delta_C(self, T: Multiplier) -> LinMap:
        n = self.n
        I = LinMap.identity(n)
        lift = self.srcR.project_map() @ _tensor_map(T.lam, I, n) @ self.srcR.section_map()
        return self.Mr @ lift @ self.Mr_inv

    def delta_B(self, T: Multiplier) -> LinMap:
        """Matrix of ``q -> q Delta_B(T)``."""
        n = self.n
        I = LinMap.identity(n)
        lift = self.srcL.project_map() @ _tensor_map(I, T.rho, n) @ self.srcL.section_map()
        return self.Ml @ lift @ self.Ml_inv

    def left_mult_TC(self, a: Vec) -> LinMap:
        """``q -> Delta_C(a) q`` computed from the canonical data."""
        core, n = self.core, self.n
        cols = []
        for k in self.TC.basis_index:
            x, y = divmod(k, n)
            t = core.delta_C_right(a, {y: ONE})
            cols.append(self.TC.project(_legs(t, core.Rops[x], LinMap.identity(n), n)))
        return LinMap(self.TC.dim, self.TC.dim, cols)

    def right_mult_TB(self, a: Vec) -> LinMap:
        """``q -> q Delta_B(a)`` computed from the canonical data."""
        core, n = self.core, self.n
        cols = []
        for k in self.TB.basis_index:
            x, y = divmod(k, n)
            t = core.delta_B_left(a, {x: ONE})
            cols.append(self.TB.project(_legs(t, LinMap.identity(n), core.Lops[y], n)))
        return LinMap(self.TB.dim, self.TB.dim, cols)


def _tensor_map(f: LinMap, g: LinMap, n: int) -> LinMap:
    return LinMap(n * n, n * n, [_legs({k: ONE}, f, g, n) for k in range(n * n)])


def extend_comultiplications(T: Multiplier, core: AlgebroidData) -> Tuple[LinMap, LinMap]:
    """``(Delta_B(T), Delta_C(T))`` as matrices on the quotients ``TB`` and ``TC``."""
    ext = ExtendedComultiplication(core)
    return ext.delta_B(T), ext.delta_C(T)


def extension_report(core: AlgebroidData) -> Report:
    """The extension restricts to ``Delta`` on ``A``, is multiplicative there and unital."""
    rep = Report(f"extended comultiplications {core.name}")
    ext = ExtendedComultiplication(core)
    A, n = core.A, core.n
    one = Multiplier.identity(n)
    rep.add("Delta_C(1) is the identity", ext.delta_C(one) == LinMap.identity(ext.TC.dim))
    rep.add("Delta_B(1) is the identity", ext.delta_B(one) == LinMap.identity(ext.TB.dim))
    dc = [ext.delta_C(Multiplier.of_element(A, {a: ONE})) for a in range(n)]
    db = [ext.delta_B(Multiplier.of_element(A, {a: ONE})) for a in range(n)]
    bad = next((a for a in range(n) if dc[a] != ext.left_mult_TC({a: ONE})), None)
    rep.add("Delta_C agrees with the canonical data on A", bad is None, {"basis": bad})
    bad = next((a for a in range(n) if db[a] != ext.right_mult_TB({a: ONE})), None)
    rep.add("Delta_B agrees with the canonical data on A", bad is None, {"basis": bad})
    bad = None
    for a in range(n):
        for b in range(n):
            ab = Multiplier.of_element(A, A.mult.get((a, b), {}))
            if ext.delta_C(ab) != dc[a] @ dc[b] or ext.delta_B(ab) != db[b] @ db[a]:
                bad = (a, b)
                break
        if bad:
            break
    rep.add("extensions are (anti-)multiplicative on A", bad is None, {"pair": bad})
    return rep


# ---------------------------------------------------------------------------
# morphisms


@dataclass
class MorphismSpec:
    """``pi: D -> M(A)`` given by one multiplier per basis element of ``D``."""

    source: AlgebroidData
    target: AlgebroidData
    pi: List[Multiplier]
    name: str = ""

    @classmethod
    def from_elements(cls, source: AlgebroidData, target: AlgebroidData, images: LinMap,
                      name: str = "") -> "MorphismSpec":
        """``images`` has as column ``d`` the element ``pi(e_d)`` of ``A``."""
        A = target.A
        return cls(source, target, [Multiplier.of_element(A, images.columns[d]) for d in range(source.n)], name)

    def apply(self, d: Vec) -> Multiplier:
        n = self.target.n
        lam = LinMap.zero(n, n)
        rho = LinMap.zero(n, n)
        for k, c in d.items():
            lam = lam + self.pi[k].lam.scale(c)
            rho = rho + self.pi[k].rho.scale(c)
        return Multiplier(lam, rho)

    def element(self, d: Vec) -> Optional[Vec]:
        one = self.target.A.one()
        return self.apply(d).lam(one) if one is not None else None

    @cached_property
    def source_hopf(self) -> Optional[HopfStructure]:
        return check_counit_antipode(self.source)[0]

    @cached_property
    def target_hopf(self) -> Optional[HopfStructure]:
        return check_counit_antipode(self.target)[0]


def compose(f: MorphismSpec, g: MorphismSpec) -> MorphismSpec:
    """``g o f`` for ``f: D -> M(A)`` and ``g: A -> M(X)``, both unital."""
    if f.target is not g.source:
        raise ValueError("morphisms are not composable")
    imgs = []
    for d in range(f.source.n):
        a = f.element({d: ONE})
        imgs.append(g.apply(a))
    return MorphismSpec(f.source, g.target, imgs, name=f"{g.name} o {f.name}")


def _base_element(emb, x: Vec, D) -> Vec:
    return emb.lam(x)(D.one())


def base_report(spec: MorphismSpec) -> Report:
    """Homomorphism, non-degeneracy and the base compatibilities."""
    src, tgt = spec.source, spec.target
    D, A = src.A, tgt.A
    nD, n = D.dim, A.dim
    rep = Report(f"morphism base conditions {spec.name}")
    oneD = D.one()
    rep.add("source is unital", oneD is not None)
    if oneD is None:
        return rep
    bad = next(((i, j) for i in range(nD) for j in range(nD)
                if spec.apply(D.mult.get((i, j), {})) != spec.pi[i] * spec.pi[j]), None)
    rep.add("pi is multiplicative", bad is None, {"pair": bad})
    left = Subspace(n, [spec.pi[d].lam.columns[a] for d in range(nD) for a in range(n)])
    right = Subspace(n, [spec.pi[d].rho.columns[a] for d in range(nD) for a in range(n)])
    rep.add("pi is non-degenerate", left.dim == n and right.dim == n,
            {"dim pi(D)A": left.dim, "dim A pi(D)": right.dim})
    for label, semb, temb, ts, tt in (("E", src.B, tgt.B, src.tB, tgt.tB), ("F", src.C, tgt.C, src.tC, tgt.tC)):
        tb = "B" if label == "E" else "C"
        coords = []
        for e in range(semb.dim):
            c = temb.coords_of(spec.apply(_base_element(semb, {e: ONE}, D)))
            coords.append(c)
        inside = all(c is not None for c in coords)
        rep.add(f"pi({label}) lies in {tb}", inside,
                {"outside": [e for e, c in enumerate(coords) if c is None]})
        if not inside:
            continue
        R = temb.algebra
        prods_l = Subspace(R.dim, [R.mul(c, {x: ONE}) for c in coords for x in range(R.dim)])
        prods_r = Subspace(R.dim, [R.mul({x: ONE}, c) for c in coords for x in range(R.dim)])
        rep.add(f"pi({label}){tb} = {tb} = {tb}pi({label})", prods_l.dim == R.dim == prods_r.dim)
        # pi o t_E = t_B o pi, read in the other base
        other_s = src.C if label == "E" else src.B
        other_t = tgt.C if label == "E" else tgt.B
        bad = None
        for e in range(semb.dim):
            lhs = other_t.coords_of(spec.apply(_base_element(other_s, ts.columns[e], D)))
            rhs = tt(coords[e])
            if lhs is None or _clean(lhs) != _clean(rhs):
                bad = {"base element": e, "pi(t(e))": lhs, "t(pi(e))": rhs}
                break
        rep.add(f"pi o t_{label} = t_{tb} o pi", bad is None, bad)
    return rep


def delta_report(spec: MorphismSpec, exhaustive: Optional[bool] = None) -> Report:
    """Both comultiplication conditions in elementwise form.

    With ``exhaustive`` all triples ``(d, d', d'')`` and pairs ``(a', a'')`` are
    used; otherwise ``d' = d'' = 1`` and ``a' = a'' = 1``, which suffices for
    unital algebras since both sides are module maps over ``A (x) A``.
    """
    src, tgt = spec.source, spec.target
    D, A = src.A, tgt.A
    nD, n = D.dim, A.dim
    if exhaustive is None:
        exhaustive = nD ** 3 * n * n <= 20000
    rep = Report(f"morphism comultiplications {spec.name}")
    ext = ExtendedComultiplication(tgt)
    oneD, oneA = D.one(), A.one()
    if exhaustive:
        dpairs = [({i: ONE}, {j: ONE}) for i in range(nD) for j in range(nD)]
        apairs = [({i: ONE}, {j: ONE}) for i in range(n) for j in range(n)]
    else:
        dpairs = [(oneD, oneD)]
        apairs = [(oneA, oneA)]
    pis = spec.pi

    def pi_rep(t: Vec, nd: int) -> List[Tuple[object, Multiplier, Multiplier]]:
        out = []
        for k, c in t.items():
            p, q = divmod(k, nd)
            out.append((c, pis[p], pis[q]))
        return out

    DB = [ext.delta_B(pis[d]) for d in range(nD)]
    DC = [ext.delta_C(pis[d]) for d in range(nD)]
    bad_b = bad_c = None
    for d in range(nD):
        for d1, d2 in dpairs:
            # (d' (x) d'')Delta_E(d) and Delta_F(d)(d' (x) d'')
            rb = _legs(src.delta_B_right({d: ONE}, d2), D.lmat(d1), LinMap.identity(nD), nD)
            rc = _legs(src.delta_C_right({d: ONE}, d2), D.rmat(d1), LinMap.identity(nD), nD)
            P1, P2 = spec.apply(d1), spec.apply(d2)
            for a1, a2 in apairs:
                if bad_b is None:
                    x = P1.rho(a1)
                    y = P2.rho(a2)
                    lhs = DB[d](ext.TB.project(tensor(x, y, n)))
                    rhs: Vec = {}
                    for c, p, q in pi_rep(rb, nD):
                        vaxpy(rhs, c, tensor(p.rho(a1), q.rho(a2), n))
                    if _clean(lhs) != _clean(ext.TB.project(rhs)):
                        bad_b = {"d": d, "d'": d1, "d''": d2, "a'": a1, "a''": a2}
                if bad_c is None:
                    x = P1.lam(a1)
                    y = P2.lam(a2)
                    lhs = DC[d](ext.TC.project(tensor(x, y, n)))
                    rhs = {}
                    for c, p, q in pi_rep(rc, nD):
                        vaxpy(rhs, c, tensor(p.lam(a1), q.lam(a2), n))
                    if _clean(lhs) != _clean(ext.TC.project(rhs)):
                        bad_c = {"d": d, "d'": d1, "d''": d2, "a'": a1, "a''": a2}
    note = "all basis triples and pairs" if exhaustive else "units only"
    rep.add("Delta_B(pi(d)) = (pi x pi)(Delta_E(d))", bad_b is None, bad_b, note=note)
    rep.add("Delta_C(pi(d)) = (pi x pi)(Delta_F(d))", bad_c is None, bad_c, note=note)
    return rep


def validate_morphism(spec: MorphismSpec, exhaustive: Optional[bool] = None) -> Report:
    rep = Report(f"morphism {spec.name}")
    b = base_report(spec)
    rep.extend(b, "base: ")
    if not b.ok:
        rep.skip("comultiplications", "base conditions fail")
        return rep
    rep.extend(delta_report(spec, exhaustive), "comultiplication: ")
    return rep


def check_antipode_preserved(spec: MorphismSpec) -> Report:
    """``pi o S_D = S_A o pi`` and the counit compatibilities
    ``eps_B(pi(d)a) = eps_B(pi(eps_E(d))a)``, ``_C eps(a pi(d)) = _C eps(a pi(_F eps(d)))``."""
    rep = Report(f"antipode and counits under {spec.name}")
    hs, ht = spec.source_hopf, spec.target_hopf
    if hs is None or ht is None:
        rep.add("both sides have counits and antipodes", False)
        return rep
    src, tgt = spec.source, spec.target
    D, A = src.A, tgt.A
    nD, n = D.dim, A.dim
    SA, SD = ht.antipode.S, hs.antipode.S
    bad = None
    for d in range(nD):
        lhs = spec.apply(SD.columns[d])
        T = spec.pi[d]
        # S_A extended to multipliers: S(T) b = S(S^-1(b) T), b S(T) = S(T S^-1(b))
        Sinv = ht.antipode.Sinv
        lam = LinMap(n, n, [SA(T.rho(Sinv.columns[b])) for b in range(n)])
        rho = LinMap(n, n, [SA(T.lam(Sinv.columns[b])) for b in range(n)])
        if lhs.lam != lam or lhs.rho != rho:
            bad = d
            break
    rep.add("pi o S_D = S_A o pi", bad is None, {"basis": bad})
    epsB, epsC = ht.counits.epsB, ht.counits.epsC
    epsE, epsF = hs.counits.epsB, hs.counits.epsC
    bad = None
    for d in range(nD):
        pe = spec.apply(_base_element(src.B, epsE.columns[d], D))
        pf = spec.apply(_base_element(src.C, epsF.columns[d], D))
        for a in range(n):
            if epsB(spec.pi[d].lam({a: ONE})) != epsB(pe.lam({a: ONE})):
                bad = ("eps_B", d, a)
                break
            if epsC(spec.pi[d].rho({a: ONE})) != epsC(pf.rho({a: ONE})):
                bad = ("_C eps", d, a)
                break
        if bad:
            break
    rep.add("counits are compatible with pi", bad is None, bad)
    return rep


# ---------------------------------------------------------------------------
# morphisms into a dual


def dual_morphism(source: AlgebroidData, d, images: LinMap, name: str = "") -> MorphismSpec:
    """``pi: D -> A^`` with ``images`` in the dual coordinates ``e_i . phi``."""
    return MorphismSpec.from_elements(source, d.dual_core, images, name)


def check_morphism_into_dual(spec: MorphismSpec, d) -> Report:
    """The pairing form of the comultiplication conditions for a target dual:

    ``((pi x pi)((d' (x) d'')Delta_E(d)) | a' (x) a'') = pi(d)((a' <| pi(d'))(a'' <| pi(d'')))``
    ``((pi x pi)(Delta_F(d)(d' (x) d'')) | a' (x) a'') = pi(d)((pi(d') |> a')(pi(d'') |> a''))``
    """
    rep = Report(f"morphism into the dual {spec.name}")
    b = base_report(spec)
    rep.extend(b, "base: ")
    if not b.ok:
        rep.skip("pairing tests", "base conditions fail")
        return rep
    src = spec.source
    D = src.A
    nD = D.dim
    A = d.A
    n = d.n
    imgs = [spec.element({k: ONE}) for k in range(nD)]
    Pb, Pc = d.pairings["aba"], d.pairings["aca"]
    act_r = [d.act_right_hat(v) for v in imgs]
    act_l = [d.act_left_hat(v) for v in imgs]
    fun = [d.functional(v) for v in imgs]
    Dhat = d.algebra

    def dual_pair(t: Vec, nd: int) -> Vec:
        out: Vec = {}
        for k, c in t.items():
            p, q = divmod(k, nd)
            for i, x in imgs[p].items():
                for j, y in imgs[q].items():
                    vaxpy(out, c * x * y, {i * n + j: ONE})
        return out

    bad_b = bad_c = None
    for k in range(nD):
        for k1 in range(nD):
            for k2 in range(nD):
                rb = _legs(src.delta_B_right({k: ONE}, {k2: ONE}), D.lmat({k1: ONE}), LinMap.identity(nD), nD)
                rc = _legs(src.delta_C_right({k: ONE}, {k2: ONE}), D.rmat({k1: ONE}), LinMap.identity(nD), nD)
                vb = Pb(dual_pair(rb, nD))
                vc = Pc(dual_pair(rc, nD))
                for a1 in range(n):
                    for a2 in range(n):
                        if bad_b is None:
                            prod = A.mul(act_r[k1].columns[a1], act_r[k2].columns[a2])
                            if vb.get(a1 * n + a2, 0) != vdot(fun[k], prod):
                                bad_b = {"d": k, "d'": k1, "d''": k2, "a'": a1, "a''": a2}
                        if bad_c is None:
                            prod = A.mul(act_l[k1].columns[a1], act_l[k2].columns[a2])
                            if vc.get(a1 * n + a2, 0) != vdot(fun[k], prod):
                                bad_c = {"d": k, "d'": k1, "d''": k2, "a'": a1, "a''": a2}
    rep.add("pairing test against Delta_E", bad_b is None, bad_b)
    rep.add("pairing test against Delta_F", bad_c is None, bad_c)
    direct = validate_morphism(spec)
    rep.add("agrees with the direct validation", direct.ok == (bad_b is None and bad_c is None),
            {"direct": direct.ok})
    return rep
