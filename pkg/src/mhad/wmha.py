"""Bridge between unital weak Hopf algebras with integrals and measured
algebroids over Frobenius bases.

Only the unital finite-dimensional case is treated: ``Delta(a)`` is an element
of ``A (x) A`` and ``E = Delta(1)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

from .algebra import FiniteAlgebra, Multiplier, find_local_unit, tensor_algebra
from .algebroid import AlgebroidData
from .bimodule import BaseEmbedding, Factorizer
from .examples import GroupoidSpec, SpecError, canonical_from_coproduct, check_groupoid
from .integration import MeasuredAlgebroid, full_battery
from .linalg import ONE, LinMap, NoSolution, Vec, column_space, inverse, solve, solve_equations, vaxpy, vdot
from .report import Report


def _clean(v: Vec) -> Vec:
    return {k: c for k, c in v.items() if c}


@dataclass
class WMHASpec:
    A: FiniteAlgebra
    Delta: LinMap  # A -> A (x) A, index i * n + j
    eps: Vec
    phi: Vec
    psi: Vec
    name: str = ""

    @property
    def E(self) -> Vec:
        return self.Delta(self.A.one())

    def images(self, a: Vec, b: Vec) -> dict:
        """The four products ``Delta(a)(1 (x) b)``, ``Delta(a)(b (x) 1)``,
        ``(1 (x) b)Delta(a)`` and ``(b (x) 1)Delta(a)``."""
        A, n = self.A, self.A.dim
        d = self.Delta(a)
        one = A.one()
        return {
            "Delta(a)(1(x)b)": _tmul(A, d, _t(one, b, n)),
            "Delta(a)(b(x)1)": _tmul(A, d, _t(b, one, n)),
            "(1(x)b)Delta(a)": _tmul(A, _t(one, b, n), d),
            "(b(x)1)Delta(a)": _tmul(A, _t(b, one, n), d),
        }


def _t(u: Vec, v: Vec, n: int) -> Vec:
    return {i * n + j: x * y for i, x in u.items() for j, y in v.items()}


def _tmul(A: FiniteAlgebra, s: Vec, t: Vec) -> Vec:
    n = A.dim
    out: Vec = {}
    for k1, c1 in s.items():
        p1, q1 = divmod(k1, n)
        for k2, c2 in t.items():
            p2, q2 = divmod(k2, n)
            for i, x in A.mult.get((p1, p2), {}).items():
                for j, y in A.mult.get((q1, q2), {}).items():
                    vaxpy(out, c1 * c2 * x * y, {i * n + j: ONE})
    return out


def _tmul3(A: FiniteAlgebra, s: Vec, t: Vec) -> Vec:
    n = A.dim
    out: Vec = {}
    for k1, c1 in s.items():
        p1, r = divmod(k1, n * n)
        q1, s1 = divmod(r, n)
        for k2, c2 in t.items():
            p2, r2 = divmod(k2, n * n)
            q2, s2 = divmod(r2, n)
            for i, x in A.mult.get((p1, p2), {}).items():
                for j, y in A.mult.get((q1, q2), {}).items():
                    for k, z in A.mult.get((s1, s2), {}).items():
                        vaxpy(out, c1 * c2 * x * y * z, {(i * n + j) * n + k: ONE})
    return out


def _delta_leg(D: LinMap, t: Vec, leg: int, n: int) -> Vec:
    out: Vec = {}
    for k, c in t.items():
        p, q = divmod(k, n)
        if leg == 0:
            for kk, x in D.columns[p].items():
                vaxpy(out, c * x, {kk * n + q: ONE})
        else:
            for kk, x in D.columns[q].items():
                vaxpy(out, c * x, {p * n * n + kk: ONE})
    return out


# ---------------------------------------------------------------------------
# source and target maps, antipode


def eps_t(w: WMHASpec) -> LinMap:
    """``a -> eps(1_(1) a) 1_(2)``."""
    A, n = w.A, w.A.dim
    E = w.E
    cols = []
    for a in range(n):
        out: Vec = {}
        for k, c in E.items():
            p, q = divmod(k, n)
            vaxpy(out, c * vdot(w.eps, A.mult.get((p, a), {})), {q: ONE})
        cols.append(_clean(out))
    return LinMap(n, n, cols)


def eps_s(w: WMHASpec) -> LinMap:
    """``a -> 1_(1) eps(a 1_(2))``."""
    A, n = w.A, w.A.dim
    E = w.E
    cols = []
    for a in range(n):
        out: Vec = {}
        for k, c in E.items():
            p, q = divmod(k, n)
            vaxpy(out, c * vdot(w.eps, A.mult.get((a, q), {})), {p: ONE})
        cols.append(_clean(out))
    return LinMap(n, n, cols)


def wmha_antipode(w: WMHASpec) -> Optional[LinMap]:
    """Solve ``a_(1) S(a_(2)) = eps_t(a)``, ``S(a_(1)) a_(2) = eps_s(a)`` and
    ``S(a_(1)) a_(2) S(a_(3)) = S(a)``.  The last one is used in its two
    linear forms and checked as written afterwards."""
    A, n = w.A, w.A.dim
    et, es = eps_t(w), eps_s(w)
    # unknown S[r, c] at index r * n + c (row r, column c)
    eqs = []
    for a in range(n):
        lt: List[Vec] = [{} for _ in range(n)]
        ls: List[Vec] = [{} for _ in range(n)]
        for k, c in w.Delta.columns[a].items():
            p, q = divmod(k, n)
            # p S(e_q) = sum_r S[r, q] p e_r
            for r in range(n):
                for i, x in A.mult.get((p, r), {}).items():
                    vaxpy(lt[i], c * x, {r * n + q: ONE})
                for i, x in A.mult.get((r, q), {}).items():
                    vaxpy(ls[i], c * x, {r * n + p: ONE})
        # S(a) = eps_s(a_(1)) S(a_(2)) = S(a_(1)) eps_t(a_(2)) are the linear forms of the third axiom
        m1: List[Vec] = [{} for _ in range(n)]
        m2: List[Vec] = [{} for _ in range(n)]
        for r in range(n):
            m1[r][r * n + a] = ONE
            m2[r][r * n + a] = ONE
        for k, c in w.Delta.columns[a].items():
            p, q = divmod(k, n)
            for r in range(n):
                for i, x in A.mul(es.columns[p], {r: ONE}).items():
                    vaxpy(m1[i], -c * x, {r * n + q: ONE})
                for i, x in A.mul({r: ONE}, et.columns[q]).items():
                    vaxpy(m2[i], -c * x, {r * n + p: ONE})
        for i in range(n):
            eqs.append((lt[i], et.columns[a].get(i, 0)))
            eqs.append((ls[i], es.columns[a].get(i, 0)))
            eqs.append((m1[i], 0))
            eqs.append((m2[i], 0))
    try:
        sol = solve_equations(n * n, eqs)
    except NoSolution:
        return None
    S = LinMap(n, n, [_clean({r: sol.particular.get(r * n + c, 0) for r in range(n)}) for c in range(n)])
    if not sol.unique or not _third_antipode_identity(w, S):
        return None
    return S


def _third_antipode_identity(w: WMHASpec, S: LinMap) -> bool:
    A, n = w.A, w.A.dim
    for a in range(n):
        out: Vec = {}
        for k, c in w.Delta.columns[a].items():
            p, q = divmod(k, n)
            for k2, c2 in w.Delta.columns[p].items():
                p1, p2 = divmod(k2, n)
                vaxpy(out, c * c2, A.mul(A.mul(S.columns[p1], {p2: ONE}), S.columns[q]))
        if _clean(out) != S.columns[a]:
            return False
    return True


# ---------------------------------------------------------------------------
# axioms of the weak Hopf algebra


def wmha_report(w: WMHASpec) -> Report:
    A, n = w.A, w.A.dim
    rep = Report(f"weak Hopf algebra {w.name}")
    D = w.Delta
    one = A.one()
    rep.add("A is unital", one is not None)
    if one is None:
        return rep
    bad = None
    for a in range(n):
        if _delta_leg(D, D.columns[a], 0, n) != _delta_leg(D, D.columns[a], 1, n):
            bad = a
            break
    rep.add("Delta is coassociative", bad is None, {"basis": bad})
    bad = next(((a, b) for a in range(n) for b in range(n)
                if _clean(D(A.mult.get((a, b), {}))) != _clean(_tmul(A, D.columns[a], D.columns[b]))), None)
    rep.add("Delta is multiplicative", bad is None, {"pair": bad})
    E = w.E
    rep.add("E = Delta(1) is idempotent", _clean(_tmul(A, E, E)) == _clean(E))
    # (Delta (x) id)E = (E (x) 1)(1 (x) E) = (1 (x) E)(E (x) 1) = (id (x) Delta)E
    E1 = {k * n + i: c * x for k, c in E.items() for i, x in one.items()}
    E2 = {i * n * n + k: c * x for k, c in E.items() for i, x in one.items()}
    forms = [_clean(_delta_leg(D, E, 0, n)), _clean(_tmul3(A, E1, E2)),
             _clean(_tmul3(A, E2, E1)), _clean(_delta_leg(D, E, 1, n))]
    rep.add("weak comultiplicativity of the unit", all(f == forms[0] for f in forms))
    # fullness and the legs of E
    rep.add("Delta(A)(1 (x) A) = E(A (x) A)",
            column_space(LinMap(n * n, n * n, [w.images({a: ONE}, {b: ONE})["Delta(a)(1(x)b)"]
                                               for a in range(n) for b in range(n)]))
            == column_space(LinMap(n * n, n * n, [_tmul(A, E, _t({a: ONE}, {b: ONE}, n))
                                                  for a in range(n) for b in range(n)])))
    # counit
    bad = None
    for a in range(n):
        l: Vec = {}
        r: Vec = {}
        for k, c in D.columns[a].items():
            p, q = divmod(k, n)
            vaxpy(l, c * w.eps.get(p, 0), {q: ONE})
            vaxpy(r, c * w.eps.get(q, 0), {p: ONE})
        if _clean(l) != {a: ONE} or _clean(r) != {a: ONE}:
            bad = a
            break
    rep.add("counit", bad is None, {"basis": bad})
    # eps(xyz) = eps(x y_(1)) eps(y_(2) z) = eps(x y_(2)) eps(y_(1) z)
    bad = None
    for x in range(n):
        for y in range(n):
            for z in range(n):
                lhs = vdot(w.eps, A.mul(A.mult.get((x, y), {}), {z: ONE}))
                r1 = r2 = 0
                for k, c in D.columns[y].items():
                    p, q = divmod(k, n)
                    r1 += c * vdot(w.eps, A.mult.get((x, p), {})) * vdot(w.eps, A.mult.get((q, z), {}))
                    r2 += c * vdot(w.eps, A.mult.get((x, q), {})) * vdot(w.eps, A.mult.get((p, z), {}))
                if not lhs == r1 == r2:
                    bad = (x, y, z)
                    break
            if bad:
                break
        if bad:
            break
    rep.add("weak multiplicativity of the counit", bad is None, {"triple": bad})
    S = wmha_antipode(w)
    rep.add("antipode exists and is bijective", S is not None and _bijective(S))
    if S is None:
        return rep
    # fullness of the integrals
    B = column_space(eps_s(w))
    C = column_space(eps_t(w))
    rep.add("(phi (x) id)((A (x) 1)E) = C", _slice_space(A, w.phi, E, 0) == C)
    rep.add("(id (x) psi)(E(1 (x) A)) = B", _slice_space(A, w.psi, E, 1) == B)
    return rep


def _bijective(S: LinMap) -> bool:
    try:
        inverse(S)
        return True
    except NoSolution:
        return False


def _slice_space(A: FiniteAlgebra, f: Vec, E: Vec, leg: int):
    n = A.dim
    cols = []
    for a in range(n):
        out: Vec = {}
        for k, c in E.items():
            p, q = divmod(k, n)
            if leg == 0:
                vaxpy(out, c * vdot(f, A.mult.get((a, p), {})), {q: ONE})
            else:
                vaxpy(out, c * vdot(f, A.mult.get((q, a), {})), {p: ONE})
        cols.append(_clean(out))
    return column_space(LinMap(n, n, cols))


# ---------------------------------------------------------------------------
# Frobenius tuples


def subalgebra(A: FiniteAlgebra, vectors: List[Vec], name: str) -> Tuple[FiniteAlgebra, LinMap]:
    """A subalgebra spanned by ``vectors`` with its inclusion matrix."""
    basis = column_space(LinMap(A.dim, len(vectors), vectors)).basis()
    incl = LinMap(A.dim, len(basis), basis)
    m = len(basis)
    mult = {}
    for i in range(m):
        for j in range(m):
            p = A.mul(basis[i], basis[j])
            if p:
                mult[(i, j)] = solve(incl, p).particular
    one = A.one()
    unit = solve(incl, one).particular if one is not None else None
    return FiniteAlgebra(m, mult, labels=[f"{name}{i}" for i in range(m)], unit=unit, name=name), incl


def frobenius_validate(B: FiniteAlgebra, C: FiniteAlgebra, tB: LinMap, tC: LinMap,
                       muB: Vec, muC: Vec, E: Optional[Vec] = None) -> Tuple[Report, Optional[Vec]]:
    """Check the Frobenius tuple conditions; without ``E`` the unique solution
    of the linear conditions is searched first.  ``E`` lives in ``B (x) C``
    with index ``x * dim(C) + y``."""
    rep = Report("Frobenius tuple")
    nB, nC = B.dim, C.dim
    BC = tensor_algebra(B, C)
    oneB, oneC = B.one(), C.one()
    tBi, tCi = inverse(tB), inverse(tC)

    def conditions():
        """(name, linear map on E, right-hand side)"""
        out = []
        for y in range(nC):
            # E(1 (x) y) - E(t_C(y) (x) 1)
            r1 = BC.rmat(_t(oneB, {y: ONE}, nC))
            r2 = BC.rmat(_t(tC.columns[y], oneC, nC))
            out.append((f"E(1 (x) y) = E(t_C(y) (x) 1) at y={y}", r1 - r2, {}))
        for x in range(nB):
            l1 = BC.lmat(_t({x: ONE}, oneC, nC))
            l2 = BC.lmat(_t(oneB, tB.columns[x], nC))
            out.append((f"(x (x) 1)E = (1 (x) t_B(x))E at x={x}", l1 - l2, {}))
        out.append(("E_(1) t_B^-1(E_(2)) = 1",
                    LinMap(nB, nB * nC, [B.mul({k // nC: ONE}, tBi.columns[k % nC]) for k in range(nB * nC)]),
                    oneB))
        out.append(("t_C^-1(E_(1)) E_(2) = 1",
                    LinMap(nC, nB * nC, [C.mul(tCi.columns[k // nC], {k % nC: ONE}) for k in range(nB * nC)]),
                    oneC))
        out.append(("(mu_B (x) id)E = 1",
                    LinMap(nC, nB * nC, [_clean({k % nC: muB.get(k // nC, 0)}) for k in range(nB * nC)]), oneC))
        out.append(("(id (x) mu_C)E = 1",
                    LinMap(nB, nB * nC, [_clean({k // nC: muC.get(k % nC, 0)}) for k in range(nB * nC)]), oneB))
        return out

    conds = conditions()
    if E is None:
        eqs = []
        for _, M, rhs in conds:
            for r, row in enumerate(M.row_dicts()):
                eqs.append((row, rhs.get(r, 0)))
        try:
            sol = solve_equations(nB * nC, eqs)
        except NoSolution:
            rep.add("an idempotent E satisfying the conditions exists", False, {"reason": "inconsistent"})
            return rep, None
        rep.add("E is determined by the conditions", sol.unique, {"free parameters": sol.nullspace.dim})
        E = sol.particular
    for name, M, rhs in conds:
        got = _clean(M(E))
        rep.add(name, got == _clean(rhs), {"got": got, "want": rhs})
    rep.add("E is idempotent", _clean(BC.mul(E, E)) == _clean(E))
    bad = next(((x, y) for x in range(nB) for y in range(nB)
                if tB(B.mult.get((x, y), {})) != C.mul(tB.columns[y], tB.columns[x])), None)
    rep.add("t_B is anti-multiplicative", bad is None, {"pair": bad})
    bad = next(((x, y) for x in range(nC) for y in range(nC)
                if tC(C.mult.get((x, y), {})) != B.mul(tC.columns[y], tC.columns[x])), None)
    rep.add("t_C is anti-multiplicative", bad is None, {"pair": bad})
    return rep, E


def base_frobenius(mm: MeasuredAlgebroid) -> Tuple[Report, Optional[Vec]]:
    core = mm.core
    return frobenius_validate(core.B.algebra, core.C.algebra, core.tB, core.tC, mm.muB, mm.muC)


def local_units_report(mm: MeasuredAlgebroid) -> Report:
    """If the base is a Frobenius tuple, ``A`` has local units."""
    rep = Report(f"local units {mm.name}")
    fr, _ = base_frobenius(mm)
    if not fr.ok:
        rep.skip("A has local units", "base is not a Frobenius tuple: "
                 + "; ".join(c.name for c in fr.failures()))
        return rep
    rep.add("base is a Frobenius tuple", True)
    rep.add("A has local units", find_local_unit(mm.A) is not None)
    return rep


# ---------------------------------------------------------------------------
# the two directions


def wmha_to_algebroid(w: WMHASpec, check: bool = True) -> MeasuredAlgebroid:
    if check:
        r = wmha_report(w)
        if not r.ok:
            raise SpecError("; ".join(c.name for c in r.failures()))
    A, n = w.A, w.A.dim
    S = wmha_antipode(w)
    if S is None:
        raise SpecError("no antipode")
    Sinv = inverse(S)
    Balg, iB = subalgebra(A, eps_s(w).columns, "b")
    Calg, iC = subalgebra(A, eps_t(w).columns, "c")
    Bemb = BaseEmbedding(Balg, [Multiplier.of_element(A, v) for v in iB.columns], "B")
    Cemb = BaseEmbedding(Calg, [Multiplier.of_element(A, v) for v in iC.columns], "C")
    tB = LinMap(Calg.dim, Balg.dim, [solve(iC, Sinv(v)).particular for v in iB.columns])
    tC = LinMap(Balg.dim, Calg.dim, [solve(iB, Sinv(v)).particular for v in iC.columns])
    TL, TR, LT, RT = canonical_from_coproduct(A, w.Delta)
    core = AlgebroidData(A, Bemb, Cemb, tB, tC, TL, TR, LT, RT, name=w.name)
    # mu_B(eps_s(a)) = eps(a) = mu_C(eps_t(a))
    es, et = eps_s(w), eps_t(w)
    muB = _clean({k: vdot(w.eps, solve(es, v).particular) for k, v in enumerate(iB.columns)})
    muC = _clean({k: vdot(w.eps, solve(et, v).particular) for k, v in enumerate(iC.columns)})
    psiB = Factorizer(core.mods["_BA"], muB).partial(w.psi)
    phiC = Factorizer(core.mods["_CA"], muC).partial(w.phi)
    return MeasuredAlgebroid(core, muB, muC, phiC, psiB, name=w.name)


def algebroid_to_wmha(mm: MeasuredAlgebroid) -> WMHASpec:
    fr, Ebc = base_frobenius(mm)
    if not fr.ok:
        raise SpecError("base is not a Frobenius tuple: " + "; ".join(c.name for c in fr.failures()))
    core = mm.core
    A, n = core.A, core.n
    one = A.one()
    nC = core.C.dim
    E = _clean(_embed_E(core, Ebc, nC))
    cols = []
    for a in range(n):
        cols.append(_clean(_tmul(A, E, core.delta_C_right({a: ONE}, one))))
    return WMHASpec(A, LinMap(n * n, n, cols), dict(mm.eps), dict(mm.phi), dict(mm.psi), name=mm.name)


def _embed_E(core: AlgebroidData, Ebc: Vec, nC: int) -> Vec:
    A, n = core.A, core.n
    one = A.one()
    out: Vec = {}
    for k, c in Ebc.items():
        x, y = divmod(k, nC)
        u = core.lamB({x: ONE})(one)
        v = core.lamC({y: ONE})(one)
        for i, p in u.items():
            for j, q in v.items():
                vaxpy(out, c * p * q, {i * n + j: ONE})
    return out


def iota_report(mm: MeasuredAlgebroid) -> Report:
    """``iota_C`` and ``iota_B`` descend to the quotients and split the projections."""
    rep = Report(f"Frobenius sections {mm.name}")
    fr, Ebc = base_frobenius(mm)
    if not fr.ok:
        rep.skip("sections", "base is not a Frobenius tuple")
        return rep
    core = mm.core
    A = core.A
    E = _embed_E(core, Ebc, core.C.dim)
    for key, side in (("TC", "left"), ("TB", "right")):
        T = core.tensors[key]
        mult = (lambda t: _tmul(A, E, t)) if side == "left" else (lambda t: _tmul(A, t, E))
        bad = next((v for v in T.relations.basis() if _clean(mult(v))), None)
        rep.add(f"section of {key} is well defined", bad is None, {"relation": bad})
        bad = next((k for k in range(A.dim ** 2) if not T.equal(mult({k: ONE}), {k: ONE})), None)
        rep.add(f"projection after section is the identity on {key}", bad is None, {"basis": bad})
    # the two descriptions of Delta agree
    n = A.dim
    one = A.one()
    bad = next((a for a in range(n)
                if _clean(_tmul(A, E, core.delta_C_right({a: ONE}, one)))
                != _clean(_tmul(A, core.delta_B_right({a: ONE}, one), E))), None)
    rep.add("E Delta_C(a) = Delta_B(a) E", bad is None, {"basis": bad})
    return rep


# ---------------------------------------------------------------------------
# groupoids as weak Hopf algebras


def groupoid_wmha(g: GroupoidSpec) -> WMHASpec:
    """Functions on a finite groupoid: ``Delta(f)(x, y) = f(xy)`` on composable
    pairs, ``eps`` the sum over units and ``phi = psi`` the sum over all arrows.

    The weights of ``g`` are not used: in this picture the base weights are
    fixed by ``mu(eps_s(a)) = eps(a)``, which is the counting measure on units.
    """
    from .algebra import function_algebra

    err = check_groupoid(g)
    if err:
        raise SpecError(f"not a groupoid: {err}")
    arrows = g.arrows
    n = len(arrows)
    idx = {a: i for i, a in enumerate(arrows)}
    A = function_algebra(arrows, name=g.name)
    cols = []
    for c in arrows:
        d: Vec = {}
        for (a, b), ab in g.compose.items():
            if ab == c:
                d[idx[a] * n + idx[b]] = ONE
        cols.append(d)
    eps = {idx[u]: ONE for u in g.units}
    phi = {i: ONE for i in range(n)}
    psi = dict(phi)
    return WMHASpec(A, LinMap(n * n, n, cols), eps, phi, psi, name=f"{g.name} (weak Hopf)")


def round_trip_report(w: WMHASpec) -> Report:
    """``W -> algebroid -> W`` recovers ``Delta``, ``eps``, ``phi`` and ``psi``."""
    rep = Report(f"weak Hopf round trip {w.name}")
    wr = wmha_report(w)
    rep.extend(wr, "input: ")
    if not wr.ok:
        return rep
    mm = wmha_to_algebroid(w, check=False)
    rep.extend(full_battery(mm), "algebroid: ")
    w2 = algebroid_to_wmha(mm)
    rep.add("Delta recovered", w2.Delta == w.Delta)
    rep.add("counit recovered", _clean(w2.eps) == _clean(w.eps))
    rep.add("phi recovered", _clean(w2.phi) == _clean(w.phi))
    rep.add("psi recovered", _clean(w2.psi) == _clean(w.psi))
    return rep
