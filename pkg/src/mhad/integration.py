"""Base weights, partial integrals, modular automorphisms and the modular element."""

from __future__ import annotations

from functools import cached_property
from typing import Dict, List, Optional, Tuple

from .algebra import FiniteAlgebra, Multiplier, is_homomorphism
from .algebroid import (
    AlgebroidData,
    HopfStructure,
    NoAntipode,
    NoCounit,
    algebroid_battery,
    base_star,
    check_local_projectivity,
    compute_antipode,
    compute_counits,
)
from .bimodule import (
    Factorizer,
    NotFactorizable,
    apply_pair,
    flip,
    slice_left,
    slice_right,
)
from .linalg import (
    ONE,
    LinMap,
    NoSolution,
    NotHermitian,
    Vec,
    conj,
    hermitian_psd,
    inverse,
    is_bijective,
    rank,
    solve_equations,
    vdot,
)
from .report import Report


class NoModularAutomorphism(ValueError):
    pass


def weight_row(mu: Vec, f: LinMap) -> Vec:
    """``mu o f`` as a functional on the domain of ``f``."""
    out = {}
    for i, col in enumerate(f.columns):
        v = vdot(mu, col)
        if v:
            out[i] = v
    return out


def gram(A: FiniteAlgebra, omega: Vec) -> LinMap:
    """``G[i, j] = omega(e_i e_j)``."""
    n = A.dim
    return LinMap.from_grid([[vdot(omega, A.mult.get((i, j), {})) for j in range(n)] for i in range(n)]) \
        if n else LinMap(0, 0)


def is_faithful(A: FiniteAlgebra, omega: Vec) -> bool:
    return A.dim == 0 or is_bijective(gram(A, omega))


def modular_automorphism(A: FiniteAlgebra, omega: Vec) -> LinMap:
    """The unique ``sigma`` with ``omega(ab) = omega(b sigma(a))``."""
    n = A.dim
    G = gram(A, omega)
    if n and not is_bijective(G):
        raise NoModularAutomorphism("functional not faithful")
    # omega(e_b sigma(e_a)) = sum_k sigma[k, a] G[b, k] = omega(e_a e_b)
    Ginv = inverse(G) if n else G
    cols = []
    for a in range(n):
        rhs = {b: G.columns[b].get(a, 0) for b in range(n)}
        rhs = {b: c for b, c in rhs.items() if c}
        cols.append(Ginv(rhs))
    sigma = LinMap(n, n, cols)
    if not (is_bijective(sigma) and is_homomorphism(sigma, A, A)):
        raise NoModularAutomorphism("solution is not an automorphism")
    return sigma


def extend_automorphism(theta: LinMap, theta_inv: LinMap, T: Multiplier) -> Multiplier:
    return Multiplier(theta @ T.lam @ theta_inv, theta @ T.rho @ theta_inv)


def _density_right(A: FiniteAlgebra, phi: Vec, target: Vec) -> Multiplier:
    """Multiplier ``T`` with ``target(c) = phi(c T)`` for all ``c``."""
    n = A.dim
    Ginv = inverse(gram(A, phi))
    # b T = z_b with phi(a z_b) = target(a b): sum_k z_k G[a, k]
    rho_cols = []
    for b in range(n):
        rhs = {a: vdot(target, A.mult.get((a, b), {})) for a in range(n)}
        rho_cols.append(Ginv({a: c for a, c in rhs.items() if c}))
    rho = LinMap(n, n, rho_cols)
    # T b = w_b with phi(a w_b) = phi((a T) b)
    lam_cols = []
    for b in range(n):
        rhs = {a: vdot(phi, A.mul(rho.columns[a], {b: ONE})) for a in range(n)}
        lam_cols.append(Ginv({a: c for a, c in rhs.items() if c}))
    lam = LinMap(n, n, lam_cols)
    return Multiplier(lam, rho)


def _density_left(A: FiniteAlgebra, phi: Vec, target: Vec) -> Multiplier:
    """Multiplier ``T`` with ``target(c) = phi(T c)``."""
    n = A.dim
    GTinv = inverse(gram(A, phi).transpose())
    # T b = w_b with phi(w_b a) = target(b a): sum_k w_k G[k, a]
    lam_cols = []
    for b in range(n):
        rhs = {a: vdot(target, A.mult.get((b, a), {})) for a in range(n)}
        lam_cols.append(GTinv({a: c for a, c in rhs.items() if c}))
    lam = LinMap(n, n, lam_cols)
    rho_cols = []
    for b in range(n):
        # b T = z_b with phi(z_b a) = phi(b (T a))
        rhs = {a: vdot(phi, A.mul({b: ONE}, lam.columns[a])) for a in range(n)}
        rho_cols.append(GTinv({a: c for a, c in rhs.items() if c}))
    rho = LinMap(n, n, rho_cols)
    return Multiplier(lam, rho)


def invert_multiplier(T: Multiplier, n: int) -> Optional[Multiplier]:
    if not (is_bijective(T.lam) and is_bijective(T.rho)):
        return None
    inv = Multiplier(inverse(T.lam), inverse(T.rho))
    one = Multiplier.identity(n)
    if inv * T == one and T * inv == one:
        return inv
    return None


class MeasuredAlgebroid:
    """A regular multiplier Hopf algebroid with base weights and partial integrals.

    ``muB`` and ``muC`` are row vectors on base coordinates, ``phiC: A -> C``
    the partial left integral and ``psiB: A -> B`` the partial right integral.
    Everything else is derived.
    """

    def __init__(self, core: AlgebroidData, muB: Vec, muC: Vec, phiC: LinMap, psiB: LinMap,
                 name: str = ""):
        self.core = core
        self.muB = {k: v for k, v in muB.items() if v}
        self.muC = {k: v for k, v in muC.items() if v}
        self.phiC = phiC
        self.psiB = psiB
        self.name = name or core.name

    @property
    def A(self) -> FiniteAlgebra:
        return self.core.A

    @property
    def n(self) -> int:
        return self.core.n

    @cached_property
    def hopf(self) -> HopfStructure:
        counits, _ = compute_counits(self.core)
        anti, _ = compute_antipode(self.core, counits)
        return HopfStructure(counits, anti)

    @property
    def S(self) -> LinMap:
        return self.hopf.antipode.S

    @property
    def Sinv(self) -> LinMap:
        return self.hopf.antipode.Sinv

    @property
    def epsC(self) -> LinMap:
        return self.hopf.counits.epsC

    @property
    def epsB(self) -> LinMap:
        return self.hopf.counits.epsB

    @cached_property
    def phi(self) -> Vec:
        return weight_row(self.muC, self.phiC)

    @cached_property
    def psi(self) -> Vec:
        return weight_row(self.muB, self.psiB)

    @cached_property
    def eps(self) -> Vec:
        """Scalar counit ``mu_B o eps_B``."""
        return weight_row(self.muB, self.epsB)

    @cached_property
    def factorizers(self) -> Dict[str, Factorizer]:
        m = self.core.mods
        out = {}
        for name, mod in m.items():
            mu = self.muB if mod.base == "B" else self.muC
            out[name] = Factorizer(mod, mu)
        return out

    def partial(self, omega: Vec, module: str, check: bool = True) -> LinMap:
        return self.factorizers[module].partial(omega, check)

    @cached_property
    def partials(self) -> Dict[str, LinMap]:
        """``_B phi``, ``phi_B``, ``_C psi`` and ``psi_C``."""
        return {
            "_Bphi": self.partial(self.phi, "_BA"),
            "phi_B": self.partial(self.phi, "A_B"),
            "_Cpsi": self.partial(self.psi, "_CA"),
            "psi_C": self.partial(self.psi, "A_C"),
        }

    @cached_property
    def sigmaB(self) -> LinMap:
        return modular_automorphism(self.core.B.algebra, self.muB)

    @cached_property
    def sigmaC(self) -> LinMap:
        return modular_automorphism(self.core.C.algebra, self.muC)

    @cached_property
    def sigmaPhi(self) -> LinMap:
        return modular_automorphism(self.A, self.phi)

    @cached_property
    def sigmaPsi(self) -> LinMap:
        return modular_automorphism(self.A, self.psi)

    @cached_property
    def delta(self) -> Multiplier:
        """``psi = delta . phi``, i.e. ``psi(c) = phi(c delta)``."""
        return _density_right(self.A, self.phi, self.psi)

    @cached_property
    def deltaPlus(self) -> Multiplier:
        return _density_right(self.A, self.phi, weight_row(self.phi, self.S))

    @cached_property
    def deltaMinus(self) -> Multiplier:
        """``phi o S^-1 = phi . delta^-``, i.e. ``phi(S^-1(c)) = phi(delta^- c)``."""
        return _density_left(self.A, self.phi, weight_row(self.phi, self.Sinv))

    def replace(self, **kw) -> "MeasuredAlgebroid":
        args = dict(core=self.core, muB=self.muB, muC=self.muC, phiC=self.phiC, psiB=self.psiB,
                    name=self.name)
        args.update(kw)
        return MeasuredAlgebroid(**args)


# ---------------------------------------------------------------------------
# invariance of partial integrals


def _bimodule_witness(f: LinMap, R: FiniteAlgebra, left: List[LinMap], right: List[LinMap]) -> Optional[dict]:
    """``f(r a) = r f(a)`` and ``f(a r) = f(a) r`` for the given action matrices."""
    n = f.cols
    for r in range(R.dim):
        for a in range(n):
            if f(left[r].columns[a]) != R.mul({r: ONE}, f.columns[a]):
                return {"side": "left", "base": r, "element": a}
            if f(right[r].columns[a]) != R.mul(f.columns[a], {r: ONE}):
                return {"side": "right", "base": r, "element": a}
    return None


def _compare(L: LinMap, R: LinMap, n: int) -> Optional[dict]:
    for k in range(L.cols):
        if L.columns[k] != R.columns[k]:
            return {"pair": [k // n, k % n]}
    return None


def _pairwise(n: int, f) -> LinMap:
    return LinMap(n, n * n, [f(k // n, k % n) for k in range(n * n)])


def flip_map(n: int) -> LinMap:
    return LinMap(n * n, n * n, [{(k % n) * n + k // n: ONE} for k in range(n * n)])


def validate_left_integral(phiC: LinMap, core: AlgebroidData, S: LinMap) -> Report:
    rep = Report(f"left integral {core.name}")
    n = core.n
    m = core.mods
    C = core.C
    ys = [{k: ONE} for k in range(C.dim)]
    w = _bimodule_witness(phiC, C.algebra, [C.lam(y) for y in ys], [C.rho(y) for y in ys])
    rep.add("partial left integral is C-bilinear", w is None, w)
    M = core.maps
    # sum t_C(phi_C(q)) p over Delta_C(b)(a (x) 1)
    li1 = _compare(slice_right(phiC, m["A^C"], n) @ M["TL"],
                   _pairwise(n, lambda a, b: core.lamC(phiC.columns[b])({a: ONE})), n)
    # sum p t_B^-1(phi_C(q)) over (a (x) 1)Delta_B(b)
    gB = core.tB_inv @ phiC
    li2 = _compare(slice_right(gB, m["A_B"], n) @ M["LT"],
                   _pairwise(n, lambda a, b: core.rhoC(phiC.columns[b])({a: ONE})), n)
    li3 = _compare(S @ slice_right(phiC, m["A^C"], n) @ M["TR"],
                   slice_right(gB, m["A_B"], n) @ M["RT"] @ flip_map(n), n)
    rep.add("left invariance against Delta_C(b)(a (x) 1)", li1 is None, li1)
    rep.add("left invariance against (a (x) 1)Delta_B(b)", li2 is None, li2)
    rep.add("left invariance intertwines S with the flip", li3 is None, li3)
    verdicts = [li1 is None, li2 is None, li3 is None]
    rep.add("left invariance forms agree", len(set(verdicts)) == 1, {"verdicts": verdicts})
    return rep


def validate_right_integral(psiB: LinMap, core: AlgebroidData, S: LinMap) -> Report:
    rep = Report(f"right integral {core.name}")
    n = core.n
    m = core.mods
    B = core.B
    xs = [{k: ONE} for k in range(B.dim)]
    w = _bimodule_witness(psiB, B.algebra, [B.lam(x) for x in xs], [B.rho(x) for x in xs])
    rep.add("partial right integral is B-bilinear", w is None, w)
    M = core.maps
    gC = core.tC_inv @ psiB
    # sum t_C^-1(psi_B(p)) q over Delta_C(a)(1 (x) b)
    ri1 = _compare(slice_left(gC, m["_CA"], n) @ M["TR"],
                   _pairwise(n, lambda a, b: core.lamB(psiB.columns[a])({b: ONE})), n)
    # sum q t_B(psi_B(p)) over (1 (x) b)Delta_B(a)
    ri2 = _compare(slice_left(psiB, m["^BA"], n) @ M["RT"],
                   _pairwise(n, lambda a, b: core.rhoB(psiB.columns[a])({b: ONE})), n)
    ri3 = _compare(S @ slice_left(psiB, m["^BA"], n) @ M["LT"],
                   slice_left(gC, m["_CA"], n) @ M["TL"] @ flip_map(n), n)
    rep.add("right invariance against Delta_C(a)(1 (x) b)", ri1 is None, ri1)
    rep.add("right invariance against (1 (x) b)Delta_B(a)", ri2 is None, ri2)
    rep.add("right invariance intertwines S with the flip", ri3 is None, ri3)
    verdicts = [ri1 is None, ri2 is None, ri3 is None]
    rep.add("right invariance forms agree", len(set(verdicts)) == 1, {"verdicts": verdicts})
    return rep


# ---------------------------------------------------------------------------
# the measured structure


def validate_measured(mm: MeasuredAlgebroid) -> Report:
    rep = Report(f"measured {mm.name}")
    core = mm.core
    try:
        mm.hopf
    except (NoCounit, NoAntipode) as e:
        rep.add("underlying algebroid is regular", False, str(e))
        return rep
    B, C = core.B.algebra, core.C.algebra
    ok = weight_row(mm.muB, core.tC) == mm.muC
    rep.add("mu_B o t_C = mu_C", ok, {"lhs": weight_row(mm.muB, core.tC), "rhs": mm.muC})
    ok = weight_row(mm.muC, core.tB) == mm.muB
    rep.add("mu_C o t_B = mu_B", ok, {"lhs": weight_row(mm.muC, core.tB), "rhs": mm.muB})
    lhs, rhs = weight_row(mm.muB, mm.epsB), weight_row(mm.muC, mm.epsC)
    rep.add("mu_B o eps_B = mu_C o eps_C", lhs == rhs, {"lhs": lhs, "rhs": rhs})
    fB = rep.add("mu_B faithful", is_faithful(B, mm.muB), {"weight": mm.muB}).passed
    fC = rep.add("mu_C faithful", is_faithful(C, mm.muC), {"weight": mm.muC}).passed
    rep.extend(validate_right_integral(mm.psiB, core, mm.S))
    rep.extend(validate_left_integral(mm.phiC, core, mm.S))
    if not (fB and fC):
        # phi and psi are composed with the base weights
        rep.skip("total integrals", "base weights are not faithful")
        return rep
    rep.add("phi faithful", is_faithful(mm.A, mm.phi))
    rep.add("psi faithful", is_faithful(mm.A, mm.psi))
    specs = [("phi", mm.phi, "_BA"), ("phi", mm.phi, "A_B"), ("psi", mm.psi, "_CA"), ("psi", mm.psi, "A_C")]
    for label, omega, mod in specs:
        name = f"{label} factorizes through {mod} with surjective partial"
        try:
            f = mm.partial(omega, mod)
        except NotFactorizable as e:
            rep.add(name, False, str(e))
            continue
        R = core.B if mod.endswith("B") or mod.startswith("_B") else core.C
        rep.add(name, rank(f) == R.dim, {"rank": rank(f)})
    rep.add("left counit surjective", rank(mm.epsC) == core.C.dim)
    rep.add("right counit surjective", rank(mm.epsB) == core.B.dim)
    return rep


def _tensor_eq(core: AlgebroidData, which: str, lhs: Vec, rhs: Vec) -> bool:
    return core.tensors[which].equal(lhs, rhs)


def check_modular(mm: MeasuredAlgebroid, locally_projective: Optional[bool] = None) -> Report:
    rep = Report(f"modular automorphisms {mm.name}")
    core = mm.core
    n = mm.n
    try:
        sB, sC, sphi, spsi = mm.sigmaB, mm.sigmaC, mm.sigmaPhi, mm.sigmaPsi
    except NoModularAutomorphism as e:
        rep.add("modular automorphisms exist", False, str(e))
        return rep
    rep.add("modular automorphisms exist", True)
    A = mm.A
    ok = all(vdot(mm.phi, A.mult.get((a, b), {})) == vdot(mm.phi, A.mul({b: ONE}, sphi.columns[a]))
             for a in range(n) for b in range(n))
    rep.add("phi(ab) = phi(b sigma(a))", ok)
    sphi_inv, spsi_inv = inverse(sphi), inverse(spsi)
    # restrictions to the bases
    ok = all(extend_automorphism(sphi, sphi_inv, core.C.images[k]) == core.C.multiplier(sC.columns[k])
             for k in range(core.C.dim))
    rep.add("sigma_C = sigma^phi on C", ok)
    rep.add("sigma_C = S_B S_C", sC == core.tC_inv @ core.tB_inv)
    ok = all(extend_automorphism(spsi, spsi_inv, core.B.images[k]) == core.B.multiplier(sB.columns[k])
             for k in range(core.B.dim))
    rep.add("sigma_B = sigma^psi on B", ok)
    rep.add("sigma_B = S_B^-1 S_C^-1", sB == core.tC @ core.tB)
    S = mm.S
    S2 = S @ S
    Sm2 = mm.Sinv @ mm.Sinv
    I = core.ident
    M = core.maps

    def comult_identity(key, which, theta, theta_inv, left, right, name):
        for a in range(n):
            ta = theta.columns[a]
            for b in range(n):
                lhs = M[key](_tens(ta, {b: ONE}, n))
                inner = M[key](_tens({a: ONE}, theta_inv.columns[b], n))
                rhs = apply_pair(inner, left, right, n, n)
                if not _tensor_eq(core, which, lhs, rhs):
                    rep.add(name, False, {"pair": [a, b]})
                    return
        rep.add(name, True)

    comult_identity("TR", "TC", sphi, sphi_inv, S2, sphi, "Delta_C o sigma^phi = (S^2 (x) sigma^phi) o Delta_C")
    comult_identity("TR", "TC", spsi, S2, spsi, Sm2, "Delta_C o sigma^psi = (sigma^psi (x) S^-2) o Delta_C")
    comult_identity("RT", "TB", sphi, sphi_inv, S2, sphi, "Delta_B o sigma^phi = (S^2 (x) sigma^phi) o Delta_B")
    comult_identity("RT", "TB", spsi, S2, spsi, Sm2, "Delta_B o sigma^psi = (sigma^psi (x) S^-2) o Delta_B")
    if locally_projective is None:
        locally_projective = check_local_projectivity(core).ok
    names = ["sigma^phi(B) = B", "mu_B o sigma^phi = mu_B on B", "sigma^phi o _B phi = sigma_B o phi_B",
             "sigma^psi(C) = C", "mu_C o sigma^psi = mu_C on C", "sigma^psi o _C psi = sigma_C o psi_C"]
    if not locally_projective:
        for nm in names:
            rep.skip(nm, "requires local projectivity")
        return rep
    parts = mm.partials
    for theta, theta_inv, emb, mu, sig, left, right, nms in (
        (sphi, sphi_inv, core.B, mm.muB, sB, parts["_Bphi"], parts["phi_B"], names[:3]),
        (spsi, spsi_inv, core.C, mm.muC, sC, parts["_Cpsi"], parts["psi_C"], names[3:]),
    ):
        coords = [emb.coords_of(extend_automorphism(theta, theta_inv, im)) for im in emb.images]
        ok = all(c is not None for c in coords)
        rep.add(nms[0], ok)
        if not ok:
            rep.skip(nms[1], "restriction undefined")
            rep.skip(nms[2], "restriction undefined")
            continue
        Theta = LinMap(emb.dim, emb.dim, coords)
        rep.add(nms[1], weight_row(mu, Theta) == mu)
        rep.add(nms[2], Theta @ left == sig @ right)
    return rep


def _tens(u: Vec, v: Vec, n: int) -> Vec:
    return {i * n + j: x * y for i, x in u.items() for j, y in v.items()}


def check_modular_element(mm: MeasuredAlgebroid) -> Report:
    rep = Report(f"modular element {mm.name}")
    n = mm.n
    A = mm.A
    for label, getter, target, side in (
        ("delta", lambda: mm.delta, mm.psi, "right"),
        ("delta+", lambda: mm.deltaPlus, weight_row(mm.phi, mm.S), "right"),
        ("delta-", lambda: mm.deltaMinus, weight_row(mm.phi, mm.Sinv), "left"),
    ):
        try:
            T = getter()
        except NoSolution as e:
            rep.add(f"{label} exists", False, str(e))
            continue
        rep.add(f"{label} is a multiplier", T.compatible(A))
        ok = True
        for c in range(n):
            img = T.rho.columns[c] if side == "right" else T.lam.columns[c]
            if vdot(mm.phi, img) != target.get(c, 0):
                ok = False
                break
        rep.add(f"{label} represents its functional", ok)
        rep.add(f"{label} invertible", invert_multiplier(T, n) is not None)
    # psi(ab) = (delta . phi)(ab)
    d = mm.delta
    ok = all(vdot(mm.psi, A.mult.get((a, b), {})) == vdot(mm.phi, d.rho(A.mult.get((a, b), {})))
             for a in range(n) for b in range(n))
    rep.add("psi(ab) = phi(ab delta)", ok)
    return rep


def check_positivity(mm: MeasuredAlgebroid) -> Report:
    rep = Report(f"positivity {mm.name}")
    A = mm.A
    if A.star is None:
        rep.skip("positivity", "no involution")
        return rep
    core = mm.core
    for label, alg, star, omega in (
        ("mu_B", core.B.algebra, base_star(core.B, A), mm.muB),
        ("mu_C", core.C.algebra, base_star(core.C, A), mm.muC),
        ("phi", A, A.star, mm.phi),
        ("psi", A, A.star, mm.psi),
    ):
        if star is None:
            rep.add(f"{label} positive", False, "base is not a *-subalgebra")
            continue
        k = alg.dim
        G = [[vdot(omega, alg.mul(star.columns[i], {j: ONE})) for j in range(k)] for i in range(k)]
        selfadj = all(vdot(omega, star.columns[i]) == conj(omega.get(i, 0)) for i in range(k))
        rep.add(f"{label} self-adjoint", selfadj)
        try:
            psd = hermitian_psd(G)
        except NotHermitian:
            psd = False
        rep.add(f"{label} positive", psd, {"gram_diagonal": [G[i][i] for i in range(k)]})
    return rep


def measured_battery(mm: MeasuredAlgebroid, star_ok: bool = True) -> Report:
    rep = Report(f"measured battery {mm.name}")
    base = validate_measured(mm)
    rep.extend(base)
    if not base.ok:
        rep.skip("modular data", "measured structure invalid")
        return rep
    rep.extend(check_modular(mm), "modular: ")
    rep.extend(check_modular_element(mm), "modular element: ")
    if mm.A.star is not None and not star_ok:
        rep.skip("positivity", "involution is not compatible with the algebroid")
    elif mm.A.star is not None:
        rep.extend(check_positivity(mm), "positivity: ")
    return rep


def full_battery(mm: MeasuredAlgebroid) -> Report:
    """Algebroid axioms followed by the measured checks."""
    rep = Report(f"full battery {mm.name}")
    reg, r = algebroid_battery(mm.core)
    rep.extend(r, "algebroid: ")
    if reg is None:
        rep.skip("measured structure", "no counits or antipode")
        return rep
    star_ok = all(c.passed for c in r.checks if c.name.startswith("star: "))
    rep.extend(measured_battery(mm, star_ok), "measured: ")
    return rep
