"""The dual measured algebroid spanned by ``a . phi``, its pairings with ``A``,
biduality and cointegrals.

Functionals are row vectors over the basis of ``A``. Elements of the dual are
stored in the basis ``e_i . phi``, where ``(a . phi)(c) = phi(c a)``; in
general ``(a . w . b)(c) = w(b c a)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Dict, List, Optional, Tuple

from .algebra import FiniteAlgebra, Multiplier, find_local_unit, is_homomorphism, multiplier_compatibility_system
from .algebroid import AlgebroidData
from .bimodule import BaseEmbedding, slice_left, slice_right
from .integration import MeasuredAlgebroid, extend_automorphism, full_battery, weight_row
from .linalg import (
    ONE,
    LinMap,
    NoSolution,
    Subspace,
    Vec,
    conj,
    inverse,
    is_bijective,
    kernel,
    rank,
    solve,
    solve_equations,
    solve_many,
    vaxpy,
    vdot,
    vstack,
)
from .report import Report


class DualityError(ValueError):
    pass


def _clean(v: Vec) -> Vec:
    return {k: c for k, c in v.items() if c}


def _pair_index(n: int):
    return [(i, j) for i in range(n) for j in range(n)]


# which module structure acts from the right on the left leg, and from the
# left on the right leg, for the four pairings
PAIRINGS = {
    "ala": ("A^C", "_CA"),
    "ara": ("A_B", "^BA"),
    "aca": ("A_C", "_CA"),
    "aba": ("A_B", "_BA"),
}
# dual-side quotient paired with each A-side quotient, named in the dual's frame
DUAL_SIDE = {"ala": "src_LT", "ara": "src_TR", "aca": "TC", "aba": "TB"}


class Duality:
    """Everything built from one measured algebroid ``mm``."""

    def __init__(self, mm: MeasuredAlgebroid):
        self.mm = mm
        self.core = mm.core
        self.A = mm.A
        self.n = mm.n

    # -- the dual space -------------------------------------------------
    @cached_property
    def carrier(self) -> LinMap:
        """Columns are the functionals ``e_i . phi``."""
        R = self.A.right_ops()
        return LinMap(self.n, self.n, [weight_row(self.mm.phi, R[i]) for i in range(self.n)])

    @cached_property
    def carrier_inv(self) -> LinMap:
        try:
            return inverse(self.carrier)
        except NoSolution:
            raise DualityError("phi is not faithful")

    def hat(self, omega: Vec) -> Vec:
        """Coordinates of a functional in the basis ``e_i . phi``."""
        return self.carrier_inv(_clean(omega))

    def functional(self, w: Vec) -> Vec:
        return self.carrier(w)

    def ident(self, kind: str) -> LinMap:
        """``a -> a.phi``, ``phi.a``, ``a.psi`` or ``psi.a`` in dual coordinates."""
        L, R = self.A.left_ops(), self.A.right_ops()
        phi, psi = self.mm.phi, self.mm.psi
        make = {
            "a.phi": lambda i: weight_row(phi, R[i]),
            "phi.a": lambda i: weight_row(phi, L[i]),
            "a.psi": lambda i: weight_row(psi, R[i]),
            "psi.a": lambda i: weight_row(psi, L[i]),
        }[kind]
        return LinMap(self.n, self.n, [self.hat(make(i)) for i in range(self.n)])

    def dual_space_report(self) -> Report:
        rep = Report(f"dual space {self.mm.name}")
        full = None
        for kind in ("a.phi", "phi.a", "a.psi", "psi.a"):
            M = self.ident(kind)
            r = rank(M)
            rep.add(f"{kind} spans the dual", r == self.n, {"rank": r, "dim": self.n})
            full = r if full is None else full
        fs = self.mm.factorizers
        ok = True
        for i in range(self.n):
            for name, f in fs.items():
                w = f.failure(self.functional({i: ONE}), f.partial(self.functional({i: ONE}), check=False))
                if w is not None:
                    ok = False
                    rep.add("basis functionals factorizable", False, {"basis": i, "module": name, "why": w})
                    break
            if not ok:
                break
        if ok:
            rep.add("basis functionals factorizable", True)
        return rep

    # -- actions of functionals on A ------------------------------------
    def partial(self, omega: Vec, module: str) -> LinMap:
        return self.mm.partial(omega, module)

    def _solve_elements(self, values: Callable[[int, int], Vec], side: str) -> LinMap:
        """The map ``a -> c_a`` fixed by ``c_a b = values(a, b)`` (or ``b c_a``)."""
        n = self.n
        ops = self.A.right_ops() if side == "left" else self.A.left_ops()
        M = vstack(ops)
        cols = []
        for a in range(n):
            rhs: Vec = {}
            for b in range(n):
                for r, c in values(a, b).items():
                    rhs[b * n + r] = c
            cols.append(rhs)
        X, null = solve_many(M, LinMap(n * n, n, cols))
        if null.dim:
            raise DualityError("A is degenerate")
        return X

    def act_left(self, omega: Vec) -> LinMap:
        """``a -> omega |> a`` from ``(omega |> a) b = (id (.) _C omega)(Delta_C(a)(b (x) 1))``."""
        n = self.n
        K = slice_right(self.partial(omega, "_CA"), self.core.mods["A^C"], n) @ self.core.maps["TL"]
        return self._solve_elements(lambda a, b: K.columns[b * n + a], "left")

    def act_right(self, omega: Vec) -> LinMap:
        """``a -> a <| omega`` from ``(a <| omega) b = (omega^C (.) id)(Delta_C(a)(1 (x) b))``."""
        n = self.n
        K = slice_left(self.partial(omega, "A^C"), self.core.mods["_CA"], n) @ self.core.maps["TR"]
        return self._solve_elements(lambda a, b: K.columns[a * n + b], "left")

    @cached_property
    def acts(self) -> Tuple[List[LinMap], List[LinMap]]:
        basis = [self.functional({i: ONE}) for i in range(self.n)]
        return [self.act_left(w) for w in basis], [self.act_right(w) for w in basis]

    def act_left_hat(self, w: Vec) -> LinMap:
        out = LinMap.zero(self.n, self.n)
        for i, c in w.items():
            out = out + self.acts[0][i].scale(c)
        return out

    def act_right_hat(self, w: Vec) -> LinMap:
        out = LinMap.zero(self.n, self.n)
        for i, c in w.items():
            out = out + self.acts[1][i].scale(c)
        return out

    # -- the dual algebra -----------------------------------------------
    @cached_property
    def algebra(self) -> FiniteAlgebra:
        n = self.n
        left, _ = self.acts
        mult = {}
        for i in range(n):
            fi = self.functional({i: ONE})
            for j in range(n):
                v = self.hat(weight_row(fi, left[j]))
                if v:
                    mult[(i, j)] = v
        star = None
        if self.A.star is not None:
            S = self.mm.S
            cols = []
            for i in range(n):
                fi = self.functional({i: ONE})
                f = {}
                for j in range(n):
                    val = conj(vdot(fi, self.A.apply_star(S.columns[j])))
                    if val:
                        f[j] = val
                cols.append(self.hat(f))
            star = LinMap(n, n, cols)
        unit = find_local_unit(FiniteAlgebra(n, mult))
        labels = [f"{lab}.phi" for lab in self.A.labels]
        return FiniteAlgebra(n, mult, labels=labels, unit=unit, star=star, name=f"dual({self.A.name})")

    def product_report(self) -> Report:
        rep = Report(f"dual product {self.mm.name}")
        n = self.n
        left, right = self.acts
        bad = None
        for i in range(n):
            fi = self.functional({i: ONE})
            for j in range(n):
                fj = self.functional({j: ONE})
                if weight_row(fi, left[j]) != weight_row(fj, right[i]):
                    bad = {"pair": (i, j)}
                    break
            if bad:
                break
        rep.add("the two product formulas agree", bad is None, bad)
        D = self.algebra
        bad = None
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if D.mul(D.mul({i: ONE}, {j: ONE}), {k: ONE}) != D.mul({i: ONE}, D.mul({j: ONE}, {k: ONE})):
                        bad = {"triple": (i, j, k)}
                        break
                if bad:
                    break
            if bad:
                break
        rep.add("dual product associative", bad is None, bad)
        # shortcut: upsilon (b . phi) = c . phi with c = S(upsilon |> S^-1(b))
        S, Sinv = self.mm.S, self.mm.Sinv
        bad = None
        for i in range(n):
            for b in range(n):
                c = S(left[i](Sinv({b: ONE})))
                if D.mul({i: ONE}, {b: ONE}) != _clean(c):
                    bad = {"pair": (i, b)}
                    break
            if bad:
                break
        rep.add("product shortcut through the antipode", bad is None, bad)
        return rep

    def act_report(self) -> Report:
        """Counit, bimodule and strong invariance identities of the two actions."""
        rep = Report(f"actions {self.mm.name}")
        n = self.n
        left, right = self.acts
        eps = self.mm.eps
        bad = None
        for i in range(n):
            fi = self.functional({i: ONE})
            for a in range(n):
                if not (vdot(eps, left[i].columns[a]) == fi.get(a, 0) == vdot(eps, right[i].columns[a])):
                    bad = {"functional": i, "a": a}
        rep.add("eps(w |> a) = w(a) = eps(a <| w)", bad is None, bad)
        bad = None
        for i in range(n):
            for j in range(n):
                if left[i] @ right[j] != right[j] @ left[i]:
                    bad = {"pair": (i, j)}
        rep.add("w |> (a <| v) = (w |> a) <| v", bad is None, bad)
        # strong invariance
        L, R = self.A.left_ops(), self.A.right_ops()
        phi, psi, S = self.mm.phi, self.mm.psi, self.mm.S
        bad = None
        for a in range(n):
            la = self.act_left(weight_row(phi, L[a]))
            for b in range(n):
                lhs = la.columns[b]
                rhs = S(self.act_left(weight_row(phi, R[b])).columns[a])
                if _clean(lhs) != _clean(rhs):
                    bad = {"a": a, "b": b}
                    break
            if bad:
                break
        rep.add("(phi.a) |> b = S((b.phi) |> a)", bad is None, bad)
        bad = None
        for a in range(n):
            ra = self.act_right(weight_row(psi, R[a]))
            for b in range(n):
                lhs = ra.columns[b]
                rhs = S(self.act_right(weight_row(psi, L[b])).columns[a])
                if _clean(lhs) != _clean(rhs):
                    bad = {"a": a, "b": b}
                    break
            if bad:
                break
        rep.add("b <| (a.psi) = S(a <| (psi.b))", bad is None, bad)
        return rep

    # -- base embeddings --------------------------------------------------
    def _conj_functional_map(self, M: LinMap) -> LinMap:
        """Dual-coordinate matrix of ``w -> w o M``."""
        return self.carrier_inv @ M.transpose() @ self.carrier

    @cached_property
    def base_embeddings(self) -> Tuple[BaseEmbedding, BaseEmbedding]:
        """Embeddings of ``C`` (first) and ``B`` (second) into ``M(dual)``.

        ``y w = w(. y)``, ``w y = w(. t_C(y))``, ``x w = w(t_B(x) .)`` and ``w x = w(x .)``.
        """
        core = self.core
        C, B = core.C, core.B
        ys = [{k: ONE} for k in range(C.dim)]
        xs = [{k: ONE} for k in range(B.dim)]
        Cimg = [Multiplier(self._conj_functional_map(core.rhoC(y)),
                           self._conj_functional_map(core.rhoB(core.tC(y)))) for y in ys]
        Bimg = [Multiplier(self._conj_functional_map(core.lamC(core.tB(x))),
                           self._conj_functional_map(core.lamB(x))) for x in xs]
        return BaseEmbedding(C.algebra, Cimg, "C"), BaseEmbedding(B.algebra, Bimg, "B")

    # -- pairings ---------------------------------------------------------
    def pairing(self, key: str) -> LinMap:
        """Grid with rows indexed by ``a (x) b`` and columns by dual pairs ``v (x) w``."""
        n = self.n
        left_mod, right_mod = PAIRINGS[key]
        mods = self.core.mods
        parts = [self.partial(self.functional({j: ONE}), right_mod) for j in range(n)]
        funcs = [self.functional({i: ONE}) for i in range(n)]
        lm = mods[left_mod]
        cols = []
        for i, j in _pair_index(n):
            col: Vec = {}
            for a in range(n):
                for b in range(n):
                    v = vdot(funcs[i], lm.act(parts[j].columns[b]).columns[a])
                    if v:
                        col[a * n + b] = v
            cols.append(col)
        return LinMap(n * n, n * n, cols)

    @cached_property
    def pairings(self) -> Dict[str, LinMap]:
        return {k: self.pairing(k) for k in PAIRINGS}

    def pairing_report(self, dual_core: Optional[AlgebroidData] = None) -> Report:
        rep = Report(f"pairings {self.mm.name}")
        dual_core = dual_core or self.dual_core
        src = {"ala": "TC", "ara": "TB", "aca": "src_LT", "aba": "src_TR"}
        for key, P in self.pairings.items():
            T = self.core.tensors[src[key]]
            D = dual_core.tensors[DUAL_SIDE[key]]
            # well defined on both quotients
            bad_a = next((v for v in T.relations.basis() if P.transpose()(v)), None)
            bad_d = next((v for v in D.relations.basis() if P(v)), None)
            rep.add(f"pairing {key} descends to the quotients", bad_a is None and bad_d is None,
                    {"A-side relation": bad_a, "dual-side relation": bad_d})
            r = rank(P)
            rep.add(f"pairing {key} non-degenerate", r == T.dim == D.dim,
                    {"rank": r, "A-side dim": T.dim, "dual-side dim": D.dim})
        return rep

    # -- dual canonical maps ----------------------------------------------
    def _rhs(self, key: str) -> LinMap:
        n = self.n
        A = self.A
        left, right = self.acts
        f = [self.functional({i: ONE}) for i in range(n)]
        cols = []
        for i, j in _pair_index(n):
            col: Vec = {}
            for a in range(n):
                for b in range(n):
                    if key == "TR":
                        v = vdot(f[i], A.mul({a: ONE}, left[j].columns[b]))
                    elif key == "TL":
                        v = vdot(f[j], A.mul(left[i].columns[a], {b: ONE}))
                    elif key == "LT":
                        v = vdot(f[j], A.mul(right[i].columns[a], {b: ONE}))
                    else:
                        v = vdot(f[i], A.mul({a: ONE}, right[j].columns[b]))
                    if v:
                        col[a * n + b] = v
            cols.append(col)
        return LinMap(n * n, n * n, cols)

    @cached_property
    def dual_maps(self) -> Dict[str, LinMap]:
        out = {}
        for key, pk in (("TR", "aca"), ("TL", "aca"), ("LT", "aba"), ("RT", "aba")):
            X, _ = solve_many(self.pairings[pk], self._rhs(key))
            out[key] = X
        return out

    @cached_property
    def dual_core(self) -> AlgebroidData:
        core = self.core
        Cemb, Bemb = self.base_embeddings
        m = self.dual_maps
        return AlgebroidData(self.algebra, Cemb, Bemb, core.tB_inv, core.tC_inv,
                             m["TL"], m["TR"], m["LT"], m["RT"], name=f"dual({self.mm.name})")

    def adjointness_report(self) -> Report:
        rep = Report(f"dual canonical maps {self.mm.name}")
        dc = self.dual_core
        for key, pk in (("TR", "aca"), ("TL", "aca"), ("LT", "aba"), ("RT", "aba")):
            P = self.pairings[pk]
            lhs = P @ dc.maps[key]
            rhs = self._rhs(key)
            rep.add(f"dual {key} adjoint to its pairing", lhs == rhs)
        # adjointness against the A-side maps: (T^(v (x) w) | a (x) b) = (v (x) w | T(a (x) b))
        for dkey, pk, akey, pk2 in (("TR", "aca", "LT", "ara"), ("LT", "aba", "TR", "ala")):
            P = self.pairings[pk]
            lhs = P @ dc.maps[dkey]
            rhs = self.core.maps[akey].transpose() @ self.pairings[pk2]
            rep.add(f"dual {dkey} is the transpose of {akey}", lhs == rhs)
        return rep

    # -- the measured dual ------------------------------------------------
    @cached_property
    def psi_dot(self) -> LinMap:
        return self.ident("psi.a")

    @cached_property
    def dual(self) -> MeasuredAlgebroid:
        """Dual with weights ``(mu_C, mu_B)`` and partial integrals ``a.phi -> eps_C(a)``
        (right) and ``psi.a -> eps_B(a)`` (left)."""
        mm = self.mm
        psiB_hat = mm.epsC
        phiC_hat = mm.epsB @ inverse(self.psi_dot)
        return MeasuredAlgebroid(self.dual_core, dict(mm.muC), dict(mm.muB), phiC_hat, psiB_hat,
                                 name=f"dual({mm.name})")

    def counit_antipode_report(self) -> Report:
        rep = Report(f"dual counits and antipode {self.mm.name}")
        mm, d = self.mm, self.dual
        rep.add("left counit a.phi -> t_C(phi_C(a))", d.epsC == mm.core.tC @ mm.phiC)
        rep.add("right counit psi.a -> t_B(psi_B(a))", d.epsB @ self.psi_dot == mm.core.tB @ mm.psiB)
        rep.add("antipode is precomposition with S", d.S == self._conj_functional_map(mm.S))
        ones = self.A.one()
        if ones is not None:
            ev = LinMap(1, self.n, [{0: v} if v else {} for v in
                                    (vdot(self.functional({i: ONE}), ones) for i in range(self.n))])
            rep.add("mu o counits is evaluation at 1",
                    LinMap(1, self.n, [{0: vdot(d.eps, {i: ONE})} if vdot(d.eps, {i: ONE}) else {}
                                       for i in range(self.n)]) == ev)
        return rep

    def integral_report(self) -> Report:
        rep = Report(f"dual integrals {self.mm.name}")
        mm, d = self.mm, self.dual
        n = self.n
        D = self.algebra
        phih, psih = d.phi, d.psi
        S = mm.S
        L, R = self.A.left_ops(), self.A.right_ops()
        bad = None
        for a in range(n):
            u = self.hat(weight_row(mm.psi, mm.A.lmat(S.columns[a])))
            for w in range(n):
                if vdot(phih, D.mul(u, {w: ONE})) != self.functional({w: ONE}).get(a, 0):
                    bad = {"a": a, "w": w}
                    break
            if bad:
                break
        rep.add("phi^((psi.S(a)) w) = w(a)", bad is None, bad)
        bad = None
        for b in range(n):
            u = self.hat(weight_row(mm.phi, mm.A.rmat(S.columns[b])))
            for w in range(n):
                if vdot(psih, D.mul({w: ONE}, u)) != self.functional({w: ONE}).get(b, 0):
                    bad = {"b": b, "w": w}
                    break
            if bad:
                break
        rep.add("psi^(w (S(b).phi)) = w(b)", bad is None, bad)
        if D.star is not None:
            bad = None
            A = self.A
            for a in range(n):
                for b in range(n):
                    lhs = vdot(psih, D.mul(D.apply_star({a: ONE}), {b: ONE}))
                    rhs = vdot(mm.phi, A.mul(A.apply_star({a: ONE}), {b: ONE}))
                    if lhs != rhs:
                        bad = {"a": a, "b": b}
            rep.add("psi^((a.phi)^* (b.phi)) = phi(a^* b)", bad is None, bad)
        # modular automorphisms on the bases
        try:
            sp_inv = inverse(mm.sigmaPhi)
            spsi_hat = d.sigmaPsi
            bad = None
            Cp = d.core.C  # the dual's second base is B
            for k in range(Cp.dim):
                moved = extend_automorphism(spsi_hat, inverse(spsi_hat), Cp.images[k])
                want = extend_automorphism(sp_inv, mm.sigmaPhi, mm.core.B.images[k])
                x = mm.core.B.coords_of(want)
                if x is None or Cp.multiplier(x) != moved:
                    bad = {"base element": k}
                    break
            rep.add("sigma^psi^ = (sigma^phi)^-1 on B", bad is None, bad)
        except Exception as e:  # noqa: BLE001 - reported as a failure
            rep.add("sigma^psi^ = (sigma^phi)^-1 on B", False, str(e))
        return rep


# ---------------------------------------------------------------------------
# isomorphisms of measured algebroids


def iso_report(src: MeasuredAlgebroid, dst: MeasuredAlgebroid, j: LinMap,
               betaB: Optional[LinMap] = None, betaC: Optional[LinMap] = None,
               title: str = "isomorphism") -> Report:
    """Check that ``j: src.A -> dst.A`` is an isomorphism of measured algebroids.

    ``betaB``/``betaC`` map base coordinates of ``src`` to those of ``dst``
    (identity when omitted).
    """
    rep = Report(f"{title} {src.name} -> {dst.name}")
    a, b = src.core, dst.core
    n = src.n
    rep.add("bijective", is_bijective(j) and dst.n == n, {"rank": rank(j) if j.rows else 0})
    rep.add("homomorphism", is_homomorphism(j, src.A, dst.A))
    betaB = betaB or LinMap.identity(a.B.dim)
    betaC = betaC or LinMap.identity(a.C.dim)
    bad = None
    for name, E, F, beta in (("B", a.B, b.B, betaB), ("C", a.C, b.C, betaC)):
        for k in range(E.dim):
            x = {k: ONE}
            y = beta(x)
            if j @ E.lam(x) != F.lam(y) @ j or j @ E.rho(x) != F.rho(y) @ j:
                bad = {"base": name, "element": k}
                break
        if bad:
            break
    rep.add("base actions intertwined", bad is None, bad)
    rep.add("t_B and t_C intertwined", betaC @ a.tB == b.tB @ betaB and betaB @ a.tC == b.tC @ betaC)
    jj = _kron(j, j)
    for key in ("TL", "TR", "LT", "RT"):
        T = b.target(key)
        lhs = jj @ a.maps[key]
        rhs = b.maps[key] @ jj
        bad = next((k for k in range(n * n) if not T.equal(lhs.columns[k], rhs.columns[k])), None)
        rep.add(f"canonical map {key} intertwined", bad is None,
                None if bad is None else {"pair": divmod(bad, n)})
    rep.add("phi preserved", weight_row(dst.phi, j) == src.phi)
    rep.add("psi preserved", weight_row(dst.psi, j) == src.psi)
    rep.add("base weights preserved", weight_row(dst.muB, betaB) == src.muB and weight_row(dst.muC, betaC) == src.muC)
    if src.A.star is not None and dst.A.star is not None:
        ok = all(_clean(j(src.A.apply_star({i: ONE}))) == _clean(dst.A.apply_star(j.columns[i])) for i in range(n))
        rep.add("star preserved", ok)
    return rep


def _kron(f: LinMap, g: LinMap) -> LinMap:
    from .linalg import kron

    return kron(f, g)


# ---------------------------------------------------------------------------
# biduality


def evaluation_map(d1: Duality, d2: Duality) -> LinMap:
    """``a -> a^v`` with ``a^v(w) = w(a)``, in the coordinates of the double dual."""
    n = d1.n
    cols = []
    for a in range(n):
        ev = {i: d1.functional({i: ONE}).get(a, 0) for i in range(n)}
        cols.append(d2.hat(_clean(ev)))
    return LinMap(n, n, cols)


def biduality_report(d1: Duality, d2: Optional[Duality] = None) -> Tuple[Report, LinMap]:
    d2 = d2 or Duality(d1.dual)
    j = evaluation_map(d1, d2)
    rep = iso_report(d1.mm, d2.dual, j, title="biduality")
    # v . a^v = (v |> a)^v and v <| a^v = v . a
    n = d1.n
    D = d1.algebra
    left1, _ = d1.acts
    bad = None
    for v in range(n):
        for a in range(n):
            # (v . a^v)(w) = a^v(w v)
            shifted = {w: vdot(d2.functional(j.columns[a]), D.mul({w: ONE}, {v: ONE})) for w in range(n)}
            if d2.hat(_clean(shifted)) != _clean(j(left1[v].columns[a])):
                bad = {"v": v, "a": a}
                break
            va = d1.hat(weight_row(d1.functional({v: ONE}), d1.A.lmat({a: ONE})))
            if right2_act(d2, {v: ONE}, j.columns[a]) != va:
                bad = {"v": v, "a": a, "side": "right"}
                break
        if bad:
            break
    rep.add("actions of the double dual match", bad is None, bad)
    return rep, j


def right2_act(d2: Duality, v: Vec, av: Vec) -> Vec:
    """``v <| a^v`` computed in the dual of the dual."""
    return _clean(d2.act_right(d2.functional(av))(v))


# ---------------------------------------------------------------------------
# cointegrals


@dataclass
class CointegralResult:
    left: Subspace
    right: Subspace
    normalized_left: Optional[Vec]
    normalized_right: Optional[Vec]
    dual_unital: bool
    report: Report = field(default_factory=lambda: Report("cointegrals"))


def _stack_conditions(blocks: List[LinMap], n: int) -> LinMap:
    return vstack(blocks) if blocks else LinMap(0, n)


def cointegrals(d: Duality) -> CointegralResult:
    mm, core = d.mm, d.core
    n = mm.n
    A = mm.A
    L, R = A.left_ops(), A.right_ops()
    # a l = eps_C(a) l  and  r a = r eps_B(a)
    left = kernel(vstack([L[a] - core.lamC(mm.epsC.columns[a]) for a in range(n)]))
    right = kernel(vstack([R[a] - core.rhoB(mm.epsB.columns[a]) for a in range(n)]))
    rep = Report(f"cointegrals {mm.name}")
    oneC = core.C.algebra.one()
    oneB = core.B.algebra.one()

    def normalized(space: Subspace, f: LinMap, one: Optional[Vec]) -> Optional[Vec]:
        if one is None or not space.dim:
            return None
        basis = space.basis()
        M = LinMap(f.rows, len(basis), [f(v) for v in basis])
        try:
            sol = solve(M, one)
        except NoSolution:
            return None
        out: Vec = {}
        for k, c in sol.particular.items():
            vaxpy(out, c, basis[k])
        return out

    l = normalized(left, mm.phiC, oneC)
    r = normalized(right, mm.psiB, oneB)
    dual_unital = d.algebra.unit is not None
    rep.add("normalized left cointegral exists iff dual unital", (l is not None) == dual_unital,
            {"left": l, "dual unital": dual_unital})
    rep.add("normalized right cointegral exists iff dual unital", (r is not None) == dual_unital,
            {"right": r, "dual unital": dual_unital})
    if l is not None and dual_unital:
        rep.add("dual unit is l.phi", d.hat(weight_row(mm.phi, A.rmat(l))) == d.algebra.unit)
        rep.add("counit is l.phi", weight_row(mm.phi, A.rmat(l)) == mm.eps)
    if dual_unital:
        # converse: the unit eps of the dual is l.phi for a normalized left cointegral l
        G = LinMap(n, n, [weight_row(mm.phi, R[c]) for c in range(n)]).transpose()
        try:
            l2 = solve(G, mm.eps).particular
        except NoSolution:
            l2 = None
        ok = l2 is not None and all(A.mul({a: ONE}, l2) == core.lamC(mm.epsC.columns[a])(l2) for a in range(n))
        ok = ok and mm.phiC(l2) == oneC
        rep.add("dual unit comes from a normalized left cointegral", ok, {"l": l2})
    return CointegralResult(left, right, l, r, dual_unital, rep)


def left_integral_space(mm: MeasuredAlgebroid) -> Subspace:
    """Functionals ``mu_C o f`` for C-bilinear left-invariant ``f: A -> C``."""
    core = mm.core
    n, nC = mm.n, core.C.dim
    nv = n * nC  # f[l, m] at index m * nC + l
    rows: List[Vec] = []
    C = core.C.algebra
    ys = [{k: ONE} for k in range(nC)]
    # C-bilinearity: f(y m) = y f(m), f(m y) = f(m) y
    for y in range(nC):
        for side, act in (("left", core.lamC(ys[y])), ("right", core.rhoC(ys[y]))):
            for m in range(n):
                for l in range(nC):
                    v: Vec = {}
                    for mm_, c in act.columns[m].items():
                        vaxpy(v, c, {mm_ * nC + l: ONE})
                    for l2 in range(nC):
                        prod = C.mult.get((y, l2) if side == "left" else (l2, y), {})
                        c = prod.get(l)
                        if c:
                            vaxpy(v, -c, {m * nC + l2: ONE})
                    if v:
                        rows.append(v)
    # invariance: sum t_C(f(q)) p over Delta_C(b)(a (x) 1) equals f(b) a
    mAC = core.mods["A^C"]
    lamC = [core.lamC({l: ONE}) for l in range(nC)]
    TL = core.maps["TL"]
    for a in range(n):
        for b in range(n):
            t = TL.columns[a * n + b]
            for r in range(n):
                v: Vec = {}
                for k, c in t.items():
                    p, q = divmod(k, n)
                    for l in range(nC):
                        x = mAC.actions[l].columns[p].get(r)
                        if x:
                            vaxpy(v, c * x, {q * nC + l: ONE})
                for l in range(nC):
                    x = lamC[l].columns[a].get(r)
                    if x:
                        vaxpy(v, -x, {b * nC + l: ONE})
                if v:
                    rows.append(v)
    M = LinMap(len(rows), nv, [{} for _ in range(nv)])
    for i, v in enumerate(rows):
        for k, c in v.items():
            M.columns[k][i] = c
    sols = kernel(M).basis()
    funcs = []
    for s in sols:
        f = {}
        for k, c in s.items():
            m, l = divmod(k, nC)
            mu = mm.muC.get(l)
            if mu:
                f[m] = f.get(m, 0) + mu * c
        funcs.append(_clean(f))
    return Subspace(n, funcs)


def cointegral_integral_report(d: Duality) -> Report:
    """Left cointegrals of the dual versus left integrals on ``A``, elementwise."""
    rep = Report(f"cointegral-integral correspondence {d.mm.name}")
    dd = d.dual
    D = dd.A
    n = d.n
    coint = kernel(vstack([D.left_ops()[w] - dd.core.lamC(dd.epsC.columns[w]) for w in range(n)]))
    ints = left_integral_space(d.mm)
    ints_hat = Subspace(n, (d.hat(f) for f in ints.basis()))
    rep.add("every left cointegral of the dual is a left integral",
            all(ints_hat.contains(v) for v in coint.basis()), {"cointegrals": coint.dim, "integrals": ints.dim})
    rep.add("every left integral is a left cointegral of the dual",
            all(coint.contains(v) for v in ints_hat.basis()), {"cointegrals": coint.dim, "integrals": ints.dim})
    return rep


# ---------------------------------------------------------------------------
# multipliers of the dual


def dual_multiplier_report(d: Duality) -> Report:
    rep = Report(f"dual multipliers {d.mm.name}")
    n = d.n
    left, right = d.acts
    # every functional maps A into A under both actions in finite dimension
    rep.add("all functionals act inside A", True, note="actions are computed as elements of A")
    eqs = multiplier_compatibility_system(d.algebra)
    dimM = solve_equations(2 * n * n, [(e, 0) for e in eqs]).nullspace.dim
    rep.add("dim of the multiplier space matches", dimM == n, {"dim M(dual)": dimM, "dim A^v": n})
    return rep


# ---------------------------------------------------------------------------
# full pipeline


@dataclass
class DualResult:
    duality: Duality
    dual: MeasuredAlgebroid
    pairings: Dict[str, LinMap]
    report: Report


def dualize(mm: MeasuredAlgebroid, battery: bool = True) -> DualResult:
    d = Duality(mm)
    rep = Report(f"dualize {mm.name}")
    rep.extend(d.dual_space_report(), "space: ")
    rep.extend(d.product_report(), "product: ")
    rep.extend(d.act_report(), "actions: ")
    rep.extend(d.pairing_report(), "pairings: ")
    rep.extend(d.adjointness_report(), "canonical: ")
    if battery:
        rep.extend(full_battery(d.dual), "dual battery: ")
    rep.extend(d.counit_antipode_report(), "counits: ")
    rep.extend(d.integral_report(), "integrals: ")
    return DualResult(d, d.dual, d.pairings, rep)
