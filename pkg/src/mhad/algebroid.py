"""Multiplier bialgebroids given through their canonical maps; the axiom
battery, counits, antipode, the two Hopf criteria, involutions and local projectivity."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Dict, List, Optional, Tuple

from .algebra import FiniteAlgebra, Multiplier, is_antihomomorphism
from .bimodule import (
    BalancedTensor,
    BaseEmbedding,
    ModuleStructure,
    TripleTensor,
    apply_on_legs12,
    apply_on_legs13,
    apply_on_legs23,
    apply_pair,
    bases_commute,
    build_module_structures,
    descends,
    flip,
    slice_left,
    slice_right,
)
from .linalg import (
    ONE,
    LinMap,
    NoSolution,
    Subspace,
    Vec,
    inverse,
    is_bijective,
    kernel,
    rank,
    solve_equations,
    vaxpy,
    vconj,
    vsub,
)
from .report import Report


class AlgebroidError(ValueError):
    pass


CANONICAL = ("TL", "TR", "LT", "RT")
# source tensor (right structure, left structure) and target tensor of each canonical map
SOURCES = {
    "TL": ("A^B", "^BA"),
    "TR": ("A_B", "_BA"),
    "LT": ("A_C", "_CA"),
    "RT": ("A^C", "^CA"),
}
TARGETS = {"TL": "TC", "TR": "TC", "LT": "TB", "RT": "TB"}


class AlgebroidData:
    """``(A, B, C, t_B, t_C, Delta_B, Delta_C)`` with comultiplications stored
    as the representative matrices of the four canonical maps on ``A (x) A``:

    * ``TL``: ``a (x) b -> Delta_C(b)(a (x) 1)``
    * ``TR``: ``a (x) b -> Delta_C(a)(1 (x) b)``
    * ``LT``: ``a (x) b -> (a (x) 1)Delta_B(b)``
    * ``RT``: ``a (x) b -> (1 (x) b)Delta_B(a)``
    """

    def __init__(self, A: FiniteAlgebra, B: BaseEmbedding, C: BaseEmbedding,
                 tB: LinMap, tC: LinMap, TL: LinMap, TR: LinMap, LT: LinMap, RT: LinMap,
                 name: str = ""):
        self.A = A
        self.B = B
        self.C = C
        self.tB = tB
        self.tC = tC
        self.maps = {"TL": TL, "TR": TR, "LT": LT, "RT": RT}
        self.name = name
        self.n = A.dim

    # -- derived structure --------------------------------------------
    @cached_property
    def mods(self) -> Dict[str, ModuleStructure]:
        return build_module_structures(self.A, self.B, self.C, self.tB, self.tC, check=False)

    @cached_property
    def tensors(self) -> Dict[str, BalancedTensor]:
        m = self.mods
        out = {
            "TC": BalancedTensor(m["A^C"], m["_CA"], "A^C(x)_CA"),
            "TB": BalancedTensor(m["A_B"], m["^BA"], "A_B(x)^BA"),
        }
        for k, (l, r) in SOURCES.items():
            out["src_" + k] = BalancedTensor(m[l], m[r], f"{l}(x){r}")
        return out

    def target(self, key: str) -> BalancedTensor:
        return self.tensors[TARGETS[key]]

    @cached_property
    def tB_inv(self) -> LinMap:
        return inverse(self.tB)

    @cached_property
    def tC_inv(self) -> LinMap:
        return inverse(self.tC)

    def lamB(self, x: Vec) -> LinMap:
        return self.B.lam(x)

    def rhoB(self, x: Vec) -> LinMap:
        return self.B.rho(x)

    def lamC(self, y: Vec) -> LinMap:
        return self.C.lam(y)

    def rhoC(self, y: Vec) -> LinMap:
        return self.C.rho(y)

    @cached_property
    def Lops(self) -> List[LinMap]:
        return self.A.left_ops()

    @cached_property
    def Rops(self) -> List[LinMap]:
        return self.A.right_ops()

    @cached_property
    def ident(self) -> LinMap:
        return LinMap.identity(self.n)

    def canonical(self, key: str, a: Vec, b: Vec) -> Vec:
        """Representative of the canonical map ``key`` on ``a (x) b``."""
        n = self.n
        M = self.maps[key]
        out: Vec = {}
        for i, x in a.items():
            for j, y in b.items():
                vaxpy(out, x * y, M.columns[i * n + j])
        return out

    # the four products, read as in the definition
    def delta_C_right(self, a: Vec, b: Vec) -> Vec:
        """``Delta_C(a)(1 (x) b)``."""
        return self.canonical("TR", a, b)

    def delta_C_left(self, a: Vec, b: Vec) -> Vec:
        """``Delta_C(a)(b (x) 1)``."""
        return self.canonical("TL", b, a)

    def delta_B_left(self, a: Vec, b: Vec) -> Vec:
        """``(b (x) 1)Delta_B(a)``."""
        return self.canonical("LT", b, a)

    def delta_B_right(self, a: Vec, b: Vec) -> Vec:
        """``(1 (x) b)Delta_B(a)``."""
        return self.canonical("RT", a, b)

    def mul_tensor_right(self, t: Vec, a: Vec, b: Vec) -> Vec:
        """``t (a (x) b)`` on representatives."""
        return apply_pair(t, self.A.rmat(a), self.A.rmat(b), self.n, self.n)

    def mul_tensor_left(self, a: Vec, b: Vec, t: Vec) -> Vec:
        return apply_pair(t, self.A.lmat(a), self.A.lmat(b), self.n, self.n)

    def copy_with(self, **changes) -> "AlgebroidData":
        kw = dict(A=self.A, B=self.B, C=self.C, tB=self.tB, tC=self.tC, name=self.name)
        kw.update({k: self.maps[k] for k in CANONICAL})
        kw.update(changes)
        return AlgebroidData(**kw)


def compose_rep(core: AlgebroidData, key: str, t: Vec) -> Vec:
    """Apply a canonical map to a representative in ``A (x) A``."""
    return core.maps[key](t)


# ---------------------------------------------------------------------------
# validation of the bialgebroid axioms


def _first(items):
    for it in items:
        return it
    return None


def check_descent(core: AlgebroidData, key: str) -> Optional[dict]:
    """The canonical map must kill the balancing relations of its source."""
    src = core.tensors["src_" + key]
    tgt = core.target(key)
    M = core.maps[key]
    for v in src.relations.basis():
        red = tgt.reduce(M(v))
        if red:
            return {"map": key, "relation": _pretty(v, core.n), "image": _pretty(red, core.n)}
    return None


def _pretty(t: Vec, n: int):
    return {f"{k // n},{k % n}": c for k, c in sorted(t.items())}


def _pretty3(t: Vec, n: int):
    return {f"{k // (n * n)},{(k // n) % n},{k % n}": c for k, c in sorted(t.items())}


def _legop(t: Vec, leg: int, op: LinMap, n: int) -> Vec:
    I = LinMap.identity(n)
    if leg == 1:
        return apply_pair(t, op, I, n, n)
    return apply_pair(t, I, op, n, n)


def bilinearity_checks(core: AlgebroidData) -> Optional[dict]:
    """``Delta(x y a x' y') = (y (x) x) Delta(a) (y' (x) x')`` for both comultiplications."""
    n = core.n
    TC, TB = core.tensors["TC"], core.tensors["TB"]
    B, C = core.B, core.C
    specs = []
    for k in range(B.dim):
        x = {k: ONE}
        lx, rx = core.lamB(x), core.rhoB(x)
        # Delta_C(xa) = (1 (x) x) Delta_C(a)
        specs.append(("Delta_C(xa)", "TR", (1, lx), None, (2, lx), TC))
        # Delta_C(ax) = Delta_C(a)(1 (x) x): compare T_rho(ax (x) b) with T_rho(a (x) xb)
        specs.append(("Delta_C(ax)", "TR", (1, rx), (2, lx), None, TC))
        # Delta_B(xa) = (1 (x) x) Delta_B(a): RT(xa (x) b) = RT(a (x) bx)
        specs.append(("Delta_B(xa)", "RT", (1, lx), (2, rx), None, TB))
        specs.append(("Delta_B(ax)", "RT", (1, rx), None, (2, rx), TB))
    for k in range(C.dim):
        y = {k: ONE}
        ly, ry = core.lamC(y), core.rhoC(y)
        specs.append(("Delta_C(ya)", "TR", (1, ly), None, (1, ly), TC))
        specs.append(("Delta_C(ay)", "TR", (1, ry), None, (1, ry), TC))
        specs.append(("Delta_B(ya)", "RT", (1, ly), None, (1, ly), TB))
        specs.append(("Delta_B(ay)", "RT", (1, ry), None, (1, ry), TB))
    for name, key, pre_l, pre_r, post, T in specs:
        M = core.maps[key]
        for i in range(n):
            for j in range(n):
                t = {i * n + j: ONE}
                lhs = M(_legop(t, pre_l[0], pre_l[1], n))
                rhs = M(_legop(t, pre_r[0], pre_r[1], n)) if pre_r else M(t)
                if post:
                    rhs = _legop(rhs, post[0], post[1], n)
                if not T.equal(lhs, rhs):
                    return {"identity": name, "pair": [i, j]}
    return None


def takeuchi_checks(core: AlgebroidData) -> Optional[dict]:
    """``Delta_C(a)(b (x) c)`` and ``(b (x) c)Delta_B(a)`` agree for both factorizations."""
    n = core.n
    A = core.A
    TC, TB = core.tensors["TC"], core.tensors["TB"]
    R, L = core.Rops, core.Lops
    I = core.ident
    for a in range(n):
        for b in range(n):
            tl = core.maps["TL"].columns[b * n + a]  # Delta_C(a)(b (x) 1)
            lt = core.maps["LT"].columns[b * n + a]  # (b (x) 1)Delta_B(a)
            for c in range(n):
                tr = core.maps["TR"].columns[a * n + c]  # Delta_C(a)(1 (x) c)
                lhs = apply_pair(tl, I, R[c], n, n)
                rhs = apply_pair(tr, R[b], I, n, n)
                if not TC.equal(lhs, rhs):
                    return {"comultiplication": "Delta_C", "triple": [a, b, c]}
                rt = core.maps["RT"].columns[a * n + c]  # (1 (x) c)Delta_B(a)
                lhs = apply_pair(rt, L[b], I, n, n)
                rhs = apply_pair(lt, I, L[c], n, n)
                if not TB.equal(lhs, rhs):
                    return {"comultiplication": "Delta_B", "triple": [a, b, c]}
    return None


def tensor_nondegenerate(T: BalancedTensor, core: AlgebroidData, side: str, leg: int) -> bool:
    """Non-degeneracy of the quotient as a module over ``1 (x) A`` or ``A (x) 1``."""
    n = core.n
    ops = core.Rops if side == "right" else core.Lops
    I = core.ident
    cols = []
    for q in range(T.dim):
        rep = T.section({q: ONE})
        stacked: Vec = {}
        for a in range(n):
            if leg == 1:
                img = apply_pair(rep, ops[a], I, n, n)
            else:
                img = apply_pair(rep, I, ops[a], n, n)
            for k, c in T.project(img).items():
                stacked[a * T.dim + k] = c
        cols.append(stacked)
    M = LinMap(n * T.dim, T.dim, cols)
    return rank(M) == T.dim


TRIPLES = {
    # name: (structures of the triple target, description)
    "left": ("A^C", "_CA", "A^C", "_CA"),
    "right": ("A_B", "^BA", "A_B", "^BA"),
    "mixed1": ("A^C", "_CA", "A_B", "^BA"),
    "mixed2": ("A_B", "^BA", "A^C", "_CA"),
}


def triple_tensor(core: AlgebroidData, kind: str) -> TripleTensor:
    cache = core.__dict__.setdefault("_triples", {})
    if kind not in cache:
        m = core.mods
        a, b, c, d = TRIPLES[kind]
        cache[kind] = TripleTensor(m[a], m[b], m[c], m[d], label=kind)
    return cache[kind]


COASSOC = {
    # (T_outer (x) id)(id (x) T_inner) = (id (x) T_inner)(T_outer (x) id)
    "left": ("TL", "TR"),
    "right": ("LT", "RT"),
    "mixed1": ("TL", "RT"),
    "mixed2": ("LT", "TR"),
}


def coassociativity_witness(core: AlgebroidData, kind: str) -> Optional[dict]:
    first, second = COASSOC[kind]
    F, G = core.maps[first], core.maps[second]
    n = core.n
    dims = (n, n, n)
    T3 = triple_tensor(core, kind)
    for k in range(n ** 3):
        t = {k: ONE}
        lhs = apply_on_legs12(apply_on_legs23(t, G, dims), F, dims)
        rhs = apply_on_legs23(apply_on_legs12(t, F, dims), G, dims)
        if not T3.equal(lhs, rhs):
            return {"identity": kind, "triple": [k // (n * n), (k // n) % n, k % n],
                    "difference": _pretty3(T3.reduce(vsub(lhs, rhs)), n)}
    return None


def validate_bialgebroid(core: AlgebroidData) -> Report:
    rep = Report(f"bialgebroid {core.name}")
    A, B, C = core.A, core.B, core.C
    # (1) bases and modules
    for emb in (B, C):
        w = emb.check_embedding()
        rep.add(f"base {emb.label} embeds as a subalgebra of M(A)", w is None, w)
    w = bases_commute(B, C)
    rep.add("B and C commute", w is None, w and {"pair": list(w)})
    rep.add("t_B anti-isomorphism B->C",
            is_bijective(core.tB) and is_antihomomorphism(core.tB, B.algebra, C.algebra))
    rep.add("t_C anti-isomorphism C->B",
            is_bijective(core.tC) and is_antihomomorphism(core.tC, C.algebra, B.algebra))
    for name, mod in core.mods.items():
        w = mod.check_axioms()
        rep.add(f"module axioms {name}", w is None, w)
    for name in ("_BA", "A_B", "_CA", "A_C"):
        mod = core.mods[name]
        rep.add(f"module {name} non-degenerate and idempotent",
                mod.is_nondegenerate() and mod.is_idempotent(), {"module": name})
    # (2) non-degeneracy of the tensor squares
    TC, TB = core.tensors["TC"], core.tensors["TB"]
    for T, side in ((TC, "right"), (TB, "left")):
        for leg in (1, 2):
            ok = tensor_nondegenerate(T, core, side, leg)
            rep.add(f"{T.label} non-degenerate over {'A(x)1' if leg == 1 else '1(x)A'}", ok,
                    {"tensor": T.label, "leg": leg})
    # (3) well-definedness, Takeuchi consistency, bilinearity
    for key in CANONICAL:
        w = check_descent(core, key)
        rep.add(f"canonical map {key} descends to its source quotient", w is None, w)
    w = takeuchi_checks(core)
    rep.add("two factorizations of Delta(a)(b(x)c) agree", w is None, w)
    w = bilinearity_checks(core)
    rep.add("comultiplications are base-bilinear", w is None, w)
    # (4) coassociativity
    for kind in COASSOC:
        w = coassociativity_witness(core, kind)
        rep.add(f"coassociativity ({kind})", w is None, w)
    return rep


# ---------------------------------------------------------------------------
# counits


@dataclass
class CounitPair:
    epsC: LinMap  # A -> C, the left counit
    epsB: LinMap  # A -> B, the right counit


def _module_map_equations(mod: ModuleStructure, nvars_cols: int, nR: int, offset: int = 0):
    """Equations ``F(r.m) = r F(m)`` (left) or ``F(m.r) = F(m) r`` (right) for unknown ``F: A -> R``.

    Unknown ``F[s, p]`` has index ``offset + p*nR + s``.
    """
    R = mod.base_algebra
    n = nvars_cols
    eqs = []
    for r in range(R.dim):
        act = mod.actions[r]
        for m in range(n):
            # sum_p act[p,m] F[:,p]  -  r*F[:,m]
            rows: Dict[int, Vec] = {}
            for p, c in act.columns[m].items():
                for s in range(nR):
                    rows.setdefault(s, {})[offset + p * nR + s] = rows.get(s, {}).get(offset + p * nR + s, 0) + c
            for l in range(nR):
                prod = R.mult.get((r, l) if mod.side == "left" else (l, r), {})
                for s, c in prod.items():
                    d = rows.setdefault(s, {})
                    idx = offset + m * nR + l
                    d[idx] = d.get(idx, 0) - c
            for s, d in rows.items():
                d = {k: v for k, v in d.items() if v}
                if d:
                    eqs.append((d, 0))
    return eqs


def _slice_equations(core: AlgebroidData, M: LinMap, pairs, act_mod: ModuleStructure, which: str,
                     expected: Callable[[int, int], Vec], nR: int):
    """Equations for ``slice(F) o M = expected`` with unknown ``F: A -> R``.

    ``which == 'left'``: slice ``p (x) q -> F(p) . q`` using the left action ``act_mod``;
    ``which == 'right'``: slice ``p (x) q -> p . F(q)`` using the right action ``act_mod``.
    """
    n = core.n
    eqs = []
    for (a, b) in pairs:
        t = M.columns[a * n + b]
        rows: Dict[int, Vec] = {}
        for k, c in t.items():
            p, q = divmod(k, n)
            fixed, var = (q, p) if which == "left" else (p, q)
            for r in range(nR):
                for s, x in act_mod.actions[r].columns[fixed].items():
                    d = rows.setdefault(s, {})
                    idx = var * nR + r
                    d[idx] = d.get(idx, 0) + c * x
        want = expected(a, b)
        for s in set(rows) | set(want):
            d = {k: v for k, v in rows.get(s, {}).items() if v}
            eqs.append((d, want.get(s, 0)))
    return eqs


def _map_from_solution(sol: Vec, n: int, nR: int) -> LinMap:
    cols = [{} for _ in range(n)]
    for idx, c in sol.items():
        p, s = divmod(idx, nR)
        cols[p][s] = c
    return LinMap(nR, n, cols)


class NoCounit(AlgebroidError):
    pass


def compute_counits(core: AlgebroidData) -> Tuple[CounitPair, Report]:
    n = core.n
    A = core.A
    m = core.mods
    rep = Report(f"counits {core.name}")
    pairs = [(a, b) for a in range(n) for b in range(n)]
    prod = lambda a, b: A.mult.get((a, b), {})
    nC, nB = core.C.dim, core.B.dim

    # left counit: Hom(_C A^C, C)
    eqs = _slice_equations(core, core.maps["TR"], pairs, m["_CA"], "left", prod, nC)
    eqs += _module_map_equations(m["_CA"], n, nC)
    eqs += _module_map_equations(m["A^C"], n, nC)
    try:
        sol = solve_equations(n * nC, eqs)
    except NoSolution:
        raise NoCounit("no counit: left counit system unsolvable")
    epsC = _map_from_solution(sol.particular, n, nC)
    rep.add("left counit unique", sol.unique, {"free": sol.nullspace.dim})
    S = slice_right(epsC, m["A^C"], n) @ core.maps["TL"]
    ok = all(S.columns[b * n + a] == prod(a, b) for a in range(n) for b in range(n))
    rep.add("left counit second identity", ok)

    # right counit: Hom(^B A_B, B)
    eqs = _slice_equations(core, core.maps["RT"], pairs, m["^BA"], "left",
                           lambda a, b: prod(b, a), nB)
    eqs += _module_map_equations(m["^BA"], n, nB)
    eqs += _module_map_equations(m["A_B"], n, nB)
    try:
        sol = solve_equations(n * nB, eqs)
    except NoSolution:
        raise NoCounit("no counit: right counit system unsolvable")
    epsB = _map_from_solution(sol.particular, n, nB)
    rep.add("right counit unique", sol.unique, {"free": sol.nullspace.dim})
    S = slice_right(epsB, m["A_B"], n) @ core.maps["LT"]
    ok = all(S.columns[b * n + a] == prod(b, a) for a in range(n) for b in range(n))
    rep.add("right counit second identity", ok)
    return CounitPair(epsC, epsB), rep


# ---------------------------------------------------------------------------
# antipode


@dataclass
class Antipode:
    S: LinMap
    Sinv: LinMap


class NoAntipode(AlgebroidError):
    pass


def extend_antimultiplicative(S: LinMap, Sinv: LinMap, T: Multiplier) -> Multiplier:
    """Extension of an anti-automorphism to multipliers: ``S(T)S(a) = S(aT)``."""
    return Multiplier(S @ T.rho @ Sinv, S @ T.lam @ Sinv)


def compute_antipode(core: AlgebroidData, counits: CounitPair) -> Tuple[Antipode, Report]:
    n = core.n
    A = core.A
    rep = Report(f"antipode {core.name}")
    TC = core.tensors["TC"]
    TR = core.maps["TR"]
    eqs = []

    def add_mS_eq(t: Vec, want: Vec):
        # sum c_pq S(e_p) e_q = want; unknown S[r, p] at index p*n + r
        rows: Dict[int, Vec] = {}
        for k, c in t.items():
            p, q = divmod(k, n)
            for r in range(n):
                for s, x in A.mult.get((r, q), {}).items():
                    d = rows.setdefault(s, {})
                    idx = p * n + r
                    d[idx] = d.get(idx, 0) + c * x
        for s in set(rows) | set(want):
            d = {k: v for k, v in rows.get(s, {}).items() if v}
            eqs.append((d, want.get(s, 0)))

    for a in range(n):
        eb = counits.epsB.columns[a]
        for b in range(n):
            want = core.lamB(eb)({b: ONE})
            add_mS_eq(TR.columns[a * n + b], want)
    for v in TC.relations.basis():
        add_mS_eq(v, {})
    try:
        sol = solve_equations(n * n, eqs)
    except NoSolution:
        raise NoAntipode("no antipode: first diagram unsolvable")
    rep.add("antipode determined by the first diagram", sol.unique, {"free": sol.nullspace.dim})
    S = _map_from_solution(sol.particular, n, n)
    if not is_bijective(S):
        raise NoAntipode("antipode not bijective")
    Sinv = inverse(S)
    # second diagram: m (id (x) S) LT = id (.) epsC on A_C (x) _C A
    LT = core.maps["LT"]
    ok = True
    wit = None
    for a in range(n):
        for b in range(n):
            t = LT.columns[a * n + b]
            lhs: Vec = {}
            for k, c in t.items():
                p, q = divmod(k, n)
                vaxpy(lhs, c, A.mul({p: ONE}, S.columns[q]))
            rhs = core.rhoC(counits.epsC.columns[b])({a: ONE})
            if lhs != rhs:
                ok, wit = False, {"pair": [a, b]}
                break
        if not ok:
            break
    rep.add("antipode second diagram", ok, wit)
    rep.add("antipode anti-multiplicative", is_antihomomorphism(S, A, A))
    # restrictions to the bases
    ok_b = all(extend_antimultiplicative(S, Sinv, core.B.images[k]) ==
               core.C.multiplier(core.tC_inv({k: ONE})) for k in range(core.B.dim))
    ok_c = all(extend_antimultiplicative(S, Sinv, core.C.images[k]) ==
               core.B.multiplier(core.tB_inv({k: ONE})) for k in range(core.C.dim))
    rep.add("S restricted to B is the inverse of t_C", ok_b)
    rep.add("S restricted to C is the inverse of t_B", ok_c)
    return Antipode(S, Sinv), rep


# ---------------------------------------------------------------------------
# bijectivity criterion and counit/antipode criterion


def module_duals(mod: ModuleStructure, n: int) -> List[LinMap]:
    """A basis of the module maps ``mod -> base``."""
    nR = mod.base_algebra.dim
    eqs = _module_map_equations(mod, n, nR)
    M = LinMap(len(eqs), n * nR, [{} for _ in range(n * nR)])
    for r, (d, _) in enumerate(eqs):
        for c, x in d.items():
            M.columns[c][r] = x
    null = kernel(M)
    return [_map_from_solution(v, n, nR) for v in null.basis()]


def ideal_of(mod: ModuleStructure, n: int) -> Subspace:
    nR = mod.base_algebra.dim
    maps = module_duals(mod, n)
    return Subspace(nR, (f.columns[m] for f in maps for m in range(n)))


def check_bijectivity(core: AlgebroidData) -> Report:
    rep = Report(f"bijectivity {core.name}")
    for key in CANONICAL:
        src = core.tensors["src_" + key]
        tgt = core.target(key)
        M = core.maps[key]
        Q = LinMap(tgt.dim, src.dim, [tgt.project(M(src.section({q: ONE}))) for q in range(src.dim)])
        rep.add(f"canonical map {key} bijective", is_bijective(Q),
                {"map": key, "source_dim": src.dim, "target_dim": tgt.dim, "rank": rank(Q)})
    n = core.n
    m = core.mods
    I_B_low = ideal_of(m["_BA"], n)
    I_B_up = ideal_of(m["A^B"], n)
    I_C_low = ideal_of(m["A_C"], n)
    I_C_up = ideal_of(m["^CA"], n)
    span = lambda ops: Subspace(n, (op.columns[j] for op in ops for j in range(n))).dim == n
    rep.add("A = t_B(_B I) A", span([core.lamC(core.tB(v)) for v in I_B_low.basis()]))
    rep.add("A = I^B A", span([core.lamB(v) for v in I_B_up.basis()]))
    rep.add("A = A t_C(I_C)", span([core.rhoB(core.tC(v)) for v in I_C_low.basis()]))
    rep.add("A = A ^C I", span([core.rhoC(v) for v in I_C_up.basis()]))
    return rep


@dataclass
class HopfStructure:
    counits: CounitPair
    antipode: Antipode


def check_counit_antipode(core: AlgebroidData) -> Tuple[Optional[HopfStructure], Report]:
    rep = Report(f"counits and antipode {core.name}")
    try:
        counits, r1 = compute_counits(core)
    except NoCounit as e:
        rep.add("counits exist", False, str(e))
        return None, rep
    rep.add("counits exist", True)
    rep.extend(r1)
    try:
        anti, r2 = compute_antipode(core, counits)
    except NoAntipode as e:
        rep.add("antipode exists", False, str(e))
        return None, rep
    rep.add("antipode exists", True)
    rep.extend(r2)
    return HopfStructure(counits, anti), rep


def check_H1_H2(core: AlgebroidData) -> Tuple[Optional[HopfStructure], Report]:
    rep = Report(f"Hopf criteria {core.name}")
    h1 = check_bijectivity(core)
    hs, h2 = check_counit_antipode(core)
    rep.extend(h1, "bijectivity: ")
    rep.extend(h2, "counit/antipode: ")
    rep.add("both criteria agree", h1.ok == h2.ok, {"bijectivity": h1.ok, "counit/antipode": h2.ok})
    return hs, rep


# ---------------------------------------------------------------------------
# identities of regular multiplier Hopf algebroids


def _apply_legs(t: Vec, f: LinMap, g: LinMap, n: int) -> Vec:
    return apply_pair(t, f, g, n, n)


def check_regular_identities(core: AlgebroidData, hs: HopfStructure) -> Report:
    rep = Report(f"regular identities {core.name}")
    n = core.n
    S = hs.antipode.S
    I = core.ident
    TC, TB = core.tensors["TC"], core.tensors["TB"]
    M = core.maps

    def map_identity(name, lhs_fn, rhs_fn, T):
        for i in range(n):
            for j in range(n):
                t = {i * n + j: ONE}
                if not T.equal(lhs_fn(t), rhs_fn(t)):
                    rep.add(name, False, {"pair": [i, j]})
                    return
        rep.add(name, True)

    map_identity("T_rho (id(x)S) RT = id(x)S",
                 lambda t: M["TR"](_apply_legs(M["RT"](t), I, S, n)),
                 lambda t: _apply_legs(t, I, S, n), TC)
    map_identity("LT (S(x)id) T_lambda = S(x)id",
                 lambda t: M["LT"](_apply_legs(M["TL"](t), S, I, n)),
                 lambda t: _apply_legs(t, S, I, n), TB)
    map_identity("RT flip(S(x)S) = flip(S(x)S) T_lambda",
                 lambda t: M["RT"](flip(_apply_legs(t, S, S, n), n)),
                 lambda t: flip(_apply_legs(M["TL"](t), S, S, n), n), TB)
    map_identity("T_rho flip(S(x)S) = flip(S(x)S) LT",
                 lambda t: M["TR"](flip(_apply_legs(t, S, S, n), n)),
                 lambda t: flip(_apply_legs(M["LT"](t), S, S, n), n), TC)
    eps = hs.counits
    rep.add("left counit = t_B o right counit o S", eps.epsC == core.tB @ eps.epsB @ S)
    rep.add("right counit = t_C o left counit o S", eps.epsB == core.tC @ eps.epsC @ S)
    A = core.A
    okC = okB = True
    for a in range(n):
        for b in range(n):
            ab = A.mult.get((a, b), {})
            ea = {a: ONE}
            ecb = eps.epsC.columns[b]
            v1 = eps.epsC(ab)
            v2 = eps.epsC(core.rhoC(ecb)(ea))
            v3 = eps.epsC(core.rhoB(core.tC(ecb))(ea))
            okC &= v1 == v2 == v3
            eba = eps.epsB.columns[a]
            eb = {b: ONE}
            w1 = eps.epsB(ab)
            w2 = eps.epsB(core.lamB(eba)(eb))
            w3 = eps.epsB(core.lamC(core.tB(eba))(eb))
            okB &= w1 == w2 == w3
    rep.add("left counit multiplicativity", okC)
    rep.add("right counit multiplicativity", okB)
    w = pentagon_witness(core)
    rep.add("pentagon for LT", w is None, w)
    return rep


def pentagon_witness(core: AlgebroidData) -> Optional[dict]:
    n = core.n
    F = core.maps["LT"]
    dims = (n, n, n)
    T3 = triple_tensor(core, "right")
    for k in range(n ** 3):
        t = {k: ONE}
        lhs = apply_on_legs12(apply_on_legs23(t, F, dims), F, dims)
        rhs = apply_on_legs23(apply_on_legs13(apply_on_legs12(t, F, dims), F, dims), F, dims)
        if not T3.equal(lhs, rhs):
            return {"triple": [k // (n * n), (k // n) % n, k % n]}
    return None


# ---------------------------------------------------------------------------
# involutions


def base_star(emb: BaseEmbedding, A: FiniteAlgebra) -> Optional[LinMap]:
    """Matrix of ``x -> x^*`` on base coordinates, or None if not a *-subalgebra."""
    cols = []
    for k, im in enumerate(emb.images):
        c = emb.coords_of(im.star(A))
        if c is None:
            return None
        cols.append(c)
    return LinMap(emb.dim, emb.dim, cols)


def _star_on(M: Optional[LinMap], v: Vec) -> Vec:
    return M(vconj(v))


def check_star(core: AlgebroidData, hs: HopfStructure) -> Report:
    rep = Report(f"involution {core.name}")
    A = core.A
    if A.star is None:
        rep.skip("involution present", "no involution on A")
        return rep
    n = core.n
    sB = base_star(core.B, A)
    sC = base_star(core.C, A)
    rep.add("B is a *-subalgebra", sB is not None)
    rep.add("C is a *-subalgebra", sC is not None)
    if sB is None or sC is None:
        return rep
    ok1 = all(core.tB(_star_on(sB, core.tC(_star_on(sC, {k: ONE})))) == {k: ONE} for k in range(core.C.dim))
    ok2 = all(core.tC(_star_on(sC, core.tB(_star_on(sB, {k: ONE})))) == {k: ONE} for k in range(core.B.dim))
    rep.add("t_B * t_C * = id_C", ok1)
    rep.add("t_C * t_B * = id_B", ok2)
    TC = core.tensors["TC"]
    star = lambda v: A.apply_star(v)
    wit = None
    I = core.ident
    stars = [star({a: ONE}) for a in range(n)]
    for a in range(n):
        for c in range(n):
            tr = core.delta_C_right(stars[a], stars[c])
            rt = core.maps["RT"].columns[a * n + c]
            for b in range(n):
                lhs = apply_pair(tr, A.rmat(stars[b]), I, n, n)
                rhs = star_tensor(A, apply_pair(rt, core.Lops[b], I, n, n))
                if not TC.equal(lhs, rhs):
                    wit = {"triple": [a, b, c]}
                    break
            if wit:
                break
        if wit:
            break
    rep.add("Delta_C(a*)(b*(x)c*) = ((b(x)c)Delta_B(a))^(*(x)*)", wit is None, wit)
    S = hs.antipode.S
    eps = hs.counits
    badB = badC = badS = None
    for a in range(n):
        ea = {a: ONE}
        sa = star(ea)
        if badB is None and eps.epsB(sa) != _star_on(sB, core.tB_inv(eps.epsC.columns[a])):
            badB = {"basis": a}
        if badC is None and eps.epsC(sa) != _star_on(sC, core.tC_inv(eps.epsB.columns[a])):
            badC = {"basis": a}
        if badS is None and S(star(S(star(ea)))) != ea:
            badS = {"basis": a}
    rep.add("right counit o * = * o S_C o left counit", badB is None, badB)
    rep.add("left counit o * = * o S_B o right counit", badC is None, badC)
    rep.add("S * S * = id", badS is None, badS)
    return rep


def star_tensor(A: FiniteAlgebra, t: Vec) -> Vec:
    n = A.dim
    out: Vec = {}
    from .linalg import conj

    for k, c in t.items():
        p, q = divmod(k, n)
        sp, sq = A.apply_star({p: ONE}), A.apply_star({q: ONE})
        for i, x in sp.items():
            for j, y in sq.items():
                idx = i * n + j
                s = out.get(idx, 0) + conj(c) * x * y
                if s:
                    out[idx] = s
                else:
                    out.pop(idx, None)
    return out


# ---------------------------------------------------------------------------
# local projectivity


def is_firm(R: FiniteAlgebra) -> bool:
    n = R.dim
    if n == 0:
        return True
    L, Rr = R.left_ops(), R.right_ops()
    right = ModuleStructure("R_R", "right", "R", Rr, R)
    left = ModuleStructure("_RR", "left", "R", L, R)
    T = BalancedTensor(right, left)
    mult = LinMap(n, T.dim, [R.mul({i // n: ONE}, {i % n: ONE}) for i in T.basis_index])
    return T.dim == n and is_bijective(mult)


def is_locally_projective(mod: ModuleStructure, n: int) -> bool:
    """Identity of ``M`` lies in the span of ``e o u`` with ``u: M -> R`` and ``e: R -> M`` module maps."""
    R = mod.base_algebra
    nR = R.dim
    ups = module_duals(mod, n)
    # module maps R -> M: e(r s) = e(r) s for right modules, e(s r) = s e(r) for left
    es = _maps_from_base(mod, n)
    if not ups or not es:
        return n == 0
    target = {j * n + j: ONE for j in range(n)}
    span = Subspace(n * n)
    for u in ups:
        for e in es:
            comp = e @ u
            v: Vec = {}
            for j, col in enumerate(comp.columns):
                for r, x in col.items():
                    v[j * n + r] = x
            span.add(v)
    return span.contains(target)


def _maps_from_base(mod: ModuleStructure, n: int) -> List[LinMap]:
    R = mod.base_algebra
    nR = R.dim
    # unknown E: R -> M, E[s, p] at index p*n + s
    eqs = []
    for r in range(nR):
        for p in range(nR):
            prod = R.mult.get((p, r) if mod.side == "right" else (r, p), {})
            # E(prod) - act_r E(e_p)
            rows: Dict[int, Vec] = {}
            for q, c in prod.items():
                for s in range(n):
                    d = rows.setdefault(s, {})
                    d[q * n + s] = d.get(q * n + s, 0) + c
            act = mod.actions[r]
            for s0 in range(n):
                for s, x in act.columns[s0].items():
                    d = rows.setdefault(s, {})
                    d[p * n + s0] = d.get(p * n + s0, 0) - x
            for d in rows.values():
                d = {k: v for k, v in d.items() if v}
                if d:
                    eqs.append(d)
    M = LinMap(len(eqs), nR * n, [{} for _ in range(nR * n)])
    for r, d in enumerate(eqs):
        for c, x in d.items():
            M.columns[c][r] = x
    null = kernel(M)
    out = []
    for v in null.basis():
        cols = [{} for _ in range(nR)]
        for idx, c in v.items():
            p, s = divmod(idx, n)
            cols[p][s] = c
        out.append(LinMap(n, nR, cols))
    return out


def check_local_projectivity(core: AlgebroidData) -> Report:
    rep = Report(f"local projectivity {core.name}")
    rep.add("B firm", is_firm(core.B.algebra))
    rep.add("C firm", is_firm(core.C.algebra))
    for name in ("_BA", "A_B", "_CA", "A_C"):
        rep.add(f"{name} locally projective", is_locally_projective(core.mods[name], core.n))
    return rep


# ---------------------------------------------------------------------------
# full battery


@dataclass
class RegularAlgebroid:
    core: AlgebroidData
    hopf: HopfStructure

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


def algebroid_battery(core: AlgebroidData) -> Tuple[Optional[RegularAlgebroid], Report]:
    rep = Report(f"algebroid battery {core.name}")
    bi = validate_bialgebroid(core)
    rep.extend(bi, "bialgebroid: ")
    if not bi.ok:
        # counits, antipode and the regularity identities presuppose a bialgebroid
        rep.skip("Hopf structure", "bialgebroid axioms fail")
        return None, rep
    hs, r = check_H1_H2(core)
    rep.extend(r)
    if hs is None:
        return None, rep
    rep.extend(check_regular_identities(core, hs), "regular: ")
    if core.A.star is not None:
        rep.extend(check_star(core, hs), "star: ")
    rep.extend(check_local_projectivity(core), "projectivity: ")
    return RegularAlgebroid(core, hs), rep
