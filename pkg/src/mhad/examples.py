"""Generators for concrete instances: finite groupoids, Hopf algebras of finite
groups, the two-sided crossed product and braided-commutative Yetter-Drinfeld
algebras, plus the weak multiplier Hopf algebra bridge."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .algebra import FiniteAlgebra, Multiplier, function_algebra, scalars
from .algebroid import AlgebroidData
from .bimodule import BaseEmbedding
from .integration import MeasuredAlgebroid
from .linalg import ONE, LinMap, Vec, inverse, kron, scalar, solve, vaxpy, vdot


class SpecError(ValueError):
    pass


def canonical_from_products(A: FiniteAlgebra, delta_C_right, delta_C_left, delta_B_left, delta_B_right):
    """Canonical-map matrices from four product functions on basis indices.

    ``delta_C_right(a, b)`` returns ``Delta_C(e_a)(1 (x) e_b)``,
    ``delta_C_left(a, b)`` returns ``Delta_C(e_b)(e_a (x) 1)``,
    ``delta_B_left(a, b)`` returns ``(e_a (x) 1)Delta_B(e_b)`` and
    ``delta_B_right(a, b)`` returns ``(1 (x) e_b)Delta_B(e_a)``.
    """
    n = A.dim
    pairs = [(a, b) for a in range(n) for b in range(n)]
    TR = LinMap(n * n, n * n, [delta_C_right(a, b) for a, b in pairs])
    TL = LinMap(n * n, n * n, [delta_C_left(a, b) for a, b in pairs])
    LT = LinMap(n * n, n * n, [delta_B_left(a, b) for a, b in pairs])
    RT = LinMap(n * n, n * n, [delta_B_right(a, b) for a, b in pairs])
    return TL, TR, LT, RT


def canonical_from_coproduct(A: FiniteAlgebra, Delta: LinMap):
    """Canonical maps of a unital algebra with ``Delta_B = Delta_C = Delta: A -> A (x) A``."""
    n = A.dim
    L, R = A.left_ops(), A.right_ops()

    def mult(t, left1=None, left2=None, right1=None, right2=None):
        out: Vec = {}
        for k, c in t.items():
            p, q = divmod(k, n)
            u, v = {p: c}, {q: ONE}
            if left1 is not None:
                u = L[left1](u)
            if right1 is not None:
                u = R[right1](u)
            if left2 is not None:
                v = L[left2](v)
            if right2 is not None:
                v = R[right2](v)
            for i, x in u.items():
                for j, y in v.items():
                    vaxpy(out, x * y, {i * n + j: ONE})
        return out

    d = Delta.columns
    return canonical_from_products(
        A,
        lambda a, b: mult(d[a], right2=b),
        lambda a, b: mult(d[b], right1=a),
        lambda a, b: mult(d[b], left1=a),
        lambda a, b: mult(d[a], left2=b),
    )


def trivial_base(n: int) -> BaseEmbedding:
    return BaseEmbedding(scalars(), [Multiplier.identity(n)], "scalars")


# ---------------------------------------------------------------------------
# finite groupoids


@dataclass
class GroupoidSpec:
    arrows: List[str]
    units: List[str]
    src: Dict[str, str]
    tgt: Dict[str, str]
    compose: Dict[Tuple[str, str], str]
    inv: Dict[str, str]
    weights: Dict[str, object] = field(default_factory=dict)
    name: str = ""

    def weight(self, u: str):
        return scalar(self.weights.get(u, 1))

    def D(self, g: str):
        """Radon-Nikodym cocycle ``weight(t(g)) / weight(s(g))``."""
        return self.weight(self.tgt[g]) / self.weight(self.src[g])


def check_groupoid(g: GroupoidSpec) -> Optional[str]:
    arrows, units = g.arrows, g.units
    if len(set(arrows)) != len(arrows):
        return "duplicate arrow labels"
    for u in units:
        if u not in arrows or g.src[u] != u or g.tgt[u] != u:
            return f"unit {u} is not an identity arrow"
    for a in arrows:
        if g.src.get(a) not in units or g.tgt.get(a) not in units:
            return f"arrow {a} has no source or target unit"
    for a in arrows:
        for b in arrows:
            composable = g.src[a] == g.tgt[b]
            c = g.compose.get((a, b))
            if composable != (c is not None):
                return f"composition defined wrongly at ({a},{b})"
            if c is not None and (g.src[c] != g.src[b] or g.tgt[c] != g.tgt[a]):
                return f"composite ({a},{b}) has wrong endpoints"
    for a in arrows:
        if g.compose[(a, g.src[a])] != a or g.compose[(g.tgt[a], a)] != a:
            return f"unit law fails at {a}"
        i = g.inv.get(a)
        if i is None or g.compose.get((a, i)) != g.tgt[a] or g.compose.get((i, a)) != g.src[a]:
            return f"inverse law fails at {a}"
    for a, b, c in itertools.product(arrows, repeat=3):
        ab = g.compose.get((a, b))
        bc = g.compose.get((b, c))
        if ab is not None and bc is not None and g.compose.get((ab, c)) != g.compose.get((a, bc)):
            return f"associativity fails at ({a},{b},{c})"
    for u in units:
        if not g.weight(u):
            return f"weight of {u} is zero"
    return None


def groupoid_from_group(elements: Sequence[str], mul: Callable[[str, str], str], name: str = "") -> GroupoidSpec:
    e = next(x for x in elements if all(mul(x, y) == y for y in elements))
    comp = {(a, b): mul(a, b) for a in elements for b in elements}
    inv = {a: next(b for b in elements if mul(a, b) == e) for a in elements}
    return GroupoidSpec(list(elements), [e], {a: e for a in elements}, {a: e for a in elements},
                        comp, inv, {e: 1}, name)


def pair_groupoid(m: int, weights: Optional[Sequence] = None, name: str = "") -> GroupoidSpec:
    pts = [str(i + 1) for i in range(m)]
    lab = lambda i, j: f"({i},{j})"
    arrows = [lab(i, j) for i in pts for j in pts]
    units = [lab(i, i) for i in pts]
    src = {lab(i, j): lab(j, j) for i in pts for j in pts}
    tgt = {lab(i, j): lab(i, i) for i in pts for j in pts}
    comp = {(lab(i, j), lab(j, k)): lab(i, k) for i in pts for j in pts for k in pts}
    inv = {lab(i, j): lab(j, i) for i in pts for j in pts}
    w = {lab(p, p): (weights[k] if weights else 1) for k, p in enumerate(pts)}
    return GroupoidSpec(arrows, units, src, tgt, comp, inv, w, name or f"pair{m}")


def groupoid_algebroid(g: GroupoidSpec) -> MeasuredAlgebroid:
    """Functions on the arrows with pointwise product and fiber-sum integrals."""
    err = check_groupoid(g)
    if err:
        raise SpecError(f"not a groupoid: {err}")
    arrows, units = g.arrows, g.units
    n = len(arrows)
    idx = {a: i for i, a in enumerate(arrows)}
    uidx = {u: i for i, u in enumerate(units)}
    A = function_algebra(arrows, name=f"C({g.name})")
    U = function_algebra(units, name=f"C({g.name}^0)")

    def pullback(endpoint, u):
        m = LinMap(n, n, [{i: ONE} if endpoint[a] == u else {} for i, a in enumerate(arrows)])
        return Multiplier(m, m)

    B = BaseEmbedding(U, [pullback(g.src, u) for u in units], "B")
    C = BaseEmbedding(U, [pullback(g.tgt, u) for u in units], "C")
    k = len(units)

    def one(a, b):
        return {idx[a] * n + idx[b]: ONE}

    def dC_right(i, j):
        a, b = arrows[i], arrows[j]
        return one(g.compose[(a, g.inv[b])], b) if g.src[a] == g.src[b] else {}

    def dC_left(i, j):
        a, b = arrows[i], arrows[j]
        return one(a, g.compose[(g.inv[a], b)]) if g.tgt[a] == g.tgt[b] else {}

    TL, TR, LT, RT = canonical_from_products(A, dC_right, dC_left, dC_left, dC_right)
    core = AlgebroidData(A, B, C, LinMap.identity(k), LinMap.identity(k), TL, TR, LT, RT, name=g.name)
    mu = {uidx[u]: g.weight(u) for u in units}
    phiC = LinMap(k, n, [{uidx[g.tgt[a]]: ONE} for a in arrows])
    psiB = LinMap(k, n, [{uidx[g.src[a]]: ONE} for a in arrows])
    return MeasuredAlgebroid(core, mu, dict(mu), phiC, psiB, name=g.name)


def trivial_algebroid() -> MeasuredAlgebroid:
    A = scalars()
    I1 = LinMap.identity(1)
    core = AlgebroidData(A, trivial_base(1), trivial_base(1), I1, I1, I1, I1, I1, I1, name="TRIV")
    return MeasuredAlgebroid(core, {0: ONE}, {0: ONE}, I1, I1, name="TRIV")


# ---------------------------------------------------------------------------
# Hopf algebras of finite groups


@dataclass
class HopfData:
    H: FiniteAlgebra
    Delta: LinMap  # H -> H (x) H
    eps: Vec
    S: LinMap
    phi: Vec
    psi: Vec
    name: str = ""
    group: Optional[List[str]] = None


def check_hopf(h: HopfData) -> Optional[str]:
    """Hopf axioms and invariance of the integrals on basis elements."""
    H, n = h.H, h.H.dim
    one = H.one()
    D = h.Delta
    if one is None:
        return "H is not unital"
    # coassociativity and counit
    for a in range(n):
        d = D.columns[a]
        left: Vec = {}
        right: Vec = {}
        for k, c in d.items():
            p, q = divmod(k, n)
            for k2, c2 in D.columns[p].items():
                vaxpy(left, c * c2, {k2 * n + q: ONE})
            for k2, c2 in D.columns[q].items():
                vaxpy(right, c * c2, {p * n * n + k2: ONE})
        if left != right:
            return f"not coassociative at {a}"
        e1: Vec = {}
        e2: Vec = {}
        m1: Vec = {}
        m2: Vec = {}
        for k, c in d.items():
            p, q = divmod(k, n)
            vaxpy(e1, c * h.eps.get(p, 0), {q: ONE})
            vaxpy(e2, c * h.eps.get(q, 0), {p: ONE})
            vaxpy(m1, c, H.mul(h.S.columns[p], {q: ONE}))
            vaxpy(m2, c, H.mul({p: ONE}, h.S.columns[q]))
        if e1 != {a: ONE} or e2 != {a: ONE}:
            return f"counit fails at {a}"
        ea = {k: h.eps.get(a, 0) * c for k, c in one.items() if h.eps.get(a, 0)}
        if m1 != ea or m2 != ea:
            return f"antipode fails at {a}"
        # (id (x) phi)Delta(a) = phi(a)1 and (psi (x) id)Delta(a) = psi(a)1
        li: Vec = {}
        ri: Vec = {}
        for k, c in d.items():
            p, q = divmod(k, n)
            vaxpy(li, c * h.phi.get(q, 0), {p: ONE})
            vaxpy(ri, c * h.psi.get(p, 0), {q: ONE})
        if li != {k: h.phi.get(a, 0) * c for k, c in one.items() if h.phi.get(a, 0)}:
            return f"left integral not invariant at {a}"
        if ri != {k: h.psi.get(a, 0) * c for k, c in one.items() if h.psi.get(a, 0)}:
            return f"right integral not invariant at {a}"
    for a in range(n):
        for b in range(n):
            ab = H.mult.get((a, b), {})
            lhs: Vec = {}
            for i, c in ab.items():
                vaxpy(lhs, c, D.columns[i])
            rhs: Vec = {}
            for k1, c1 in D.columns[a].items():
                for k2, c2 in D.columns[b].items():
                    p1, q1 = divmod(k1, n)
                    p2, q2 = divmod(k2, n)
                    for i, x in H.mult.get((p1, p2), {}).items():
                        for j, y in H.mult.get((q1, q2), {}).items():
                            vaxpy(rhs, c1 * c2 * x * y, {i * n + j: ONE})
            if lhs != rhs:
                return f"comultiplication not multiplicative at ({a},{b})"
    return None


def finite_group(kind: str) -> Tuple[List[str], Callable[[str, str], str]]:
    """Elements and multiplication of ``Z/m`` (``"Z2"``, ``"Z3"``, ...) or ``"S3"``."""
    if kind.startswith("Z"):
        m = int(kind[1:])
        els = [f"g{i}" for i in range(m)]
        return els, lambda a, b: f"g{(int(a[1:]) + int(b[1:])) % m}"
    if kind == "S3":
        perms = list(itertools.permutations(range(3)))
        name = lambda p: "".join(str(i + 1) for i in p)
        table = {(name(p), name(q)): name(tuple(p[q[i]] for i in range(3))) for p in perms for q in perms}
        return [name(p) for p in perms], lambda a, b: table[(a, b)]
    raise SpecError(f"unknown group {kind}")


def group_algebra(kind: str) -> HopfData:
    els, mul = finite_group(kind)
    n = len(els)
    idx = {g: i for i, g in enumerate(els)}
    e = next(x for x in els if all(mul(x, y) == y for y in els))
    inv = {a: next(b for b in els if mul(a, b) == e) for a in els}
    H = FiniteAlgebra(n, {(idx[a], idx[b]): {idx[mul(a, b)]: ONE} for a in els for b in els},
                      labels=[f"u[{g}]" for g in els], unit={idx[e]: ONE},
                      star=LinMap(n, n, [{idx[inv[g]]: ONE} for g in els]), name=f"k{kind}")
    Delta = LinMap(n * n, n, [{idx[g] * n + idx[g]: ONE} for g in els])
    S = LinMap(n, n, [{idx[inv[g]]: ONE} for g in els])
    return HopfData(H, Delta, {i: ONE for i in range(n)}, S, {idx[e]: ONE}, {idx[e]: ONE},
                    name=f"k{kind}", group=els)


def function_algebra_of_group(kind: str) -> HopfData:
    els, mul = finite_group(kind)
    n = len(els)
    idx = {g: i for i, g in enumerate(els)}
    e = next(x for x in els if all(mul(x, y) == y for y in els))
    inv = {a: next(b for b in els if mul(a, b) == e) for a in els}
    H = function_algebra(els, name=f"k^{kind}")
    cols = []
    for g in els:
        d: Vec = {}
        for h in els:
            d[idx[h] * n + idx[mul(inv[h], g)]] = ONE
        cols.append(d)
    Delta = LinMap(n * n, n, cols)
    S = LinMap(n, n, [{idx[inv[g]]: ONE} for g in els])
    total = {i: ONE for i in range(n)}
    return HopfData(H, Delta, {idx[e]: ONE}, S, total, dict(total), name=f"k^{kind}", group=els)


def hopf_instances(kind: str) -> HopfData:
    """``"kG"`` or ``"k^G"`` for a finite group ``G`` (``Z2``, ``S3``, ...)."""
    if kind.startswith("k^"):
        h = function_algebra_of_group(kind[2:])
    elif kind.startswith("k"):
        h = group_algebra(kind[1:])
    else:
        raise SpecError(f"unknown Hopf algebra {kind}")
    err = check_hopf(h)
    if err:
        raise SpecError(err)
    return h


def hopf_algebroid(h: HopfData) -> MeasuredAlgebroid:
    """A Hopf algebra with integrals as an algebroid over the scalars."""
    H = h.H
    n = H.dim
    TL, TR, LT, RT = canonical_from_coproduct(H, h.Delta)
    I1 = LinMap.identity(1)
    core = AlgebroidData(H, trivial_base(n), trivial_base(n), I1, I1, TL, TR, LT, RT, name=h.name)
    phiC = LinMap(1, n, [{0: h.phi[i]} if h.phi.get(i) else {} for i in range(n)])
    psiB = LinMap(1, n, [{0: h.psi[i]} if h.psi.get(i) else {} for i in range(n)])
    return MeasuredAlgebroid(core, {0: ONE}, {0: ONE}, phiC, psiB, name=h.name)


# ---------------------------------------------------------------------------
# expected dual of a groupoid


def rational_sqrt(q) -> Optional[object]:
    """Exact square root of a positive rational, or None."""
    import gmpy2

    q = gmpy2.mpq(q)
    if q <= 0:
        return None
    p, d = q.numerator, q.denominator
    if not (gmpy2.is_square(p) and gmpy2.is_square(d)):
        return None
    return gmpy2.mpq(gmpy2.isqrt(p), gmpy2.isqrt(d))


@dataclass
class GroupoidDualOracle:
    """Structure of the dual in the basis ``f^ = f D^{-1/2} . phi``.

    ``to_hat`` sends the coordinates of ``f^`` for ``f = delta_g`` to the
    coordinates in the basis ``delta_g . phi``.
    """

    to_hat: LinMap
    mult: Dict[Tuple[int, int], Vec]
    star: Dict[int, Vec]
    lt: Dict[Tuple[int, int], Vec]  # (f^ (x) 1) Delta^_C(f'^)
    tr: Dict[Tuple[int, int], Vec]  # Delta^_B(f^)(1 (x) f'^)
    right_integral: Dict[int, Vec]  # f^ -> f restricted to the units, in unit coordinates


def groupoid_dual_oracle(g: GroupoidSpec) -> GroupoidDualOracle:
    err = check_groupoid(g)
    if err:
        raise SpecError(f"not a groupoid: {err}")
    arrows = g.arrows
    n = len(arrows)
    idx = {a: i for i, a in enumerate(arrows)}
    uidx = {u: i for i, u in enumerate(g.units)}
    root = {}
    for a in arrows:
        r = rational_sqrt(g.D(a))
        if r is None:
            raise SpecError(f"D not square at {a}: choose weights with square ratios")
        root[a] = r
    to_hat = LinMap(n, n, [{idx[a]: 1 / root[a]} for a in arrows])
    mult, lt, tr = {}, {}, {}
    for a in arrows:
        for b in arrows:
            c = g.compose.get((a, b))
            if c is None:
                continue
            mult[(idx[a], idx[b])] = {idx[c]: ONE}
            lt[(idx[a], idx[b])] = {idx[c] * n + idx[b]: 1 / root[b]}
            tr[(idx[a], idx[b])] = {idx[a] * n + idx[c]: root[a]}
    star = {idx[a]: {idx[g.inv[a]]: ONE} for a in arrows}
    right = {idx[a]: ({uidx[a]: ONE} if a in uidx else {}) for a in arrows}
    return GroupoidDualOracle(to_hat, mult, star, lt, tr, right)


# ---------------------------------------------------------------------------
# module algebras over a Hopf algebra


def _sweedler(h: HopfData, i: int) -> List[Tuple[int, int, object]]:
    n = h.H.dim
    return [(k // n, k % n, c) for k, c in h.Delta.columns[i].items()]


def _lin(M: LinMap, v: Vec) -> Vec:
    return M(v)


@dataclass
class SmashSpec:
    """A unital algebra ``C`` with a left action of ``H`` and a weight ``mu_C``.

    ``action[k]`` is the matrix of ``e_k |> -`` on ``C``; ``coaction`` (needed
    for the Yetter-Drinfeld construction) maps ``C`` into ``C (x) H`` with
    index ``y * dim(H) + h``.
    """

    C: FiniteAlgebra
    H: HopfData
    action: List[LinMap]
    muC: Vec
    coaction: Optional[LinMap] = None
    name: str = ""

    def act(self, hv: Vec, y: Vec) -> Vec:
        out: Vec = {}
        for k, c in hv.items():
            vaxpy(out, c, self.action[k](y))
        return out


def check_module_algebra(s: SmashSpec) -> Optional[str]:
    C, h = s.C, s.H
    nC, nH = C.dim, h.H.dim
    one = C.one()
    if one is None:
        return "C is not unital"
    for a in range(nH):
        for b in range(nH):
            if s.act(h.H.mult.get((a, b), {}), {}) or True:
                for y in range(nC):
                    lhs = s.act(h.H.mult.get((a, b), {}), {y: ONE})
                    rhs = s.action[a](s.action[b]({y: ONE}))
                    if lhs != rhs:
                        return f"action not multiplicative at ({a},{b}) on {y}"
        for y in range(nC):
            for z in range(nC):
                lhs = s.action[a](C.mult.get((y, z), {}))
                rhs: Vec = {}
                for p, q, c in _sweedler(h, a):
                    vaxpy(rhs, c, C.mul(s.action[p]({y: ONE}), s.action[q]({z: ONE})))
                if lhs != rhs:
                    return f"h |> (yz) != (h1 |> y)(h2 |> z) at ({a},{y},{z})"
        e = h.eps.get(a, 0)
        if s.action[a](one) != {k: e * c for k, c in one.items() if e * c}:
            return f"h |> 1 != eps(h) 1 at {a}"
    hone = h.H.one()
    for y in range(nC):
        if s.act(hone, {y: ONE}) != {y: ONE}:
            return "the unit of H does not act trivially"
    if vdot(s.muC, one) != 1:
        return "mu_C is not normalized"
    for a in range(nH):
        for y in range(nC):
            if vdot(s.muC, s.action[a]({y: ONE})) != h.eps.get(a, 0) * s.muC.get(y, 0):
                return f"mu_C not invariant at ({a},{y})"
    return None


def check_yetter_drinfeld(s: SmashSpec) -> Optional[str]:
    """Comodule algebra, Yetter-Drinfeld compatibility, braided commutativity and invariance."""
    if s.coaction is None:
        return "no coaction"
    C, h = s.C, s.H
    H = h.H
    nC, nH = C.dim, H.dim
    co = s.coaction

    def split(v: Vec):
        return [(k // nH, k % nH, c) for k, c in v.items()]

    # counit and coassociativity of the coaction
    for y in range(nC):
        back: Vec = {}
        for yy, hh, c in split(co.columns[y]):
            vaxpy(back, c * h.eps.get(hh, 0), {yy: ONE})
        if back != {y: ONE}:
            return f"coaction not counital at {y}"
        lhs: Vec = {}
        rhs: Vec = {}
        for yy, hh, c in split(co.columns[y]):
            for y2, h2, c2 in split(co.columns[yy]):
                vaxpy(lhs, c * c2, {(y2 * nH + h2) * nH + hh: ONE})
            for p, q, c2 in _sweedler(h, hh):
                vaxpy(rhs, c * c2, {(yy * nH + p) * nH + q: ONE})
        if lhs != rhs:
            return f"coaction not coassociative at {y}"
    # algebra map into C (x) H^op
    for y in range(nC):
        for z in range(nC):
            lhs = co(C.mult.get((y, z), {}))
            rhs: Vec = {}
            for y1, h1, c1 in split(co.columns[y]):
                for z1, k1, c2 in split(co.columns[z]):
                    for a, x in C.mult.get((y1, z1), {}).items():
                        for b, w in H.mult.get((k1, h1), {}).items():
                            vaxpy(rhs, c1 * c2 * x * w, {a * nH + b: ONE})
            if lhs != rhs:
                return f"coaction not multiplicative at ({y},{z})"
    # (h2 |> y)_0 (x) (h2 |> y)_1 h1 = h1 |> y_0 (x) h2 y_1
    for a in range(nH):
        for y in range(nC):
            lhs: Vec = {}
            rhs: Vec = {}
            for p, q, c in _sweedler(h, a):
                for yy, hh, c2 in split(co(s.action[q]({y: ONE}))):
                    for b, w in H.mult.get((hh, p), {}).items():
                        vaxpy(lhs, c * c2 * w, {yy * nH + b: ONE})
                for yy, hh, c2 in split(co.columns[y]):
                    for b, w in H.mult.get((q, hh), {}).items():
                        vaxpy(rhs, c * c2 * w, s_tensor(s.action[p]({yy: ONE}), {b: ONE}, nH))
            if lhs != rhs:
                return f"Yetter-Drinfeld condition fails at ({a},{y})"
    # y y' = y'_0 (y'_1 |> y) = (S(y_1) |> y') y_0
    for y in range(nC):
        for z in range(nC):
            yz = C.mult.get((y, z), {})
            r1: Vec = {}
            for z0, z1, c in split(co.columns[z]):
                vaxpy(r1, c, C.mul({z0: ONE}, s.action[z1]({y: ONE})))
            r2: Vec = {}
            for y0, y1, c in split(co.columns[y]):
                vaxpy(r2, c, C.mul(s.act(h.S.columns[y1], {z: ONE}), {y0: ONE}))
            if not (_clean(yz) == _clean(r1) == _clean(r2)):
                return f"not braided commutative at ({y},{z})"
    # mu(y_0) y_1 = mu(y) 1
    hone = H.one()
    for y in range(nC):
        lhs: Vec = {}
        for y0, y1, c in split(co.columns[y]):
            vaxpy(lhs, c * s.muC.get(y0, 0), {y1: ONE})
        if _clean(lhs) != {k: s.muC.get(y, 0) * c for k, c in hone.items() if s.muC.get(y, 0)}:
            return f"mu_C not coinvariant at {y}"
    return None


def s_tensor(u: Vec, v: Vec, n2: int) -> Vec:
    return {i * n2 + j: x * y for i, x in u.items() for j, y in v.items()}


def _clean(v: Vec) -> Vec:
    return {k: c for k, c in v.items() if c}


def _elem_mult(A: FiniteAlgebra, a: Vec) -> Multiplier:
    return Multiplier.of_element(A, a)


def crossed_product(s: SmashSpec) -> MeasuredAlgebroid:
    """``A = C (x) H (x) C^op`` with the two-sided crossed product structure."""
    from .integration import modular_automorphism

    err = check_module_algebra(s)
    if err:
        raise SpecError(err)
    C, h = s.C, s.H
    H = h.H
    nC, nH = C.dim, H.dim
    n = nC * nH * nC
    Sinv = inverse(h.S)
    sigma = modular_automorphism(C, s.muC)
    ix = lambda y, k, x: (y * nH + k) * nC + x

    mult = {}
    for y, k, x in itertools.product(range(nC), range(nH), range(nC)):
        for y2, k2, x2 in itertools.product(range(nC), range(nH), range(nC)):
            out: Vec = {}
            for p1, q1, c1 in _sweedler(h, k):
                left = C.mul({y: ONE}, s.action[p1]({y2: ONE}))
                if not left:
                    continue
                for p2, q2, c2 in _sweedler(h, k2):
                    mid = H.mult.get((q1, p2), {})
                    right = C.mul({x2: ONE}, s.act(Sinv.columns[q2], {x: ONE}))
                    for a, va in left.items():
                        for b, vb in mid.items():
                            for c, vc in right.items():
                                vaxpy(out, c1 * c2 * va * vb * vc, {ix(a, b, c): ONE})
            if _clean(out):
                mult[(ix(y, k, x), ix(y2, k2, x2))] = _clean(out)
    oneC, oneH = C.one(), H.one()
    unit = {ix(a, b, c): va * vb * vc for a, va in oneC.items() for b, vb in oneH.items() for c, vc in oneC.items()}
    labels = [f"{C.labels[y]}*{H.labels[k]}*{C.labels[x]}^op" for y in range(nC) for k in range(nH) for x in range(nC)]
    A = FiniteAlgebra(n, mult, labels=labels, unit=unit, name=f"cross({s.name})")

    def embC(y):
        return {ix(y, b, c): vb * vc for b, vb in oneH.items() for c, vc in oneC.items()}

    def embB(x):
        return {ix(a, b, x): va * vb for a, va in oneC.items() for b, vb in oneH.items()}

    def embH(k):
        return {ix(a, k, c): va * vc for a, va in oneC.items() for c, vc in oneC.items()}

    Bop = FiniteAlgebra(nC, {(i, j): v for (j, i), v in C.mult.items()}, labels=[f"{l}^op" for l in C.labels],
                        unit=oneC, name=f"{C.name}^op")
    Bemb = BaseEmbedding(Bop, [_elem_mult(A, embB(x)) for x in range(nC)], "B")
    Cemb = BaseEmbedding(C, [_elem_mult(A, embC(y)) for y in range(nC)], "C")
    tC = LinMap.identity(nC)
    tB = inverse(sigma)
    # Delta(y h x) = y h_1 (x) h_2 x
    cols = []
    for y, k, x in itertools.product(range(nC), range(nH), range(nC)):
        d: Vec = {}
        for p, q, c in _sweedler(h, k):
            u = A.mul(embC(y), embH(p))
            v = A.mul(embH(q), embB(x))
            for i, a in u.items():
                for j, b in v.items():
                    vaxpy(d, c * a * b, {i * n + j: ONE})
        cols.append(d)
    TL, TR, LT, RT = canonical_from_coproduct(A, LinMap(n * n, n, cols))
    core = AlgebroidData(A, Bemb, Cemb, tB, tC, TL, TR, LT, RT, name=s.name or "cross")
    muB = dict(s.muC)
    psiB = LinMap(nC, n, [_clean({x: s.muC.get(y, 0) * h.psi.get(k, 0)})
                          for y, k, x in itertools.product(range(nC), range(nH), range(nC))])
    phiC = LinMap(nC, n, [_clean({y: h.phi.get(k, 0) * s.muC.get(x, 0)})
                          for y, k, x in itertools.product(range(nC), range(nH), range(nC))])
    mm = MeasuredAlgebroid(core, muB, dict(s.muC), phiC, psiB, name=s.name or "cross")
    mm.embed_H = LinMap(n, nH, [embH(k) for k in range(nH)])
    mm.embed_C = LinMap(n, nC, [embC(y) for y in range(nC)])
    mm.embed_B = LinMap(n, nC, [embB(x) for x in range(nC)])
    return mm


def yd_algebroid(s: SmashSpec) -> MeasuredAlgebroid:
    """``A = C # H`` over the bases ``C`` and ``{y_0 # y_1}``."""
    err = check_module_algebra(s) or check_yetter_drinfeld(s)
    if err:
        raise SpecError(err)
    if vdot(h_one := s.H.H.one(), s.H.phi) != 1:
        raise SpecError("the integral of H is not normalized")
    C, h = s.C, s.H
    H = h.H
    nC, nH = C.dim, H.dim
    n = nC * nH
    ix = lambda y, k: y * nH + k
    Sinv = inverse(h.S)
    mult = {}
    for y, k in itertools.product(range(nC), range(nH)):
        for y2, k2 in itertools.product(range(nC), range(nH)):
            out: Vec = {}
            for p, q, c in _sweedler(h, k):
                left = C.mul({y: ONE}, s.action[p]({y2: ONE}))
                for b, vb in H.mult.get((q, k2), {}).items():
                    for a, va in left.items():
                        vaxpy(out, c * va * vb, {ix(a, b): ONE})
            if _clean(out):
                mult[(ix(y, k), ix(y2, k2))] = _clean(out)
    oneC = C.one()
    unit = {ix(a, b): va * vb for a, va in oneC.items() for b, vb in h_one.items()}
    labels = [f"{C.labels[y]}#{H.labels[k]}" for y in range(nC) for k in range(nH)]
    A = FiniteAlgebra(n, mult, labels=labels, unit=unit, name=f"smash({s.name})")

    def embC(y):
        return {ix(y, b): vb for b, vb in h_one.items()}

    def embH(k):
        return {ix(a, k): va for a, va in oneC.items()}

    co = s.coaction
    tCvec = [_clean({ix(k // nH, k % nH): c for k, c in co.columns[y].items()}) for y in range(nC)]
    Cemb = BaseEmbedding(C, [_elem_mult(A, embC(y)) for y in range(nC)], "C")
    # B has the basis t_C(e_y); its product is transported from A
    Bmult = {}
    Tc = LinMap(n, nC, tCvec)
    for y in range(nC):
        for z in range(nC):
            prod = A.mul(tCvec[y], tCvec[z])
            sol = solve(Tc, prod).particular if prod else {}
            if sol:
                Bmult[(y, z)] = sol
    Balg = FiniteAlgebra(nC, Bmult, labels=[f"t({l})" for l in C.labels],
                         unit=solve(Tc, A.one()).particular, name=f"B({s.name})")
    Bemb = BaseEmbedding(Balg, [_elem_mult(A, tCvec[y]) for y in range(nC)], "B")
    tC = LinMap.identity(nC)
    # t_B(y_0 # y_1) = S^-1(y_1) |> y_0
    tBcols = []
    for y in range(nC):
        out: Vec = {}
        for k, c in co.columns[y].items():
            y0, y1 = divmod(k, nH)
            vaxpy(out, c, s.act(Sinv.columns[y1], {y0: ONE}))
        tBcols.append(_clean(out))
    tB = LinMap(nC, nC, tBcols)
    cols = []
    for y, k in itertools.product(range(nC), range(nH)):
        d: Vec = {}
        for p, q, c in _sweedler(h, k):
            u = A.mul(embC(y), embH(p))
            for i, a in u.items():
                for j, b in embH(q).items():
                    vaxpy(d, c * a * b, {i * n + j: ONE})
        cols.append(d)
    TL, TR, LT, RT = canonical_from_coproduct(A, LinMap(n * n, n, cols))
    core = AlgebroidData(A, Bemb, Cemb, tB, tC, TL, TR, LT, RT, name=s.name or "yd")
    phiC = LinMap(nC, n, [_clean({y: h.phi.get(k, 0)}) for y, k in itertools.product(range(nC), range(nH))])
    # psi_B(h x) = phi_H(h) x: express each basis element through products h x
    hx = LinMap(n, nH * nC, [A.mul(embH(k), tCvec[x]) for k in range(nH) for x in range(nC)])
    hx_inv = inverse(hx)
    psi_hx = LinMap(nC, nH * nC, [_clean({x: h.phi.get(k, 0)}) for k in range(nH) for x in range(nC)])
    psiB = psi_hx @ hx_inv
    mm = MeasuredAlgebroid(core, dict(s.muC), dict(s.muC), phiC, psiB, name=s.name or "yd")
    mm.embed_H = LinMap(n, nH, [embH(k) for k in range(nH)])
    mm.embed_C = LinMap(n, nC, [embC(y) for y in range(nC)])
    mm.embed_B = Tc
    return mm


def translation_spec(kind: str = "Z2", coaction: bool = False, name: str = "") -> SmashSpec:
    """``C = k^G`` with ``(u_g |> f)(x) = f(xg)``, uniform normalized weight and,
    when asked, the trivial coaction ``y -> y (x) 1``."""
    h = hopf_instances(f"k{kind}")
    els, mul = finite_group(kind)
    idx = {g: i for i, g in enumerate(els)}
    C = function_algebra(els, name=f"k^{kind}")
    m = len(els)
    # u_g |> delta_x = delta_{x g^-1}
    e = next(x for x in els if all(mul(x, y) == y for y in els))
    inv = {a: next(b for b in els if mul(a, b) == e) for a in els}
    action = [LinMap(m, m, [{idx[mul(x, inv[g])]: ONE} for x in els]) for g in els]
    mu = {i: scalar(f"1/{m}") for i in range(m)}
    co = None
    if coaction:
        co = LinMap(m * m, m, [{y * m + idx[e]: ONE} for y in range(m)])
    return SmashSpec(C, h, action, mu, co, name=name or f"{kind}-translation")


# ---------------------------------------------------------------------------
# the dual Hopf algebra and the model duals


@dataclass
class HopfDual:
    """``H^`` in the basis ``e_i . phi_H`` (the functional ``c -> phi_H(c e_i)``)."""

    source: HopfData
    hopf: HopfData
    carrier: LinMap
    carrier_inv: LinMap

    def coords(self, values: Vec) -> Vec:
        return self.carrier_inv(_clean(values))


def dual_hopf(h: HopfData) -> HopfDual:
    H = h.H
    n = H.dim
    F = LinMap(n, n, [_clean({c: vdot(h.phi, H.mul({c: ONE}, {i: ONE})) for c in range(n)}) for i in range(n)])
    Fi = inverse(F)
    f = [F.columns[i] for i in range(n)]
    mult = {}
    for i in range(n):
        for j in range(n):
            vals: Vec = {}
            for a in range(n):
                s = 0
                for k, c in h.Delta.columns[a].items():
                    p, q = divmod(k, n)
                    s += c * f[i].get(p, 0) * f[j].get(q, 0)
                if s:
                    vals[a] = s
            w = Fi(vals)
            if w:
                mult[(i, j)] = w
    # Delta^(w)(a (x) b) = w(ab)
    FF = inverse(kron(F, F))
    Dcols = []
    for i in range(n):
        vals = {}
        for a in range(n):
            for b in range(n):
                v = vdot(f[i], H.mult.get((a, b), {}))
                if v:
                    vals[a * n + b] = v
        Dcols.append(FF(vals))
    Delta = LinMap(n * n, n, Dcols)
    one = H.one()
    eps = _clean({i: vdot(f[i], one) for i in range(n)})
    S = Fi @ h.S.transpose() @ F
    psi = _clean(dict(h.eps))
    # phi^(psi_H . a) = eps(a) where (psi_H . a)(c) = psi_H(a c)
    G = LinMap(n, n, [Fi(_clean({c: vdot(h.psi, H.mul({a: ONE}, {c: ONE})) for c in range(n)})) for a in range(n)])
    epsrow = LinMap(1, n, [{0: h.eps[a]} if h.eps.get(a) else {} for a in range(n)])
    phi = (epsrow @ inverse(G)).row_dicts()[0]
    alg = FiniteAlgebra(n, mult, labels=[f"{l}.phi" for l in H.labels], unit=Fi(_clean(dict(h.eps))),
                        name=f"dual({h.name})")
    return HopfDual(h, HopfData(alg, Delta, eps, S, phi, psi, name=f"dual({h.name})"), F, Fi)



@dataclass
class ModelDual:
    """An explicit algebra claimed to be the dual, with the identification map
    ``L`` from model coordinates to dual coordinates and the expected actions
    of the two bases and the expected functionals."""

    algebra: FiniteAlgebra
    L: LinMap
    actC: List[LinMap]  # left action of y in C on the model
    actB: List[LinMap]  # left action of the basis of B on the model
    counit: Vec
    integral: Vec
    integral_name: str
    hat_embedding: LinMap  # H^ -> model, v -> 1 (x) v
    hopf_dual: HopfDual
    name: str = ""


def _coaction_hat(s: SmashSpec, hd: HopfDual) -> List[List[Tuple[int, Vec]]]:
    """``y -> sum_k (e_k |> y) (x) e^k`` with ``e^k`` in dual coordinates."""
    n = s.H.H.dim
    out = []
    for y in range(s.C.dim):
        terms = []
        for k in range(n):
            v = s.action[k]({y: ONE})
            if v:
                terms.append((k, v))
        out.append([(k, v) for k, v in terms])
    dual_k = [hd.coords({k: ONE}) for k in range(n)]
    return [[(dual_k[k], v) for k, v in row] for row in out]


def crossed_product_model(s: SmashSpec, mm: MeasuredAlgebroid, d) -> ModelDual:
    """``K (x) H^`` with ``|y><x| . |y'><x'| = mu_C(y' x) |y><x'|``."""
    C, h = s.C, s.H
    nC, m = C.dim, h.H.dim
    hd = dual_hopf(h)
    Hh = hd.hopf.H
    ix = lambda y, x, k: (y * nC + x) * m + k
    mult = {}
    for y, x, k in itertools.product(range(nC), range(nC), range(m)):
        for y2, x2, k2 in itertools.product(range(nC), range(nC), range(m)):
            c = vdot(s.muC, C.mult.get((y2, x), {}))
            if not c:
                continue
            out = {ix(y, x2, kk): c * v for kk, v in Hh.mult.get((k, k2), {}).items()}
            if out:
                mult[(ix(y, x, k), ix(y2, x2, k2))] = out
    n = nC * nC * m
    # 1_K = sum G^-1[y, x] |y><x| for the Gram matrix G[x, y] = mu_C(x y)
    Ginv = inverse(LinMap(nC, nC, [_clean({x: vdot(s.muC, C.mult.get((x, y), {})) for x in range(nC)})
                                   for y in range(nC)]))
    oneK = {(y, x): c for x in range(nC) for y, c in Ginv.columns[x].items()}
    unit = _clean({ix(y, x, k): c * v for (y, x), c in oneK.items() for k, v in Hh.one().items()})
    K = FiniteAlgebra(n, mult, labels=[f"|{C.labels[y]}><{C.labels[x]}|(x){Hh.labels[k]}"
                                       for y in range(nC) for x in range(nC) for k in range(m)],
                      unit=unit, name=f"K(x)dual({h.name})")
    A = mm.core.A
    eH, eC, eB = mm.embed_H, mm.embed_C, mm.embed_B
    # h y . phi . x^op : c -> phi(x^op c h y)
    cols = []
    for y, x, k in itertools.product(range(nC), range(nC), range(m)):
        hy = A.mul(eH.columns[k], eC.columns[y])
        vals = _clean({c: vdot(mm.phi, A.mul(A.mul(eB.columns[x], {c: ONE}), hy)) for c in range(A.dim)})
        cols.append(d.hat(vals))
    L = LinMap(A.dim, n, cols)
    Sinv = inverse(h.S)
    actB, actC = [], []
    for z in range(nC):
        actB.append(LinMap(n, n, [_clean({ix(a, x, k): c for a, c in C.mul({y: ONE}, {z: ONE}).items()})
                                  for y, x, k in itertools.product(range(nC), range(nC), range(m))]))
        cols = []
        for y, x, k in itertools.product(range(nC), range(nC), range(m)):
            out: Vec = {}
            for p, q, c in _sweedler(h, k):
                w = C.mul(s.act(Sinv.columns[p], {z: ONE}), {y: ONE})
                for a, v in w.items():
                    vaxpy(out, c * v, {ix(a, x, q): ONE})
            cols.append(_clean(out))
        actC.append(LinMap(n, n, cols))
    epsH, phiH = hd.hopf.eps, hd.hopf.phi
    counit = _clean({ix(y, x, k): s.muC.get(y, 0) * s.muC.get(x, 0) * epsH.get(k, 0)
                     for y, x, k in itertools.product(range(nC), range(nC), range(m))})
    integral = _clean({ix(y, x, k): vdot(s.muC, C.mult.get((x, y), {})) * phiH.get(k, 0)
                       for y, x, k in itertools.product(range(nC), range(nC), range(m))})
    emb = LinMap(n, m, [_clean({ix(y, x, k): c for (y, x), c in oneK.items()}) for k in range(m)])
    return ModelDual(K, L, actC, actB, counit, integral, "left integral phi^", emb, hd, name=f"K(x)dual({h.name})")


def yd_model(s: SmashSpec, mm: MeasuredAlgebroid, d) -> ModelDual:
    """``B # H^`` with ``(x # v)(x' # w) = x (v_1 |> x') # v_2 w``."""
    h = s.H
    nC, m = s.C.dim, h.H.dim
    hd = dual_hopf(h)
    Hh = hd.hopf
    B = mm.core.B.algebra
    ix = lambda z, k: z * m + k
    n = nC * m
    co = s.coaction

    def hat_act(k: int, z: int) -> Vec:
        # v |> t_C(z) = t_C(z_0) v(z_1)
        out: Vec = {}
        for kk, c in co.columns[z].items():
            z0, z1 = divmod(kk, m)
            vaxpy(out, c * hd.carrier.columns[k].get(z1, 0), {z0: ONE})
        return _clean(out)

    mult = {}
    for z, k in itertools.product(range(nC), range(m)):
        for z2, k2 in itertools.product(range(nC), range(m)):
            out: Vec = {}
            for kk, c in Hh.Delta.columns[k].items():
                p, q = divmod(kk, m)
                left = B.mul({z: ONE}, hat_act(p, z2))
                right = Hh.H.mult.get((q, k2), {})
                for a, va in left.items():
                    for b, vb in right.items():
                        vaxpy(out, c * va * vb, {ix(a, b): ONE})
            if _clean(out):
                mult[(ix(z, k), ix(z2, k2))] = _clean(out)
    unit = _clean({ix(z, k): c * v for z, c in B.one().items() for k, v in Hh.H.one().items()})
    M = FiniteAlgebra(n, mult, labels=[f"{B.labels[z]}#{Hh.H.labels[k]}" for z in range(nC) for k in range(m)],
                      unit=unit, name=f"B#dual({h.name})")
    A = mm.core.A
    eH, eC = mm.embed_H, mm.embed_C
    # h y . phi : c -> phi(c h y)
    cols = []
    for z, k in itertools.product(range(nC), range(m)):
        hy = A.mul(eH.columns[k], eC.columns[z])
        vals = _clean({c: vdot(mm.phi, A.mul({c: ONE}, hy)) for c in range(A.dim)})
        cols.append(d.hat(vals))
    L = LinMap(A.dim, n, cols)
    coh = _coaction_hat(s, hd)
    actB = [LinMap(n, n, [_clean({ix(a, k): c for a, c in B.mul({x: ONE}, {z: ONE}).items()})
                          for z, k in itertools.product(range(nC), range(m))]) for x in range(nC)]
    actC = []
    for y in range(nC):
        cols = []
        for z, k in itertools.product(range(nC), range(m)):
            out: Vec = {}
            for w1, y0 in coh[y]:
                left = B.mul({z: ONE}, y0)  # t_C = identity on coordinates of B
                for j, cw in w1.items():
                    for b, vb in Hh.H.mult.get((j, k), {}).items():
                        for a, va in left.items():
                            vaxpy(out, cw * vb * va, {ix(a, b): ONE})
            cols.append(_clean(out))
        actC.append(LinMap(n, n, cols))
    counit = _clean({ix(z, k): s.muC.get(z, 0) * Hh.eps.get(k, 0) for z in range(nC) for k in range(m)})
    integral = _clean({ix(z, k): s.muC.get(z, 0) * Hh.psi.get(k, 0) for z in range(nC) for k in range(m)})
    emb = LinMap(n, m, [_clean({ix(a, k): c for a, c in B.one().items()}) for k in range(m)])
    return ModelDual(M, L, actC, actB, counit, integral, "right integral psi^", emb, hd, name=f"B#dual({h.name})")


def model_report(d, model: ModelDual) -> "Report":
    """Compare the generic dual with an explicit model through ``L``."""
    from .report import Report

    rep = Report(f"dual of {d.mm.name} against {model.name}")
    L = model.L
    dual = d.dual
    Ah, K = dual.core.A, model.algebra
    n = K.dim
    ok = L.rows == L.cols == Ah.dim and _full_rank(L)
    rep.add("identification is bijective", ok, {"rows": L.rows, "cols": L.cols})
    if not ok:
        return rep
    bad = None
    for i in range(n):
        for j in range(n):
            if L(K.mult.get((i, j), {})) != Ah.mul(L.columns[i], L.columns[j]):
                bad = (K.labels[i], K.labels[j])
                break
        if bad:
            break
    rep.add("identification is multiplicative", bad is None, bad)
    if K.unit is not None:
        rep.add("identification is unital", L(K.unit) == Ah.unit, {"image": L(K.unit)})
    Cemb, Bemb = dual.core.B, dual.core.C  # the dual is taken over (C, B)
    for label, emb, acts in (("C", Cemb, model.actC), ("B", Bemb, model.actB)):
        bad = next((z for z, T in enumerate(acts) if emb.images[z].lam @ L != L @ T), None)
        rep.add(f"left action of {label} matches", bad is None, {"base element": bad})
    rep.add("counit matches", _compose_row(dual.eps, L) == _clean(model.counit),
            {"dual": _compose_row(dual.eps, L), "model": model.counit})
    hits = [nm for nm, f in (("phi", dual.phi), ("psi", dual.psi)) if _compose_row(f, L) == _clean(model.integral)]
    rep.add(f"{model.integral_name} matches a dual integral", bool(hits), note=",".join(hits))
    return rep


def _compose_row(f: Vec, L: LinMap) -> Vec:
    return _clean({j: vdot(f, L.columns[j]) for j in range(L.cols)})


def _full_rank(M: LinMap) -> bool:
    from .linalg import rank

    return rank(M) == M.cols


def scalar_spec(h: HopfData, coaction: bool = False) -> SmashSpec:
    """``C`` equal to the ground field with the trivial action."""
    m = h.H.dim
    action = [LinMap(1, 1, [{0: h.eps[k]} if h.eps.get(k) else {}]) for k in range(m)]
    co = LinMap(m, 1, [dict(h.H.one())]) if coaction else None
    return SmashSpec(scalars(), h, action, {0: ONE}, co, name=f"k.{h.name}")
