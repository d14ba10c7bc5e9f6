"""Finite-dimensional, possibly non-unital algebras given by structure constants."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .linalg import (
    ONE,
    LinMap,
    NoSolution,
    Subspace,
    Vec,
    conj,
    from_dense,
    kernel,
    rank,
    scalar,
    solve_equations,
    vaxpy,
    vconj,
    vec,
    vsub,
)


class AlgebraError(ValueError):
    pass


class FiniteAlgebra:
    """Algebra with basis ``e_0..e_{n-1}`` and ``e_i e_j = sum_k mult[i,j][k] e_k``.

    ``star`` is the matrix of ``e_i -> e_i^*``; on a general element the
    coefficients are conjugated first, which makes the involution
    conjugate-linear.
    """

    def __init__(
        self,
        dim: int,
        mult: Dict[Tuple[int, int], Vec],
        labels: Optional[Sequence[str]] = None,
        unit: Optional[Vec] = None,
        star: Optional[LinMap] = None,
        name: str = "",
    ):
        self.dim = dim
        self.mult = {k: dict(v) for k, v in mult.items() if v}
        self.labels = list(labels) if labels is not None else [f"e{i}" for i in range(dim)]
        if len(self.labels) != dim:
            raise AlgebraError("label count mismatch")
        self.unit = dict(unit) if unit is not None else None
        self.star = star
        self.name = name
        self._L: Optional[List[LinMap]] = None
        self._R: Optional[List[LinMap]] = None

    # -- arithmetic ---------------------------------------------------
    def basis(self, i: int) -> Vec:
        return {i: ONE}

    def mul(self, a: Vec, b: Vec) -> Vec:
        out: Vec = {}
        m = self.mult
        for i, x in a.items():
            for j, y in b.items():
                c = m.get((i, j))
                if c:
                    vaxpy(out, x * y, c)
        return out

    def left_ops(self) -> List[LinMap]:
        """``L[i]`` is left multiplication by ``e_i``."""
        if self._L is None:
            n = self.dim
            self._L = [
                LinMap(n, n, [dict(self.mult.get((i, j), {})) for j in range(n)]) for i in range(n)
            ]
        return self._L

    def right_ops(self) -> List[LinMap]:
        if self._R is None:
            n = self.dim
            self._R = [
                LinMap(n, n, [dict(self.mult.get((j, i), {})) for j in range(n)]) for i in range(n)
            ]
        return self._R

    def lmat(self, a: Vec) -> LinMap:
        return _combine(self.left_ops(), a, self.dim)

    def rmat(self, a: Vec) -> LinMap:
        return _combine(self.right_ops(), a, self.dim)

    def apply_star(self, a: Vec) -> Vec:
        if self.star is None:
            raise AlgebraError("algebra has no involution")
        return self.star(vconj(a))

    def one(self) -> Vec:
        if self.unit is None:
            raise AlgebraError("algebra is not unital")
        return dict(self.unit)

    def __repr__(self):
        return f"FiniteAlgebra({self.name or 'anon'}, dim={self.dim})"

    def structure_equal(self, other: "FiniteAlgebra") -> bool:
        return self.dim == other.dim and self.mult == other.mult


def _combine(ops: List[LinMap], a: Vec, n: int) -> LinMap:
    cols: List[Vec] = [{} for _ in range(n)]
    for i, x in a.items():
        for j, col in enumerate(ops[i].columns):
            vaxpy(cols[j], x, col)
    return LinMap(n, n, cols)


def algebra_from_table(dim, table, **kw) -> FiniteAlgebra:
    """Build from sparse ``[i, j, k, value]`` entries."""
    mult: Dict[Tuple[int, int], Vec] = {}
    for i, j, k, c in table:
        d = mult.setdefault((i, j), {})
        s = d.get(k, 0) + scalar(c)
        if s:
            d[k] = s
        else:
            d.pop(k, None)
    return FiniteAlgebra(dim, mult, **kw)


def function_algebra(points: Sequence[str], name: str = "") -> FiniteAlgebra:
    """Pointwise functions on a finite set, with ``f^*(p) = conj(f(p))``."""
    n = len(points)
    mult = {(i, i): {i: ONE} for i in range(n)}
    unit = {i: ONE for i in range(n)}
    return FiniteAlgebra(n, mult, labels=[f"d[{p}]" for p in points], unit=unit,
                         star=LinMap.identity(n), name=name)


def scalars() -> FiniteAlgebra:
    return FiniteAlgebra(1, {(0, 0): {0: ONE}}, labels=["1"], unit={0: ONE},
                         star=LinMap.identity(1), name="Q(i)")


# ---------------------------------------------------------------------------
# validation


@dataclass
class AlgebraReport:
    associative: bool
    nondegenerate: bool
    idempotent: bool
    hasLocalUnits: bool
    unit_ok: Optional[bool] = None
    star_ok: Optional[bool] = None
    witnesses: Dict[str, object] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        flags = [self.associative, self.nondegenerate, self.idempotent]
        flags += [f for f in (self.unit_ok, self.star_ok) if f is not None]
        return all(flags)


def associativity_witness(A: FiniteAlgebra):
    n = A.dim
    for i in range(n):
        for j in range(n):
            eij = A.mult.get((i, j), {})
            for k in range(n):
                lhs = A.mul(eij, {k: ONE})
                rhs = A.mul({i: ONE}, A.mult.get((j, k), {}))
                if lhs != rhs:
                    return (i, j, k)
    return None


def is_nondegenerate(A: FiniteAlgebra) -> Tuple[bool, Optional[str]]:
    n = A.dim
    # a -> (a e_j)_j and a -> (e_j a)_j must both be injective
    left = LinMap(n * n, n, [_stack([A.right_ops()[j].columns[i] for j in range(n)], n) for i in range(n)])
    right = LinMap(n * n, n, [_stack([A.left_ops()[j].columns[i] for j in range(n)], n) for i in range(n)])
    if rank(left) < n:
        return False, "some nonzero a has aA = 0"
    if rank(right) < n:
        return False, "some nonzero a has Aa = 0"
    return True, None


def _stack(vs: List[Vec], n: int) -> Vec:
    out: Vec = {}
    for b, v in enumerate(vs):
        for k, x in v.items():
            out[b * n + k] = x
    return out


def is_idempotent(A: FiniteAlgebra) -> bool:
    return Subspace(A.dim, A.mult.values()).dim == A.dim


def find_local_unit(A: FiniteAlgebra) -> Optional[Vec]:
    """An element ``u`` with ``u e_i = e_i = e_i u`` for every basis element."""
    n = A.dim
    eqs = []
    L, R = A.left_ops(), A.right_ops()
    for m in range(n):
        # sum_k u_k e_k e_m = e_m  and  sum_k u_k e_m e_k = e_m
        for side in (R[m], L[m]):
            rows: List[Vec] = [{} for _ in range(n)]
            for k in range(n):
                for r, x in side.columns[k].items():
                    rows[r][k] = x
            for r in range(n):
                eqs.append((rows[r], ONE if r == m else 0))
    try:
        sol = solve_equations(n, eqs)
    except NoSolution:
        return None
    return sol.particular


def validate_algebra(A: FiniteAlgebra) -> AlgebraReport:
    wit: Dict[str, object] = {}
    w = associativity_witness(A)
    assoc = w is None
    if w is not None:
        wit["associative"] = {"triple": list(w)}
    nd, why = is_nondegenerate(A)
    if not nd:
        wit["nondegenerate"] = why
    idem = is_idempotent(A)
    lu = find_local_unit(A)
    rep = AlgebraReport(assoc, nd, idem, lu is not None, witnesses=wit)
    if A.unit is not None:
        u = A.unit
        rep.unit_ok = all(A.mul(u, {i: ONE}) == {i: ONE} == A.mul({i: ONE}, u) for i in range(A.dim))
    if A.star is not None:
        rep.star_ok, sw = _check_star(A)
        if sw:
            wit["star"] = sw
    return rep


def _check_star(A: FiniteAlgebra):
    n = A.dim
    for i in range(n):
        ei = {i: ONE}
        if A.apply_star(A.apply_star(ei)) != ei:
            return False, {"involutive": i}
    for i in range(n):
        for j in range(n):
            lhs = A.apply_star(A.mult.get((i, j), {}))
            rhs = A.mul(A.apply_star({j: ONE}), A.apply_star({i: ONE}))
            if lhs != rhs:
                return False, {"antimultiplicative": [i, j]}
    return True, None


# ---------------------------------------------------------------------------
# multipliers


class Multiplier:
    """Pair ``(lam, rho)`` with ``lam(b) = T b`` and ``rho(a) = a T``."""

    __slots__ = ("lam", "rho")

    def __init__(self, lam: LinMap, rho: LinMap):
        self.lam = lam
        self.rho = rho

    @classmethod
    def of_element(cls, A: FiniteAlgebra, a: Vec) -> "Multiplier":
        return cls(A.lmat(a), A.rmat(a))

    @classmethod
    def identity(cls, n: int) -> "Multiplier":
        return cls(LinMap.identity(n), LinMap.identity(n))

    def compatible(self, A: FiniteAlgebra) -> bool:
        for i in range(A.dim):
            for j in range(A.dim):
                if A.mul(self.rho({i: ONE}), {j: ONE}) != A.mul({i: ONE}, self.lam({j: ONE})):
                    return False
        return True

    def __mul__(self, other: "Multiplier") -> "Multiplier":
        # (ST) b = S(T b);  a (ST) = (a S) T
        return Multiplier(self.lam @ other.lam, other.rho @ self.rho)

    def __add__(self, other):
        return Multiplier(self.lam + other.lam, self.rho + other.rho)

    def scale(self, c) -> "Multiplier":
        return Multiplier(self.lam.scale(c), self.rho.scale(c))

    def __eq__(self, other):
        if not isinstance(other, Multiplier):
            return NotImplemented
        return self.lam == other.lam and self.rho == other.rho

    def __hash__(self):
        return hash((self.lam, self.rho))

    def in_algebra(self, A: FiniteAlgebra) -> Optional[Vec]:
        """The element ``a`` with ``Multiplier.of_element(a) == self``, if any."""
        n = A.dim
        L, R = A.left_ops(), A.right_ops()
        eqs = []
        for j in range(n):
            want_l = self.lam.columns[j]
            want_r = self.rho.columns[j]
            for r in range(n):
                lhs_l = {k: R[j].columns[k].get(r) for k in range(n) if R[j].columns[k].get(r)}
                lhs_r = {k: L[j].columns[k].get(r) for k in range(n) if L[j].columns[k].get(r)}
                eqs.append((lhs_l, want_l.get(r, 0)))
                eqs.append((lhs_r, want_r.get(r, 0)))
        try:
            sol = solve_equations(n, eqs)
        except NoSolution:
            return None
        return sol.particular

    def star(self, A: FiniteAlgebra) -> "Multiplier":
        """``T^*`` with ``T^* b = (b^* T)^*``."""
        n = A.dim
        lam = LinMap(n, n, [A.apply_star(self.rho(A.apply_star({j: ONE}))) for j in range(n)])
        rho = LinMap(n, n, [A.apply_star(self.lam(A.apply_star({j: ONE}))) for j in range(n)])
        return Multiplier(lam, rho)


def multiplier_compatibility_system(A: FiniteAlgebra):
    """Unknowns ``lam`` (first n*n) and ``rho`` (next n*n), column-major by basis input."""
    n = A.dim
    L, R = A.left_ops(), A.right_ops()
    eqs = []
    # rho(e_i) e_j = e_i lam(e_j)
    for i in range(n):
        for j in range(n):
            coeffs: Dict[int, Vec] = {}
            # rho(e_i) = sum_k rho[k,i] e_k ; e_k e_j
            for k in range(n):
                for r, x in R[j].columns[k].items():
                    coeffs.setdefault(r, {})
                    vaxpy(coeffs[r], x, {n * n + i * n + k: ONE})
                for r, x in L[i].columns[k].items():
                    coeffs.setdefault(r, {})
                    vaxpy(coeffs[r], -x, {j * n + k: ONE})
            for r, c in coeffs.items():
                if c:
                    eqs.append(c)
    return eqs


class MultiplierAlgebra:
    """A basis of ``M(A)`` with its structure constants and the embedding of ``A``."""

    def __init__(self, A: FiniteAlgebra, basis: List[Multiplier]):
        self.A = A
        self.basis = basis
        self.dim = len(basis)
        self._coords = _MultCoords(A.dim, basis)
        mult = {}
        for i, s in enumerate(basis):
            for j, t in enumerate(basis):
                mult[(i, j)] = self.coords(s * t)
        unit = self.coords(Multiplier.identity(A.dim))
        self.algebra = FiniteAlgebra(self.dim, mult, unit=unit, name=f"M({A.name})")

    def coords(self, T: Multiplier) -> Vec:
        return self._coords(T)

    def element(self, v: Vec) -> Multiplier:
        n = self.A.dim
        out = Multiplier(LinMap.zero(n, n), LinMap.zero(n, n))
        for k, c in v.items():
            out = out + self.basis[k].scale(c)
        return out

    def embed(self, a: Vec) -> Vec:
        return self.coords(Multiplier.of_element(self.A, a))


class _MultCoords:
    def __init__(self, n: int, basis: List[Multiplier]):
        self.n = n
        cols = [_flatten(T, n) for T in basis]
        self.M = LinMap(2 * n * n, len(basis), cols)

    def __call__(self, T: Multiplier) -> Vec:
        from .linalg import solve

        sol = solve(self.M, _flatten(T, self.n))
        return sol.particular


def _flatten(T: Multiplier, n: int) -> Vec:
    out: Vec = {}
    for j, col in enumerate(T.lam.columns):
        for r, x in col.items():
            out[j * n + r] = x
    for j, col in enumerate(T.rho.columns):
        for r, x in col.items():
            out[n * n + j * n + r] = x
    return out


def _unflatten(v: Vec, n: int) -> Multiplier:
    lam = [{} for _ in range(n)]
    rho = [{} for _ in range(n)]
    for k, x in v.items():
        if k < n * n:
            lam[k // n][k % n] = x
        else:
            k -= n * n
            rho[k // n][k % n] = x
    return Multiplier(LinMap(n, n, lam), LinMap(n, n, rho))


def multiplier_algebra(A: FiniteAlgebra) -> MultiplierAlgebra:
    nd, why = is_nondegenerate(A)
    if not nd:
        raise AlgebraError(f"degenerate algebra: {why}")
    n = A.dim
    eqs = multiplier_compatibility_system(A)
    M = LinMap(len(eqs), 2 * n * n, [{} for _ in range(2 * n * n)])
    for r, e in enumerate(eqs):
        for c, x in e.items():
            M.columns[c][r] = x
    null = kernel(M)
    basis = [_unflatten(v, n) for v in null.basis()]
    return MultiplierAlgebra(A, basis)


def opposite(A: FiniteAlgebra) -> FiniteAlgebra:
    mult = {(j, i): dict(v) for (i, j), v in A.mult.items()}
    return FiniteAlgebra(A.dim, mult, labels=[f"{l}^op" for l in A.labels], unit=A.unit,
                         star=A.star, name=f"{A.name}^op")


# ---------------------------------------------------------------------------
# homomorphisms into multiplier algebras


def check_nondegenerate_hom(pi: List[Multiplier], A: FiniteAlgebra) -> bool:
    n = A.dim
    left = Subspace(n, (m.lam({j: ONE}) for m in pi for j in range(n)))
    right = Subspace(n, (m.rho({j: ONE}) for m in pi for j in range(n)))
    return left.dim == n and right.dim == n


def extend_hom(pi: List[Multiplier], D: FiniteAlgebra, A: FiniteAlgebra, MD: Optional[MultiplierAlgebra] = None):
    """Extend ``pi: D -> M(A)`` to ``M(D) -> M(A)``.

    Returns a function on multipliers of ``D``; the value ``pi(T)`` is fixed by
    ``pi(T)(pi(d) a) = pi(T d) a`` and ``(a pi(d)) pi(T) = a pi(d T)``.
    """
    if not check_nondegenerate_hom(pi, A):
        raise AlgebraError("degenerate homomorphism")
    n, m = A.dim, D.dim

    def pi_of(v: Vec) -> Multiplier:
        out = Multiplier(LinMap.zero(n, n), LinMap.zero(n, n))
        for k, c in v.items():
            out = out + pi[k].scale(c)
        return out

    # spanning sets {pi(d) a} and {a pi(d)} with their index pairs
    def ext(T: Multiplier) -> Multiplier:
        lam_eqs_src, lam_eqs_dst = [], []
        rho_src, rho_dst = [], []
        for d in range(m):
            Td = T.lam({d: ONE})
            dT = T.rho({d: ONE})
            pTd, pdT = pi_of(Td), pi_of(dT)
            for a in range(n):
                lam_eqs_src.append(pi[d].lam({a: ONE}))
                lam_eqs_dst.append(pTd.lam({a: ONE}))
                rho_src.append(pi[d].rho({a: ONE}))
                rho_dst.append(pdT.rho({a: ONE}))
        lam = _fit_map(lam_eqs_src, lam_eqs_dst, n)
        rho = _fit_map(rho_src, rho_dst, n)
        return Multiplier(lam, rho)

    return ext


def _fit_map(src: List[Vec], dst: List[Vec], n: int) -> LinMap:
    """The linear map X with X(src[k]) = dst[k]; src must span."""
    from .linalg import solve_many

    S = LinMap(n, len(src), src)
    Dm = LinMap(n, len(dst), dst)
    # X S = Dm  <=>  S^T X^T = Dm^T
    Xt, null = solve_many(S.transpose(), Dm.transpose())
    if null.dim:
        raise AlgebraError("spanning set does not span")
    return Xt.transpose()


def is_homomorphism(f: LinMap, D: FiniteAlgebra, A: FiniteAlgebra) -> bool:
    for i in range(D.dim):
        for j in range(D.dim):
            if f(D.mult.get((i, j), {})) != A.mul(f({i: ONE}), f({j: ONE})):
                return False
    return True


def is_antihomomorphism(f: LinMap, D: FiniteAlgebra, A: FiniteAlgebra) -> bool:
    for i in range(D.dim):
        for j in range(D.dim):
            if f(D.mult.get((i, j), {})) != A.mul(f({j: ONE}), f({i: ONE})):
                return False
    return True


def tensor_algebra(A: FiniteAlgebra, B: FiniteAlgebra) -> FiniteAlgebra:
    """``A (x) B`` with index ``i*dim(B) + j``."""
    nb = B.dim
    mult: Dict[Tuple[int, int], Vec] = {}
    for (i1, i2), c1 in A.mult.items():
        for (j1, j2), c2 in B.mult.items():
            out: Vec = {}
            for k1, x in c1.items():
                for k2, y in c2.items():
                    out[k1 * nb + k2] = x * y
            mult[(i1 * nb + j1, i2 * nb + j2)] = out
    unit = None
    if A.unit is not None and B.unit is not None:
        unit = {k1 * nb + k2: x * y for k1, x in A.unit.items() for k2, y in B.unit.items()}
    star = None
    if A.star is not None and B.star is not None:
        from .linalg import kron

        star = kron(A.star, B.star)
    labels = [f"{a}(x){b}" for a in A.labels for b in B.labels]
    return FiniteAlgebra(A.dim * nb, mult, labels=labels, unit=unit, star=star,
                         name=f"{A.name}(x){B.name}")
