"""Base embeddings, the eight module structures on ``A``, balanced tensor
products as explicit quotients, slice maps and factorizable functionals."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import FiniteAlgebra, Multiplier, is_antihomomorphism
from .linalg import (
    ONE,
    LinMap,
    NoSolution,
    Subspace,
    Vec,
    inverse,
    is_bijective,
    kernel,
    vaxpy,
    vdot,
    vsub,
)


class ModuleError(ValueError):
    pass


class NotFactorizable(ValueError):
    pass


# ---------------------------------------------------------------------------
# base algebras inside M(A)


class BaseEmbedding:
    """A base algebra together with its images in ``M(A)``."""

    def __init__(self, algebra: FiniteAlgebra, images: List[Multiplier], label: str):
        if len(images) != algebra.dim:
            raise ModuleError("one image per base basis element is required")
        self.algebra = algebra
        self.images = images
        self.label = label
        n = images[0].lam.rows if images else 0
        self.n = n

    @property
    def dim(self) -> int:
        return self.algebra.dim

    def multiplier(self, x: Vec) -> Multiplier:
        n = self.n
        lam = [{} for _ in range(n)]
        rho = [{} for _ in range(n)]
        for k, c in x.items():
            im = self.images[k]
            for j in range(n):
                vaxpy(lam[j], c, im.lam.columns[j])
                vaxpy(rho[j], c, im.rho.columns[j])
        return Multiplier(LinMap(n, n, lam), LinMap(n, n, rho))

    def lam(self, x: Vec) -> LinMap:
        return self.multiplier(x).lam

    def rho(self, x: Vec) -> LinMap:
        return self.multiplier(x).rho

    def check_embedding(self) -> Optional[str]:
        B = self.algebra
        for i in range(B.dim):
            for j in range(B.dim):
                lhs = self.multiplier(B.mult.get((i, j), {}))
                if lhs != self.images[i] * self.images[j]:
                    return f"not multiplicative at ({i},{j})"
        flat = Subspace(2 * self.n * self.n)
        for im in self.images:
            v: Vec = {}
            for j, col in enumerate(im.lam.columns):
                for r, x in col.items():
                    v[j * self.n + r] = x
            for j, col in enumerate(im.rho.columns):
                for r, x in col.items():
                    v[self.n * self.n + j * self.n + r] = x
            if not flat.add(v):
                return "not injective"
        return None

    def coords_of(self, T: Multiplier) -> Optional[Vec]:
        """Base coordinates of a multiplier lying in the image, else None."""
        from .linalg import solve

        n = self.n

        def flat(m: Multiplier) -> Vec:
            v: Vec = {}
            for j, col in enumerate(m.lam.columns):
                for r, x in col.items():
                    v[j * n + r] = x
            for j, col in enumerate(m.rho.columns):
                for r, x in col.items():
                    v[n * n + j * n + r] = x
            return v

        M = LinMap(2 * n * n, self.dim, [flat(m) for m in self.images])
        try:
            return solve(M, flat(T)).particular
        except NoSolution:
            return None


def bases_commute(B: BaseEmbedding, C: BaseEmbedding) -> Optional[Tuple[int, int]]:
    for i, x in enumerate(B.images):
        for j, y in enumerate(C.images):
            if x * y != y * x:
                return (i, j)
    return None


# ---------------------------------------------------------------------------
# module structures


@dataclass
class ModuleStructure:
    name: str
    side: str  # "left" or "right"
    base: str  # "B" or "C"
    actions: List[LinMap]
    base_algebra: FiniteAlgebra

    def act(self, x: Vec) -> LinMap:
        n = self.actions[0].rows
        cols = [{} for _ in range(n)]
        for k, c in x.items():
            for j, col in enumerate(self.actions[k].columns):
                vaxpy(cols[j], c, col)
        return LinMap(n, n, cols)

    def check_axioms(self) -> Optional[str]:
        R = self.base_algebra
        for i in range(R.dim):
            for j in range(R.dim):
                lhs = self.act(R.mult.get((i, j), {}))
                if self.side == "left":
                    rhs = self.actions[i] @ self.actions[j]
                else:
                    rhs = self.actions[j] @ self.actions[i]
                if lhs != rhs:
                    return f"action not multiplicative at ({i},{j})"
        return None

    def is_idempotent(self) -> bool:
        n = self.actions[0].rows
        return Subspace(n, (c for a in self.actions for c in a.columns)).dim == n

    def is_nondegenerate(self) -> bool:
        # m with x.m = 0 for all x must vanish
        n = self.actions[0].rows
        stacked = LinMap(n * len(self.actions), n, [{} for _ in range(n)])
        for k, a in enumerate(self.actions):
            for j, col in enumerate(a.columns):
                for r, x in col.items():
                    stacked.columns[j][k * n + r] = x
        return kernel(stacked).dim == 0


MODULE_NAMES = ("_BA", "A_B", "_CA", "A_C", "A^B", "^BA", "A^C", "^CA")


def build_module_structures(A: FiniteAlgebra, B: BaseEmbedding, C: BaseEmbedding,
                            tB: LinMap, tC: LinMap, check: bool = True) -> Dict[str, ModuleStructure]:
    """The eight actions of the bases on ``A``.

    ``tB`` maps B-coordinates to C-coordinates and ``tC`` the other way.
    """
    if check:
        if not (is_bijective(tB) and is_antihomomorphism(tB, B.algebra, C.algebra)):
            raise ModuleError("base maps not anti-isomorphisms: t_B")
        if not (is_bijective(tC) and is_antihomomorphism(tC, C.algebra, B.algebra)):
            raise ModuleError("base maps not anti-isomorphisms: t_C")
    nB, nC = B.dim, C.dim
    xs = [{k: ONE} for k in range(nB)]
    ys = [{k: ONE} for k in range(nC)]
    mods = {
        "_BA": ModuleStructure("_BA", "left", "B", [B.lam(x) for x in xs], B.algebra),
        "A_B": ModuleStructure("A_B", "right", "B", [B.rho(x) for x in xs], B.algebra),
        "_CA": ModuleStructure("_CA", "left", "C", [C.lam(y) for y in ys], C.algebra),
        "A_C": ModuleStructure("A_C", "right", "C", [C.rho(y) for y in ys], C.algebra),
        "A^B": ModuleStructure("A^B", "right", "B", [C.lam(tB(x)) for x in xs], B.algebra),
        "^BA": ModuleStructure("^BA", "left", "B", [C.rho(tB(x)) for x in xs], B.algebra),
        "A^C": ModuleStructure("A^C", "right", "C", [B.lam(tC(y)) for y in ys], C.algebra),
        "^CA": ModuleStructure("^CA", "left", "C", [B.rho(tC(y)) for y in ys], C.algebra),
    }
    return mods


# ---------------------------------------------------------------------------
# tensors of vectors


def tensor(u: Vec, v: Vec, n2: int) -> Vec:
    out: Vec = {}
    for i, x in u.items():
        base = i * n2
        for j, y in v.items():
            out[base + j] = x * y
    return out


def split(t: Vec, n2: int):
    """Iterate ``(i, j, coeff)`` over a tensor vector."""
    for k, c in t.items():
        yield k // n2, k % n2, c


def apply_pair(t: Vec, f: LinMap, g: LinMap, n2_in: int, n2_out: int) -> Vec:
    """``(f (x) g)(t)``."""
    out: Vec = {}
    for i, j, c in split(t, n2_in):
        fi = f.columns[i]
        gj = g.columns[j]
        for a, x in fi.items():
            base = a * n2_out
            for b, y in gj.items():
                s = out.get(base + b, 0) + c * x * y
                if s:
                    out[base + b] = s
                else:
                    out.pop(base + b, None)
    return out


def flip(t: Vec, n: int) -> Vec:
    return {(k % n) * n + k // n: c for k, c in t.items()}


# ---------------------------------------------------------------------------
# balanced tensor products


class BalancedTensor:
    """``M_R (x) _R N`` as the quotient of ``M (x) N`` by the balancing relations.

    The normal form of a representative is its reduction modulo the relation
    subspace; the non-pivot coordinates index a basis of the quotient and the
    section sends that basis to unit vectors.
    """

    def __init__(self, left: ModuleStructure, right: ModuleStructure, label: str = ""):
        if left.side != "right" or right.side != "left":
            raise ModuleError("need a right module on the left and a left module on the right")
        if left.base != right.base:
            raise ModuleError("modules over different bases")
        self.left = left
        self.right = right
        self.label = label or f"{left.name}(x){right.name}"
        n1 = left.actions[0].rows
        n2 = right.actions[0].rows
        self.n1, self.n2 = n1, n2
        rel = Subspace(n1 * n2)
        for r in range(len(left.actions)):
            la, ra = left.actions[r], right.actions[r]
            for m in range(n1):
                mr = la.columns[m]
                for k in range(n2):
                    v = tensor(mr, {k: ONE}, n2)
                    vaxpy(v, -ONE, tensor({m: ONE}, ra.columns[k], n2))
                    rel.add(v)
        self.relations = rel
        self.basis_index = rel.complement_indices()
        self._pos = {k: i for i, k in enumerate(self.basis_index)}

    @property
    def dim(self) -> int:
        return len(self.basis_index)

    def reduce(self, t: Vec) -> Vec:
        return self.relations.reduce(t)

    def project(self, t: Vec) -> Vec:
        """Quotient coordinates of a representative."""
        red = self.relations.reduce(t)
        return {self._pos[k]: c for k, c in red.items()}

    def section(self, q: Vec) -> Vec:
        return {self.basis_index[i]: c for i, c in q.items()}

    def equal(self, s: Vec, t: Vec) -> bool:
        return not self.relations.reduce(vsub(s, t))

    def project_map(self) -> LinMap:
        N = self.n1 * self.n2
        return LinMap(self.dim, N, [self.project({k: ONE}) for k in range(N)])

    def section_map(self) -> LinMap:
        return LinMap(self.n1 * self.n2, self.dim, [{k: ONE} for k in self.basis_index])


class TripleTensor:
    """``M (x)_R N (x)_S P`` for a bimodule ``N`` given by two structures."""

    def __init__(self, m_right: ModuleStructure, n_left: ModuleStructure,
                 n_right: ModuleStructure, p_left: ModuleStructure, label: str = ""):
        first = BalancedTensor(m_right, n_left)
        second = BalancedTensor(n_right, p_left)
        n1, n2, n3 = first.n1, first.n2, second.n2
        self.dims = (n1, n2, n3)
        self.label = label
        rel = Subspace(n1 * n2 * n3)
        for v in first.relations.basis():
            for k in range(n3):
                rel.add({i * n3 + k: c for i, c in v.items()})
        for v in second.relations.basis():
            for i in range(n1):
                rel.add({i * n2 * n3 + j: c for j, c in v.items()})
        self.relations = rel

    def equal(self, s: Vec, t: Vec) -> bool:
        return not self.relations.reduce(vsub(s, t))

    def reduce(self, t: Vec) -> Vec:
        return self.relations.reduce(t)

    @property
    def dim(self) -> int:
        return self.dims[0] * self.dims[1] * self.dims[2] - self.relations.dim


def apply_on_legs12(t: Vec, F: LinMap, dims) -> Vec:
    """``(F (x) id)`` on a triple tensor, ``F`` acting on ``A (x) A`` coordinates."""
    n1, n2, n3 = dims
    out: Vec = {}
    for k, c in t.items():
        ab, z = divmod(k, n3)
        for r, x in F.columns[ab].items():
            vaxpy_single(out, r * n3 + z, c * x)
    return out


def apply_on_legs23(t: Vec, F: LinMap, dims) -> Vec:
    n1, n2, n3 = dims
    m = n2 * n3
    out: Vec = {}
    for k, c in t.items():
        a, bc = divmod(k, m)
        for r, x in F.columns[bc].items():
            vaxpy_single(out, a * m + r, c * x)
    return out


def apply_on_legs13(t: Vec, F: LinMap, dims) -> Vec:
    n1, n2, n3 = dims
    out: Vec = {}
    for k, c in t.items():
        a, rest = divmod(k, n2 * n3)
        b, z = divmod(rest, n3)
        for r, x in F.columns[a * n3 + z].items():
            p, q = divmod(r, n3)
            vaxpy_single(out, p * n2 * n3 + b * n3 + q, c * x)
    return out


def vaxpy_single(d: Vec, k, c):
    if not c:
        return
    s = d.get(k, 0) + c
    if s:
        d[k] = s
    else:
        d.pop(k, None)


# ---------------------------------------------------------------------------
# multiplying tensors by multipliers


def left_mul(t: Vec, u: LinMap, v: LinMap, n: int) -> Vec:
    """``(U (x) V) t`` where ``u, v`` are left-multiplication matrices."""
    return apply_pair(t, u, v, n, n)


def right_mul(t: Vec, u: LinMap, v: LinMap, n: int) -> Vec:
    """``t (U (x) V)`` where ``u, v`` are right-multiplication matrices."""
    return apply_pair(t, u, v, n, n)


# ---------------------------------------------------------------------------
# slice maps


def slice_left(f: LinMap, right_factor: ModuleStructure, n1: int) -> LinMap:
    """``(f (.) id)(m (x) n) = f(m) . n`` with the left action on the right factor."""
    n2 = right_factor.actions[0].rows
    cols = []
    for k in range(n1 * n2):
        m, nn = divmod(k, n2)
        out: Vec = {}
        for r, c in f.columns[m].items():
            vaxpy(out, c, right_factor.actions[r].columns[nn])
        cols.append(out)
    return LinMap(n2, n1 * n2, cols)


def slice_right(g: LinMap, left_factor: ModuleStructure, n2: int) -> LinMap:
    """``(id (.) g)(m (x) n) = m . g(n)`` with the right action on the left factor."""
    n1 = left_factor.actions[0].rows
    cols = []
    for k in range(n1 * n2):
        m, nn = divmod(k, n2)
        out: Vec = {}
        for r, c in g.columns[nn].items():
            vaxpy(out, c, left_factor.actions[r].columns[m])
        cols.append(out)
    return LinMap(n1, n1 * n2, cols)


def descends(S: LinMap, T: BalancedTensor) -> Optional[Vec]:
    """A relation vector not killed by ``S``, or None when ``S`` factors through the quotient."""
    for v in T.relations.basis():
        if S(v):
            return v
    return None


# ---------------------------------------------------------------------------
# factorizable functionals


def functional_value(omega: Vec, a: Vec):
    return vdot(omega, a)


class Factorizer:
    """Factorization of functionals on ``A`` through one module structure.

    For a left module the partial ``f`` is fixed by ``mu(y f(m)) = omega(y.m)``,
    for a right module by ``mu(f(m) y) = omega(m.y)``; faithfulness of ``mu``
    makes the Gram matrix invertible.
    """

    def __init__(self, module: ModuleStructure, mu: Vec):
        self.module = module
        R = module.base_algebra
        self.R = R
        self.mu = mu
        nR = R.dim
        gram = []
        for k in range(nR):
            row = []
            for l in range(nR):
                if module.side == "left":
                    prod = R.mult.get((k, l), {})
                else:
                    prod = R.mult.get((l, k), {})
                row.append(vdot(mu, prod))
            gram.append(row)
        G = LinMap.from_grid(gram) if nR else LinMap(0, 0)
        try:
            self.ginv = inverse(G)
        except NoSolution:
            raise NotFactorizable("base weight is not faithful")
        self.n = module.actions[0].rows

    def partial(self, omega: Vec, check: bool = True) -> LinMap:
        n, nR = self.n, self.R.dim
        cols = []
        acts = self.module.actions
        for m in range(n):
            rhs = {k: vdot(omega, acts[k].columns[m]) for k in range(nR)}
            rhs = {k: c for k, c in rhs.items() if c}
            cols.append(self.ginv(rhs))
        f = LinMap(nR, n, cols)
        if check:
            w = self.failure(omega, f)
            if w is not None:
                raise NotFactorizable(w)
        return f

    def failure(self, omega: Vec, f: LinMap) -> Optional[str]:
        R = self.R
        for m in range(self.n):
            if vdot(self.mu, f.columns[m]) != omega.get(m, 0):
                return f"mu o partial != omega at basis {m} ({self.module.name})"
        for r in range(R.dim):
            act = self.module.actions[r]
            for m in range(self.n):
                lhs = f(act.columns[m])
                if self.module.side == "left":
                    rhs = R.mul({r: ONE}, f.columns[m])
                else:
                    rhs = R.mul(f.columns[m], {r: ONE})
                if lhs != rhs:
                    return f"partial not a module map at ({r},{m}) ({self.module.name})"
        return None

    def constraint_rows(self) -> List[Vec]:
        """Linear conditions on ``omega`` (as an n-vector) for factorizability."""
        n, nR = self.n, self.R.dim
        acts = self.module.actions
        # f_omega(e_m)_l = sum_k ginv[l,k] * omega(act_k e_m)
        # as a functional of omega: coefficient vector over A-basis
        coef: List[List[Vec]] = []  # coef[m][l] = vector over omega-index
        for m in range(n):
            per_l = []
            for l in range(nR):
                v: Vec = {}
                for k in range(nR):
                    g = self.ginv.columns[k].get(l)
                    if g:
                        vaxpy(v, g, acts[k].columns[m])
                per_l.append(v)
            coef.append(per_l)
        rows: List[Vec] = []
        R = self.R
        for m in range(n):
            v: Vec = {}
            for l in range(nR):
                if self.mu.get(l):
                    vaxpy(v, self.mu[l], coef[m][l])
            vaxpy(v, -ONE, {m: ONE})
            if v:
                rows.append(v)
        for r in range(R.dim):
            act = self.module.actions[r]
            for m in range(n):
                # f(act_r e_m) - r f(e_m), componentwise in R
                for l in range(nR):
                    v: Vec = {}
                    for mm, c in act.columns[m].items():
                        vaxpy(v, c, coef[mm][l])
                    for l2 in range(nR):
                        if self.module.side == "left":
                            prod = R.mult.get((r, l2), {})
                        else:
                            prod = R.mult.get((l2, r), {})
                        c = prod.get(l)
                        if c:
                            vaxpy(v, -c, coef[m][l2])
                    if v:
                        rows.append(v)
        return rows


def factorizable_subspace(factorizers: Sequence[Factorizer], n: int) -> Subspace:
    rows: List[Vec] = []
    for f in factorizers:
        rows.extend(f.constraint_rows())
    M = LinMap(len(rows), n, [{} for _ in range(n)])
    for r, v in enumerate(rows):
        for c, x in v.items():
            M.columns[c][r] = x
    return kernel(M)


PARTIAL_NAMES = {
    "_BA": "_Bw", "A_B": "w_B", "_CA": "_Cw", "A_C": "w_C",
    "^BA": "^Bw", "A^B": "w^B", "^CA": "^Cw", "A^C": "w^C",
}


@dataclass
class FactorizableFunctional:
    omega: Vec
    partials: Dict[str, LinMap] = field(default_factory=dict)

    def __getitem__(self, key: str) -> LinMap:
        return self.partials[key]


def factorize(omega: Vec, factorizers: Dict[str, Factorizer], which: Sequence[str] = MODULE_NAMES) -> FactorizableFunctional:
    parts = {}
    for name in which:
        parts[PARTIAL_NAMES[name]] = factorizers[name].partial(omega)
    return FactorizableFunctional(dict(omega), parts)


def tensor_functionals(upsilon_right: LinMap, omega_left: LinMap, base: FiniteAlgebra, mu: Vec, n1: int, n2: int) -> Vec:
    """``(m (x) n) -> mu(upsilon_R(m) omega_R(n))`` on representatives."""
    out: Vec = {}
    for m in range(n1):
        um = upsilon_right.columns[m]
        if not um:
            continue
        for k in range(n2):
            val = vdot(mu, base.mul(um, omega_left.columns[k]))
            if val:
                out[m * n2 + k] = val
    return out


def shift_functional(omega: Vec, left: Optional[LinMap], right: Optional[LinMap]) -> Vec:
    """``m -> omega(X m Y)`` given left-multiplication ``X`` and right-multiplication ``Y`` maps."""
    n = max([left.rows if left else 0, right.rows if right else 0])
    out: Vec = {}
    for m in range(n):
        v = {m: ONE}
        if right is not None:
            v = right(v)
        if left is not None:
            v = left(v)
        val = vdot(omega, v)
        if val:
            out[m] = val
    return out
