"""Exact linear algebra over the Gaussian rationals Q(i).

Scalars are ``gmpy2.mpq`` when real and :class:`GRat` otherwise; every
arithmetic result collapses back to ``mpq`` once the imaginary part
vanishes, so purely rational fixtures never pay for complex arithmetic.

Vectors are sparse dicts ``{index: scalar}`` without zero entries.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from gmpy2 import mpq

Vec = Dict[int, object]


class GRat:
    """Gaussian rational ``re + i*im``."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = mpq(re)
        self.im = mpq(im)

    # -- helpers -----------------------------------------------------
    @staticmethod
    def _parts(x):
        if isinstance(x, GRat):
            return x.re, x.im
        return mpq(x), mpq(0)

    def __add__(self, o):
        a, b = GRat._parts(o)
        return mk(self.re + a, self.im + b)

    __radd__ = __add__

    def __sub__(self, o):
        a, b = GRat._parts(o)
        return mk(self.re - a, self.im - b)

    def __rsub__(self, o):
        a, b = GRat._parts(o)
        return mk(a - self.re, b - self.im)

    def __mul__(self, o):
        a, b = GRat._parts(o)
        return mk(self.re * a - self.im * b, self.re * b + self.im * a)

    __rmul__ = __mul__

    def __truediv__(self, o):
        a, b = GRat._parts(o)
        n = a * a + b * b
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        return mk((self.re * a + self.im * b) / n, (self.im * a - self.re * b) / n)

    def __rtruediv__(self, o):
        return GRat(*GRat._parts(o)) / self

    def __neg__(self):
        return mk(-self.re, -self.im)

    def __eq__(self, o):
        try:
            a, b = GRat._parts(o)
        except (TypeError, ValueError):
            return NotImplemented
        return self.re == a and self.im == b

    def __ne__(self, o):
        r = self.__eq__(o)
        return r if r is NotImplemented else not r

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def conjugate(self):
        return mk(self.re, -self.im)

    def __repr__(self):
        return f"GRat({self.re}, {self.im})"

    def __str__(self):
        return fmt(self)


def mk(re, im=0):
    """Canonical scalar: ``mpq`` when ``im == 0``, else :class:`GRat`."""
    if im == 0:
        return mpq(re)
    g = GRat.__new__(GRat)
    g.re = mpq(re)
    g.im = mpq(im)
    return g


def scalar(x):
    """Coerce ints, Fractions, strings "p/q", mpq or GRat to a canonical scalar."""
    if isinstance(x, GRat):
        return mk(x.re, x.im)
    if isinstance(x, str):
        return mpq(parse_rational(x))
    if isinstance(x, complex):
        raise TypeError("floating complex numbers are not exact")
    if isinstance(x, float):
        raise TypeError("floats are not exact scalars")
    return mpq(x)


def parse_rational(s: str):
    s = s.strip()
    if "/" in s:
        p, q = s.split("/", 1)
        q = int(q)
        if q == 0:
            raise ValueError(f"zero denominator in {s!r}")
        return mpq(int(p), q)
    return mpq(int(s))


def conj(x):
    return x.conjugate() if isinstance(x, GRat) else x


def re_im(x) -> Tuple[object, object]:
    return GRat._parts(x)


def fmt_rational(q) -> str:
    q = mpq(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def fmt(x) -> str:
    a, b = re_im(x)
    if b == 0:
        return fmt_rational(a)
    if a == 0:
        return f"{fmt_rational(b)}i"
    sign = "+" if b > 0 else "-"
    return f"{fmt_rational(a)}{sign}{fmt_rational(abs(b))}i"


I = mk(0, 1)
ZERO = mpq(0)
ONE = mpq(1)


# ---------------------------------------------------------------------------
# sparse vectors


def vec(entries: Iterable[Tuple[int, object]]) -> Vec:
    out: Vec = {}
    for k, c in entries:
        c = out.get(k, 0) + c
        if c:
            out[k] = c
        else:
            out.pop(k, None)
    return out


def from_dense(xs: Sequence) -> Vec:
    return {k: scalar(c) for k, c in enumerate(xs) if c}


def to_dense(v: Vec, n: int) -> list:
    out = [ZERO] * n
    for k, c in v.items():
        out[k] = c
    return out


def unit_vec(k: int) -> Vec:
    return {k: ONE}


def vadd(u: Vec, v: Vec) -> Vec:
    out = dict(u)
    for k, c in v.items():
        s = out.get(k, 0) + c
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def vsub(u: Vec, v: Vec) -> Vec:
    out = dict(u)
    for k, c in v.items():
        s = out.get(k, 0) - c
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def vscale(c, v: Vec) -> Vec:
    if not c:
        return {}
    return {k: c * x for k, x in v.items()}


def vaxpy(out: Vec, c, v: Vec) -> None:
    """In place ``out += c*v``."""
    if not c:
        return
    for k, x in v.items():
        s = out.get(k, 0) + c * x
        if s:
            out[k] = s
        else:
            del out[k]


def vdot(u: Vec, v: Vec):
    if len(u) > len(v):
        u, v = v, u
    s = ZERO
    for k, c in u.items():
        d = v.get(k)
        if d is not None:
            s = s + c * d
    return s


def vconj(v: Vec) -> Vec:
    return {k: conj(c) for k, c in v.items()}


def vsum(vs: Iterable[Vec]) -> Vec:
    out: Vec = {}
    for v in vs:
        vaxpy(out, ONE, v)
    return out


# ---------------------------------------------------------------------------
# linear maps


class LinMap:
    """Linear map ``Q(i)^cols -> Q(i)^rows`` stored by sparse columns."""

    __slots__ = ("rows", "cols", "columns")

    def __init__(self, rows: int, cols: int, columns: Optional[List[Vec]] = None):
        self.rows = rows
        self.cols = cols
        if columns is None:
            columns = [{} for _ in range(cols)]
        if len(columns) != cols:
            raise ValueError("column count mismatch")
        self.columns = columns

    @classmethod
    def identity(cls, n: int) -> "LinMap":
        return cls(n, n, [{k: ONE} for k in range(n)])

    @classmethod
    def zero(cls, rows: int, cols: int) -> "LinMap":
        return cls(rows, cols)

    @classmethod
    def from_grid(cls, grid: Sequence[Sequence], cols: Optional[int] = None) -> "LinMap":
        rows = len(grid)
        if cols is None:
            cols = len(grid[0]) if rows else 0
        columns: List[Vec] = [{} for _ in range(cols)]
        for r, row in enumerate(grid):
            if len(row) != cols:
                raise ValueError("ragged grid")
            for c, x in enumerate(row):
                if x:
                    columns[c][r] = scalar(x)
        return cls(rows, cols, columns)

    @classmethod
    def from_function(cls, rows: int, cols: int, f) -> "LinMap":
        return cls(rows, cols, [f(c) for c in range(cols)])

    def grid(self) -> List[list]:
        g = [[ZERO] * self.cols for _ in range(self.rows)]
        for c, col in enumerate(self.columns):
            for r, x in col.items():
                g[r][c] = x
        return g

    def row_dicts(self) -> List[Vec]:
        rows: List[Vec] = [{} for _ in range(self.rows)]
        for c, col in enumerate(self.columns):
            for r, x in col.items():
                rows[r][c] = x
        return rows

    def __call__(self, v: Vec) -> Vec:
        out: Vec = {}
        cols = self.columns
        for k, c in v.items():
            vaxpy(out, c, cols[k])
        return out

    apply = __call__

    def __matmul__(self, other: "LinMap") -> "LinMap":
        if self.cols != other.rows:
            raise ValueError(f"cannot compose {self.rows}x{self.cols} with {other.rows}x{other.cols}")
        return LinMap(self.rows, other.cols, [self(col) for col in other.columns])

    def __add__(self, other: "LinMap") -> "LinMap":
        self._same_shape(other)
        return LinMap(self.rows, self.cols, [vadd(a, b) for a, b in zip(self.columns, other.columns)])

    def __sub__(self, other: "LinMap") -> "LinMap":
        self._same_shape(other)
        return LinMap(self.rows, self.cols, [vsub(a, b) for a, b in zip(self.columns, other.columns)])

    def scale(self, c) -> "LinMap":
        return LinMap(self.rows, self.cols, [vscale(c, a) for a in self.columns])

    def _same_shape(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")

    def transpose(self) -> "LinMap":
        return LinMap(self.cols, self.rows, self.row_dicts())

    def conj(self) -> "LinMap":
        return LinMap(self.rows, self.cols, [vconj(a) for a in self.columns])

    def __eq__(self, other):
        if not isinstance(other, LinMap):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and self.columns == other.columns

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(tuple(sorted(c.items())) for c in self.columns)))

    def is_zero(self) -> bool:
        return not any(self.columns)

    def __repr__(self):
        return f"LinMap({self.rows}x{self.cols})"


def kron(a: LinMap, b: LinMap) -> LinMap:
    """Tensor product of maps on the index convention ``i*dim2 + j``."""
    cols = []
    for i in range(a.cols):
        for j in range(b.cols):
            out: Vec = {}
            for r1, x in a.columns[i].items():
                base = r1 * b.rows
                for r2, y in b.columns[j].items():
                    out[base + r2] = x * y
            cols.append(out)
    return LinMap(a.rows * b.rows, a.cols * b.cols, cols)


def hstack(maps: Sequence[LinMap]) -> LinMap:
    rows = maps[0].rows
    cols: List[Vec] = []
    for m in maps:
        if m.rows != rows:
            raise ValueError("row mismatch")
        cols.extend(m.columns)
    return LinMap(rows, len(cols), cols)


def vstack(maps: Sequence[LinMap]) -> LinMap:
    cols = maps[0].cols
    out: List[Vec] = [{} for _ in range(cols)]
    off = 0
    for m in maps:
        if m.cols != cols:
            raise ValueError("column mismatch")
        for c, col in enumerate(m.columns):
            for r, x in col.items():
                out[c][off + r] = x
        off += m.rows
    return LinMap(off, cols, out)


# ---------------------------------------------------------------------------
# subspaces in canonical reduced echelon form


class Subspace:
    """Subspace of ``Q(i)^n`` kept in fully reduced row echelon form.

    Each basis vector is keyed by its pivot (lowest index), has a 1 at the
    pivot and zeros at every other pivot, so equal subspaces have identical
    bases.
    """

    __slots__ = ("n", "rows", "_col_index")

    def __init__(self, n: int, vectors: Iterable[Vec] = ()):
        self.n = n
        self.rows: Dict[int, Vec] = {}
        # column -> set of pivots whose row has a nonzero entry in that column
        self._col_index: Dict[int, set] = {}
        for v in vectors:
            self.add(v)

    def copy(self) -> "Subspace":
        s = Subspace(self.n)
        s.rows = {p: dict(r) for p, r in self.rows.items()}
        s._col_index = {c: set(ps) for c, ps in self._col_index.items()}
        return s

    def reduce(self, v: Vec) -> Vec:
        """Normal form of ``v`` modulo the subspace (zero at every pivot)."""
        out = dict(v)
        rows = self.rows
        for p in [k for k in v if k in rows]:
            c = v[p]
            row = rows[p]
            for k, x in row.items():
                s = out.get(k, 0) - c * x
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
        return out

    def contains(self, v: Vec) -> bool:
        return not self.reduce(v)

    __contains__ = contains

    def add(self, v: Vec) -> bool:
        w = self.reduce(v)
        if not w:
            return False
        p = min(w)
        c = w[p]
        if c != 1:
            inv = ONE / c
            w = {k: x * inv for k, x in w.items()}
        # clear column p from existing rows
        for q in list(self._col_index.get(p, ())):
            row = self.rows[q]
            f = row[p]
            for k, x in w.items():
                s = row.get(k, 0) - f * x
                if s:
                    if k not in row:
                        self._col_index.setdefault(k, set()).add(q)
                    row[k] = s
                else:
                    row.pop(k, None)
                    self._col_index[k].discard(q)
        self.rows[p] = w
        for k in w:
            self._col_index.setdefault(k, set()).add(p)
        return True

    def add_all(self, vs: Iterable[Vec]) -> "Subspace":
        for v in vs:
            self.add(v)
        return self

    @property
    def dim(self) -> int:
        return len(self.rows)

    def pivots(self) -> List[int]:
        return sorted(self.rows)

    def basis(self) -> List[Vec]:
        return [self.rows[p] for p in sorted(self.rows)]

    def complement_indices(self) -> List[int]:
        """Non-pivot coordinates; they index a basis of the quotient."""
        return [k for k in range(self.n) if k not in self.rows]

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.n == other.n and self.rows == other.rows

    def __hash__(self):
        return hash((self.n, tuple((p, tuple(sorted(r.items()))) for p, r in sorted(self.rows.items()))))

    def issubset(self, other: "Subspace") -> bool:
        return all(other.contains(r) for r in self.rows.values())

    def sum(self, other: "Subspace") -> "Subspace":
        return self.copy().add_all(other.rows.values())

    def grid(self) -> List[list]:
        return [to_dense(r, self.n) for r in self.basis()]

    def __repr__(self):
        return f"Subspace(dim={self.dim} in {self.n})"


def full_space(n: int) -> Subspace:
    s = Subspace(n)
    for k in range(n):
        s.rows[k] = {k: ONE}
        s._col_index[k] = {k}
    return s


def column_space(m: LinMap) -> Subspace:
    return Subspace(m.rows, m.columns)


def row_space(m: LinMap) -> Subspace:
    return Subspace(m.cols, m.row_dicts())


# ---------------------------------------------------------------------------
# solving


class NoSolution(Exception):
    """The linear system is inconsistent."""

    def __init__(self, message="no solution", witness=None):
        super().__init__(message)
        self.witness = witness


class _Eliminator:
    """Row reduction of equations ``lhs . x = rhs`` with several right sides."""

    def __init__(self, nvars: int):
        self.nvars = nvars
        self.rows: Dict[int, Tuple[Vec, Vec]] = {}
        self.col_index: Dict[int, set] = {}
        self.inconsistent: Optional[Tuple[int, Vec]] = None
        self._eq_count = 0

    def add(self, lhs: Vec, rhs: Vec):
        self._eq_count += 1
        lhs = dict(lhs)
        rhs = dict(rhs)
        for p in [k for k in lhs if k in self.rows]:
            c = lhs.get(p)
            if not c:
                continue
            rl, rr = self.rows[p]
            vaxpy(lhs, -c, rl)
            vaxpy(rhs, -c, rr)
        if not lhs:
            if rhs and self.inconsistent is None:
                self.inconsistent = (self._eq_count - 1, rhs)
            return
        p = min(lhs)
        c = lhs[p]
        if c != 1:
            inv = ONE / c
            lhs = {k: x * inv for k, x in lhs.items()}
            rhs = {k: x * inv for k, x in rhs.items()}
        for q in list(self.col_index.get(p, ())):
            ql, qr = self.rows[q]
            f = ql[p]
            for k in lhs:
                before = k in ql
                vaxpy_single(ql, k, -f * lhs[k])
                if k in ql and not before:
                    self.col_index.setdefault(k, set()).add(q)
                elif before and k not in ql:
                    self.col_index[k].discard(q)
            vaxpy(qr, -f, rhs)
        self.rows[p] = (lhs, rhs)
        for k in lhs:
            self.col_index.setdefault(k, set()).add(p)

    def rank(self) -> int:
        return len(self.rows)

    def particular(self, k: int) -> Vec:
        return {p: r[1][k] for p, r in self.rows.items() if k in r[1]}

    def nullspace(self) -> List[Vec]:
        free = [j for j in range(self.nvars) if j not in self.rows]
        basis = []
        for f in free:
            v: Vec = {f: ONE}
            for q in self.col_index.get(f, ()):
                v[q] = -self.rows[q][0][f]
            basis.append(v)
        return basis


def vaxpy_single(d: Vec, k, c):
    if not c:
        return
    s = d.get(k, 0) + c
    if s:
        d[k] = s
    else:
        d.pop(k, None)


class Solution:
    """Affine solution set ``particular + span(nullspace)``."""

    __slots__ = ("particular", "nullspace")

    def __init__(self, particular, nullspace: Subspace):
        self.particular = particular
        self.nullspace = nullspace

    @property
    def unique(self) -> bool:
        return self.nullspace.dim == 0


def solve(M: LinMap, v: Vec) -> Solution:
    """Solve ``M x = v``; raises :class:`NoSolution` when ``v`` is not in the image."""
    el = _Eliminator(M.cols)
    for r, row in enumerate(M.row_dicts()):
        el.add(row, {0: v[r]} if v.get(r) else {})
    # rows of v outside the rows of M cannot occur; v keyed by row index
    if el.inconsistent is not None:
        raise NoSolution("no solution", witness=el.inconsistent[0])
    return Solution(el.particular(0), Subspace(M.cols, el.nullspace()))


def solve_equations(nvars: int, equations: Iterable[Tuple[Vec, object]]) -> Solution:
    """Solve a system given as ``(coefficients, rhs)`` pairs."""
    el = _Eliminator(nvars)
    for lhs, rhs in equations:
        el.add(lhs, {0: rhs} if rhs else {})
    if el.inconsistent is not None:
        raise NoSolution("no solution", witness=el.inconsistent[0])
    return Solution(el.particular(0), Subspace(nvars, el.nullspace()))


def solve_many(M: LinMap, V: LinMap) -> Tuple[LinMap, Subspace]:
    """Solve ``M X = V`` column by column with one elimination."""
    if M.rows != V.rows:
        raise ValueError("row mismatch")
    el = _Eliminator(M.cols)
    vrows = V.row_dicts()
    for r, row in enumerate(M.row_dicts()):
        el.add(row, vrows[r])
    if el.inconsistent is not None:
        raise NoSolution("no solution", witness=el.inconsistent[0])
    cols = [el.particular(k) for k in range(V.cols)]
    return LinMap(M.cols, V.cols, cols), Subspace(M.cols, el.nullspace())


def kernel(M: LinMap) -> Subspace:
    el = _Eliminator(M.cols)
    for row in M.row_dicts():
        el.add(row, {})
    return Subspace(M.cols, el.nullspace())


def rank(M: LinMap) -> int:
    el = _Eliminator(M.cols)
    for row in M.row_dicts():
        if row:
            el.add(row, {})
    return el.rank()


def is_bijective(M: LinMap) -> bool:
    return M.rows == M.cols and rank(M) == M.cols


def inverse(M: LinMap) -> LinMap:
    if M.rows != M.cols:
        raise ValueError("not square")
    X, null = solve_many(M, LinMap.identity(M.rows))
    if null.dim:
        raise NoSolution("singular map")
    return X


# ---------------------------------------------------------------------------
# positivity


class NotHermitian(ValueError):
    pass


def hermitian_psd(G: Sequence[Sequence]) -> bool:
    """Exact positive semidefiniteness by LDL* congruence with diagonal pivoting."""
    n = len(G)
    g = [[scalar(x) for x in row] for row in G]
    for i in range(n):
        if len(g[i]) != n:
            raise NotHermitian("not square")
        for j in range(n):
            if g[i][j] != conj(g[j][i]):
                raise NotHermitian("not Hermitian")
    idx = list(range(n))
    while idx:
        piv = None
        for k in idx:
            if g[k][k] != 0:
                piv = k
                break
        if piv is None:
            # zero diagonal: PSD forces the remaining block to vanish
            return all(g[i][j] == 0 for i in idx for j in idx)
        d = g[piv][piv]
        if re_im(d)[0] < 0:
            return False
        # rows with zero diagonal must have zero coupling to stay PSD; the
        # Schur complement handles that automatically
        rest = [k for k in idx if k != piv]
        col = {k: g[k][piv] for k in rest}
        for i in rest:
            ci = col[i]
            if not ci:
                continue
            for j in rest:
                cj = col[j]
                if cj:
                    g[i][j] = g[i][j] - ci * conj(cj) / d
        idx = rest
    return True


def to_fraction(x) -> Fraction:
    q = mpq(x)
    return Fraction(int(q.numerator), int(q.denominator))
