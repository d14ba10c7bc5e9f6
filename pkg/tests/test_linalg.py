import pytest
import sympy
from hypothesis import given, settings, strategies as st

from mhad.linalg import (GRat, LinMap, NoSolution, fmt, hermitian_psd, inverse, kernel, mk, parse_rational,
                         rank, scalar, solve)

small = st.integers(-4, 4)
gauss = st.builds(lambda a, b, c: mk(a, b) / c, small, small, st.integers(1, 3))


def to_sympy(M: LinMap):
    return sympy.Matrix(M.rows, M.cols, lambda r, c: _sym(M.columns[c].get(r, 0)))


def _sym(x):
    re, im = (x.re, x.im) if isinstance(x, GRat) else (x, 0)
    q = lambda v: sympy.Rational(int(scalar(v).numerator), int(scalar(v).denominator))
    return q(re) + sympy.I * q(im)


def matrices(rows, cols, entries=gauss):
    return st.lists(st.lists(entries, min_size=cols, max_size=cols), min_size=rows, max_size=rows).map(
        lambda g: LinMap.from_grid(g, cols))


@given(st.integers(1, 4).flatmap(lambda r: st.integers(1, 4).flatmap(lambda c: matrices(r, c))))
@settings(max_examples=60, deadline=None)
def test_rank_matches_sympy(M):
    assert rank(M) == to_sympy(M).rank()


@given(st.integers(1, 4).flatmap(lambda n: matrices(n, n)))
@settings(max_examples=60, deadline=None)
def test_inverse_is_exact(M):
    if to_sympy(M).det() == 0:
        with pytest.raises(Exception):
            inverse(M)
        return
    Mi = inverse(M)
    assert M @ Mi == LinMap.identity(M.rows)
    assert (to_sympy(Mi) - to_sympy(M).inv()).is_zero_matrix


@given(st.integers(1, 4).flatmap(lambda n: matrices(n, n + 1)))
@settings(max_examples=40, deadline=None)
def test_kernel_vectors_are_annihilated(M):
    K = kernel(M)
    assert K.dim == M.cols - rank(M)
    for v in K.basis():
        assert M(v) == {}


def test_solve_reports_inconsistency():
    M = LinMap.from_grid([[1, 1], [2, 2]])
    with pytest.raises(NoSolution):
        solve(M, {0: 1, 1: 3})
    sol = solve(M, {0: 1, 1: 2})
    assert M(sol.particular) == {0: 1, 1: 2}
    assert sol.nullspace.dim == 1


@given(gauss, gauss, gauss)
def test_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    if b:
        assert (a / b) * b == a


def test_real_results_collapse_to_mpq():
    i = mk(0, 1)
    assert type(i * i).__name__ == "mpq"
    assert i * i == -1


@pytest.mark.parametrize("text,value", [("3", 3), ("-1/2", scalar("-1/2")), ("4/6", scalar("2/3"))])
def test_parse_rational(text, value):
    assert parse_rational(text) == value


def test_zero_denominator_rejected():
    with pytest.raises(ValueError):
        parse_rational("1/0")


def test_floats_are_not_scalars():
    with pytest.raises(TypeError):
        scalar(0.5)


def test_format():
    assert fmt(mk(1, -2)) == "1-2i"
    assert fmt(scalar("3/4")) == "3/4"


@given(st.integers(1, 4).flatmap(lambda n: matrices(n, n)))
@settings(max_examples=40, deadline=None)
def test_gram_matrices_are_psd(M):
    G = M.conj().transpose() @ M
    assert hermitian_psd(G.grid())


@given(st.integers(1, 3).flatmap(lambda n: matrices(n, n, small)))
@settings(max_examples=60, deadline=None)
def test_psd_agrees_with_eigenvalues(M):
    S = M + M.transpose()
    grid = S.grid()
    assert hermitian_psd(grid) == to_sympy(S).is_positive_semidefinite
