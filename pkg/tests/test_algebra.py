import pytest
from hypothesis import given, strategies as st

from mhad.algebra import (AlgebraError, FiniteAlgebra, Multiplier, algebra_from_table, find_local_unit,
                          function_algebra, is_homomorphism, multiplier_algebra, opposite, tensor_algebra,
                          validate_algebra)
from mhad.examples import hopf_instances
from mhad.linalg import ONE, LinMap

from oracles import matrix_unit_table


def matrix_units(m):
    n = m * m
    return FiniteAlgebra(n, {k: {i: ONE for i in v} for k, v in matrix_unit_table(m).items()},
                         unit={i * m + i: ONE for i in range(m)}, name=f"M{m}")


def test_matrix_units_validate():
    r = validate_algebra(matrix_units(2))
    assert r.ok and r.unit_ok and r.hasLocalUnits


def test_non_associative_table_is_caught():
    # e0 e0 = e1, e0 e1 = 0, e1 e0 = e0: (e0 e0) e0 = e0 but e0 (e0 e0) = 0
    A = FiniteAlgebra(2, {(0, 0): {1: ONE}, (1, 0): {0: ONE}})
    r = validate_algebra(A)
    assert not r.associative
    assert "associative" in r.witnesses


def test_zero_algebra_is_degenerate():
    r = validate_algebra(FiniteAlgebra(2, {}))
    assert not r.nondegenerate and not r.idempotent


def test_one_raises_without_unit():
    with pytest.raises(AlgebraError):
        FiniteAlgebra(1, {(0, 0): {0: ONE}}).one()


def test_local_unit_of_unital_algebra():
    A = matrix_units(2)
    u = find_local_unit(A)
    assert u is not None
    for i in range(A.dim):
        assert A.mul(u, {i: ONE}) == {i: ONE} == A.mul({i: ONE}, u)


def test_multiplier_algebra_of_unital_algebra_is_itself():
    A = function_algebra(["x", "y", "z"])
    M = multiplier_algebra(A)
    assert M.dim == A.dim


def test_multiplier_of_element_is_compatible():
    A = hopf_instances("kS3").H
    for i in range(A.dim):
        T = Multiplier.of_element(A, {i: ONE})
        assert T.compatible(A)
        assert T.in_algebra(A) == {i: ONE}


def test_opposite_reverses_products():
    A = matrix_units(2)
    Aop = opposite(A)
    for (i, j), v in A.mult.items():
        assert Aop.mult.get((j, i)) == v


@given(st.integers(1, 3), st.integers(1, 3))
def test_tensor_of_function_algebras(m, n):
    A, B = function_algebra([str(i) for i in range(m)]), function_algebra([str(i) for i in range(n)])
    T = tensor_algebra(A, B)
    assert T.dim == m * n and validate_algebra(T).ok


def test_transpose_is_an_antihomomorphism_not_a_homomorphism():
    A = matrix_units(2)
    tr = LinMap(4, 4, [{(k % 2) * 2 + k // 2: ONE} for k in range(4)])
    assert not is_homomorphism(tr, A, A)
    assert is_homomorphism(LinMap.identity(4), A, A)


def test_algebra_from_table():
    A = algebra_from_table(2, [(0, 0, 0, 1), (1, 1, 1, "1/1")])
    assert validate_algebra(A).ok
