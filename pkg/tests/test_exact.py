from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from hybridglue.errors import InvalidParameter
from hybridglue.exact import ComplexMatrix, GaussQ, bracket, nullspace, rank, solve

small = st.fractions(min_value=-20, max_value=20, max_denominator=12)
gauss = st.builds(GaussQ, small, small)


def _matrices(n):
    return st.lists(gauss, min_size=n * n, max_size=n * n).map(
        lambda xs: ComplexMatrix.from_rows([xs[i * n:(i + 1) * n] for i in range(n)]))


@given(gauss, gauss, gauss)
def test_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    assert (a - b) + b == a
    if b:
        assert (a / b) * b == a


@given(gauss)
def test_abs2_is_product_with_conjugate(a):
    assert a * a.conjugate() == GaussQ(a.abs2())


@given(gauss)
def test_json_round_trip(a):
    assert GaussQ.from_json(a.to_json()) == a


def test_complex_floats_rejected():
    with pytest.raises((TypeError, InvalidParameter)):
        GaussQ.coerce(0.5 + 1j)


@settings(max_examples=40)
@given(_matrices(3), _matrices(3))
def test_matmul_agrees_with_numpy(a, b):
    got = (a @ b).to_numpy()
    assert np.allclose(got, a.to_numpy() @ b.to_numpy())


@settings(max_examples=40)
@given(_matrices(3), _matrices(3), _matrices(3))
def test_bracket_jacobi(a, b, c):
    total = bracket(a, bracket(b, c)) + bracket(b, bracket(c, a)) + bracket(c, bracket(a, b))
    assert total.is_zero()


@settings(max_examples=40)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4), min_size=1, max_size=5))
def test_rank_matches_sympy(rows):
    exact_rows = [[GaussQ(v) for v in r] for r in rows]
    assert rank(exact_rows) == sympy.Matrix(rows).rank()


@settings(max_examples=40)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4), min_size=1, max_size=4))
def test_nullspace_vectors_are_annihilated(rows):
    exact_rows = [[GaussQ(v) for v in r] for r in rows]
    basis = nullspace(exact_rows)
    assert len(basis) == 4 - sympy.Matrix(rows).rank()
    for v in basis:
        for r in exact_rows:
            assert sum((x * y for x, y in zip(r, v)), GaussQ(0)) == 0


def test_solve_detects_inconsistency():
    rows = [[GaussQ(1), GaussQ(1)], [GaussQ(2), GaussQ(2)]]
    assert solve(rows, [GaussQ(1), GaussQ(3)]) is None
    sol = solve(rows, [GaussQ(1), GaussQ(2)])
    assert sol[0] + sol[1] == 1


def test_matrix_json_round_trip():
    m = ComplexMatrix.from_rows([[GaussQ(Fraction(1, 2), 1), 0], [3, GaussQ(0, -2)]])
    blob = m.to_json()
    assert blob["n"] == 2
    assert ComplexMatrix.from_json(blob) == m
