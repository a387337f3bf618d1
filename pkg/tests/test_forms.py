import random

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from mcmbundles.forms import (
    DegreeMismatchError,
    HomogeneousForm,
    block_matrix,
    dim_forms,
    form_determinant,
    monomial_basis,
    multiplication_matrix,
    parse_form,
    random_form,
)
from mcmbundles.linalg import Matrix, PrimeField, kernel_dim, rank

import oracles

x = [HomogeneousForm.variable(2, i) for i in range(3)]


def as_sympy(M: Matrix):
    return sympy.Matrix(M.tolist()) if M.rows and M.cols else sympy.zeros(M.rows, M.cols)


# -- dimensions and bases ------------------------------------------------------------

@pytest.mark.parametrize("n,d,expected", [(2, 2, 6), (3, 0, 1), (2, -1, 0), (4, 3, 35)])
def test_dim_forms(n, d, expected):
    assert dim_forms(n, d) == expected


def test_basis_order_is_lex():
    assert monomial_basis(2, 2) == ((2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 2, 0), (0, 1, 1), (0, 0, 2))
    for n in range(1, 4):
        for d in range(4):
            assert list(monomial_basis(n, d)) == oracles.monomials(n, d)


@settings(max_examples=40)
@given(st.integers(1, 5), st.integers(0, 8))
def test_pascal_recurrence(n, d):
    assert dim_forms(n, d) == dim_forms(n - 1, d) + dim_forms(n, d - 1)


# -- multiplication matrices -----------------------------------------------------------

def test_x0_on_p1():
    M = multiplication_matrix(HomogeneousForm.variable(1, 0), 1)
    assert M.shape == (3, 2) and rank(M) == 2


def test_constant_is_identity():
    M = multiplication_matrix(HomogeneousForm.constant(2, 1), 3)
    assert M == Matrix.identity(10)


def test_linear_form_on_linear_forms():
    M = multiplication_matrix(x[0] + x[1], 1)
    assert M.shape == (6, 3) and rank(M) == 3
    # hand enumeration: (x0+x1)*x0, (x0+x1)*x1, (x0+x1)*x2 in the basis
    # x0^2, x0x1, x0x2, x1^2, x1x2, x2^2
    assert M.tolist() == [[1, 0, 0], [1, 1, 0], [0, 0, 1], [0, 1, 0], [0, 0, 1], [0, 0, 0]]


def test_negative_degree_gives_empty_shape():
    M = multiplication_matrix(x[0], -1)
    assert M.shape == (dim_forms(2, 0), 0)
    M = multiplication_matrix(x[0], -2)
    assert M.shape == (0, 0)


def test_declared_degree_checked():
    with pytest.raises(DegreeMismatchError):
        multiplication_matrix(x[0] * x[1], 1, degree=1)


def test_block_matrix_examples():
    col = [[x[0]], [x[1]], [x[2]]]
    # source O(-1) twisted by 1 has one section, each target O(1) three
    M = block_matrix(col, [-1], [0, 0, 0], 1)
    assert M.shape == (9, 1) and rank(M) == 1
    M = block_matrix(col, [-1], [0, 0, 0], 2)
    assert M.shape == (18, 3) and rank(M) == 3
    E = block_matrix(col, [0], [1, 1, 1], 0)
    assert E.shape == (9, 1) and rank(E) == 1
    assert block_matrix(col, [0], [1, 1, 1], -5).shape == (0, 0)


def test_block_matrix_rejects_wrong_degree():
    with pytest.raises(DegreeMismatchError):
        block_matrix([[x[0] * x[1]]], [0], [1], 0)


def test_block_matrix_over_prime_field():
    col = [[x[0]], [x[1]], [x[2]]]
    M = block_matrix(col, [-1], [0, 0, 0], 2, field=PrimeField(101))
    assert rank(M) == 3


forms_p2 = st.builds(
    lambda d, seed: random_form(2, d, random.Random(seed), -3, 3),
    st.integers(0, 3), st.integers(0, 10**6),
)


@settings(max_examples=40, deadline=None)
@given(forms_p2, forms_p2, st.integers(0, 3))
def test_multiplication_is_compositional(f, g, d):
    lhs = multiplication_matrix(f * g, d, degree=f.degree + g.degree)
    rhs = multiplication_matrix(f, d + g.degree) @ multiplication_matrix(g, d)
    assert lhs == rhs


@settings(max_examples=40, deadline=None)
@given(forms_p2, st.integers(0, 3))
def test_multiplication_matches_sympy_oracle(f, d):
    M = multiplication_matrix(f, d)
    ref = oracles.mult_matrix(oracles.to_sympy(f), 2, d, f.degree)
    assert as_sympy(M) == ref


@settings(max_examples=40, deadline=None)
@given(forms_p2, st.integers(0, 3))
def test_nonzero_form_is_injective(f, d):
    if f.is_zero():
        return
    assert kernel_dim(multiplication_matrix(f, d)) == 0


# -- forms arithmetic and parsing ----------------------------------------------------

def test_parse_and_print_round_trip():
    f = parse_form("x0^2 + 2*x1^2 - x0*x2", 2)
    assert f.degree == 2
    assert parse_form(str(f), 2) == f
    assert parse_form("3*x0**2 - x1*x2", 2) == 3 * x[0] ** 2 - x[1] * x[2]


def test_parse_rejects_inhomogeneous_and_wrong_degree():
    with pytest.raises(ValueError):
        parse_form("x0 + x1^2", 2)
    with pytest.raises(ValueError):
        parse_form("x0 + x1", 2, degree=2)
    with pytest.raises(ValueError):
        parse_form("x3", 2)
    with pytest.raises(ValueError):
        parse_form("x0 / 2", 2)


def test_zero_form():
    z = parse_form("0", 2)
    assert z.is_zero()
    assert z + x[0] == x[0]
    assert x[0] - x[0] == 0


def test_evaluation_and_substitution():
    q = parse_form("x0^2 + x1*x2", 2)
    assert q((1, 2, 3)) == 7
    s, u = HomogeneousForm.variable(1, 0), HomogeneousForm.variable(1, 1)
    sub = [s + u, s - u, 2 * u]
    r = q.substitute(sub)
    assert r.n == 1 and r.degree == 2
    for a, b in [(1, 0), (2, 3), (-1, 5)]:
        assert r((a, b)) == q((a + b, a - b, 2 * b))


def test_form_determinant_2x2():
    grid = [[x[0], x[1]], [x[2], x[0]]]
    assert form_determinant(grid) == x[0] * x[0] - x[1] * x[2]
