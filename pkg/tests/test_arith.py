from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from opfield.arith import (
    GF,
    QQ,
    Matrix,
    Mod,
    Poly,
    extend_basis,
    kernel_basis,
    linear_roots,
    minimal_polynomial,
    span_basis,
)
from opfield.errors import DivisionByZero, FieldMismatch, NonSquare, ZeroPolynomial

F5, F7 = GF(5), GF(7)

rationals = st.fractions(max_denominator=50).filter(lambda q: abs(q.numerator) < 10**6)


def residues(p):
    return st.integers(0, p - 1).map(lambda v: Mod(v, p))


# -- scalars -----------------------------------------------------------------


def test_rational_sum():
    assert QQ.add(Fraction(1, 2), Fraction(1, 3)) == Fraction(5, 6)


def test_inverse_mod_7():
    assert F7.inv(F7(3)) == F7(5)


@pytest.mark.parametrize("field", [QQ, F7])
def test_inverse_of_zero(field):
    with pytest.raises(DivisionByZero):
        field.inv(field.zero)
    with pytest.raises(ZeroDivisionError):
        field.one / field.zero


def test_mixed_fields_rejected():
    with pytest.raises(FieldMismatch):
        F5(2) + F7(2)
    with pytest.raises(FieldMismatch):
        F5(2) * Fraction(1, 2)
    with pytest.raises(FieldMismatch):
        QQ(F5(1))


def test_coercions():
    assert QQ("3/6") == Fraction(1, 2)
    assert F7("1/2") == F7(4)
    assert F7(-1) == F7(6) and F7(-1).v == 6
    with pytest.raises(DivisionByZero):
        F7(Fraction(1, 7))


@given(rationals, rationals, rationals)
def test_rational_field_axioms(a, b, c):
    assert QQ.add(QQ.add(a, b), c) == QQ.add(a, QQ.add(b, c))
    assert QQ.mul(a, QQ.add(b, c)) == QQ.add(QQ.mul(a, b), QQ.mul(a, c))
    if a:
        assert QQ.mul(a, QQ.inv(a)) == 1
    assert a.denominator > 0


@given(st.sampled_from([2, 5, 7, 101, 65537]).flatmap(lambda p: st.tuples(*(residues(p),) * 3)))
def test_prime_field_axioms(abc):
    a, b, c = abc
    p = a.p
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert 0 <= (a - b).v < p
    if a:
        assert a * a.inverse() == 1


# -- polynomials ---------------------------------------------------------------


def test_poly_normalizes_trailing_zeros():
    assert Poly(QQ, (1, 2, 0, 0)).coeffs == (1, 2)
    assert Poly(QQ, (0, 0)).is_zero()
    assert str(Poly(QQ, (-2, 0, 1))) == "x^2 - 2"


def test_linear_roots_split():
    roots, residual = linear_roots(Poly(QQ, (2, -3, 1)))
    assert roots == [(1, 1), (2, 1)]
    assert residual == Poly(QQ, (1,))


def test_linear_roots_irreducible_quadratic():
    p = Poly(QQ, (-2, 0, 1))
    roots, residual = linear_roots(p)
    assert roots == [] and residual == p


def test_linear_roots_double_zero_mod_5():
    roots, residual = linear_roots(Poly(F5, (0, 0, 1)))
    assert roots == [(F5(0), 2)] and residual == Poly(F5, (1,))


def test_linear_roots_zero_polynomial():
    with pytest.raises(ZeroPolynomial):
        linear_roots(Poly(QQ, ()))


def test_linear_roots_rational_and_negative():
    # (2x - 1)(x + 3)^2 (x^2 + 1)
    p = Poly(QQ, (-1, 2)) * Poly(QQ, (3, 1)) ** 2 * Poly(QQ, (1, 0, 1))
    roots, residual = linear_roots(p)
    assert roots == [(Fraction(1, 2), 1), (-3, 2)]
    assert residual.monic() == Poly(QQ, (1, 0, 1))


def test_linear_roots_large_prime():
    p = 2**31 - 1
    f = GF(p)
    # p = 3 mod 4, so x^2 + 1 has no root
    poly = Poly(f, (-12345, 1)) * Poly(f, (-999, 1)) ** 2 * Poly(f, (1, 0, 1))
    roots, residual = linear_roots(poly)
    assert [(r.v, m) for r, m in roots] == [(999, 2), (12345, 1)]
    assert residual == Poly(f, (1, 0, 1))
    recon = residual
    for r, m in roots:
        recon = recon * Poly(f, (-r, 1)) ** m
    assert recon == poly


poly_coeffs = st.lists(st.integers(-6, 6), min_size=1, max_size=6).filter(lambda c: any(c))


@settings(max_examples=60)
@given(poly_coeffs, st.lists(st.integers(-4, 4), max_size=3))
def test_linear_roots_reconstruction_q(coeffs, forced):
    p = Poly(QQ, coeffs)
    for r in forced:
        p = p * Poly(QQ, (-r, 1))
    roots, residual = linear_roots(p)
    recon = residual
    for r, m in roots:
        recon = recon * Poly(QQ, (-r, 1)) ** m
    assert recon == p
    assert all(residual(r) != 0 for r in range(-8, 9))
    for r in forced:
        assert any(root == r for root, _ in roots)


@settings(max_examples=60)
@given(st.lists(st.integers(0, 6), min_size=1, max_size=7).filter(lambda c: any(c)))
def test_linear_roots_reconstruction_f7(coeffs):
    p = Poly(F7, coeffs)
    roots, residual = linear_roots(p)
    recon = residual
    for r, m in roots:
        recon = recon * Poly(F7, (-r, 1)) ** m
    assert recon == p
    assert all(residual(x) != 0 for x in F7.elements())


# -- matrices ---------------------------------------------------------------------


def test_minimal_polynomial_examples():
    assert minimal_polynomial(Matrix.identity(QQ, 2)) == Poly(QQ, (-1, 1))
    assert minimal_polynomial(Matrix(QQ, [[0, 1], [0, 0]])) == Poly(QQ, (0, 0, 1))
    assert minimal_polynomial(Matrix(QQ, [[0, 2], [1, 0]])) == Poly(QQ, (-2, 0, 1))


def test_minimal_polynomial_non_square():
    with pytest.raises(NonSquare):
        minimal_polynomial(Matrix(QQ, [[1, 2, 3], [4, 5, 6]]))


def _independent_powers(m, k):
    n = m.rows
    p = Matrix.identity(m.field, n)
    rows = []
    for _ in range(k):
        rows.append(tuple(x for r in p.entries for x in r))
        p = p * m
    return Matrix(m.field, rows).rank() == k


square = st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n), min_size=n, max_size=n)
)


@settings(max_examples=60, deadline=None)
@given(square)
def test_minimal_polynomial_annihilates_and_is_minimal(rows):
    m = Matrix(QQ, rows)
    mp = minimal_polynomial(m)
    assert mp.lc == 1 and mp.degree <= m.rows
    assert mp.eval_matrix(m).is_zero()
    # no monic polynomial of smaller degree: I, M, ..., M^(deg-1) independent
    assert _independent_powers(m, mp.degree)
    # proper monic divisors built from the split linear part do not annihilate
    roots, residual = linear_roots(mp)
    for r, mult in roots:
        smaller = mp // Poly(QQ, (-r, 1))
        assert not smaller.eval_matrix(m).is_zero()


def test_kernel_examples():
    assert kernel_basis(Matrix.zeros(QQ, 2, 2)) == [(1, 0), (0, 1)]
    assert kernel_basis(Matrix.identity(QQ, 2)) == []
    assert kernel_basis(Matrix(QQ, [[1, 1], [1, 1]])) == [(1, -1)]


@settings(max_examples=60)
@given(
    st.integers(1, 4).flatmap(
        lambda c: st.lists(st.lists(st.integers(-3, 3), min_size=c, max_size=c), min_size=1, max_size=4)
    ),
    st.sampled_from([QQ, F5]),
)
def test_kernel_vectors_are_independent_and_annihilated(rows, field):
    m = Matrix(field, rows)
    ker = kernel_basis(m)
    assert len(ker) == m.cols - m.rank()
    for v in ker:
        assert not any(m.apply(v))
    if ker:
        assert Matrix(field, ker).rank() == len(ker)


@settings(max_examples=40)
@given(square)
def test_inverse_roundtrip(rows):
    m = Matrix(QQ, rows)
    if m.rank() == m.rows:
        assert m * m.inverse() == Matrix.identity(QQ, m.rows)


def test_span_and_extend():
    assert span_basis(QQ, [(2, 4), (1, 2)], 2) == [(1, 2)]
    assert extend_basis(QQ, [(1, 2)], [(2, 4), (0, 1), (1, 0)]) == [(0, 1)]
