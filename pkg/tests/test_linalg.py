import random
from fractions import Fraction

import sympy
from hypothesis import given, strategies as st

from tridecomp.linalg import (
    bareiss_det,
    charpoly,
    integer_det,
    inverse,
    lowest_shifted_coefficient,
    nullspace,
    poly_det,
    rank,
    rational_det,
    solve,
)
from tridecomp.poly import MultiPoly, VarOrder, parse_poly

from conftest import random_poly, to_sympy


def square(n):
    return st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=n, max_size=n)


@given(st.integers(1, 5).flatmap(square))
def test_rational_and_bareiss_agree_with_sympy(rows):
    m = [[Fraction(x) for x in r] for r in rows]
    expect = sympy.Matrix(rows).det()
    assert rational_det(m) == expect
    assert bareiss_det(m) == expect


def test_bareiss_polynomial_entries():
    rng = random.Random(3)
    o = VarOrder(["a", "b"])
    for _ in range(10):
        mat = [[random_poly(rng, o, 2, 3) for _ in range(3)] for _ in range(3)]
        ours = bareiss_det(mat)
        theirs = sympy.Matrix([[to_sympy(p) for p in r] for r in mat]).det()
        assert to_sympy(ours) == sympy.expand(theirs)


def test_bareiss_singular_is_zero():
    o = VarOrder(["a"])
    a = parse_poly("a", o)
    assert bareiss_det([[a, a * a], [MultiPoly.const(o, 1), a]]).is_zero()


@given(st.integers(1, 4).flatmap(square), st.lists(st.integers(-5, 5), min_size=4, max_size=4))
def test_solve_and_nullspace(rows, rhs):
    n = len(rows)
    a = [[Fraction(x) for x in r] for r in rows]
    b = [Fraction(x) for x in rhs[:n]]
    x = solve(a, b)
    M = sympy.Matrix(rows)
    if x is not None:
        assert [sum(ai * xi for ai, xi in zip(r, x)) for r in a] == b
    else:
        assert M.rank() < M.row_join(sympy.Matrix(rhs[:n])).rank()
    ker = nullspace(a, n)
    assert len(ker) == n - M.rank() == n - rank(a)
    for v in ker:
        assert all(sum(ai * vi for ai, vi in zip(r, v)) == 0 for r in a)
    inv = inverse(a)
    if M.det() != 0:
        assert inv is not None
        assert sympy.Matrix(inv) == M.inv()
    else:
        assert inv is None


@given(st.integers(1, 7).flatmap(square))
def test_integer_det_matches_sympy(rows):
    assert integer_det([list(r) for r in rows]) == sympy.Matrix(rows).det()


@given(st.integers(1, 6).flatmap(lambda n: st.lists(st.lists(st.fractions(-9, 9, max_denominator=4), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_charpoly_matches_sympy(rows):
    x = sympy.Symbol("x")
    expect = sympy.Matrix([[sympy.Rational(c.numerator, c.denominator) for c in r] for r in rows]).charpoly(x).all_coeffs()[::-1]
    assert charpoly(rows) == [Fraction(int(c.p), int(c.q)) for c in expect]


def test_charpoly_large_entries():
    # entries big enough that the coefficient bound needs a large prime
    rng = random.Random(5)
    rows = [[rng.randint(-10 ** 30, 10 ** 30) for _ in range(8)] for _ in range(8)]
    x = sympy.Symbol("x")
    expect = sympy.Matrix(rows).charpoly(x).all_coeffs()[::-1]
    assert charpoly(rows) == [Fraction(int(c)) for c in expect]


def test_interpolated_det_matches_bareiss():
    rng = random.Random(9)
    o = VarOrder(["a", "b"])
    for _ in range(3):
        mat = [[random_poly(rng, o, 1, 2) if rng.random() < 0.6 else MultiPoly.zero(o) for _ in range(10)] for _ in range(10)]
        for i in range(10):
            mat[i][i] = mat[i][i] + MultiPoly.const(o, 1)
        assert poly_det(mat, o) == bareiss_det(mat)


def test_interpolated_det_structural_zero():
    o = VarOrder(["a"])
    a = parse_poly("a", o)
    z = MultiPoly.zero(o)
    # first column empty
    mat = [[z] + [a] * 9 for _ in range(10)]
    assert poly_det(mat, o).is_zero()


def test_lowest_shifted_coefficient_against_sympy():
    rng = random.Random(13)
    o = VarOrder(["a", "b"])
    a, b, lam = sympy.symbols("a b lam")
    for size in (2, 3, 4):
        for _ in range(3):
            # rank-deficient matrices push the lowest lam power above zero
            left = [[random_poly(rng, o, 1, 2) for _ in range(size - 1)] for _ in range(size)]
            right = [[random_poly(rng, o, 1, 2) for _ in range(size)] for _ in range(size - 1)]
            mat = [[sum((left[i][k] * right[k][j] for k in range(size - 1)), MultiPoly.zero(o)) for j in range(size)] for i in range(size)]
            k, c = lowest_shifted_coefficient(mat, o)
            full = sympy.Poly((sympy.Matrix([[to_sympy(p) for p in r] for r in mat]) - lam * sympy.eye(size)).det(), lam)
            coeffs = full.all_coeffs()[::-1]
            low = next(i for i, cc in enumerate(coeffs) if sympy.expand(cc) != 0)
            assert k == low >= 1
            assert to_sympy(c) == sympy.expand(coeffs[low])
