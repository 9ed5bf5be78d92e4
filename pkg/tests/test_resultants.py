import random
from fractions import Fraction

import pytest
import sympy
from sympy.polys.subresultants_qq_zz import sylvester

from tridecomp.poly import MultiPoly, VarOrder, normalize, parse_poly, specialize
from tridecomp.resultants import (
    canny_pres,
    cover_degree_bound,
    macaulay_resultant,
    sylvester_matrix,
    sylvester_resultant,
)
from tridecomp.linalg import bareiss_det

from conftest import random_poly, to_sympy

EX3 = ["x2*(x1+x2)*(x1^2-2)", "x2*(x1+x2)*(x2^2-2)"]
EX2 = ["x1*x3-x2^2", "x2^2+x2*x4-x3^2", "x1*(x2+x4)-x2*x3"]


def up_to_factor(a, b):
    return normalize(a) == normalize(b)


def test_sylvester_examples():
    o = VarOrder(["x"])
    P = lambda s: parse_poly(s, o)
    assert sylvester_resultant(P("x^2-1"), P("x-2"), "x") == P("3")
    o = VarOrder(["a", "b", "c", "d", "x"])
    P = lambda s: parse_poly(s, o)
    assert sylvester_resultant(P("a*x+b"), P("c*x+d"), "x") == P("a*d-b*c")


def test_sylvester_shared_factor_vanishes(P):
    f1, f2 = (P(s) for s in EX3)
    assert sylvester_resultant(f1, f2, "x2").is_zero()


def test_sylvester_requires_variable(P):
    with pytest.raises(ValueError):
        sylvester_resultant(P("x1"), P("x2+1"), "x1")


def test_sylvester_matches_sympy_and_matrix():
    rng = random.Random(5)
    o = VarOrder(["x", "y"])
    x = sympy.Symbol("x")
    count = 0
    while count < 60:
        f = random_poly(rng, o, 4, 4)
        g = random_poly(rng, o, 4, 4)
        if f.degree(0) < 1 or g.degree(0) < 1:
            continue
        r = sylvester_resultant(f, g, 0)
        # sympy.resultant flips sign when deg f < deg g; its Sylvester
        # determinant follows the textbook convention
        assert to_sympy(r) == sympy.expand(sylvester(to_sympy(f), to_sympy(g), x).det())
        assert r == bareiss_det(sylvester_matrix(f, g, 0))
        count += 1


def test_macaulay_no_common_root():
    o = VarOrder(["x1", "x2"])
    P = lambda s: parse_poly(s, o)
    r = macaulay_resultant([P("x1"), P("x2"), P("x1+x2+1")], ["x1", "x2"])
    assert r.is_constant() and not r.is_zero()
    assert abs(r.constant_value()) == 1


def test_macaulay_common_root_vanishes():
    o = VarOrder(["x1", "x2", "c"])
    P = lambda s: parse_poly(s, o)
    assert macaulay_resultant([P("x1-c"), P("x2-c"), P("x1-x2")], ["x1", "x2"]).is_zero()


def test_macaulay_two_polys_is_sylvester_up_to_sign():
    rng = random.Random(9)
    o = VarOrder(["x", "y"])
    count = 0
    while count < 100:
        f = random_poly(rng, o, 3, 4)
        g = random_poly(rng, o, 3, 4)
        if f.degree(0) < 1 or g.degree(0) < 1:
            continue
        m = macaulay_resultant([f, g], [0])
        s = sylvester_resultant(f, g, 0)
        # the homogenized resultant uses the total degree in x
        assert m == s or m == -s
        count += 1


def test_macaulay_three_generic_quadrics_vs_sympy_elimination():
    # Res of three affine quadrics in x, y vanishes iff they share a point
    o = VarOrder(["x", "y", "t"])
    P = lambda s: parse_poly(s, o)
    polys = [P("x^2 + y^2 - t"), P("x - y"), P("x + y - 2")]
    r = macaulay_resultant(polys, ["x", "y"])
    # common point x = y = 1 needs t = 2
    assert specialize(r, {"t": 2}).is_zero()
    assert not specialize(r, {"t": 3}).is_zero()


def test_zero_degree_input():
    o = VarOrder(["x", "a"])
    P = lambda s: parse_poly(s, o)
    assert macaulay_resultant([P("x^2 + 1"), P("a")], ["x"]) == P("a^2")


def test_canny_empty_block_is_identity(P):
    f = P("x1*x2*(x1+x2)")
    assert canny_pres([f], []) == f


def test_canny_agrees_with_macaulay_when_nonzero():
    o = VarOrder(["x", "y"])
    P = lambda s: parse_poly(s, o)
    f, g = P("x^2 - y"), P("x*y - 1")
    assert up_to_factor(canny_pres([f, g], ["x"]), macaulay_resultant([f, g], ["x"]))


def test_canny_example3_projections(P):
    # frozen from this implementation: the perturbed resultants keep the
    # projections of the isolated points and of the embedded ones
    f1, f2 = (P(s) for s in EX3)
    g1 = canny_pres([f1, f2], ["x1"])
    g2 = canny_pres([f1, f2], ["x2"])
    assert g1 == normalize(P("x2^3*(x2+1)*(x2^2-2)^3*(x2^2-x2+1)"))
    assert g2 == normalize(P("(x1-1)*(x1+1)*(x1^2-2)^4"))
    # both vanish on the projections of the two isolated points
    for a in (2 ** 0.5, -(2 ** 0.5)):
        assert abs(g1.evaluate([0, a])) < 1e-6
        assert abs(g2.evaluate([a, 0])) < 1e-6


def test_canny_example2_projections():
    o = VarOrder(["x1", "x2", "x3", "x4"])
    P = lambda s: parse_poly(s, o)
    f1, f2, f3 = (P(s) for s in EX2)
    got = {k: canny_pres([f1, f2], [v]) for k, v in (("1", "x1"), ("2", "x2"), ("3", "x3"), ("4", "x4"))}
    assert up_to_factor(got["1"], P("x2^2 + x2*x4 - x3^2"))
    assert up_to_factor(got["2"], P("x3*(x1*x4^2 - x1^2*x3 + 2*x1*x3^2 - x3^3)"))
    assert up_to_factor(got["3"], P("x2*(x1^2*x4 + x1^2*x2 - x2^3)"))
    assert up_to_factor(got["4"], P("x1*x3 - x2^2"))


def test_canny_vanishes_on_shared_component():
    rng = random.Random(21)
    o = VarOrder(["x", "y"])
    for _ in range(5):
        h = parse_poly(f"x - {rng.randint(1, 5)}*y - {rng.randint(1, 5)}", o)
        a = random_poly(rng, o, 2, 3)
        b = random_poly(rng, o, 2, 3)
        if a.is_zero() or b.is_zero():
            continue
        f, g = a * h, b * h
        if f.degree(0) < 1 or g.degree(0) < 1:
            continue
        r = canny_pres([f, g], ["x"])
        assert not r.is_zero()
        assert r.total_degree() <= cover_degree_bound(2, max(f.total_degree(), g.total_degree()))


def test_degree_bound_formula():
    assert cover_degree_bound(3, 2) == 24
