import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from tridecomp.chains import TriangularSet, make_chain, prem_chain
from tridecomp.lifting import (
    LiftingError,
    RetriesExhausted,
    TruncatedSeries,
    default_leaders,
    lift_step,
    rational_reconstruction,
    shift,
    start_state,
    triangular_zero_dim,
)
from tridecomp.poly import MultiPoly, VarOrder, normalize, parse_poly, squarefree_part
from tridecomp.zerodim import nf

OY = VarOrder(["y", "z"])
Y = lambda s: parse_poly(s, OY)
O1 = VarOrder(["y"])


def binomial_sqrt(k):
    return Fraction(sympy.binomial(sympy.Rational(1, 2), k))


def sqrt_lift(steps):
    st_ = start_state([make_chain(OY, [("z", "z - 1")])], [0], [1])
    for _ in range(steps):
        st_ = lift_step([Y("z^2 - y")], st_)
    return st_


def test_first_newton_step():
    st1 = sqrt_lift(1)
    assert st1.precision == 2
    # in t = y - 1: z - (1 + t/2)
    assert st1.chains[0].polys[0] == Y("z - 1 - y/2")


def test_sqrt_series_through_degree_7():
    st3 = sqrt_lift(3)
    assert st3.precision == 8
    got = [-c for c in st3.series(0, 0, (0,)).by_degree()]
    assert got == [binomial_sqrt(k) for k in range(8)]
    assert got[:5] == [1, Fraction(1, 2), Fraction(-1, 8), Fraction(1, 16), Fraction(-5, 128)]


def test_exact_chain_is_a_fixed_point():
    st0 = start_state([make_chain(OY, [("z", "z - 1")])], [0], [1])
    # H = z - y shifted to t: z - t - 1, and the chain already equals it at precision 1
    st1 = lift_step([Y("z - y")], st0)
    st2 = lift_step([Y("z - y")], st1)
    st4 = lift_step([Y("z - y")], lift_step([Y("z - y")], st2))
    assert st4.chains[0].polys[0] == Y("z - y - 1")
    assert st4.chains[0] == lift_step([Y("z - y")], st4).chains[0]


def test_congruence_and_quadratic_convergence():
    # simple root z = 0 of the fiber at y* = 0
    H = [Y("z^3 + z - y")]
    prev = start_state([make_chain(OY, [("z", "z")])], [0], [0])
    for s in range(4):
        nxt = lift_step(H, prev)
        g = nxt.chains[0].polys[0]
        n = nxt.precision
        h_t = shift(H[0], [0], [0])
        r = nf(h_t, (g,), (1,), trunc=((0,), n))
        assert r.is_zero()
        diff = g - prev.chains[0].polys[0]
        assert all(e[0] >= prev.precision for e in diff.terms)
        prev = nxt


def test_two_leader_lift():
    o = VarOrder(["y", "z1", "z2"])
    P = lambda s: parse_poly(s, o)
    H = [P("z1^2 - 1 - y"), P("z2 - z1*y - 1")]
    st_ = start_state([make_chain(o, [("z1", "z1 - 1"), ("z2", "z2 - 1")])], [0], [0])
    for _ in range(3):
        st_ = lift_step(H, st_)
    g1, g2 = st_.chains[0].polys
    tr = ((0,), st_.precision)
    for h in H:
        assert nf(h, (g1, g2), (1, 2), trunc=tr).is_zero()


def test_multivariate_free_block():
    o = VarOrder(["y1", "y2", "z"])
    P = lambda s: parse_poly(s, o)
    H = [P("z^2 - 1 - y1 - 2*y2")]
    st_ = start_state([make_chain(o, [("z", "z - 1")])], [0, 1], [0, 0])
    for _ in range(3):
        st_ = lift_step(H, st_)
    g = st_.chains[0].polys[0]
    assert nf(H[0], (g,), (2,), trunc=((0, 1), 8)).is_zero()
    s = st_.series(0, 0, (0,))
    assert s.coefficient((1, 0)) == Fraction(-1, 2)
    assert s.coefficient((1, 1)) == Fraction(1, 2)  # the y1*y2 term of sqrt(1 + u) is binom(1/2, 2) * 4 = -1/2


# rational reconstruction


def test_reconstruct_inverse():
    s = TruncatedSeries(O1, [0], [1], {(0,): 1, (1,): -1, (2,): 1, (3,): -1}, 4)
    p, q = rational_reconstruction(s, 0, 1)
    assert (p, q) == (parse_poly("1", O1), parse_poly("y", O1))


def test_reconstruct_polynomial():
    f = parse_poly("3*y^2 - y + 5", O1)
    s = TruncatedSeries.from_poly(f, [0], [2], 5)
    p, q = rational_reconstruction(s, 2, 0)
    assert (p, q) == (f, parse_poly("1", O1))


def test_reconstruct_y_over_y_plus_one():
    s = TruncatedSeries(O1, [0], [1], {(0,): Fraction(1, 2), (1,): Fraction(1, 4), (2,): Fraction(-1, 8)}, 3)
    p, q = rational_reconstruction(s, 1, 1)
    assert (p, q) == (parse_poly("y", O1), parse_poly("y + 1", O1))


def test_reconstruct_failure_and_short_series():
    s = TruncatedSeries(O1, [0], [0], {(1,): 1}, 2)
    assert rational_reconstruction(s, 0, 1) is None
    with pytest.raises(ValueError):
        rational_reconstruction(s, 1, 1)


@given(st.lists(st.integers(-5, 5), min_size=1, max_size=3), st.lists(st.integers(-5, 5), min_size=1, max_size=3), st.integers(-3, 3))
@settings(max_examples=40)
def test_reconstruct_random_rational_functions(num, den, c):
    y = sympy.Symbol("y")
    pn = sum(a * y ** k for k, a in enumerate(num))
    qd = 1 + sum(a * y ** (k + 1) for k, a in enumerate(den))
    if pn == 0 or sympy.Poly(qd, y).eval(c) == 0:
        return
    a, b = sympy.degree(pn, y), sympy.degree(qd, y)
    N = a + b + 1
    t = sympy.Symbol("t")
    ser = sympy.series((pn / qd).subs(y, t + c), t, 0, N).removeO()
    coeffs = {(k,): Fraction(str(sympy.Poly(ser, t).coeff_monomial(t ** k))) for k in range(N)}
    s = TruncatedSeries(O1, [0], [c], coeffs, N)
    p, q = rational_reconstruction(s, a, b)
    expect = sympy.cancel(pn / qd)
    got = sympy.sympify(p.to_str().replace("^", "**")) / sympy.sympify(q.to_str().replace("^", "**"))
    assert sympy.simplify(got - expect) == 0


# triangular_zero_dim


def test_tzd_example1_blocks():
    o = VarOrder(["x1", "x2"])
    P = lambda s: parse_poly(s, o)
    f1 = P("x1*x2*(x1+x2)")
    out = triangular_zero_dim([0], [f1, f1], random.Random(1))
    assert [normalize(g) for r in out for g in r.chain.polys] == [P("x1^2 + x1*x2")]
    out = triangular_zero_dim([1], [P("x2*(x2+1)"), f1], random.Random(1))
    assert [r.chain.polys for r in out] == [(P("x2"),)]


def test_tzd_example3_points():
    o = VarOrder(["x1", "x2"])
    P = lambda s: parse_poly(s, o)
    H = [P("x2^6 - 2*x2^4 + x2^3 - 2*x2"), P("x1^4 - 3*x1^2 + 2")]
    H += [P("(x1-2*x2)^2-2"), P("(x1+x2)^2-8"), P("(x1+2*x2)^2-18")]
    out = triangular_zero_dim([0, 1], H)
    assert [r.chain.polys for r in out] == [(P("x2^2 - 2"), P("x1 - x2"))]
    assert out[0].chain.leaders == (1, 0)


def test_tzd_example2_second_block_is_empty():
    o = VarOrder(["x1", "x2", "x3", "x4"])
    P = lambda s: parse_poly(s, o)
    fs = [P("x1*x3-x2^2"), P("x2^2+x2*x4-x3^2"), P("x1*(x2+x4)-x2*x3")]
    # separated parts for S = {x1, x4} at alpha = (1, 1, 1, 1): leaders x4 then x1
    H = [P("x4"), P("x1*x3 - x2^2")] + fs
    assert triangular_zero_dim([0, 3], H, random.Random(2)) == []


def test_tzd_example2_first_block():
    o = VarOrder(["x1", "x2", "x3", "x4"])
    P = lambda s: parse_poly(s, o)
    fs = [P("x1*x3-x2^2"), P("x2^2+x2*x4-x3^2"), P("x1*(x2+x4)-x2*x3")]
    g2 = P("x1^2*x3^2 - 2*x1*x3^3 - x1*x3*x4^2 + x3^4")
    g1 = P("x2^2 + x2*x4 - x3^2")
    H = [squarefree_part(g1, "x2"), squarefree_part(g2, "x1")] + fs
    out = triangular_zero_dim([0, 1], H, random.Random(3))
    assert [r.chain.polys for r in out] == [(P("x2^2 + x2*x4 - x3^2"), P("x1*x3 + x2*x4 - x3^2"))]
    for f in fs:
        assert prem_chain(f, out[0].chain).is_zero()


def test_tzd_records_attempts_and_uses_points():
    o = VarOrder(["x1", "x2"])
    P = lambda s: parse_poly(s, o)
    f1 = P("x1*x2*(x1+x2)")
    rec = []
    triangular_zero_dim([0], [f1, f1], random.Random(1), points=([3], [5]), record=rec)
    assert rec[0]["y1"] == ["3"] and rec[0]["y2"] == ["5"]
    assert rec[-1]["outcome"] == "1 chains"


def test_tzd_restarts_after_bad_point():
    o = VarOrder(["x1", "x2"])
    P = lambda s: parse_poly(s, o)
    f1 = P("x1*x2*(x1+x2)")
    rec = []
    out = triangular_zero_dim([0], [f1, f1], random.Random(1), points=([0], [5]), record=rec)
    assert rec[0]["outcome"].startswith("restart")
    assert len(out) == 1


def test_tzd_retries_exhausted():
    o = VarOrder(["x1", "x2"])
    P = lambda s: parse_poly(s, o)
    f1 = P("x1*x2*(x1+x2)")
    with pytest.raises(RetriesExhausted):
        triangular_zero_dim([0], [f1, f1], random.Random(1), points=([0], [5]), max_retries=0)


def test_tzd_input_validation():
    o = VarOrder(["x1", "x2"])
    P = lambda s: parse_poly(s, o)
    with pytest.raises(ValueError):
        triangular_zero_dim([0], [P("x1*x2 + x1")], leaders=[1])
    with pytest.raises(ValueError):
        triangular_zero_dim([], [P("x1")])


def test_default_leaders_descend():
    assert default_leaders([0, 2, 1]) == (2, 1, 0)
