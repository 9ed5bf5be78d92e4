import os
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import settings

from tridecomp.poly import MultiPoly, VarOrder, parse_poly

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
SYSTEMS = os.path.join(ROOT, "demos", "systems")


def system_path(name):
    return os.path.join(SYSTEMS, name)


def to_sympy(p: MultiPoly):
    syms = sympy.symbols(list(p.order.names))
    expr = sympy.Integer(0)
    for e, c in p.terms.items():
        t = sympy.Rational(c.numerator, c.denominator)
        for s, a in zip(syms, e):
            t *= s ** a
        expr += t
    return sympy.expand(expr)


def from_sympy(expr, order: VarOrder) -> MultiPoly:
    syms = sympy.symbols(list(order.names))
    poly = sympy.Poly(sympy.expand(expr), *syms)
    terms = {}
    for mon, c in poly.terms():
        c = sympy.Rational(c)
        terms[tuple(mon)] = Fraction(int(c.p), int(c.q))
    return MultiPoly(order, terms)


def random_poly(rng: random.Random, order: VarOrder, max_deg: int, n_terms: int, coeff=5, variables=None) -> MultiPoly:
    vs = list(range(order.n)) if variables is None else list(variables)
    terms = {}
    for _ in range(n_terms):
        e = [0] * order.n
        budget = rng.randint(0, max_deg)
        for _ in range(budget):
            e[rng.choice(vs)] += 1
        c = rng.randint(-coeff, coeff)
        if c:
            terms[tuple(e)] = Fraction(c)
    return MultiPoly(order, terms)


@pytest.fixture
def xy():
    return VarOrder(["x1", "x2"])


@pytest.fixture
def P(xy):
    return lambda s: parse_poly(s, xy)
