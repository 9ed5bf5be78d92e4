"""Sparse multivariate polynomials with exact rational coefficients.

A polynomial is a map from exponent tuples to nonzero ``Fraction`` values,
tied to a :class:`VarOrder`.  Terms iterate in graded-lex order with
``x1 > x2 > ... > xn`` so that printing and comparisons are deterministic.

The kernels here (pseudo-division, subresultant gcd, squarefree part,
content and primitive part) are the only tools the rest of the package
needs: no factorization is ever performed.
"""
from __future__ import annotations

import re
from fractions import Fraction
from functools import reduce
from math import gcd as igcd
from math import lcm as ilcm
from typing import Dict, Iterable, Mapping, Sequence, Tuple, Union

Exp = Tuple[int, ...]
Scalar = Union[int, Fraction]

__all__ = [
    "VarOrder",
    "MultiPoly",
    "PolyParseError",
    "parse_poly",
    "to_rational",
    "pseudo_divide",
    "exact_div",
    "gcd",
    "lcm",
    "content",
    "squarefree_part",
    "full_squarefree_part",
    "specialize",
    "primitive_part",
    "normalize",
]


def to_rational(x) -> Fraction:
    """Coerce ints, Fractions and strings like ``"3/4"`` to ``Fraction``."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot use {type(x).__name__} as an exact coefficient")


class VarOrder:
    """An ordered, immutable list of variable names."""

    __slots__ = ("names", "_index")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        for nm in names:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", nm):
                raise ValueError(f"bad variable name {nm!r}")
        self.names = names
        self._index = {nm: i for i, nm in enumerate(names)}

    @property
    def n(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"undeclared variable {name!r}") from None

    def resolve(self, v) -> int:
        """Accept an index or a name and return the index."""
        if isinstance(v, str):
            return self.index(v)
        if not 0 <= v < len(self.names):
            raise IndexError(f"variable index {v} out of range")
        return v

    def extend(self, extra: Sequence[str]) -> "VarOrder":
        return VarOrder(self.names + tuple(extra))

    def __eq__(self, other):
        return isinstance(other, VarOrder) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __len__(self):
        return len(self.names)

    def __repr__(self):
        return f"VarOrder({list(self.names)!r})"


def _grlex_key(e: Exp):
    return (sum(e), e)


class MultiPoly:
    """Immutable sparse polynomial over Q.

    Arithmetic accepts ints and Fractions on either side.  Equality is
    exact equality of the term maps (the variable orders must agree).
    """

    __slots__ = ("order", "terms", "_hash")

    def __init__(self, order: VarOrder, terms: Mapping[Exp, Scalar] | None = None, _clean: bool = False):
        self.order = order
        if terms is None:
            self.terms: Dict[Exp, Fraction] = {}
        elif _clean:
            self.terms = terms  # type: ignore[assignment]
        else:
            n = order.n
            clean: Dict[Exp, Fraction] = {}
            for e, c in terms.items():
                e = tuple(e)
                if len(e) != n:
                    raise ValueError(f"exponent {e} has wrong length for {n} variables")
                c = to_rational(c)
                if c:
                    clean[e] = clean.get(e, 0) + c
            self.terms = {e: c for e, c in clean.items() if c}
        self._hash = None

    # constructors

    @classmethod
    def zero(cls, order: VarOrder) -> "MultiPoly":
        return cls(order, {}, _clean=True)

    @classmethod
    def const(cls, order: VarOrder, c: Scalar) -> "MultiPoly":
        c = to_rational(c)
        if not c:
            return cls.zero(order)
        return cls(order, {(0,) * order.n: c}, _clean=True)

    @classmethod
    def var(cls, order: VarOrder, v, power: int = 1) -> "MultiPoly":
        i = order.resolve(v)
        e = [0] * order.n
        e[i] = power
        return cls(order, {tuple(e): Fraction(1)}, _clean=True)

    @classmethod
    def monomial(cls, order: VarOrder, exp: Exp, c: Scalar = 1) -> "MultiPoly":
        return cls(order, {tuple(exp): c})

    # basic queries

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        if not self.terms:
            return True
        return len(self.terms) == 1 and not any(next(iter(self.terms)))

    def constant_value(self) -> Fraction:
        """The value of a constant polynomial (0 for the zero polynomial)."""
        if not self.terms:
            return Fraction(0)
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return next(iter(self.terms.values()))

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.order.n, Fraction(0))

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def leading_term(self) -> Tuple[Exp, Fraction]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms, key=_grlex_key)
        return e, self.terms[e]

    def leading_rational(self) -> Fraction:
        return self.leading_term()[1]

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree(self, v) -> int:
        """Degree in one variable; -1 for the zero polynomial."""
        i = self.order.resolve(v)
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    def degree_in(self, vs: Iterable[int]) -> int:
        """Total degree in a block of variables."""
        vs = list(vs)
        if not self.terms:
            return -1
        return max(sum(e[i] for i in vs) for e in self.terms)

    def involves(self, v) -> bool:
        i = self.order.resolve(v)
        return any(e[i] for e in self.terms)

    def variables(self) -> Tuple[int, ...]:
        used = [False] * self.order.n
        for e in self.terms:
            for i, a in enumerate(e):
                if a:
                    used[i] = True
        return tuple(i for i, u in enumerate(used) if u)

    def coefficients_in(self, v) -> Dict[int, "MultiPoly"]:
        """View as a univariate polynomial in ``v``: degree -> coefficient."""
        i = self.order.resolve(v)
        parts: Dict[int, Dict[Exp, Fraction]] = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                e = e[:i] + (0,) + e[i + 1:]
            parts.setdefault(k, {})[e] = c
        return {k: MultiPoly(self.order, t, _clean=True) for k, t in parts.items()}

    def coefficients_block(self, vs: Sequence[int]) -> Dict[Exp, "MultiPoly"]:
        """View as a polynomial in the variables ``vs``: monomial -> coefficient."""
        vs = tuple(vs)
        parts: Dict[Exp, Dict[Exp, Fraction]] = {}
        for e, c in self.terms.items():
            key = tuple(e[i] for i in vs)
            rest = list(e)
            for i in vs:
                rest[i] = 0
            parts.setdefault(key, {})[tuple(rest)] = c
        return {k: MultiPoly(self.order, t, _clean=True) for k, t in parts.items()}

    def lc(self, v) -> "MultiPoly":
        """Leading coefficient with respect to variable ``v``."""
        if not self.terms:
            return self
        cs = self.coefficients_in(v)
        return cs[max(cs)]

    def derivative(self, v) -> "MultiPoly":
        i = self.order.resolve(v)
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                out[e[:i] + (k - 1,) + e[i + 1:]] = c * k
        return MultiPoly(self.order, out, _clean=True)

    def evaluate(self, point: Sequence) -> object:
        """Evaluate at a full point.  Works for Fractions, floats and mpmath numbers."""
        total = 0
        pows: Dict[Tuple[int, int], object] = {}
        for e, c in self.terms.items():
            t = c
            for i, a in enumerate(e):
                if a:
                    key = (i, a)
                    p = pows.get(key)
                    if p is None:
                        p = point[i] ** a
                        pows[key] = p
                    t = t * p
            total = total + t
        return total

    def map_coefficients(self, fn) -> "MultiPoly":
        return MultiPoly(self.order, {e: fn(c) for e, c in self.terms.items()})

    def with_order(self, order: VarOrder, positions: Sequence[int]) -> "MultiPoly":
        """Re-embed into a different order; ``positions[i]`` is the new slot of variable i."""
        out = {}
        for e, c in self.terms.items():
            ne = [0] * order.n
            for i, a in enumerate(e):
                if a:
                    ne[positions[i]] = a
            out[tuple(ne)] = c
        return MultiPoly(order, out, _clean=True)

    # arithmetic

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.order != self.order:
                raise ValueError("polynomials live in different variable orders")
            return other
        return MultiPoly.const(self.order, other)

    def __add__(self, other):
        if not isinstance(other, (MultiPoly, int, Fraction)):
            return NotImplemented
        other = self._coerce(other)
        if len(self.terms) < len(other.terms):
            a, b = other.terms, self.terms
        else:
            a, b = self.terms, other.terms
        out = dict(a)
        for e, c in b.items():
            s = out.get(e)
            if s is None:
                out[e] = c
            else:
                s = s + c
                if s:
                    out[e] = s
                else:
                    del out[e]
        return MultiPoly(self.order, out, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.order, {e: -c for e, c in self.terms.items()}, _clean=True)

    def __sub__(self, other):
        if not isinstance(other, (MultiPoly, int, Fraction)):
            return NotImplemented
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        if not isinstance(other, (int, Fraction)):
            return NotImplemented
        return (-self) + other

    def scale(self, c: Scalar) -> "MultiPoly":
        c = to_rational(c)
        if not c:
            return MultiPoly.zero(self.order)
        return MultiPoly(self.order, {e: v * c for e, v in self.terms.items()}, _clean=True)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        other = self._coerce(other)
        if not self.terms or not other.terms:
            return MultiPoly.zero(self.order)
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        out: Dict[Exp, Fraction] = {}
        get = out.get
        for e2, c2 in b.items():
            for e1, c1 in a.items():
                e = tuple([x + y for x, y in zip(e1, e2)])
                s = get(e)
                out[e] = c1 * c2 if s is None else s + c1 * c2
        return MultiPoly(self.order, {e: c for e, c in out.items() if c}, _clean=True)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = MultiPoly.const(self.order, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __truediv__(self, other):
        """Division by a nonzero scalar, or exact division by a polynomial."""
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("division by zero")
            return self.scale(Fraction(1) / to_rational(other))
        if isinstance(other, MultiPoly):
            return exact_div(self, other)
        return NotImplemented

    def mul_monomial(self, exp: Exp, c: Scalar = 1) -> "MultiPoly":
        c = to_rational(c)
        if not c:
            return MultiPoly.zero(self.order)
        return MultiPoly(
            self.order,
            {tuple([x + y for x, y in zip(e, exp)]): v * c for e, v in self.terms.items()},
            _clean=True,
        )

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.terms == MultiPoly.const(self.order, other).terms
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.order == other.order and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.order, frozenset(self.terms.items())))
        return self._hash

    def sort_key(self):
        """Deterministic key for ordering lists of polynomials."""
        ts = self.sorted_terms()
        return tuple((sum(e), e, c) for e, c in ts)

    # printing

    def to_str(self) -> str:
        if not self.terms:
            return "0"
        names = self.order.names
        pieces = []
        for k, (e, c) in enumerate(self.sorted_terms()):
            mono = "*".join(
                nm if a == 1 else f"{nm}^{a}" for nm, a in zip(names, e) if a
            )
            neg = c < 0
            a = -c if neg else c
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            if k == 0:
                pieces.append(("-" if neg else "") + body)
            else:
                pieces.append((" - " if neg else " + ") + body)
        return "".join(pieces)

    __str__ = to_str

    def __repr__(self):
        return f"MultiPoly({self.to_str()!r})"


# parsing

class PolyParseError(ValueError):
    """Syntax error with the offending column (0-based) attached."""

    def __init__(self, msg: str, pos: int, text: str = ""):
        self.pos = pos
        self.text = text
        super().__init__(f"{msg} at column {pos + 1}" + (f" in {text!r}" if text else ""))


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*/^()]))")


def _tokenize(text: str):
    pos = 0
    toks = []
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m:
            raise PolyParseError(f"unexpected character {text[pos]!r}", pos, text)
        start = m.start(m.lastindex)
        if m.group(1) is not None:
            toks.append(("num", m.group(1), start))
        elif m.group(2) is not None:
            toks.append(("name", m.group(2), start))
        else:
            op = m.group(3)
            toks.append(("op", "^" if op == "**" else op, start))
        pos = m.end()
    toks.append(("end", "", n))
    return toks


class _Parser:
    def __init__(self, text: str, order: VarOrder):
        self.text = text
        self.order = order
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        raise PolyParseError(msg, tok[2], self.text)

    def parse(self) -> MultiPoly:
        if self.peek()[0] == "end":
            self.fail("empty polynomial")
        p = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            if tok[0] in ("num", "name") or tok[1] == "(":
                self.fail("implicit multiplication is not allowed; use '*'")
            self.fail(f"unexpected {tok[1]!r}")
        return p

    def expr(self):
        sign = 1
        if self.peek()[1] in ("+", "-"):
            sign = -1 if self.take()[1] == "-" else 1
        p = self.term()
        if sign < 0:
            p = -p
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self):
        p = self.power()
        while self.peek()[1] in ("*", "/"):
            op = self.take()
            q = self.power()
            if op[1] == "*":
                p = p * q
            else:
                if not q.is_constant() or q.is_zero():
                    self.fail("can only divide by a nonzero constant", op)
                p = p / q.constant_value()
        return p

    def power(self):
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            tok = self.take()
            if tok[0] != "num":
                self.fail("exponent must be a nonnegative integer", tok)
            base = base ** int(tok[1])
        return base

    def atom(self):
        tok = self.take()
        kind, val, pos = tok
        if kind == "num":
            return MultiPoly.const(self.order, int(val))
        if kind == "name":
            if val not in self.order._index:
                raise PolyParseError(f"undeclared variable {val!r}", pos, self.text)
            return MultiPoly.var(self.order, val)
        if val == "(":
            p = self.expr()
            if self.peek()[1] != ")":
                self.fail("expected ')'")
            self.take()
            return p
        if val in ("+", "-"):
            # unary sign inside a product, e.g. 2*-x
            p = self.power()
            return -p if val == "-" else p
        if kind == "end":
            self.fail("unexpected end of input", tok)
        self.fail(f"unexpected {val!r}", tok)


def parse_poly(text: str, order: VarOrder) -> MultiPoly:
    """Parse ``text`` such as ``"3/2*x1^2 - x2 + 1"`` in the given order."""
    return _Parser(text, order).parse()


# division kernels

def pseudo_divide(f: MultiPoly, g: MultiPoly, v) -> Tuple[MultiPoly, MultiPoly, int]:
    """Pseudo-division of ``f`` by ``g`` in the variable ``v``.

    Returns ``(q, r, e)`` with ``lc(g)^e * f = q*g + r``,
    ``deg_v r < deg_v g`` and ``e = max(deg_v f - deg_v g + 1, 0)``.
    """
    order = f.order
    i = order.resolve(v)
    dg = g.degree(i)
    if dg < 1:
        raise ValueError(f"divisor does not involve {order.names[i]}")
    lcg = g.lc(i)
    ldeg = [0] * order.n
    ldeg[i] = dg
    g_tail = g - lcg.mul_monomial(tuple(ldeg))
    q = MultiPoly.zero(order)
    r = f
    e = 0
    lc_is_const = lcg.is_constant()
    while True:
        dr = r.degree(i)
        if dr < dg:
            break
        lcr = r.lc(i)
        shift = [0] * order.n
        shift[i] = dr - dg
        shift = tuple(shift)
        if lc_is_const:
            t = lcr.scale(Fraction(1) / lcg.constant_value())
            q = q + t.mul_monomial(shift)
            lead = [0] * order.n
            lead[i] = dr
            r = (r - lcr.mul_monomial(tuple(lead))) - (t * g_tail).mul_monomial(shift)
        else:
            lead = [0] * order.n
            lead[i] = dr
            q = q * lcg + lcr.mul_monomial(shift)
            r = (r - lcr.mul_monomial(tuple(lead))) * lcg - (lcr * g_tail).mul_monomial(shift)
            e += 1
    bound = max(f.degree(i) - dg + 1, 0) if f.terms else 0
    if lc_is_const:
        if bound:
            s = lcg.constant_value() ** bound
            return q.scale(s), r.scale(s), bound
        return q, r, 0
    if bound > e:
        m = lcg ** (bound - e)
        q, r = q * m, r * m
    return q, r, bound


def prem(f: MultiPoly, g: MultiPoly, v) -> MultiPoly:
    return pseudo_divide(f, g, v)[1]


def exact_div(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    """``f / g`` when ``g`` divides ``f`` exactly; raises ``ValueError`` otherwise."""
    if g.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if g.is_constant():
        return f.scale(Fraction(1) / g.constant_value())
    order = f.order
    eg, cg = g.leading_term()
    q: Dict[Exp, Fraction] = {}
    r = f
    while r.terms:
        er, cr = r.leading_term()
        de = tuple(a - b for a, b in zip(er, eg))
        if min(de) < 0:
            raise ValueError("inexact polynomial division")
        c = cr / cg
        q[de] = c
        r = r - g.mul_monomial(de, c)
    return MultiPoly(order, q, _clean=True)


def divides(g: MultiPoly, f: MultiPoly) -> bool:
    try:
        exact_div(f, g)
        return True
    except ValueError:
        return False


# gcd

def normalize(f: MultiPoly) -> MultiPoly:
    """Integer-primitive with positive leading coefficient in grlex order."""
    if not f.terms:
        return f
    nums = [c.numerator for c in f.terms.values()]
    dens = [c.denominator for c in f.terms.values()]
    g = abs(reduce(igcd, nums))
    l = reduce(ilcm, dens)
    s = Fraction(l, g)
    if f.leading_rational() < 0:
        s = -s
    if s == 1:
        return f
    return f.scale(s)


def _main_var(f: MultiPoly, g: MultiPoly):
    vf, vg = set(f.variables()), set(g.variables())
    common = vf & vg
    if common:
        return max(common)
    return None


def content(f: MultiPoly, v) -> MultiPoly:
    """Gcd of the coefficients of ``f`` viewed in ``v`` (normalized)."""
    i = f.order.resolve(v)
    if f.is_zero():
        return f
    coeffs = [c for _, c in sorted(f.coefficients_in(i).items())]
    coeffs.sort(key=lambda p: (len(p.terms), p.total_degree()))
    g = coeffs[0]
    for c in coeffs[1:]:
        if g.is_constant():
            break
        g = _gcd(g, c)
    return normalize(g) if not g.is_constant() else MultiPoly.const(f.order, 1)


def _subresultant_gcd(a: MultiPoly, b: MultiPoly, i: int) -> MultiPoly:
    # a, b primitive in x_i with positive degree there
    if a.degree(i) < b.degree(i):
        a, b = b, a
    one = MultiPoly.const(a.order, 1)
    g = one
    h = one
    while True:
        delta = a.degree(i) - b.degree(i)
        r = prem(a, b, i)
        if r.is_zero():
            return primitive_part(b, (i,))
        if r.degree(i) <= 0:
            return one
        a = b
        b = exact_div(r, g * h ** delta)
        g = a.lc(i)
        if delta == 0:
            pass
        elif delta == 1:
            h = g
        else:
            h = exact_div(g ** delta, h ** (delta - 1))


def _gcd(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    """Gcd up to a rational factor."""
    order = f.order
    if f.is_zero():
        return g
    if g.is_zero():
        return f
    if f.is_constant() or g.is_constant():
        return MultiPoly.const(order, 1)
    i = _main_var(f, g)
    if i is None:
        # a common divisor can only use variables shared by both
        return MultiPoly.const(order, 1)
    cf = content(f, i)
    cg = content(g, i)
    pf = exact_div(f, cf) if not cf.is_constant() else f
    pg = exact_div(g, cg) if not cg.is_constant() else g
    c = _gcd(cf, cg)
    h = _subresultant_gcd(pf, pg, i)
    return c * h


def gcd(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    """Greatest common divisor, normalized; ``gcd(0, 0) = 0``."""
    if f.is_zero() and g.is_zero():
        return f
    return normalize(_gcd(f, g))


def gcd_list(polys: Iterable[MultiPoly]) -> MultiPoly:
    polys = list(polys)
    if not polys:
        raise ValueError("empty list")
    g = polys[0]
    for p in polys[1:]:
        g = _gcd(g, p)
    return normalize(g)


def lcm(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    if f.is_zero() or g.is_zero():
        return MultiPoly.zero(f.order)
    return normalize(exact_div(f * g, _gcd(f, g)))


def squarefree_part(f: MultiPoly, v) -> MultiPoly:
    """``f / gcd(f, df/dv)`` normalized.

    The result is squarefree in ``v`` over the field of the other
    variables; any factor of ``f`` free of ``v`` is removed with it.
    """
    i = f.order.resolve(v)
    if f.degree(i) < 1:
        raise ValueError(f"polynomial is constant in {f.order.names[i]}")
    c = content(f, i)
    pf = exact_div(f, c) if not c.is_constant() else f
    d = pf.derivative(i)
    g = _gcd(pf, d)
    return normalize(exact_div(pf, g))


def full_squarefree_part(f: MultiPoly) -> MultiPoly:
    """Squarefree part as a polynomial in all variables (same zero set)."""
    if f.is_zero():
        return f
    if f.is_constant():
        return MultiPoly.const(f.order, 1)
    g = f
    for i in f.variables():
        g = _gcd(g, f.derivative(i))
        if g.is_constant():
            break
    return normalize(exact_div(f, g))


def specialize(f: MultiPoly, bindings: Mapping) -> MultiPoly:
    """Substitute rational values for some variables (keys are names or indices)."""
    if not bindings:
        return f
    order = f.order
    bind = {order.resolve(k): to_rational(v) for k, v in bindings.items()}
    out: Dict[Exp, Fraction] = {}
    pows: Dict[Tuple[int, int], Fraction] = {}
    for e, c in f.terms.items():
        ne = list(e)
        for i, val in bind.items():
            a = e[i]
            if a:
                key = (i, a)
                p = pows.get(key)
                if p is None:
                    p = val ** a
                    pows[key] = p
                c = c * p
                ne[i] = 0
        if c:
            ne = tuple(ne)
            out[ne] = out.get(ne, 0) + c
    return MultiPoly(order, {e: c for e, c in out.items() if c}, _clean=True)


def primitive_part(f: MultiPoly, main_vars: Iterable) -> MultiPoly:
    """Divide out the content of ``f`` seen as a polynomial in ``main_vars``."""
    if f.is_zero():
        return f
    idx = tuple(sorted(f.order.resolve(v) for v in main_vars))
    coeffs = list(f.coefficients_block(idx).values())
    coeffs.sort(key=lambda p: (len(p.terms), p.total_degree()))
    g = coeffs[0]
    for c in coeffs[1:]:
        if g.is_constant():
            break
        g = _gcd(g, c)
    if not g.is_constant():
        f = exact_div(f, g)
    return normalize(f)
