"""Hensel lifting of monic chains and rational function reconstruction.

Lifting works with chains whose coefficients are truncated power series
in the shifted free variables ``t = y - y*``.  Such a chain is stored as
ordinary :class:`MultiPoly` objects in the full variable order, with the
free-variable slots read as ``t`` and every term of ``t``-degree at least
the current precision dropped.
"""
from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, prod
from typing import Dict, List, Optional, Sequence, Tuple

from .chains import SQUAREFREE_REGULAR, RegularChainRecord, TriangularSet, prem_chain
from .linalg import solve
from .poly import MultiPoly, VarOrder, exact_div, gcd, lcm, normalize, primitive_part, specialize
from .resultants import sylvester_resultant
from .zerodim import FiberSystem, decompose_fiber, inverse, nf

log = logging.getLogger(__name__)


class LiftingError(ArithmeticError):
    """Lifting could not be completed; the specialization point was unlucky."""


class RetriesExhausted(LiftingError):
    pass


# truncated series


class TruncatedSeries:
    """Power series in ``t = y - center`` known below total degree ``truncation_order``.

    ``free`` lists the variable slots of ``order`` that carry ``t``.
    Exponent tuples have the full length of ``order``.
    """

    __slots__ = ("order", "free", "center", "terms", "truncation_order")

    def __init__(self, order: VarOrder, free: Sequence[int], center: Sequence, terms: Dict[tuple, Fraction], truncation_order: int):
        self.order = order
        self.free = tuple(free)
        self.center = tuple(Fraction(c) for c in center)
        if len(self.center) != len(self.free):
            raise ValueError("center needs one coordinate per free variable")
        self.truncation_order = truncation_order
        self.terms = {
            tuple(e): Fraction(c)
            for e, c in terms.items()
            if c and sum(e[i] for i in self.free) < truncation_order
        }

    @classmethod
    def from_poly(cls, p: MultiPoly, free, center, truncation_order: int) -> "TruncatedSeries":
        """Expansion of a polynomial in ``y`` around ``center``."""
        q = shift(p, free, center)
        return cls(p.order, free, center, q.terms, truncation_order)

    @classmethod
    def from_t_poly(cls, p: MultiPoly, free, center, truncation_order: int) -> "TruncatedSeries":
        return cls(p.order, free, center, p.terms, truncation_order)

    def as_t_poly(self) -> MultiPoly:
        return MultiPoly(self.order, dict(self.terms), _clean=True)

    def coefficient(self, exp: Sequence[int]) -> Fraction:
        full = [0] * self.order.n
        for i, a in zip(self.free, exp):
            full[i] = a
        return self.terms.get(tuple(full), Fraction(0))

    def by_degree(self) -> List[Fraction]:
        """Coefficients ``[c_0, c_1, ...]`` for a single free variable."""
        if len(self.free) != 1:
            raise ValueError("by_degree needs exactly one free variable")
        return [self.coefficient((k,)) for k in range(self.truncation_order)]

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        n = min(self.truncation_order, other.truncation_order)
        p = _trunc(self.as_t_poly() * other.as_t_poly(), self.free, n)
        return TruncatedSeries(self.order, self.free, self.center, p.terms, n)

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        n = min(self.truncation_order, other.truncation_order)
        p = self.as_t_poly() + other.as_t_poly()
        return TruncatedSeries(self.order, self.free, self.center, p.terms, n)

    def __sub__(self, other):
        n = min(self.truncation_order, other.truncation_order)
        p = self.as_t_poly() - other.as_t_poly()
        return TruncatedSeries(self.order, self.free, self.center, p.terms, n)

    def __eq__(self, other):
        return (
            isinstance(other, TruncatedSeries)
            and self.free == other.free
            and self.center == other.center
            and self.truncation_order == other.truncation_order
            and self.terms == other.terms
        )

    def __repr__(self):
        return f"TruncatedSeries({self.as_t_poly()} + O(t^{self.truncation_order}), center={self.center})"


def _trunc(p: MultiPoly, free: Sequence[int], n: int) -> MultiPoly:
    return MultiPoly(p.order, {e: c for e, c in p.terms.items() if sum(e[i] for i in free) < n}, _clean=True)


def shift(p: MultiPoly, free: Sequence[int], center: Sequence, inverse_shift: bool = False) -> MultiPoly:
    """Substitute ``y_i -> t_i + c_i`` (or ``t_i -> y_i - c_i``) in the free slots."""
    order = p.order
    sign = -1 if inverse_shift else 1
    pos = {i: Fraction(c) * sign for i, c in zip(free, center)}
    out: Dict[tuple, Fraction] = {}
    for e, c in p.terms.items():
        partial = {tuple([0 if i in pos else a for i, a in enumerate(e)]): c}
        for i, ci in pos.items():
            a = e[i]
            if not a:
                continue
            nxt: Dict[tuple, Fraction] = {}
            for pe, pc in partial.items():
                for k in range(a + 1):
                    w = comb(a, k) * ci ** (a - k)
                    if not w:
                        continue
                    ne = list(pe)
                    ne[i] = k
                    ne = tuple(ne)
                    nxt[ne] = nxt.get(ne, 0) + pc * w
            partial = nxt
        for pe, pc in partial.items():
            out[pe] = out.get(pe, 0) + pc
    return MultiPoly(order, out)


# Newton step


@dataclass
class LiftState:
    chains: List[TriangularSet]
    precision: int
    center: Tuple[Fraction, ...]
    free: Tuple[int, ...]
    s: int = 0
    y2: Optional[Tuple[Fraction, ...]] = None
    reference_fiber2: list = field(default_factory=list)

    def series(self, chain_index: int, level: int, zmono: Sequence[int]) -> TruncatedSeries:
        """The series coefficient of the ``z``-monomial ``zmono`` in one element."""
        ch = self.chains[chain_index]
        g = ch.polys[level]
        coeff = g.coefficients_block(ch.leaders).get(tuple(zmono), MultiPoly.zero(ch.order))
        return TruncatedSeries.from_t_poly(coeff, self.free, self.center, self.precision)


def _mul(a, b, chain, leaders, tr):
    return nf(_trunc(a * b, tr[0], tr[1]), chain, leaders, tr)


def _det(mat, chain, leaders, tr):
    m = len(mat)
    if m == 1:
        return mat[0][0]
    order = mat[0][0].order
    total = MultiPoly.zero(order)
    for j in range(m):
        if mat[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in mat[1:]]
        term = _mul(mat[0][j], _det(minor, chain, leaders, tr), chain, leaders, tr)
        total = total + term if j % 2 == 0 else total - term
    return total


def _adjugate(mat, chain, leaders, tr):
    m = len(mat)
    order = mat[0][0].order
    if m == 1:
        return [[MultiPoly.const(order, 1)]]
    adj = [[None] * m for _ in range(m)]
    for i in range(m):
        for j in range(m):
            minor = [row[:j] + row[j + 1:] for k, row in enumerate(mat) if k != i]
            c = _det(minor, chain, leaders, tr)
            adj[j][i] = c if (i + j) % 2 == 0 else -c
    return adj


def _series_inverse(a, chain, leaders, free, n):
    """Inverse of ``a`` modulo the chain and ``t^n`` by Newton doubling."""
    zero = {i: 0 for i in free}
    a0 = specialize(a, zero)
    chain0 = tuple(specialize(g, zero) for g in chain)
    b = inverse(a0, chain0, leaders)
    if b is None:
        raise LiftingError("Jacobian is singular at the specialization point")
    prec = 1
    while prec < n:
        prec = min(2 * prec, n)
        tr = (free, prec)
        ab = _mul(a, b, chain, leaders, tr)
        b = _mul(b, 2 - ab, chain, leaders, tr)
    return b


def lift_chain(h0_t: Sequence[MultiPoly], chain: TriangularSet, free: Sequence[int], precision: int) -> TriangularSet:
    """One Newton step: a chain correct below ``precision`` becomes correct below twice that.

    ``h0_t`` are the lifting equations already shifted to ``t = y - y*``.
    """
    leaders = chain.leaders
    polys = chain.polys
    free = tuple(free)
    n2 = 2 * precision
    tr = (free, n2)
    m = len(leaders)
    if len(h0_t) != m:
        raise ValueError("need as many lifting equations as leaders")
    f_vals = [nf(_trunc(h, free, n2), polys, leaders, tr) for h in h0_t]
    if all(f.is_zero() for f in f_vals):
        return chain
    jac = [[nf(_trunc(h.derivative(z), free, n2), polys, leaders, tr) for z in leaders] for h in h0_t]
    det = _det(jac, polys, leaders, tr)
    det_inv = _series_inverse(det, polys, leaders, free, n2)
    adj = _adjugate(jac, polys, leaders, tr)
    v = []
    for i in range(m):
        acc = MultiPoly.zero(chain.order)
        for j in range(m):
            if not adj[i][j].is_zero() and not f_vals[j].is_zero():
                acc = acc + _mul(adj[i][j], f_vals[j], polys, leaders, tr)
        v.append(_mul(acc, det_inv, polys, leaders, tr))
    new = []
    for k, g in enumerate(polys):
        delta = MultiPoly.zero(chain.order)
        for j in range(k + 1):
            dg = g.derivative(leaders[j])
            if not dg.is_zero() and not v[j].is_zero():
                delta = delta + _mul(dg, v[j], polys, leaders, tr)
        new.append(_trunc(g + nf(delta, polys, leaders, tr), free, n2))
    return TriangularSet(chain.order, new, leaders)


def lift_step(H: Sequence[MultiPoly], state: LiftState) -> LiftState:
    """Double the precision of every chain in ``state``."""
    h0_t = [shift(h, state.free, state.center) for h in H]
    chains = [lift_chain(h0_t, ch, state.free, state.precision) for ch in state.chains]
    return LiftState(chains, 2 * state.precision, state.center, state.free, state.s + 1, state.y2, state.reference_fiber2)


def start_state(chains: Sequence[TriangularSet], free: Sequence[int], center: Sequence, y2=None, reference=None) -> LiftState:
    return LiftState(list(chains), 1, tuple(Fraction(c) for c in center), tuple(free), 0, y2, list(reference or []))


# rational reconstruction


def _monomials(free: Sequence[int], n: int, maxdeg: int) -> List[tuple]:
    out = []

    def rec(k, left, cur):
        if k == len(free):
            e = [0] * n
            for i, a in zip(free, cur):
                e[i] = a
            out.append(tuple(e))
            return
        for a in range(left + 1):
            rec(k + 1, left - a, cur + [a])

    rec(0, maxdeg, [])
    out.sort(key=lambda e: (sum(e), tuple(-x for x in e)))
    return out


def rational_reconstruction(series: TruncatedSeries, num_bound: int, den_bound: int):
    """Find ``p / q`` with ``deg p <= num_bound``, ``deg q <= den_bound`` matching the series.

    Returns ``(p, q)`` as polynomials in ``y`` in lowest terms, ``q``
    integer-primitive with positive leading coefficient, or ``None`` when
    the bounds admit no solution.
    """
    if series.truncation_order <= num_bound + den_bound:
        raise ValueError("series too short for these degree bounds")
    order = series.order
    n = order.n
    free = series.free
    pm = _monomials(free, n, num_bound)
    qm = _monomials(free, n, den_bound)
    eqs = _monomials(free, n, num_bound + den_bound)
    s_terms = series.terms
    zero = (0,) * n
    qm_free = [e for e in qm if e != zero]
    # unknowns: p coefficients, then q coefficients except q(0) = 1
    nun = len(pm) + len(qm_free)
    pidx = {e: j for j, e in enumerate(pm)}
    rows = []
    rhs = []
    for eq in eqs:
        row = [Fraction(0)] * nun
        if eq in pidx:
            row[pidx[eq]] = Fraction(1)
        for j, qe in enumerate(qm_free):
            rest = tuple(a - b for a, b in zip(eq, qe))
            if min(rest) < 0:
                continue
            c = s_terms.get(rest)
            if c:
                row[len(pm) + j] = -c
        rows.append(row)
        rhs.append(s_terms.get(eq, Fraction(0)))
    x = solve(rows, rhs)
    if x is None:
        return None
    p_t = MultiPoly(order, {e: v for e, v in zip(pm, x[: len(pm)]) if v}, _clean=True)
    q_terms = {e: v for e, v in zip(qm_free, x[len(pm):]) if v}
    q_terms[zero] = Fraction(1)
    q_t = MultiPoly(order, q_terms, _clean=True)
    p = shift(p_t, free, series.center, inverse_shift=True)
    q = shift(q_t, free, series.center, inverse_shift=True)
    return _lowest_terms(p, q)


def _lowest_terms(p: MultiPoly, q: MultiPoly):
    if p.is_zero():
        return p, MultiPoly.const(q.order, 1)
    g = gcd(p, q)
    if not g.is_constant():
        p, q = exact_div(p, g), exact_div(q, g)
    qn = normalize(q)
    # q = c * qn for a rational c
    e, c = q.leading_term()
    ratio = qn.terms[e] / c
    return p.scale(ratio), qn


# TriangularZeroDim


def _reconstruct_chain(chain: TriangularSet, free, center, precision, bound):
    """Rational reconstruction of every coefficient; None on failure."""
    a = b = min((precision - 1) // 2, bound)
    out = []
    for g in chain.polys:
        parts = []
        for zexp, coeff in g.coefficients_block(chain.leaders).items():
            s = TruncatedSeries.from_t_poly(coeff, free, center, precision)
            rr = rational_reconstruction(s, a, b)
            if rr is None:
                return None
            # the approximation must agree with the lifted coefficients
            parts.append((zexp, rr))
        out.append(parts)
    return out


def _assemble(order: VarOrder, leaders, parts, at=None):
    """Build polynomials from reconstructed coefficients.

    With ``at`` given, specialize the free variables there (None if a
    denominator vanishes); otherwise clear denominators.
    """
    polys = []
    for coeffs in parts:
        if at is not None:
            acc = MultiPoly.zero(order)
            for zexp, (p, q) in coeffs:
                qv = specialize(q, at)
                if qv.is_zero():
                    return None
                pv = specialize(p, at)
                e = [0] * order.n
                for z, a in zip(leaders, zexp):
                    e[z] = a
                acc = acc + pv.scale(1 / qv.constant_value()).mul_monomial(tuple(e))
            polys.append(acc)
        else:
            den = MultiPoly.const(order, 1)
            for _, (p, q) in coeffs:
                den = lcm(den, q)
            acc = MultiPoly.zero(order)
            for zexp, (p, q) in coeffs:
                e = [0] * order.n
                for z, a in zip(leaders, zexp):
                    e[z] = a
                acc = acc + (p * exact_div(den, q)).mul_monomial(tuple(e))
            polys.append(primitive_part(acc, leaders))
    return polys


def _fiber(H, m, free, point, leaders):
    bind = dict(zip(free, point))
    parts = [specialize(h, bind) for h in H[:m]]
    for orig, part, z in zip(H[:m], parts, leaders):
        if part.degree(z) != orig.degree(z):
            raise LiftingError("separated part drops degree at the specialization")
        if part.degree(z) > 1:
            disc = sylvester_resultant(part, part.derivative(z), z)
            if disc.is_zero():
                raise LiftingError("separated part is not squarefree at the specialization")
    cons = [specialize(h, bind) for h in H[m:]]
    sys = FiberSystem(parts, cons, list(leaders))
    return decompose_fiber(sys)


def _chain_key(ch: TriangularSet):
    return tuple(g.sort_key() for g in ch.polys)


def default_leaders(S: Sequence[int]) -> Tuple[int, ...]:
    """Leader order used by default: descending variable index, so that the
    highest-numbered variable of the block sits at the bottom of the chain."""
    return tuple(sorted(S, reverse=True))


def triangular_zero_dim(
    S: Sequence[int],
    H: Sequence[MultiPoly],
    rng: Optional[random.Random] = None,
    gamma_size: int = 2 ** 31,
    *,
    leaders: Optional[Sequence[int]] = None,
    points: Optional[Tuple[Sequence, Sequence]] = None,
    max_retries: int = 5,
    record: Optional[list] = None,
) -> List[RegularChainRecord]:
    """Equiprojectable triangular decomposition of ``H`` over ``Q(x_free)``.

    The first ``|S|`` elements of ``H`` are the lifting equations; the
    ``k``-th must be a polynomial in ``leaders[k]`` and the free variables
    only, squarefree in its leader (separated parts).  The remaining
    elements are constraints.

    ``points`` optionally fixes ``(y1, y2)`` for the first attempt.
    Sampled points and outcomes are appended to ``record`` when given.
    """
    H = list(H)
    if not H:
        raise ValueError("no polynomials")
    order = H[0].order
    S = tuple(sorted(order.resolve(v) for v in S))
    m = len(S)
    if m == 0:
        raise ValueError("empty block of leaders")
    if len(H) < m:
        raise ValueError("need one separated part per leader")
    lead = tuple(order.resolve(v) for v in leaders) if leaders is not None else default_leaders(S)
    if sorted(lead) != list(S):
        raise ValueError("leaders must be a permutation of S")
    free = tuple(i for i in range(order.n) if i not in set(S))
    for h, z in zip(H[:m], lead):
        bad = set(h.variables()) - set(free) - {z}
        if bad or not h.involves(z):
            raise ValueError(f"{h} is not a separated part in {order.names[z]}")
    rng = rng or random.Random(0)
    provenance = "block " + ",".join(order.names[i] for i in S)

    def finish(polys_list):
        out = []
        for polys in polys_list:
            ch = TriangularSet(order, polys, lead)
            out.append(RegularChainRecord(ch, SQUAREFREE_REGULAR, provenance, S, order.n - m))
        out.sort(key=lambda r: _chain_key(r.chain))
        return out

    if not free:
        comps = _fiber(H, m, free, (), lead)
        if record is not None:
            record.append({"subset": [order.names[i] for i in S], "points": None, "components": len(comps)})
        return finish([[normalize(g) for g in c.chain.chain.polys] for c in comps])

    bezout = prod(max(h.total_degree(), 1) for h in H[:m])
    attempts = 0
    last_reason = ""
    while attempts <= max_retries:
        if attempts == 0 and points is not None:
            y1 = tuple(Fraction(v) for v in points[0])
            y2 = tuple(Fraction(v) for v in points[1])
        else:
            y1 = tuple(Fraction(rng.randrange(gamma_size)) for _ in free)
            y2 = tuple(Fraction(rng.randrange(gamma_size)) for _ in free)
        attempts += 1
        entry = {
            "subset": [order.names[i] for i in S],
            "y1": [str(v) for v in y1],
            "y2": [str(v) for v in y2],
        }
        try:
            result = _attempt(H, m, order, free, lead, y1, y2, bezout)
        except LiftingError as exc:
            last_reason = str(exc)
            entry["outcome"] = "restart: " + last_reason
            log.info("restarting lifting for %s: %s", provenance, exc)
            if record is not None:
                record.append(entry)
            continue
        entry["outcome"] = f"{len(result)} chains"
        if record is not None:
            record.append(entry)
        return finish(result)
    raise RetriesExhausted(f"lifting failed after {max_retries} retries: {last_reason}")


def _attempt(H, m, order, free, lead, y1, y2, bezout):
    comps1 = _fiber(H, m, free, y1, lead)
    comps2 = _fiber(H, m, free, y2, lead)
    prof1 = sorted(c.fiber_profile for c in comps1)
    prof2 = sorted(c.fiber_profile for c in comps2)
    if prof1 != prof2:
        raise LiftingError("fibers at the two points have different shapes")
    if not comps1:
        return []
    points = sum(prod(c.fiber_profile) for c in comps1)
    est = max(points, bezout)
    cap_deg = est * est
    cap_prec = 2 * cap_deg + 2
    reference = sorted((_chain_key(c.chain.chain), c.chain.chain) for c in comps2)
    ref_keys = [k for k, _ in reference]
    H0 = H[:m]
    state = start_state([c.chain.chain for c in comps1], free, y1)
    at2 = dict(zip(free, y2))
    while state.precision < cap_prec:
        state = lift_step(H0, state)
        recon = []
        for ch in state.chains:
            parts = _reconstruct_chain(ch, free, y1, state.precision, cap_deg)
            if parts is None:
                break
            recon.append(parts)
        if len(recon) != len(state.chains):
            continue
        special = []
        for parts in recon:
            sp = _assemble(order, lead, parts, at=at2)
            if sp is None:
                break
            special.append(sp)
        if len(special) != len(recon):
            continue
        keys = sorted(tuple(g.sort_key() for g in sp) for sp in special)
        if keys != ref_keys:
            continue
        cleared = [_assemble(order, lead, parts) for parts in recon]
        for polys in cleared:
            ch = TriangularSet(order, polys, lead)
            for h in H:
                if not prem_chain(h, ch).is_zero():
                    raise LiftingError("reconstructed chain does not reduce the input to zero")
        return cleared
    raise LiftingError("stop criterion not met within the precision cap")


__all__ = [
    "TruncatedSeries",
    "LiftState",
    "LiftingError",
    "RetriesExhausted",
    "lift_step",
    "lift_chain",
    "start_state",
    "rational_reconstruction",
    "triangular_zero_dim",
    "default_leaders",
    "shift",
]
