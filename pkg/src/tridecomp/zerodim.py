"""Zero-dimensional triangular sets over Q.

Everything here works with *monic reduced* chains: each ``t_k`` has
leading coefficient 1 in its leader and is reduced modulo the chain below
it.  For a squarefree zero-dimensional chain that form is unique for the
point set it describes, so equality of chains is equality of varieties.

Internally a chain is a tuple of polynomials plus the tuple of leaders of
the enclosing computation; level ``k`` of a chain is ``polys[k]`` with
leader ``leaders[k]``.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

import mpmath

from .chains import SQUAREFREE_REGULAR, RegularChainRecord, TriangularSet
from .linalg import solve
from .poly import MultiPoly, VarOrder, gcd as poly_gcd, normalize

Chain = Tuple[MultiPoly, ...]


class SharedPointError(ValueError):
    """Input chains of an equiprojectable decomposition were not disjoint."""


class NumericOracleError(ArithmeticError):
    pass


# reduction in the quotient algebra


def rem_monic(p: MultiPoly, t: MultiPoly, i: int, trunc=None) -> MultiPoly:
    """Remainder of ``p`` by ``t`` in variable ``i``; ``t`` must be monic there.

    ``trunc = (slots, N)`` drops every term whose total degree in the
    variables ``slots`` reaches ``N`` (series coefficients).
    """
    d = t.degree(i)
    if d < 0:
        raise ZeroDivisionError("division by zero polynomial")
    if p.degree(i) < d:
        return p
    n = t.order.n
    unit = [0] * n
    unit[i] = d
    lead = tuple(unit)
    if t.terms.get(lead) != 1 or any(e[i] == d for e in t.terms if e != lead):
        raise ValueError("divisor is not monic in its leader")
    tail = [(e, c) for e, c in t.terms.items() if e != lead]
    layers: Dict[int, Dict[tuple, Fraction]] = defaultdict(dict)
    for e, c in p.terms.items():
        layers[e[i]][e] = c
    top = max(layers)
    for k in range(top, d - 1, -1):
        layer = layers.pop(k, None)
        if not layer:
            continue
        for e, c in layer.items():
            base = list(e)
            base[i] -= d
            for te, tc in tail:
                ne = tuple([a + b for a, b in zip(base, te)])
                if trunc is not None and sum(ne[j] for j in trunc[0]) >= trunc[1]:
                    continue
                bucket = layers[ne[i]]
                v = bucket.get(ne, 0) - c * tc
                if v:
                    bucket[ne] = v
                else:
                    bucket.pop(ne, None)
    out = {}
    for layer in layers.values():
        out.update(layer)
    return MultiPoly(p.order, out, _clean=True)


def nf(p: MultiPoly, polys: Chain, leaders: Sequence[int], trunc=None) -> MultiPoly:
    """Normal form of ``p`` modulo a monic chain (top level first)."""
    for k in range(len(polys) - 1, -1, -1):
        if p.is_zero():
            return p
        p = rem_monic(p, polys[k], leaders[k], trunc)
    return p


def level_of(p: MultiPoly, leaders: Sequence[int], upto: Optional[int] = None) -> int:
    """Highest level whose leader occurs in ``p``; -1 if none does."""
    top = len(leaders) if upto is None else upto
    used = p.variables()
    lvl = -1
    for k in range(top):
        if leaders[k] in used:
            lvl = k
    return lvl


def basis(polys: Chain, leaders: Sequence[int], n: int) -> List[tuple]:
    """Standard monomials of the quotient algebra."""
    degs = [t.degree(z) for t, z in zip(polys, leaders)]
    out = []
    for combo in product(*[range(d) for d in degs]):
        e = [0] * n
        for z, a in zip(leaders, combo):
            e[z] = a
        out.append(tuple(e))
    return out


def coordinates(p: MultiPoly, index: Dict[tuple, int]) -> List[Fraction]:
    v = [Fraction(0)] * len(index)
    for e, c in p.terms.items():
        v[index[e]] = c
    return v


def inverse(c: MultiPoly, polys: Chain, leaders: Sequence[int]) -> Optional[MultiPoly]:
    """Inverse of ``c`` in ``Q[z]/(chain)``, or None if ``c`` is a zero divisor."""
    c = nf(c, polys, leaders)
    if c.is_zero():
        return None
    if c.is_constant():
        return MultiPoly.const(c.order, 1 / c.constant_value())
    order = c.order
    bs = basis(polys, leaders, order.n)
    index = {e: j for j, e in enumerate(bs)}
    cols = [coordinates(nf(c.mul_monomial(e), polys, leaders), index) for e in bs]
    mat = [[cols[j][i] for j in range(len(bs))] for i in range(len(bs))]
    rhs = [Fraction(0)] * len(bs)
    rhs[index[(0,) * order.n]] = Fraction(1)
    x = solve(mat, rhs)
    if x is None:
        return None
    inv = MultiPoly(order, {e: v for e, v in zip(bs, x) if v}, _clean=True)
    if nf(inv * c, polys, leaders) != 1:
        return None
    return inv


def _lead_split(p: MultiPoly, z: int):
    d = p.degree(z)
    c = p.lc(z)
    e = [0] * p.order.n
    e[z] = d
    return d, c, p - c.mul_monomial(tuple(e))


def _monic_split(b: MultiPoly, z: int, low: Chain, leaders):
    """Branches of ``low`` on which ``b`` is zero (None) or a monic polynomial."""
    b = nf(b, low, leaders)
    if b.is_zero():
        return [(low, None)]
    d, c, rest = _lead_split(b, z)
    if c.is_constant():
        return [(low, b.scale(1 / c.constant_value()))]
    out = []
    for low1, is_zero in _regularize(c, low, leaders):
        if is_zero:
            out.extend(_monic_split(rest, z, low1, leaders))
        else:
            inv = inverse(c, low1, leaders)
            if inv is None:
                raise ArithmeticError("invertible branch without an inverse")
            out.append((low1, nf(b * inv, low1, leaders)))
    return out


def _regular_gcd(a: MultiPoly, b: MultiPoly, z: int, low: Chain, leaders):
    """Gcd in ``z`` of monic ``a`` and ``b`` over each branch of ``low``."""
    out = []
    for low1, bb in _monic_split(b, z, low, leaders):
        a1 = nf(a, low1, leaders)
        if bb is None:
            out.append((low1, a1))
        elif bb.degree(z) <= 0:
            out.append((low1, MultiPoly.const(a.order, 1)))
        else:
            r = nf(rem_monic(a1, bb, z), low1, leaders)
            out.extend(_regular_gcd(bb, r, z, low1, leaders))
    return out


def _quo_monic(t: MultiPoly, g: MultiPoly, z: int, low: Chain, leaders) -> MultiPoly:
    order = t.order
    dg = g.degree(z)
    q = MultiPoly.zero(order)
    r = t
    while r.degree(z) >= dg:
        dr, c, _ = _lead_split(r, z)
        e = [0] * order.n
        e[z] = dr - dg
        term = c.mul_monomial(tuple(e))
        q = q + term
        r = nf(r - term * g, low, leaders)
    if not r.is_zero():
        raise ArithmeticError("gcd does not divide the chain element")
    return nf(q, low, leaders)


def _extend(base: Chain, upper: Sequence[MultiPoly], leaders) -> Chain:
    chain = base
    for u in upper:
        chain = chain + (nf(u, chain, leaders),)
    return chain


def _regularize(p: MultiPoly, polys: Chain, leaders) -> List[Tuple[Chain, bool]]:
    p = nf(p, polys, leaders)
    if p.is_zero():
        return [(polys, True)]
    k = level_of(p, leaders, len(polys))
    if k < 0:
        return [(polys, False)]
    z = leaders[k]
    low, tk, upper = polys[:k], polys[k], polys[k + 1:]
    out = []
    for low1, g in _regular_gcd(tk, p, z, low, leaders):
        tk1 = nf(tk, low1, leaders)
        dg, dt = g.degree(z), tk1.degree(z)
        if dg <= 0:
            pieces = [(low1 + (tk1,), False)]
        elif dg == dt:
            pieces = [(low1 + (tk1,), True)]
        else:
            q = _quo_monic(tk1, g, z, low1, leaders)
            pieces = [(low1 + (g,), True), (low1 + (q,), False)]
        for base, verdict in pieces:
            out.append((_extend(base, upper, leaders), verdict))
    return out


def _check_fiber_chain(chain: TriangularSet):
    free = set(chain.free_vars)
    for g in chain.polys:
        if free & set(g.variables()):
            raise ValueError(f"{g} involves a free variable; specialize first")


def _monicize(polys: Sequence[MultiPoly], leaders) -> Chain:
    out: Chain = ()
    for t, z in zip(polys, leaders):
        t = nf(t, out, leaders)
        if t.degree(z) < 1:
            raise ValueError("chain element vanishes or degenerates modulo the lower chain")
        c = t.lc(z)
        inv = inverse(c, out, leaders)
        if inv is None:
            raise ValueError("initial is a zero divisor modulo the lower chain")
        out = out + (nf(t * inv, out, leaders),)
    return out


def monic_form(chain: TriangularSet) -> TriangularSet:
    """The monic reduced chain with the same zero set (zero-dimensional, over Q)."""
    _check_fiber_chain(chain)
    return TriangularSet(chain.order, _monicize(chain.polys, chain.leaders), chain.leaders)


def regularize(p: MultiPoly, chain: TriangularSet) -> List[Tuple[TriangularSet, str]]:
    """Split ``chain`` into branches where ``p`` is zero or invertible.

    ``chain`` is a squarefree zero-dimensional chain over Q (free variables
    already specialized).  Branch chains come back in monic reduced form.
    """
    _check_fiber_chain(chain)
    leaders = chain.leaders
    polys = _monicize(chain.polys, leaders)
    return [
        (TriangularSet(chain.order, c, leaders), "zero" if z else "invertible")
        for c, z in _regularize(p, polys, leaders)
    ]


# fiber systems


@dataclass
class FiberSystem:
    univariate_parts: List[MultiPoly]
    constraints: List[MultiPoly] = field(default_factory=list)
    leaders: Optional[List[int]] = None

    def __post_init__(self):
        if not self.univariate_parts:
            raise ValueError("a fiber system needs at least one univariate part")
        order = self.univariate_parts[0].order
        if self.leaders is None:
            self.leaders = []
            for u in self.univariate_parts:
                vs = u.variables()
                if len(vs) != 1:
                    raise ValueError(f"univariate part {u} must involve exactly one variable")
                self.leaders.append(vs[0])
        self.leaders = [order.resolve(v) for v in self.leaders]
        if len(self.leaders) != len(self.univariate_parts):
            raise ValueError("one leader per univariate part")
        for u, z in zip(self.univariate_parts, self.leaders):
            if u.is_zero():
                raise ValueError("univariate part is zero")
            if u.degree(z) < 1 or set(u.variables()) != {z}:
                raise ValueError(f"{u} is not a nonconstant polynomial in {order.names[z]} alone")

    @property
    def order(self) -> VarOrder:
        return self.univariate_parts[0].order


def _fiber_chain(sys: FiberSystem) -> Chain:
    return tuple(u.scale(1 / u.lc(z).constant_value()) for u, z in zip(sys.univariate_parts, sys.leaders))


def _triangularize(sys: FiberSystem) -> List[Chain]:
    leaders = tuple(sys.leaders)
    chains = [_fiber_chain(sys)]
    for p in sys.constraints:
        nxt = []
        for c in chains:
            nxt.extend(b for b, z in _regularize(p, c, leaders) if z)
        chains = nxt
        if not chains:
            break
    return chains


def triangularize_fiber(sys: FiberSystem) -> List[RegularChainRecord]:
    """Pairwise disjoint monic chains covering the solutions of ``sys``."""
    leaders = tuple(sys.leaders)
    return [
        RegularChainRecord(TriangularSet(sys.order, c, leaders), SQUAREFREE_REGULAR, "fiber")
        for c in _triangularize(sys)
    ]


# equiprojectable decomposition


@dataclass(frozen=True)
class EquiprojComponent:
    chain: RegularChainRecord
    fiber_profile: Tuple[int, ...]

    def key(self):
        return (self.fiber_profile, tuple(g.sort_key() for g in self.chain.chain.polys))


def _split_by(a: Chain, b: Chain, leaders):
    """``(Z(a) inside Z(b), Z(a) outside Z(b))`` as lists of chains."""
    inside = [a]
    outside = []
    for g in b:
        nxt = []
        for c in inside:
            for c1, z in _regularize(g, c, leaders):
                (nxt if z else outside).append(c1)
        inside = nxt
        if not inside:
            break
    return inside, outside


def _refine(chains: Sequence[Chain], leaders):
    """Disjoint cells, each with the set of input indices that contain it."""
    cells: List[Tuple[Chain, frozenset]] = []
    for i, ch in enumerate(chains):
        leftovers = [ch]
        nxt = []
        for cell, members in cells:
            inside, outside = _split_by(cell, ch, leaders)
            nxt.extend((c, members | {i}) for c in inside)
            nxt.extend((c, members) for c in outside)
            rest = []
            for piece in leftovers:
                rest.extend(_split_by(piece, cell, leaders)[1])
            leftovers = rest
        nxt.extend((c, frozenset([i])) for c in leftovers)
        cells = nxt
    return cells


def _component_key(c: Chain):
    return tuple(g.sort_key() for g in c)


def _crt(target: Chain, pieces: Sequence[Tuple[Chain, MultiPoly]], z: int, deg: int, leaders):
    """Top polynomial over ``target`` agreeing with each piece's polynomial."""
    k = len(target)
    lead = leaders[:k]
    order = pieces[0][1].order
    if len(pieces) == 1 and pieces[0][0] == target:
        return nf(pieces[0][1], target, lead)
    bs = basis(target, lead, order.n)
    rows: List[List[Fraction]] = []
    rhs_rows: List[List[Fraction]] = []
    coeff_maps = []
    for piece, top in pieces:
        pb = basis(piece, lead, order.n)
        pidx = {e: j for j, e in enumerate(pb)}
        images = [coordinates(nf(MultiPoly(order, {e: Fraction(1)}, _clean=True), piece, lead), pidx) for e in bs]
        for r in range(len(pb)):
            rows.append([images[j][r] for j in range(len(bs))])
        top = nf(top, piece, lead)
        cs = top.coefficients_in(z)
        coeff_maps.append((pidx, cs, len(pb)))
    if len(rows) != len(bs):
        raise ArithmeticError("pieces do not partition the target chain")
    out = MultiPoly.zero(order)
    for j in range(deg + 1):
        rhs = []
        for pidx, cs, size in coeff_maps:
            c = cs.get(j)
            rhs.extend(coordinates(c, pidx) if c is not None else [Fraction(0)] * size)
        if not any(rhs):
            continue
        x = solve(rows, rhs)
        if x is None:
            raise ArithmeticError("Chinese remaindering failed")
        e = [0] * order.n
        e[z] = j
        coeff = MultiPoly(order, {b: v for b, v in zip(bs, x) if v}, _clean=True)
        out = out + coeff.mul_monomial(tuple(e))
    return out


def _equiproj(chains: Sequence[Chain], leaders) -> List[Tuple[Chain, Tuple[int, ...]]]:
    if not chains:
        return []
    m = len(chains[0])
    order = chains[0][0].order
    z = leaders[m - 1]
    if m == 1:
        top = MultiPoly.const(order, 1)
        for c in chains:
            g = poly_gcd(top, c[0])
            if not g.is_constant():
                raise SharedPointError("input chains share a point")
            top = top * c[0]
        return [((top,), (top.degree(z),))]
    lowers = [c[:-1] for c in chains]
    cells = _refine(lowers, leaders)
    by_count: Dict[int, List[Tuple[Chain, MultiPoly]]] = defaultdict(list)
    for cell, members in cells:
        tops = [nf(chains[i][-1], cell, leaders) for i in sorted(members)]
        fiber = tops[0]
        for t in tops[1:]:
            for _, g in _regular_gcd(fiber, t, z, cell, leaders):
                if g.degree(z) > 0:
                    raise SharedPointError("input chains share a point")
            fiber = nf(fiber * t, cell, leaders)
        by_count[fiber.degree(z)].append((cell, fiber))
    out = []
    for count in sorted(by_count):
        group = by_count[count]
        lower_parts = _equiproj([c for c, _ in group], leaders)
        for low, profile in lower_parts:
            pieces = []
            for cell, fiber in group:
                inside, _ = _split_by(low, cell, leaders)
                pieces.extend((p, fiber) for p in inside)
            top = _crt(low, pieces, z, count, leaders)
            out.append((low + (top,), profile + (count,)))
    out.sort(key=lambda cp: (cp[1], _component_key(cp[0])))
    return out


def equiprojectable_decomposition(chains: Sequence) -> List[EquiprojComponent]:
    """Canonical equiprojectable decomposition of a union of disjoint chains.

    Accepts TriangularSets or RegularChainRecords sharing one leader order.
    Components are sorted by fiber profile (level 1 first).
    """
    sets = [c.chain if isinstance(c, RegularChainRecord) else c for c in chains]
    if not sets:
        return []
    leaders = sets[0].leaders
    order = sets[0].order
    for s in sets:
        if s.leaders != leaders:
            raise ValueError("all chains must share the leader order")
        _check_fiber_chain(s)
    mon = [_monicize(s.polys, leaders) for s in sets]
    comps = _equiproj(mon, leaders)
    return [
        EquiprojComponent(
            RegularChainRecord(TriangularSet(order, c, leaders), SQUAREFREE_REGULAR, "equiprojectable"),
            prof,
        )
        for c, prof in comps
    ]


def decompose_fiber(sys: FiberSystem) -> List[EquiprojComponent]:
    """Triangularize and then decompose into equiprojectable components."""
    leaders = tuple(sys.leaders)
    chains = _triangularize(sys)
    comps = _equiproj(chains, leaders)
    return [
        EquiprojComponent(
            RegularChainRecord(TriangularSet(sys.order, c, leaders), SQUAREFREE_REGULAR, "equiprojectable"),
            prof,
        )
        for c, prof in comps
    ]


# numeric oracle


def _mpf(q: Fraction):
    return mpmath.mpf(q.numerator) / q.denominator


def _roots(u: MultiPoly, z: int, dps: int):
    cs = u.coefficients_in(z)
    d = max(cs)
    coeffs = [_mpf(cs[k].constant_value()) if k in cs else mpmath.mpf(0) for k in range(d, -1, -1)]
    if d == 1:
        return [-coeffs[1] / coeffs[0]]
    for steps, extra in ((100, 20), (400, 60), (2000, 200)):
        try:
            return list(mpmath.polyroots(coeffs, maxsteps=steps, extraprec=extra))
        except mpmath.libmp.NoConvergence:
            continue
    raise NumericOracleError(f"root finding did not converge for {u}")


def _relative_residual(p: MultiPoly, point) -> mpmath.mpf:
    """``|p(point)|`` scaled by the coefficient norm weighted with ``max(1, |x_i|)``.

    A purely relative residual misbehaves at roots that are numerically
    zero, where every term is tiny.
    """
    val = mpmath.mpc(0)
    scale = mpmath.mpf(0)
    for e, c in p.terms.items():
        t = _mpf(c)
        w = abs(t)
        for i, a in enumerate(e):
            if a:
                t = t * point[i] ** a
                w = w * max(1, abs(point[i])) ** a
        val += t
        scale += w
    if scale == 0:
        return mpmath.mpf(0)
    return abs(val) / scale


def _oracle_points(sys: FiberSystem, dps: int, tol: float, band: Tuple[float, float]):
    order = sys.order
    with mpmath.workdps(dps):
        roots = [_roots(u, z, dps) for u, z in zip(sys.univariate_parts, sys.leaders)]
        for rs in roots:
            for a in range(len(rs)):
                for b in range(a):
                    if abs(rs[a] - rs[b]) < tol * max(1, abs(rs[a])):
                        return None, roots
        kept = []
        for idx in product(*[range(len(r)) for r in roots]):
            point = [mpmath.mpc(0)] * order.n
            for z, r, j in zip(sys.leaders, roots, idx):
                point[z] = r[j]
            ok = True
            for p in sys.constraints:
                res = _relative_residual(p, point)
                if band[0] < res < band[1]:
                    return None, roots
                if res > tol:
                    ok = False
                    break
            if ok:
                kept.append(idx)
        return kept, roots


def _profiles(points: Sequence[tuple], m: int) -> Dict[tuple, Tuple[int, ...]]:
    if m == 0:
        return {p: () for p in points}
    counts: Dict[tuple, int] = defaultdict(int)
    for p in points:
        counts[p[: m - 1]] += 1
    groups: Dict[int, List[tuple]] = defaultdict(list)
    for p in points:
        groups[counts[p[: m - 1]]].append(p)
    out = {}
    for c, pts in groups.items():
        proj = sorted({p[: m - 1] for p in pts})
        sub = _profiles(proj, m - 1)
        for p in pts:
            out[p] = sub[p[: m - 1]] + (c,)
    return out


def numeric_fiber_oracle(sys: FiberSystem) -> List[Tuple[List[complex], Tuple[int, ...]]]:
    """Solutions of ``sys`` with their fiber-count profiles, found numerically.

    Works at 30 digits with relative tolerance 1e-9 and retries once at 60
    digits with 1e-15 when a residual or root separation is ambiguous.
    """
    m = len(sys.leaders)
    for dps, tol, band in ((30, 1e-9, (1e-20, 1e-5)), (60, 1e-15, (1e-45, 1e-10))):
        kept, roots = _oracle_points(sys, dps, tol, band)
        if kept is not None:
            break
    else:
        raise NumericOracleError("ambiguous residuals or clustered roots at the highest precision")
    prof = _profiles(kept, m)
    out = []
    for idx in sorted(kept):
        pt = [complex(roots[k][j]) for k, j in enumerate(idx)]
        out.append((pt, prof[idx]))
    return out


__all__ = [
    "FiberSystem",
    "EquiprojComponent",
    "SharedPointError",
    "NumericOracleError",
    "regularize",
    "triangularize_fiber",
    "equiprojectable_decomposition",
    "decompose_fiber",
    "numeric_fiber_oracle",
    "monic_form",
    "nf",
    "rem_monic",
    "inverse",
]
