"""Elimination kernels.

* :func:`sylvester_resultant` - two polynomials, one variable, computed by
  the subresultant remainder sequence.
* :func:`macaulay_resultant` - ``m`` polynomials in ``m - 1`` eliminated
  variables, as the quotient of the Macaulay determinant by its
  extraneous minor.
* :func:`canny_pres` - the generalized characteristic polynomial trick:
  perturb by a parameter ``lam`` so that both determinants are nonzero,
  then keep the lowest nonvanishing ``lam`` coefficient.
"""
from __future__ import annotations

from itertools import combinations_with_replacement
from typing import Dict, List, Sequence, Tuple

from .linalg import lowest_shifted_coefficient, poly_det
from .poly import MultiPoly, VarOrder, exact_div, normalize, prem


class DegenerateResultant(ArithmeticError):
    """Both Macaulay determinants vanish; the input has to be perturbed."""


def sylvester_matrix(f: MultiPoly, g: MultiPoly, v) -> List[List[MultiPoly]]:
    i = f.order.resolve(v)
    a, b = f.degree(i), g.degree(i)
    fc, gc = f.coefficients_in(i), g.coefficients_in(i)
    zero = MultiPoly.zero(f.order)
    size = a + b
    rows = []
    for r in range(b):
        row = [zero] * size
        for k in range(a + 1):
            row[r + a - k] = fc.get(k, zero)
        rows.append(row)
    for r in range(a):
        row = [zero] * size
        for k in range(b + 1):
            row[r + b - k] = gc.get(k, zero)
        rows.append(row)
    return rows


def sylvester_resultant(f: MultiPoly, g: MultiPoly, v) -> MultiPoly:
    """Resultant of ``f`` and ``g`` with respect to ``v``."""
    order = f.order
    i = order.resolve(v)
    if f.degree(i) < 1 or g.degree(i) < 1:
        raise ValueError(f"both polynomials must involve {order.names[i]}")
    one = MultiPoly.const(order, 1)
    a, b = f, g
    sign = 1
    if a.degree(i) < b.degree(i):
        a, b = b, a
        if a.degree(i) % 2 and b.degree(i) % 2:
            sign = -sign
    gg = one
    h = one
    while True:
        da, db = a.degree(i), b.degree(i)
        delta = da - db
        if da % 2 and db % 2:
            sign = -sign
        r = prem(a, b, i)
        a = b
        if r.is_zero():
            return MultiPoly.zero(order)
        b = exact_div(r, gg * h ** delta)
        gg = a.lc(i)
        if delta == 1:
            h = gg
        elif delta > 1:
            h = exact_div(gg ** delta, h ** (delta - 1))
        if b.degree(i) < 1:
            break
    da = a.degree(i)
    if da == 1:
        h = b
    else:
        h = exact_div(b ** da, h ** (da - 1))
    return -h if sign < 0 else h


def _homogeneous_monomials(nvars: int, degree: int) -> List[Tuple[int, ...]]:
    out = []
    for combo in combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for c in combo:
            e[c] += 1
        out.append(tuple(e))
    out.sort(reverse=True)
    return out


def _macaulay_blocks(polys: Sequence[MultiPoly], elim: Tuple[int, ...]):
    """Homogenized coefficient maps and degrees.

    Homogeneous slot 0 is the homogenizing variable; slot ``k + 1`` is
    ``elim[k]``.  Polynomial ``k`` is paired with slot ``k + 1`` for
    ``k < m - 1``, the last one with slot 0.
    """
    m = len(polys)
    degs = []
    coeffs = []
    for f in polys:
        block = f.coefficients_block(elim)
        d = max(sum(e) for e in block)
        degs.append(d)
        coeffs.append({(d - sum(e),) + e: c for e, c in block.items()})
    pair = [k + 1 for k in range(m - 1)] + [0]
    return degs, coeffs, pair


def _macaulay_matrices(polys, elim):
    m = len(polys)
    degs, coeffs, pair = _macaulay_blocks(polys, elim)
    order = polys[0].order
    deg = sum(d - 1 for d in degs) + 1
    monos = _homogeneous_monomials(m, deg)
    col = {e: j for j, e in enumerate(monos)}
    zero = MultiPoly.zero(order)
    rows = []
    reduced = []
    for e in monos:
        owners = [k for k in range(m) if e[pair[k]] >= degs[k]]
        k = owners[0]
        reduced.append(len(owners) == 1)
        shift = list(e)
        shift[pair[k]] -= degs[k]
        row = [zero] * len(monos)
        for ce, c in coeffs[k].items():
            row[col[tuple(a + b for a, b in zip(ce, shift))]] = c
        rows.append(row)
    keep = [j for j in range(len(monos)) if not reduced[j]]
    minor = [[rows[r][c] for c in keep] for r in keep]
    return rows, minor, degs


def _zero_degree_case(polys, degs, order):
    k = degs.index(0)
    c = polys[k]
    e = 1
    for j, d in enumerate(degs):
        if j != k:
            e *= d
    return c ** e


def _check_args(polys, elim_vars):
    polys = list(polys)
    if len(polys) < 2:
        raise ValueError("need at least two polynomials")
    order = polys[0].order
    elim = tuple(sorted(order.resolve(v) for v in elim_vars))
    if len(elim) != len(polys) - 1 or len(set(elim)) != len(elim):
        raise ValueError("need exactly one eliminated variable fewer than polynomials")
    for f in polys:
        if f.is_zero():
            raise ValueError("zero polynomial in resultant input")
        if f.order != order:
            raise ValueError("mixed variable orders")
    return polys, order, elim


def macaulay_resultant(polys: Sequence[MultiPoly], elim_vars) -> MultiPoly:
    """Resultant of the homogenizations of ``polys`` in ``elim_vars``."""
    polys, order, elim = _check_args(polys, elim_vars)
    degs = [f.degree_in(elim) for f in polys]
    if 0 in degs:
        return _zero_degree_case(polys, degs, order)
    rows, minor, _ = _macaulay_matrices(polys, elim)
    den = poly_det(minor, order)
    if den.is_zero():
        raise DegenerateResultant("extraneous Macaulay minor vanishes identically")
    num = poly_det(rows, order)
    if num.is_zero():
        return num
    return exact_div(num, den)


def canny_pres(polys: Sequence[MultiPoly], elim_vars) -> MultiPoly:
    """Perturbed generalized resultant, normalized.

    With one polynomial and nothing to eliminate this is the polynomial
    itself.  Otherwise each ``f_k`` becomes ``f_k - lam * x_k^{d_k}`` (the
    last one ``f_m - lam``), the Macaulay quotient is formed over
    ``Q[lam, rest]`` and its lowest nonzero ``lam`` coefficient returned.
    """
    polys = list(polys)
    if len(polys) == 1:
        if list(elim_vars):
            raise ValueError("a single polynomial admits no eliminated variables")
        if polys[0].is_zero():
            raise ValueError("zero polynomial in resultant input")
        return normalize(polys[0])
    polys, order, elim = _check_args(polys, elim_vars)
    degs = [f.degree_in(elim) for f in polys]
    if 0 in degs:
        return normalize(_zero_degree_case(polys, degs, order))
    # when the unperturbed determinants survive, lam^0 is the lowest term
    rows0, minor0, _ = _macaulay_matrices(polys, elim)
    num0 = poly_det(rows0, order)
    if not num0.is_zero():
        den0 = poly_det(minor0, order)
        if not den0.is_zero():
            return normalize(exact_div(num0, den0))
    # otherwise every row of the matrix carries -lam on its diagonal entry
    kn, cn = lowest_shifted_coefficient(rows0, order)
    if not minor0:
        return normalize(cn)
    kd, cd = lowest_shifted_coefficient(minor0, order)
    if kd > kn:
        raise ArithmeticError("perturbed quotient is not a polynomial in lam")
    return normalize(exact_div(cn, cd))


def cover_degree_bound(num_polys: int, max_degree: int) -> int:
    """``m * D^m`` for ``m`` polynomials of degree at most ``D``."""
    return num_polys * max_degree ** num_polys
