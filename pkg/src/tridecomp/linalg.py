"""Exact linear algebra: fraction-free determinants and rational solves."""
from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import isqrt, lcm
from typing import Dict, List, Optional, Sequence, Tuple

import gmpy2
import numpy as np
from scipy.optimize import linear_sum_assignment

from .poly import MultiPoly, exact_div


def _is_zero(x) -> bool:
    if isinstance(x, MultiPoly):
        return x.is_zero()
    return x == 0


def _size(x) -> int:
    if isinstance(x, MultiPoly):
        return len(x.terms)
    return 1


def bareiss_det(matrix: Sequence[Sequence], one=None):
    """Determinant by fraction-free (Bareiss) elimination.

    Entries may be ints, Fractions or MultiPolys of one order.  Every
    division performed is exact.  Pivots are chosen among nonzero entries
    of the current column, preferring the sparsest.
    """
    n = len(matrix)
    if n == 0:
        return one if one is not None else 1
    a = [list(row) for row in matrix]
    for row in a:
        if len(row) != n:
            raise ValueError("matrix is not square")
    poly = any(isinstance(x, MultiPoly) for row in a for x in row)
    if poly:
        order = next(x.order for row in a for x in row if isinstance(x, MultiPoly))
        a = [[x if isinstance(x, MultiPoly) else MultiPoly.const(order, x) for x in row] for row in a]
        prev = MultiPoly.const(order, 1)
        div = exact_div
    else:
        a = [[Fraction(x) for x in row] for row in a]
        prev = Fraction(1)
        div = lambda p, q: p / q  # noqa: E731
    sign = 1
    for k in range(n - 1):
        piv = None
        best = None
        for r in range(k, n):
            if not _is_zero(a[r][k]):
                s = _size(a[r][k])
                if best is None or s < best:
                    piv, best = r, s
                    if s == 1:
                        break
        if piv is None:
            return MultiPoly.zero(order) if poly else Fraction(0)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        akk = a[k][k]
        rowk = a[k]
        for i in range(k + 1, n):
            rowi = a[i]
            aik = rowi[k]
            if _is_zero(aik):
                # row reduces to akk * row / prev
                for j in range(k + 1, n):
                    if not _is_zero(rowi[j]):
                        rowi[j] = div(akk * rowi[j], prev)
            else:
                for j in range(k + 1, n):
                    t = akk * rowi[j]
                    if not _is_zero(rowk[j]):
                        t = t - aik * rowk[j]
                    rowi[j] = div(t, prev) if not _is_zero(t) else t
            rowi[k] = rowi[k] * 0
        prev = akk
    d = a[n - 1][n - 1]
    return -d if sign < 0 else d


def integer_det(matrix: Sequence[Sequence[int]]) -> int:
    """Bareiss elimination on an integer matrix (consumed in place)."""
    a = matrix
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            piv = next((r for r in range(k + 1, n) if a[r][k]), None)
            if piv is None:
                return 0
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        akk = a[k][k]
        rowk = a[k]
        for i in range(k + 1, n):
            rowi = a[i]
            aik = rowi[k]
            if aik:
                for j in range(k + 1, n):
                    rowi[j] = (akk * rowi[j] - aik * rowk[j]) // prev
            else:
                for j in range(k + 1, n):
                    if rowi[j]:
                        rowi[j] = akk * rowi[j] // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def _newton_to_monomial(values: List[Fraction]) -> List[Fraction]:
    """Coefficients of the polynomial taking ``values[t]`` at ``t = 0, 1, ...``."""
    m = len(values)
    dd = list(values)
    for level in range(1, m):
        for t in range(m - 1, level - 1, -1):
            dd[t] = (dd[t] - dd[t - 1]) / level
    coeffs = [Fraction(0)] * m
    for k in range(m - 1, -1, -1):
        # coeffs = coeffs * (x - k) + dd[k]
        for j in range(m - 1, 0, -1):
            coeffs[j] = coeffs[j - 1] - k * coeffs[j]
        coeffs[0] = -k * coeffs[0] + dd[k]
    return coeffs


def _degree_bounds(a, nvars: int, shifted: bool = False) -> Optional[List[int]]:
    """Per-variable degree bounds for the determinant.

    The bound for ``v`` is the best assignment of ``deg_v`` entries, which
    dominates every term of the Leibniz expansion.  ``shifted`` accounts
    for a ``-lam`` on the diagonal.  None means no permutation avoids a
    zero entry, so the determinant vanishes.
    """
    n = len(a)
    missing = -(n * max((x.total_degree() for row in a for x in row if not x.is_zero()), default=0) + 1)
    bounds = []
    for v in range(nvars):
        w = np.full((n, n), missing, dtype=np.int64)
        for i, row in enumerate(a):
            for j, x in enumerate(row):
                if not x.is_zero():
                    w[i, j] = x.degree(v)
            if shifted:
                w[i, i] = max(w[i, i], 0)
        rows, cols = linear_sum_assignment(w, maximize=True)
        picked = w[rows, cols]
        if (picked == missing).any():
            return None
        bounds.append(int(picked.sum()))
    return bounds


def poly_det(matrix: Sequence[Sequence[MultiPoly]], order) -> MultiPoly:
    """Determinant of a polynomial matrix.

    Small matrices go through polynomial Bareiss.  Larger ones are
    evaluated on an integer grid sized by per-variable degree bounds,
    each evaluation is an integer Bareiss determinant, and the result is
    recovered by tensor Newton interpolation.  Both routes are exact.
    """
    n = len(matrix)
    if n == 0:
        return MultiPoly.const(order, 1)
    a = [[x if isinstance(x, MultiPoly) else MultiPoly.const(order, x) for x in row] for row in matrix]
    if n <= 8:
        return bareiss_det(a)
    scale = Fraction(1)
    rows_int = []
    for row in a:
        den = 1
        for x in row:
            for c in x.terms.values():
                den = lcm(den, c.denominator)
        scale *= den
        rows_int.append([{e: int(c * den) for e, c in x.terms.items()} for x in row])
    bounds = _degree_bounds(a, order.n)
    if bounds is None:
        return MultiPoly.zero(order)
    live = [v for v in range(order.n) if bounds[v] > 0]
    grid: Dict[Tuple[int, ...], Fraction] = {}
    for idx in product(*(range(bounds[v] + 1) for v in live)):
        point = [0] * order.n
        for v, t in zip(live, idx):
            point[v] = t
        m = []
        for row in rows_int:
            out = []
            for terms in row:
                total = 0
                for e, c in terms.items():
                    for i, k in enumerate(e):
                        if k:
                            c *= point[i] ** k
                    total += c
                out.append(total)
            m.append(out)
        grid[idx] = Fraction(integer_det(m))
    out = _interpolate_grid(grid, live, bounds, order)
    return out.scale(1 / scale) if scale != 1 else out


# Mersenne prime exponents; one prime above the coefficient bound suffices
_MERSENNE = (61, 89, 107, 127, 521, 607, 1279, 2203, 2281, 3217, 4253, 4423, 9689, 9941, 11213, 19937)


def _hessenberg_charpoly(h: List[list], p: Optional[int]) -> list:
    """Hessenberg reduction then the usual recurrence; mod ``p`` or over Q."""
    n = len(h)
    inv = (lambda t: pow(t, -1, p)) if p else (lambda t: 1 / t)
    red = (lambda x: x % p) if p else (lambda x: x)
    for m in range(1, n - 1):
        i = next((r for r in range(m, n) if h[r][m - 1]), None)
        if i is None:
            continue
        if i != m:
            h[i], h[m] = h[m], h[i]
            for row in h:
                row[i], row[m] = row[m], row[i]
        tinv = inv(h[m][m - 1])
        hm = h[m]
        for i in range(m + 1, n):
            u = red(h[i][m - 1] * tinv)
            if not u:
                continue
            hi = h[i]
            h[i] = [red(x - u * y) for x, y in zip(hi, hm)]
            for row in h:
                if row[i]:
                    row[m] = red(row[m] + u * row[i])
    polys = [[1]]
    for m in range(n):
        prev = polys[m]
        new = [0] + prev
        d = h[m][m]
        for k, c in enumerate(prev):
            new[k] = red(new[k] - d * c)
        t = 1
        for i in range(m - 1, -1, -1):
            t = red(t * h[i + 1][i])
            if not t:
                break
            w = red(h[i][m] * t)
            if w:
                for k, c in enumerate(polys[i]):
                    new[k] = red(new[k] - w * c)
        polys.append(new)
    return polys[n]


def charpoly(matrix: Sequence[Sequence]) -> List[Fraction]:
    """Coefficients, constant first, of ``det(x*I - M)`` for a rational matrix.

    The matrix is scaled to integers and the characteristic polynomial is
    computed modulo a Mersenne prime exceeding twice a Hadamard-type bound
    on its coefficients, which recovers them exactly.
    """
    n = len(matrix)
    a = [[Fraction(x) for x in row] for row in matrix]
    den = 1
    for row in a:
        for x in row:
            den = lcm(den, x.denominator)
    ints = [[int(x * den) for x in row] for row in a]
    # |c_k| <= C(n, k) * prod of row norms, summed over k
    bound = 2 ** n
    for row in ints:
        bound *= max(1, isqrt(sum(x * x for x in row)) + 1)
    bits = (2 * bound).bit_length()
    e = next((e for e in _MERSENNE if e > bits), None)
    if e is None:
        cp = _hessenberg_charpoly([list(map(Fraction, row)) for row in ints], None)
        cp = [Fraction(c) for c in cp]
    else:
        p = gmpy2.mpz(2) ** e - 1
        mat = [[gmpy2.mpz(x) for x in row] for row in ints]
        cp = [int(c - p if c > p // 2 else c) for c in _hessenberg_charpoly(mat, p)]
    # undo the scaling: c_k(den * M) = den^(n-k) * c_k(M)
    return [Fraction(c, den ** (n - k)) for k, c in enumerate(cp)]


def lowest_shifted_coefficient(matrix: Sequence[Sequence[MultiPoly]], order) -> Tuple[int, MultiPoly]:
    """Lowest nonzero ``lam`` coefficient of ``det(M - lam*I)``.

    ``M`` has polynomial entries.  Each point of an integer grid sized by
    degree bounds contributes one characteristic polynomial, and the
    wanted coefficient is interpolated from those.
    """
    n = len(matrix)
    if n == 0:
        return 0, MultiPoly.const(order, 1)
    a = [[x if isinstance(x, MultiPoly) else MultiPoly.const(order, x) for x in row] for row in matrix]
    bounds = _degree_bounds(a, order.n, shifted=True)
    live = [v for v in range(order.n) if bounds[v] > 0]
    sign = -1 if n % 2 else 1
    samples = {}
    for idx in product(*(range(bounds[v] + 1) for v in live)):
        point = [Fraction(0)] * order.n
        for v, t in zip(live, idx):
            point[v] = Fraction(t)
        samples[idx] = charpoly([[x.evaluate(point) for x in row] for row in a])
    k = next(
        (k for k in range(n + 1) if any(cp[k] for cp in samples.values())),
        None,
    )
    if k is None:  # pragma: no cover - the x^n coefficient is 1
        raise ArithmeticError("characteristic polynomial vanished")
    grid = {idx: sign * cp[k] for idx, cp in samples.items()}
    return k, _interpolate_grid(grid, live, bounds, order)


def _interpolate_grid(grid, live, bounds, order) -> MultiPoly:
    for pos, v in enumerate(live):
        groups: Dict[Tuple[int, ...], List[Fraction]] = {}
        for idx, val in grid.items():
            key = idx[:pos] + idx[pos + 1:]
            groups.setdefault(key, [Fraction(0)] * (bounds[v] + 1))[idx[pos]] = val
        grid = {}
        for key, vals in groups.items():
            for k, c in enumerate(_newton_to_monomial(vals)):
                if c:
                    grid[key[:pos] + (k,) + key[pos:]] = c
    terms = {}
    for idx, c in grid.items():
        e = [0] * order.n
        for v, k in zip(live, idx):
            e[v] = k
        terms[tuple(e)] = c
    return MultiPoly(order, terms)


def rational_det(matrix: Sequence[Sequence]) -> Fraction:
    """Determinant over Q by Gaussian elimination."""
    n = len(matrix)
    a = [[Fraction(x) for x in row] for row in matrix]
    det = Fraction(1)
    for k in range(n):
        piv = next((r for r in range(k, n) if a[r][k]), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        akk = a[k][k]
        det *= akk
        inv = 1 / akk
        for i in range(k + 1, n):
            f = a[i][k]
            if f:
                f *= inv
                ri, rk = a[i], a[k]
                for j in range(k + 1, n):
                    if rk[j]:
                        ri[j] -= f * rk[j]
    return det


def row_echelon(rows: List[List[Fraction]], ncols: int):
    """Reduced row echelon form in place; returns the pivot columns."""
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        pr = rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], pr)]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return pivots


def solve(a: Sequence[Sequence], b: Sequence) -> Optional[List[Fraction]]:
    """One solution of ``a x = b`` over Q (free unknowns set to 0), or None."""
    m = len(a)
    ncols = len(a[0]) if m else 0
    rows = [[Fraction(x) for x in a[i]] + [Fraction(b[i])] for i in range(m)]
    pivots = row_echelon(rows, ncols)
    for r in range(len(pivots), m):
        if rows[r][ncols]:
            return None
    x = [Fraction(0)] * ncols
    for r, c in enumerate(pivots):
        x[c] = rows[r][ncols]
    return x


def nullspace(a: Sequence[Sequence], ncols: Optional[int] = None) -> List[List[Fraction]]:
    """Basis of the right kernel of ``a`` over Q."""
    if ncols is None:
        ncols = len(a[0])
    rows = [[Fraction(x) for x in row] for row in a]
    pivots = row_echelon(rows, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -rows[r][fc]
        basis.append(v)
    return basis


def rank(a: Sequence[Sequence]) -> int:
    if not a:
        return 0
    rows = [[Fraction(x) for x in row] for row in a]
    return len(row_echelon(rows, len(rows[0])))


def inverse(a: Sequence[Sequence]) -> Optional[List[List[Fraction]]]:
    n = len(a)
    rows = [[Fraction(x) for x in a[i]] + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    pivots = row_echelon(rows, n)
    if pivots != list(range(n)):
        return None
    return [row[n:] for row in rows]
