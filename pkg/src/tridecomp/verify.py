"""A posteriori checks of a decomposition.

The cover check has an exact half (pseudo-remainders of the input by every
chain) and two numeric halves: points sampled on each output chain must
satisfy the input, and points sampled on ``Z(f)`` must lie on some chain.
Irredundancy and the degree bounds are checked on the output alone.

Numeric parts run at 30 digits with a residual tolerance of ``1e-9`` and
are marked probabilistic in the report.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

import mpmath

from .chains import RegularChainRecord, TriangularSet, prem_chain
from .decompose import DecompositionResult, SystemInput
from .poly import MultiPoly, full_squarefree_part, specialize
from .resultants import canny_pres
from .zerodim import FiberSystem, NumericOracleError, _mpf, _relative_residual, numeric_fiber_oracle

TOL = 1e-9
DPS = 30
PASS = "PASS"
FAIL_SUSPECT = "FAIL-suspect"
SAMPLING_FAILED = "sampling-failed"


def _sampler(seed: int, label: str) -> random.Random:
    return random.Random(f"verify/{seed}/{label}")


def _draw(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-99, 99), rng.randint(1, 16))


def _fmt_point(order, point) -> Dict[str, str]:
    out = {}
    for name, z in zip(order.names, point):
        z = complex(z)
        if abs(z.imag) < 1e-12 * max(1.0, abs(z.real)):
            out[name] = f"{z.real:.12g}"
        else:
            out[name] = f"{z.real:.12g}{z.imag:+.12g}j"
    return out


def _univariate_roots(coeffs):
    """Roots of a polynomial given by ``coeffs`` (highest first), or None."""
    while len(coeffs) > 1 and coeffs[0] == 0:
        coeffs = coeffs[1:]
    if len(coeffs) == 1:
        return []
    if len(coeffs) == 2:
        return [-coeffs[1] / coeffs[0]]
    for steps, extra in ((100, 20), (400, 60)):
        try:
            return list(mpmath.polyroots(coeffs, maxsteps=steps, extraprec=extra))
        except mpmath.libmp.NoConvergence:
            continue
    return None


def _eval(p: MultiPoly, point):
    val = mpmath.mpc(0)
    for e, c in p.terms.items():
        t = _mpf(c)
        for i, a in enumerate(e):
            if a:
                t = t * point[i] ** a
        val += t
    return val


def _vanishes(p: MultiPoly, point) -> bool:
    return _relative_residual(p, point) < TOL


def chain_fiber_points(chain: TriangularSet, free_values: Dict[int, Fraction]):
    """All points of ``Z(chain)`` above ``free_values``, solved leader by leader.

    Returns None when an initial vanishes or root finding fails along the way.
    """
    order = chain.order
    with mpmath.workdps(DPS):
        start = [mpmath.mpc(0)] * order.n
        for i, v in free_values.items():
            start[i] = mpmath.mpc(_mpf(v))
        points = [start]
        for g, z in zip(chain.polys, chain.leaders):
            cs = g.coefficients_in(z)
            d = max(cs)
            nxt = []
            for pt in points:
                lead = cs[d]
                if _vanishes(lead, pt):
                    return None
                coeffs = [_eval(cs[k], pt) if k in cs else mpmath.mpc(0) for k in range(d, -1, -1)]
                roots = _univariate_roots(coeffs)
                if roots is None:
                    return None
                for r in roots:
                    q = list(pt)
                    q[z] = mpmath.mpc(r)
                    nxt.append(q)
            points = nxt
    return points


def sample_chain(chain: TriangularSet, rng: random.Random, draws: int) -> Tuple[List[list], int]:
    """Points on the quasi-component of ``chain`` from ``draws`` random free values.

    Returns the points and the number of draws that had to be discarded.
    """
    out = []
    failed = 0
    for _ in range(draws):
        vals = {i: _draw(rng) for i in chain.free_vars}
        pts = chain_fiber_points(chain, vals)
        if pts is None:
            failed += 1
            continue
        out.extend(pts)
    return out, failed


def in_quasi_component(chain: TriangularSet, point) -> bool:
    """All elements vanish at ``point`` and no initial does."""
    with mpmath.workdps(DPS):
        if not all(_vanishes(g, point) for g in chain.polys):
            return False
        return not any(_vanishes(h, point) for h in chain.initials())


def on_chain(chain: TriangularSet, point) -> bool:
    with mpmath.workdps(DPS):
        return all(_vanishes(g, point) for g in chain.polys)


def _fiber_points(inp: SystemInput, S: Tuple[int, ...], vals: Dict[int, Fraction], rng: random.Random):
    """Points of ``Z(f)`` above a random point of the complement of ``S``."""
    order = inp.order
    F = [specialize(f, vals) for f in inp.polys]
    F = [f for f in F if not f.is_zero()]
    if not F or any(f.is_constant() for f in F):
        return []
    k = len(S)
    parts = []
    for z in S:
        rest = tuple(v for v in S if v != z)
        combos = []
        for _ in range(k):
            g = MultiPoly.zero(order)
            for f in F:
                g = g + f.scale(rng.randint(1, 10 ** 6))
            combos.append(g)
        try:
            u = canny_pres(combos, rest) if rest else full_squarefree_part(combos[0])
        except (ArithmeticError, ValueError):
            return None
        if u.is_zero():
            return None
        u = full_squarefree_part(u)
        if u.is_constant():
            return []
        if set(u.variables()) != {z}:
            return None
        parts.append(u)
    try:
        sols = numeric_fiber_oracle(FiberSystem(parts, F, list(S)))
    except (NumericOracleError, ValueError):
        return None
    out = []
    for coords, _ in sols:
        pt = [mpmath.mpc(0)] * order.n
        for i, v in vals.items():
            pt[i] = mpmath.mpc(_mpf(v))
        for z, c in zip(S, coords):
            pt[z] = mpmath.mpc(c)
        out.append(pt)
    return out


def _sample_dimensions(inp: SystemInput) -> List[int]:
    if inp.equidim_parts:
        return sorted({p.d for p in inp.equidim_parts})
    if inp.s == 1:
        return [inp.n - 1]
    return list(range(inp.n))


@dataclass
class CoverCheck:
    ok: bool
    exact_ok: bool
    numeric_ok: bool
    inclusion_ok: bool
    witnesses: List[dict] = field(default_factory=list)
    points_checked: int = 0


def verify_cover(inp: SystemInput, result: DecompositionResult, samples: int = 4, seed: int = 0) -> CoverCheck:
    """Exact ``prem`` membership plus the two numeric spot checks."""
    order = inp.order
    witnesses = []
    exact_ok = True
    for i, rec in enumerate(result.chains):
        for k, f in enumerate(inp.polys):
            r = prem_chain(f, rec.chain)
            if not r.is_zero():
                exact_ok = False
                witnesses.append({"kind": "prem", "chain": i, "poly": k, "remainder": r.to_str()})
    numeric_ok = True
    checked = 0
    with mpmath.workdps(DPS):
        for i, rec in enumerate(result.chains):
            pts, _ = sample_chain(rec.chain, _sampler(seed, f"cover/{i}"), samples)
            for pt in pts:
                checked += 1
                for k, f in enumerate(inp.polys):
                    if not _vanishes(f, pt):
                        numeric_ok = False
                        witnesses.append({"kind": "sample", "chain": i, "poly": k, "point": _fmt_point(order, pt)})
                        break
        inclusion_ok = True
        rng = _sampler(seed, "inclusion")
        for d in _sample_dimensions(inp):
            for S in combinations(range(inp.n), inp.n - d):
                free = [i for i in range(inp.n) if i not in S]
                for _ in range(samples):
                    vals = {i: _draw(rng) for i in free}
                    pts = _fiber_points(inp, S, vals, rng)
                    if not pts:
                        continue
                    for pt in pts:
                        checked += 1
                        if not any(on_chain(rec.chain, pt) for rec in result.chains):
                            inclusion_ok = False
                            witnesses.append({"kind": "uncovered", "point": _fmt_point(order, pt)})
    return CoverCheck(exact_ok and numeric_ok and inclusion_ok, exact_ok, numeric_ok, inclusion_ok, witnesses, checked)


@dataclass
class PairVerdict:
    i: int
    j: int
    verdict: str
    contained_points: List[dict] = field(default_factory=list)
    sampled: int = 0


def verify_irredundant(result: DecompositionResult, samples: int = 25, seed: int = 0) -> List[PairVerdict]:
    """Per ordered pair, look for sampled points of chain ``i`` inside chain ``j``.

    Each sampled point is generic on the irreducible component it lies on,
    so a single point in the quasi-component of chain ``j`` is evidence
    that a component of chain ``i`` is contained in chain ``j``.
    """
    if samples < 10:
        raise ValueError("need at least 10 samples")
    recs = result.chains
    order = result.order
    sampled = {}
    for i, rec in enumerate(recs):
        pts, _ = sample_chain(rec.chain, _sampler(seed, f"irredundant/{i}"), samples)
        sampled[i] = pts
    out = []
    for i in range(len(recs)):
        for j in range(len(recs)):
            if i == j:
                continue
            pts = sampled[i]
            if not pts:
                out.append(PairVerdict(i, j, SAMPLING_FAILED))
                continue
            hits = [pt for pt in pts if in_quasi_component(recs[j].chain, pt)]
            # several draws over a finite fiber repeat the same points
            uniq = []
            for pt in hits:
                if not any(max(abs(a - b) for a, b in zip(pt, q)) < 1e-12 for q in uniq):
                    uniq.append(pt)
            verdict = FAIL_SUSPECT if uniq else PASS
            out.append(PairVerdict(i, j, verdict, [_fmt_point(order, p) for p in uniq], len(pts)))
    return out


@dataclass
class DegreeCheck:
    chain: int
    leader_degree_product: int
    max_free_degree: int
    max_leader_degree: int
    ok: bool


def deg_w_estimate(result: DecompositionResult) -> int:
    """Sum over chains of the product of leader degrees (an upper-bound proxy for ``deg W``)."""
    total = 0
    for rec in result.chains:
        p = 1
        for d in rec.chain.leader_degrees():
            p *= d
        total += p
    return total


def verify_degrees(result: DecompositionResult) -> Tuple[int, List[DegreeCheck]]:
    est = deg_w_estimate(result)
    checks = []
    for i, rec in enumerate(result.chains):
        ch = rec.chain
        prod = 1
        for d in ch.leader_degrees():
            prod *= d
        free = ch.free_vars
        fdeg = max(g.degree_in(free) for g in ch.polys) if free else 0
        ldeg = max(g.degree(z) for g in ch.polys for z in ch.leaders)
        ok = fdeg <= est * est and ldeg <= est and prod <= est
        checks.append(DegreeCheck(i, prod, fdeg, ldeg, ok))
    return est, checks


@dataclass
class VerificationReport:
    cover: CoverCheck
    irredundancy: List[PairVerdict]
    degree_check: List[DegreeCheck]
    deg_W_estimate: int
    seed: int = 0
    samples: int = 25

    @property
    def cover_ok(self) -> bool:
        return self.cover.ok

    @property
    def ok(self) -> bool:
        return (
            self.cover.ok
            and all(v.verdict == PASS for v in self.irredundancy)
            and all(c.ok for c in self.degree_check)
        )

    def to_json(self) -> dict:
        return {
            "format": 1,
            "ok": self.ok,
            "seed": self.seed,
            "samples": self.samples,
            "tolerance": TOL,
            "cover": {
                "ok": self.cover.ok,
                "exact": self.cover.exact_ok,
                "numeric": {"ok": self.cover.numeric_ok, "probabilistic": True},
                "inclusion": {"ok": self.cover.inclusion_ok, "probabilistic": True},
                "points_checked": self.cover.points_checked,
                "witnesses": self.cover.witnesses,
            },
            "irredundancy": {
                "probabilistic": True,
                "pairs": [
                    {"i": v.i, "j": v.j, "verdict": v.verdict, "sampled": v.sampled, "contained_points": v.contained_points}
                    for v in self.irredundancy
                ],
            },
            "degrees": {
                "deg_W_estimate": self.deg_W_estimate,
                "estimate_kind": "sum of leader-degree products (upper-bound proxy)",
                "chains": [
                    {
                        "chain": c.chain,
                        "leader_degree_product": c.leader_degree_product,
                        "max_free_degree": c.max_free_degree,
                        "max_leader_degree": c.max_leader_degree,
                        "ok": c.ok,
                    }
                    for c in self.degree_check
                ],
            },
        }

    def to_text(self) -> str:
        lines = [f"verification: {'OK' if self.ok else 'FAILED'} (seed {self.seed}, {self.samples} samples)"]
        c = self.cover
        lines.append(
            f"cover: exact {'ok' if c.exact_ok else 'FAIL'}, numeric {'ok' if c.numeric_ok else 'FAIL'}, "
            f"inclusion {'ok' if c.inclusion_ok else 'FAIL'} ({c.points_checked} points)"
        )
        for w in c.witnesses:
            lines.append(f"  witness: {w}")
        for v in self.irredundancy:
            extra = f" at {v.contained_points}" if v.contained_points else ""
            lines.append(f"pair {v.i} -> {v.j}: {v.verdict}{extra}")
        lines.append(f"deg W estimate: {self.deg_W_estimate}")
        for d in self.degree_check:
            lines.append(
                f"chain {d.chain}: leader product {d.leader_degree_product}, free degree {d.max_free_degree}, "
                f"leader degree {d.max_leader_degree}: {'ok' if d.ok else 'FAIL'}"
            )
        return "\n".join(lines)


def verify_result(inp: SystemInput, result: DecompositionResult, samples: int = 25, seed: int = 0) -> VerificationReport:
    cover = verify_cover(inp, result, samples=max(2, min(samples, 6)), seed=seed)
    pairs = verify_irredundant(result, samples, seed)
    est, degs = verify_degrees(result)
    return VerificationReport(cover, pairs, degs, est, seed, samples)


__all__ = [
    "VerificationReport",
    "CoverCheck",
    "PairVerdict",
    "DegreeCheck",
    "verify_cover",
    "verify_irredundant",
    "verify_degrees",
    "verify_result",
    "deg_w_estimate",
    "sample_chain",
    "in_quasi_component",
]
