"""The randomized triangular decomposition driver.

Pipeline: equidimensional parts (from a provider), random squaring of the
system, perturbed-resultant projections for every block of eliminated
variables, a random point that keeps all projections nonzero (used to
separate the projections into one polynomial per leader), and finally one
lifting call per block of leaders.
"""
from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from .chains import RegularChainRecord, TriangularSet, normalize_chain
from .lifting import default_leaders, triangular_zero_dim
from .poly import MultiPoly, VarOrder, full_squarefree_part, specialize, squarefree_part
from .resultants import canny_pres

log = logging.getLogger(__name__)

EXPLICIT = "explicit"
HYPERSURFACE = "hypersurface"
PROVIDERS = (EXPLICIT, HYPERSURFACE)


class DecompositionError(ValueError):
    pass


class SamplingError(ArithmeticError):
    """No admissible random point was found; the sample set is too small."""


@dataclass
class EquidimPart:
    d: int
    polys: List[MultiPoly]


@dataclass
class SystemInput:
    polys: List[MultiPoly]
    order: VarOrder
    equidim_parts: Optional[List[EquidimPart]] = None

    def __post_init__(self):
        if not self.polys:
            raise DecompositionError("the system has no polynomials")
        if all(f.is_zero() for f in self.polys):
            raise DecompositionError("all input polynomials are zero")
        for f in self.polys:
            if f.order != self.order:
                raise DecompositionError("polynomial in a different variable order")

    @property
    def n(self) -> int:
        return self.order.n

    @property
    def s(self) -> int:
        return len(self.polys)

    @property
    def D(self) -> int:
        return max(1, max(f.total_degree() for f in self.polys))


@dataclass
class Overrides:
    lambdas: Optional[List[List[Fraction]]] = None
    alpha: Optional[List[Fraction]] = None
    y1: Optional[List[Fraction]] = None
    y2: Optional[List[Fraction]] = None

    def empty(self) -> bool:
        return not (self.lambdas or self.alpha or self.y1 or self.y2)


@dataclass
class RandomConfig:
    seed: int = 0
    gamma_size: int = 2 ** 31
    overrides: Overrides = field(default_factory=Overrides)
    deterministic: bool = False

    def __post_init__(self):
        if self.gamma_size < 2:
            raise ValueError("gamma_size must be at least 2")

    def stream(self, label: str) -> random.Random:
        """Independent generator for one labelled call."""
        return random.Random(f"{self.seed}/{label}")


@dataclass
class CoverEntry:
    S: Tuple[int, ...]
    nabla: List[MultiPoly]
    alpha_used: Tuple[Fraction, ...]
    trivial: bool = False


@dataclass
class DecompositionResult:
    chains: List[RegularChainRecord]
    order: VarOrder
    random_log: dict
    probability_report: dict
    cover: Dict[Tuple[int, ...], MultiPoly] = field(default_factory=dict)
    entries: List[CoverEntry] = field(default_factory=list)

    def to_json(self) -> dict:
        names = self.order.names
        return {
            "format": 1,
            "variables": list(names),
            "chains": [r.to_json() for r in self.chains],
            "projections": {
                ",".join(names[i] for i in S) or "-": g.to_str() for S, g in self.cover.items()
            },
            "separated": [
                {
                    "subset": [names[i] for i in e.S],
                    "polys": [g.to_str() for g in e.nabla],
                    "trivial": e.trivial,
                }
                for e in self.entries
            ],
            "random_log": self.random_log,
            "probability_report": self.probability_report,
        }


def _subset_name(order: VarOrder, S) -> str:
    return "{" + ",".join(order.names[i] for i in S) + "}"


def equidim(inp: SystemInput, provider: str) -> List[EquidimPart]:
    """Equidimensional parts of ``Z(f)``: user supplied or the hypersurface case."""
    n = inp.n
    if provider == HYPERSURFACE:
        nonzero = [f for f in inp.polys if not f.is_zero()]
        if len(inp.polys) != 1:
            raise DecompositionError("the hypersurface provider needs exactly one polynomial")
        f = nonzero[0]
        if f.is_constant():
            raise DecompositionError("a nonzero constant defines the empty set")
        return [EquidimPart(n - 1, [full_squarefree_part(f)])]
    if provider == EXPLICIT:
        parts = inp.equidim_parts
        if not parts:
            raise DecompositionError("the explicit provider needs equidim blocks")
        seen = set()
        for part in parts:
            if not 0 <= part.d <= n - 1:
                raise DecompositionError(f"dimension {part.d} out of range for {n} variables")
            if part.d in seen:
                raise DecompositionError(f"two equidim blocks for dimension {part.d}")
            seen.add(part.d)
            if not part.polys or len(part.polys) > n + 1:
                raise DecompositionError(f"equidim block {part.d} needs 1 to {n + 1} polynomials")
            for p in part.polys:
                if p.order != inp.order:
                    raise DecompositionError("equidim polynomial in a different variable order")
        return sorted(parts, key=lambda p: p.d)
    raise DecompositionError(f"unknown provider {provider!r}")


def square_system(inp: SystemInput, d0: int, cfg: RandomConfig, record: Optional[dict] = None) -> List[MultiPoly]:
    """``n - d0 + 1`` random combinations of the input polynomials."""
    count = inp.n - d0 + 1
    rng = cfg.stream("square")
    rows = []
    given = cfg.overrides.lambdas or []
    out = []
    for i in range(count):
        row = None
        if i < len(given):
            row = [Fraction(c) for c in given[i]]
            if len(row) != inp.s:
                raise DecompositionError(f"lambda row {i + 1} needs {inp.s} entries")
        tries = 0
        while True:
            if row is None:
                row = [Fraction(rng.randrange(cfg.gamma_size)) for _ in range(inp.s)]
            f = MultiPoly.zero(inp.order)
            for c, p in zip(row, inp.polys):
                if c:
                    f = f + p.scale(c)
            if not f.is_zero():
                break
            log.info("combination %d vanished; resampling", i + 1)
            tries += 1
            if tries > 100:
                raise SamplingError("could not find a nonzero combination")
            row = None
        rows.append(row)
        out.append(f)
    if record is not None:
        record["lambda"] = [[str(c) for c in r] for r in rows]
    return out


def cover_sizes(n: int, d0: int, d1: int) -> range:
    return range(max(n - d1 - 1, 0), n - d0)


def intermediate_degree_bound(n: int, D: int) -> int:
    return max((n + 1) * D ** (n + 1), D ** (2 * n) + D ** n)


def compute_cover(ftilde: Sequence[MultiPoly], d0: int, d1: int, record: Optional[dict] = None) -> Dict[Tuple[int, ...], MultiPoly]:
    """Perturbed resultants for every block ``S`` with ``n-d1-1 <= |S| <= n-d0-1``."""
    order = ftilde[0].order
    n = order.n
    D = max(f.total_degree() for f in ftilde)
    ceiling = intermediate_degree_bound(n, max(D, 1))
    cover = {}
    for k in cover_sizes(n, d0, d1):
        if k + 1 > len(ftilde):
            raise DecompositionError("not enough combinations for the requested block size")
        for S in combinations(range(n), k):
            g = canny_pres(list(ftilde[: k + 1]), S)
            if g.total_degree() > ceiling:
                log.warning("projection for %s exceeds the degree ceiling %d", _subset_name(order, S), ceiling)
                if record is not None:
                    record.setdefault("degree_ceiling_violations", []).append(_subset_name(order, S))
            cover[S] = g
    return cover


def _separate(cover, S, alpha, order):
    nabla = []
    trivial = False
    for j, ij in enumerate(S):
        Sj = tuple(i for i in S if i != ij)
        g = cover[Sj]
        spec = specialize(g, {i: alpha[i] for i in range(ij)})
        if spec.is_zero():
            raise SamplingError("projection vanished at the sample point")
        if spec.degree(ij) < 1:
            trivial = True
            nabla.append(spec)
            continue
        nabla.append(squarefree_part(spec, ij))
    return nabla, trivial


def avoid_repetitions(
    cover: Dict[Tuple[int, ...], MultiPoly],
    d0: int,
    d1: int,
    cfg: RandomConfig,
    order: VarOrder,
    record: Optional[dict] = None,
) -> List[CoverEntry]:
    """Pick ``alpha`` with every projection nonzero there and build the separated parts."""
    n = order.n
    rng = cfg.stream("alpha")
    alpha = None
    tries = 0
    candidate = cfg.overrides.alpha
    if candidate is not None:
        if len(candidate) != n:
            raise DecompositionError(f"alpha needs {n} coordinates")
        candidate = [Fraction(a) for a in candidate]
        if all(not specialize(g, dict(enumerate(candidate))).is_zero() for g in cover.values()):
            alpha = candidate
        else:
            log.warning("override alpha makes a projection vanish; sampling instead")
            if record is not None:
                record["alpha_override_rejected"] = [str(a) for a in candidate]
    while alpha is None:
        tries += 1
        if tries > 100:
            raise SamplingError("no admissible alpha after 100 draws")
        cand = [Fraction(rng.randrange(cfg.gamma_size)) for _ in range(n)]
        if all(not specialize(g, dict(enumerate(cand))).is_zero() for g in cover.values()):
            alpha = cand
    if record is not None:
        record["alpha"] = [str(a) for a in alpha]
    entries = []
    for m in range(n - d1, n - d0 + 1):
        for S in combinations(range(n), m):
            nabla, trivial = _separate(cover, S, alpha, order)
            entries.append(CoverEntry(S, nabla, tuple(alpha), trivial))
    return entries


def _clamp(x: Fraction) -> Fraction:
    return min(max(x, Fraction(0)), Fraction(1))


def success_probability_report(n: int, D: int, s: int, gamma_size: int, provider: str = EXPLICIT) -> dict:
    """Lower bounds for the success of each random step, as exact fractions.

    The equidimensional step is only named symbolically: its constants are
    not known, and neither shipped provider consumes randomness.
    """
    if gamma_size < 2:
        raise ValueError("gamma_size must be at least 2")
    if D < 2:
        raise ValueError("the bounds are stated for D >= 2")
    g = Fraction(gamma_size)
    flags = []
    squaring = Fraction(1)
    for h in range(1, n + 2):
        squaring *= _clamp(1 - Fraction(D ** (h - 1)) / g)
    avoid_raw = 1 - Fraction(2 ** n * (n + 1) * D ** (n + 1)) / g
    lift_raw = 1 - Fraction((n + 1) ** 4 * D ** (4 * (n + 1))) / g
    avoid = _clamp(avoid_raw)
    lifting = _clamp(lift_raw)
    if squaring == 0:
        flags.append("squaring")
    if avoid_raw < 0:
        flags.append("avoid_repetitions")
    if lift_raw < 0:
        flags.append("lifting")
    total = squaring * avoid * lifting
    return {
        "n": n,
        "D": D,
        "s": s,
        "gamma_size": gamma_size,
        "squaring": squaring,
        "avoid_repetitions": avoid,
        "lifting": lifting,
        "equidim": {
            "bound": "1 - (c1*D^(n^2+n) + D^(c2*(n+1)))/|Gamma|",
            "included": False,
            "provider": provider,
        },
        "product": total,
        "insufficient_gamma": flags,
    }


def _report_json(rep: dict) -> dict:
    return {k: (str(v) if isinstance(v, Fraction) else v) for k, v in rep.items()}


def main_decompose(inp: SystemInput, cfg: RandomConfig, provider: Optional[str] = None) -> DecompositionResult:
    """Irredundant triangular decomposition of ``Z(f_1, ..., f_s)``."""
    order = inp.order
    n = order.n
    if provider is None:
        provider = EXPLICIT if inp.equidim_parts else HYPERSURFACE
    if cfg.deterministic and cfg.overrides.empty():
        raise DecompositionError("deterministic mode needs an override block")
    rlog: dict = {"seed": cfg.seed, "gamma_size": cfg.gamma_size, "provider": provider}
    parts = equidim(inp, provider)
    dims = [p.d for p in parts]
    d0, d1 = min(dims), max(dims)
    rlog["dimensions"] = dims
    ftilde = square_system(inp, d0, cfg, rlog)
    cover = compute_cover(ftilde, d0, d1, rlog)
    entries = avoid_repetitions(cover, d0, d1, cfg, order, rlog)
    by_dim = {p.d: p for p in parts}
    chains: List[RegularChainRecord] = []
    lifting_log: list = []
    ov = cfg.overrides
    for entry in entries:
        d = n - len(entry.S)
        part = by_dim.get(d)
        if part is None or entry.trivial:
            continue
        free = [i for i in range(n) if i not in entry.S]
        points = None
        if ov.y1 is not None and ov.y2 is not None:
            points = ([ov.y1[i] for i in free], [ov.y2[i] for i in free])
        label = "lift/" + ",".join(order.names[i] for i in entry.S)
        by_var = dict(zip(entry.S, entry.nabla))
        lead = default_leaders(entry.S)
        H = [by_var[z] for z in lead] + list(part.polys)
        out = triangular_zero_dim(
            entry.S,
            H,
            cfg.stream(label),
            cfg.gamma_size,
            leaders=lead,
            points=points,
            record=lifting_log,
        )
        for r in out:
            ch = normalize_chain(r.chain)
            chains.append(RegularChainRecord(ch, r.cls, r.provenance, entry.S, d))
    rlog["lifting"] = lifting_log
    report = success_probability_report(n, max(inp.D, 2), inp.s, cfg.gamma_size, provider)
    return DecompositionResult(chains, order, rlog, _report_json(report), cover, entries)


__all__ = [
    "SystemInput",
    "EquidimPart",
    "RandomConfig",
    "Overrides",
    "CoverEntry",
    "DecompositionResult",
    "DecompositionError",
    "SamplingError",
    "equidim",
    "square_system",
    "compute_cover",
    "avoid_repetitions",
    "main_decompose",
    "success_probability_report",
    "EXPLICIT",
    "HYPERSURFACE",
]
