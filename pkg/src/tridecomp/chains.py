"""Triangular sets, regular chains and pseudo-reduction."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from .poly import MultiPoly, VarOrder, normalize, parse_poly, primitive_part, prem
from .resultants import sylvester_resultant

TRIANGULAR = "triangular"
REGULAR = "regular"
SQUAREFREE_REGULAR = "squarefree_regular"
CLASSES = (TRIANGULAR, REGULAR, SQUAREFREE_REGULAR)


class ChainStructureError(ValueError):
    pass


class TriangularSet:
    """Polynomials ``g_1..g_m`` with distinct leaders ``z_1..z_m``.

    ``g_k`` must involve ``z_k`` and none of ``z_{k+1}..z_m``.  Leaders are
    variable indices and need not be increasing.
    """

    __slots__ = ("order", "polys", "leaders")

    def __init__(self, order: VarOrder, polys: Sequence[MultiPoly], leaders: Sequence):
        polys = tuple(polys)
        leaders = tuple(order.resolve(v) for v in leaders)
        if len(polys) != len(leaders):
            raise ChainStructureError("need one leader per polynomial")
        if len(set(leaders)) != len(leaders):
            raise ChainStructureError("leaders must be distinct")
        for k, (g, z) in enumerate(zip(polys, leaders)):
            if g.order != order:
                raise ChainStructureError("polynomial in a different variable order")
            if not g.involves(z):
                raise ChainStructureError(
                    f"element {k + 1} ({g}) does not involve its leader {order.names[z]}"
                )
            for later in leaders[k + 1:]:
                if g.involves(later):
                    raise ChainStructureError(
                        f"element {k + 1} ({g}) involves the later leader {order.names[later]}"
                    )
        self.order = order
        self.polys = polys
        self.leaders = leaders

    @property
    def free_vars(self) -> Tuple[int, ...]:
        lead = set(self.leaders)
        return tuple(i for i in range(self.order.n) if i not in lead)

    def __len__(self):
        return len(self.polys)

    def __iter__(self):
        return iter(self.polys)

    def initials(self) -> List[MultiPoly]:
        return [g.lc(z) for g, z in zip(self.polys, self.leaders)]

    def lower(self, k: int) -> "TriangularSet":
        """The first ``k`` elements."""
        return TriangularSet(self.order, self.polys[:k], self.leaders[:k])

    def leader_degrees(self) -> List[int]:
        return [g.degree(z) for g, z in zip(self.polys, self.leaders)]

    def key(self):
        return (self.leaders, tuple(g.sort_key() for g in self.polys))

    def __eq__(self, other):
        return (
            isinstance(other, TriangularSet)
            and self.order == other.order
            and self.leaders == other.leaders
            and self.polys == other.polys
        )

    def __hash__(self):
        return hash((self.order, self.leaders, self.polys))

    def __repr__(self):
        names = self.order.names
        body = ", ".join(f"{names[z]}: {g}" for g, z in zip(self.polys, self.leaders))
        return f"TriangularSet({{{body}}})"


@dataclass(frozen=True)
class RegularChainRecord:
    chain: TriangularSet
    cls: str
    provenance: str = ""
    subset: Optional[Tuple[int, ...]] = None
    dimension: Optional[int] = None

    def to_json(self) -> dict:
        names = self.chain.order.names
        out = {
            "leaders": [names[z] for z in self.chain.leaders],
            "free_vars": [names[i] for i in self.chain.free_vars],
            "polys": [g.to_str() for g in self.chain.polys],
            "class": self.cls,
        }
        if self.subset is not None:
            out["subset"] = [names[i] for i in self.subset]
        if self.dimension is not None:
            out["dimension"] = self.dimension
        if self.provenance:
            out["provenance"] = self.provenance
        return out


def chain_from_json(obj: dict, order: VarOrder) -> RegularChainRecord:
    polys = [parse_poly(s, order) for s in obj["polys"]]
    chain = TriangularSet(order, polys, obj["leaders"])
    expected_free = [order.names[i] for i in chain.free_vars]
    if "free_vars" in obj and list(obj["free_vars"]) != expected_free:
        raise ChainStructureError("free_vars disagree with the leaders")
    cls = obj.get("class", TRIANGULAR)
    if cls not in CLASSES:
        raise ChainStructureError(f"unknown chain class {cls!r}")
    subset = tuple(order.index(v) for v in obj["subset"]) if "subset" in obj else None
    return RegularChainRecord(chain, cls, obj.get("provenance", ""), subset, obj.get("dimension"))


def prem_chain(f: MultiPoly, chain: TriangularSet) -> MultiPoly:
    """Iterated pseudo-remainder of ``f`` by ``g_m, ..., g_1``."""
    r = f
    for g, z in zip(reversed(chain.polys), reversed(chain.leaders)):
        if r.is_zero():
            break
        if r.degree(z) >= g.degree(z):
            r = prem(r, g, z)
    return r


def iterated_resultant(p: MultiPoly, chain: TriangularSet) -> MultiPoly:
    """Eliminate the leaders of ``chain`` from ``p`` by successive resultants."""
    r = p
    for g, z in zip(reversed(chain.polys), reversed(chain.leaders)):
        if r.is_zero():
            return r
        if r.involves(z):
            r = sylvester_resultant(r, g, z)
    return r


def is_reduced(chain: TriangularSet) -> bool:
    for k, (gk, zk) in enumerate(zip(chain.polys, chain.leaders)):
        dk = gk.degree(zk)
        for gj in chain.polys[k + 1:]:
            if gj.degree(zk) >= dk:
                return False
    return True


def classify(chain: TriangularSet) -> str:
    """Chain class, decided bottom-up with iterated resultants.

    For a regular chain ``T`` and a polynomial ``p``, ``p`` is regular
    modulo the saturated ideal of ``T`` exactly when its iterated
    resultant with ``T`` is nonzero.  Squarefreeness of ``g_k`` over the
    lower chain is the same test applied to its discriminant.
    """
    squarefree = True
    for k, (g, z) in enumerate(zip(chain.polys, chain.leaders)):
        low = chain.lower(k)
        init = g.lc(z)
        if iterated_resultant(init, low).is_zero():
            return TRIANGULAR
        if squarefree:
            d = g.degree(z)
            if d > 1:
                disc = sylvester_resultant(g, g.derivative(z), z)
                if iterated_resultant(disc, low).is_zero():
                    squarefree = False
    return SQUAREFREE_REGULAR if squarefree else REGULAR


def validate_chain(chain: TriangularSet, provenance: str = "") -> RegularChainRecord:
    """Certify the class of ``chain``.

    Structure was checked when the set was built.  A chain that is not
    reduced (some ``g_j`` has degree at least ``deg g_k`` in an earlier
    leader ``z_k``) is never promoted beyond ``triangular``.
    """
    if not isinstance(chain, TriangularSet):
        raise ChainStructureError("expected a TriangularSet")
    if not is_reduced(chain):
        return RegularChainRecord(chain, TRIANGULAR, provenance)
    return RegularChainRecord(chain, classify(chain), provenance)


def normalize_chain(chain: TriangularSet) -> TriangularSet:
    """Primitive part of each element with respect to the leader block."""
    lead = chain.leaders
    polys = [primitive_part(g, lead) for g in chain.polys]
    return TriangularSet(chain.order, polys, lead)


def chain_sort_key(chain: TriangularSet):
    return (len(chain.polys), chain.key())


def make_chain(order: VarOrder, specs: Sequence[Tuple[str, str]]) -> TriangularSet:
    """Convenience: ``make_chain(order, [("x2", "x2^2-2"), ("x1", "x1-x2")])``."""
    leaders = [order.index(v) for v, _ in specs]
    polys = [parse_poly(s, order) for _, s in specs]
    return TriangularSet(order, polys, leaders)


__all__ = [
    "TriangularSet",
    "RegularChainRecord",
    "ChainStructureError",
    "prem_chain",
    "iterated_resultant",
    "validate_chain",
    "normalize_chain",
    "classify",
    "is_reduced",
    "chain_from_json",
    "make_chain",
    "normalize",
    "TRIANGULAR",
    "REGULAR",
    "SQUAREFREE_REGULAR",
]
