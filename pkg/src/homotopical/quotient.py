"""Quotient by homotopy, homotopy equivalences and contractibility.

The quotient lives on the full subcategory of base objects, where every
hom-set carries the homotopy relation.  Each class is represented by its
lexicographically smallest morphism id.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .errors import CongruenceError, DomainError
from .fincat import FinCategory, Morphism, compose
from .homotopy import (
    CongruenceReport,
    HomotopyWitness,
    find_homotopy,
    homotopy_classes,
    verify_congruence,
)
from .hstruct import HomotopicalStructure


@dataclass
class QuotientCategory:
    category: FinCategory
    class_map: dict[str, str]


def quotient_category(
    cat: FinCategory, hs: HomotopicalStructure, congruence: CongruenceReport | None = None
) -> QuotientCategory:
    """Collapse every homotopy class between base objects to its representative.

    Raises :class:`CongruenceError` unless the congruence certificate passed,
    or if composition fails to descend to classes (checked on every
    composable pair of the base subcategory).
    """
    if congruence is None:
        congruence = verify_congruence(cat, hs)
    if not congruence.passed:
        raise CongruenceError("homotopy relation is not a verified congruence; refusing to build the quotient")
    base = list(hs.base)
    class_map: dict[str, str] = {}
    reps: list[str] = []
    for x in base:
        for y in base:
            for cls in homotopy_classes(cat, hs, x, y).classes:
                reps.append(cls[0])
                for m in cls:
                    class_map[m] = cls[0]
    in_base = [m for m in cat.ids if m in class_map]
    for f in in_base:
        for g in in_base:
            if cat.dst(f) != cat.src(g):
                continue
            lhs = class_map[compose(cat, g, f)]
            rhs = class_map[compose(cat, class_map[g], class_map[f])]
            if lhs != rhs:
                raise CongruenceError(f"composition does not descend: [{g}∘{f}]={lhs} but [{class_map[g]}∘{class_map[f]}]={rhs}")
    order = {m: n for n, m in enumerate(cat.ids)}
    reps.sort(key=order.__getitem__)
    comp = {}
    for f in reps:
        for g in reps:
            if cat.dst(f) == cat.src(g):
                comp[(g, f)] = class_map[compose(cat, g, f)]
    q = FinCategory(
        base,
        [Morphism(m, cat.src(m), cat.dst(m)) for m in reps],
        {x: class_map[cat.identity(x)] for x in base},
        comp,
    )
    return QuotientCategory(q, class_map)


@dataclass(frozen=True)
class EquivalencePair:
    u: str
    v: str
    vu_witness: HomotopyWitness
    uv_witness: HomotopyWitness

    def to_dict(self) -> dict:
        return {"u": self.u, "v": self.v, "vu_witness": self.vu_witness.to_dict(), "uv_witness": self.uv_witness.to_dict()}


def homotopy_equivalences(cat: FinCategory, hs: HomotopicalStructure, x: str, y: str) -> list[EquivalencePair]:
    """Every ``(u, v)`` with ``v∘u ~ 1_x`` and ``u∘v ~ 1_y``, scanning ``C(x,y) × C(y,x)``.

    Membership in the identity's class is decided by a direct witness
    lookup, which agrees with the class partition whenever the structure
    satisfies the axioms.
    """
    for o in (x, y):
        if o not in hs.base:
            raise DomainError(f"object {o!r} is not in the structure's base")
    ix, iy = cat.identity(x), cat.identity(y)
    out = []
    for u in cat.index.by_endpoints.get((x, y), ()):
        for v in cat.index.by_endpoints.get((y, x), ()):
            w1 = find_homotopy(cat, hs, compose(cat, v, u), ix)
            if w1 is None:
                continue
            w2 = find_homotopy(cat, hs, compose(cat, u, v), iy)
            if w2 is not None:
                out.append(EquivalencePair(u, v, w1, w2))
    return out


class Contractibility(NamedTuple):
    contractible: bool
    pair: EquivalencePair | None


def is_contractible(cat: FinCategory, hs: HomotopicalStructure, x: str, zero: str) -> Contractibility:
    """Whether ``x`` is homotopy equivalent to the caller's designated point object."""
    pairs = homotopy_equivalences(cat, hs, x, zero)
    return Contractibility(bool(pairs), pairs[0] if pairs else None)
