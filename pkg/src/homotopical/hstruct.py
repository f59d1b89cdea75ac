"""Homotopical structures and the four axiom checks.

A structure assigns to each base object ``S`` a cylinder object ``hat[S]``
and two morphisms ``i[S], j[S]: S -> hat[S]``.  Each check searches for the
existential witness of its axiom in deterministic order (hom-set input
order) and records either the first witness found or a counterexample.

Structures may be partial: only base objects get a cylinder.  Axiom III
ranges over every object ``T`` of the category; axiom IV only over
morphisms between base objects.
"""

from __future__ import annotations

from collections import defaultdict
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from ._parallel import pmap
from .errors import ParseError, StructureError
from .fincat import FinCategory, read_json

AXIOMS = ("I", "II", "III", "IV")

SCOPE_NOTE = (
    "axioms I-III quantify over base objects S (III over every object T); "
    "axiom IV over morphisms u: S -> T with S, T in base"
)


@dataclass(frozen=True)
class HomotopicalStructure:
    base: tuple[str, ...]
    hat: Mapping[str, str]
    i: Mapping[str, str]
    j: Mapping[str, str]

    def __post_init__(self):
        object.__setattr__(self, "base", tuple(self.base))
        for name in ("hat", "i", "j"):
            missing = [s for s in self.base if s not in getattr(self, name)]
            if missing:
                raise StructureError(f"{name} has no entry for base object(s) {', '.join(missing)}")

    def check(self, cat: FinCategory) -> None:
        """Raise :class:`StructureError` unless the structure fits ``cat``."""
        if len(set(self.base)) != len(self.base):
            raise StructureError("duplicate base object")
        for s in self.base:
            if not cat.has_object(s):
                raise StructureError(f"base object {s!r} is not an object of the category")
            if not cat.has_object(self.hat[s]):
                raise StructureError(f"hat({s}) = {self.hat[s]!r} is not an object of the category")
            for name, m in (("i", self.i[s]), ("j", self.j[s])):
                if m not in cat._by_id:
                    raise StructureError(f"{name}_{s} = {m!r} is not a morphism of the category")
                mm = cat.morphism(m)
                if (mm.src, mm.dst) != (s, self.hat[s]):
                    raise StructureError(
                        f"{name}_{s} = {m} has endpoints {mm.src}->{mm.dst}, expected {s}->{self.hat[s]}"
                    )

    def to_dict(self) -> dict:
        return {
            "base": list(self.base),
            "hat": {s: self.hat[s] for s in self.base},
            "i": {s: self.i[s] for s in self.base},
            "j": {s: self.j[s] for s in self.base},
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> HomotopicalStructure:
        try:
            return cls(
                tuple(str(s) for s in data["base"]),
                {str(k): str(v) for k, v in data["hat"].items()},
                {str(k): str(v) for k, v in data["i"].items()},
                {str(k): str(v) for k, v in data["j"].items()},
            )
        except (KeyError, TypeError, AttributeError) as exc:
            raise ParseError(f"structure JSON lacks or mistypes field {exc}") from None
        except StructureError as exc:
            raise ParseError(str(exc)) from None


def load_structure(path: str | Path) -> HomotopicalStructure:
    try:
        return HomotopicalStructure.from_dict(read_json(path))
    except ParseError as exc:
        if str(path) in str(exc):
            raise
        raise ParseError(f"{path}: {exc}") from None


Axiom3Key = tuple[str, str, str, str]  # (S, T, h, h*)


@dataclass
class AxiomReport:
    """Per-axiom status with witness tables and counterexamples.

    Witnesses: ``p[S]`` (I), ``k[S]`` (II), ``h2[(S, T, h, h*)]`` (III),
    ``uhat[u]`` (IV).  Counterexamples are base objects for I and II,
    ``(S, T, h, h*)`` tuples for III and morphism ids for IV.
    """

    status: dict[str, bool] = field(default_factory=dict)
    p: dict[str, str] = field(default_factory=dict)
    k: dict[str, str] = field(default_factory=dict)
    h2: dict[Axiom3Key, str] = field(default_factory=dict)
    uhat: dict[str, str] = field(default_factory=dict)
    counterexamples: dict[str, list] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.status.get(a, False) for a in AXIOMS)

    def merge(self, other: AxiomReport) -> AxiomReport:
        return AxiomReport(
            {**self.status, **other.status},
            {**self.p, **other.p},
            {**self.k, **other.k},
            {**self.h2, **other.h2},
            {**self.uhat, **other.uhat},
            {**self.counterexamples, **other.counterexamples},
        )

    def to_dict(self) -> dict:
        cex = self.counterexamples
        return {
            "passed": self.passed,
            "scope": SCOPE_NOTE,
            "status": {a: ("pass" if self.status[a] else "fail") for a in AXIOMS if a in self.status},
            "witnesses": {
                "I": dict(self.p),
                "II": dict(self.k),
                "III": [
                    {"S": s, "T": t, "h": h, "h_star": hs, "h_star_star": w}
                    for (s, t, h, hs), w in self.h2.items()
                ],
                "IV": dict(self.uhat),
            },
            "counterexamples": {
                "I": [{"object": s} for s in cex.get("I", [])],
                "II": [{"object": s} for s in cex.get("II", [])],
                "III": [{"S": s, "T": t, "h": h, "h_star": hs} for s, t, h, hs in cex.get("III", [])],
                "IV": [{"u": u} for u in cex.get("IV", [])],
            },
        }


def _partial(axiom: str, witnesses: dict, cex: list) -> AxiomReport:
    rep = AxiomReport(status={axiom: not cex}, counterexamples={axiom: cex})
    setattr(rep, {"I": "p", "II": "k", "III": "h2", "IV": "uhat"}[axiom], witnesses)
    return rep


def _collect(results: Iterable[tuple[dict, list]]) -> tuple[dict, list]:
    witnesses: dict = {}
    cex: list = []
    for w, c in results:
        witnesses.update(w)
        cex.extend(c)
    return witnesses, cex


def check_axiom_I(cat: FinCategory, hs: HomotopicalStructure, *, workers: int | None = 1) -> AxiomReport:
    """Find ``p: hat S -> S`` with ``p∘i_S = p∘j_S = 1_S`` for each base ``S``."""
    hs.check(cat)
    T = cat.table

    def one(s: str):
        e = cat.pos(cat.identity(s))
        pi, pj = cat.pos(hs.i[s]), cat.pos(hs.j[s])
        for p in cat.hom_idx(hs.hat[s], s):
            if T[p, pi] == e and T[p, pj] == e:
                return {s: cat.ids[p]}, []
        return {}, [s]

    return _partial("I", *_collect(pmap(one, hs.base, workers)))


def check_axiom_II(cat: FinCategory, hs: HomotopicalStructure, *, workers: int | None = 1) -> AxiomReport:
    """Find ``k: hat S -> hat S`` with ``k∘i_S = j_S`` and ``k∘j_S = i_S``."""
    hs.check(cat)
    T = cat.table

    def one(s: str):
        pi, pj = cat.pos(hs.i[s]), cat.pos(hs.j[s])
        for k in cat.hom_idx(hs.hat[s], hs.hat[s]):
            if T[k, pi] == pj and T[k, pj] == pi:
                return {s: cat.ids[k]}, []
        return {}, [s]

    return _partial("II", *_collect(pmap(one, hs.base, workers)))


def cylinder_keys(cat: FinCategory, hs: HomotopicalStructure, s: str, t: str):
    """Positions of ``C(hat S, T)`` with their end restrictions ``(h∘i_S, h∘j_S)``."""
    hom = cat.hom_idx(hs.hat[s], t)
    a = cat.table[hom, cat.pos(hs.i[s])]
    b = cat.table[hom, cat.pos(hs.j[s])]
    return hom, a, b


def check_axiom_III(cat: FinCategory, hs: HomotopicalStructure, *, workers: int | None = 1) -> AxiomReport:
    """For every ``h, h*: hat S -> T`` with ``h*∘i = h∘j`` find ``h**``.

    ``h**`` must satisfy ``h**∘i = h∘i`` and ``h**∘j = h*∘j``.  ``C(hat S, T)``
    is hashed by ``(h∘i, h∘j)`` so each witness is a dictionary lookup.
    """
    hs.check(cat)
    ids = cat.ids

    def one(st: tuple[str, str]):
        s, t = st
        hom, a, b = cylinder_keys(cat, hs, s, t)
        first: dict[tuple[int, int], int] = {}
        by_i: dict[int, list[tuple[int, int]]] = defaultdict(list)
        for h, x, y in zip(hom.tolist(), a.tolist(), b.tolist()):
            first.setdefault((x, y), h)
            by_i[x].append((h, y))
        wit: dict[Axiom3Key, str] = {}
        cex: list[Axiom3Key] = []
        for h, x, y in zip(hom.tolist(), a.tolist(), b.tolist()):
            for h_star, y_star in by_i.get(y, ()):
                key = (s, t, ids[h], ids[h_star])
                w = first.get((x, y_star))
                if w is None:
                    cex.append(key)
                else:
                    wit[key] = ids[w]
        return wit, cex

    tasks = [(s, t) for s in hs.base for t in cat.objects]
    return _partial("III", *_collect(pmap(one, tasks, workers)))


def check_axiom_IV(cat: FinCategory, hs: HomotopicalStructure, *, workers: int | None = 1) -> AxiomReport:
    """For every ``u: S -> T`` between base objects find ``û: hat S -> hat T``
    with ``û∘i_S = i_T∘u`` and ``û∘j_S = j_T∘u``."""
    hs.check(cat)
    T = cat.table
    ids = cat.ids

    def one(st: tuple[str, str]):
        s, t = st
        hom = cat.hom_idx(hs.hat[s], hs.hat[t])
        first: dict[tuple[int, int], int] = {}
        for w, x, y in zip(hom.tolist(), T[hom, cat.pos(hs.i[s])].tolist(), T[hom, cat.pos(hs.j[s])].tolist()):
            first.setdefault((x, y), w)
        ti, tj = cat.pos(hs.i[t]), cat.pos(hs.j[t])
        wit, cex = {}, []
        for u in cat.hom_idx(s, t).tolist():
            w = first.get((int(T[ti, u]), int(T[tj, u])))
            if w is None:
                cex.append(ids[u])
            else:
                wit[ids[u]] = ids[w]
        return wit, cex

    tasks = [(s, t) for s in hs.base for t in hs.base]
    return _partial("IV", *_collect(pmap(one, tasks, workers)))


def check_axioms(cat: FinCategory, hs: HomotopicalStructure, *, workers: int | None = 1) -> AxiomReport:
    rep = AxiomReport()
    for check in (check_axiom_I, check_axiom_II, check_axiom_III, check_axiom_IV):
        rep = rep.merge(check(cat, hs, workers=workers))
    return rep
