"""Finite categories given by an explicit composition table.

Composition convention: ``compose(cat, g, f)`` is ``g∘f``, i.e. *f first, then g*.
The table is stored twice: as the user-facing ``{(g, f): gf}`` dict keyed by
morphism ids and as a dense ``int32`` matrix over morphism positions
(``-1`` where undefined) that the searches and the validator work on.
"""

from __future__ import annotations

import json
from collections import Counter
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .errors import CategoryError, ParseError

RULES = ("Associativity", "DanglingId", "Endpoint", "Totality", "UnitLaw")


@dataclass(frozen=True)
class Morphism:
    id: str
    src: str
    dst: str


@dataclass(frozen=True, order=True)
class Violation:
    rule: str
    morphisms: tuple[str, ...]
    message: str

    def to_dict(self) -> dict:
        return {"rule": self.rule, "morphisms": list(self.morphisms), "message": self.message}


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {"ok": self.ok, "violations": [v.to_dict() for v in self.violations]}


class HomIndex:
    """Hom-set partition of the morphism list plus cached precomposition maps.

    ``precompose(m)`` maps every ``h`` with ``src(h) == dst(m)`` to ``h∘m``;
    a homotopical structure asks for it once per ``i_S`` and once per ``j_S``.
    """

    def __init__(self, cat: FinCategory):
        self._cat = cat
        by_endpoints: dict[tuple[str, str], list[str]] = {
            (x, y): [] for x in cat.objects for y in cat.objects
        }
        for m in cat.morphisms:
            by_endpoints.setdefault((m.src, m.dst), []).append(m.id)
        self.by_endpoints = {k: tuple(v) for k, v in by_endpoints.items()}
        self._pre: dict[str, dict[str, str]] = {}

    def precompose(self, m: str) -> dict[str, str]:
        if m not in self._pre:
            cat = self._cat
            k = cat.pos(m)
            hs = cat.out_idx(cat.dst(m))
            vals = cat.table[hs, k]
            self._pre[m] = {cat.ids[h]: cat.ids[v] for h, v in zip(hs, vals) if v >= 0}
        return self._pre[m]


def _as_morphism(m: Any) -> Morphism:
    if isinstance(m, Morphism):
        return m
    if isinstance(m, Mapping):
        try:
            return Morphism(str(m["id"]), str(m["src"]), str(m["dst"]))
        except KeyError as exc:
            raise ParseError(f"morphism record {m!r} lacks field {exc.args[0]!r}") from None
    mid, src, dst = m
    return Morphism(str(mid), str(src), str(dst))


class FinCategory:
    """A finite category: objects, morphisms, identities and a composition table.

    The constructor accepts malformed tables (they are what
    :func:`validate_category` reports on); only duplicate ids are rejected.
    With ``complete_units`` the missing entries ``g∘id`` and ``id∘g`` are
    filled in from the unit laws, never overwriting a given entry.
    """

    def __init__(
        self,
        objects: Iterable[str],
        morphisms: Iterable[Any],
        identities: Mapping[str, str],
        composition: Mapping[tuple[str, str], str],
        *,
        complete_units: bool = True,
    ):
        self.objects: tuple[str, ...] = tuple(str(x) for x in objects)
        self.morphisms: tuple[Morphism, ...] = tuple(_as_morphism(m) for m in morphisms)
        if len(set(self.objects)) != len(self.objects):
            raise ParseError("duplicate object id")
        self._by_id = {m.id: m for m in self.morphisms}
        if len(self._by_id) != len(self.morphisms):
            dup = sorted(k for k, c in Counter(m.id for m in self.morphisms).items() if c > 1)
            raise ParseError(f"duplicate morphism id(s): {', '.join(dup)}")
        self.identities: dict[str, str] = {str(k): str(v) for k, v in identities.items()}
        comp = {(str(g), str(f)): str(gf) for (g, f), gf in composition.items()}
        if complete_units:
            for m in self.morphisms:
                for key in ((m.id, self.identities.get(m.src)), (self.identities.get(m.dst), m.id)):
                    if None not in key and key[0] in self._by_id and key[1] in self._by_id:
                        comp.setdefault(key, m.id)
        self.composition: dict[tuple[str, str], str] = comp

        self.ids: tuple[str, ...] = tuple(m.id for m in self.morphisms)
        self._pos = {mid: k for k, mid in enumerate(self.ids)}
        self._obj_pos = {x: k for k, x in enumerate(self.objects)}
        self.src_idx = np.array([self._obj_pos.get(m.src, -1) for m in self.morphisms], dtype=np.int64)
        self.dst_idx = np.array([self._obj_pos.get(m.dst, -1) for m in self.morphisms], dtype=np.int64)
        n = len(self.morphisms)
        self.table = np.full((n, n), -1, dtype=np.int32)
        for (g, f), gf in comp.items():
            if g in self._pos and f in self._pos and gf in self._pos:
                self.table[self._pos[g], self._pos[f]] = self._pos[gf]
        self._out = [np.flatnonzero(self.src_idx == k) for k in range(len(self.objects))]
        self._in = [np.flatnonzero(self.dst_idx == k) for k in range(len(self.objects))]
        self._hom = {
            (x, y): out[self.dst_idx[out] == b]
            for x, out in zip(self.objects, self._out)
            for b, y in enumerate(self.objects)
        }
        self.index = HomIndex(self)

    def __repr__(self) -> str:
        return f"FinCategory({len(self.objects)} objects, {len(self.morphisms)} morphisms)"

    def __len__(self) -> int:
        return len(self.morphisms)

    # id-level accessors

    def morphism(self, mid: str) -> Morphism:
        try:
            return self._by_id[mid]
        except KeyError:
            raise CategoryError(f"unknown morphism {mid!r}") from None

    def src(self, mid: str) -> str:
        return self.morphism(mid).src

    def dst(self, mid: str) -> str:
        return self.morphism(mid).dst

    def has_object(self, x: str) -> bool:
        return x in self._obj_pos

    def identity(self, x: str) -> str:
        self._check_object(x)
        try:
            return self.identities[x]
        except KeyError:
            raise CategoryError(f"object {x!r} has no identity") from None

    def _check_object(self, x: str) -> None:
        if x not in self._obj_pos:
            raise CategoryError(f"unknown object {x!r}")

    # position-level accessors used by the searches

    def pos(self, mid: str) -> int:
        try:
            return self._pos[mid]
        except KeyError:
            raise CategoryError(f"unknown morphism {mid!r}") from None

    def out_idx(self, x: str) -> np.ndarray:
        self._check_object(x)
        return self._out[self._obj_pos[x]]

    def in_idx(self, x: str) -> np.ndarray:
        self._check_object(x)
        return self._in[self._obj_pos[x]]

    def hom_idx(self, x: str, y: str) -> np.ndarray:
        try:
            return self._hom[x, y]
        except KeyError:
            self._check_object(x)
            self._check_object(y)
            raise


def lookup(table: np.ndarray, g, f) -> np.ndarray:
    """Broadcast table lookup ``g∘f`` over position arrays; ``-1`` propagates."""
    g, f = np.broadcast_arrays(np.asarray(g), np.asarray(f))
    out = np.full(g.shape, -1, dtype=np.int64)
    ok = (g >= 0) & (f >= 0)
    out[ok] = table[g[ok], f[ok]]
    return out


def hom_set(cat: FinCategory, x: str, y: str) -> list[str]:
    """Morphisms ``x -> y`` in input order."""
    cat._check_object(x)
    cat._check_object(y)
    return list(cat.index.by_endpoints.get((x, y), ()))


def compose(cat: FinCategory, g: str, f: str) -> str:
    """``g∘f``: apply ``f`` first."""
    fm, gm = cat.morphism(f), cat.morphism(g)
    if fm.dst != gm.src:
        raise CategoryError(f"cannot compose {g!r}∘{f!r}: dst({f})={fm.dst} but src({g})={gm.src}")
    k = cat.table[cat.pos(g), cat.pos(f)]
    if k < 0:
        raise CategoryError(f"composition table has no entry for {g!r}∘{f!r}")
    return cat.ids[k]


def validate_category(cat: FinCategory) -> ValidationReport:
    """Exhaustively check endpoints, totality, unit laws and associativity."""
    out: list[Violation] = []
    objs = set(cat.objects)

    for m in cat.morphisms:
        for end in (m.src, m.dst):
            if end not in objs:
                out.append(Violation("DanglingId", (m.id,), f"{m.id} refers to unknown object {end!r}"))
    for x in cat.objects:
        mid = cat.identities.get(x)
        if mid is None:
            out.append(Violation("DanglingId", (), f"object {x!r} has no identity"))
        elif mid not in cat._by_id:
            out.append(Violation("DanglingId", (mid,), f"identity of {x!r} is unknown morphism {mid!r}"))
        else:
            m = cat._by_id[mid]
            if m.src != x or m.dst != x:
                out.append(Violation("Endpoint", (mid,), f"identity of {x!r} has endpoints {m.src}->{m.dst}"))
    for x in cat.identities:
        if x not in objs:
            out.append(Violation("DanglingId", (), f"identity declared for unknown object {x!r}"))

    for (g, f), gf in cat.composition.items():
        missing = [m for m in (g, f, gf) if m not in cat._by_id]
        if missing:
            out.append(Violation("DanglingId", (g, f, gf), f"composition entry references unknown {', '.join(missing)}"))
            continue
        gm, fm, gfm = cat._by_id[g], cat._by_id[f], cat._by_id[gf]
        if fm.dst != gm.src:
            out.append(Violation("Endpoint", (g, f), f"entry for non-composable pair {g}∘{f}"))
        elif gfm.src != fm.src or gfm.dst != gm.dst:
            out.append(Violation("Endpoint", (g, f, gf), f"{g}∘{f}={gf} has endpoints {gfm.src}->{gfm.dst}, expected {fm.src}->{gm.dst}"))

    T = cat.table
    ids = cat.ids
    for k, g in enumerate(ids):
        if cat.src_idx[k] < 0 or cat.dst_idx[k] < 0:
            continue
        fs = cat._in[cat.src_idx[k]]
        for f in fs[T[k, fs] < 0]:
            out.append(Violation("Totality", (g, ids[f]), f"no entry for composable pair {g}∘{ids[f]}"))

    for m in cat.morphisms:
        k = cat._pos[m.id]
        for side, idm in (("right", cat.identities.get(m.src)), ("left", cat.identities.get(m.dst))):
            if idm not in cat._pos:
                continue
            e = cat._pos[idm]
            got = T[k, e] if side == "right" else T[e, k]
            if got >= 0 and got != k:
                expr = f"{m.id}∘{idm}" if side == "right" else f"{idm}∘{m.id}"
                out.append(Violation("UnitLaw", (m.id,), f"{expr}={ids[got]}, expected {m.id}"))

    for k, g in enumerate(ids):
        if cat.src_idx[k] < 0 or cat.dst_idx[k] < 0:
            continue
        hs = cat._out[cat.dst_idx[k]]
        fs = cat._in[cat.src_idx[k]]
        hg = T[hs, k]
        gf = T[k, fs]
        hs, hg = hs[hg >= 0], hg[hg >= 0]
        fs, gf = fs[gf >= 0], gf[gf >= 0]
        if not len(hs) or not len(fs):
            continue
        lhs = T[hg[:, None], fs[None, :]]
        rhs = T[hs[:, None], gf[None, :]]
        bad = (lhs >= 0) & (rhs >= 0) & (lhs != rhs)
        for a, b in zip(*np.nonzero(bad)):
            h, f = ids[hs[a]], ids[fs[b]]
            out.append(Violation(
                "Associativity", (h, g, f),
                f"({h}∘{g})∘{f}={ids[lhs[a, b]]} but {h}∘({g}∘{f})={ids[rhs[a, b]]}",
            ))

    return ValidationReport(sorted(set(out)))


# JSON file format

def category_from_dict(data: Mapping[str, Any]) -> FinCategory:
    try:
        objects = data["objects"]
        morphisms = data["morphisms"]
        identities = data["identities"]
        triples = data.get("composition", [])
    except (KeyError, TypeError) as exc:
        raise ParseError(f"category JSON lacks field {exc}") from None
    comp: dict[tuple[str, str], str] = {}
    for t in triples:
        if not isinstance(t, (list, tuple)) or len(t) != 3:
            raise ParseError(f"composition entry {t!r} is not a [g, f, gf] triple")
        key = (str(t[0]), str(t[1]))
        if key in comp and comp[key] != str(t[2]):
            raise ParseError(f"composition entry for {key[0]}∘{key[1]} given twice with different values")
        comp[key] = str(t[2])
    if not isinstance(identities, Mapping):
        raise ParseError("field 'identities' must be an object")
    return FinCategory(objects, morphisms, identities, comp)


def category_to_dict(cat: FinCategory, *, omit_units: bool = True) -> dict:
    def regenerated(g: str, f: str, gf: str) -> bool:
        fm, gm = cat._by_id.get(f), cat._by_id.get(g)
        if fm is None or gm is None:
            return False
        return (gf == f and cat.identities.get(fm.dst) == g) or (gf == g and cat.identities.get(gm.src) == f)

    order = sorted(cat.composition.items(), key=lambda kv: (cat._pos.get(kv[0][0], -1), cat._pos.get(kv[0][1], -1), kv[0]))
    triples = [[g, f, gf] for (g, f), gf in order if not (omit_units and regenerated(g, f, gf))]
    return {
        "objects": list(cat.objects),
        "morphisms": [{"id": m.id, "src": m.src, "dst": m.dst} for m in cat.morphisms],
        "identities": {x: cat.identities[x] for x in cat.objects if x in cat.identities},
        "composition": triples,
    }


def read_json(path: str | Path) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError(f"{path}: cannot read ({exc.strerror})") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: malformed JSON ({exc.msg} at line {exc.lineno})") from None


def load_category(path: str | Path) -> FinCategory:
    try:
        return category_from_dict(read_json(path))
    except ParseError as exc:
        if str(path) in str(exc):
            raise
        raise ParseError(f"{path}: {exc}") from None


def dumps(obj: Any) -> str:
    """Canonical JSON text used for every report and emitted file."""
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
