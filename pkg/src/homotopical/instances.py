"""Test instances: trivial structures, groupoid cylinders and random categories.

The groupoid cylinder replaces the unit interval by the interval groupoid
``I`` (objects ``0``, ``1`` and one isomorphism ``f: 0 -> 1``).  For finite
groupoids ``G`` the cylinder is ``G x I`` with end inclusions at ``0`` and
``1``; a functor ``G x I -> H`` is the same thing as a natural isomorphism
between its two end restrictions, which is what :func:`natural_iso_classes`
checks independently by brute force.
"""

from __future__ import annotations

import itertools
import random
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .errors import BudgetExceeded, ParseError
from .fincat import FinCategory, Morphism, read_json, validate_category
from .hstruct import HomotopicalStructure

DEFAULT_BUDGET = 10_000


@dataclass
class FiniteGroupoid:
    name: str
    objects: tuple[str, ...]
    arrows: tuple[Morphism, ...]
    identities: dict[str, str]
    composition: dict[tuple[str, str], str]
    inverses: dict[str, str]

    def __post_init__(self):
        self.objects = tuple(self.objects)
        self.arrows = tuple(a if isinstance(a, Morphism) else Morphism(*a) for a in self.arrows)
        self._apos = {a.id: k for k, a in enumerate(self.arrows)}
        self._opos = {x: k for k, x in enumerate(self.objects)}

    # integer view used by the enumerator
    @property
    def src(self) -> list[int]:
        return [self._opos[a.src] for a in self.arrows]

    @property
    def dst(self) -> list[int]:
        return [self._opos[a.dst] for a in self.arrows]

    def ident(self, x: int) -> int:
        return self._apos[self.identities[self.objects[x]]]

    def comp_table(self) -> np.ndarray:
        n = len(self.arrows)
        t = np.full((n, n), -1, dtype=np.int64)
        for (g, f), gf in self.composition.items():
            t[self._apos[g], self._apos[f]] = self._apos[gf]
        return t

    def category(self) -> FinCategory:
        return FinCategory(self.objects, self.arrows, self.identities, self.composition)

    def problems(self) -> list[str]:
        """Category-law violations plus arrows lacking a two-sided inverse."""
        cat = self.category()
        out = [v.message for v in validate_category(cat).violations]
        if out:
            return out
        for a in self.arrows:
            inv = self.inverses.get(a.id)
            if inv is None or inv not in self._apos:
                out.append(f"arrow {a.id} has no inverse")
                continue
            if (cat.composition.get((inv, a.id)) != self.identities[a.src]
                    or cat.composition.get((a.id, inv)) != self.identities[a.dst]):
                out.append(f"{inv} is not a two-sided inverse of {a.id}")
        return out

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "objects": list(self.objects),
            "arrows": [{"id": a.id, "src": a.src, "dst": a.dst} for a in self.arrows],
            "identities": dict(self.identities),
            "composition": [[g, f, gf] for (g, f), gf in self.composition.items()],
            "inverses": dict(self.inverses),
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any], name: str | None = None) -> FiniteGroupoid:
        try:
            g = cls(
                str(data.get("name", name or "G")),
                tuple(data["objects"]),
                tuple(Morphism(str(a["id"]), str(a["src"]), str(a["dst"])) for a in data["arrows"]),
                dict(data["identities"]),
                {(str(g), str(f)): str(gf) for g, f, gf in data["composition"]},
                dict(data["inverses"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"groupoid JSON lacks or mistypes field {exc}") from None
        bad = g.problems()
        if bad:
            raise ParseError(f"groupoid {g.name!r} is invalid: {bad[0]}")
        return g


def load_groupoid(path: str | Path) -> FiniteGroupoid:
    try:
        return FiniteGroupoid.from_dict(read_json(path), name=Path(path).name.split(".")[0])
    except ParseError as exc:
        if str(path) in str(exc):
            raise
        raise ParseError(f"{path}: {exc}") from None


def cyclic_group(n: int, name: str | None = None) -> FiniteGroupoid:
    """``Z_n`` as a one-object groupoid.  ``Z_2`` has arrows ``e`` and ``s``."""
    names = ["e", "s"] if n == 2 else [f"r{k}" for k in range(n)]
    return FiniteGroupoid(
        name or f"Z{n}",
        ("*",),
        tuple(Morphism(a, "*", "*") for a in names),
        {"*": names[0]},
        {(names[a], names[b]): names[(a + b) % n] for a in range(n) for b in range(n)},
        {names[a]: names[-a % n] for a in range(n)},
    )


def interval(name: str = "I") -> FiniteGroupoid:
    """Two objects ``0``, ``1`` and a unique isomorphism ``f: 0 -> 1``."""
    arrows = (Morphism("id0", "0", "0"), Morphism("id1", "1", "1"), Morphism("f", "0", "1"), Morphism("f'", "1", "0"))
    comp = {}
    for g, f in itertools.product(arrows, arrows):
        if f.dst == g.src:
            comp[(g.id, f.id)] = {("0", "0"): "id0", ("1", "1"): "id1", ("0", "1"): "f", ("1", "0"): "f'"}[(f.src, g.dst)]
    return FiniteGroupoid(name, ("0", "1"), arrows, {"0": "id0", "1": "id1"}, comp, {"id0": "id0", "id1": "id1", "f": "f'", "f'": "f"})


def terminal_groupoid(name: str = "T1") -> FiniteGroupoid:
    return FiniteGroupoid(name, ("*",), (Morphism("id", "*", "*"),), {"*": "id"}, {("id", "id"): "id"}, {"id": "id"})


def product(g: FiniteGroupoid, h: FiniteGroupoid, name: str | None = None) -> FiniteGroupoid:
    """Componentwise product; object ``(x,y)`` sits at position ``x*|H|+y``."""
    def o(x, y):
        return f"({x},{y})"

    def a(p, q):
        return f"({p},{q})"

    arrows = tuple(
        Morphism(a(p.id, q.id), o(p.src, q.src), o(p.dst, q.dst)) for p in g.arrows for q in h.arrows
    )
    comp = {
        (a(p2, q2), a(p1, q1)): a(pc, qc)
        for (p2, p1), pc in g.composition.items()
        for (q2, q1), qc in h.composition.items()
    }
    return FiniteGroupoid(
        name or f"{g.name}x{h.name}",
        tuple(o(x, y) for x in g.objects for y in h.objects),
        arrows,
        {o(x, y): a(g.identities[x], h.identities[y]) for x in g.objects for y in h.objects},
        comp,
        {a(p.id, q.id): a(g.inverses[p.id], h.inverses[q.id]) for p in g.arrows for q in h.arrows},
    )


@dataclass(frozen=True, order=True)
class Functor:
    """Extensional functor: target positions of every object and arrow."""

    obj_map: tuple[int, ...]
    arr_map: tuple[int, ...]

    def compose_after(self, first: Functor) -> Functor:
        """``self∘first``."""
        return Functor(
            tuple(self.obj_map[x] for x in first.obj_map),
            tuple(self.arr_map[a] for a in first.arr_map),
        )

    def describe(self, g: FiniteGroupoid, h: FiniteGroupoid) -> dict:
        return {
            "objects": {g.objects[x]: h.objects[y] for x, y in enumerate(self.obj_map)},
            "arrows": {g.arrows[x].id: h.arrows[y].id for x, y in enumerate(self.arr_map)},
        }


def enumerate_functors(g: FiniteGroupoid, h: FiniteGroupoid, budget: int = DEFAULT_BUDGET) -> list[Functor]:
    """All functors ``g -> h``, duplicate-free, sorted by ``(obj_map, arr_map)``.

    For each object map the arrow images are chosen by backtracking in arrow
    order; after every choice the images of all composites already implied
    are propagated, and a clash with the table prunes the branch.
    """
    gs, gd = g.src, g.dst
    hs_, hd = h.src, h.dst
    n_arr = len(g.arrows)
    gcomp = g.comp_table()
    hcomp = h.comp_table()
    pairs = [(a, b, int(gcomp[a, b])) for a in range(n_arr) for b in range(n_arr) if gcomp[a, b] >= 0]
    hom: dict[tuple[int, int], list[int]] = {}
    for k in range(len(h.arrows)):
        hom.setdefault((hs_[k], hd[k]), []).append(k)

    out: list[Functor] = []

    def propagate(amap: list[int]) -> bool:
        changed = True
        while changed:
            changed = False
            for a, b, c in pairs:
                fa, fb = amap[a], amap[b]
                if fa < 0 or fb < 0:
                    continue
                img = int(hcomp[fa, fb])
                if amap[c] < 0:
                    amap[c] = img
                    changed = True
                elif amap[c] != img:
                    return False
        return True

    def search(amap: list[int], obj_map: tuple[int, ...], start: int) -> None:
        a = start
        while a < n_arr and amap[a] >= 0:
            a += 1
        if a == n_arr:
            out.append(Functor(obj_map, tuple(amap)))
            if len(out) > budget:
                raise BudgetExceeded(f"more than {budget} functors in hom-set {g.name} -> {h.name}")
            return
        for cand in hom.get((obj_map[gs[a]], obj_map[gd[a]]), ()):
            trial = list(amap)
            trial[a] = cand
            if propagate(trial):
                search(trial, obj_map, a + 1)

    for obj_map in itertools.product(range(len(h.objects)), repeat=len(g.objects)):
        amap = [-1] * n_arr
        for x in range(len(g.objects)):
            amap[g.ident(x)] = h.ident(obj_map[x])
        if propagate(amap):
            search(amap, tuple(obj_map), 0)
    return sorted(out)


def natural_iso_classes(
    g: FiniteGroupoid, h: FiniteGroupoid, functors: Sequence[Functor] | None = None, budget: int = DEFAULT_BUDGET
) -> list[list[Functor]]:
    """Partition functors ``g -> h`` by natural isomorphism.

    Components are enumerated exhaustively; a family ``alpha`` is accepted
    when every component has a two-sided inverse and every naturality
    square ``F2(a)∘alpha_x = alpha_y∘F1(a)`` commutes.
    """
    if functors is None:
        functors = enumerate_functors(g, h, budget)
    hcomp = h.comp_table()
    hs_, hd = h.src, h.dst
    hid = [h.ident(y) for y in range(len(h.objects))]
    invertible = {k for k in range(len(h.arrows))
                  if any(hcomp[m, k] == hid[hs_[k]] and hcomp[k, m] == hid[hd[k]] for m in range(len(h.arrows)))}
    hom: dict[tuple[int, int], list[int]] = {}
    for k in range(len(h.arrows)):
        hom.setdefault((hs_[k], hd[k]), []).append(k)
    gs, gd = g.src, g.dst
    n_obj = len(g.objects)

    def iso(f1: Functor, f2: Functor) -> bool:
        choices = [[m for m in hom.get((f1.obj_map[x], f2.obj_map[x]), []) if m in invertible] for x in range(n_obj)]
        for alpha in itertools.product(*choices):
            if all(
                hcomp[f2.arr_map[a], alpha[gs[a]]] == hcomp[alpha[gd[a]], f1.arr_map[a]]
                for a in range(len(g.arrows))
            ):
                return True
        return False

    classes: list[list[Functor]] = []
    for f in functors:
        for cls in classes:
            if iso(cls[0], f):
                cls.append(f)
                break
        else:
            classes.append([f])
    return classes


@dataclass
class InstanceBundle:
    cat: FinCategory
    hs: HomotopicalStructure
    provenance: dict
    functors: dict[str, tuple[str, str, Functor]] = field(default_factory=dict)
    groupoids: dict[str, FiniteGroupoid] = field(default_factory=dict)
    matrices: dict[str, Any] = field(default_factory=dict)

    def morphism_of(self, src: str, dst: str, f: Functor) -> str:
        """Morphism id of functor ``f: src -> dst`` in the generated category."""
        for mid, (a, b, g) in self.functors.items():
            if (a, b, g) == (src, dst, f):
                return mid
        raise KeyError(f)


def gen_trivial(cat: FinCategory) -> InstanceBundle:
    """Structure with ``hat S = S`` and ``i_S = j_S = 1_S`` on every object."""
    ids = {x: cat.identity(x) for x in cat.objects}
    hs = HomotopicalStructure(cat.objects, {x: x for x in cat.objects}, ids, dict(ids))
    return InstanceBundle(cat, hs, {"generator": "trivial"})


def gen_groupoid_cylinder(groupoids: Sequence[FiniteGroupoid], max_functors: int = DEFAULT_BUDGET) -> InstanceBundle:
    """Category of all functors among the groupoids and their cylinders ``G x I``.

    Base objects are the input groupoids (by name); ``hat G = GxI`` with
    ``i_G``, ``j_G`` the inclusions at the ends ``0`` and ``1``.
    """
    names = [gp.name for gp in groupoids]
    if len(set(names)) != len(names):
        raise ParseError("groupoid names must be distinct")
    unit = interval()
    cyl = [product(gp, unit, f"{gp.name}xI") for gp in groupoids]
    if set(names) & {c.name for c in cyl}:
        raise ParseError("a groupoid name collides with a cylinder name")
    objs = list(groupoids) + cyl
    by_name = {o.name: o for o in objs}

    homs: dict[tuple[str, str], list[Functor]] = {}
    for a in objs:
        for b in objs:
            homs[(a.name, b.name)] = enumerate_functors(a, b, max_functors)

    morphisms: list[Morphism] = []
    functors: dict[str, tuple[str, str, Functor]] = {}
    key_to_id: dict[tuple[str, str, tuple[int, ...]], str] = {}
    for (a, b), fs in homs.items():
        width = len(str(max(len(fs) - 1, 0)))
        for k, f in enumerate(fs):
            mid = f"{a}->{b}#{k:0{width}d}"
            morphisms.append(Morphism(mid, a, b))
            functors[mid] = (a, b, f)
            key_to_id[(a, b, f.arr_map)] = mid

    identities = {}
    for o in objs:
        idf = tuple(range(len(o.arrows)))
        identities[o.name] = key_to_id[(o.name, o.name, idf)]

    composition: dict[tuple[str, str], str] = {}
    for a in objs:
        for b in objs:
            first = homs[(a.name, b.name)]
            if not first:
                continue
            fa = np.array([f.arr_map for f in first], dtype=np.int64)
            ids_ab = [key_to_id[(a.name, b.name, f.arr_map)] for f in first]
            for c in objs:
                second = homs[(b.name, c.name)]
                if not second:
                    continue
                fb = np.array([f.arr_map for f in second], dtype=np.int64)
                comp = fb[:, fa]  # (len(second), len(first), |arrows of a|)
                for q, g in enumerate(second):
                    gid = key_to_id[(b.name, c.name, g.arr_map)]
                    for p, fid in enumerate(ids_ab):
                        composition[(gid, fid)] = key_to_id[(a.name, c.name, tuple(comp[q, p].tolist()))]

    cat = FinCategory([o.name for o in objs], morphisms, identities, composition)

    def end_inclusion(gp: FiniteGroupoid, end: int) -> str:
        n_i = len(unit.objects)
        n_a = len(unit.arrows)
        end_id = unit.ident(end)
        f = Functor(
            tuple(x * n_i + end for x in range(len(gp.objects))),
            tuple(a * n_a + end_id for a in range(len(gp.arrows))),
        )
        return key_to_id[(gp.name, f"{gp.name}xI", f.arr_map)]

    hs = HomotopicalStructure(
        tuple(names),
        {n: f"{n}xI" for n in names},
        {gp.name: end_inclusion(gp, 0) for gp in groupoids},
        {gp.name: end_inclusion(gp, 1) for gp in groupoids},
    )
    prov = {"generator": "grpd-cylinder", "groupoids": names, "max_functors": max_functors}
    return InstanceBundle(cat, hs, prov, functors, by_name)


def random_category(rng: random.Random, max_objects: int = 8, max_morphisms: int = 60) -> FinCategory:
    """A random concrete category of functions between small finite sets.

    Objects are sets ``{0..n-1}`` with ``n <= 3``; morphisms are the closure
    under composition of a few random functions, kept within
    ``max_morphisms``.  Composition is function composition, so the result
    always satisfies the category laws.
    """
    n_obj = rng.randint(1, max_objects)
    sizes = [rng.randint(0, 3) for _ in range(n_obj)]
    objects = [f"X{k}" for k in range(n_obj)]
    maps: dict[tuple[int, int, tuple[int, ...]], None] = {}
    for x in range(n_obj):
        maps[(x, x, tuple(range(sizes[x])))] = None

    def closure(current: dict) -> dict:
        result = dict(current)
        frontier = list(result)
        while frontier:
            new = []
            items = list(result)
            for f in frontier:
                for g in items:
                    for a, b in ((g, f), (f, g)):
                        if b[1] == a[0]:
                            key = (b[0], a[1], tuple(a[2][v] for v in b[2]))
                            if key not in result:
                                result[key] = None
                                new.append(key)
                if len(result) > max_morphisms:
                    return result
            frontier = new
        return result

    for _ in range(rng.randint(0, 3 * n_obj)):
        x, y = rng.randrange(n_obj), rng.randrange(n_obj)
        if sizes[x] and not sizes[y]:
            continue
        f = (x, y, tuple(rng.randrange(sizes[y]) for _ in range(sizes[x])))
        trial = closure({**maps, f: None})
        if len(trial) <= max_morphisms:
            maps = trial

    keys = list(maps)
    rng.shuffle(keys)
    ids = {k: f"m{n}" for n, k in enumerate(keys)}
    morphisms = [Morphism(ids[k], objects[k[0]], objects[k[1]]) for k in keys]
    identities = {objects[x]: ids[(x, x, tuple(range(sizes[x])))] for x in range(n_obj)}
    comp = {}
    for f in keys:
        for g in keys:
            if f[1] == g[0]:
                comp[(ids[g], ids[f])] = ids[(f[0], g[1], tuple(g[2][v] for v in f[2]))]
    return FinCategory(objects, morphisms, identities, comp)
