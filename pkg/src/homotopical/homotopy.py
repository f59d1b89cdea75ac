"""The homotopy relation on hom-sets and its congruence certificate.

``phi ~ psi`` in ``C(R, Q)`` iff some ``h: hat R -> Q`` has ``h∘i_R = phi``
and ``h∘j_R = psi``.  Classes are computed by enumerating ``C(hat X, Y)``
once and joining the end restrictions of every ``h`` with union-find.

The four ``witness_*`` constructions build witnesses from the axiom
witnesses (``u∘p``, ``h∘k``, the axiom III lookup, ``g∘h∘û``) instead of
searching, and every constructed witness is replayed through the
composition table before it is returned.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from ._parallel import pmap
from .errors import DomainError, WitnessError
from .fincat import FinCategory, compose, lookup
from .hstruct import AxiomReport, HomotopicalStructure, check_axioms, cylinder_keys


@dataclass(frozen=True)
class HomotopyWitness:
    phi: str
    psi: str
    h: str

    def to_dict(self) -> dict:
        return {"phi": self.phi, "psi": self.psi, "h": self.h}


class UnionFind:
    """Disjoint sets over hashable items, with path compression."""

    def __init__(self, items=()):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # keep the lexicographically smaller root
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra

    def groups(self) -> list[list]:
        out: dict = defaultdict(list)
        for x in self.parent:
            out[self.find(x)].append(x)
        return sorted(sorted(g) for g in out.values())


@dataclass
class HomotopyPartition:
    key: tuple[str, str]
    classes: list[list[str]]
    witness_edges: list[HomotopyWitness]
    discrepancies: list[str] = field(default_factory=list)

    @property
    def is_equivalence(self) -> bool:
        """True iff the raw edge relation was already reflexive, symmetric and transitive."""
        return not self.discrepancies

    def class_index(self) -> dict[str, int]:
        return {m: n for n, cls in enumerate(self.classes) for m in cls}

    def representative(self, m: str) -> str:
        for cls in self.classes:
            if m in cls:
                return cls[0]
        raise KeyError(m)

    def related(self, u: str, v: str) -> bool:
        idx = self.class_index()
        return idx[u] == idx[v]

    def to_dict(self) -> dict:
        return {
            "hom": list(self.key),
            "classes": [list(c) for c in self.classes],
            "witnesses": [w.to_dict() for w in self.witness_edges],
            "discrepancies": list(self.discrepancies),
        }


def _require_base(hs: HomotopicalStructure, x: str) -> None:
    if x not in hs.base:
        raise DomainError(f"object {x!r} is not in the structure's base")


def _edge_lookup(cat: FinCategory, hs: HomotopicalStructure, r: str, q: str) -> dict[tuple[int, int], int]:
    """``(h∘i_R, h∘j_R) -> first h`` over ``C(hat R, Q)``, cached on the category."""
    cache = cat.__dict__.setdefault("_edge_cache", {})
    key = (hs.hat[r], hs.i[r], hs.j[r], q)
    if key not in cache:
        hom, a, b = cylinder_keys(cat, hs, r, q)
        first: dict[tuple[int, int], int] = {}
        for h, x, y in zip(hom.tolist(), a.tolist(), b.tolist()):
            first.setdefault((x, y), h)
        cache[key] = first
    return cache[key]


def find_homotopy(cat: FinCategory, hs: HomotopicalStructure, phi: str, psi: str) -> HomotopyWitness | None:
    """First ``h`` (hom-set order) with ``h∘i_R = phi`` and ``h∘j_R = psi``, else None."""
    r, q = cat.src(phi), cat.dst(phi)
    if (cat.src(psi), cat.dst(psi)) != (r, q):
        raise DomainError(f"{phi} and {psi} are not parallel")
    _require_base(hs, r)
    h = _edge_lookup(cat, hs, r, q).get((cat.pos(phi), cat.pos(psi)))
    return None if h is None else HomotopyWitness(phi, psi, cat.ids[h])


def homotopy_classes(cat: FinCategory, hs: HomotopicalStructure, x: str, y: str) -> HomotopyPartition:
    """Partition ``C(x, y)`` into homotopy classes.

    Every ``h: hat x -> y`` contributes the edge ``(h∘i_x, h∘j_x)``.  The
    partition is the union-find closure of those edges; separately, the raw
    edge relation is checked for reflexivity, symmetry and transitivity and
    any gap is listed in ``discrepancies``.
    """
    _require_base(hs, x)
    ids = cat.ids
    members = [ids[m] for m in cat.hom_idx(x, y)]
    hom, a, b = cylinder_keys(cat, hs, x, y)
    pairs: dict[tuple[str, str], str] = {}
    for h, u, v in zip(hom.tolist(), a.tolist(), b.tolist()):
        if u >= 0 and v >= 0:
            pairs.setdefault((ids[u], ids[v]), ids[h])
    uf = UnionFind(members)
    for u, v in pairs:
        uf.union(u, v)
    edges = [HomotopyWitness(u, v, h) for (u, v), h in pairs.items()]

    issues: list[str] = []
    for u in members:
        if (u, u) not in pairs:
            issues.append(f"not reflexive: {u}")
    succ: dict[str, list[str]] = defaultdict(list)
    for u, v in pairs:
        succ[u].append(v)
        if (v, u) not in pairs:
            issues.append(f"not symmetric: {u} ~ {v}")
    for u, v in pairs:
        for w in succ[v]:
            if (u, w) not in pairs:
                issues.append(f"not transitive: {u} ~ {v} ~ {w}")
    return HomotopyPartition((x, y), uf.groups(), edges, issues)


# witness constructions

def _replay(cat: FinCategory, hs: HomotopicalStructure, w: HomotopyWitness) -> HomotopyWitness:
    r = cat.src(w.phi)
    hi = compose(cat, w.h, hs.i[r])
    hj = compose(cat, w.h, hs.j[r])
    if hi != w.phi or hj != w.psi:
        raise WitnessError(
            f"{w.h} does not witness {w.phi} ~ {w.psi}: h∘i={hi}, h∘j={hj}"
        )
    return w


def verify_witness(cat: FinCategory, hs: HomotopicalStructure, w: HomotopyWitness) -> bool:
    try:
        _replay(cat, hs, w)
    except (WitnessError, KeyError):
        return False
    return True


def witness_reflexive(cat: FinCategory, hs: HomotopicalStructure, report: AxiomReport, u: str) -> HomotopyWitness:
    """``u ~ u`` via ``h = u∘p``."""
    x = cat.src(u)
    _require_base(hs, x)
    if x not in report.p:
        raise WitnessError(f"no axiom I witness p for {x}")
    return _replay(cat, hs, HomotopyWitness(u, u, compose(cat, u, report.p[x])))


def witness_symmetric(cat: FinCategory, hs: HomotopicalStructure, report: AxiomReport, w: HomotopyWitness) -> HomotopyWitness:
    """``psi ~ phi`` from ``phi ~ psi`` via ``h* = h∘k``."""
    x = cat.src(w.phi)
    _require_base(hs, x)
    if x not in report.k:
        raise WitnessError(f"no axiom II witness k for {x}")
    return _replay(cat, hs, HomotopyWitness(w.psi, w.phi, compose(cat, w.h, report.k[x])))


def witness_transitive(
    cat: FinCategory, hs: HomotopicalStructure, report: AxiomReport, w1: HomotopyWitness, w2: HomotopyWitness
) -> HomotopyWitness:
    """``u ~ w`` from ``u ~ v`` (by ``h``) and ``v ~ w`` (by ``h*``).

    ``h*∘i = v = h∘j``, so axiom III supplies ``h**`` with ``h**∘i = h∘i = u``
    and ``h**∘j = h*∘j = w``.
    """
    if w1.psi != w2.phi:
        raise WitnessError(f"witnesses do not chain: {w1.psi} != {w2.phi}")
    x, y = cat.src(w1.phi), cat.dst(w1.phi)
    _require_base(hs, x)
    h2 = report.h2.get((x, y, w1.h, w2.h))
    if h2 is None:
        raise WitnessError(f"no axiom III witness for ({w1.h}, {w2.h}) over {x}, {y}")
    return _replay(cat, hs, HomotopyWitness(w1.phi, w2.psi, h2))


def witness_whisker(
    cat: FinCategory, hs: HomotopicalStructure, report: AxiomReport, g: str, w: HomotopyWitness, f: str
) -> HomotopyWitness:
    """``g∘u∘f ~ g∘v∘f`` from ``u ~ v`` (by ``h``) via ``h* = g∘h∘f̂``."""
    if f not in report.uhat:
        raise WitnessError(f"no axiom IV witness for {f}")
    gh = compose(cat, g, w.h)
    h_star = compose(cat, gh, report.uhat[f])
    phi = compose(cat, g, compose(cat, w.phi, f))
    psi = compose(cat, g, compose(cat, w.psi, f))
    return _replay(cat, hs, HomotopyWitness(phi, psi, h_star))


def whisker_batch(
    cat: FinCategory,
    hs: HomotopicalStructure,
    report: AxiomReport,
    gs: np.ndarray,
    witnesses: list[HomotopyWitness],
    fs: np.ndarray,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """:func:`witness_whisker` over every ``(g, w, f)`` at once.

    ``gs`` and ``fs`` are morphism positions; every ``f`` must have an
    axiom IV witness.  Returns ``(h*, g∘u∘f, g∘v∘f, ok)`` as arrays of
    shape ``(len(gs), len(witnesses), len(fs))``; ``ok`` marks the
    configurations whose ``h*`` replays both equations.
    """
    T = cat.table
    x_prime = cat.src(cat.ids[fs[0]]) if len(fs) else None
    u = np.array([cat.pos(w.phi) for w in witnesses], dtype=np.int64)
    v = np.array([cat.pos(w.psi) for w in witnesses], dtype=np.int64)
    h = np.array([cat.pos(w.h) for w in witnesses], dtype=np.int64)
    fhat = np.array([cat.pos(report.uhat[cat.ids[f]]) for f in fs], dtype=np.int64)
    shape = (len(gs), len(witnesses), len(fs))
    if not all(shape):
        empty = np.zeros(shape, dtype=np.int64)
        return empty, empty, empty, np.ones(shape, dtype=bool)
    uf = lookup(T, u[:, None], fs[None, :])
    vf = lookup(T, v[:, None], fs[None, :])
    hf = lookup(T, h[:, None], fhat[None, :])
    g3 = gs[:, None, None]
    guf = lookup(T, g3, uf[None])
    gvf = lookup(T, g3, vf[None])
    h_star = lookup(T, g3, hf[None])
    ends_i = lookup(T, h_star, cat.pos(hs.i[x_prime]))
    ends_j = lookup(T, h_star, cat.pos(hs.j[x_prime]))
    ok = (h_star >= 0) & (guf >= 0) & (ends_i == guf) & (ends_j == gvf)
    return h_star, guf, gvf, ok


# congruence certificate

@dataclass
class LawCheck:
    checked: int = 0
    witnesses: list[dict] = field(default_factory=list)
    counterexamples: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"checked": self.checked, "witnesses": self.witnesses, "counterexamples": self.counterexamples}


@dataclass
class HomSetLaws:
    key: tuple[str, str]
    reflexive: LawCheck
    symmetric: LawCheck
    transitive: LawCheck
    partition: HomotopyPartition

    @property
    def passed(self) -> bool:
        return not (
            self.reflexive.counterexamples or self.symmetric.counterexamples or self.transitive.counterexamples
        ) and self.partition.is_equivalence

    def to_dict(self) -> dict:
        return {
            "hom": list(self.key),
            "classes": self.partition.classes,
            "discrepancies": self.partition.discrepancies,
            "reflexive": self.reflexive.to_dict(),
            "symmetric": self.symmetric.to_dict(),
            "transitive": self.transitive.to_dict(),
        }


@dataclass
class CompatibilityCheck:
    """All configurations ``g∘u∘f ~ g∘v∘f`` for one ``(X', X, Y, Y')``."""

    objects: tuple[str, str, str, str]
    checked: int
    counterexamples: list[dict]
    witnesses: list[dict] | None = None

    def to_dict(self) -> dict:
        out = {"objects": list(self.objects), "checked": self.checked, "counterexamples": self.counterexamples}
        if self.witnesses is not None:
            out["witnesses"] = self.witnesses
        return out


COMPAT_SCOPE = "compatibility checked for f: X' -> X with X', X in base, and every g: Y -> Y'"


@dataclass
class CongruenceReport:
    axioms_passed: bool
    hom_sets: list[HomSetLaws]
    compatibility: list[CompatibilityCheck]

    @property
    def passed(self) -> bool:
        return (
            self.axioms_passed
            and all(h.passed for h in self.hom_sets)
            and not any(c.counterexamples for c in self.compatibility)
        )

    def partition(self, x: str, y: str) -> HomotopyPartition:
        for h in self.hom_sets:
            if h.key == (x, y):
                return h.partition
        raise KeyError((x, y))

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "axioms_passed": self.axioms_passed,
            "scope": COMPAT_SCOPE,
            "hom_sets": [h.to_dict() for h in self.hom_sets],
            "compatibility": [c.to_dict() for c in self.compatibility],
        }


def _hom_set_laws(cat, hs, report, x, y) -> HomSetLaws:
    part = homotopy_classes(cat, hs, x, y)
    refl, sym, trans = LawCheck(), LawCheck(), LawCheck()
    pair_witness = {(w.phi, w.psi): w for w in part.witness_edges}

    def attempt(law: LawCheck, build, cex: dict) -> None:
        law.checked += 1
        try:
            w = build()
        except WitnessError as exc:
            law.counterexamples.append({**cex, "reason": str(exc)})
            return
        if (w.phi, w.psi) not in pair_witness:
            law.counterexamples.append({**cex, "reason": "constructed pair missing from the computed relation"})
            return
        law.witnesses.append(w.to_dict())

    for u in (cat.ids[m] for m in cat.hom_idx(x, y)):
        attempt(refl, lambda: witness_reflexive(cat, hs, report, u), {"u": u})
    for w in part.witness_edges:
        attempt(sym, lambda: witness_symmetric(cat, hs, report, w), {"u": w.phi, "v": w.psi})
    by_phi: dict[str, list[HomotopyWitness]] = defaultdict(list)
    for w in part.witness_edges:
        by_phi[w.phi].append(w)
    for w1 in part.witness_edges:
        for w2 in by_phi[w1.psi]:
            attempt(
                trans,
                lambda: witness_transitive(cat, hs, report, w1, w2),
                {"u": w1.phi, "v": w1.psi, "w": w2.psi},
            )
    return HomSetLaws((x, y), refl, sym, trans, part)


def _compat(cat, hs, report, parts, objs, keep_witnesses) -> CompatibilityCheck:
    xp, x, y, yp = objs
    ids = cat.ids
    fs = cat.hom_idx(xp, x)
    gs = cat.hom_idx(y, yp)
    witnesses = parts[(x, y)].witness_edges
    cex: list[dict] = []
    missing = [f for f in fs.tolist() if ids[f] not in report.uhat]
    for f in missing:
        for g in gs.tolist():
            for w in witnesses:
                cex.append({"g": ids[g], "u": w.phi, "v": w.psi, "f": ids[f], "reason": f"no axiom IV witness for {ids[f]}"})
    fs_ok = np.array([f for f in fs.tolist() if ids[f] in report.uhat], dtype=np.int64)
    h_star, guf, gvf, ok = whisker_batch(cat, hs, report, gs, witnesses, fs_ok)
    # the whiskered pair must also land in one class of C(X', Y')
    cls = np.full(len(ids), -1, dtype=np.int64)
    for m, n in parts[(xp, yp)].class_index().items():
        cls[cat.pos(m)] = n
    if ok.size:
        ok &= cls[guf] == cls[gvf]
    for a, b, c in zip(*np.nonzero(~ok)):
        w = witnesses[b]
        cex.append({"g": ids[gs[a]], "u": w.phi, "v": w.psi, "f": ids[fs_ok[c]], "reason": "g∘h∘f̂ does not witness g∘u∘f ~ g∘v∘f"})
    kept = None
    if keep_witnesses:
        kept = [
            {"g": ids[gs[a]], "u": witnesses[b].phi, "v": witnesses[b].psi, "f": ids[fs_ok[c]], "h": ids[h_star[a, b, c]]}
            for a, b, c in zip(*np.nonzero(ok))
        ]
    return CompatibilityCheck(objs, len(gs) * len(witnesses) * len(fs), cex, kept)


def verify_congruence(
    cat: FinCategory,
    hs: HomotopicalStructure,
    report: AxiomReport | None = None,
    *,
    workers: int | None = 1,
    keep_compat_witnesses: bool = False,
) -> CongruenceReport:
    """Certify that ``~`` is a congruence on every base-domain hom-set.

    Equivalence laws are checked per hom-set ``C(X, Y)`` (``X`` in base) by
    running the reflexive/symmetric/transitive constructions on every
    element, related pair and chain.  Compatibility is checked for every
    ``f: X' -> X`` between base objects, every related pair in ``C(X, Y)``
    and every ``g: Y -> Y'``.  Failures become report entries.
    """
    if report is None:
        report = check_axioms(cat, hs, workers=workers)
    keys = [(x, y) for x in hs.base for y in cat.objects]
    laws = pmap(lambda k: _hom_set_laws(cat, hs, report, *k), keys, workers)
    parts = {h.key: h.partition for h in laws}
    configs = [(xp, x, y, yp) for xp in hs.base for x in hs.base for y in cat.objects for yp in cat.objects]
    compat = pmap(lambda o: _compat(cat, hs, report, parts, o, keep_compat_witnesses), configs, workers)
    return CongruenceReport(report.passed, laws, compat)


def constructive_classes(
    cat: FinCategory, hs: HomotopicalStructure, report: AxiomReport, x: str, y: str
) -> list[list[str]]:
    """Classes of ``C(x, y)`` obtained by closing the raw edges under the
    reflexive, symmetric and transitive constructions (no union-find)."""
    part = homotopy_classes(cat, hs, x, y)
    known: dict[tuple[str, str], HomotopyWitness] = {(w.phi, w.psi): w for w in part.witness_edges}

    def add(build) -> bool:
        try:
            w = build()
        except WitnessError:
            return False
        if (w.phi, w.psi) in known:
            return False
        known[(w.phi, w.psi)] = w
        return True

    for u in (cat.ids[m] for m in cat.hom_idx(x, y)):
        add(lambda: witness_reflexive(cat, hs, report, u))
    changed = True
    while changed:
        changed = False
        for w in list(known.values()):
            changed |= add(lambda: witness_symmetric(cat, hs, report, w))
        by_phi: dict[str, list[HomotopyWitness]] = defaultdict(list)
        for w in known.values():
            by_phi[w.phi].append(w)
        for w1 in list(known.values()):
            for w2 in by_phi[w1.psi]:
                changed |= add(lambda: witness_transitive(cat, hs, report, w1, w2))
    classes: dict[str, set[str]] = defaultdict(set)
    for u, v in known:
        classes[u].add(v)
    members = [cat.ids[m] for m in cat.hom_idx(x, y)]
    return [list(c) for c in sorted({tuple(sorted(classes[u] | {u})) for u in members})]
