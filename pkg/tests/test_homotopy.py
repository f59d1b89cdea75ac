import pytest

import oracle
from homotopical.errors import DomainError, WitnessError
from homotopical.fincat import compose
from homotopical.homotopy import (
    HomotopyWitness,
    UnionFind,
    constructive_classes,
    find_homotopy,
    homotopy_classes,
    verify_congruence,
    verify_witness,
    witness_reflexive,
    witness_symmetric,
    witness_transitive,
    witness_whisker,
)
from homotopical.hstruct import HomotopicalStructure, check_axioms


def test_find_homotopy_p2(p2):
    cat, hs = p2
    assert find_homotopy(cat, hs, "f", "f") == HomotopyWitness("f", "f", "f")
    assert find_homotopy(cat, hs, "f", "g") is None


def test_find_homotopy_domain_errors(p2):
    cat, hs = p2
    with pytest.raises(DomainError):
        find_homotopy(cat, hs, "f", "id_B")
    only_b = HomotopicalStructure(["B"], {"B": "B"}, {"B": "id_B"}, {"B": "id_B"})
    with pytest.raises(DomainError):
        find_homotopy(cat, only_b, "f", "g")


def test_find_homotopy_grp_z2(grp):
    cat, hs = grp.cat, grp.hs
    ident = cat.identity("Z2")
    (triv,) = [cat.ids[m] for m in cat.hom_idx("Z2", "Z2") if cat.ids[m] != ident]
    assert find_homotopy(cat, hs, triv, ident) is None
    assert find_homotopy(cat, hs, ident, ident) is not None


def test_classes_small(t1, p2):
    assert homotopy_classes(*t1, "*", "*").classes == [["id"]]
    assert homotopy_classes(*p2, "A", "B").classes == [["f"], ["g"]]


def test_classes_match_brute_force(grp):
    cat, hs = grp.cat, grp.hs
    for x in hs.base:
        for y in cat.objects:
            assert homotopy_classes(cat, hs, x, y).classes == oracle.brute_classes(cat, hs, x, y)


def test_partition_invariants(grp):
    cat, hs = grp.cat, grp.hs
    part = homotopy_classes(cat, hs, "I", "IxI")
    flat = sorted(m for c in part.classes for m in c)
    assert flat == sorted(cat.ids[m] for m in cat.hom_idx("I", "IxI"))
    idx = part.class_index()
    assert all(idx[w.phi] == idx[w.psi] for w in part.witness_edges)
    assert all(part.representative(m) == min(c) for c in part.classes for m in c)
    assert part.is_equivalence


def test_constructions_t1_p2(t1, p2):
    cat, hs = t1
    rep = check_axioms(cat, hs)
    w = witness_reflexive(cat, hs, rep, "id")
    assert w.h == "id"
    assert witness_symmetric(cat, hs, rep, w).h == "id"
    assert witness_transitive(cat, hs, rep, w, w).h == "id"
    assert witness_whisker(cat, hs, rep, "id", w, "id").h == "id"

    cat, hs = p2
    rep = check_axioms(cat, hs)
    w = witness_reflexive(cat, hs, rep, "f")
    assert w == HomotopyWitness("f", "f", "f")
    assert witness_symmetric(cat, hs, rep, w).h == "f"
    assert witness_transitive(cat, hs, rep, w, w).h == "f"
    assert witness_whisker(cat, hs, rep, "id_B", w, "id_A").h == "f"


def test_constructions_grp(grp):
    cat, hs = grp.cat, grp.hs
    rep = check_axioms(cat, hs)
    part = homotopy_classes(cat, hs, "I", "I")
    edges = part.witness_edges
    for w in edges:
        assert verify_witness(cat, hs, witness_symmetric(cat, hs, rep, w))
    for w1 in edges:
        for w2 in edges:
            if w1.psi == w2.phi:
                w = witness_transitive(cat, hs, rep, w1, w2)
                assert (w.phi, w.psi) == (w1.phi, w2.psi)
    u = cat.identity("Z2")
    w = witness_reflexive(cat, hs, rep, u)
    assert compose(cat, w.h, hs.i["Z2"]) == compose(cat, w.h, hs.j["Z2"]) == u
    f = cat.ids[cat.hom_idx("Z2", "I")[0]]
    g = cat.ids[cat.hom_idx("I", "IxI")[3]]
    for w in edges:
        ww = witness_whisker(cat, hs, rep, g, w, f)
        assert ww.phi == compose(cat, g, compose(cat, w.phi, f))


def test_construction_errors(p2):
    cat, hs = p2
    rep = check_axioms(cat, hs)
    rep.p.clear()
    with pytest.raises(WitnessError):
        witness_reflexive(cat, hs, rep, "f")
    w = HomotopyWitness("f", "f", "f")
    with pytest.raises(WitnessError):
        witness_transitive(cat, hs, rep, w, HomotopyWitness("g", "g", "g"))


def test_constructive_agrees_with_union_find(grp):
    cat, hs = grp.cat, grp.hs
    rep = check_axioms(cat, hs)
    for x in hs.base:
        for y in cat.objects:
            assert constructive_classes(cat, hs, rep, x, y) == homotopy_classes(cat, hs, x, y).classes


@pytest.mark.parametrize("name", ["t1", "p2", "grp"])
def test_congruence(name, request):
    inst = request.getfixturevalue(name)
    cat, hs = (inst.cat, inst.hs) if name == "grp" else inst
    cong = verify_congruence(cat, hs)
    assert cong.passed
    assert all(c.checked >= 0 and not c.counterexamples for c in cong.compatibility)


def test_union_find_representative():
    uf = UnionFind(["c", "b", "a"])
    uf.union("c", "b")
    uf.union("b", "a")
    assert uf.find("c") == "a"
    assert uf.groups() == [["a", "b", "c"]]
