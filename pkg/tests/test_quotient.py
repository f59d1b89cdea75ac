import itertools

import pytest

import oracle
from homotopical.banach import sampled_category
from homotopical.errors import CongruenceError, DomainError
from homotopical.fincat import compose, hom_set, validate_category
from homotopical.homotopy import homotopy_classes, verify_congruence, verify_witness
from homotopical.hstruct import HomotopicalStructure
from homotopical.instances import cyclic_group, gen_groupoid_cylinder, interval
from homotopical.quotient import homotopy_equivalences, is_contractible, quotient_category


def test_t1_and_p2_quotients_are_copies(t1, p2):
    for cat, hs in (t1, p2):
        q = quotient_category(cat, hs)
        assert validate_category(q.category).ok
        assert q.category.ids == cat.ids
        assert all(k == v for k, v in q.class_map.items())


def test_grp_quotient_matches_oracle(grp):
    cat, hs = grp.cat, grp.hs
    q = quotient_category(cat, hs)
    assert validate_category(q.category).ok
    for x in hs.base:
        for y in hs.base:
            assert len(hom_set(q.category, x, y)) == oracle.CLASS_COUNTS[(x, y)]


def test_grp_quotient_composition_against_oracle(grp):
    # classes come from the oracle's natural-iso partition, composites from dict composition
    cat, hs = grp.cat, grp.hs
    q = quotient_category(cat, hs)
    gps = {n: oracle.GROUPOIDS[n]() for n in hs.base}

    def named(mid):
        a, b, f = grp.functors[mid]
        d = f.describe(grp.groupoids[a], grp.groupoids[b])
        return d["objects"], d["arrows"]

    def oracle_class(a, b, functor):
        for n, c in enumerate(oracle.iso_classes(gps[a], gps[b])):
            if any(oracle.naturally_isomorphic(gps[a], gps[b], m, functor) for m in c):
                return n

    for f, g in itertools.product(q.category.ids, repeat=2):
        a, b = q.category.src(f), q.category.dst(f)
        if b != q.category.src(g):
            continue
        c = q.category.dst(g)
        (fo, fa), (go, ga) = named(f), named(g)
        composite = ({x: go[y] for x, y in fo.items()}, {x: ga[y] for x, y in fa.items()})
        got = compose(q.category, g, f)
        assert oracle_class(a, c, named(got)) == oracle_class(a, c, composite)


def test_class_map_constant_on_classes(grp):
    cat, hs = grp.cat, grp.hs
    q = quotient_category(cat, hs)
    for x in hs.base:
        for y in hs.base:
            for c in homotopy_classes(cat, hs, x, y).classes:
                assert {q.class_map[m] for m in c} == {min(c)}


def test_refuses_failed_congruence(p2_bad_hat):
    cat, hs = p2_bad_hat
    with pytest.raises(CongruenceError):
        quotient_category(cat, hs, verify_congruence(cat, hs))


def test_equivalences_small(t1, p2):
    pairs = homotopy_equivalences(*t1, "*", "*")
    assert [(p.u, p.v) for p in pairs] == [("id", "id")]
    assert homotopy_equivalences(*p2, "A", "B") == []
    assert is_contractible(*t1, "*", "*").contractible
    res = is_contractible(*p2, "A", "B")
    assert not res.contractible and res.pair is None
    with pytest.raises(DomainError):
        homotopy_equivalences(p2[0], HomotopicalStructure(["A"], {"A": "A"}, {"A": "id_A"}, {"A": "id_A"}), "A", "B")


def test_equivalences_between_isomorphic_groupoids():
    bundle = gen_groupoid_cylinder([cyclic_group(2, "Z2"), cyclic_group(2, "Y2"), interval()])
    cat, hs = bundle.cat, bundle.hs
    pairs = homotopy_equivalences(cat, hs, "Z2", "Y2")
    assert pairs
    for p in pairs:
        assert verify_witness(cat, hs, p.vu_witness) and verify_witness(cat, hs, p.uv_witness)
    assert not homotopy_equivalences(cat, hs, "Z2", "I")


def test_homotopy_equivalence_is_an_equivalence(grp):
    cat, hs = grp.cat, grp.hs
    rel = {(x, y): bool(homotopy_equivalences(cat, hs, x, y)) for x in hs.base for y in hs.base}
    assert all(rel[(x, x)] for x in hs.base)
    assert all(rel[(x, y)] == rel[(y, x)] for x, y in rel)
    for x, y, z in itertools.product(hs.base, repeat=3):
        if rel[(x, y)] and rel[(y, z)]:
            assert rel[(x, z)]


def test_interval_is_contractible():
    # I is equivalent to a point; Z2 is not
    bundle = gen_groupoid_cylinder([cyclic_group(1, "T"), interval(), cyclic_group(2, "Z2")])
    assert is_contractible(bundle.cat, bundle.hs, "I", "T").contractible
    assert not is_contractible(bundle.cat, bundle.hs, "Z2", "T").contractible


def test_banach_bridge_dimension_two_contractible():
    bundle = sampled_category([0, 2])
    assert validate_category(bundle.cat).ok
    res = is_contractible(bundle.cat, bundle.hs, "E2", "E0")
    assert res.contractible
    assert verify_witness(bundle.cat, bundle.hs, res.pair.vu_witness)
