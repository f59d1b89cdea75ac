import json
import random

import pytest

import oracle
from homotopical.errors import BudgetExceeded, ParseError
from homotopical.fincat import validate_category
from homotopical.homotopy import homotopy_classes
from homotopical.hstruct import check_axioms
from homotopical.instances import (
    FiniteGroupoid,
    cyclic_group,
    enumerate_functors,
    gen_groupoid_cylinder,
    gen_trivial,
    interval,
    load_groupoid,
    natural_iso_classes,
    product,
    random_category,
    terminal_groupoid,
)

ENGINE = {"Z2": lambda: cyclic_group(2, "Z2"), "I": interval}


def as_names(g, h, f):
    d = f.describe(g, h)
    return d["objects"], d["arrows"]


def test_oracle_values_frozen():
    for (a, b), n in oracle.FUNCTOR_COUNTS.items():
        g, h = oracle.GROUPOIDS[a](), oracle.GROUPOIDS[b]()
        assert len(oracle.functors(g, h)) == n
        assert len(oracle.iso_classes(g, h)) == oracle.CLASS_COUNTS[(a, b)]


@pytest.mark.parametrize("pair", sorted(oracle.FUNCTOR_COUNTS))
def test_enumeration_matches_oracle(pair):
    a, b = pair
    g, h = ENGINE[a](), ENGINE[b]()
    got = sorted(json.dumps(as_names(g, h, f), sort_keys=True) for f in enumerate_functors(g, h))
    want = sorted(json.dumps(f, sort_keys=True) for f in oracle.functors(oracle.GROUPOIDS[a](), oracle.GROUPOIDS[b]()))
    assert got == want


@pytest.mark.parametrize("pair", sorted(oracle.FUNCTOR_COUNTS))
def test_natural_iso_matches_oracle(pair):
    a, b = pair
    g, h = ENGINE[a](), ENGINE[b]()
    got = sorted(sorted(json.dumps(as_names(g, h, f), sort_keys=True) for f in c) for c in natural_iso_classes(g, h))
    want = sorted(
        sorted(json.dumps(f, sort_keys=True) for f in c)
        for c in oracle.iso_classes(oracle.GROUPOIDS[a](), oracle.GROUPOIDS[b]())
    )
    assert got == want


def test_enumeration_small_cases():
    t = terminal_groupoid()
    assert len(enumerate_functors(t, t)) == 1
    z2, i = cyclic_group(2), interval()
    fs = enumerate_functors(i, z2)
    assert len(fs) == 2 and fs == sorted(set(fs))
    assert len(enumerate_functors(cyclic_group(3), cyclic_group(3))) == 3


def test_budget_exceeded_names_hom_set():
    ixi = product(interval(), interval())
    with pytest.raises(BudgetExceeded, match="IxI -> IxI"):
        enumerate_functors(ixi, ixi, budget=10)


def test_groupoid_validation(tmp_path):
    assert not cyclic_group(4).problems()
    assert not product(cyclic_group(2), interval()).problems()
    bad = cyclic_group(2).to_dict()
    bad["inverses"] = {"e": "e", "s": "e"}
    p = tmp_path / "bad.grpd.json"
    p.write_text(json.dumps(bad))
    with pytest.raises(ParseError, match="bad.grpd.json"):
        load_groupoid(p)
    good = tmp_path / "z2.grpd.json"
    good.write_text(json.dumps(cyclic_group(2, "Z2").to_dict()))
    assert load_groupoid(good) == FiniteGroupoid.from_dict(cyclic_group(2, "Z2").to_dict())


def test_cylinder_bundle(grp):
    cat, hs = grp.cat, grp.hs
    assert validate_category(cat).ok
    assert cat.objects == ("Z2", "I", "Z2xI", "IxI")
    assert hs.hat == {"Z2": "Z2xI", "I": "IxI"}
    for x in hs.base:
        for y in hs.base:
            assert len(cat.hom_idx(x, y)) == oracle.FUNCTOR_COUNTS[(x, y)]
    assert check_axioms(cat, hs).passed


def test_cylinder_classes_equal_natural_iso(grp):
    cat, hs = grp.cat, grp.hs
    for x in hs.base:
        for y in hs.base:
            g, h = grp.groupoids[x], grp.groupoids[y]
            want = sorted(sorted(grp.morphism_of(x, y, f) for f in c) for c in natural_iso_classes(g, h))
            assert homotopy_classes(cat, hs, x, y).classes == want


def test_trivial_structure(p2):
    bundle = gen_trivial(p2[0])
    assert check_axioms(bundle.cat, bundle.hs).passed
    assert homotopy_classes(bundle.cat, bundle.hs, "A", "B").classes == [["f"], ["g"]]


def test_random_category_valid():
    rng = random.Random(7)
    for _ in range(10):
        cat = random_category(rng)
        assert validate_category(cat).ok
        assert len(cat.objects) <= 8 and len(cat.morphisms) <= 60


def test_duplicate_groupoid_names():
    with pytest.raises(ParseError):
        gen_groupoid_cylinder([interval(), interval()])
