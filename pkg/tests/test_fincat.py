import json

import numpy as np
import pytest

from conftest import FIXTURES
from homotopical.errors import CategoryError, ParseError
from homotopical.fincat import (
    FinCategory,
    HomIndex,
    category_from_dict,
    category_to_dict,
    compose,
    hom_set,
    load_category,
    validate_category,
)


def test_t1_and_p2_validate(t1, p2):
    assert validate_category(t1[0]).ok
    assert validate_category(p2[0]).ok


def test_bad_unit_reports_unitlaw_on_f():
    rep = validate_category(load_category(FIXTURES / "p2-bad-unit.cat.json"))
    assert not rep.ok
    assert [(v.rule, v.morphisms) for v in rep.violations] == [("UnitLaw", ("f",))]


def test_hom_sets(t1, p2):
    assert hom_set(t1[0], "*", "*") == ["id"]
    assert hom_set(p2[0], "A", "B") == ["f", "g"]
    assert hom_set(p2[0], "B", "A") == []
    with pytest.raises(CategoryError):
        hom_set(p2[0], "A", "Q")


def test_compose(t1, p2):
    assert compose(t1[0], "id", "id") == "id"
    assert compose(p2[0], "id_B", "f") == "f"
    with pytest.raises(CategoryError):
        compose(p2[0], "f", "g")


def test_hom_sets_partition_morphisms(grp):
    cat = grp.cat
    seen = [m for x in cat.objects for y in cat.objects for m in hom_set(cat, x, y)]
    assert sorted(seen) == sorted(cat.ids)


def test_index_agrees_with_table(grp):
    cat = grp.cat
    idx = HomIndex(cat)
    for m in cat.ids[:40]:
        for h, hm in idx.precompose(m).items():
            assert compose(cat, h, m) == hm
    assert sum(len(v) for v in idx.by_endpoints.values()) == len(cat.ids)


def _rules(objects, morphisms, identities, composition):
    return {v.rule for v in validate_category(FinCategory(objects, morphisms, identities, composition)).violations}


def test_violation_kinds():
    mor = lambda i, s, d: {"id": i, "src": s, "dst": d}
    assert _rules(["A"], [mor("1", "A", "A"), mor("z", "A", "Q")], {"A": "1"}, {}) == {"DanglingId"}
    # f: A -> B and g: B -> A with no entry for g∘f
    two = [mor("1A", "A", "A"), mor("1B", "B", "B"), mor("f", "A", "B"), mor("g", "B", "A")]
    ids = {"A": "1A", "B": "1B"}
    assert "Totality" in _rules(["A", "B"], two, ids, {})
    assert "Endpoint" in _rules(["A", "B"], two, ids, {("f", "f"): "f"})


def test_associativity_violation_detected():
    # a∘a = b, b∘a = a, a∘b = b breaks (a∘a)∘a = a∘(a∘a)
    cat = FinCategory(
        ["A"],
        [{"id": i, "src": "A", "dst": "A"} for i in ("1", "a", "b")],
        {"A": "1"},
        {("a", "a"): "b", ("b", "a"): "a", ("a", "b"): "b", ("b", "b"): "b"},
    )
    rep = validate_category(cat)
    assert [v.rule for v in rep.violations] == ["Associativity"] * len(rep.violations)
    assert rep.violations


def test_duplicate_ids_rejected():
    with pytest.raises(ParseError):
        FinCategory(["A", "A"], [], {}, {})


def test_violations_sorted():
    rep = validate_category(load_category(FIXTURES / "p2-bad-unit.cat.json"))
    assert rep.violations == sorted(rep.violations)


def test_round_trip(grp):
    d = category_to_dict(grp.cat)
    back = category_from_dict(json.loads(json.dumps(d)))
    assert back.ids == grp.cat.ids
    assert np.array_equal(back.table, grp.cat.table)


def test_malformed_json(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(ParseError, match="bad.json"):
        load_category(p)
    p.write_text(json.dumps({"objects": []}))
    with pytest.raises(ParseError, match="morphisms"):
        load_category(p)
