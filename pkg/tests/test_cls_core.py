import dataclasses
import json

import pytest

from clsfront.cls_core import (
    Features,
    Inventory,
    Phone,
    default_inventory,
    fallback,
    load_inventory,
    lookup,
    validate_inventory,
)
from clsfront.errors import MalformedData, UnknownLabel


def test_lookup_velar_plosive(inv):
    k = inv.lookup("k")
    assert k.category == "consonant"
    assert k.features.place == "velar"
    assert not k.features.aspirated


def test_lookup_long_vowel(inv):
    aa = inv.lookup("aa")
    assert aa.category == "vowel"
    assert aa.features.length == "long"


def test_lookup_unknown():
    with pytest.raises(UnknownLabel):
        lookup("zz")


@pytest.mark.parametrize("label, base", [("kq", "k"), ("gq", "g"), ("dxq", "dx"), ("a", "a"), ("khq", "kh"), ("hq", "h"), ("q?", "h")])
def test_fallback(label, base):
    assert fallback(label) == base


def test_fallback_unknown():
    with pytest.raises(UnknownLabel):
        fallback("zz")


def test_shipped_inventory_is_valid(inv):
    report = validate_inventory(inv)
    assert report.ok, report.issues
    assert len(inv.base_labels) == 72


def test_lookup_is_injective(inv):
    labels = [p.label for p in inv]
    assert len(labels) == len(set(labels))
    for lab in labels:
        assert inv.lookup(lab).label == lab


def test_long_and_short_vowels_distinct(inv):
    for short, long_ in [("a", "aa"), ("i", "ii"), ("u", "uu"), ("e", "ee"), ("o", "oo")]:
        assert inv.lookup(short).features.length == "short"
        assert inv.lookup(long_).features.length == "long"


def test_fallback_is_one_step_closure(inv):
    for p in inv:
        once = inv.fallback(p.label)
        assert inv.fallback(once) == once
        assert once in inv.base_labels


def test_extended_rows_document_place_proximity(inv):
    for p in inv:
        if p.extended:
            assert p.rationale
            target = inv.lookup(p.fallback)
            assert inv.places_close(p.features.place, target.features.place)


def test_fallback_preserves_length(inv):
    for p in inv:
        assert inv.lookup(inv.fallback(p.label)).features.length == p.features.length


def _drop_one_base(inv):
    phones = list(inv.phones)
    victim = next(p for p in phones if p.category == "modifier")
    phones.remove(victim)
    return Inventory(phones, inv.version, [tuple(s) for s in inv.place_proximity])


def test_validate_flags_wrong_base_count(inv):
    report = validate_inventory(_drop_one_base(inv))
    assert any("base count 71" in issue for issue in report)


def test_validate_flags_missing_fallback(inv):
    phones = [dataclasses.replace(p, fallback=None) if p.label == "gq" else p for p in inv.phones]
    report = validate_inventory(Inventory(phones, inv.version, [tuple(s) for s in inv.place_proximity]))
    assert any("'gq'" in issue and "no fallback" in issue for issue in report)


def test_validate_flags_fallback_to_extended(inv):
    phones = [dataclasses.replace(p, fallback="hq") if p.label == "q?" else p for p in inv.phones]
    report = validate_inventory(Inventory(phones, inv.version, [tuple(s) for s in inv.place_proximity]))
    assert any("'q?'" in issue for issue in report)


def test_validate_flags_duplicates_and_counts():
    phones = [Phone("a", "vowel", Features(length="short"))] * 2
    report = validate_inventory(Inventory(phones))
    issues = " | ".join(report)
    assert "duplicate label 'a'" in issues
    assert "base vowel count" in issues
    assert "base consonant count" in issues


def test_validate_flags_missing_proximity_row(inv):
    report = validate_inventory(Inventory(inv.phones, inv.version, place_proximity=()))
    assert any("proximity" in issue and "'kq'" in issue for issue in report)


def test_load_requires_schema_version(tmp_path):
    path = tmp_path / "inv.json"
    path.write_text(json.dumps({"phones": []}), encoding="utf-8")
    with pytest.raises(MalformedData):
        load_inventory(path)


def test_inventory_file_rows_have_required_fields():
    from clsfront._data import PACKAGE_DATA

    raw = json.loads((PACKAGE_DATA / "inventory.json").read_text(encoding="utf-8"))
    assert raw["schema_version"] == 1
    assert raw["reconstructed"] is True
    for row in raw["phones"]:
        assert {"label", "category", "features", "extended", "fallback"} <= set(row)
        if row["extended"]:
            assert row["rationale"]


def test_default_inventory_is_cached():
    assert default_inventory() is default_inventory()
