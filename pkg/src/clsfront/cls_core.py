"""Extended common label set (CLS): phone inventory and fallbacks.

The inventory ships as ``data/inventory.json``. It holds 72 base labels
(vowels, consonants and modifier tokens) plus extended labels for nukta
letters and borrowed sounds. Each extended label names the base label that
replaces it when a synthesizer has no such sound.
"""

from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

from . import _data
from .errors import MalformedData, UnknownLabel

BASE_SIZE = 72
VOWEL_RANGE = (15, 18)
CONSONANT_RANGE = (35, 38)

CATEGORIES = ("vowel", "consonant", "modifier")
LENGTHS = ("short", "long", "n/a")
PLACES = ("velar", "palatal", "retroflex", "dental", "labial", "glottal", "uvular", "n/a")


@dataclass(frozen=True)
class Features:
    length: str = "n/a"
    aspirated: bool = False
    voiced: bool = False
    place: str = "n/a"
    nasal: bool = False


@dataclass(frozen=True)
class Phone:
    label: str
    category: str
    features: Features = Features()
    extended: bool = False
    fallback: str | None = None
    rationale: str | None = None

    @property
    def is_vowel(self):
        return self.category == "vowel"

    @property
    def is_consonant(self):
        return self.category == "consonant"


@dataclass
class ValidationReport:
    issues: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.issues

    def __iter__(self):
        return iter(self.issues)

    def __len__(self):
        return len(self.issues)


class Inventory:
    """Immutable label table with lookup and fallback."""

    def __init__(self, phones, version="unversioned", place_proximity=()):
        self.phones = tuple(phones)
        self.version = version
        self.place_proximity = tuple(frozenset(p) for p in place_proximity)
        self._by_label = {}
        for p in self.phones:
            self._by_label.setdefault(p.label, p)

    def __contains__(self, label):
        return label in self._by_label

    def __iter__(self):
        return iter(self.phones)

    def __len__(self):
        return len(self._by_label)

    def lookup(self, label):
        try:
            return self._by_label[label]
        except (KeyError, TypeError):
            raise UnknownLabel(label) from None

    def fallback(self, label):
        phone = self.lookup(label)
        return phone.fallback if phone.extended else phone.label

    def is_vowel(self, label):
        return self.lookup(label).category == "vowel"

    def is_consonant(self, label):
        return self.lookup(label).category == "consonant"

    def labels(self, *, category=None, extended=None):
        return [
            p.label for p in self.phones
            if (category is None or p.category == category)
            and (extended is None or p.extended == extended)
        ]

    @property
    def base_labels(self):
        return frozenset(self.labels(extended=False))

    def places_close(self, a, b):
        return a == b or frozenset((a, b)) in self.place_proximity

    def short_form(self, label):
        """Short counterpart of a long vowel (``aa`` -> ``a``); other labels unchanged."""
        return _SHORT_FORMS.get(label, label)


_SHORT_FORMS = {"aa": "a", "ii": "i", "uu": "u", "ee": "e", "oo": "o", "ruu": "ru"}


def validate_inventory(inv):
    """Check every inventory invariant; violations come back as report entries."""
    report = ValidationReport()
    issues = report.issues

    seen = set()
    for p in inv.phones:
        if not p.label:
            issues.append("empty label")
        elif p.label in seen:
            issues.append(f"duplicate label {p.label!r}")
        seen.add(p.label)
        if p.category not in CATEGORIES:
            issues.append(f"{p.label!r}: unknown category {p.category!r}")
        if p.features.length not in LENGTHS:
            issues.append(f"{p.label!r}: unknown length {p.features.length!r}")
        if p.features.place not in PLACES:
            issues.append(f"{p.label!r}: unknown place {p.features.place!r}")
        if p.category == "vowel" and p.features.length == "n/a":
            issues.append(f"{p.label!r}: vowel without length")

    base = [p for p in inv.phones if not p.extended]
    if len(base) != BASE_SIZE:
        issues.append(f"base count {len(base)} != {BASE_SIZE}")
    n_vowels = sum(p.category == "vowel" for p in base)
    n_cons = sum(p.category == "consonant" for p in base)
    if not VOWEL_RANGE[0] <= n_vowels <= VOWEL_RANGE[1]:
        issues.append(f"base vowel count {n_vowels} outside {VOWEL_RANGE[0]}-{VOWEL_RANGE[1]}")
    if not CONSONANT_RANGE[0] <= n_cons <= CONSONANT_RANGE[1]:
        issues.append(f"base consonant count {n_cons} outside {CONSONANT_RANGE[0]}-{CONSONANT_RANGE[1]}")

    base_labels = {p.label for p in base}
    for p in inv.phones:
        if not p.extended:
            if p.fallback not in (None, p.label):
                issues.append(f"base label {p.label!r} declares fallback {p.fallback!r}")
            continue
        if not p.fallback:
            issues.append(f"extended label {p.label!r} has no fallback")
            continue
        if p.fallback not in base_labels:
            issues.append(f"extended label {p.label!r} falls back to non-base {p.fallback!r}")
            continue
        if not p.rationale:
            issues.append(f"extended label {p.label!r} has no rationale")
        target = inv.lookup(p.fallback)
        if not inv.places_close(p.features.place, target.features.place):
            issues.append(
                f"extended label {p.label!r}: no proximity row for "
                f"{p.features.place} -> {target.features.place}"
            )
        if p.features.length != target.features.length:
            issues.append(f"extended label {p.label!r}: fallback changes vowel length")
    return report


def _phone_from_row(row, where):
    try:
        feats = Features(**row.get("features", {}))
        return Phone(
            label=row["label"],
            category=row["category"],
            features=feats,
            extended=bool(row.get("extended", False)),
            fallback=row.get("fallback"),
            rationale=row.get("rationale"),
        )
    except (KeyError, TypeError) as exc:
        raise MalformedData(f"{where}: bad phone row {row!r}: {exc}") from None


def load_inventory(path=None):
    """Read an inventory file. ``path`` defaults to the data directory's ``inventory.json``."""
    path = Path(path) if path is not None else _data.default_data_dir() / "inventory.json"
    raw = _data.read_json(path)
    if "schema_version" not in raw:
        raise MalformedData(f"{path}: schema_version missing")
    phones = [_phone_from_row(r, path) for r in raw.get("phones", [])]
    proximity = [r["places"] for r in raw.get("place_proximity", [])]
    return Inventory(phones, version=raw.get("version", "unversioned"), place_proximity=proximity)


@lru_cache(maxsize=None)
def _cached_inventory(path):
    return load_inventory(path)


def default_inventory(data_dir=None):
    return _cached_inventory(str(_data.resolve(data_dir) / "inventory.json"))


def lookup(label, inv=None):
    return (inv or default_inventory()).lookup(label)


def fallback(label, inv=None):
    return (inv or default_inventory()).fallback(label)
