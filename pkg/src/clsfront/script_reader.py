"""Indic script text to raw CLS label sequences.

Each script is described by a JSON table keyed by hex codepoint. The reader
normalizes text, splits a word into aksharas (consonant cluster + vowel +
signs) and flattens them into labels. No language rules are applied here:
the inherent vowel of every bare consonant is kept, and visarga stays as the
extended label ``hq``.
"""

import unicodedata
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import lru_cache

from . import _data
from .cls_core import default_inventory
from .errors import EmptyWord, InvalidUtf8, MalformedData, MisplacedSign, UnknownCodepoint


class Script(str, Enum):
    DEVANAGARI = "devanagari"
    KANNADA = "kannada"
    TELUGU = "telugu"

    def __str__(self):
        return self.value


KINDS = frozenset({
    "consonant", "vowel_independent", "matra", "virama", "nukta",
    "anusvara", "visarga", "chandrabindu", "ignore",
})

_JOINERS = str.maketrans("", "", "\u200c\u200d\ufeff")

_HOMORGANIC = {"velar": "ng", "palatal": "nj", "retroflex": "nx", "dental": "n", "labial": "m"}
# approximants, sibilants and h take a plain m, not a homorganic nasal
_NON_STOPS = frozenset({"y", "r", "l", "w", "sh", "sx", "s", "h", "lx", "zh", "rx"})


@dataclass(frozen=True)
class Akshara:
    consonants: tuple = ()
    vowel: str | None = "a"
    nasalized: bool = False
    trailing: str | None = None


@dataclass(frozen=True)
class ClsSequence:
    """Labels for one word (or one break marker) with per-label nasalization."""

    labels: tuple
    nasal_flags: tuple = None
    word: str = ""
    script: str | None = None
    kind: str = "word"

    def __post_init__(self):
        labels = tuple(self.labels)
        flags = (False,) * len(labels) if self.nasal_flags is None else tuple(bool(f) for f in self.nasal_flags)
        if len(flags) != len(labels):
            raise ValueError(f"{len(flags)} nasal flags for {len(labels)} labels")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "nasal_flags", flags)

    def __len__(self):
        return len(self.labels)

    def pairs(self):
        return list(zip(self.labels, self.nasal_flags))

    def with_pairs(self, pairs):
        pairs = list(pairs)
        return replace(self, labels=tuple(p[0] for p in pairs), nasal_flags=tuple(p[1] for p in pairs))

    @property
    def is_break(self):
        return self.kind == "break"


@dataclass(frozen=True)
class ScriptTable:
    script: str
    block: tuple
    entries: dict = field(repr=False)
    nukta_pairs: dict = field(repr=False)

    def get(self, char):
        return self.entries.get(ord(char))

    def in_block(self, char):
        return self.block[0] <= ord(char) <= self.block[1]

    def emittable_labels(self):
        """Every label ``word_to_raw_cls`` can produce for this script."""
        out = set(self.nukta_pairs.values())
        for kind, label in self.entries.values():
            if kind in ("consonant", "vowel_independent", "matra"):
                out.add(label)
            elif kind == "visarga":
                out.add("hq")
            elif kind == "anusvara":
                out.update(_HOMORGANIC.values())
        return out


def load_script_table(script, data_dir=None, inv=None):
    script = Script(script)
    path = _data.resolve(data_dir) / "scripts" / f"{script.value}.json"
    return _cached_table(str(path), inv)


@lru_cache(maxsize=None)
def _cached_table(path, inv):
    raw = _data.read_json(path)
    if "schema_version" not in raw:
        raise MalformedData(f"{path}: schema_version missing")
    inv = inv or default_inventory()
    entries = {}
    for hexcp, row in raw["codepoints"].items():
        kind, label = row.get("kind"), row.get("label")
        if kind not in KINDS:
            raise MalformedData(f"{path}: {hexcp}: unknown kind {kind!r}")
        if label is not None and label not in inv:
            raise MalformedData(f"{path}: {hexcp}: label {label!r} not in inventory")
        entries[int(hexcp, 16)] = (kind, label)
    pairs = {}
    for hexcp, label in raw.get("nukta_pairs", {}).items():
        if label not in inv:
            raise MalformedData(f"{path}: nukta pair {hexcp}: label {label!r} not in inventory")
        pairs[int(hexcp, 16)] = label
    lo, hi = (int(x, 16) for x in raw["block"])
    return ScriptTable(raw["script"], (lo, hi), entries, pairs)


def normalize_text(raw):
    """NFC-compose text and drop zero-width joiners.

    Nukta letters excluded from composition (U+0958..U+095F and friends)
    come out as base letter + nukta.
    """
    if isinstance(raw, (bytes, bytearray)):
        try:
            raw = bytes(raw).decode("utf-8")
        except UnicodeDecodeError as exc:
            raise InvalidUtf8(str(exc)) from None
    try:
        raw.encode("utf-8")
    except UnicodeEncodeError as exc:
        raise InvalidUtf8(str(exc)) from None
    return unicodedata.normalize("NFC", raw.translate(_JOINERS))


class _Building:
    __slots__ = ("consonants", "vowel", "nasalized", "trailing", "has_matra", "open", "base_cp")

    def __init__(self, consonants, vowel):
        self.consonants = consonants
        self.vowel = vowel
        self.nasalized = False
        self.trailing = None
        self.has_matra = False
        self.open = False
        self.base_cp = None

    def freeze(self):
        return Akshara(tuple(self.consonants), self.vowel, self.nasalized, self.trailing)


def segment_aksharas(word, script, table=None):
    """Split a normalized word into aksharas.

    A virama joins the next consonant into the same cluster; a word-final
    virama leaves the cluster without a vowel.
    """
    script = Script(script)
    table = table or load_script_table(script)
    if not word:
        raise EmptyWord("empty word")

    out = []
    cur = None
    for i, ch in enumerate(word):
        entry = table.get(ch)
        if entry is None:
            reason = None if not table.in_block(ch) else "unassigned in the script table"
            raise UnknownCodepoint(ch, i, script.value, reason)
        kind, label = entry

        def misplaced(why):
            return MisplacedSign(ch, i, script.value, why)

        if kind == "consonant":
            if cur is not None and cur.open:
                cur.consonants.append(label)
                cur.vowel = "a"
                cur.open = False
            else:
                cur = _Building([label], "a")
                out.append(cur)
            cur.base_cp = ord(ch)
            continue
        if kind == "nukta":
            if cur is None or cur.base_cp is None:
                raise misplaced("nukta without a base consonant")
            # letters with no dedicated row keep the base letter's label
            cur.consonants[-1] = table.nukta_pairs.get(cur.base_cp, cur.consonants[-1])
            cur.base_cp = None
            continue
        if kind == "ignore":
            continue

        if cur is not None:
            cur.base_cp = None
        if kind == "vowel_independent":
            cur = _Building([], label)
            out.append(cur)
        elif kind == "matra":
            if cur is None or not cur.consonants or cur.has_matra or cur.open or cur.trailing:
                raise misplaced("vowel sign without a consonant")
            cur.vowel = label
            cur.has_matra = True
        elif kind == "virama":
            if cur is None or not cur.consonants or cur.has_matra or cur.open or cur.trailing:
                raise misplaced("virama without a consonant")
            cur.vowel = None
            cur.open = True
        elif kind in ("anusvara", "visarga"):
            if cur is None or cur.trailing or cur.vowel is None:
                raise misplaced(f"{kind} without a vowel")
            cur.trailing = kind
        elif kind == "chandrabindu":
            if cur is None:
                raise misplaced("chandrabindu at word start")
            cur.nasalized = True
    if not out:
        raise EmptyWord(f"no letters in {word!r}")
    return [a.freeze() for a in out]


def _anusvara_label(next_consonant, inv):
    if next_consonant is None:
        return "m"
    base = inv.fallback(next_consonant)
    if base in _NON_STOPS:
        return "m"
    return _HOMORGANIC.get(inv.lookup(base).features.place, "m")


def word_to_raw_cls(word, script, table=None, inv=None):
    """Flatten a normalized word into its script-neutral label sequence."""
    script = Script(script)
    inv = inv or default_inventory()
    aksharas = segment_aksharas(word, script, table)
    labels, flags = [], []
    for idx, ak in enumerate(aksharas):
        for c in ak.consonants:
            labels.append(c)
            flags.append(False)
        if ak.vowel is not None:
            labels.append(ak.vowel)
            flags.append(ak.nasalized)
        if ak.trailing == "anusvara":
            nxt = aksharas[idx + 1] if idx + 1 < len(aksharas) else None
            labels.append(_anusvara_label(nxt.consonants[0] if nxt and nxt.consonants else None, inv))
            flags.append(False)
        elif ak.trailing == "visarga":
            labels.append("hq")
            flags.append(False)
    return ClsSequence(labels, flags, word=word, script=script.value)
