"""Hypothesis strategies for well-formed Indic words and label sequences."""

import json

from hypothesis import strategies as st

from clsfront import _data
from clsfront.cls_core import default_inventory

KANNADA_OFFSET = 0x380


def _table(script):
    path = _data.default_data_dir() / "scripts" / f"{script}.json"
    return json.loads(path.read_text(encoding="utf-8"))


_DEVA = _table("devanagari")
_KNDA = _table("kannada")


def _by_kind(codepoints, kind, keep=lambda cp: True):
    return sorted(chr(int(h, 16)) for h, row in codepoints.items() if row["kind"] == kind and keep(int(h, 16)))


def _shared(cp):
    """Devanagari codepoints whose Kannada twin (by block offset) carries the same row."""
    twin = _KNDA["codepoints"].get(f"{cp + KANNADA_OFFSET:04X}")
    return twin == _DEVA["codepoints"][f"{cp:04X}"]


class Letters:
    def __init__(self, keep=lambda cp: True):
        cps = _DEVA["codepoints"]
        self.consonants = _by_kind(cps, "consonant", keep)
        self.vowels = _by_kind(cps, "vowel_independent", keep)
        self.matras = _by_kind(cps, "matra", keep)
        self.signs = [c for kind in ("anusvara", "visarga") for c in _by_kind(cps, kind, keep)]
        self.chandrabindu = _by_kind(cps, "chandrabindu", keep)
        self.nuktable = sorted(chr(int(h, 16)) for h in _DEVA["nukta_pairs"] if keep(int(h, 16)))


ALL = Letters()
SHARED = Letters(_shared)
VIRAMA = "्"
NUKTA = "़"


@st.composite
def _consonant(draw, letters, nukta):
    c = draw(st.sampled_from(letters.consonants))
    if nukta and c in letters.nuktable and draw(st.booleans()):
        c += NUKTA
    return c


@st.composite
def akshara_text(draw, letters=ALL, nukta=True):
    if draw(st.integers(0, 4)) == 0:
        out = draw(st.sampled_from(letters.vowels))
    else:
        n = draw(st.integers(1, 3))
        out = VIRAMA.join(draw(_consonant(letters, nukta)) for _ in range(n))
        if draw(st.booleans()):
            out += draw(st.sampled_from(letters.matras))
    roll = draw(st.integers(0, 5))
    if roll == 0 and letters.signs:
        out += draw(st.sampled_from(letters.signs))
    elif roll == 1 and letters.chandrabindu:
        out += letters.chandrabindu[0]
    return out


@st.composite
def devanagari_word(draw, letters=ALL, nukta=True, max_aksharas=5):
    """A well-formed word; may end in a bare virama."""
    word = "".join(draw(st.lists(akshara_text(letters, nukta), min_size=1, max_size=max_aksharas)))
    if word[-1] not in {*letters.signs, *letters.chandrabindu, *letters.matras, *letters.vowels} \
            and draw(st.integers(0, 4)) == 0:
        word += VIRAMA
    return word


def to_kannada(word):
    return "".join(chr(ord(ch) + KANNADA_OFFSET) for ch in word)


def shared_word_pair():
    """Devanagari word and its Kannada transliteration by block offset."""
    return devanagari_word(SHARED).map(lambda w: (w, to_kannada(w)))


def _labels(category):
    inv = default_inventory()
    return sorted(p.label for p in inv.phones if p.category == category)


BASE_VOWELS = [v for v in _labels("vowel") if not default_inventory().lookup(v).extended]
BASE_CONSONANTS = [c for c in _labels("consonant") if not default_inventory().lookup(c).extended]
EXTENDED = sorted(p.label for p in default_inventory().phones if p.extended)


def label_sequence(min_size=1, max_size=12, extended=False):
    """Random consonant/vowel label lists, biased toward schwa so rules have work to do."""
    pool = BASE_VOWELS + BASE_CONSONANTS + (EXTENDED if extended else [])
    return st.lists(st.one_of(st.just("a"), st.sampled_from(pool)), min_size=min_size, max_size=max_size)
