"""Family rules and language rule packs over raw CLS sequences.

The rules are picked by the target language's phonotactics, not by its script.
A profile names a rule family (``IA`` deletes schwas, ``DR`` keeps them) and
an ordered list of packs. ``apply_rules`` runs the pre-family packs, the
family rule, the post-family packs, then maps extended labels to their base
fallbacks.

Packs are JSON files. A pack either names a builtin transform
(``visarga_rules``, ``epenthesis``) or carries an ordered list of rewrite
rules::

    {"match": ["khq"], "replace": ["kh"], "left": ["@vowel"], "right": ["#"]}

``left``/``right`` are optional contexts. Pattern items are labels, ``@vowel``,
``@consonant``, ``@any`` or ``#`` (word edge). Rewriting is one left-to-right
pass; at each position the first rule in file order that matches wins and
the scan resumes after the rewritten span.
"""

import unicodedata
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

from . import _data
from .cls_core import default_inventory
from .errors import MalformedData, UnknownCodepoint, UnknownRulePack
from .script_reader import ClsSequence, Script, load_script_table, normalize_text, word_to_raw_cls


class Family(str, Enum):
    IA = "IA"
    DR = "DR"

    def __str__(self):
        return self.value


STAGES = ("pre_family", "post_family")
SIBILANTS = frozenset({"sh", "sx", "s"})
_CLASSES = ("@vowel", "@consonant", "@any")


@dataclass(frozen=True)
class LanguageProfile:
    name: str
    script: Script
    family: Family
    rule_packs: tuple = ()
    exceptions: dict = field(default_factory=dict)
    priors: dict = field(default_factory=dict)
    notes: str = ""
    phones: frozenset | None = None


@dataclass(frozen=True)
class RewriteRule:
    match: tuple
    replace: tuple
    left: tuple = ()
    right: tuple = ()
    note: str = ""


@dataclass(frozen=True)
class RulePack:
    name: str
    stage: str
    rules: tuple = ()
    builtin: str | None = None
    outputs: frozenset = frozenset()
    notes: str = ""


# -- builtin transforms ----------------------------------------------------

def schwa_delete(seq, inv=None):
    """Indo-Aryan schwa deletion.

    First a word-final ``a`` after a consonant goes, provided another vowel
    remains. Then one left-to-right pass drops a medial ``a`` in the context
    vowel, consonant, _, consonant, vowel, unless it is the first vowel or the
    deletion would leave three consonants in a row. Nasalized schwas stay.
    """
    inv = inv or default_inventory()
    pairs = seq.pairs()
    is_v = [inv.is_vowel(lab) for lab, _ in pairs]
    is_c = [inv.is_consonant(lab) for lab, _ in pairs]

    def droppable(i):
        lab, nasal = pairs[i]
        return lab == "a" and not nasal

    if len(pairs) >= 2 and droppable(-1) and is_c[-2] and sum(is_v) >= 2:
        pairs, is_v, is_c = pairs[:-1], is_v[:-1], is_c[:-1]

    first_vowel = is_v.index(True) if True in is_v else None
    i = 2
    while i + 2 < len(pairs):
        if (droppable(i) and i != first_vowel
                and is_v[i - 2] and is_c[i - 1] and is_c[i + 1] and is_v[i + 2]
                and _run_after_drop(is_c, i) < 3):
            del pairs[i], is_v[i], is_c[i]
            continue
        i += 1
    return seq.with_pairs(pairs)


def _run_after_drop(is_c, i):
    run = 0
    j = i - 1
    while j >= 0 and is_c[j]:
        run += 1
        j -= 1
    j = i + 1
    while j < len(is_c) and is_c[j]:
        run += 1
        j += 1
    return run


def visarga_rules(seq, inv=None):
    """Positional visarga (``hq``).

    Word-final: ``h`` plus an echo of the preceding vowel (``ai`` echoes
    ``i``, ``au`` echoes ``u``, others their short form). Before a sibilant:
    a copy of that sibilant. Anywhere else: ``h``.
    """
    inv = inv or default_inventory()
    pairs = seq.pairs()
    out = []
    for i, (lab, nasal) in enumerate(pairs):
        if lab != "hq":
            out.append((lab, nasal))
            continue
        nxt = pairs[i + 1][0] if i + 1 < len(pairs) else None
        prev = pairs[i - 1][0] if i > 0 else None
        if nxt is None:
            out.append(("h", False))
            if prev is not None and inv.is_vowel(prev):
                out.append((_echo(prev, inv), False))
        elif nxt in SIBILANTS:
            out.append((nxt, False))
        else:
            out.append(("h", False))
    return seq.with_pairs(out)


def _echo(vowel, inv):
    if vowel == "ai":
        return "i"
    if vowel == "au":
        return "u"
    return inv.short_form(vowel)


def epenthesis(seq, inv=None):
    """Move a word-final short ``i``/``u`` in front of the preceding single consonant."""
    inv = inv or default_inventory()
    pairs = seq.pairs()
    if (len(pairs) >= 3 and pairs[-1][0] in ("i", "u")
            and inv.is_consonant(pairs[-2][0]) and inv.is_vowel(pairs[-3][0])):
        pairs = pairs[:-2] + [pairs[-1], pairs[-2]]
    return seq.with_pairs(pairs)


BUILTINS = {
    "visarga_rules": visarga_rules,
    "epenthesis": epenthesis,
}


# -- rewrite engine --------------------------------------------------------

def _item_matches(item, label, inv):
    if item == "@any":
        return True
    if item == "@vowel":
        return inv.is_vowel(label)
    if item == "@consonant":
        return inv.is_consonant(label)
    return item == label


def _rule_matches(rule, labels, i, inv):
    n = len(labels)
    end = i + len(rule.match)
    if end > n:
        return False
    for k, item in enumerate(rule.match):
        if not _item_matches(item, labels[i + k], inv):
            return False
    for k, item in enumerate(reversed(rule.left)):
        pos = i - 1 - k
        if item == "#":
            if pos != -1:
                return False
        elif pos < 0 or not _item_matches(item, labels[pos], inv):
            return False
    for k, item in enumerate(rule.right):
        pos = end + k
        if item == "#":
            if pos != n:
                return False
        elif pos >= n or not _item_matches(item, labels[pos], inv):
            return False
    return True


def rewrite(seq, rules, inv=None):
    inv = inv or default_inventory()
    pairs = seq.pairs()
    labels = [p[0] for p in pairs]
    out = []
    i = 0
    while i < len(pairs):
        for rule in rules:
            if rule.match and _rule_matches(rule, labels, i, inv):
                span = pairs[i:i + len(rule.match)]
                for k, lab in enumerate(rule.replace):
                    keep = k < len(span) and span[k][0] == lab
                    out.append((lab, span[k][1] if keep else False))
                i += len(rule.match)
                break
        else:
            out.append(pairs[i])
            i += 1
    return seq.with_pairs(out)


def apply_pack(seq, pack, inv=None):
    if pack.builtin:
        return BUILTINS[pack.builtin](seq, inv)
    return rewrite(seq, pack.rules, inv)


# -- pack loading ----------------------------------------------------------

def _check_pattern(items, where, inv, allow_edge):
    for item in items:
        if item == "#" and allow_edge:
            continue
        if item in _CLASSES or item in inv:
            continue
        raise MalformedData(f"{where}: unknown pattern item {item!r}")


def pack_from_dict(raw, where="<pack>", inv=None):
    inv = inv or default_inventory()
    try:
        name, stage = raw["name"], raw["stage"]
    except KeyError as exc:
        raise MalformedData(f"{where}: missing {exc}") from None
    if stage not in STAGES:
        raise MalformedData(f"{where}: stage must be one of {STAGES}, got {stage!r}")
    builtin = raw.get("builtin")
    if builtin is not None and builtin not in BUILTINS:
        raise MalformedData(f"{where}: unknown builtin {builtin!r}")
    if builtin is not None and raw.get("rules"):
        raise MalformedData(f"{where}: a pack has either a builtin or rules, not both")
    rules = []
    outputs = set(raw.get("outputs", []))
    for k, r in enumerate(raw.get("rules", [])):
        here = f"{where}: rules[{k}]"
        try:
            rule = RewriteRule(
                match=tuple(r["match"]), replace=tuple(r["replace"]),
                left=tuple(r.get("left", ())), right=tuple(r.get("right", ())),
                note=r.get("note", ""),
            )
        except KeyError as exc:
            raise MalformedData(f"{here}: missing {exc}") from None
        if not rule.match:
            raise MalformedData(f"{here}: empty match")
        if "#" in rule.left[1:] or "#" in rule.right[:-1]:
            raise MalformedData(f"{here}: '#' only allowed at the outer edge of a context")
        _check_pattern(rule.match, here, inv, allow_edge=False)
        _check_pattern(rule.left, here, inv, allow_edge=True)
        _check_pattern(rule.right, here, inv, allow_edge=True)
        for lab in rule.replace:
            if lab not in inv:
                raise MalformedData(f"{here}: replacement label {lab!r} not in inventory")
        outputs.update(rule.replace)
        rules.append(rule)
    return RulePack(name, stage, tuple(rules), builtin, frozenset(outputs), raw.get("notes", ""))


def load_packs(data_dir=None, inv=None):
    """Registry of every pack in ``<data_dir>/packs``, keyed by name."""
    return _cached_packs(str(_data.resolve(data_dir) / "packs"), inv)


@lru_cache(maxsize=None)
def _cached_packs(pack_dir, inv):
    from pathlib import Path

    registry = {}
    for path in sorted(Path(pack_dir).glob("*.json")):
        pack = pack_from_dict(_data.read_json(path), str(path), inv)
        if pack.name in registry:
            raise MalformedData(f"{path}: duplicate pack name {pack.name!r}")
        registry[pack.name] = pack
    return registry


def resolve_packs(names, registry):
    out = []
    for name in names:
        try:
            out.append(registry[name])
        except KeyError:
            raise UnknownRulePack(f"unknown rule pack {name!r}") from None
    return out


# -- pipeline ----------------------------------------------------------------

def to_base(seq, inv=None):
    inv = inv or default_inventory()
    return seq.with_pairs((inv.fallback(lab), nasal) for lab, nasal in seq.pairs())


def apply_rules(seq, profile, registry=None, inv=None):
    if seq.is_break:
        return seq
    inv = inv or default_inventory()
    packs = resolve_packs(profile.rule_packs, registry if registry is not None else load_packs())
    for pack in packs:
        if pack.stage == "pre_family":
            seq = apply_pack(seq, pack, inv)
    if Family(profile.family) is Family.IA:
        seq = schwa_delete(seq, inv)
    for pack in packs:
        if pack.stage == "post_family":
            seq = apply_pack(seq, pack, inv)
    return to_base(seq, inv)


BREAK_LABELS = {
    ",": "pau", ";": "pau", ":": "pau", "،": "pau",
    ".": "fs", "।": "fs", "॥": "fs",
    "?": "qm", "!": "exm",
    "-": "dsh", "\u2010": "dsh", "\u2013": "dsh", "\u2014": "dsh",
}


def break_label(char):
    return BREAK_LABELS.get(char, "pau")


def tokenize(text):
    """Yield ``(kind, token, byte_offset)`` with kind ``word`` or ``break``."""
    word, start, offset = [], 0, 0
    for ch in text:
        width = len(ch.encode("utf-8"))
        if ch.isspace() or unicodedata.category(ch).startswith("P"):
            if word:
                yield "word", "".join(word), start
                word = []
            if not ch.isspace():
                yield "break", ch, offset
        else:
            if not word:
                start = offset
            word.append(ch)
        offset += width
    if word:
        yield "word", "".join(word), start


def parse_text(text, profile, registry=None, inv=None, table=None):
    """Whole text to per-word base-label sequences, breaks kept in order.

    Errors from the script reader get ``word_index`` and ``byte_offset``
    (UTF-8 offset into the normalized text) attached.
    """
    inv = inv or default_inventory()
    registry = registry if registry is not None else load_packs()
    resolve_packs(profile.rule_packs, registry)
    script = Script(profile.script)
    table = table or load_script_table(script)
    text = normalize_text(text)
    out = []
    word_index = 0
    for kind, token, byte_offset in tokenize(text):
        if kind == "break":
            out.append(ClsSequence((break_label(token),), word=token, kind="break"))
            continue
        if token in profile.exceptions:
            seq = ClsSequence(profile.exceptions[token], word=token, script=script.value)
            out.append(to_base(seq, inv))
        else:
            try:
                raw = word_to_raw_cls(token, script, table, inv)
            except UnknownCodepoint as exc:
                exc.word_index = word_index
                exc.byte_offset = byte_offset + len(token[:exc.offset].encode("utf-8"))
                raise
            out.append(apply_rules(raw, profile, registry, inv))
        word_index += 1
    return out


def reachable_phones(profile, registry=None, inv=None, table=None):
    """Base phones (no modifiers) the profile can emit after rules and fallback."""
    inv = inv or default_inventory()
    registry = registry if registry is not None else load_packs()
    table = table or load_script_table(profile.script)
    labels = set(table.emittable_labels())
    for pack in resolve_packs(profile.rule_packs, registry):
        labels |= pack.outputs
    for seq in profile.exceptions.values():
        labels.update(seq)
    return {inv.fallback(lab) for lab in labels if inv.lookup(lab).category != "modifier"}
