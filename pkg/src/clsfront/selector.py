"""Rank monolingual synthesizers for a target language.

Candidates are ordered lexicographically: rule-family match first, then
phone-set coverage, then the sum of linguistic-overlap priors, then name.
No weights are learned; priors are plain editable numbers in the profile
files.
"""

from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

from . import _data
from .cls_core import default_inventory
from .errors import EmptyTargetInventory, MalformedData, NoCandidates
from .phonotactics import Family, parse_text, reachable_phones


@dataclass(frozen=True)
class SynthesizerProfile:
    name: str
    language: str
    family: Family
    phone_inventory: frozenset
    priors: dict = field(default_factory=dict)


@dataclass(frozen=True)
class RankedCandidate:
    name: str
    family_match: bool
    coverage: float
    prior_sum: float
    rank: int

    def as_dict(self):
        return {
            "rank": self.rank,
            "name": self.name,
            "family_match": self.family_match,
            "coverage": self.coverage,
            "prior_sum": self.prior_sum,
        }


def coverage(target_phones, synth_phones):
    target = set(target_phones)
    if not target:
        raise EmptyTargetInventory("target phone set is empty")
    return len(target & set(synth_phones)) / len(target)


def target_phone_set(profile, corpus=None, registry=None, inv=None):
    """Phones used by ``corpus`` under the profile.

    Without a corpus: the profile's declared ``phones``, else every phone
    the profile can reach.
    """
    inv = inv or default_inventory()
    if corpus is None:
        if profile.phones:
            return set(profile.phones)
        return reachable_phones(profile, registry, inv)
    phones = set()
    for line in corpus:
        for seq in parse_text(line, profile, registry, inv):
            if not seq.is_break:
                phones.update(seq.labels)
    return phones


def rank(profile, target_phones, candidates):
    if not candidates:
        raise NoCandidates("no synthesizer candidates")
    family = Family(profile.family)
    scored = []
    for c in candidates:
        extra = profile.priors.get(c.name, {})
        prior_sum = sum(c.priors.values()) + sum(extra.values())
        scored.append((Family(c.family) is family, coverage(target_phones, c.phone_inventory), prior_sum, c.name))
    scored.sort(key=lambda s: (not s[0], -s[1], -s[2], s[3]))
    return [RankedCandidate(name, match, cov, prior, i + 1)
            for i, (match, cov, prior, name) in enumerate(scored)]


def synth_from_dict(raw, where="<synth>", inv=None):
    inv = inv or default_inventory()
    try:
        name, language, family = raw["name"], raw["language"], raw["family"]
        phones = frozenset(raw["phone_inventory"])
    except KeyError as exc:
        raise MalformedData(f"{where}: missing {exc}") from None
    try:
        family = Family(family)
    except ValueError:
        raise MalformedData(f"{where}: family must be IA or DR, got {family!r}") from None
    base = inv.base_labels
    stray = sorted(phones - base)
    if stray:
        raise MalformedData(f"{where}: phone_inventory has non-base labels {stray}")
    priors = dict(raw.get("priors", {}))
    for key, val in priors.items():
        if isinstance(val, bool) or not isinstance(val, (int, float)) or not 0.0 <= val <= 1.0:
            raise MalformedData(f"{where}: prior {key}={val!r} outside [0, 1]")
    return SynthesizerProfile(name, language, family, phones, priors)


def load_synth_profiles(directory=None, inv=None):
    directory = Path(directory) if directory is not None else _data.default_data_dir() / "synths"
    return list(_cached_synths(str(directory), inv))


@lru_cache(maxsize=None)
def _cached_synths(directory, inv):
    paths = sorted(Path(directory).glob("*.json"))
    if not paths:
        raise NoCandidates(f"no synthesizer profiles in {directory}")
    return tuple(synth_from_dict(_data.read_json(p), str(p), inv) for p in paths)


def format_table(ranked):
    lines = [f"{'rank':>4}  {'name':<12} {'family':<6} {'coverage':>8} {'priors':>7}"]
    for r in ranked:
        lines.append(
            f"{r.rank:>4}  {r.name:<12} {'match' if r.family_match else '-':<6} "
            f"{r.coverage:>8.4f} {r.prior_sum:>7.3f}"
        )
    return "\n".join(lines)
