"""Profile loading and run configuration for the command line."""

from dataclasses import dataclass
from pathlib import Path

from . import _data
from .cls_core import default_inventory, validate_inventory
from .errors import MalformedData, MalformedProfile
from .phonotactics import Family, LanguageProfile, load_packs, resolve_packs
from .script_reader import Script

PROFILE_FIELDS = {"schema_version", "name", "script", "family", "rule_packs", "exceptions", "priors", "notes", "phones"}
OUTPUT_FORMATS = ("text", "json", "jsonl")


def _enum(cls, value, field):
    try:
        return cls(value)
    except ValueError:
        allowed = ", ".join(m.value for m in cls)
        raise MalformedProfile(f"{value!r} is not one of {allowed}", field) from None


def profile_from_dict(raw, registry=None, inv=None):
    inv = inv or default_inventory()
    if not isinstance(raw, dict):
        raise MalformedProfile("profile must be a JSON object")
    unknown = sorted(set(raw) - PROFILE_FIELDS)
    if unknown:
        raise MalformedProfile(f"unknown field(s) {unknown}", unknown[0])
    for key in ("name", "script", "family"):
        if key not in raw:
            raise MalformedProfile("required field missing", key)
    if not isinstance(raw["name"], str) or not raw["name"]:
        raise MalformedProfile("must be a non-empty string", "name")
    script = _enum(Script, raw["script"], "script")
    family = _enum(Family, raw["family"], "family")

    packs = raw.get("rule_packs", [])
    if not isinstance(packs, list) or not all(isinstance(p, str) for p in packs):
        raise MalformedProfile("must be a list of pack names", "rule_packs")
    resolve_packs(packs, registry if registry is not None else load_packs())

    exceptions = {}
    for word, labels in raw.get("exceptions", {}).items():
        where = f"exceptions.{word}"
        if not isinstance(labels, list) or not labels:
            raise MalformedProfile("must be a non-empty list of labels", where)
        for lab in labels:
            if lab not in inv:
                raise MalformedProfile(f"unknown label {lab!r}", where)
        exceptions[word] = tuple(labels)

    priors = {}
    for synth, values in raw.get("priors", {}).items():
        if not isinstance(values, dict):
            raise MalformedProfile("must map prior names to numbers", f"priors.{synth}")
        for key, val in values.items():
            if isinstance(val, bool) or not isinstance(val, (int, float)) or not 0.0 <= val <= 1.0:
                raise MalformedProfile("prior must be a number in [0, 1]", f"priors.{synth}.{key}")
        priors[synth] = dict(values)

    phones = raw.get("phones")
    if phones is not None:
        if not isinstance(phones, list) or not phones:
            raise MalformedProfile("must be a non-empty list of base labels", "phones")
        stray = sorted(set(phones) - inv.base_labels)
        if stray:
            raise MalformedProfile(f"non-base labels {stray}", "phones")
        phones = frozenset(phones)

    return LanguageProfile(
        name=raw["name"], script=script, family=family, rule_packs=tuple(packs),
        exceptions=exceptions, priors=priors, notes=raw.get("notes", ""), phones=phones,
    )


def load_profile(path, registry=None, inv=None):
    path = Path(path)
    try:
        raw = _data.read_json(path)
    except MalformedData as exc:
        raise MalformedProfile(str(exc)) from None
    return profile_from_dict(raw, registry, inv)


def profile_path(name_or_path, data_dir=None):
    """A shipped profile name (``sanskrit``) or a path to a JSON file."""
    p = Path(name_or_path)
    if p.suffix == ".json" or p.exists():
        return p
    return _data.resolve(data_dir) / "profiles" / f"{name_or_path}.json"


def shipped_profiles(data_dir=None):
    return sorted(p.stem for p in (_data.resolve(data_dir) / "profiles").glob("*.json"))


@dataclass(frozen=True)
class RunConfig:
    data_dir: Path
    output_format: str = "text"
    strictness: str = "fail-fast"

    @classmethod
    def create(cls, data_dir=None, output_format="text", strictness="fail-fast"):
        """Resolve and validate the data directory before any command runs."""
        data_dir = _data.resolve(data_dir)
        if not data_dir.is_dir():
            raise MalformedData(f"data directory {data_dir} does not exist")
        if output_format not in OUTPUT_FORMATS:
            raise ValueError(f"output format {output_format!r}")
        if strictness not in ("fail-fast", "collect-errors"):
            raise ValueError(f"strictness {strictness!r}")
        report = validate_inventory(default_inventory(data_dir))
        if not report.ok:
            raise MalformedData("invalid inventory: " + "; ".join(report.issues))
        return cls(data_dir, output_format, strictness)

    @property
    def inventory(self):
        return default_inventory(self.data_dir)

    @property
    def packs(self):
        return load_packs(self.data_dir, self.inventory)

    def profile(self, name_or_path):
        return load_profile(profile_path(name_or_path, self.data_dir), self.packs, self.inventory)
