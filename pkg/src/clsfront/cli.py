"""Command line: parse, inventory, select, mcd, batch-mcd.

Exit status is 0 on success, 1 on data errors and 2 on usage errors.
"""

import argparse
import contextlib
import json
import sys
from concurrent.futures import ThreadPoolExecutor

from . import _data
from .config import RunConfig
from .errors import DataError
from .mcd_eval import MCDConfig, mcd_files, read_manifest
from .phonotactics import parse_text, reachable_phones
from .script_reader import load_script_table
from .selector import format_table, load_synth_profiles, rank, target_phone_set

JSONL_SCHEMA = 1


def _dumps(obj):
    return json.dumps(obj, ensure_ascii=False)


def _word_record(seq):
    rec = {"grapheme": seq.word, "kind": seq.kind, "cls": list(seq.labels), "nasal_flags": list(seq.nasal_flags)}
    return rec


def _line_record(line_no, seqs):
    return {"schema_version": JSONL_SCHEMA, "line_no": line_no, "words": [_word_record(s) for s in seqs]}


def _text_line(line_no, seqs):
    rows = []
    for s in seqs:
        if s.is_break:
            rows.append(f"{line_no}\t{s.word}\t<{s.labels[0]}>")
        else:
            labels = " ".join(lab + ("~" if nasal else "") for lab, nasal in s.pairs())
            rows.append(f"{line_no}\t{s.word}\t{labels}")
    return "\n".join(rows)


def cmd_parse(args, cfg, out, err):
    profile = cfg.profile(args.lang)
    table = load_script_table(profile.script, cfg.data_dir, cfg.inventory)
    if args.text is not None:
        lines = args.text.splitlines() or [""]
    else:
        with open(args.infile, encoding="utf-8", errors="strict") as f:
            lines = f.read().splitlines()

    records, failures = [], 0
    for line_no, line in enumerate(lines, 1):
        try:
            seqs = parse_text(line, profile, cfg.packs, cfg.inventory, table)
        except DataError as exc:
            if cfg.strictness == "fail-fast":
                raise DataError(f"line {line_no}: {exc}") from exc
            print(f"line {line_no}: {exc}", file=err)
            failures += 1
            continue
        if cfg.output_format == "jsonl":
            print(_dumps(_line_record(line_no, seqs)), file=out)
        elif cfg.output_format == "json":
            records.append(_line_record(line_no, seqs))
        elif seqs:
            print(_text_line(line_no, seqs), file=out)
    if cfg.output_format == "json":
        print(_dumps(records), file=out)
    if failures:
        print(f"{failures} line(s) failed", file=err)
        return 1
    return 0


def cmd_inventory(args, cfg, out, err):
    profile = cfg.profile(args.lang)
    table = load_script_table(profile.script, cfg.data_dir, cfg.inventory)
    phones = reachable_phones(profile, cfg.packs, cfg.inventory, table)
    ordered = [p for p in cfg.inventory.phones if p.label in phones]
    if cfg.output_format == "text":
        for p in ordered:
            print(f"{p.label}\t{p.category}", file=out)
    else:
        print(_dumps([p.label for p in ordered]), file=out)
    return 0


def cmd_select(args, cfg, out, err):
    profile = cfg.profile(args.target)
    synth_dir = args.synths or cfg.data_dir / "synths"
    candidates = load_synth_profiles(synth_dir, cfg.inventory)
    corpus = None
    if args.corpus:
        with open(args.corpus, encoding="utf-8") as f:
            corpus = f.read().splitlines()
    phones = target_phone_set(profile, corpus, cfg.packs, cfg.inventory)
    ranked = rank(profile, phones, candidates)
    if cfg.output_format == "text":
        print(format_table(ranked), file=out)
    else:
        print(_dumps({"target": profile.name, "family": str(profile.family),
                      "candidates": [r.as_dict() for r in ranked]}), file=out)
    return 0


def _mcd_config(cfg):
    return MCDConfig.load(cfg.data_dir / "mcd_config.json")


def cmd_mcd(args, cfg, out, err):
    score = mcd_files(args.ref, args.syn, _mcd_config(cfg))
    if cfg.output_format == "text":
        print(f"{score:.4f}", file=out)
    else:
        print(_dumps({"ref": args.ref, "syn": args.syn, "mcd_db": score}), file=out)
    return 0


def cmd_batch_mcd(args, cfg, out, err):
    try:
        pairs = read_manifest(args.pairs)
    except ValueError as exc:
        raise DataError(str(exc)) from None
    if not pairs:
        raise DataError(f"{args.pairs}: no pairs")
    mcfg = _mcd_config(cfg)
    with ThreadPoolExecutor(max_workers=max(1, args.jobs)) as pool:
        scores = list(pool.map(lambda p: mcd_files(p[0], p[1], mcfg), pairs))
    mean = sum(scores) / len(scores)
    if cfg.output_format == "text":
        for (ref, syn), s in zip(pairs, scores):
            print(f"{ref}\t{syn}\t{s:.4f}", file=out)
        print(f"mean\t\t{mean:.4f}", file=out)
    else:
        rows = [{"ref": r, "syn": s, "mcd_db": v} for (r, s), v in zip(pairs, scores)]
        print(_dumps({"pairs": rows, "mean_mcd_db": mean}), file=out)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="clsfront",
        description="Indic text to CLS phones with target-language rules; synthesizer ranking; MCD scoring.",
    )
    parser.add_argument("--data-dir", help=f"data directory (default: ${_data.DATA_ENV} or the bundled data)")
    sub = parser.add_subparsers(dest="command", required=True)

    def fmt(p, choices=("text", "json")):
        p.add_argument("--format", choices=choices, default="text")

    p = sub.add_parser("parse", help="text to CLS labels per word")
    p.add_argument("--lang", required=True, help="profile name or path to a profile JSON")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--text")
    src.add_argument("--in", dest="infile", metavar="FILE")
    fmt(p, ("text", "json", "jsonl"))
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--fail-fast", dest="strictness", action="store_const", const="fail-fast")
    mode.add_argument("--collect-errors", dest="strictness", action="store_const", const="collect-errors")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("inventory", help="phones a profile can produce after rules")
    p.add_argument("--lang", required=True)
    fmt(p)
    p.set_defaults(func=cmd_inventory)

    p = sub.add_parser("select", help="rank synthesizers for a target language")
    p.add_argument("--target", required=True)
    p.add_argument("--synths", metavar="DIR", help="synthesizer profile directory")
    p.add_argument("--corpus", metavar="FILE", help="sample text defining the target phone set")
    fmt(p)
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("mcd", help="MCD between two WAV files")
    p.add_argument("--ref", required=True)
    p.add_argument("--syn", required=True)
    fmt(p)
    p.set_defaults(func=cmd_mcd)

    p = sub.add_parser("batch-mcd", help="MCD for every ref<TAB>syn line of a manifest")
    p.add_argument("--pairs", required=True, metavar="TSV")
    p.add_argument("--jobs", type=int, default=1)
    fmt(p)
    p.set_defaults(func=cmd_batch_mcd)
    return parser


def run_command(argv, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2

    strictness = getattr(args, "strictness", None)
    if strictness is None:
        strictness = "collect-errors" if getattr(args, "infile", None) else "fail-fast"
    try:
        cfg = RunConfig.create(args.data_dir, args.format, strictness)
        return args.func(args, cfg, out, err)
    except (DataError, OSError, UnicodeDecodeError) as exc:
        print(f"clsfront: error: {exc}", file=err)
        return 1


def main(argv=None):
    sys.exit(run_command(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
