"""Command-line front end: sepidx si | rank | stability | correlate.

Exit codes: 0 success, 2 usage/validation/parse error, 1 internal fault.
Errors go to stderr, results to stdout.  --canonical zeroes timestamps so
report files are byte-reproducible.
"""
from __future__ import annotations

import argparse
import datetime
import json
import os
import sys
from pathlib import Path

from . import engine, formats, ranking, reporting, stability
from .errors import SepidxError

EPOCH_TS = "1970-01-01T00:00:00Z"


def _timestamp(canonical: bool) -> str:
    if canonical:
        return EPOCH_TS
    return datetime.datetime.now(datetime.timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _apply_threads(args) -> None:
    n = args.threads
    if n is None:
        env = os.environ.get("SEPIDX_THREADS", "")
        n = int(env) if env else None
    if n is not None:
        engine.set_threads(n)


def _load_input(args) -> "formats.LabeledFeatureSet":
    if args.csv:
        if not args.label_column:
            raise SepidxError("--csv requires --label-column")
        return formats.read_csv(args.input, args.label_column)
    return formats.read_sidx(args.input)


def _candidates_from_manifest(manifest: formats.RunManifest) -> list[ranking.CandidateInput]:
    cands = []
    for c in manifest.candidates:
        if c.path is not None:
            emb = formats.read_sidx(c.path)
            emb = formats.LabeledFeatureSet(
                points=emb.points, labels=emb.labels, name=c.name, meta=emb.meta)
            cands.append(ranking.CandidateInput(
                candidate_name=c.name, embedding=emb,
                reported_accuracy=c.accuracy))
        else:
            cands.append(ranking.CandidateInput(
                candidate_name=c.name, precomputed_si=c.precomputed_si,
                reported_accuracy=c.accuracy))
    return cands


def cmd_si(args) -> int:
    _apply_threads(args)
    fs = _load_input(args)
    score = engine.separation_index(fs)
    if args.json:
        sys.stdout.write(reporting.canonical_json_bytes({
            "candidate_name": score.candidate_name,
            "si_value": score.si_value,
            "match_count": score.match_count,
            "q": score.q,
        }).decode("utf-8"))
    else:
        print(f"{score.si_value:.6f}")
    return 0


def cmd_rank(args) -> int:
    _apply_threads(args)
    manifest = formats.load_manifest(args.manifest)
    candidates = _candidates_from_manifest(manifest)
    if manifest.baseline_path is not None:
        baseline = formats.read_sidx(manifest.baseline_path)
    else:
        baseline = manifest.baseline_si0
    report = ranking.rank_candidates(baseline, candidates, metadata={
        "created": _timestamp(args.canonical),
        "input_digests": manifest.digests,
    })
    Path(args.out).write_bytes(reporting.emit_json(report))
    for score in report.accepted:
        print(f"{score.candidate_name}\t{score.si_value:.6f}\tACCEPTED")
    for score in report.rejected:
        print(f"{score.candidate_name}\t{score.si_value:.6f}\tREJECTED")
    return 0


def cmd_stability(args) -> int:
    _apply_threads(args)
    manifest = formats.load_manifest(args.manifest)
    candidates = _candidates_from_manifest(manifest)
    if manifest.baseline_path is not None:
        baseline = formats.read_sidx(manifest.baseline_path)
    else:
        baseline = manifest.baseline_si0
    try:
        fractions = [float(f) for f in args.fractions.split(",") if f]
    except ValueError as e:
        raise SepidxError(f"bad --fractions: {e}") from e
    report = stability.stability_study(
        baseline, candidates, fractions,
        trials=args.trials, seed=args.seed, stratified=args.stratified)
    report.metadata["created"] = _timestamp(args.canonical)
    report.metadata["input_digests"] = manifest.digests
    Path(args.out).write_bytes(reporting.emit_json(report))
    for fi, frac in enumerate(report.fractions):
        ra = report.rank_agreement[fi]
        print(f"fraction {frac}\trank_agreement "
              f"{'n/a' if ra is None else format(ra, '.6f')}")
    return 0


def cmd_correlate(args) -> int:
    report = reporting.parse_ranking_report(Path(args.report).read_bytes())
    try:
        accuracies = json.loads(Path(args.accuracies).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise SepidxError(f"cannot load accuracies: {e}") from e
    if not isinstance(accuracies, dict):
        raise SepidxError("accuracies file must be a JSON object name -> value")
    summary = reporting.correlation_report(report, accuracies)
    Path(args.out).write_bytes(reporting.emit_json(summary))
    sp = summary.spearman_value
    print(f"spearman {'n/a' if sp is None else format(sp, '.6f')}\t"
          f"violations {len(summary.violations)}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sepidx",
        description="Separation-index scoring, candidate ranking and rejection.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_si = sub.add_parser("si", help="compute SI of one embedding file")
    p_si.add_argument("--input", required=True)
    p_si.add_argument("--csv", action="store_true", help="input is CSV, not SIDX")
    p_si.add_argument("--label-column", default=None)
    p_si.add_argument("--json", action="store_true")
    p_si.add_argument("--threads", type=int, default=None)
    p_si.set_defaults(func=cmd_si)

    p_rank = sub.add_parser("rank", help="rank candidates from a manifest")
    p_rank.add_argument("--manifest", required=True)
    p_rank.add_argument("--out", required=True)
    p_rank.add_argument("--canonical", action="store_true",
                        help="zero timestamps for byte-reproducible output")
    p_rank.add_argument("--threads", type=int, default=None)
    p_rank.set_defaults(func=cmd_rank)

    p_st = sub.add_parser("stability", help="subsample sensitivity study")
    p_st.add_argument("--manifest", required=True)
    p_st.add_argument("--fractions", default="1.0,0.75,0.5",
                      help="comma-separated fractions in (0, 1]")
    p_st.add_argument("--trials", type=int, default=1)
    p_st.add_argument("--seed", type=int, default=0)
    p_st.add_argument("--out", required=True)
    p_st.add_argument("--stratified", action="store_true")
    p_st.add_argument("--canonical", action="store_true")
    p_st.add_argument("--threads", type=int, default=None)
    p_st.set_defaults(func=cmd_stability)

    p_co = sub.add_parser("correlate", help="SI vs accuracy rank correlation")
    p_co.add_argument("--report", required=True)
    p_co.add_argument("--accuracies", required=True)
    p_co.add_argument("--out", required=True)
    p_co.set_defaults(func=cmd_correlate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SepidxError as e:
        print(f"sepidx: error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"sepidx: error: {e}", file=sys.stderr)
        return 2
    except Exception as e:  # internal fault
        print(f"sepidx: internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
