"""Command-line interface for batch analysis and theorem verification.

Subcommands:

* ``analyze <corpus.json>`` -- run the pipeline over a corpus file;
* ``verify-tables``         -- run the bundled corpus and exit nonzero on
  any expected-value mismatch (reproduces the paper's tables);
* ``compose``               -- compose a corpus pair with [m] or with an
  isogeny from a JSON file, then analyze the result;
* ``normalize``             -- normalization certificate for a corpus pair;
* ``family``                -- the (1-y)/2 o [m] family with theorem reports.

The environment variable BELYI_CORPUS_DIR overrides the bundled corpus
location.
"""

from __future__ import annotations

import argparse
import json
import sys

from .belyi import report_to_dict
from .corpus import (
    RunConfig,
    analyze_entry,
    bundled_corpus_path,
    emit_report,
    load_corpus,
    run_pipeline,
    status_counts,
)
from .isogeny import (
    compose_pair,
    generate_family,
    isogeny_from_json,
    isogeny_to_json,
    isogeny_verify,
    mul_by_m,
    verify_main_theorem,
)
from .normalize import normalization_certificate


def _add_config_flags(sub):
    sub.add_argument("--torsion-bound", type=int, default=24)
    sub.add_argument("--closure-bound", type=int, default=64)
    sub.add_argument("--precision", type=int, default=16)
    sub.add_argument("--timeout", type=float, default=60.0, help="seconds per entry")


def _config_from(args) -> RunConfig:
    return RunConfig(
        torsion_bound=args.torsion_bound,
        closure_bound=args.closure_bound,
        series_precision=args.precision,
        timeout_seconds=args.timeout,
    )


def _find_entry(label: str):
    entries = load_corpus(bundled_corpus_path())
    for entry in entries:
        if entry.label == label:
            return entry
    known = ", ".join(e.label for e in entries)
    raise SystemExit(f"no corpus entry labeled {label!r}; known labels: {known}")


def _emit(text: str, path: str | None):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_analyze(args) -> int:
    entries = load_corpus(args.corpus)
    results = run_pipeline(entries, _config_from(args))
    text = emit_report(results, args.format, args.out)
    if args.out:
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    counts = status_counts(results)
    print(
        f"processed {len(results)}: {counts['ok']} ok, {counts['mismatch']} mismatch, "
        f"{counts['unresolved']} unresolved, {counts['timeout']} timeout",
        file=sys.stderr,
    )
    return 1 if counts["mismatch"] else 0


def cmd_verify_tables(args) -> int:
    entries = load_corpus(bundled_corpus_path())
    results = run_pipeline(entries, _config_from(args))
    text = emit_report(results, "json", args.out)
    if not args.out:
        sys.stdout.write(text)
    counts = status_counts(results)
    with_group = [r for r in results if r.report is not None and r.report.group]
    all_torsion = [r for r in results if r.report is not None and r.report.all_torsion]
    print(
        f"{len(results)} entries; {len(all_torsion)} with all quasi-critical points torsion "
        f"({len(with_group)} with identified groups); "
        f"{counts['mismatch']} mismatches, {counts['timeout']} timeouts",
        file=sys.stderr,
    )
    if counts["mismatch"]:
        for r in results:
            for m in r.mismatches:
                print(f"  {r.label}: {m}", file=sys.stderr)
    return 1 if counts["mismatch"] else 0


def cmd_compose(args) -> int:
    entry = _find_entry(args.pair)
    pair = entry.pair()
    if args.mul is not None:
        psi = mul_by_m(entry.curve, args.mul)
    else:
        with open(args.isogeny) as fh:
            psi = isogeny_from_json(json.load(fh))
        diag = isogeny_verify(psi)
        if not diag.curve_identity:
            print("isogeny fails the curve-to-curve identity", file=sys.stderr)
            return 1
    report = verify_main_theorem(
        pair, psi, torsion_bound=args.torsion_bound, closure_bound=args.closure_bound
    )
    payload = {
        "pair": entry.label,
        "isogeny": isogeny_to_json(psi),
        "composed_map": report.pair.map.to_expr(),
        "report": report_to_dict(report.report),
        "checks": {
            "belyi_ok": report.belyi_ok,
            "maps_into_g": report.maps_into_g,
            "torsion_transferred": report.torsion_transferred,
            "closure_is_group": report.closure_is_group,
            "ram_chain_ok": report.ram_chain_ok,
            "isogeny_unramified": report.isogeny_unramified,
        },
    }
    _emit(json.dumps(payload, indent=2, sort_keys=True) + "\n", args.out)
    return 0 if report.all_ok else 1


def cmd_normalize(args) -> int:
    entry = _find_entry(args.pair)
    cert = normalization_certificate(entry.pair(), closure_bound=args.closure_bound)
    _emit(json.dumps(cert.to_json(), indent=2, sort_keys=True) + "\n", args.out)
    ok = cert.divisor_checks is not None and all(cert.divisor_checks.values())
    return 0 if ok else 1


def cmd_family(args) -> int:
    family = generate_family(
        args.max_m, torsion_bound=args.torsion_bound, closure_bound=args.closure_bound
    )
    payload = []
    all_ok = True
    for m, rep in family:
        all_ok = all_ok and rep.all_ok
        payload.append(
            {
                "m": m,
                "degree": rep.report.degree,
                "map": rep.pair.map.to_expr(),
                "report": report_to_dict(rep.report),
                "all_checks_ok": rep.all_ok,
            }
        )
    _emit(json.dumps(payload, indent=2, sort_keys=True) + "\n", args.out)
    return 0 if all_ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="torbelyi",
        description="Exact analysis of Toroidal Belyi pairs: fibers, torsion, groups.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="analyze a corpus JSON file")
    p.add_argument("corpus")
    _add_config_flags(p)
    p.add_argument("--format", choices=("json", "csv", "table"), default="table")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("verify-tables", help="verify the bundled corpus against the tables")
    _add_config_flags(p)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_verify_tables)

    p = sub.add_parser("compose", help="compose a pair with [m] or an isogeny")
    p.add_argument("--pair", required=True, help="corpus label of (X, phi)")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--mul", type=int, default=None, help="compose with [m]")
    group.add_argument("--isogeny", default=None, help="isogeny JSON file")
    _add_config_flags(p)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("normalize", help="normalization certificate for a pair")
    p.add_argument("--pair", required=True)
    _add_config_flags(p)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("family", help="the (1-y)/2 o [m] family with theorem reports")
    p.add_argument("--max-m", type=int, required=True)
    _add_config_flags(p)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_family)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
