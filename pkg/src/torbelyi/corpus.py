"""Corpus ingestion, the batch analysis pipeline, and report emission.

The bundled corpus is a checked-in snapshot of the pairs from the paper's
tables, keyed by their LMFDB labels (no live network access).  Entries may
carry expected values -- ramification multisets, quasi-critical points,
generated group, all-torsion verdict -- and decomposition witnesses; the
pipeline analyzes each pair and compares against whatever is present.

Per-entry wall-clock budgets are enforced cooperatively at stage
boundaries: exact arithmetic has no safe interruption point inside an
operation, so a slow stage finishes before the timeout is noticed.
"""

from __future__ import annotations

import csv
import io
import json
import os
import time
from dataclasses import dataclass, field
from importlib import resources

from .belyi import (
    BelyiPair,
    FIBER_TAGS,
    QuasiCriticalReport,
    analyze,
    decompose_verify,
    report_to_dict,
)
from .curve import EllipticCurve, curve_from_json
from .errors import SchemaError
from .funcfield import parse_curve_function
from .isogeny import compose_pair, isogeny_from_json, isogeny_verify

ENV_CORPUS_DIR = "BELYI_CORPUS_DIR"
BUNDLED_CORPUS = "tables.json"


@dataclass(frozen=True)
class CorpusEntry:
    label: str
    curve: EllipticCurve
    map_expr: str
    source_tables: tuple[int, ...] = ()
    variant_of: str | None = None
    expected: dict = field(default_factory=dict)
    decomposition: dict = field(default_factory=dict)

    def pair(self) -> BelyiPair:
        return BelyiPair(self.curve, parse_curve_function(self.map_expr, self.curve), self.label)


@dataclass
class RunConfig:
    torsion_bound: int = 24
    closure_bound: int = 64
    series_precision: int = 16
    timeout_seconds: float = 60.0
    output_path: str | None = None

    def __post_init__(self):
        for name in ("torsion_bound", "closure_bound", "series_precision"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")


def bundled_corpus_path() -> str:
    override = os.environ.get(ENV_CORPUS_DIR)
    if override:
        return os.path.join(override, BUNDLED_CORPUS)
    return str(resources.files("torbelyi.data").joinpath(BUNDLED_CORPUS))


def load_corpus(path: str) -> list[CorpusEntry]:
    """Parse and validate a corpus file; errors name the offending entry."""
    if not os.path.exists(path):
        raise FileNotFoundError(path)
    with open(path) as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}: not valid JSON: {exc}") from exc
    if not isinstance(raw, list):
        raise SchemaError(f"{path}: top level must be a JSON array")
    entries = []
    seen = set()
    for index, item in enumerate(raw):
        where = f"entry #{index}" + (f" ({item.get('label')})" if isinstance(item, dict) else "")
        if not isinstance(item, dict):
            raise SchemaError(f"{where}: entry must be an object")
        for key in ("label", "curve", "map"):
            if key not in item:
                raise SchemaError(f"{where}: missing required key {key!r}")
        label = item["label"]
        if label in seen:
            raise SchemaError(f"{where}: duplicate label")
        seen.add(label)
        try:
            curve = curve_from_json(item["curve"])
        except Exception as exc:
            raise SchemaError(f"{where}: bad curve: {exc}") from exc
        entry = CorpusEntry(
            label=label,
            curve=curve,
            map_expr=item["map"],
            source_tables=tuple(item.get("source_tables", ())),
            variant_of=item.get("variant_of"),
            expected=item.get("expected", {}),
            decomposition=item.get("decomposition", {}),
        )
        try:
            entry.pair()
        except Exception as exc:
            raise SchemaError(f"{where}: bad map: {exc}") from exc
        entries.append(entry)
    return entries


class _EntryTimeout(Exception):
    pass


@dataclass
class EntryResult:
    label: str
    status: str  # ok | mismatch | unresolved | timeout
    report: QuasiCriticalReport | None = None
    mismatches: list = field(default_factory=list)
    seconds: float = 0.0

    def to_json(self) -> dict:
        out = {
            "label": self.label,
            "status": self.status,
            "mismatches": list(self.mismatches),
        }
        out["report"] = None if self.report is None else report_to_dict(self.report)
        return out


def _check_expected(entry: CorpusEntry, report: QuasiCriticalReport) -> list[str]:
    expected = entry.expected
    problems = []
    if "ram_indices" in expected:
        want = sorted(expected["ram_indices"])
        got = report.ramification_multiset
        if want != got:
            problems.append(f"ram_indices: expected {want}, got {got}")
    if "points" in expected:
        want_pts = set(expected["points"])
        got_pts = {str(P) for P in report.quasi_critical_points}
        if want_pts != got_pts:
            problems.append(f"points: expected {sorted(want_pts)}, got {sorted(got_pts)}")
    if "group" in expected:
        if report.group != expected["group"]:
            problems.append(f"group: expected {expected['group']}, got {report.group}")
    if "all_torsion" in expected:
        if report.all_torsion != expected["all_torsion"]:
            problems.append(
                f"all_torsion: expected {expected['all_torsion']}, got {report.all_torsion}"
            )
    if report.belyi.status is False:
        problems.append("map failed the Belyi check")
    if not report.degree_identity_holds():
        problems.append("degree identity across fibers failed")
    return problems


def _check_decomposition(entry: CorpusEntry) -> list[str]:
    dec = entry.decomposition
    if not dec:
        return []
    problems = []
    pair = entry.pair()
    if "gamma" in dec:
        phi = parse_curve_function(dec["phi"], entry.curve)
        if not decompose_verify(pair, dec["gamma"], phi):
            problems.append("dynamical decomposition gamma(phi) != beta")
    if "isogeny" in dec:
        psi = isogeny_from_json(dec["isogeny"])
        diag = isogeny_verify(psi)
        if not diag.curve_identity:
            problems.append("isogeny fails the curve-to-curve identity")
        phi_curve = psi.target
        phi = parse_curve_function(dec["phi"], phi_curve)
        composed = compose_pair(BelyiPair(phi_curve, phi, entry.label + "-phi"), psi)
        if composed.map != pair.map:
            problems.append("isogeny decomposition phi(psi) != beta")
    return problems


def analyze_entry(entry: CorpusEntry, config: RunConfig) -> EntryResult:
    start = time.monotonic()
    deadline = start + config.timeout_seconds

    def checkpoint():
        if time.monotonic() >= deadline:
            raise _EntryTimeout

    try:
        checkpoint()
        pair = entry.pair()
        report = analyze(
            pair,
            torsion_bound=config.torsion_bound,
            closure_bound=config.closure_bound,
            checkpoint=checkpoint,
        )
        checkpoint()
        mismatches = _check_expected(entry, report)
        mismatches.extend(_check_decomposition(entry))
    except _EntryTimeout:
        return EntryResult(entry.label, "timeout", seconds=time.monotonic() - start)
    seconds = time.monotonic() - start
    if mismatches:
        return EntryResult(entry.label, "mismatch", report, mismatches, seconds)
    if not report.fully_resolved:
        return EntryResult(entry.label, "unresolved", report, [], seconds)
    return EntryResult(entry.label, "ok", report, [], seconds)


def run_pipeline(entries, config: RunConfig | None = None) -> list[EntryResult]:
    """Analyze every entry, deterministically ordered by label.

    Entries are independent (the analysis is pure), so they could be
    farmed out to workers; results are merged back in label order either
    way.  The current driver runs them sequentially.
    """
    config = config or RunConfig()
    results = [analyze_entry(e, config) for e in sorted(entries, key=lambda e: e.label)]
    return results


def status_counts(results) -> dict[str, int]:
    counts = {"ok": 0, "mismatch": 0, "unresolved": 0, "timeout": 0}
    for r in results:
        counts[r.status] += 1
    return counts


def emit_report(results, fmt: str = "json", path: str | None = None) -> str:
    """Render results (ordered by label) as json, csv, or a text table."""
    results = sorted(results, key=lambda r: r.label)
    if fmt == "json":
        payload = {
            "results": [r.to_json() for r in results],
            "counts": status_counts(results),
        }
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    elif fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["label", "degree", "B", "W", "F", "all_torsion", "group", "status"])
        for r in results:
            if r.report is None:
                writer.writerow([r.label, "", "", "", "", "", "", r.status])
                continue
            rep = r.report
            sizes = [len(rep.fibers[tag].points) for tag in FIBER_TAGS]
            writer.writerow(
                [r.label, rep.degree, *sizes, rep.all_torsion, rep.group or "", r.status]
            )
        text = buf.getvalue()
    elif fmt == "table":
        rows = [("label", "deg", "ram indices", "all_torsion", "group", "status")]
        for r in results:
            if r.report is None:
                rows.append((r.label, "-", "-", "-", "-", r.status))
                continue
            rep = r.report
            rows.append(
                (
                    r.label,
                    str(rep.degree),
                    " ".join(map(str, rep.ramification_multiset)),
                    str(rep.all_torsion),
                    rep.group or "-",
                    r.status,
                )
            )
        widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
        lines = [
            "  ".join(str(cell).ljust(w) for cell, w in zip(row, widths)).rstrip()
            for row in rows
        ]
        text = "\n".join(lines) + "\n"
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    return text
