"""Rendering of evaluation output: a results HTML document (per-example
predictions with p-value bars), a statistics HTML document (accuracies,
averages, histograms), and a machine-readable line-per-example report.

The machine report is JSON-lines: a header object carrying the run metadata,
then one object per example with the keys ``index, true_label,
predicted_label, confidence, credibility, p_0..p_{C-1}``.
"""

from __future__ import annotations

import html
import json
from dataclasses import dataclass

from .evaluation import EvalRun, Statistics


@dataclass(frozen=True)
class ReportBundle:
    results_html: str
    statistics_html: str
    machine_report: str


_STYLE = """
body { font-family: sans-serif; margin: 1.5em; }
table { border-collapse: collapse; margin: 1em 0; }
th, td { border: 1px solid #999; padding: 2px 8px; text-align: left; }
.bar { background: #4a7edb; display: inline-block; height: 0.8em; }
.hbar { background: #7ab648; display: inline-block; height: 0.8em; }
.ok { color: #0a7a0a; } .bad { color: #b00020; }
"""


def _fmt(v: float | None, digits: int = 1) -> str:
    return "-" if v is None else f"{v:.{digits}f}"


def _header_block(run: EvalRun, stats: Statistics | None) -> str:
    rows = [
        ("Testing mode", run.mode),
        ("Algorithm", run.algorithm.upper()),
        ("Nearest neighbours k", str(run.k)),
        ("Distance measure", run.metric),
        ("Training data", run.train_name or "(unnamed)"),
        ("Test data", run.test_name or "(unnamed)"),
    ]
    if stats is not None and stats.significance_threshold is not None:
        rows.append(("Significance threshold", f"{stats.significance_threshold:g}%"))
    cells = "".join(
        f"<tr><th>{html.escape(k)}</th><td>{html.escape(v)}</td></tr>"
        for k, v in rows
    )
    return f"<table>{cells}</table>"


def _pvalue_bars(p_values, class_names) -> str:
    parts = []
    for name, p in zip(class_names, p_values):
        width = max(1, int(round(p * 100)))
        parts.append(
            f"<div>{html.escape(name)}: "
            f"<span class='bar' style='width:{width}px'></span> {p:.4f}</div>"
        )
    return "".join(parts)


def _results_document(run: EvalRun, stats: Statistics | None) -> str:
    labeled = all(r.true_label is not None for r in run.results)
    has_p = all(r.p_values is not None for r in run.results)
    echo = any(r.features is not None for r in run.results)

    head = ["<th>#</th>"]
    if labeled:
        head.append("<th>Actual class</th>")
    head.append("<th>Predicted class</th>")
    if labeled:
        head.append("<th>Correct</th>")
    if has_p:
        head.append("<th>Confidence</th><th>Credibility</th><th>p-values</th>")
    if echo:
        head.append("<th>Attributes</th>")

    body_rows = []
    for r in run.results:
        cells = [f"<td>{r.index}</td>"]
        if labeled:
            cells.append(f"<td>{html.escape(run.class_names[r.true_label])}</td>")
        cells.append(f"<td>{html.escape(run.class_names[r.predicted])}</td>")
        if labeled:
            good = r.predicted == r.true_label
            cells.append(f"<td class='{'ok' if good else 'bad'}'>"
                         f"{'yes' if good else 'NO'}</td>")
        if has_p:
            cells.append(f"<td>{r.confidence:.4f}</td>")
            cells.append(f"<td>{r.credibility:.4f}</td>")
            cells.append(f"<td>{_pvalue_bars(r.p_values, run.class_names)}</td>")
        if echo:
            feat = "" if r.features is None else "\t".join(
                f"{v:g}" for v in r.features)
            cells.append(f"<td>{html.escape(feat)}</td>")
        body_rows.append(f"<tr>{''.join(cells)}</tr>")

    return (
        "<!DOCTYPE html><html><head><meta charset='utf-8'>"
        f"<title>Results: {html.escape(run.test_name)}</title>"
        f"<style>{_STYLE}</style></head><body>"
        f"<h1>Classification results</h1>{_header_block(run, stats)}"
        f"<table><tr>{''.join(head)}</tr>{''.join(body_rows)}</table>"
        "</body></html>"
    )


def _histogram_table(title: str, hist, interval: int) -> str:
    if hist is None:
        return ""
    rows = []
    for b, pct in enumerate(hist):
        lo = b * interval
        hi = lo + interval
        width = max(1, int(round(pct * 3)))
        rows.append(
            f"<tr><td>{lo}-{hi}%</td>"
            f"<td><span class='hbar' style='width:{width}px'></span> "
            f"{pct:.1f}%</td></tr>"
        )
    return (f"<h2>{html.escape(title)}</h2>"
            f"<table><tr><th>Interval</th><th>Share of examples</th></tr>"
            f"{''.join(rows)}</table>")


def _statistics_document(run: EvalRun, stats: Statistics) -> str:
    parts = [
        "<!DOCTYPE html><html><head><meta charset='utf-8'>",
        f"<title>Statistics: {html.escape(run.test_name)}</title>",
        f"<style>{_STYLE}</style></head><body>",
        "<h1>Statistical performance</h1>",
        _header_block(run, stats),
        "<h2>Counts</h2><table>",
        f"<tr><th>Training examples</th><td>{run.train_count}</td></tr>",
        f"<tr><th>Test examples</th><td>{stats.total}</td></tr>",
        f"<tr><th>Classified</th><td>{stats.classified}</td></tr>",
        f"<tr><th>Not classified</th><td>{stats.not_classified_pct:.1f}%</td></tr>",
        "</table>",
        "<h2>Accuracy</h2><table>",
        f"<tr><th>Overall</th><td>{_fmt(stats.overall_accuracy)}%</td></tr>",
    ]
    for c, name in enumerate(run.class_names):
        parts.append(f"<tr><th>{html.escape(name)}</th>"
                     f"<td>{_fmt(stats.class_accuracy[c])}%</td></tr>")
    parts.append("</table>")

    if any(row is not None for row in stats.confusion):
        parts.append("<h2>Misclassification breakdown</h2><table><tr><th>True class"
                     "</th>")
        parts.extend(f"<th>as {html.escape(n)}</th>" for n in run.class_names)
        parts.append("</tr>")
        for c, row in enumerate(stats.confusion):
            if row is None:
                continue
            parts.append(f"<tr><th>{html.escape(run.class_names[c])}</th>")
            parts.extend(f"<td>{v:.1f}%</td>" for v in row)
            parts.append("</tr>")
        parts.append("</table>")

    parts.append("<h2>Averages</h2><table>")
    parts.append(f"<tr><th>Average confidence</th>"
                 f"<td>{_fmt(stats.avg_confidence)}%</td></tr>")
    parts.append(f"<tr><th>Average credibility</th>"
                 f"<td>{_fmt(stats.avg_credibility)}%</td></tr>")
    if stats.sensitivity is not None:
        parts.append(f"<tr><th>Sensitivity</th>"
                     f"<td>{stats.sensitivity:.1f}%</td></tr>")
    if stats.false_positive_rate is not None:
        parts.append(f"<tr><th>False positive rate</th>"
                     f"<td>{stats.false_positive_rate:.1f}%</td></tr>")
    parts.append("</table>")

    parts.append(_histogram_table("Confidence histogram",
                                  stats.confidence_histogram,
                                  stats.histogram_interval))
    parts.append(_histogram_table("Credibility histogram",
                                  stats.credibility_histogram,
                                  stats.histogram_interval))
    parts.append("</body></html>")
    return "".join(parts)


def machine_report(run: EvalRun, stats: Statistics | None) -> str:
    """JSON-lines report: one header object, then one object per example."""
    header = {
        "mode": run.mode,
        "algorithm": run.algorithm,
        "k": run.k,
        "metric": run.metric,
        "train_name": run.train_name,
        "test_name": run.test_name,
        "class_names": list(run.class_names),
        "significance": None if stats is None else stats.significance_threshold,
    }
    lines = [json.dumps(header, sort_keys=True)]
    for r in run.results:
        entry = {
            "index": r.index,
            "true_label": r.true_label,
            "predicted_label": r.predicted,
            "confidence": r.confidence,
            "credibility": r.credibility,
        }
        if r.p_values is not None:
            for j, p in enumerate(r.p_values):
                entry[f"p_{j}"] = p
        lines.append(json.dumps(entry, sort_keys=True))
    return "\n".join(lines) + "\n"


def parse_machine_report(text: str) -> tuple[dict, list[dict]]:
    """Inverse of :func:`machine_report` (used for round-trip checks)."""
    lines = [ln for ln in text.split("\n") if ln.strip()]
    if not lines:
        raise ValueError("empty report")
    return json.loads(lines[0]), [json.loads(ln) for ln in lines[1:]]


def render_reports(run: EvalRun, stats: Statistics | None = None,
                   meta: dict | None = None) -> ReportBundle:
    """Produce the results document, the statistics document and the machine
    report for a finished run.  ``stats`` may be None for unlabeled
    (batch-prediction) runs, in which case only the results document carries
    content beyond the header."""
    results_html = _results_document(run, stats)
    if stats is not None:
        stats_html = _statistics_document(run, stats)
    else:
        stats_html = (
            "<!DOCTYPE html><html><head><meta charset='utf-8'>"
            f"<title>Statistics: {html.escape(run.test_name)}</title>"
            f"<style>{_STYLE}</style></head><body>"
            "<h1>Statistical performance</h1>"
            + _header_block(run, None)
            + "<p>No labels in the test data; no statistics available.</p>"
            "</body></html>"
        )
    return ReportBundle(results_html, stats_html, machine_report(run, stats))
