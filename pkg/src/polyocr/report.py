"""Assemble evaluation counts into JSON and Markdown reports.

Two views are produced for every OCR pipeline: a global/region-group view
(weighted mean ± std over commentaries, weights = GT character counts) and
a per-commentary view (F1, CER, NLD).
"""

from __future__ import annotations

import json
from typing import Mapping

from . import __version__
from .docmodel import RegionGroup
from .evaluate import GLOBAL, Counts, aggregate_weighted, scope_names

METRICS = ("cer", "wer", "bow_f1", "nld")

NOTES = {
    "char_unit": "NFC codepoints of word texts; whitespace excluded, punctuation included",
    "cer": "edit operations over GT characters, capped at 1; spurious OCR words count as insertions",
    "alignment": "greedy one-to-one word matching by descending bbox IoU",
    "summary": "mean and std over commentaries, weighted by GT character count",
    "nld": "1 - CER",
}


def _short(scope: str) -> str:
    return "Global" if scope == GLOBAL else RegionGroup(scope).short_name


def _rows(counts: Mapping[str, Counts], groups: bool) -> dict:
    rows = {}
    for scope in scope_names():
        c = counts.get(scope)
        if c is None:
            continue
        if scope != GLOBAL and (not groups or c.gt_chars == 0):
            continue
        rows[scope] = c.row()
    return rows


def build_report(
    results: Mapping[str, Mapping[str, Mapping[str, Counts]]],
    stats: Mapping[str, Mapping[str, tuple[int, float]]],
    iou_threshold: float,
    groups: bool = True,
    timestamp: str = "",
    total_stats: Mapping[str, tuple[int, float]] | None = None,
) -> dict:
    """Build the JSON-ready report.

    ``results`` maps pipeline -> commentary -> scope -> pooled counts;
    ``stats`` maps commentary -> scope -> (GT chars, Greek share) and
    ``total_stats`` the same for the whole corpus.
    """

    def stat_rows(st):
        return {
            s: {"char_count": n, "greek_pct": g}
            for s, (n, g) in st.items()
            if s == GLOBAL or (groups and n)
        }

    corpus = {"commentaries": {cid: stat_rows(stats[cid]) for cid in sorted(stats)}}
    if total_stats is not None:
        corpus["total"] = stat_rows(total_stats)
    pipelines = {}
    for name, per_comm in results.items():
        commentaries = {cid: _rows(per_comm[cid], groups) for cid in sorted(per_comm)}
        pooled_counts: dict[str, Counts] = {}
        for cid in sorted(per_comm):
            for scope, c in per_comm[cid].items():
                pooled_counts[scope] = pooled_counts.get(scope, Counts()) + c
        summary = {}
        for scope in scope_names():
            weighted = [
                (rows[scope], rows[scope]["char_count"])
                for rows in commentaries.values()
                if scope in rows and rows[scope]["char_count"] > 0
            ]
            if not weighted:
                continue
            entry = {"char_count": sum(w for _, w in weighted),
                     "greek_pct": pooled_counts[scope].greek_pct,
                     "commentaries": len(weighted)}
            for metric in METRICS:
                mean, std = aggregate_weighted((row[metric], w) for row, w in weighted)
                entry[metric] = {"mean": mean, "std": std}
            summary[scope] = entry
        pipelines[name] = {
            "summary": summary,
            "pooled": _rows(pooled_counts, groups),
            "commentaries": commentaries,
        }
    return {
        "tool": "polyocr",
        "version": __version__,
        "generated": timestamp,
        "settings": {"iou_threshold": iou_threshold, "groups": groups, "notes": NOTES},
        "corpus": corpus,
        "pipelines": pipelines,
    }


def dumps(report: dict) -> bytes:
    return (json.dumps(report, ensure_ascii=False, indent=1) + "\n").encode("utf-8")


def fmt(x: float) -> str:
    s = f"{x:.2f}"
    return s[1:] if s.startswith("0.") else s


def _pm(entry: dict, metric: str) -> str:
    return f"{fmt(entry[metric]['mean'])}±{fmt(entry[metric]['std'])}"


def _table(header: list[str], rows: list[list[str]]) -> list[str]:
    out = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
    out += ["| " + " | ".join(r) + " |" for r in rows]
    return out


def render_markdown(report: dict) -> str:
    lines = ["# OCR evaluation report", ""]
    if report.get("generated"):
        lines.append(f"Generated: {report['generated']}")
        lines.append("")
    settings = report["settings"]
    lines.append(f"- IoU threshold: {settings['iou_threshold']}")
    for key, note in settings["notes"].items():
        lines.append(f"- {key}: {note}")
    lines.append("")

    scopes = [s for s in scope_names() if any(s in p["summary"] for p in report["pipelines"].values())]
    group_scopes = [s for s in scopes if s != GLOBAL]

    # global and region-group view
    header = ["Region", "Global F1", "Global CER", "Global WER"] + [_short(s) for s in group_scopes]
    totals = {}
    corpus = report["corpus"]
    for scope in scopes:
        if "total" in corpus:
            entry = corpus["total"].get(scope, {"char_count": 0, "greek_pct": 0.0})
            n, pct = entry["char_count"], entry["greek_pct"]
        else:
            parts = [c[scope] for c in corpus["commentaries"].values() if scope in c]
            n = sum(p["char_count"] for p in parts)
            weighted = [(p["greek_pct"], p["char_count"]) for p in parts if p["char_count"]]
            pct = aggregate_weighted(weighted)[0] if weighted else 0.0
        totals[scope] = f"{n} ({round(pct * 100)}%)"
    rows = [["Nb. of chars (% Greek)", totals.get(GLOBAL, "-"), "", ""] + [totals[s] for s in group_scopes],
            ["Metric", "F1", "CER", "WER"] + ["CER"] * len(group_scopes)]
    for name, p in report["pipelines"].items():
        summ = p["summary"]
        g = summ.get(GLOBAL)
        row = [name] + ([_pm(g, "bow_f1"), _pm(g, "cer"), _pm(g, "wer")] if g else ["-"] * 3)
        row += [_pm(summ[s], "cer") if s in summ else "-" for s in group_scopes]
        rows.append(row)
    lines.append("## Global and regional results (weighted mean ± std)")
    lines.append("")
    lines += _table(header, rows)
    lines.append("")

    # per-commentary view
    cids = sorted({cid for p in report["pipelines"].values() for cid in p["commentaries"]})
    header = ["Commentary"] + [f"{cid} {m}" for cid in cids for m in ("F1", "CER", "NLD")]
    rows = []
    for name, p in report["pipelines"].items():
        row = [name]
        for cid in cids:
            r = p["commentaries"].get(cid, {}).get(GLOBAL)
            row += [fmt(r["bow_f1"]), fmt(r["cer"]), fmt(r["nld"])] if r else ["-"] * 3
        rows.append(row)
    lines.append("## Per commentary")
    lines.append("")
    lines += _table(header, rows)
    lines.append("")
    return "\n".join(lines)
