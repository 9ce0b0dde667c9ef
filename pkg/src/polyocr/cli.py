"""Command-line batch runs driven by a JSON manifest.

    polyocr stats       --manifest M
    polyocr postprocess --manifest M [--jobs N]
    polyocr evaluate    --manifest M [--iou 0.3] [--groups on|off] [--jobs N]
                        [--pin-timestamp ISO8601] [--with-postprocessed]
    polyocr report      --manifest M

Exit codes: 0 success, 1 input error, 2 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from .docmodel import DocumentError, Page, Taxonomy, assign_regions, load_page, parse_region_annotation_sets, write_canonical
from .evaluate import GLOBAL, AlignmentError, Counts, corpus_stats, evaluate_page, pool, scope_names
from .lexicon import LexiconError, build_unique_accent_index, load_wordlist
from .postprocess import CorrectionLog, PipelineConfig, PipelineError, run_pipeline
from .report import build_report, dumps, render_markdown

log = logging.getLogger("polyocr")

LEXICON_DIR_ENV = "POLYOCR_LEXICON_DIR"
PAGE_SUFFIXES = (".html", ".hocr", ".xhtml", ".json")
POSTPROCESSED_SUFFIX = "+post"


class InputError(Exception):
    pass


class InvariantError(Exception):
    pass


@dataclass
class CommentaryEntry:
    id: str
    gt: Path
    ocr: dict[str, Path]
    regions: Path
    language: str = ""


@dataclass
class RunManifest:
    path: Path
    root: Path
    commentaries: list[CommentaryEntry]
    lexicons: dict[str, Path] = field(default_factory=dict)
    pipeline: Path | None = None
    taxonomy: Path | None = None
    output: Path = Path("out")

    def load_taxonomy(self) -> Taxonomy:
        return Taxonomy.load(self.taxonomy) if self.taxonomy else Taxonomy.default()


def _resolve(root: Path, value: str) -> Path:
    p = Path(value)
    return p if p.is_absolute() else root / p


def _resolve_lexicon(root: Path, value: str) -> Path:
    p = Path(value)
    if p.is_absolute():
        return p
    env = os.environ.get(LEXICON_DIR_ENV)
    return Path(env) / p if env else root / p


def load_manifest(path: str | Path) -> RunManifest:
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise InputError(f"cannot read manifest {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"manifest {path} is not valid JSON: {exc}") from None
    root = _resolve(path.parent, doc.get("root", "."))
    entries = doc.get("commentaries") or []
    if not entries:
        raise InputError("manifest lists no commentaries")
    commentaries, missing = [], []
    for i, e in enumerate(entries):
        try:
            cid = e["id"]
            ocr = e.get("ocr", {})
            if isinstance(ocr, str):
                ocr = {"ocr": ocr}
            entry = CommentaryEntry(
                cid, _resolve(root, e["gt"]), {k: _resolve(root, v) for k, v in ocr.items()},
                _resolve(root, e["regions"]), e.get("language", ""),
            )
        except (KeyError, TypeError) as exc:
            raise InputError(f"manifest commentaries[{i}]: missing field {exc}") from None
        for p in [entry.gt, entry.regions, *entry.ocr.values()]:
            if not p.is_dir():
                missing.append(str(p))
        commentaries.append(entry)
    ids = [c.id for c in commentaries]
    if len(set(ids)) != len(ids):
        raise InputError(f"duplicate commentary ids in manifest: {ids}")
    m = RunManifest(
        path=path,
        root=root,
        commentaries=commentaries,
        lexicons={k: _resolve_lexicon(root, v) for k, v in (doc.get("lexicons") or {}).items()},
        pipeline=_resolve(root, doc["pipeline"]) if doc.get("pipeline") else None,
        taxonomy=_resolve(root, doc["taxonomy"]) if doc.get("taxonomy") else None,
        output=_resolve(root, doc.get("output", "out")),
    )
    for p in (m.pipeline, m.taxonomy):
        if p is not None and not p.is_file():
            missing.append(str(p))
    if missing:
        raise InputError("manifest paths do not exist: " + ", ".join(missing))
    return m


def _page_files(directory: Path) -> dict[str, Path]:
    out = {}
    for p in sorted(directory.iterdir()):
        if p.suffix.lower() in PAGE_SUFFIXES and p.is_file() and p.name != "corrections.tsv":
            out[p.name.split(".")[0]] = p
    return out


def load_pages(directory: Path, taxonomy: Taxonomy) -> dict[str, Page]:
    pages = {}
    for page_id, p in _page_files(directory).items():
        try:
            page = load_page(p, taxonomy)
        except DocumentError as exc:
            raise InputError(f"{p}: {exc}") from None
        pages[page_id] = page if page.id == page_id else Page(page_id, page.image_dims, page.regions)
    return pages


def load_annotations(directory: Path, taxonomy: Taxonomy) -> dict:
    out = {}
    for p in sorted(directory.glob("*.json")):
        try:
            sets = parse_region_annotation_sets(p.read_bytes(), taxonomy)
        except DocumentError as exc:
            raise InputError(f"{p}: {exc}") from None
        for stem, rects in sets.items():
            out[stem or p.stem] = rects
    return out


def load_gt(entry: CommentaryEntry, taxonomy: Taxonomy) -> dict[str, Page]:
    """GT pages of one commentary with words distributed over annotated regions."""
    pages = load_pages(entry.gt, taxonomy)
    annots = load_annotations(entry.regions, taxonomy)
    no_gt = sorted(set(annots) - set(pages))
    if no_gt:
        raise InputError(f"{entry.id}: ground truth missing for pages: {', '.join(no_gt)}")
    no_annot = sorted(set(pages) - set(annots))
    if no_annot:
        raise InputError(f"{entry.id}: region annotations missing for pages: {', '.join(no_annot)}")
    return {pid: assign_regions(pages[pid], annots[pid], taxonomy) for pid in sorted(pages)}


def _timestamp(pinned: str | None) -> str:
    if pinned:
        try:
            # 3.10's parser rejects a trailing Z
            datetime.fromisoformat(pinned[:-1] + "+00:00" if pinned.endswith("Z") else pinned)
        except ValueError:
            raise InputError(f"--pin-timestamp {pinned!r} is not ISO 8601") from None
        return pinned
    return datetime.now(timezone.utc).replace(microsecond=0).isoformat()


def _map(fn, items: list, jobs: int) -> list:
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool_:
        return list(pool_.map(fn, items))


# --- stats -----------------------------------------------------------------


def collect_stats(m: RunManifest) -> dict:
    taxonomy = m.load_taxonomy()
    per = {}
    all_pages = []
    for entry in m.commentaries:
        pages = list(load_gt(entry, taxonomy).values())
        all_pages += pages
        per[entry.id] = corpus_stats(pages, taxonomy)
    per[GLOBAL] = corpus_stats(all_pages, taxonomy)
    return {
        cid: {scope: {"char_count": n, "greek_pct": g} for scope, (n, g) in stats.items()}
        for cid, stats in per.items()
    }


def stats_markdown(stats: dict) -> str:
    header = ["Commentary"] + scope_names()
    lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
    for cid, row in stats.items():
        cells = [f"{row[s]['char_count']} ({round(row[s]['greek_pct'] * 100)}%)" for s in scope_names()]
        lines.append("| " + " | ".join([cid] + cells) + " |")
    return "\n".join(lines) + "\n"


def cmd_stats(m: RunManifest, args) -> int:
    stats = collect_stats(m)
    m.output.mkdir(parents=True, exist_ok=True)
    (m.output / "stats.json").write_bytes(dumps(stats))
    (m.output / "stats.md").write_text(stats_markdown(stats), encoding="utf-8")
    print(stats_markdown(stats), end="")
    return 0


# --- postprocess -----------------------------------------------------------


def _postprocess_one(job):
    page, cfg, lexicon, index, table = job
    return run_pipeline(page, cfg, lexicon, index, table)


def load_resources(m: RunManifest, cfg: PipelineConfig):
    lexicon = index = None
    for stage, key in (("unique_accent", "unique_accents"), ("confusion", "wordlist")):
        if stage not in cfg.stages:
            continue
        path = m.lexicons.get(key)
        if path is None:
            raise InputError(f"stage {stage!r} needs lexicons.{key} in the manifest")
        try:
            lex = load_wordlist(path)
        except LexiconError as exc:
            raise InputError(f"stage {stage!r}: {exc}") from None
        if stage == "unique_accent":
            index = build_unique_accent_index(lex)
        else:
            lexicon = lex
    return lexicon, index


def cmd_postprocess(m: RunManifest, args) -> int:
    try:
        cfg = PipelineConfig.load(m.pipeline) if m.pipeline else PipelineConfig()
        table = cfg.load_table() if "confusion" in cfg.stages else None
    except (PipelineError, OSError, ValueError) as exc:
        raise InputError(f"pipeline config: {exc}") from None
    lexicon, index = load_resources(m, cfg)
    taxonomy = m.load_taxonomy()
    for entry in m.commentaries:
        for name, directory in entry.ocr.items():
            pages = load_pages(directory, taxonomy)
            ids = sorted(pages)
            results = _map(_postprocess_one, [(pages[p], cfg, lexicon, index, table) for p in ids], args.jobs)
            out_dir = m.output / "postprocessed" / entry.id / name
            out_dir.mkdir(parents=True, exist_ok=True)
            for pid, (page, _) in zip(ids, results):
                (out_dir / f"{pid}.json").write_bytes(write_canonical(page))
            merged = CorrectionLog.merged([lg for _, lg in results])
            (out_dir / "corrections.tsv").write_text(merged.to_tsv(), encoding="utf-8")
            print(f"{entry.id}/{name}: {len(ids)} pages, {len(merged)} corrections, "
                  f"{len(merged.unresolved)} unresolved hyphens -> {out_dir}")
    return 0


# --- evaluate --------------------------------------------------------------


def _evaluate_one(job):
    gt, ocr, taxonomy, iou = job
    return evaluate_page(gt, ocr, taxonomy, iou)


def _check_invariants(report: dict) -> None:
    for name, p in report["pipelines"].items():
        for cid, rows in list(p["commentaries"].items()) + [("pooled", p["pooled"])]:
            for scope, row in rows.items():
                if row["nld"] != 1 - row["cer"]:
                    raise InvariantError(f"{name}/{cid}/{scope}: NLD != 1 - CER")
                if not 0.0 <= row["cer"] <= 1.0:
                    raise InvariantError(f"{name}/{cid}/{scope}: CER outside [0, 1]")


def evaluate_manifest(m: RunManifest, iou: float, groups: bool, jobs: int,
                      timestamp: str, with_postprocessed: bool = False) -> dict:
    taxonomy = m.load_taxonomy()
    results: dict[str, dict[str, dict[str, Counts]]] = {}
    stats = {}
    all_gt = []
    for entry in m.commentaries:
        gt_pages = load_gt(entry, taxonomy)
        all_gt += gt_pages.values()
        stats[entry.id] = corpus_stats(gt_pages.values(), taxonomy)
        sources = dict(entry.ocr)
        if with_postprocessed:
            for name in entry.ocr:
                post = m.output / "postprocessed" / entry.id / name
                if not post.is_dir():
                    raise InputError(f"no post-processed output at {post}; run 'postprocess' first")
                sources[name + POSTPROCESSED_SUFFIX] = post
        for name, directory in sources.items():
            ocr_pages = load_pages(directory, taxonomy)
            orphans = sorted(set(gt_pages) ^ set(ocr_pages))
            if orphans:
                raise InputError(f"{entry.id}/{name}: pages without a GT/OCR counterpart: {', '.join(orphans)}")
            jobs_ = [(gt_pages[p], ocr_pages[p], taxonomy, iou) for p in sorted(gt_pages)]
            try:
                evals = _map(_evaluate_one, jobs_, jobs)
            except AlignmentError as exc:
                raise InputError(str(exc)) from None
            results.setdefault(name, {})[entry.id] = pool(evals)
    report = build_report(results, stats, iou, groups, timestamp, corpus_stats(all_gt, taxonomy))
    _check_invariants(report)
    return report


def cmd_evaluate(m: RunManifest, args) -> int:
    if not 0.0 < args.iou <= 1.0:
        raise InputError("--iou must lie in (0, 1]")
    report = evaluate_manifest(
        m, args.iou, args.groups == "on", args.jobs, _timestamp(args.pin_timestamp),
        args.with_postprocessed,
    )
    m.output.mkdir(parents=True, exist_ok=True)
    (m.output / "report.json").write_bytes(dumps(report))
    (m.output / "report.md").write_text(render_markdown(report), encoding="utf-8")
    print(f"wrote {m.output / 'report.json'} and {m.output / 'report.md'}")
    return 0


def cmd_report(m: RunManifest, args) -> int:
    src = Path(args.input) if args.input else m.output / "report.json"
    try:
        report = json.loads(src.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read report {src}: {exc}") from None
    text = render_markdown(report)
    (m.output / "report.md").write_text(text, encoding="utf-8")
    print(text, end="")
    return 0


COMMANDS = {
    "stats": cmd_stats,
    "postprocess": cmd_postprocess,
    "evaluate": cmd_evaluate,
    "report": cmd_report,
}


class _Parser(argparse.ArgumentParser):
    # bad usage is an input error, not an invariant violation (argparse's 2)
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="polyocr", description=__doc__.split("\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--manifest", required=True, help="run manifest (JSON)")
        p.add_argument("--jobs", type=int, default=1, help="worker processes")

    common(sub.add_parser("stats", help="GT character counts and Greek share per region group"))
    common(sub.add_parser("postprocess", help="dehyphenate and spellcheck OCR pages"))
    ev = sub.add_parser("evaluate", help="CER/WER/F1/NLD of OCR pages against GT")
    common(ev)
    ev.add_argument("--iou", type=float, default=0.3, help="minimum IoU for a word match")
    ev.add_argument("--groups", choices=("on", "off"), default="on", help="report region groups")
    ev.add_argument("--pin-timestamp", metavar="ISO8601", help="fixed 'generated' field")
    ev.add_argument("--with-postprocessed", action="store_true",
                    help="also evaluate the output of 'postprocess' for every OCR source")
    rp = sub.add_parser("report", help="render the Markdown view of an existing JSON report")
    common(rp)
    rp.add_argument("--input", help="report JSON (default: <output>/report.json)")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        m = load_manifest(args.manifest)
        return COMMANDS[args.command](m, args)
    except InvariantError as exc:
        print(f"polyocr: invariant violated: {exc}", file=sys.stderr)
        return 2
    except (InputError, DocumentError, LexiconError, PipelineError) as exc:
        print(f"polyocr: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
