"""Coordinate-based word alignment and OCR quality metrics.

GT and OCR words are paired by bounding-box overlap, not by text. Error
counts are kept as integers per region group (:class:`Counts`) so pages,
commentaries and groups can be pooled exactly before any ratio is taken.
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass, field, fields
from typing import Iterable, Sequence

import numpy as np

from .docmodel import BBox, Page, RegionGroup, Taxonomy, Word, locate
from .polytonic import Script, script_of

log = logging.getLogger(__name__)

GLOBAL = "Global"
DEFAULT_IOU = 0.3


class AlignmentError(ValueError):
    pass


def levenshtein(a: str, b: str) -> int:
    """Unit-cost edit distance between two strings, per codepoint."""
    if a == b:
        return 0
    # common prefix and suffix never cost anything
    start = 0
    while start < len(a) and start < len(b) and a[start] == b[start]:
        start += 1
    end_a, end_b = len(a), len(b)
    while end_a > start and end_b > start and a[end_a - 1] == b[end_b - 1]:
        end_a -= 1
        end_b -= 1
    a, b = a[start:end_a], b[start:end_b]
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        current = [i]
        for j, cb in enumerate(b, 1):
            current.append(min(
                previous[j] + 1,
                current[j - 1] + 1,
                previous[j - 1] + (ca != cb),
            ))
        previous = current
    return previous[-1]


@dataclass
class AlignmentResult:
    matched: list[tuple[Word, Word]] = field(default_factory=list)
    unmatched_gt: list[Word] = field(default_factory=list)
    unmatched_ocr: list[Word] = field(default_factory=list)

    def swapped(self) -> "AlignmentResult":
        return AlignmentResult(
            [(o, g) for g, o in self.matched], list(self.unmatched_ocr), list(self.unmatched_gt),
        )


def iou_matrix(gt: Sequence[BBox], ocr: Sequence[BBox]) -> np.ndarray:
    """Pairwise IoU with inclusive pixel coordinates (see :meth:`BBox.iou`)."""
    g = np.array([tuple(b) for b in gt], dtype=np.int64).reshape(-1, 4)
    o = np.array([tuple(b) for b in ocr], dtype=np.int64).reshape(-1, 4)
    iw = np.minimum(g[:, None, 2], o[None, :, 2]) - np.maximum(g[:, None, 0], o[None, :, 0]) + 1
    ih = np.minimum(g[:, None, 3], o[None, :, 3]) - np.maximum(g[:, None, 1], o[None, :, 1]) + 1
    inter = np.clip(iw, 0, None) * np.clip(ih, 0, None)
    area_g = (g[:, 2] - g[:, 0] + 1) * (g[:, 3] - g[:, 1] + 1)
    area_o = (o[:, 2] - o[:, 0] + 1) * (o[:, 3] - o[:, 1] + 1)
    union = area_g[:, None] + area_o[None, :] - inter
    return inter / union


def _word_key(w: Word) -> tuple:
    return (tuple(w.bbox), w.text)


def align_word_lists(
    gt_words: Sequence[Word],
    ocr_words: Sequence[Word],
    iou_threshold: float = DEFAULT_IOU,
) -> AlignmentResult:
    """Greedy one-to-one matching by descending IoU.

    Pairs below ``iou_threshold`` are never matched. Ties are broken by the
    pair's geometry and text, independent of which side is GT, so swapping
    the inputs swaps the result.
    """
    if not gt_words or not ocr_words:
        return AlignmentResult([], list(gt_words), list(ocr_words))
    ious = iou_matrix([w.bbox for w in gt_words], [w.bbox for w in ocr_words])
    gi, oi = np.nonzero((ious >= iou_threshold) & (ious > 0))
    candidates = sorted(
        zip(gi.tolist(), oi.tolist()),
        key=lambda p: (
            -ious[p[0], p[1]],
            sorted((_word_key(gt_words[p[0]]), _word_key(ocr_words[p[1]]))),
        ),
    )
    used_g: set[int] = set()
    used_o: set[int] = set()
    pairs = []
    for g, o in candidates:
        if g in used_g or o in used_o:
            continue
        used_g.add(g)
        used_o.add(o)
        pairs.append((g, o))
    pairs.sort()
    return AlignmentResult(
        [(gt_words[g], ocr_words[o]) for g, o in pairs],
        [w for i, w in enumerate(gt_words) if i not in used_g],
        [w for i, w in enumerate(ocr_words) if i not in used_o],
    )


def align_words(gt: Page, ocr: Page, iou_threshold: float = DEFAULT_IOU) -> AlignmentResult:
    if tuple(gt.image_dims) != tuple(ocr.image_dims):
        raise AlignmentError(
            f"page {gt.id}: image sizes differ (GT {gt.image_dims}, OCR {ocr.image_dims})"
        )
    return align_word_lists(gt.words, ocr.words, iou_threshold)


# --- metrics on one alignment ----------------------------------------------


def char_errors(alignment: AlignmentResult) -> int:
    return (
        sum(levenshtein(g.text, o.text) for g, o in alignment.matched)
        + sum(len(w.text) for w in alignment.unmatched_gt)
        + sum(len(w.text) for w in alignment.unmatched_ocr)
    )


def gt_chars(alignment: AlignmentResult) -> int:
    return sum(len(g.text) for g, _ in alignment.matched) + sum(len(w.text) for w in alignment.unmatched_gt)


def word_errors(alignment: AlignmentResult) -> int:
    return (
        sum(1 for g, o in alignment.matched if g.text != o.text)
        + len(alignment.unmatched_gt) + len(alignment.unmatched_ocr)
    )


def ratio(errors: int, total: int) -> float:
    """``errors / total`` capped at 1; an empty reference scores 0."""
    if total == 0:
        return 0.0
    return min(1.0, errors / total)


def region_cer(alignment: AlignmentResult) -> float:
    """Character error rate of an alignment already restricted to one scope."""
    total = gt_chars(alignment)
    if total == 0:
        log.warning("CER requested for a scope without ground-truth characters")
    return ratio(char_errors(alignment), total)


def wer(alignment: AlignmentResult) -> float:
    total = len(alignment.matched) + len(alignment.unmatched_gt)
    if total == 0:
        log.warning("WER requested for a scope without ground-truth words")
    return ratio(word_errors(alignment), total)


def bag_of_words_counts(gt_tokens: Iterable[str], ocr_tokens: Iterable[str]) -> tuple[int, int, int]:
    """(shared tokens under multiset intersection, |gt|, |ocr|)."""
    gt_c, ocr_c = Counter(gt_tokens), Counter(ocr_tokens)
    shared = sum((gt_c & ocr_c).values())
    return shared, sum(gt_c.values()), sum(ocr_c.values())


def prf(shared: int, n_gt: int, n_ocr: int) -> tuple[float, float, float]:
    if n_gt == 0 and n_ocr == 0:
        # nothing to find and nothing found
        return 1.0, 1.0, 1.0
    precision = shared / n_ocr if n_ocr else 0.0
    recall = shared / n_gt if n_gt else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return precision, recall, f1


def bag_of_words_f1(gt_tokens: Iterable[str], ocr_tokens: Iterable[str]) -> tuple[float, float, float]:
    """Precision, recall and F1 between two token multisets."""
    return prf(*bag_of_words_counts(gt_tokens, ocr_tokens))


def nld_from_cer(cer: float) -> float:
    """Normalized Levenshtein similarity, the complement of CER."""
    return 1 - cer


def aggregate_weighted(values: Iterable[tuple[float, float]]) -> tuple[float, float]:
    """Weighted mean and weighted (population) standard deviation."""
    values = list(values)
    if any(w < 0 for _, w in values):
        raise ValueError("weights must be non-negative")
    total = sum(w for _, w in values)
    if total == 0:
        raise ValueError("all weights are zero")
    mean = sum(v * w for v, w in values) / total
    var = sum(w * (v - mean) ** 2 for v, w in values) / total
    return mean, math.sqrt(var)


# --- pooled counts per scope -----------------------------------------------


@dataclass
class Counts:
    """Integer tallies for one scope; add instances to pool pages or commentaries."""

    char_errors: int = 0
    gt_chars: int = 0
    word_errors: int = 0
    gt_words: int = 0
    bow_shared: int = 0
    bow_gt: int = 0
    bow_ocr: int = 0
    greek_letters: int = 0
    latin_letters: int = 0

    def __add__(self, other: "Counts") -> "Counts":
        return Counts(*(getattr(self, f.name) + getattr(other, f.name) for f in fields(self)))

    @property
    def cer(self) -> float:
        return ratio(self.char_errors, self.gt_chars)

    @property
    def wer(self) -> float:
        return ratio(self.word_errors, self.gt_words)

    @property
    def greek_pct(self) -> float:
        letters = self.greek_letters + self.latin_letters
        return self.greek_letters / letters if letters else 0.0

    def row(self) -> dict:
        cer = self.cer
        precision, recall, f1 = prf(self.bow_shared, self.bow_gt, self.bow_ocr)
        return {
            "cer": cer,
            "wer": self.wer,
            "nld": nld_from_cer(cer),
            "bow_precision": precision,
            "bow_recall": recall,
            "bow_f1": f1,
            "char_count": self.gt_chars,
            "word_count": self.gt_words,
            "greek_pct": self.greek_pct,
            "char_errors": self.char_errors,
            "word_errors": self.word_errors,
        }


def _script_counts(words: Iterable[Word]) -> tuple[int, int]:
    greek = latin = 0
    for w in words:
        for ch in w.text:
            s = script_of(ch)
            greek += s is Script.GREEK
            latin += s is Script.LATIN
    return greek, latin


def count_alignment(alignment: AlignmentResult) -> Counts:
    gt_words = [g for g, _ in alignment.matched] + alignment.unmatched_gt
    ocr_words = [o for _, o in alignment.matched] + alignment.unmatched_ocr
    shared, n_gt, n_ocr = bag_of_words_counts([w.text for w in gt_words], [w.text for w in ocr_words])
    greek, latin = _script_counts(gt_words)
    return Counts(
        char_errors=char_errors(alignment),
        gt_chars=gt_chars(alignment),
        word_errors=word_errors(alignment),
        gt_words=len(gt_words),
        bow_shared=shared,
        bow_gt=n_gt,
        bow_ocr=n_ocr,
        greek_letters=greek,
        latin_letters=latin,
    )


def gt_word_groups(gt: Page, taxonomy: Taxonomy | None = None) -> dict[int, RegionGroup | None]:
    """Map ``id(word)`` of every GT word to the group of its region."""
    taxonomy = taxonomy or Taxonomy.default()
    out = {}
    for region in gt.regions:
        group = taxonomy.group_of(region.rtype)
        for w in region.words:
            out[id(w)] = group
    return out


def scope_rectangles(gt: Page, taxonomy: Taxonomy | None = None) -> list[tuple[RegionGroup, BBox]]:
    taxonomy = taxonomy or Taxonomy.default()
    return [
        (taxonomy.group_of(r.rtype), r.bbox) for r in gt.regions if r.rtype != taxonomy.unassigned
    ]


def split_by_scope(
    alignment: AlignmentResult,
    gt: Page,
    taxonomy: Taxonomy | None = None,
) -> dict[RegionGroup, AlignmentResult]:
    """Restrict an alignment to each region group.

    Matched pairs and missed GT words follow the GT word's region. Spurious
    OCR words follow the GT region whose rectangle holds their centre; those
    outside every region belong to no group (they still count globally).
    """
    taxonomy = taxonomy or Taxonomy.default()
    groups = gt_word_groups(gt, taxonomy)
    rects = scope_rectangles(gt, taxonomy)
    out = {g: AlignmentResult() for g in RegionGroup}
    for g, o in alignment.matched:
        grp = groups.get(id(g))
        if grp is not None:
            out[grp].matched.append((g, o))
    for w in alignment.unmatched_gt:
        grp = groups.get(id(w))
        if grp is not None:
            out[grp].unmatched_gt.append(w)
    for w in alignment.unmatched_ocr:
        idx = locate(w.bbox, rects)
        if idx is not None:
            out[rects[idx][0]].unmatched_ocr.append(w)
    return out


@dataclass
class PageEvaluation:
    page_id: str
    counts: dict[str, Counts]  # scope name -> counts; scope names are GLOBAL and group values


def evaluate_page(
    gt: Page,
    ocr: Page,
    taxonomy: Taxonomy | None = None,
    iou_threshold: float = DEFAULT_IOU,
) -> PageEvaluation:
    """Align one page pair and tally errors globally and per region group."""
    taxonomy = taxonomy or Taxonomy.default()
    alignment = align_words(gt, ocr, iou_threshold)
    counts = {GLOBAL: count_alignment(alignment)}
    for group, part in split_by_scope(alignment, gt, taxonomy).items():
        counts[group.value] = count_alignment(part)
    return PageEvaluation(gt.id, counts)


def pool(evaluations: Iterable[PageEvaluation]) -> dict[str, Counts]:
    total: dict[str, Counts] = {}
    for ev in sorted(evaluations, key=lambda e: e.page_id):
        for scope, c in ev.counts.items():
            total[scope] = total.get(scope, Counts()) + c
    return total


def scope_names() -> list[str]:
    return [GLOBAL] + [g.value for g in RegionGroup]


def corpus_stats(gt_pages: Iterable[Page], taxonomy: Taxonomy | None = None) -> dict[str, tuple[int, float]]:
    """Character count and Greek share of the GT, globally and per region group.

    Characters are the NFC codepoints of word texts (whitespace never
    belongs to a word). The Greek share is Greek letters over Greek plus
    Latin letters.
    """
    taxonomy = taxonomy or Taxonomy.default()
    tallies = {name: [0, 0, 0] for name in scope_names()}
    for page in gt_pages:
        for region in page.regions:
            group = taxonomy.group_of(region.rtype)
            words = region.words
            chars = sum(len(w.text) for w in words)
            greek, latin = _script_counts(words)
            scopes = [GLOBAL] + ([group.value] if group is not None else [])
            for s in scopes:
                tallies[s][0] += chars
                tallies[s][1] += greek
                tallies[s][2] += latin
    return {
        s: (chars, greek / (greek + latin) if greek + latin else 0.0)
        for s, (chars, greek, latin) in tallies.items()
    }
