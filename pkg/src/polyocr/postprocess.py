"""OCR post-processing: dehyphenation and two lexicon-driven Greek spellchecks.

The stages are pure ``Page -> Page`` transforms. Each returns a
:class:`CorrectionLog` describing what it changed, and :func:`run_pipeline`
chains them according to a :class:`PipelineConfig`.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Callable, Iterator, Sequence

from .docmodel import Line, Page, Region, Word
from .lexicon import Lexicon, UniqueAccentIndex, trim_token
from .polytonic import is_greek_word, letter_count, normalize_nfc, strip_diacritics

HYPHENS = ("-", "\u2010", "\u00ad", "\u2e17")

DEHYPHENATION = "dehyphenation"
UNIQUE_ACCENT = "unique-accent"
CONFUSION_PAIR = "confusion-pair"
RULES = (DEHYPHENATION, UNIQUE_ACCENT, CONFUSION_PAIR)

STAGES = ("dehyphenate", "unique_accent", "confusion")


class PipelineError(ValueError):
    pass


# --- confusion pairs -------------------------------------------------------


@dataclass(frozen=True)
class ConfusionPairTable:
    """Ordered, unordered pairs of easily confused (possibly composed) characters."""

    pairs: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        pairs = tuple((normalize_nfc(a), normalize_nfc(b)) for a, b in self.pairs)
        seen = set()
        for a, b in pairs:
            if not (1 <= len(a) <= 2 and 1 <= len(b) <= 2):
                raise ValueError(f"pair sides must be 1-2 codepoints: {a!r}, {b!r}")
            if a == b:
                raise ValueError(f"degenerate pair {a!r}")
            key = frozenset((a, b))
            if key in seen:
                raise ValueError(f"duplicate pair {a!r}/{b!r}")
            seen.add(key)
        object.__setattr__(self, "pairs", pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    @classmethod
    def from_tsv(cls, text: str) -> "ConfusionPairTable":
        pairs = []
        for lineno, line in enumerate(text.splitlines(), 1):
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.strip("\r\n").split("\t")
            if len(parts) != 2:
                raise ValueError(f"confusion table line {lineno}: expected two tab-separated sides")
            pairs.append((parts[0], parts[1]))
        return cls(tuple(pairs))

    @classmethod
    def load(cls, path: str | Path) -> "ConfusionPairTable":
        return cls.from_tsv(Path(path).read_text(encoding="utf-8"))

    @classmethod
    def default(cls) -> "ConfusionPairTable":
        text = resources.files("polyocr").joinpath("data/confusion_pairs.tsv").read_text(encoding="utf-8")
        return cls.from_tsv(text)


# --- correction log --------------------------------------------------------


@dataclass(frozen=True)
class CorrectionRecord:
    page: str
    line: int
    word: int
    original: str
    corrected: str
    rule: str

    def __post_init__(self):
        if self.rule not in RULES:
            raise ValueError(f"unknown rule {self.rule!r}")
        if self.original == self.corrected:
            raise ValueError("a correction must change the word")


@dataclass(frozen=True)
class UnresolvedHyphen:
    page: str
    line: int
    word: int
    text: str


@dataclass
class CorrectionLog:
    records: list[CorrectionRecord] = field(default_factory=list)
    unresolved: list[UnresolvedHyphen] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[CorrectionRecord]:
        return iter(self.records)

    def extend(self, other: "CorrectionLog") -> None:
        self.records.extend(other.records)
        self.unresolved.extend(other.unresolved)

    def by_rule(self, rule: str) -> list[CorrectionRecord]:
        return [r for r in self.records if r.rule == rule]

    @property
    def dehyphenated(self) -> list[str]:
        """Joined forms produced by dehyphenation, in log order."""
        return [r.corrected for r in self.by_rule(DEHYPHENATION)]

    def to_tsv(self, header: bool = True) -> str:
        rows = ["page\tline\tword\toriginal\tcorrected\trule"] if header else []
        rows += [f"{r.page}\t{r.line}\t{r.word}\t{r.original}\t{r.corrected}\t{r.rule}" for r in self.records]
        return "".join(row + "\n" for row in rows)

    @classmethod
    def merged(cls, logs: Sequence["CorrectionLog"]) -> "CorrectionLog":
        out = cls()
        for lg in logs:
            out.extend(lg)
        return out


# --- dehyphenation ---------------------------------------------------------

_MARGINAL_RE = re.compile(r"[0-9]+\.?")


def _is_marginal_text(text: str) -> bool:
    return _MARGINAL_RE.fullmatch(text) is not None


def is_marginal_number(word: Word, line: Line) -> bool:
    """True for a bare number (optionally with a trailing dot) at either end of its line."""
    if not _is_marginal_text(word.text) or not line.words:
        return False
    return word == line.words[0] or word == line.words[-1]


def _last_content(words: list[Word]) -> int | None:
    if not words:
        return None
    k = len(words) - 1
    if _is_marginal_text(words[k].text) and k > 0:
        k -= 1
    return None if _is_marginal_text(words[k].text) else k


def _first_content(words: list[Word]) -> int | None:
    if not words:
        return None
    k = 1 if _is_marginal_text(words[0].text) else 0
    if k >= len(words) or (k and _is_marginal_text(words[k].text) and k == len(words) - 1):
        return None
    return k


def _hyphen_stem(text: str, hyphens: Sequence[str]) -> str | None:
    if len(text) > 1 and text[-1] in hyphens:
        return text[:-1]
    return None


def dehyphenate(page: Page, hyphens: Sequence[str] = HYPHENS) -> tuple[Page, CorrectionLog]:
    """Join words broken across line ends.

    A line whose last word (ignoring a trailing marginal number) ends in a
    hyphen is joined with the first word of the next line in the same region,
    skipping a leading marginal number there. The joined word keeps the first
    fragment's bbox and position; the second fragment is removed, and lines
    left empty are dropped. A hyphen with no following line is left alone and
    reported in ``log.unresolved``.
    """
    log = CorrectionLog()
    regions = []
    offset = 0
    changed = False
    for region in page.regions:
        lines = [list(ln.words) for ln in region.lines]
        for i in range(len(lines)):
            while True:
                k = _last_content(lines[i])
                if k is None:
                    break
                stem = _hyphen_stem(lines[i][k].text, hyphens)
                if stem is None:
                    break
                j = i + 1
                while j < len(lines) and _first_content(lines[j]) is None:
                    j += 1
                if j == len(lines):
                    log.unresolved.append(UnresolvedHyphen(page.id, offset + i, k, lines[i][k].text))
                    break
                m = _first_content(lines[j])
                first, second = lines[i][k], lines[j][m]
                joined = Word(stem + second.text, first.bbox, first.confidence)
                lines[i][k] = joined
                del lines[j][m]
                changed = True
                log.records.append(CorrectionRecord(
                    page.id, offset + i, k, f"{first.text} {second.text}", joined.text, DEHYPHENATION,
                ))
        new_lines = [Line(tuple(ws), ln.bbox) for ws, ln in zip(lines, region.lines) if ws]
        regions.append(replace(region, lines=tuple(new_lines)))
        offset += len(region.lines)
    if not changed:
        return page, log
    return replace(page, regions=tuple(regions)), log


# --- spellchecks -----------------------------------------------------------


def spellcheck_unique_accent(word: str, idx: UniqueAccentIndex, longer_than: int = 5) -> str:
    """Re-accent a long word whose bare skeleton has a single accented form.

    Only words with more than ``longer_than`` letters are considered;
    punctuation around the word is kept and not counted.
    """
    pre, core, post = trim_token(word)
    if letter_count(core) <= longer_than:
        return word
    target = idx.get(strip_diacritics(core))
    if target is None or target == core:
        return word
    return pre + target + post


def _occurrences(text: str, sub: str) -> list[int]:
    out, start = [], 0
    while True:
        p = text.find(sub, start)
        if p < 0:
            return out
        out.append(p)
        start = p + len(sub)


def _substitute(text: str, positions: Sequence[int], src: str, dst: str) -> str:
    parts, last = [], 0
    for p in positions:
        parts.append(text[last:p])
        parts.append(dst)
        last = p + len(src)
    parts.append(text[last:])
    return normalize_nfc("".join(parts))


def confusion_candidates(word: str, table: ConfusionPairTable, mode: str = "occurrence") -> Iterator[str]:
    """Candidate corrections of ``word`` in scan order.

    ``occurrence`` mode substitutes one side of a pair for the other at a
    single position; pairs are tried in table order, positions left to
    right. ``pair`` mode may substitute several occurrences of the same pair
    side at once (fewest substitutions first).
    """
    if mode == "occurrence":
        for a, b in table.pairs:
            for p in range(len(word)):
                for src, dst in ((a, b), (b, a)):
                    if word.startswith(src, p):
                        yield _substitute(word, [p], src, dst)
    elif mode == "pair":
        for a, b in table.pairs:
            for src, dst in ((a, b), (b, a)):
                occ = _occurrences(word, src)[:10]
                for n in range(1, len(occ) + 1):
                    for subset in itertools.combinations(occ, n):
                        yield _substitute(word, subset, src, dst)
    else:
        raise ValueError(f"unknown confusion mode {mode!r}")


def spellcheck_confusion(
    word: str,
    lex: Lexicon,
    table: ConfusionPairTable,
    mode: str = "occurrence",
) -> str:
    """Replace an out-of-lexicon word by the first lexicon member one confusion away."""
    pre, core, post = trim_token(word)
    if not core or core in lex:
        return word
    for cand in confusion_candidates(core, table, mode):
        if cand != core and cand in lex:
            return pre + cand + post
    return word


# --- pipeline --------------------------------------------------------------


@dataclass(frozen=True)
class PipelineConfig:
    stages: tuple[str, ...] = STAGES
    hyphens: tuple[str, ...] = HYPHENS
    confusion_table: Path | None = None
    confusion_mode: str = "occurrence"
    unique_accent_longer_than: int = 5
    greek_only: bool = True

    def __post_init__(self):
        object.__setattr__(self, "stages", tuple(self.stages))
        object.__setattr__(self, "hyphens", tuple(self.hyphens))
        unknown = [s for s in self.stages if s not in STAGES]
        if unknown:
            raise PipelineError(f"unknown stages {unknown}; choose from {list(STAGES)}")
        if len(set(self.stages)) != len(self.stages):
            raise PipelineError("a stage is listed twice")
        if self.confusion_mode not in ("occurrence", "pair"):
            raise PipelineError(f"unknown confusion_mode {self.confusion_mode!r}")

    @classmethod
    def from_dict(cls, data: dict, base: Path | None = None) -> "PipelineConfig":
        known = {"stages", "hyphens", "confusion_table", "confusion_mode",
                 "unique_accent_longer_than", "greek_only"}
        extra = set(data) - known
        if extra:
            raise PipelineError(f"unknown pipeline settings {sorted(extra)}")
        kwargs = dict(data)
        if kwargs.get("confusion_table"):
            path = Path(kwargs["confusion_table"])
            kwargs["confusion_table"] = path if path.is_absolute() or base is None else base / path
        return cls(**kwargs)

    @classmethod
    def load(cls, path: str | Path) -> "PipelineConfig":
        path = Path(path)
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise PipelineError(f"cannot read pipeline config {path}: {exc}") from None
        return cls.from_dict(data, path.parent)

    def load_table(self) -> ConfusionPairTable:
        if self.confusion_table is None:
            return ConfusionPairTable.default()
        return ConfusionPairTable.load(self.confusion_table)


def map_words(
    page: Page,
    fix: Callable[[str], str],
    rule: str,
    greek_only: bool = True,
) -> tuple[Page, CorrectionLog]:
    """Apply a word-level correction to every (Greek) word of the page."""
    log = CorrectionLog()
    regions = []
    line_no = 0
    for region in page.regions:
        lines = []
        for line in region.lines:
            words = []
            for k, w in enumerate(line.words):
                new = w.text
                if not greek_only or is_greek_word(w.text):
                    new = fix(w.text)
                if new != w.text:
                    log.records.append(CorrectionRecord(page.id, line_no, k, w.text, new, rule))
                    w = Word(new, w.bbox, w.confidence)
                words.append(w)
            lines.append(Line(tuple(words), line.bbox))
            line_no += 1
        regions.append(Region(region.rtype, region.bbox, tuple(lines), region.id))
    if not log.records:
        return page, log
    return replace(page, regions=tuple(regions)), log


def run_pipeline(
    page: Page,
    cfg: PipelineConfig,
    lexicon: Lexicon | None = None,
    index: UniqueAccentIndex | None = None,
    table: ConfusionPairTable | None = None,
) -> tuple[Page, CorrectionLog]:
    """Run the configured stages in order and merge their logs."""
    log = CorrectionLog()
    for stage in cfg.stages:
        if stage == "dehyphenate":
            page, part = dehyphenate(page, cfg.hyphens)
        elif stage == "unique_accent":
            if index is None:
                raise PipelineError("stage 'unique_accent' requires a unique-accent index")
            n = cfg.unique_accent_longer_than
            page, part = map_words(
                page, lambda w: spellcheck_unique_accent(w, index, n), UNIQUE_ACCENT, cfg.greek_only,
            )
        else:
            if lexicon is None:
                raise PipelineError("stage 'confusion' requires a lexicon")
            tbl = table if table is not None else cfg.load_table()
            page, part = map_words(
                page, lambda w: spellcheck_confusion(w, lexicon, tbl, cfg.confusion_mode),
                CONFUSION_PAIR, cfg.greek_only,
            )
        log.extend(part)
    return page, log
