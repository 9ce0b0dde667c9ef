"""Wordlists, the unique-accent index, and dictionary-based token accuracy."""

from __future__ import annotations

import logging
import unicodedata
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

from .polytonic import is_greek_word, normalize_nfc, strip_diacritics

log = logging.getLogger(__name__)


class LexiconError(ValueError):
    pass


@dataclass(frozen=True)
class Lexicon:
    """A set of NFC word forms.

    With ``fold_case`` (the default) membership is tested on lowercased
    forms, so a capitalized word at the start of a sentence still matches.
    """

    words: frozenset[str]
    name: str = ""
    fold_case: bool = True

    def __post_init__(self):
        words = frozenset(normalize_nfc(w) for w in self.words)
        for w in words:
            if not w or any(c.isspace() for c in w):
                raise LexiconError(f"invalid lexicon entry {w!r}")
        object.__setattr__(self, "words", words)
        object.__setattr__(self, "_folded", frozenset(w.lower() for w in words))

    @property
    def size(self) -> int:
        return len(self.words)

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word: str) -> bool:
        if self.fold_case:
            return word.lower() in self._folded
        return word in self.words

    @classmethod
    def from_words(cls, words: Iterable[str], name: str = "", fold_case: bool = True) -> "Lexicon":
        return cls(frozenset(words), name, fold_case)


def load_wordlist(path: str | Path, name: str | None = None, fold_case: bool = True) -> Lexicon:
    """Read a UTF-8 wordlist, one word per line.

    Blank lines and lines starting with ``#`` are skipped; entries are NFC
    normalized and deduplicated.
    """
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise LexiconError(f"cannot read wordlist {path}: {exc.strerror}") from None
    words = set()
    for lineno, line in enumerate(raw.split(b"\n"), 1):
        try:
            text = line.decode("utf-8")
        except UnicodeDecodeError:
            raise LexiconError(f"{path}: invalid UTF-8 on line {lineno}") from None
        text = text.strip("\r\ufeff")
        entry = text.strip()
        if not entry or entry.startswith("#"):
            continue
        if any(c.isspace() for c in entry):
            raise LexiconError(f"{path}: whitespace in entry line {lineno}")
        words.add(normalize_nfc(entry))
    return Lexicon(frozenset(words), name or path.stem, fold_case)


class UniqueAccentIndex(Mapping[str, str]):
    """De-accented form -> its only accented realization in a lexicon."""

    def __init__(self, mapping: Mapping[str, str] | None = None):
        self._map = dict(mapping or {})

    def __getitem__(self, key: str) -> str:
        return self._map[key]

    def __iter__(self):
        return iter(self._map)

    def __len__(self) -> int:
        return len(self._map)

    def __repr__(self) -> str:
        return f"UniqueAccentIndex({len(self)} entries)"

    def to_tsv(self) -> str:
        return "".join(f"{k}\t{v}\n" for k, v in sorted(self._map.items()))

    @classmethod
    def from_tsv(cls, text: str) -> "UniqueAccentIndex":
        mapping = {}
        for lineno, line in enumerate(text.splitlines(), 1):
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise LexiconError(f"line {lineno}: expected two tab-separated columns")
            key, value = normalize_nfc(parts[0]), normalize_nfc(parts[1])
            if strip_diacritics(value) != key:
                raise LexiconError(f"line {lineno}: {value!r} does not reduce to {key!r}")
            mapping[key] = value
        return cls(mapping)


def build_unique_accent_index(lex: Lexicon) -> UniqueAccentIndex:
    groups: dict[str, set[str]] = defaultdict(set)
    for word in lex.words:
        groups[strip_diacritics(word)].add(word)
    return UniqueAccentIndex({k: next(iter(v)) for k, v in sorted(groups.items()) if len(v) == 1})


def trim_token(token: str) -> tuple[str, str, str]:
    """Split ``token`` into (leading non-letters, core, trailing non-letters)."""
    is_letter = [unicodedata.category(c).startswith("L") or unicodedata.combining(c) for c in token]
    if not any(is_letter):
        return token, "", ""
    start = is_letter.index(True)
    end = len(token) - is_letter[::-1].index(True)
    return token[:start], token[start:end], token[end:]


def tokenize(text: str) -> list[str]:
    """Whitespace tokens with surrounding non-letters trimmed; letterless tokens dropped."""
    out = []
    for raw in text.split():
        core = trim_token(raw)[1]
        if core:
            out.append(core)
    return out


def dictionary_accuracy(tokens: list[str], lex: Lexicon) -> float:
    """Share of ``tokens`` found in ``lex``."""
    if not tokens:
        log.warning("dictionary_accuracy called with no tokens")
        return 0.0
    return sum(1 for t in tokens if t in lex) / len(tokens)


def text_accuracy(text: str, lex: Lexicon, greek_only: bool = True) -> float:
    """Dictionary accuracy of running text, by default over Greek-script tokens only."""
    tokens = tokenize(normalize_nfc(text))
    if greek_only:
        tokens = [t for t in tokens if is_greek_word(t)]
    return dictionary_accuracy(tokens, lex)


# Documents below this accuracy were sent back for model retraining.
RETRAIN_THRESHOLD = 0.60


def needs_retraining(accuracy: float, threshold: float = RETRAIN_THRESHOLD) -> bool:
    return accuracy < threshold
