"""Unicode helpers for polytonic Greek.

Every comparison in the toolkit happens on NFC text, so one precomposed
accented letter counts as one character.
"""

from __future__ import annotations

import enum
import unicodedata
from dataclasses import dataclass


class Script(enum.Enum):
    GREEK = "Greek"
    LATIN = "Latin"
    DIGIT = "Digit"
    PUNCTUATION = "Punctuation"
    OTHER = "Other"


# Combining mark -> diacritic kind. Koronis (U+0343) and dialytika-tonos
# (U+0344) never survive NFD, so they need no entry.
DIACRITICS = {
    "\u0313": "smooth-breathing",
    "\u0314": "rough-breathing",
    "\u0301": "acute",
    "\u0300": "grave",
    "\u0342": "circumflex",
    "\u0345": "iota-subscript",
    "\u0308": "diaeresis",
    "\u0304": "macron",
    "\u0306": "breve",
}
MARK_OF_KIND = {kind: mark for mark, kind in DIACRITICS.items()}

_GREEK_BLOCKS = ((0x0370, 0x03FF), (0x1F00, 0x1FFF))


def normalize_nfc(text: str) -> str:
    return unicodedata.normalize("NFC", text)


def _in_greek_blocks(ch: str) -> bool:
    cp = ord(ch)
    return any(lo <= cp <= hi for lo, hi in _GREEK_BLOCKS)


def script_of(ch: str) -> Script:
    """Classify a single codepoint."""
    if len(ch) != 1:
        raise ValueError(f"expected one codepoint, got {len(ch)}")
    cat = unicodedata.category(ch)
    if cat.startswith("L"):
        if _in_greek_blocks(ch):
            return Script.GREEK
        if unicodedata.name(ch, "").startswith("LATIN"):
            return Script.LATIN
        return Script.OTHER
    if cat == "Nd":
        return Script.DIGIT
    if cat.startswith("P"):
        return Script.PUNCTUATION
    return Script.OTHER


def is_greek_letter(ch: str) -> bool:
    return script_of(ch) is Script.GREEK


def strip_diacritics(word: str) -> str:
    """Reduce every Greek letter to its bare base letter.

    Non-Greek characters (including accented Latin letters) are left alone.
    Combining marks that NFC could not fold into a Greek letter, e.g. the
    acute on an alpha that already carries a macron, are dropped as well.
    Final sigma stays final sigma.
    """
    out = []
    after_greek = False
    for ch in normalize_nfc(word):
        if unicodedata.combining(ch):
            if not after_greek:
                out.append(ch)
            continue
        if is_greek_letter(ch):
            base = "".join(
                c for c in unicodedata.normalize("NFD", ch) if not unicodedata.combining(c)
            )
            out.append(base)
            after_greek = True
        else:
            out.append(ch)
            after_greek = False
    return normalize_nfc("".join(out))


@dataclass(frozen=True)
class DiacriticProfile:
    """A Greek letter split into its base letter and its marks (canonical order)."""

    base: str
    marks: tuple[str, ...] = ()

    def __post_init__(self):
        if len(self.base) != 1 or not is_greek_letter(self.base):
            raise ValueError(f"base must be one Greek letter, got {self.base!r}")
        if unicodedata.normalize("NFD", self.base) != self.base:
            raise ValueError(f"base {self.base!r} still carries marks")
        unknown = [m for m in self.marks if m not in MARK_OF_KIND]
        if unknown:
            raise ValueError(f"unknown diacritic kinds: {unknown}")
        if len(set(self.marks)) != len(self.marks):
            raise ValueError(f"duplicate marks in {self.marks}")

    def compose(self) -> str:
        return normalize_nfc(self.base + "".join(MARK_OF_KIND[m] for m in self.marks))


def decompose(grapheme: str) -> DiacriticProfile:
    """Split a Greek letter (plus any trailing combining marks) into a profile.

    >>> decompose("ᾤ")
    DiacriticProfile(base='ω', marks=('smooth-breathing', 'acute', 'iota-subscript'))
    """
    nfd = unicodedata.normalize("NFD", grapheme)
    if not nfd:
        raise ValueError("empty grapheme")
    base, rest = nfd[0], nfd[1:]
    marks = []
    for ch in rest:
        if ch not in DIACRITICS:
            raise ValueError(f"{grapheme!r} contains non-diacritic {ch!r}")
        marks.append(DIACRITICS[ch])
    return DiacriticProfile(base, tuple(marks))


def greek_ratio(text: str) -> float:
    """Greek letters over Greek plus Latin letters; 0.0 when there are none."""
    greek = latin = 0
    for ch in text:
        s = script_of(ch)
        if s is Script.GREEK:
            greek += 1
        elif s is Script.LATIN:
            latin += 1
    total = greek + latin
    return greek / total if total else 0.0


def letter_count(text: str) -> int:
    return sum(1 for ch in text if unicodedata.category(ch).startswith("L"))


def is_greek_word(text: str) -> bool:
    """Mixed-script words count as Greek when more than half their letters are."""
    return greek_ratio(text) > 0.5
