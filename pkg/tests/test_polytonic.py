import unicodedata

import pytest
from hypothesis import given
from hypothesis import strategies as st

from polyocr.polytonic import (
    DiacriticProfile,
    Script,
    decompose,
    greek_ratio,
    normalize_nfc,
    script_of,
    strip_diacritics,
)

from conftest import GREEK_LETTERS, polytonic_text


def test_nfc_composes_alpha_with_oxia():
    assert normalize_nfc("α\u0301") == "ά"
    assert len(normalize_nfc("α\u0301")) == 1


def test_nfc_identity_on_ascii():
    assert normalize_nfc("abc") == "abc"


def test_nfc_idempotent_over_greek_blocks():
    for ch in GREEK_LETTERS:
        for mark in ["", "\u0301", "\u0313\u0342", "\u0345"]:
            once = normalize_nfc(ch + mark)
            assert normalize_nfc(once) == once


@given(polytonic_text)
def test_nfc_idempotent(s):
    assert normalize_nfc(normalize_nfc(s)) == normalize_nfc(s)


@pytest.mark.parametrize("word, bare", [
    ("ᾤχετο", "ωχετο"),
    ("λογος", "λογος"),
    ("μῆνιν ABC", "μηνιν ABC"),
    ("Ἄνθρωπος", "Ανθρωπος"),
    ("λόγος", "λογος"),
    ("ΐ", "ι"),
])
def test_strip_diacritics(word, bare):
    assert strip_diacritics(word) == bare


def test_strip_keeps_final_sigma_and_latin_accents():
    assert strip_diacritics("λόγος").endswith("ς")
    assert strip_diacritics("café") == "café"


def test_strip_drops_marks_nfc_cannot_fold():
    # alpha + macron + acute has no precomposed form
    word = normalize_nfc("α\u0304\u0301ρ")
    assert len(word) == 3
    assert strip_diacritics(word) == "αρ"


def _greek_count(s):
    return sum(script_of(c) is Script.GREEK for c in s)


@given(polytonic_text)
def test_strip_properties(s):
    out = strip_diacritics(s)
    assert strip_diacritics(out) == out
    assert normalize_nfc(out) == out
    assert _greek_count(out) == _greek_count(s)


@pytest.mark.parametrize("ch, script", [
    ("λ", Script.GREEK), ("ϐ", Script.GREEK), ("ᾤ", Script.GREEK),
    ("q", Script.LATIN), ("é", Script.LATIN),
    ("7", Script.DIGIT),
    (",", Script.PUNCTUATION), ("·", Script.PUNCTUATION),
    (" ", Script.OTHER), ("\u0301", Script.OTHER), ("ж", Script.OTHER),
])
def test_script_of(ch, script):
    assert script_of(ch) is script


@given(st.characters())
def test_script_of_is_total(ch):
    assert isinstance(script_of(ch), Script)


def test_greek_ratio_examples():
    assert greek_ratio("μῆνιν ABC") == 5 / 8
    assert greek_ratio("1854") == 0.0


@given(polytonic_text)
def test_greek_ratio_invariant_under_stripping_and_case(s):
    assert greek_ratio(strip_diacritics(s)) == greek_ratio(s)
    assert greek_ratio(s.lower()) == greek_ratio(s)
    assert 0.0 <= greek_ratio(s) <= 1.0


def test_decompose_example():
    p = decompose("ᾤ")
    assert p.base == "ω"
    assert p.marks == ("smooth-breathing", "acute", "iota-subscript")


def test_profile_round_trip_for_every_composed_greek_letter():
    checked = 0
    for ch in GREEK_LETTERS:
        nfd = unicodedata.normalize("NFD", ch)
        if len(nfd) < 2 or not all(unicodedata.combining(c) for c in nfd[1:]):
            continue
        try:
            profile = decompose(ch)
        except ValueError:
            continue  # carries a mark outside the polytonic set (e.g. Coptic)
        assert profile.compose() == normalize_nfc(ch)
        assert decompose(profile.compose()) == profile
        checked += 1
    assert checked > 200


def test_profile_rejects_duplicates_and_non_greek():
    with pytest.raises(ValueError):
        DiacriticProfile("α", ("acute", "acute"))
    with pytest.raises(ValueError):
        DiacriticProfile("a", ())
    with pytest.raises(ValueError):
        DiacriticProfile("ά", ())
