"""Polytonic Greek text: normalization, diacritic stripping, script detection."""

import unicodedata

from polyocr import DiacriticProfile, decompose, greek_ratio, normalize_nfc, script_of, strip_diacritics

# OCR engines and transcribers disagree on composed vs decomposed accents.
typed = "α\u0301"  # alpha + combining acute
print("decomposed:", [unicodedata.name(c) for c in typed])
print("NFC:       ", [unicodedata.name(c) for c in normalize_nfc(typed)])

# The unique-accent spellcheck matches words by their bare skeleton.
for word in ["ᾤχετο", "Ἄνθρωπος", "λόγος", "μῆνιν ABC"]:
    print(f"{word:>12} -> {strip_diacritics(word)}")

# A letter splits into a base and its marks, and composes back.
profile = decompose("ᾤ")
print(profile)
print(DiacriticProfile("ω", ("rough-breathing", "circumflex")).compose())

line = "ἀεὶ μέν: the goddess addresses Odysseus"
print("scripts:", sorted({script_of(c).name for c in line}))
print(f"Greek share of letters: {greek_ratio(line):.2f}")
