"""Dehyphenation and the two polytonic spellchecks on a small page."""

from polyocr import (
    BBox, ConfusionPairTable, Lexicon, Line, Page, PipelineConfig, Region, Word,
    build_unique_accent_index, run_pipeline,
)


def line(text, y):
    words, x = [], 20
    for token in text.split():
        words.append(Word(token, BBox(x, y, x + 14 * len(token), y + 28)))
        x += 14 * len(token) + 12
    return Line.of(words)


# A hyphen break with a marginal line number in the way, an accent slip,
# and a nu read as upsilon.
lines = [line("καὶ νῦν ἐπὶ σκηναῖς σε ναυ-", 20), line("5 τικαῖς ὁρῶ", 60),
         line("Αἴαντος, ἔνθα τάξιυ ἐσχάτην ἔχει,", 100), line("πάλαι κυνηγετουντα", 140)]
page = Page("demo", (800, 300), (Region.of("primary_text", lines, id="r0"),))

lexicon = Lexicon.from_words(
    "καὶ νῦν ἐπὶ σκηναῖς σε ναυτικαῖς ὁρῶ Αἴαντος ἔνθα τάξιν ἐσχάτην ἔχει πάλαι κυνηγετοῦντα".split()
)
index = build_unique_accent_index(lexicon)

fixed, log = run_pipeline(page, PipelineConfig(), lexicon, index, ConfusionPairTable.default())
for ln in fixed.lines:
    print(ln.text)
print()
print(log.to_tsv(), end="")
