"""Random page generators shared by the property and acceptance tests."""

import random
from dataclasses import replace

from polyocr.docmodel import BBox, Line, Page, Region, Word
from polyocr.polytonic import normalize_nfc

SYLLABLES = ["λό", "γος", "ἄν", "θρω", "πος", "καί", "ὦ", "παῖ", "de", "cum", "est", "1", ".", "ῃ", "ὁ"]
REGION_TYPES = ["primary_text", "commentary", "footnote", "translation", "app_crit",
                "index", "title", "page_number", "introduction"]
# Cyrillic letters never compose with Greek marks, so swapping one in keeps text NFC
FOREIGN = "ЖЦЩФЯ"


def random_word(rng: random.Random) -> str:
    return normalize_nfc("".join(rng.choice(SYLLABLES) for _ in range(rng.randint(1, 3))))


def random_page(rng: random.Random, page_id: str = "p", dims=(1000, 1000)) -> Page:
    """A GT page: a few stacked regions of laid-out lines."""
    regions, y = [], 10
    for r in range(rng.randint(1, 4)):
        lines = []
        for _ in range(rng.randint(1, 3)):
            words, x = [], 10
            for _ in range(rng.randint(1, 5)):
                text = random_word(rng)
                w = 12 * len(text)
                words.append(Word(text, BBox(x, y, x + w, y + 24)))
                x += w + 10
            lines.append(Line.of(words))
            y += 34
        regions.append(Region.of(rng.choice(REGION_TYPES), lines, id=f"r{r}"))
        y += 20
    return Page(page_id, dims, tuple(regions))


def random_ocr(rng: random.Random, gt: Page) -> Page:
    """Noisy OCR of ``gt``: substitutions, drops, splits, shifted boxes and stray words."""
    words = []
    for w in gt.words:
        roll = rng.random()
        if roll < 0.1:
            continue
        text = w.text
        if roll < 0.4:
            i = rng.randrange(len(text))
            text = text[:i] + rng.choice(FOREIGN) + text[i + 1:]
        dx, dy = rng.randint(-6, 6), rng.randint(-6, 6)
        box = BBox(max(0, w.bbox.x0 + dx), max(0, w.bbox.y0 + dy), w.bbox.x1 + dx, w.bbox.y1 + dy)
        words.append(Word(text, box, round(rng.random(), 2)))
    for _ in range(rng.randint(0, 3)):
        x, y = rng.randint(0, 900), rng.randint(0, 900)
        words.append(Word(rng.choice(["~", "·", "ii", "λ"]), BBox(x, y, x + 20, y + 24)))
    if not words:
        return replace(gt, regions=())
    lines = [Line.of([w]) for w in words]
    return Page(gt.id, gt.image_dims, (Region.of("unassigned", lines, id="b0"),))


def corrupt(rng: random.Random, page: Page, k: int) -> Page:
    """Substitute one character in each of ``k`` distinct words, keeping bboxes."""
    targets = set(rng.sample(range(len(page.words)), k))
    counter = iter(range(len(page.words)))

    def fix(w: Word) -> Word:
        if next(counter) not in targets:
            return w
        i = rng.randrange(len(w.text))
        return replace(w, text=w.text[:i] + rng.choice(FOREIGN) + w.text[i + 1:])

    return page.map_words(fix)


def jitter(rng: random.Random, page: Page, frac: float = 0.10) -> Page:
    """Move each bbox edge by at most ``frac`` of the box width/height."""

    def move(w: Word) -> Word:
        b = w.bbox
        dx, dy = int((b.x1 - b.x0) * frac), int((b.y1 - b.y0) * frac)
        box = BBox(b.x0 + rng.randint(-dx, dx), b.y0 + rng.randint(-dy, dy),
                   b.x1 + rng.randint(-dx, dx), b.y1 + rng.randint(-dy, dy))
        return Word(w.text, box, w.confidence)

    return page.map_words(move)
