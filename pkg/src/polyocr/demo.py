"""A small synthetic corpus: two commentaries, three pages.

The pages mix a Greek primary text with English and Latin commentary,
apparatus, footnotes and paratext, so every region group is populated. The
OCR side is the ground truth with a known list of injected errors
(:data:`ERRORS`), part of which the post-processing chain can repair.

``write_demo_corpus`` regenerates the copy shipped under
``polyocr/data/demo``.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .docmodel import BBox, Line, Page, Region, Word, write_hocr, write_region_annotations
from .lexicon import tokenize
from .polytonic import is_greek_word, normalize_nfc

PAGE_DIMS = (1200, 1700)
CHAR_W = 14
SPACE_W = 12
LINE_H = 28
LINE_STEP = 40
PAD = 8

# (commentary, page id, [(region type, x, y, [line texts])])
PAGES = [
    ("comm_a", "comm_a_0012", [
        ("title", 420, 60, ["ΣΟΦΟΚΛΕΟΥΣ ΑΙΑΣ"]),
        ("primary_text", 200, 160, [
            "ἀεὶ μέν, ὦ παῖ Λαρτίου, δέδορκά σε",
            "πεῖράν τιν᾽ ἐχθρῶν ἁρπάσαι θηρώμενον·",
            "καὶ νῦν ἐπὶ σκηναῖς σε ναυτικαῖς ὁρῶ",
            "Αἴαντος, ἔνθα τάξιν ἐσχάτην ἔχει,",
            "πάλαι κυνηγετοῦντα καὶ μετρούμενον",
        ]),
        ("line_number", 90, 320, ["5"]),
        ("app_crit", 100, 420, [
            "1 ἀεὶ] αἰεὶ L 3 σκηναῖς] σκηνῇς A",
            "5 μετρούμενον] μετρουμένῳ Γ",
        ]),
        ("commentary", 100, 560, [
            "1. ἀεὶ μέν: the goddess addresses Odysseus, whose",
            "habitual vigilance is here noted. δέδορκα is used",
            "of keen sight, as of a hound on the trail.",
            "2. πεῖραν ἁρπάσαι: to seize some attempt of his",
            "foes; θηρώμενον continues the metaphor of the hunt.",
        ]),
        ("page_number", 580, 1600, ["12"]),
    ]),
    ("comm_a", "comm_a_0013", [
        ("primary_text", 200, 100, [
            "ἴχνη τὰ κείνου νεοχάραχθ᾽, ὅπως ἴδῃς",
            "εἴτ᾽ ἔνδον εἴτ᾽ οὐκ ἔνδον. εὖ δέ σ᾽ ἐκφέρει",
            "κυνὸς Λακαίνης ὥς τις εὔρινος βάσις.",
        ]),
        ("translation", 100, 300, [
            "Ever, son of Laertes, have I seen thee seeking",
            "to snatch some advantage over thy foes.",
        ]),
        ("commentary", 100, 430, [
            "6. νεοχάραχθ᾽: freshly printed, of footprints.",
            "8. Λακαίνης: the Spartan hounds were famed for",
            "their scent; cf. εὔρινος below.",
        ]),
        ("footnote", 100, 600, [
            "1 Cf. the scholia on v. 8 and Eustathius.",
        ]),
        ("page_number", 580, 1600, ["13"]),
    ]),
    ("comm_b", "comm_b_0007", [
        ("introduction", 100, 80, [
            "Sophoclis Aiacem edituro mihi primum de codicibus",
            "dicendum est, quorum Laurentianus omnium optimus",
            "habetur; reliqui ex eo fere omnes descripti sunt.",
        ]),
        ("app_crit", 100, 260, [
            "9 ἐκφέρει] ἐκφέρεις Elmsley 10 εὔρινος] εὔρρινος L",
        ]),
        ("index", 100, 340, [
            "ἀεί 1 ἁρπάζω 2 θηράω 2 ἴχνος 6",
        ]),
        ("bibliography", 100, 420, [
            "Lobeck, C. A., Sophoclis Aiax, Lipsiae 1835.",
        ]),
        ("page_number", 580, 1600, ["7"]),
    ]),
]

# Injected OCR errors: (page id, region index, line, word, OCR text).
# Each changes one character of its word, so its cost is exactly one edit.
# The first REPAIRABLE entries are undone by the default pipeline.
REPAIRABLE = 8
ERRORS = [
    # repaired by post-processing
    ("comm_a_0012", 1, 1, 4, "θηρωμενον·"),
    ("comm_a_0012", 1, 4, 1, "κυνηγετουντα"),
    ("comm_a_0013", 2, 1, 1, "Λακαινης:"),
    ("comm_a_0012", 1, 1, 2, "ἐχθρῶυ"),
    ("comm_a_0012", 1, 3, 2, "τάξιυ"),
    ("comm_a_0012", 4, 1, 5, "δέδσρκα"),
    ("comm_a_0013", 0, 2, 4, "εὔριυος"),
    ("comm_b_0007", 1, 0, 1, "ἐκφὲρει]"),
    # beyond the reach of post-processing
    ("comm_a_0012", 1, 2, 6, "ὁρῷ"),
    ("comm_a_0012", 4, 1, 0, "habitnal"),
    ("comm_a_0012", 5, 0, 0, "l2"),
    ("comm_a_0013", 0, 0, 0, "ἴχνῃ"),
    ("comm_a_0013", 1, 0, 3, "Laertcs,"),
    ("comm_b_0007", 0, 1, 3, "Laurentiauus"),
    ("comm_b_0007", 2, 0, 4, "θηρἀω"),
]

# OCR words the engine missed: (page id, region index, line, word)
MISSED = [("comm_a_0013", 3, 0, 6)]

# Spurious OCR words: (page id, text, bbox). The second lies outside every region.
SPURIOUS = [
    ("comm_a_0012", "·", (760, 666, 770, 694)),
    ("comm_b_0007", "~", (1100, 1000, 1114, 1028)),
]

# Extra lexicon entries that are not in the ground truth. Several share a
# skeleton so the unique-accent index has to leave them out.
EXTRA_WORDS = [
    "λόγος", "ἄνθρωπος", "ἤ", "ἥ", "ἦ", "καί", "θεός", "θέος",
    "νόμος", "νομός", "ψυχή", "πόλις", "ἔργον", "μῆνιν", "ἄειδε", "θεά",
]


@dataclass(frozen=True)
class DemoPage:
    commentary: str
    gt: Page
    ocr: Page
    annotations: list[tuple[str, BBox]]


def _layout_line(text: str, x: int, y: int) -> Line:
    words = []
    for token in normalize_nfc(text).split():
        w = CHAR_W * len(token)
        words.append(Word(token, BBox(x, y, x + w, y + LINE_H)))
        x += w + SPACE_W
    return Line.of(words)


def _gt_page(page_id: str, layout) -> tuple[Page, list[tuple[str, BBox]]]:
    regions, annots = [], []
    for i, (rtype, x, y, texts) in enumerate(layout):
        lines = [_layout_line(t, x, y + n * LINE_STEP) for n, t in enumerate(texts)]
        box = BBox.enclosing(ln.bbox for ln in lines)
        rect = BBox(box.x0 - PAD, box.y0 - PAD, box.x1 + PAD, box.y1 + PAD)
        regions.append(Region(rtype, rect, tuple(lines), id=f"r{i}"))
        annots.append((rtype, rect))
    return Page(page_id, PAGE_DIMS, tuple(regions)), annots


def _ocr_page(gt: Page, rng: random.Random) -> Page:
    errors = {(e[1], e[2], e[3]): e[4] for e in ERRORS if e[0] == gt.id}
    missed = {(m[1], m[2], m[3]) for m in MISSED if m[0] == gt.id}
    regions = []
    for ri, region in enumerate(gt.regions):
        lines = []
        for li, line in enumerate(region.lines):
            words = []
            for wi, w in enumerate(line.words):
                if (ri, li, wi) in missed:
                    continue
                dx, dy = rng.randint(-2, 2), rng.randint(-2, 2)
                box = BBox(w.bbox.x0 + dx, w.bbox.y0 + dy, w.bbox.x1 + dx, w.bbox.y1 + dy)
                conf = round(rng.uniform(0.80, 0.99), 2)
                words.append(Word(errors.get((ri, li, wi), w.text), box, conf))
            if words:
                lines.append(Line.of(words))
        regions.append(Region.of("unassigned", lines, id=f"b{ri}"))
    extra = [Word(t, BBox(*b)) for pid, t, b in SPURIOUS if pid == gt.id]
    if extra:
        regions.append(Region.of("unassigned", [Line.of(extra)], id=f"b{len(regions)}"))
    return Page(gt.id, gt.image_dims, tuple(regions))


def build_demo() -> list[DemoPage]:
    rng = random.Random(20210901)
    out = []
    for commentary, page_id, layout in PAGES:
        gt, annots = _gt_page(page_id, layout)
        out.append(DemoPage(commentary, gt, _ocr_page(gt, rng), annots))
    return out


def demo_lexicon_words() -> list[str]:
    """Greek word forms of the ground truth plus a few distractors."""
    words = set()
    for page in build_demo():
        for w in page.gt.words:
            for token in tokenize(w.text):
                if is_greek_word(token):
                    words.add(token)
    words.update(normalize_nfc(w) for w in EXTRA_WORDS)
    return sorted(words)


MANIFEST = {
    "commentaries": [
        {"id": "comm_a", "gt": "comm_a/gt", "ocr": {"raw": "comm_a/ocr"},
         "regions": "comm_a/regions", "language": "eng"},
        {"id": "comm_b", "gt": "comm_b/gt", "ocr": {"raw": "comm_b/ocr"},
         "regions": "comm_b/regions", "language": "lat"},
    ],
    "lexicons": {"wordlist": "lexicon/wordlist.txt", "unique_accents": "lexicon/wordlist.txt"},
    "pipeline": "pipeline.json",
    "output": "out",
}

PIPELINE = {
    "stages": ["dehyphenate", "unique_accent", "confusion"],
    "confusion_mode": "occurrence",
    "unique_accent_longer_than": 5,
    "greek_only": True,
}


def _dump(obj) -> str:
    return json.dumps(obj, ensure_ascii=False, indent=1) + "\n"


def demo_files() -> dict[str, bytes]:
    """Relative path -> file content of the demo corpus."""
    files = {}
    for page in build_demo():
        c = page.commentary
        files[f"{c}/gt/{page.gt.id}.html"] = write_hocr(page.gt)
        files[f"{c}/ocr/{page.gt.id}.html"] = write_hocr(page.ocr)
        files[f"{c}/regions/{page.gt.id}.json"] = write_region_annotations({page.gt.id: page.annotations})
    words = demo_lexicon_words()
    files["lexicon/wordlist.txt"] = ("# demo wordlist\n" + "".join(w + "\n" for w in words)).encode("utf-8")
    files["manifest.json"] = _dump(MANIFEST).encode("utf-8")
    files["pipeline.json"] = _dump(PIPELINE).encode("utf-8")
    return files


def write_demo_corpus(dest: str | Path) -> Path:
    dest = Path(dest)
    for rel, data in demo_files().items():
        path = dest / rel
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(data)
    return dest / "manifest.json"


def shipped_demo_dir() -> Path:
    return Path(str(resources.files("polyocr").joinpath("data/demo")))
