"""Page -> Region -> Line -> Word document model and its file formats.

Three formats are understood:

* hOCR-style HTML (``ocr_page`` / ``ocr_carea`` / ``ocr_line`` / ``ocrx_word``
  elements with ``bbox x0 y0 x1 y1`` in the ``title`` attribute),
* VGG Image Annotator (VIA) JSON with rectangular, typed regions,
* a canonical JSON serialization of :class:`Page` (see ``docs/canonical_format.md``).
"""

from __future__ import annotations

import enum
import json
import re
import warnings
from dataclasses import dataclass, field, replace
from html.parser import HTMLParser
from importlib import resources
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .polytonic import normalize_nfc

CANONICAL_FORMAT = "polyocr-page"
CANONICAL_VERSION = 1


class DocumentError(ValueError):
    """Base class for malformed input documents."""


class HocrError(DocumentError):
    pass


class AnnotationError(DocumentError):
    pass


class SchemaError(DocumentError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


@dataclass(frozen=True, order=True)
class BBox:
    x0: int
    y0: int
    x1: int
    y1: int

    def __post_init__(self):
        if self.x1 < self.x0 or self.y1 < self.y0:
            raise ValueError(f"inverted bbox {tuple(self)}")

    def __iter__(self) -> Iterator[int]:
        return iter((self.x0, self.y0, self.x1, self.y1))

    @property
    def area(self) -> int:
        return (self.x1 - self.x0) * (self.y1 - self.y0)

    @property
    def pixel_area(self) -> int:
        # coordinates are inclusive pixel indices
        return (self.x1 - self.x0 + 1) * (self.y1 - self.y0 + 1)

    @property
    def center(self) -> tuple[float, float]:
        return (self.x0 + self.x1) / 2, (self.y0 + self.y1) / 2

    def contains_point(self, x: float, y: float) -> bool:
        return self.x0 <= x <= self.x1 and self.y0 <= y <= self.y1

    def contains(self, other: "BBox") -> bool:
        return (
            self.x0 <= other.x0 and self.y0 <= other.y0
            and other.x1 <= self.x1 and other.y1 <= self.y1
        )

    def union(self, other: "BBox") -> "BBox":
        return BBox(
            min(self.x0, other.x0), min(self.y0, other.y0),
            max(self.x1, other.x1), max(self.y1, other.y1),
        )

    def iou(self, other: "BBox") -> float:
        """Intersection over union, counting covered pixels inclusively."""
        iw = min(self.x1, other.x1) - max(self.x0, other.x0) + 1
        ih = min(self.y1, other.y1) - max(self.y0, other.y0) + 1
        if iw <= 0 or ih <= 0:
            return 0.0
        inter = iw * ih
        return inter / (self.pixel_area + other.pixel_area - inter)

    @classmethod
    def enclosing(cls, boxes: Iterable["BBox"]) -> "BBox":
        boxes = list(boxes)
        if not boxes:
            raise ValueError("no boxes to enclose")
        return cls(
            min(b.x0 for b in boxes), min(b.y0 for b in boxes),
            max(b.x1 for b in boxes), max(b.y1 for b in boxes),
        )


@dataclass(frozen=True)
class Word:
    text: str
    bbox: BBox
    confidence: float | None = None

    def __post_init__(self):
        text = normalize_nfc(self.text.strip())
        if not text:
            raise ValueError("word text is empty")
        if any(ch.isspace() for ch in text):
            raise ValueError(f"word text contains whitespace: {text!r}")
        object.__setattr__(self, "text", text)
        if self.confidence is not None and not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"confidence {self.confidence} outside [0, 1]")


@dataclass(frozen=True)
class Line:
    words: tuple[Word, ...]
    bbox: BBox

    def __post_init__(self):
        object.__setattr__(self, "words", tuple(self.words))
        for w in self.words:
            if not self.bbox.contains(w.bbox):
                raise ValueError(f"line bbox {tuple(self.bbox)} does not contain word {w.text!r}")

    @classmethod
    def of(cls, words: Sequence[Word], bbox: BBox | None = None) -> "Line":
        """Build a line whose bbox is ``bbox`` grown to cover all ``words``."""
        boxes = [w.bbox for w in words] + ([bbox] if bbox is not None else [])
        return cls(tuple(words), BBox.enclosing(boxes))

    @property
    def text(self) -> str:
        return " ".join(w.text for w in self.words)


@dataclass(frozen=True)
class Region:
    rtype: str
    bbox: BBox
    lines: tuple[Line, ...] = ()
    id: str = ""

    def __post_init__(self):
        object.__setattr__(self, "lines", tuple(self.lines))
        for ln in self.lines:
            if not self.bbox.contains(ln.bbox):
                raise ValueError(f"region {self.id or self.rtype} does not contain line {ln.text!r}")

    @classmethod
    def of(cls, rtype: str, lines: Sequence[Line], bbox: BBox | None = None, id: str = "") -> "Region":
        boxes = [ln.bbox for ln in lines] + ([bbox] if bbox is not None else [])
        return cls(rtype, BBox.enclosing(boxes), tuple(lines), id)

    @property
    def words(self) -> list[Word]:
        return [w for ln in self.lines for w in ln.words]


@dataclass(frozen=True)
class Page:
    id: str
    image_dims: tuple[int, int]
    regions: tuple[Region, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "regions", tuple(self.regions))
        object.__setattr__(self, "image_dims", tuple(self.image_dims))
        ids = [r.id for r in self.regions if r.id]
        if len(ids) != len(set(ids)):
            raise ValueError(f"duplicate region ids on page {self.id}")

    @property
    def words(self) -> list[Word]:
        return [w for r in self.regions for w in r.words]

    @property
    def lines(self) -> list[Line]:
        return [ln for r in self.regions for ln in r.lines]

    def map_words(self, fn) -> "Page":
        """Return a copy with ``fn`` applied to every word; bboxes are regrown to fit."""
        regions = []
        for r in self.regions:
            lines = [Line.of([fn(w) for w in ln.words], ln.bbox) for ln in r.lines if ln.words]
            regions.append(Region.of(r.rtype, lines, r.bbox, r.id) if lines else r)
        return replace(self, regions=tuple(regions))


# --- region taxonomy -------------------------------------------------------


class RegionGroup(enum.Enum):
    GREEK_TEXTS = "GreekTexts"
    COMMENTARY_LIKE = "CommentaryLike"
    LOW_GREEK_TEXTS = "LowGreekTexts"
    CRITICAL_APPARATUS = "CriticalApparatus"
    STRUCTURED_TEXTS = "StructuredTexts"
    NUMBERS = "Numbers"

    @property
    def short_name(self) -> str:
        return _SHORT_NAMES[self]


_SHORT_NAMES = {
    RegionGroup.GREEK_TEXTS: "Greek",
    RegionGroup.COMMENTARY_LIKE: "Comm.",
    RegionGroup.LOW_GREEK_TEXTS: "Low Greek",
    RegionGroup.CRITICAL_APPARATUS: "App. Crit.",
    RegionGroup.STRUCTURED_TEXTS: "Struct.",
    RegionGroup.NUMBERS: "Numbers",
}


@dataclass(frozen=True)
class Taxonomy:
    """Fine-grained region labels and the evaluation group of each."""

    groups: dict = field(default_factory=dict)  # label -> RegionGroup
    unassigned: str = "unassigned"

    @property
    def vocabulary(self) -> frozenset[str]:
        return frozenset(self.groups)

    def group_of(self, rtype: str) -> RegionGroup | None:
        """Group of a label; ``None`` for the synthetic unassigned region."""
        if rtype == self.unassigned:
            return None
        try:
            return self.groups[rtype]
        except KeyError:
            raise ValueError(f"unknown region type {rtype!r}") from None

    def check(self, rtype: str) -> str:
        if rtype != self.unassigned and rtype not in self.groups:
            raise ValueError(f"unknown region type {rtype!r}")
        return rtype

    @classmethod
    def from_dict(cls, data: dict) -> "Taxonomy":
        groups = {}
        for group_name, labels in data["groups"].items():
            group = RegionGroup(group_name)
            for label in labels:
                if label in groups:
                    raise ValueError(f"label {label!r} mapped to two groups")
                groups[label] = group
        return cls(groups, data.get("unassigned", "unassigned"))

    @classmethod
    def load(cls, path: str | Path) -> "Taxonomy":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))

    @classmethod
    def default(cls) -> "Taxonomy":
        return _default_taxonomy()


_DEFAULT_TAXONOMY: Taxonomy | None = None


def _default_taxonomy() -> Taxonomy:
    global _DEFAULT_TAXONOMY
    if _DEFAULT_TAXONOMY is None:
        text = resources.files("polyocr").joinpath("data/regions.json").read_text(encoding="utf-8")
        _DEFAULT_TAXONOMY = Taxonomy.from_dict(json.loads(text))
    return _DEFAULT_TAXONOMY


def region_group_of(rtype: str, taxonomy: Taxonomy | None = None) -> RegionGroup:
    group = (taxonomy or Taxonomy.default()).group_of(rtype)
    if group is None:
        raise ValueError(f"{rtype!r} is not an annotated region type")
    return group


# --- hOCR ------------------------------------------------------------------

_LINE_CLASSES = {"ocr_line", "ocr_header", "ocr_caption", "ocr_textfloat"}
_VOID_TAGS = {"area", "base", "br", "col", "embed", "hr", "img", "input", "link", "meta", "source", "wbr"}
_BBOX_RE = re.compile(r"\bbbox\s+(-?\d+)\s+(-?\d+)\s+(-?\d+)\s+(-?\d+)")
_WCONF_RE = re.compile(r"\bx_wconf\s+(-?[\d.]+)")
_IMAGE_RE = re.compile(r"\bimage\s+\"?([^\";]+)\"?")


def _title_bbox(title: str) -> BBox | None:
    m = _BBOX_RE.search(title or "")
    if not m:
        return None
    return BBox(*(int(v) for v in m.groups()))


class _HocrBuilder(HTMLParser):
    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.stack: list[tuple[str, str]] = []  # (tag, label for the path)
        self.page_id: str | None = None
        self.dims: tuple[int, int] | None = None
        self.saw_page = False
        self.regions: list[tuple[BBox | None, list]] = []
        self.loose_lines: list = []
        self.cur_region: list | None = None
        self.cur_line: tuple[BBox | None, list] | None = None
        self.cur_word: dict | None = None
        self.implicit_line: tuple[None, list] | None = None
        self.word_depth = 0
        self.dropped = 0

    def path(self) -> str:
        return "/" + "/".join(label for _, label in self.stack)

    def handle_starttag(self, tag, attrs):
        attrs = dict(attrs)
        classes = set((attrs.get("class") or "").split())
        label = tag + "".join(f".{c}" for c in sorted(classes) if c.startswith("ocr"))
        if tag in _VOID_TAGS:
            return
        self.stack.append((tag, label))
        title = attrs.get("title") or ""
        if self.cur_word is not None:
            self.word_depth += 1
            return
        if "ocr_page" in classes:
            if self.saw_page:
                raise HocrError(f"{self.path()}: more than one ocr_page in document")
            self.saw_page = True
            bbox = _title_bbox(title)
            if bbox is None:
                raise HocrError(f"{self.path()}: ocr_page has no bbox (page dimensions missing)")
            self.dims = (bbox.x1, bbox.y1)
            self.page_id = attrs.get("id")
            if not self.page_id:
                m = _IMAGE_RE.search(title)
                self.page_id = Path(m.group(1)).stem if m else None
        elif "ocr_carea" in classes:
            self._need_page()
            self.cur_region = [_title_bbox(title), []]
            self.regions.append(self.cur_region)
            self.implicit_line = None
        elif classes & _LINE_CLASSES:
            self._need_page()
            self.implicit_line = None
            self.cur_line = (_title_bbox(title), [])
            (self.cur_region[1] if self.cur_region is not None else self.loose_lines).append(self.cur_line)
        elif "ocrx_word" in classes:
            self._need_page()
            wconf = _WCONF_RE.search(title)
            self.cur_word = {
                "bbox": _title_bbox(title),
                "conf": float(wconf.group(1)) / 100 if wconf else None,
                "text": [],
            }
            self.word_depth = 0

    def _need_page(self):
        if not self.saw_page:
            raise HocrError(f"{self.path()}: content outside an ocr_page (page dimensions missing)")

    def handle_endtag(self, tag):
        if tag in _VOID_TAGS:
            return
        if not self.stack or self.stack[-1][0] != tag:
            raise HocrError(f"{self.path()}: unexpected closing tag </{tag}>")
        _, label = self.stack.pop()
        if self.cur_word is not None:
            if self.word_depth:
                self.word_depth -= 1
                return
            self._finish_word()
        elif any(c in label for c in _LINE_CLASSES):
            self.cur_line = None
        elif "ocr_carea" in label:
            self.cur_region = None
            self.implicit_line = None

    def _finish_word(self):
        word, self.cur_word = self.cur_word, None
        text = "".join(word["text"]).strip()
        if word["bbox"] is None or not text:
            self.dropped += 1
            return
        if self.cur_line is None:
            # words sitting directly in a block share one implicit line
            if self.implicit_line is None:
                self.implicit_line = (None, [])
                target = self.cur_region[1] if self.cur_region is not None else self.loose_lines
                target.append(self.implicit_line)
            words = self.implicit_line[1]
        else:
            words = self.cur_line[1]
        conf = word["conf"]
        if conf is not None:
            conf = min(max(conf, 0.0), 1.0)
        for part in text.split():
            # several tokens in one word element share its bbox
            words.append(Word(part, word["bbox"], conf))

    def handle_data(self, data):
        if self.cur_word is not None:
            self.cur_word["text"].append(data)

    def build(self, page_id: str | None) -> Page:
        if self.stack:
            raise HocrError(f"{self.path()}: element not closed at end of document")
        if self.dropped:
            warnings.warn(f"dropped {self.dropped} word(s) without bbox or text", stacklevel=3)
        pid = page_id or self.page_id or "page"
        if not self.saw_page:
            return Page(pid, (0, 0), ())
        regions = []
        blocks = [(bbox, lines) for bbox, lines in self.regions]
        if self.loose_lines:
            blocks.append((None, self.loose_lines))
        for bbox, raw_lines in blocks:
            lines = [Line.of(words, lbox) for lbox, words in raw_lines if words]
            if lines:
                regions.append(Region.of("unassigned", lines, bbox, id=f"r{len(regions)}"))
        return Page(pid, self.dims, tuple(regions))


def parse_hocr(data: bytes | str, page_id: str | None = None) -> Page:
    """Parse an hOCR document into a :class:`Page`.

    All parsed words land in regions labelled ``unassigned``; use
    :func:`assign_regions` to distribute them over annotated regions. Words
    without a bbox are dropped and reported with a warning.
    """
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    builder = _HocrBuilder()
    builder.feed(text)
    builder.close()
    return builder.build(page_id)


def write_hocr(page: Page) -> bytes:
    """Render a page as minimal hOCR (one ``ocr_carea`` per region)."""
    from html import escape

    def bbox(b: BBox) -> str:
        return "bbox {} {} {} {}".format(*b)

    w, h = page.image_dims
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<html xmlns="http://www.w3.org/1999/xhtml">',
        '<head><meta http-equiv="Content-Type" content="text/html; charset=utf-8"/>'
        '<meta name="ocr-system" content="polyocr"/></head>',
        "<body>",
        f'<div class="ocr_page" id="{escape(page.id)}" title="bbox 0 0 {w} {h}">',
    ]
    for r in page.regions:
        out.append(f'<div class="ocr_carea" title="{bbox(r.bbox)}">')
        for ln in r.lines:
            out.append(f'<span class="ocr_line" title="{bbox(ln.bbox)}">')
            for word in ln.words:
                title = bbox(word.bbox)
                if word.confidence is not None:
                    title += f"; x_wconf {round(word.confidence * 100)}"
                out.append(f'<span class="ocrx_word" title="{title}">{escape(word.text)}</span>')
            out.append("</span>")
        out.append("</div>")
    out += ["</div>", "</body>", "</html>", ""]
    return "\n".join(out).encode("utf-8")


# --- region annotations (VIA) ---------------------------------------------

_LABEL_KEYS = ("type", "region_type", "label", "text")


def _via_entries(doc) -> dict:
    if isinstance(doc, dict) and "_via_img_metadata" in doc:
        return doc["_via_img_metadata"]
    if isinstance(doc, dict) and "regions" in doc:
        return {"": doc}
    if isinstance(doc, dict) and all(isinstance(v, dict) and "regions" in v for v in doc.values()):
        return doc
    raise AnnotationError("not a region-annotation document (no 'regions' found)")


def _region_label(attrs: dict, attribute: str | None, where: str) -> str:
    keys = [attribute] if attribute else [k for k in _LABEL_KEYS if k in attrs]
    if not keys or keys[0] not in attrs:
        raise AnnotationError(f"{where}: region has no type attribute")
    value = attrs[keys[0]]
    if isinstance(value, dict):
        chosen = [k for k, v in value.items() if v]
        if len(chosen) != 1:
            raise AnnotationError(f"{where}: expected exactly one region type, got {chosen}")
        value = chosen[0]
    return str(value).strip()


def _parse_entry(entry: dict, where: str, taxonomy: Taxonomy, attribute: str | None):
    regions = entry.get("regions") or []
    if isinstance(regions, dict):  # VIA 1.x keyed regions
        regions = [regions[k] for k in sorted(regions, key=lambda k: int(k) if k.isdigit() else k)]
    out = []
    for i, reg in enumerate(regions):
        rwhere = f"{where}.regions[{i}]"
        shape = reg.get("shape_attributes", {})
        if shape.get("name") != "rect":
            raise AnnotationError(f"{rwhere}: non-rectangle shape {shape.get('name')!r}")
        label = _region_label(reg.get("region_attributes", {}), attribute, rwhere)
        if label not in taxonomy.vocabulary:
            raise AnnotationError(f"{rwhere}: unknown region type {label!r}")
        try:
            x, y = round(shape["x"]), round(shape["y"])
            w, h = round(shape["width"]), round(shape["height"])
        except KeyError as exc:
            raise AnnotationError(f"{rwhere}: rectangle lacks {exc.args[0]!r}") from None
        if w < 0 or h < 0:
            raise AnnotationError(f"{rwhere}: negative rectangle size")
        out.append((label, BBox(x, y, x + w, y + h)))
    return out


def parse_region_annotation_sets(
    data: bytes | str,
    taxonomy: Taxonomy | None = None,
    attribute: str | None = None,
) -> dict[str, list[tuple[str, BBox]]]:
    """Parse every image of a VIA file; keys are image file stems ('' for bare lists)."""
    taxonomy = taxonomy or Taxonomy.default()
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise AnnotationError(f"invalid JSON: {exc}") from None
    out = {}
    for key, entry in _via_entries(doc).items():
        name = entry.get("filename", key) or key
        out[Path(name).stem if name else ""] = _parse_entry(entry, f"$[{key!r}]", taxonomy, attribute)
    return out


def parse_region_annotations(
    data: bytes | str,
    image: str | None = None,
    taxonomy: Taxonomy | None = None,
    attribute: str | None = None,
) -> list[tuple[str, BBox]]:
    """Typed rectangles of one image in a VIA annotation file.

    ``image`` selects the entry (file name or stem) when the file covers
    several images. Overlaps are not judged here.
    """
    sets = parse_region_annotation_sets(data, taxonomy, attribute)
    if image is not None:
        key = Path(image).stem
        if key not in sets:
            raise AnnotationError(f"no annotations for image {image!r}")
        return sets[key]
    if len(sets) != 1:
        raise AnnotationError(f"file annotates {len(sets)} images; pass image=")
    return next(iter(sets.values()))


def write_region_annotations(annots: dict[str, list[tuple[str, BBox]]], attribute: str = "type") -> bytes:
    """Serialize rectangles in VIA export layout."""
    doc = {}
    for stem, rects in annots.items():
        doc[stem] = {
            "filename": f"{stem}.png",
            "regions": [
                {
                    "shape_attributes": {
                        "name": "rect", "x": b.x0, "y": b.y0,
                        "width": b.x1 - b.x0, "height": b.y1 - b.y0,
                    },
                    "region_attributes": {attribute: label},
                }
                for label, b in rects
            ],
        }
    return (json.dumps(doc, ensure_ascii=False, indent=1) + "\n").encode("utf-8")


# --- region assignment -----------------------------------------------------


def locate(bbox: BBox, annots: Sequence[tuple[str, BBox]]) -> int | None:
    """Index of the annotation whose rectangle holds the centre of ``bbox``.

    Among nested candidates the smallest rectangle wins; equal areas fall
    back to annotation order.
    """
    cx, cy = bbox.center
    best = None
    for i, (_, rect) in enumerate(annots):
        if rect.contains_point(cx, cy) and (best is None or rect.area < annots[best][1].area):
            best = i
    return best


def assign_regions(
    page: Page,
    annots: Sequence[tuple[str, BBox]],
    taxonomy: Taxonomy | None = None,
) -> Page:
    """Redistribute the page's words over annotated regions.

    Each word goes to the region holding its bbox centre (see :func:`locate`);
    leftovers go to a synthetic ``unassigned`` region. A line whose words fall
    into different regions is split, keeping word order. Every annotation
    yields a region, even an empty one.
    """
    taxonomy = taxonomy or Taxonomy.default()
    for label, _ in annots:
        taxonomy.check(label)
    buckets: list[list[Line]] = [[] for _ in range(len(annots) + 1)]
    for line in page.lines:
        parts: dict[int, list[Word]] = {}
        for word in line.words:
            idx = locate(word.bbox, annots)
            parts.setdefault(len(annots) if idx is None else idx, []).append(word)
        for idx, words in parts.items():
            bbox = line.bbox if len(parts) == 1 else None
            buckets[idx].append(Line.of(words, bbox))
    regions = [
        Region.of(label, buckets[i], rect, id=f"r{i}") for i, (label, rect) in enumerate(annots)
    ]
    if buckets[-1]:
        regions.append(Region.of(taxonomy.unassigned, buckets[-1], id=taxonomy.unassigned))
    return replace(page, regions=tuple(regions))


# --- canonical JSON --------------------------------------------------------


def page_to_dict(page: Page) -> dict:
    def word(w: Word) -> dict:
        d = {"text": w.text, "bbox": list(w.bbox)}
        if w.confidence is not None:
            d["confidence"] = w.confidence
        return d

    return {
        "format": CANONICAL_FORMAT,
        "version": CANONICAL_VERSION,
        "id": page.id,
        "width": page.image_dims[0],
        "height": page.image_dims[1],
        "regions": [
            {
                "id": r.id,
                "type": r.rtype,
                "bbox": list(r.bbox),
                "lines": [
                    {"bbox": list(ln.bbox), "words": [word(w) for w in ln.words]}
                    for ln in r.lines
                ],
            }
            for r in page.regions
        ],
    }


def write_canonical(page: Page) -> bytes:
    return (json.dumps(page_to_dict(page), ensure_ascii=False, indent=1) + "\n").encode("utf-8")


def _expect(cond: bool, path: str, message: str):
    if not cond:
        raise SchemaError(path, message)


def _bbox_at(value, path: str, dims: tuple[int, int]) -> BBox:
    _expect(
        isinstance(value, list) and len(value) == 4
        and all(isinstance(v, int) and not isinstance(v, bool) for v in value),
        path, "bbox must be a list of four integers",
    )
    x0, y0, x1, y1 = value
    _expect(x0 <= x1 and y0 <= y1, path, f"inverted bbox {value}")
    _expect(x0 >= 0 and y0 >= 0 and x1 <= dims[0] and y1 <= dims[1], path, f"bbox {value} outside the page")
    return BBox(x0, y0, x1, y1)


def page_from_dict(doc, taxonomy: Taxonomy | None = None) -> Page:
    taxonomy = taxonomy or Taxonomy.default()
    _expect(isinstance(doc, dict), "$", "document must be an object")
    _expect(doc.get("format") == CANONICAL_FORMAT, "$.format", f"expected {CANONICAL_FORMAT!r}")
    _expect(doc.get("version") == CANONICAL_VERSION, "$.version", f"unsupported version {doc.get('version')!r}")
    _expect(isinstance(doc.get("id"), str), "$.id", "page id must be a string")
    for key in ("width", "height"):
        v = doc.get(key)
        _expect(isinstance(v, int) and not isinstance(v, bool) and v >= 0, f"$.{key}", "must be a non-negative integer")
    dims = (doc["width"], doc["height"])
    _expect(isinstance(doc.get("regions"), list), "$.regions", "must be a list")
    regions = []
    seen = set()
    for i, r in enumerate(doc["regions"]):
        rp = f"$.regions[{i}]"
        _expect(isinstance(r, dict), rp, "region must be an object")
        rid = r.get("id", "")
        _expect(isinstance(rid, str), f"{rp}.id", "must be a string")
        _expect(not rid or rid not in seen, f"{rp}.id", f"duplicate region id {rid!r}")
        seen.add(rid)
        rtype = r.get("type")
        _expect(isinstance(rtype, str), f"{rp}.type", "must be a string")
        try:
            taxonomy.check(rtype)
        except ValueError as exc:
            raise SchemaError(f"{rp}.type", str(exc)) from None
        rbox = _bbox_at(r.get("bbox"), f"{rp}.bbox", dims)
        _expect(isinstance(r.get("lines"), list), f"{rp}.lines", "must be a list")
        lines = []
        for j, ln in enumerate(r["lines"]):
            lp = f"{rp}.lines[{j}]"
            _expect(isinstance(ln, dict), lp, "line must be an object")
            lbox = _bbox_at(ln.get("bbox"), f"{lp}.bbox", dims)
            _expect(rbox.contains(lbox), f"{lp}.bbox", "line lies outside its region")
            _expect(isinstance(ln.get("words"), list), f"{lp}.words", "must be a list")
            words = []
            for k, w in enumerate(ln["words"]):
                wp = f"{lp}.words[{k}]"
                _expect(isinstance(w, dict), wp, "word must be an object")
                text = w.get("text")
                _expect(isinstance(text, str) and text.strip() != "", f"{wp}.text", "must be a non-empty string")
                _expect(normalize_nfc(text) == text, f"{wp}.text", "text is not NFC")
                _expect(not any(c.isspace() for c in text), f"{wp}.text", "text contains whitespace")
                wbox = _bbox_at(w.get("bbox"), f"{wp}.bbox", dims)
                _expect(lbox.contains(wbox), f"{wp}.bbox", "word lies outside its line")
                conf = w.get("confidence")
                _expect(
                    conf is None or (isinstance(conf, (int, float)) and not isinstance(conf, bool) and 0 <= conf <= 1),
                    f"{wp}.confidence", "must be a number in [0, 1]",
                )
                words.append(Word(text, wbox, conf))
            lines.append(Line(tuple(words), lbox))
        regions.append(Region(rtype, rbox, tuple(lines), rid))
    return Page(doc["id"], dims, tuple(regions))


def read_canonical(data: bytes | str, taxonomy: Taxonomy | None = None) -> Page:
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"invalid JSON: {exc}") from None
    return page_from_dict(doc, taxonomy)


def load_page(path: str | Path, taxonomy: Taxonomy | None = None) -> Page:
    """Read a page file, choosing the parser by extension (.json vs hOCR)."""
    path = Path(path)
    data = path.read_bytes()
    if path.suffix.lower() == ".json":
        return read_canonical(data, taxonomy)
    return parse_hocr(data, page_id=path.stem.removesuffix(".hocr"))
