import itertools
import json
import warnings
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polyocr.docmodel import (
    AnnotationError,
    BBox,
    HocrError,
    Line,
    Page,
    Region,
    RegionGroup,
    SchemaError,
    Taxonomy,
    Word,
    assign_regions,
    locate,
    page_from_dict,
    page_to_dict,
    parse_hocr,
    parse_region_annotation_sets,
    parse_region_annotations,
    read_canonical,
    region_group_of,
    write_canonical,
    write_hocr,
    write_region_annotations,
)
from polyocr.polytonic import normalize_nfc


def hocr(body, page='<div class="ocr_page" title="bbox 0 0 100 100">{}</div>'):
    inner = page.format(body) if page else body
    return f"<html><body>{inner}</body></html>".encode("utf-8")


def via(regions):
    return json.dumps({"img.png": {"filename": "img.png", "regions": regions}})


def rect(label, x, y, w, h, key="type"):
    return {
        "shape_attributes": {"name": "rect", "x": x, "y": y, "width": w, "height": h},
        "region_attributes": {key: label},
    }


# --- model invariants -------------------------------------------------------


def test_bbox_rejects_inverted():
    with pytest.raises(ValueError):
        BBox(10, 0, 5, 5)


def test_word_text_is_normalized_and_validated():
    assert Word("\u03b1\u0301", BBox(0, 0, 1, 1)).text == "\u03ac"
    for bad in ["", "  ", "a b"]:
        with pytest.raises(ValueError):
            Word(bad, BBox(0, 0, 1, 1))
    with pytest.raises(ValueError):
        Word("a", BBox(0, 0, 1, 1), confidence=1.5)


def test_line_must_contain_its_words():
    w = Word("a", BBox(0, 0, 10, 10))
    with pytest.raises(ValueError):
        Line((w,), BBox(0, 0, 5, 5))
    assert Line.of([w]).bbox == BBox(0, 0, 10, 10)


def test_page_rejects_duplicate_region_ids():
    r = Region("commentary", BBox(0, 0, 1, 1), (), "x")
    with pytest.raises(ValueError):
        Page("p", (10, 10), (r, r))


# --- taxonomy ---------------------------------------------------------------


@pytest.mark.parametrize("label, group", [
    ("footnote", RegionGroup.COMMENTARY_LIKE),
    ("translation", RegionGroup.LOW_GREEK_TEXTS),
    ("page_number", RegionGroup.NUMBERS),
    ("primary_text", RegionGroup.GREEK_TEXTS),
    ("app_crit", RegionGroup.CRITICAL_APPARATUS),
    ("bibliography", RegionGroup.STRUCTURED_TEXTS),
])
def test_region_group_of(label, group):
    assert region_group_of(label) is group


def test_default_taxonomy_is_total_and_surjective():
    tax = Taxonomy.default()
    labels = tax.vocabulary - {tax.unassigned}
    assert {region_group_of(label) for label in labels} == set(RegionGroup)
    assert len(labels) == 14
    with pytest.raises(ValueError):
        region_group_of("unassigned")


def test_taxonomy_rejects_label_in_two_groups():
    with pytest.raises(ValueError):
        Taxonomy.from_dict({"groups": {"GreekTexts": ["x"], "Numbers": ["x"]}})


# --- hOCR -------------------------------------------------------------------


def test_hocr_minimal_document():
    page = parse_hocr(hocr(
        '<span class="ocr_line" title="bbox 10 10 60 30">'
        '<span class="ocrx_word" title="bbox 10 10 60 30; x_wconf 93">λόγος</span></span>'
    ))
    assert page.image_dims == (100, 100)
    assert len(page.regions) == 1 and len(page.lines) == 1
    (w,) = page.words
    assert (w.text, w.bbox, w.confidence) == ("λόγος", BBox(10, 10, 60, 30), 0.93)


def test_hocr_empty_body():
    page = parse_hocr(b"<html><body></body></html>")
    assert page.regions == ()


def test_hocr_normalizes_word_text():
    page = parse_hocr(hocr('<span class="ocrx_word" title="bbox 1 1 9 9">\u03b1\u0301</span>'))
    assert [w.text for w in page.words] == ["ά"]
    assert len(page.words[0].text) == 1


def test_hocr_drops_words_without_bbox_with_warning():
    doc = hocr(
        '<span class="ocr_line" title="bbox 0 0 50 20">'
        '<span class="ocrx_word">lost</span>'
        '<span class="ocrx_word" title="bbox 0 0 20 20">kept</span></span>'
    )
    with pytest.warns(UserWarning, match="dropped 1 word"):
        page = parse_hocr(doc)
    assert [w.text for w in page.words] == ["kept"]


def test_hocr_careas_become_regions():
    page = parse_hocr(hocr(
        '<div class="ocr_carea" title="bbox 0 0 50 50">'
        '<span class="ocr_line" title="bbox 0 0 50 10">'
        '<span class="ocrx_word" title="bbox 0 0 10 10">a</span>'
        '<span class="ocrx_word" title="bbox 20 0 30 10">b</span></span></div>'
        '<div class="ocr_carea" title="bbox 0 60 50 90">'
        '<span class="ocr_line" title="bbox 0 60 50 70">'
        '<span class="ocrx_word" title="bbox 0 60 10 70">c</span></span></div>'
    ))
    assert [[w.text for w in r.words] for r in page.regions] == [["a", "b"], ["c"]]
    assert {r.rtype for r in page.regions} == {"unassigned"}


@pytest.mark.parametrize("doc, fragment", [
    (hocr('<span class="ocr_line"><b>x</span>'), "unexpected closing tag"),
    (b'<div class="ocr_page" title="bbox 0 0 9 9"><span class="ocr_line">', "not closed"),
    (hocr('<span class="ocrx_word" title="bbox 0 0 1 1">x</span>', page=None), "page dimensions missing"),
    (hocr("", page='<div class="ocr_page">{}</div>'), "page dimensions missing"),
])
def test_hocr_errors(doc, fragment):
    with pytest.raises(HocrError, match=fragment):
        parse_hocr(doc)


def test_hocr_error_carries_element_path():
    with pytest.raises(HocrError, match=r"/html/body/div\.ocr_page/span\.ocr_line"):
        parse_hocr(hocr('<span class="ocr_line"><b>x</span>'))


def test_hocr_writer_round_trip(demo):
    for d in demo:
        again = parse_hocr(write_hocr(d.gt))
        assert again.image_dims == d.gt.image_dims
        assert [(w.text, w.bbox) for w in again.words] == [(w.text, w.bbox) for w in d.gt.words]


# --- region annotations -----------------------------------------------------


def test_region_annotations_single_rect():
    assert parse_region_annotations(via([rect("commentary", 5, 6, 10, 20)])) == [
        ("commentary", BBox(5, 6, 15, 26))
    ]


def test_region_annotations_unknown_label():
    with pytest.raises(AnnotationError, match="unknown region type 'commentry'"):
        parse_region_annotations(via([rect("commentry", 0, 0, 1, 1)]))


def test_region_annotations_keep_overlaps():
    got = parse_region_annotations(via([rect("commentary", 0, 0, 50, 50), rect("footnote", 10, 10, 50, 50)]))
    assert [label for label, _ in got] == ["commentary", "footnote"]


def test_region_annotations_reject_polygons():
    poly = {"shape_attributes": {"name": "polygon", "all_points_x": [0, 1, 2]},
            "region_attributes": {"type": "commentary"}}
    with pytest.raises(AnnotationError, match="non-rectangle"):
        parse_region_annotations(via([poly]))


def test_region_annotations_via_project_and_checkbox_attribute():
    doc = {"_via_img_metadata": {"k": {"filename": "p1.png", "regions": [
        {"shape_attributes": {"name": "rect", "x": 0, "y": 0, "width": 4, "height": 4},
         "region_attributes": {"type": {"footnote": True, "index": False}}},
    ]}}}
    assert parse_region_annotation_sets(json.dumps(doc)) == {"p1": [("footnote", BBox(0, 0, 4, 4))]}


def test_region_annotations_writer_round_trip():
    annots = {"p1": [("commentary", BBox(1, 2, 30, 40)), ("page_number", BBox(5, 5, 9, 9))]}
    assert parse_region_annotation_sets(write_region_annotations(annots)) == annots


# --- region assignment ------------------------------------------------------


def _word_at(cx, cy, text="w"):
    return Word(text, BBox(cx - 5, cy - 5, cx + 5, cy + 5))


def _page(words):
    return Page("p", (1000, 1000), (Region.of("unassigned", [Line.of(words)], id="b0"),))


def test_assign_center_inside_commentary():
    page = assign_regions(_page([_word_at(35, 20)]), [("commentary", BBox(0, 0, 100, 100))])
    assert page.regions[0].rtype == "commentary"
    assert [w.text for w in page.regions[0].words] == ["w"]


def test_assign_center_outside_everything():
    page = assign_regions(_page([_word_at(500, 500)]), [("commentary", BBox(0, 0, 100, 100))])
    assert [r.rtype for r in page.regions] == ["commentary", "unassigned"]
    assert page.regions[0].lines == ()
    assert len(page.regions[1].words) == 1


def test_assign_splits_straddling_line():
    words = [_word_at(20, 20, "a"), _word_at(80, 20, "b"), _word_at(140, 20, "c")]
    annots = [("commentary", BBox(0, 0, 50, 50)), ("footnote", BBox(60, 0, 160, 50))]
    page = assign_regions(_page(words), annots)
    assert [[w.text for w in r.words] for r in page.regions] == [["a"], ["b", "c"]]
    assert page.regions[1].lines[0].bbox == BBox(75, 15, 145, 25)


def _nested_oracle(point, rects):
    inside = [i for i, r in enumerate(rects)
              if r.x0 <= point[0] <= r.x1 and r.y0 <= point[1] <= r.y1]
    if not inside:
        return None
    smallest = min((rects[i].x1 - rects[i].x0) * (rects[i].y1 - rects[i].y0) for i in inside)
    return next(i for i in inside if (rects[i].x1 - rects[i].x0) * (rects[i].y1 - rects[i].y0) == smallest)


def test_locate_exhaustive_two_rect_geometry():
    coords = [0, 2, 4, 6]
    spans = [(a, b) for a, b in itertools.combinations(coords, 2)]
    rects = [BBox(x0, y0, x1, y1) for (x0, x1) in spans for (y0, y1) in spans]
    points = [(x, y) for x in range(-1, 8) for y in (1, 3, 5)]
    checked = 0
    for r1, r2 in itertools.product(rects, repeat=2):
        for p in points:
            probe = BBox(p[0] - 1, p[1] - 1, p[0] + 1, p[1] + 1)
            assert locate(probe, [("a", r1), ("b", r2)]) == _nested_oracle(p, [r1, r2])
            checked += 1
    assert checked > 10000


def test_locate_nested_prefers_smaller():
    outer, inner = BBox(0, 0, 100, 100), BBox(20, 20, 60, 60)
    probe = _word_at(30, 30).bbox
    assert locate(probe, [("commentary", outer), ("footnote", inner)]) == 1
    assert locate(probe, [("footnote", inner), ("commentary", outer)]) == 0


word_boxes = st.tuples(
    st.integers(0, 200), st.integers(0, 200), st.integers(1, 40), st.integers(1, 40)
).map(lambda t: BBox(t[0], t[1], t[0] + t[2], t[1] + t[3]))
rects = st.lists(
    st.tuples(st.sampled_from(["commentary", "footnote", "app_crit"]), word_boxes.map(
        lambda b: BBox(b.x0, b.y0, b.x1 * 2, b.y1 * 2))),
    max_size=4,
)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.lists(word_boxes, min_size=1, max_size=5), min_size=1, max_size=4), rects)
def test_assign_conserves_word_multiset(line_boxes, annots):
    lines = [Line.of([Word(f"w{i}{j}", b) for j, b in enumerate(boxes)]) for i, boxes in enumerate(line_boxes)]
    page = Page("p", (500, 500), (Region.of("unassigned", lines, id="b0"),))
    out = assign_regions(page, annots)
    key = lambda w: (w.text, w.bbox)
    assert Counter(map(key, out.words)) == Counter(map(key, page.words))
    for region in out.regions:
        assert all(region.bbox.contains(ln.bbox) for ln in region.lines)


# --- canonical JSON ---------------------------------------------------------


def test_canonical_round_trip_demo(demo):
    for d in demo:
        for page in (d.gt, d.ocr):
            data = write_canonical(page)
            assert read_canonical(data) == page
            assert write_canonical(read_canonical(data)) == data


def test_canonical_empty_page():
    page = Page("empty", (0, 0), ())
    assert read_canonical(write_canonical(page)) == page


def _doc(demo):
    return page_to_dict(demo[0].gt)


@pytest.mark.parametrize("mutate, path", [
    (lambda d: d["regions"][0]["lines"][0]["words"][0].update(bbox=[60, 10, 50, 30]),
     "$.regions[0].lines[0].words[0].bbox"),
    (lambda d: d["regions"][1]["lines"][2]["words"][1].update(text="\u03b1\u0301"),
     "$.regions[1].lines[2].words[1].text"),
    (lambda d: d["regions"][2].update(type="commentry"), "$.regions[2].type"),
    (lambda d: d["regions"][0].update(bbox=[0, 0, 5000, 10]), "$.regions[0].bbox"),
    (lambda d: d.update(version=9), "$.version"),
    (lambda d: d["regions"][1]["lines"][0]["words"][0].update(confidence=2),
     "$.regions[1].lines[0].words[0].confidence"),
])
def test_canonical_schema_errors_carry_json_path(demo, mutate, path):
    doc = _doc(demo)
    mutate(doc)
    with pytest.raises(SchemaError) as err:
        page_from_dict(doc)
    assert err.value.path == path


def test_canonical_invalid_json():
    with pytest.raises(SchemaError, match="invalid JSON"):
        read_canonical(b"{")


@settings(max_examples=100, deadline=None)
@given(st.lists(st.lists(st.tuples(st.sampled_from(["λόγος", "ἄνθρωπος", "q", "ᾤχετο", "7"]), word_boxes),
                         min_size=1, max_size=4), max_size=4))
def test_canonical_round_trip_property(layout):
    lines = [Line.of([Word(t, b, 0.5) for t, b in ws]) for ws in layout]
    regions = (Region.of("commentary", lines, id="r0"),) if lines else ()
    page = Page("p", (300, 300), regions)
    again = read_canonical(write_canonical(page))
    assert again == page
    assert all(normalize_nfc(w.text) == w.text for w in again.words)
