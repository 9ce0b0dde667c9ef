"""Parse OCR output, attach annotated regions, and store the canonical JSON form."""

from polyocr import assign_regions, parse_hocr, parse_region_annotations, read_canonical, write_canonical

hocr = """<html><body>
<div class="ocr_page" id="p1" title="bbox 0 0 600 400">
 <span class="ocr_line" title="bbox 40 40 420 70">
  <span class="ocrx_word" title="bbox 40 40 130 70; x_wconf 91">μῆνιν</span>
  <span class="ocrx_word" title="bbox 140 40 220 70; x_wconf 88">ἄειδε</span>
  <span class="ocrx_word" title="bbox 230 40 290 70; x_wconf 95">θεά</span>
 </span>
 <span class="ocr_line" title="bbox 40 300 560 330">
  <span class="ocrx_word" title="bbox 40 300 80 330">1.</span>
  <span class="ocrx_word" title="bbox 90 300 200 330">μῆνιν:</span>
  <span class="ocrx_word" title="bbox 210 300 300 330">wrath,</span>
  <span class="ocrx_word" title="bbox 310 300 360 330">the</span>
  <span class="ocrx_word" title="bbox 370 300 460 330">theme</span>
 </span>
</div></body></html>"""

annotations = """{"p1.png": {"filename": "p1.png", "regions": [
 {"shape_attributes": {"name": "rect", "x": 20, "y": 20, "width": 560, "height": 100},
  "region_attributes": {"type": "primary_text"}},
 {"shape_attributes": {"name": "rect", "x": 20, "y": 280, "width": 560, "height": 80},
  "region_attributes": {"type": "commentary"}}]}}"""

page = parse_hocr(hocr)
print(f"parsed {page.id}: {len(page.words)} words in {len(page.regions)} unlabelled block(s)")

page = assign_regions(page, parse_region_annotations(annotations))
for region in page.regions:
    print(f"  {region.id} {region.rtype:<13} {' / '.join(ln.text for ln in region.lines)}")

data = write_canonical(page)
assert read_canonical(data) == page
print(f"canonical JSON: {len(data)} bytes, round-trips exactly")
