"""Word alignment and the metric battery on the bundled demo corpus."""

from polyocr import assign_regions, evaluate_page, pool
from polyocr.demo import build_demo
from polyocr.evaluate import GLOBAL, align_words

pages = build_demo()
gt = [assign_regions(d.gt, d.annotations) for d in pages]

first = align_words(gt[0], pages[0].ocr)
print(f"{gt[0].id}: {len(first.matched)} matched, {len(first.unmatched_gt)} missed, "
      f"{len(first.unmatched_ocr)} spurious")
for g, o in first.matched:
    if g.text != o.text:
        print(f"  {g.text!r:>16} read as {o.text!r}")

evals = [evaluate_page(g, d.ocr) for g, d in zip(gt, pages)]
print()
print(f"{'scope':<18} {'chars':>5} {'CER':>6} {'WER':>6} {'F1':>6}")
for scope, counts in pool(evals).items():
    if counts.gt_chars == 0 and scope != GLOBAL:
        continue
    row = counts.row()
    print(f"{scope:<18} {row['char_count']:>5} {row['cer']:>6.3f} {row['wer']:>6.3f} {row['bow_f1']:>6.3f}")
