"""A full batch run through the command-line entry point, on a scratch copy of the demo."""

import shutil
import tempfile
from pathlib import Path

from polyocr.cli import main
from polyocr.demo import shipped_demo_dir

with tempfile.TemporaryDirectory() as tmp:
    root = Path(tmp) / "demo"
    shutil.copytree(shipped_demo_dir(), root)
    manifest = str(root / "manifest.json")

    main(["stats", "--manifest", manifest])
    main(["postprocess", "--manifest", manifest])
    main(["evaluate", "--manifest", manifest, "--pin-timestamp", "2021-09-01T00:00:00Z",
          "--with-postprocessed"])
    print((root / "out" / "report.md").read_text(encoding="utf-8"))
