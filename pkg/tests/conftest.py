import shutil
import sys
import unicodedata

import pytest
from hypothesis import strategies as st

from polyocr.demo import build_demo, demo_lexicon_words, shipped_demo_dir
from polyocr.lexicon import Lexicon, build_unique_accent_index

GREEK_LETTERS = [
    chr(cp)
    for lo, hi in ((0x0370, 0x03FF), (0x1F00, 0x1FFF))
    for cp in range(lo, hi + 1)
    if unicodedata.category(chr(cp)).startswith("L")
]
COMBINING = ["\u0313", "\u0314", "\u0301", "\u0300", "\u0342", "\u0345", "\u0308", "\u0304", "\u0306"]

# NFC strings drawn from Greek letters, combining marks and a little Latin
polytonic_text = st.lists(
    st.sampled_from(GREEK_LETTERS + COMBINING + list("abcxyzé .,;·0123456789")),
    max_size=20,
).map(lambda cs: unicodedata.normalize("NFC", "".join(cs)))


@pytest.fixture(scope="session")
def demo():
    return build_demo()


@pytest.fixture(scope="session")
def demo_lexicon():
    return Lexicon.from_words(demo_lexicon_words(), "demo")


@pytest.fixture(scope="session")
def demo_index(demo_lexicon):
    return build_unique_accent_index(demo_lexicon)


@pytest.fixture
def demo_dir(tmp_path):
    """A writable copy of the shipped demo corpus; returns its manifest path."""
    dest = tmp_path / "demo"
    shutil.copytree(shipped_demo_dir(), dest)
    out = dest / "out"
    if out.exists():
        shutil.rmtree(out)
    return dest / "manifest.json"


# --- acceptance summary -----------------------------------------------------

_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def criterion(request):
    """Record one acceptance verdict: ``criterion(n, ok, detail, waived=False)``."""
    results = request.config.stash.setdefault(_ACCEPTANCE, [])

    def record(number, ok, detail, waived=False):
        status = "WAIVED" if waived else "PASS" if ok else "FAIL"
        line = f"criterion {number}: {status}: {detail}"
        results.append((number, line))
        print(line)
        if waived:
            pytest.skip(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash.get(_ACCEPTANCE, [])
    if results:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(results):
            terminalreporter.write_line(line)
