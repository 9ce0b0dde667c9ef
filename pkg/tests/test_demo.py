from polyocr.demo import ERRORS, REPAIRABLE, demo_files, shipped_demo_dir


def test_shipped_demo_matches_generator():
    root = shipped_demo_dir()
    files = demo_files()
    for rel, data in files.items():
        assert (root / rel).read_bytes() == data, rel
    shipped = {p.relative_to(root).as_posix() for p in root.rglob("*") if p.is_file()}
    assert shipped == set(files)


def test_error_table_shape():
    assert 0 < REPAIRABLE < len(ERRORS)
    assert len({e[:4] for e in ERRORS}) == len(ERRORS)
