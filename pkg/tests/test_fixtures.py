import filecmp

from groupsleuth.fixtures import DATA_DIR, data_dir, external_table_path, write_all


def test_regeneration_is_byte_identical(tmp_path):
    written = write_all(tmp_path)
    assert written
    for p in written:
        shipped = DATA_DIR / p.relative_to(tmp_path)
        assert filecmp.cmp(p, shipped, shallow=False), p.name


def test_data_dir_override(tmp_path, monkeypatch):
    monkeypatch.setenv("GROUPSLEUTH_DATA", str(tmp_path))
    assert data_dir() == tmp_path
    assert external_table_path("M") is None
    (tmp_path / "tables").mkdir()
    (tmp_path / "tables" / "monster.json").write_text("{}")
    assert external_table_path("M") == tmp_path / "tables" / "monster.json"
