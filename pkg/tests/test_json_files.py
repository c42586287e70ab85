import pytest

from services.json_files import read_json, write_json


def test_write_then_read(tmp_path, monkeypatch):
    monkeypatch.delenv("UNCLONE_OUTPUT_DIR", raising=False)
    path = write_json(tmp_path / "sub" / "key.json", {"theta": 1, "r": "0"})
    assert read_json(path) == {"theta": 1, "r": "0"}


def test_missing_file_reports_error(tmp_path, capsys):
    with pytest.raises(FileNotFoundError):
        read_json(tmp_path / "missing.json")
    assert "[!] Error:" in capsys.readouterr().out
