import json
import math
from pathlib import Path

import pytest
from pydantic import ValidationError

from models.report import CSV_COLUMNS, ExperimentReport
from services.report_io import emit_table, input_path, output_path, read_table, report_row

P1 = (3 + 2 * math.sqrt(2)) / 8


def _reports():
    return [
        ExperimentReport(success_probability=P1, n=1, mode="exact", scheme="otue", adversary="cloner"),
        ExperimentReport(
            success_probability=0.5, n=1, mode="monte_carlo", trials=1000, seed=7,
            half_width=0.03, scheme="private-h2", adversary="trivial",
        ),
        ExperimentReport(success_probability=0.0, n=2, mode="exact"),
    ]


def test_row_formatting():
    row = report_row(_reports()[0])
    assert row["success"] == "0.728553391"
    assert row["halfwidth"] == ""
    assert row["implied_t"] == format(1 + math.log2(P1), ".9g")
    assert report_row(_reports()[2])["implied_t"] == ""


def test_csv_header_and_reload(tmp_path, monkeypatch):
    monkeypatch.delenv("UNCLONE_OUTPUT_DIR", raising=False)
    path = emit_table(_reports(), tmp_path / "table.csv")
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) == 4

    again = read_table(path)
    assert again[0].success_probability == pytest.approx(P1, abs=1e-9)
    assert again[1].half_width == pytest.approx(0.03)
    assert again[1].seed == 7
    assert [r.scheme for r in again] == ["otue", "private-h2", "otue"]


def test_json_table(tmp_path, monkeypatch):
    monkeypatch.delenv("UNCLONE_OUTPUT_DIR", raising=False)
    path = emit_table(_reports(), tmp_path / "table.json", fmt="json")
    records = json.loads(path.read_text(encoding="utf-8"))
    assert records[1]["n"] == 1
    assert records[1]["trials"] == 1000
    assert records[1]["success_probability"] == 0.5
    assert records[1]["half_width"] == 0.03
    assert records[0]["implied_t"] == 1 + math.log2(P1)
    assert records[2]["implied_t"] is None

    again = read_table(path, "json")
    assert [r.mode for r in again] == ["exact", "monte_carlo", "exact"]
    assert again == _reports()


@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_empty_table(tmp_path, monkeypatch, fmt):
    monkeypatch.delenv("UNCLONE_OUTPUT_DIR", raising=False)
    path = emit_table([], tmp_path / f"empty.{fmt}", fmt=fmt)
    if fmt == "csv":
        assert path.read_text(encoding="utf-8") == ",".join(CSV_COLUMNS) + "\n"
    else:
        assert json.loads(path.read_text(encoding="utf-8")) == []
    assert read_table(path, fmt) == []


def test_reads_resolve_under_output_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("UNCLONE_OUTPUT_DIR", str(tmp_path / "results"))
    emit_table(_reports(), "table.csv")
    assert len(read_table("table.csv")) == 3

    monkeypatch.chdir(tmp_path)
    (tmp_path / "local.csv").write_text(",".join(CSV_COLUMNS) + "\n", encoding="utf-8")
    assert input_path("local.csv") == Path("local.csv")
    assert read_table("local.csv") == []


def test_unexpected_columns_are_rejected(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("n,success\n1,0.5\n", encoding="utf-8")
    with pytest.raises(ValueError):
        read_table(path)


def test_output_dir_override(tmp_path, monkeypatch):
    monkeypatch.setenv("UNCLONE_OUTPUT_DIR", str(tmp_path))
    path = emit_table(_reports()[:1], "nested/out.csv")
    assert path == tmp_path / "nested" / "out.csv"
    assert path.exists()
    assert output_path(tmp_path / "abs.csv") == tmp_path / "abs.csv"


def test_half_width_only_for_monte_carlo():
    with pytest.raises(ValidationError):
        ExperimentReport(success_probability=0.5, n=1, mode="exact", half_width=0.1)
    with pytest.raises(ValidationError):
        ExperimentReport(success_probability=0.5, n=1, mode="monte_carlo")
    with pytest.raises(ValidationError):
        ExperimentReport(success_probability=1.5, n=1, mode="exact")
