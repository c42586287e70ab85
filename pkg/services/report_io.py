import csv
import json
import os
from pathlib import Path
from typing import Literal

from dotenv import load_dotenv

from models.report import CSV_COLUMNS, ExperimentReport
from models.settings import settings

TableFormat = Literal["csv", "json"]

load_dotenv()


def output_path(path: str | Path) -> Path:
    """Relative paths land under UNCLONE_OUTPUT_DIR when it is set."""
    path = Path(path)
    base = os.getenv("UNCLONE_OUTPUT_DIR")
    if base and not path.is_absolute():
        path = Path(base) / path
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def input_path(path: str | Path) -> Path:
    """Reads look under UNCLONE_OUTPUT_DIR first, then at the path as given."""
    path = Path(path)
    base = os.getenv("UNCLONE_OUTPUT_DIR")
    if base and not path.is_absolute() and (Path(base) / path).exists():
        return Path(base) / path
    return path


def _number(value: float | None) -> str:
    if value is None:
        return ""
    return format(value, f".{settings.CSV_DIGITS}g")


def report_row(report: ExperimentReport) -> dict[str, str]:
    return {
        "n": str(report.n),
        "scheme": report.scheme,
        "adversary": report.adversary,
        "mode": report.mode,
        "success": _number(report.success_probability),
        "halfwidth": _number(report.half_width),
        "implied_t": _number(report.implied_t),
        "seed": "" if report.seed is None else str(report.seed),
    }


def report_record(report: ExperimentReport) -> dict:
    return {**report.model_dump(), "implied_t": report.implied_t}


def emit_table(
    reports: list[ExperimentReport], path: str | Path, fmt: TableFormat = "csv"
) -> Path:
    path = output_path(path)
    with open(path, "w", newline="", encoding="utf-8") as f:
        if fmt == "json":
            json.dump([report_record(r) for r in reports], f, indent=1)
            f.write("\n")
        else:
            writer = csv.DictWriter(f, fieldnames=CSV_COLUMNS, lineterminator="\n")
            writer.writeheader()
            writer.writerows(report_row(r) for r in reports)
    return path


def _report_from_row(row: dict[str, str]) -> ExperimentReport:
    return ExperimentReport(
        success_probability=float(row["success"]),
        n=int(row["n"]),
        mode=row["mode"],
        seed=int(row["seed"]) if row["seed"] else None,
        half_width=float(row["halfwidth"]) if row["halfwidth"] else None,
        scheme=row["scheme"],
        adversary=row["adversary"],
    )


def read_table(path: str | Path, fmt: TableFormat = "csv") -> list[ExperimentReport]:
    with open(input_path(path), "r", newline="", encoding="utf-8") as f:
        if fmt == "json":
            return [ExperimentReport.model_validate(record) for record in json.load(f)]
        reader = csv.DictReader(f)
        if reader.fieldnames is not None and reader.fieldnames != CSV_COLUMNS:
            raise ValueError(f"unexpected table columns {reader.fieldnames}")
        return [_report_from_row(row) for row in reader]
