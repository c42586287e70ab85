import json
from pathlib import Path

from services.report_io import input_path, output_path


def read_json(file_path: str | Path):
    try:
        with open(input_path(file_path), "r", encoding="utf-8") as f:
            return json.load(f)
    except FileNotFoundError:
        print(f"[!] Error: {file_path} not found.")
        raise


def write_json(file_path: str | Path, data) -> Path:
    path = output_path(file_path)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(data, f, indent=1)
        f.write("\n")
    return path
