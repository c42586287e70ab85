from pathlib import Path
from typing import Literal

from pydantic import BaseModel, ValidationError

SETTINGS_PATH = Path(__file__).resolve().parent.parent / "settings.json"


class Settings(BaseModel):
    MAX_WORKERS: int
    MC_CHUNK_SIZE: int
    EXACT_BUDGET_LOG2: int  # |keys|·|messages| (times adversary coins) <= 2**this
    FAKEKEY_BUDGET_LOG2: int
    CIRCUIT_GATE_BUDGET: int
    LABEL_BYTES: int
    PKE_DIMENSION: int
    PKE_SAMPLES: int
    PKE_MODULUS: int
    PKE_NOISE_ETA: int
    FE_BACKEND: Literal["garbled", "reference"]
    SEESAW_ITERATIONS: int
    CSV_DIGITS: int


def load_settings(file_path: str | Path):
    try:
        with open(file_path, "r") as f:
            return Settings.model_validate_json(f.read())
    except ValidationError as e:
        print(f"Configuration Error: {e}")
        raise


settings = load_settings(SETTINGS_PATH)
