from typing import Literal

from pydantic import BaseModel, Field, model_validator


class RunConfig(BaseModel):
    """One experiment invocation as parsed from the command line."""

    command: str
    n: int = Field(default=1, ge=1)
    scheme: Literal["otue", "private", "public"] = "otue"
    adversary: Literal["trivial", "cloner", "custom-file"] = "cloner"
    adversary_file: str | None = None
    mode: Literal["exact", "mc"] = "exact"
    trials: int | None = Field(default=None, ge=1)
    seed: int | None = None
    family: str = "wiesner"
    prf: Literal["table", "keyed-hash"] = "table"
    prf_seed: int = 0
    key_bits: int = Field(default=1, ge=0)
    input_bits: int = Field(default=1, ge=0)
    width: int | None = None
    fe_backend: Literal["garbled", "reference"] | None = None
    output: str | None = None
    format: Literal["csv", "json"] = "csv"

    @model_validator(mode="after")
    def _check(self):
        if self.mode == "mc" and (self.seed is None or self.trials is None):
            raise ValueError("--mode mc requires --seed and --trials")
        if self.adversary == "custom-file" and not self.adversary_file:
            raise ValueError("--adversary custom-file requires --adversary-file")
        return self

    @property
    def harness_mode(self) -> Literal["exact", "monte_carlo"]:
        return "exact" if self.mode == "exact" else "monte_carlo"
