import math
from typing import Literal

from pydantic import BaseModel, Field, model_validator

CSV_COLUMNS = ["n", "scheme", "adversary", "mode", "success", "halfwidth", "implied_t", "seed"]


class ExperimentReport(BaseModel):
    success_probability: float = Field(ge=0.0, le=1.0)
    n: int
    mode: Literal["exact", "monte_carlo"]
    trials: int | None = None
    seed: int | None = None
    half_width: float | None = None
    scheme: str = "otue"
    adversary: str = "custom"

    @model_validator(mode="after")
    def _half_width_iff_mc(self):
        if (self.mode == "monte_carlo") != (self.half_width is not None):
            raise ValueError("half_width must be present exactly for Monte Carlo reports")
        return self

    @property
    def implied_t(self) -> float | None:
        if self.success_probability <= 0:
            return None
        return self.n + math.log2(self.success_probability)


class IndReport(BaseModel):
    advantage: float
    trials: int
    q: int
    seed: int
    half_width: float
