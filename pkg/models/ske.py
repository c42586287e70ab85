from dataclasses import dataclass, field
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field

from models.bits import Bits


@dataclass(frozen=True)
class SkeKey:
    k: Bits
    otp: Bits
    # test-only metadata; never serialized and never compared
    provenance: Literal["real", "fake"] = field(default="real", compare=False, hash=False)


@dataclass(frozen=True)
class ClassicalCiphertext:
    r: Bits
    c2: Bits

    def to_bits(self) -> Bits:
        return self.r + self.c2


class SkeKeyRecord(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    k: str
    otp: str
    lambda_: int = Field(alias="lambda")
    ell: int
    n: int


class CiphertextRecord(BaseModel):
    r: str
    c2: str
