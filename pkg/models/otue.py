from dataclasses import dataclass, field

from pydantic import BaseModel

from models.bits import Bits
from models.errors import BitLengthError, InvariantViolation
from models.quantum import BasisFamily, DensityMatrix


@dataclass(frozen=True)
class OtueKey:
    theta: int
    r: Bits
    family: BasisFamily = field(compare=False, hash=False, repr=False)

    def __post_init__(self) -> None:
        if self.theta not in self.family.thetas:
            raise InvariantViolation(f"theta {self.theta} not in family of size {self.family.size}")
        if len(self.r) != self.family.n:
            raise BitLengthError(f"pad has {len(self.r)} bits, family has n={self.family.n}")

    @property
    def n(self) -> int:
        return self.family.n


@dataclass(frozen=True, eq=False)
class QuantumCiphertext:
    state: DensityMatrix
    n: int

    def __post_init__(self) -> None:
        if self.state.dim != 1 << self.n:
            raise InvariantViolation(f"ciphertext dim {self.state.dim} for n={self.n}")


class OtueKeyRecord(BaseModel):
    theta: int
    r: str
    n: int
    family_id: str
