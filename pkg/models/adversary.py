from dataclasses import dataclass, field
from typing import Any, Callable, Iterable

import numpy as np

from models.errors import DimensionMismatch, InvariantViolation
from models.quantum import BasisFamily, DensityMatrix, KrausChannel, Povm


@dataclass(frozen=True)
class AdversaryView:
    """
    What B (or C) holds in phase 2 besides its quantum register: the revealed
    key, the classical ciphertext part (broadcast to both parties) and the
    shared coin drawn in phase 1.
    """

    key: Any
    classical: Any = None
    coin: Any = None


@dataclass(frozen=True, eq=False)
class CoinSpace:
    """
    Uniform classical randomness shared by B and C. `size` is None when the
    space is too large to enumerate.
    """

    size: int | None
    items: Callable[[], Iterable[Any]]
    sample: Callable[[np.random.Generator], Any]


NO_COINS = CoinSpace(1, lambda: (None,), lambda rng: None)


@dataclass(frozen=True, eq=False)
class CloningAdversary:
    split: KrausChannel
    dim_b: int
    dim_c: int
    bob_povm: Callable[[AdversaryView], Povm]
    charlie_povm: Callable[[AdversaryView], Povm]
    coins: CoinSpace = field(default=NO_COINS)
    name: str = "custom"

    def __post_init__(self) -> None:
        if self.split.out_dim != self.dim_b * self.dim_c:
            raise DimensionMismatch(
                f"split outputs dim {self.split.out_dim}, expected {self.dim_b}x{self.dim_c}"
            )


@dataclass(frozen=True, eq=False)
class MoeGame:
    n: int
    family: BasisFamily

    def __post_init__(self) -> None:
        if self.family.n != self.n:
            raise DimensionMismatch(f"family on {self.family.n} qubits for a game of order {self.n}")


@dataclass(frozen=True, eq=False)
class MoeStrategy:
    rho_abc: DensityMatrix
    dim_b: int
    dim_c: int
    bob_povms: tuple[Povm, ...]
    charlie_povms: tuple[Povm, ...]

    def __post_init__(self) -> None:
        if self.rho_abc.dim % (self.dim_b * self.dim_c):
            raise DimensionMismatch(f"state dim {self.rho_abc.dim} not divisible by B, C dims")
        if len(self.bob_povms) != len(self.charlie_povms):
            raise InvariantViolation("Bob and Charlie need one POVM per basis index each")
        for povm, dim in [(p, self.dim_b) for p in self.bob_povms] + [
            (p, self.dim_c) for p in self.charlie_povms
        ]:
            if povm.dim != dim or len(povm) != self.dim_a:
                raise DimensionMismatch("strategy POVM has wrong dimension or outcome count")

    @property
    def dim_a(self) -> int:
        return self.rho_abc.dim // (self.dim_b * self.dim_c)


@dataclass(frozen=True, eq=False)
class ClonerSpec:
    """Qubit -> two-qubit cloning channel and its guaranteed marginal fidelity."""

    kraus: KrausChannel
    worst_case_fidelity: float

    def __post_init__(self) -> None:
        if (self.kraus.in_dim, self.kraus.out_dim) != (2, 4):
            raise DimensionMismatch("a cloner maps one qubit to two qubits")
        if not 0.5 <= self.worst_case_fidelity <= 1.0:
            raise InvariantViolation(f"worst-case fidelity {self.worst_case_fidelity} outside [0.5, 1]")
