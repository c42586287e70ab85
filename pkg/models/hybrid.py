from dataclasses import dataclass

from models.bits import Bits
from models.errors import InvariantViolation
from models.fe import FeCiphertext, FeFunctionKey, FeMasterPublicKey
from models.otue import QuantumCiphertext
from models.ske import ClassicalCiphertext


@dataclass(frozen=True, eq=False)
class HybridCiphertext:
    ct1: ClassicalCiphertext
    ct2: QuantumCiphertext


@dataclass(frozen=True, eq=False)
class PubUeKeys:
    pk: FeMasterPublicKey
    sk: FeFunctionKey
    trojan_ct: Bits

    def __post_init__(self) -> None:
        if self.sk.description != self.trojan_ct:
            raise InvariantViolation("secret key was issued for a different embedded ciphertext")
        if len(self.trojan_ct) != self.pk.desc_bits:
            raise InvariantViolation(f"embedded ciphertext has {len(self.trojan_ct)} bits, L={self.pk.desc_bits}")


@dataclass(frozen=True, eq=False)
class PubHybridCiphertext:
    ct1: FeCiphertext
    ct2: QuantumCiphertext
