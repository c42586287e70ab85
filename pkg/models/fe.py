from dataclasses import dataclass

import numpy as np
from pydantic import BaseModel

from models.bits import Bits
from models.circuit import BooleanCircuit, GarbledCircuit
from models.errors import BitLengthError, SingleKeyViolation


@dataclass(frozen=True, eq=False)
class PkePublicKey:
    a: np.ndarray  # samples x dimension, entries mod q
    b: np.ndarray  # a @ s + e mod q
    modulus: int


@dataclass(frozen=True, eq=False)
class PkeSecretKey:
    s: np.ndarray
    modulus: int


@dataclass(frozen=True, eq=False)
class PkeCiphertext:
    """One (u, v) row per encrypted bit."""

    u: np.ndarray
    v: np.ndarray


@dataclass(frozen=True, eq=False)
class FeMasterPublicKey:
    pks: tuple[tuple[PkePublicKey, PkePublicKey], ...]

    @property
    def desc_bits(self) -> int:
        return len(self.pks)


class FeMasterSecretKey:
    """
    Slot secret keys. Issues function keys for a single description only;
    asking again for the same description returns an equal key.
    """

    def __init__(self, sks: tuple[tuple[PkeSecretKey, PkeSecretKey], ...]) -> None:
        self.sks = sks
        self.issued: Bits | None = None

    @property
    def desc_bits(self) -> int:
        return len(self.sks)

    def claim(self, d: Bits) -> None:
        if len(d) != self.desc_bits:
            raise BitLengthError(f"description has {len(d)} bits, FE instance has L={self.desc_bits}")
        if self.issued is not None and self.issued != d:
            raise SingleKeyViolation("this master key already issued a key for another description")
        self.issued = d


@dataclass(frozen=True, eq=False)
class FeFunctionKey:
    description: Bits
    sks: tuple[PkeSecretKey, ...]  # sks[i] is the slot key for (i, d_i)


@dataclass(frozen=True, eq=False)
class GarbledFeCiphertext:
    garbled: GarbledCircuit
    data_labels: tuple[bytes, ...]
    label_cts: tuple[tuple[PkeCiphertext, PkeCiphertext], ...]


@dataclass(frozen=True, eq=False)
class ReferenceFeCiphertext:
    """Trusted plain evaluation: carries x in the clear."""

    circuit: BooleanCircuit
    data: Bits


FeCiphertext = GarbledFeCiphertext | ReferenceFeCiphertext


class PkeKeyRecord(BaseModel):
    modulus: int
    samples: int
    dimension: int
    a: str | None = None
    b: str | None = None
    s: str | None = None


class FeKeyRecord(BaseModel):
    """mpk or msk: two PKE keys per description bit."""

    desc_bits: int
    slots: list[tuple[PkeKeyRecord, PkeKeyRecord]]


class FeFunctionKeyRecord(BaseModel):
    description: str
    desc_bits: int
    sks: list[PkeKeyRecord]
