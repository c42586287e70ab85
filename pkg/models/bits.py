from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from models.errors import BitLengthError


@dataclass(frozen=True, order=True)
class Bits:
    """
    Length-tagged bit string. Bit 0 is the most significant bit of `value`,
    matching the big-endian qubit order used for basis indices.
    """

    value: int
    length: int

    def __post_init__(self) -> None:
        if self.length < 0:
            raise BitLengthError(f"negative bit length {self.length}")
        if not 0 <= self.value < (1 << self.length):
            raise BitLengthError(f"value {self.value} does not fit in {self.length} bits")

    @classmethod
    def zeros(cls, length: int) -> "Bits":
        return cls(0, length)

    @classmethod
    def from_str(cls, s: str) -> "Bits":
        s = s.strip()
        if s and set(s) - {"0", "1"}:
            raise BitLengthError(f"not a bit string: {s!r}")
        return cls(int(s, 2) if s else 0, len(s))

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "Bits":
        value = 0
        length = 0
        for b in bits:
            value = (value << 1) | (1 if b else 0)
            length += 1
        return cls(value, length)

    @classmethod
    def from_hex(cls, hex_str: str, length: int) -> "Bits":
        return cls(int(hex_str, 16) if hex_str else 0, length)

    @classmethod
    def random(cls, length: int, rng: np.random.Generator) -> "Bits":
        if length == 0:
            return cls(0, 0)
        nbytes = (length + 7) // 8
        raw = int.from_bytes(rng.bytes(nbytes), "big")
        return cls(raw >> (8 * nbytes - length), length)

    @classmethod
    def enumerate(cls, length: int) -> Iterator["Bits"]:
        for value in range(1 << length):
            yield cls(value, length)

    def __len__(self) -> int:
        return self.length

    def __iter__(self) -> Iterator[int]:
        return iter(self.bits)

    def __xor__(self, other: "Bits") -> "Bits":
        if not isinstance(other, Bits):
            return NotImplemented
        if other.length != self.length:
            raise BitLengthError(
                f"xor of mismatched lengths {self.length} and {other.length}"
            )
        return Bits(self.value ^ other.value, self.length)

    def __add__(self, other: "Bits") -> "Bits":
        """Concatenation; `self` ends up in the high-order bits."""
        if not isinstance(other, Bits):
            return NotImplemented
        return Bits((self.value << other.length) | other.value, self.length + other.length)

    def __getitem__(self, index: int | slice) -> "Bits | int":
        if isinstance(index, slice):
            return Bits.from_bits(self.bits[index])
        return self.bits[index]

    @property
    def bits(self) -> tuple[int, ...]:
        return tuple((self.value >> (self.length - 1 - i)) & 1 for i in range(self.length))

    def split(self, *widths: int) -> tuple["Bits", ...]:
        if sum(widths) != self.length:
            raise BitLengthError(f"widths {widths} do not cover {self.length} bits")
        parts = []
        offset = 0
        for w in widths:
            parts.append(self[offset : offset + w])
            offset += w
        return tuple(parts)

    def pad_to(self, length: int) -> "Bits":
        """Append zero bits on the right."""
        if length < self.length:
            raise BitLengthError(f"cannot pad {self.length} bits down to {length}")
        return self + Bits.zeros(length - self.length)

    def to_hex(self) -> str:
        digits = max(1, (self.length + 3) // 4)
        return format(self.value, f"0{digits}x")

    def __str__(self) -> str:
        return format(self.value, f"0{self.length}b") if self.length else ""
