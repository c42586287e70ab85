import hashlib
import hmac
from abc import ABC, abstractmethod

import numpy as np

from models.bits import Bits
from models.errors import BitLengthError


class PrfSpec(ABC):
    """PRF_k: {0,1}^input_bits -> {0,1}^output_bits with keys of key_bits bits."""

    kind: str

    def __init__(self, key_bits: int, input_bits: int, output_bits: int) -> None:
        self.key_bits = key_bits
        self.input_bits = input_bits
        self.output_bits = output_bits

    def _check(self, key: Bits, x: Bits) -> None:
        if len(key) != self.key_bits:
            raise BitLengthError(f"PRF key has {len(key)} bits, expected {self.key_bits}")
        if len(x) != self.input_bits:
            raise BitLengthError(f"PRF input has {len(x)} bits, expected {self.input_bits}")

    @abstractmethod
    def evaluate(self, key: Bits, x: Bits) -> Bits: ...

    @abstractmethod
    def describe(self) -> dict: ...


class TablePrf(PrfSpec):
    """Explicit truth table, table[k][x] -> output; for enumeration and circuits."""

    kind = "table"

    def __init__(self, key_bits: int, input_bits: int, output_bits: int, table) -> None:
        super().__init__(key_bits, input_bits, output_bits)
        table = tuple(tuple(int(v) for v in row) for row in table)
        if len(table) != 1 << key_bits or any(len(row) != 1 << input_bits for row in table):
            raise BitLengthError("PRF table shape does not match key/input widths")
        if any(not 0 <= v < 1 << output_bits for row in table for v in row):
            raise BitLengthError("PRF table entry wider than the output width")
        self.table = table

    @classmethod
    def random(cls, key_bits: int, input_bits: int, output_bits: int, rng: np.random.Generator) -> "TablePrf":
        table = [
            [Bits.random(output_bits, rng).value for _ in range(1 << input_bits)]
            for _ in range(1 << key_bits)
        ]
        return cls(key_bits, input_bits, output_bits, table)

    @classmethod
    def constant(cls, key_bits: int, input_bits: int, output_bits: int, value: int = 0) -> "TablePrf":
        return cls(
            key_bits, input_bits, output_bits,
            [[value] * (1 << input_bits) for _ in range(1 << key_bits)],
        )

    @classmethod
    def key_xor_input(cls, key_bits: int, input_bits: int, output_bits: int) -> "TablePrf":
        """Structured table PRF_k(x) = (k xor x) truncated to the output width."""
        mask = (1 << output_bits) - 1
        return cls(
            key_bits, input_bits, output_bits,
            [[(k ^ x) & mask for x in range(1 << input_bits)] for k in range(1 << key_bits)],
        )

    def evaluate(self, key: Bits, x: Bits) -> Bits:
        self._check(key, x)
        return Bits(self.table[key.value][x.value], self.output_bits)

    def describe(self) -> dict:
        width = max(1, (self.output_bits + 3) // 4)
        return {
            "kind": self.kind,
            "lambda": self.key_bits,
            "ell": self.input_bits,
            "n": self.output_bits,
            "table": [[format(v, f"0{width}x") for v in row] for row in self.table],
        }


class HashPrf(PrfSpec):
    """
    HMAC-SHA256 in counter mode. A stand-in for a post-quantum PRF, not a
    vetted instantiation.
    """

    kind = "keyed-hash"

    def evaluate(self, key: Bits, x: Bits) -> Bits:
        self._check(key, x)
        key_bytes = key.value.to_bytes(max(1, (self.key_bits + 7) // 8), "big")
        msg = x.value.to_bytes(max(1, (self.input_bits + 7) // 8), "big")
        stream = b""
        counter = 0
        while len(stream) * 8 < self.output_bits:
            stream += hmac.new(key_bytes, counter.to_bytes(4, "big") + msg, hashlib.sha256).digest()
            counter += 1
        value = int.from_bytes(stream, "big") >> (len(stream) * 8 - self.output_bits)
        return Bits(value, self.output_bits)

    def describe(self) -> dict:
        return {"kind": self.kind, "lambda": self.key_bits, "ell": self.input_bits, "n": self.output_bits}


def prf_from_description(data: dict) -> PrfSpec:
    if data["kind"] == "table":
        table = [[int(v, 16) for v in row] for row in data["table"]]
        return TablePrf(data["lambda"], data["ell"], data["n"], table)
    if data["kind"] == "keyed-hash":
        return HashPrf(data["lambda"], data["ell"], data["n"])
    raise ValueError(f"unknown PRF kind {data['kind']!r}")
