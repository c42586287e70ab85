from dataclasses import dataclass
from typing import Literal

from models.errors import InvariantViolation

GateOp = Literal["AND", "XOR", "NOT"]


@dataclass(frozen=True)
class Gate:
    op: GateOp
    a: int
    b: int | None = None


@dataclass(frozen=True)
class BooleanCircuit:
    """
    Wires 0..desc_bits-1 carry the function description d, the next data_bits
    wires carry the data x, and gate i drives wire desc_bits + data_bits + i.
    Gates may only read wires driven earlier, so the list is topologically
    ordered and every wire has exactly one driver.
    """

    desc_bits: int
    data_bits: int
    gates: tuple[Gate, ...]
    outputs: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.desc_bits < 0 or self.data_bits < 0:
            raise InvariantViolation("negative input width")
        for i, gate in enumerate(self.gates):
            wire = self.input_count + i
            if gate.op == "NOT":
                if gate.b is not None or not 0 <= gate.a < wire:
                    raise InvariantViolation(f"gate {i}: NOT reads an undriven wire or has two inputs")
            elif gate.op in ("AND", "XOR"):
                if gate.b is None or not (0 <= gate.a < wire and 0 <= gate.b < wire):
                    raise InvariantViolation(f"gate {i}: {gate.op} reads an undriven wire")
            else:
                raise InvariantViolation(f"gate {i}: unknown op {gate.op!r}")
        if any(not 0 <= w < self.wire_count for w in self.outputs):
            raise InvariantViolation("output references a wire that does not exist")

    @property
    def input_count(self) -> int:
        return self.desc_bits + self.data_bits

    @property
    def wire_count(self) -> int:
        return self.input_count + len(self.gates)


@dataclass(frozen=True, eq=False)
class GarbledCircuit:
    """
    Public topology plus, per gate, the permuted encrypted rows (four for
    AND/XOR, two for NOT). `output_labels[j]` is the (label for 0, label for 1)
    pair of output j.
    """

    circuit: BooleanCircuit
    tables: tuple[tuple[bytes, ...], ...]
    output_labels: tuple[tuple[bytes, bytes], ...]
