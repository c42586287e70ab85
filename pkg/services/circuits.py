from functools import reduce
from typing import NamedTuple

import numpy as np

from models.bits import Bits
from models.circuit import BooleanCircuit, Gate
from models.errors import BitLengthError, BudgetExceeded, UsageError
from models.settings import settings
from models.ske import ClassicalCiphertext, SkeKey
from services.fakekey_ske import ske_decrypt
from services.prf import PrfSpec, TablePrf


class CircuitBuilder:
    def __init__(self, desc_bits: int, data_bits: int) -> None:
        if desc_bits + data_bits == 0:
            raise UsageError("a circuit needs at least one input wire")
        self.desc_bits = desc_bits
        self.data_bits = data_bits
        self.gates: list[Gate] = []
        self._zero: int | None = None
        self._one: int | None = None

    def desc(self, i: int) -> int:
        return i

    def data(self, i: int) -> int:
        return self.desc_bits + i

    def _add(self, gate: Gate) -> int:
        self.gates.append(gate)
        return self.desc_bits + self.data_bits + len(self.gates) - 1

    def and_(self, a: int, b: int) -> int:
        return self._add(Gate("AND", a, b))

    def xor(self, a: int, b: int) -> int:
        return self._add(Gate("XOR", a, b))

    def not_(self, a: int) -> int:
        return self._add(Gate("NOT", a))

    def zero(self) -> int:
        if self._zero is None:
            self._zero = self.xor(0, 0)
        return self._zero

    def one(self) -> int:
        if self._one is None:
            self._one = self.not_(self.zero())
        return self._one

    def xor_all(self, wires: list[int]) -> int:
        if not wires:
            return self.zero()
        return reduce(self.xor, wires)

    def and_all(self, wires: list[int]) -> int:
        if not wires:
            return self.one()
        return reduce(self.and_, wires)

    def equals_const(self, wires: list[int], value: int) -> int:
        """1 iff the wires (MSB first) spell `value`."""
        width = len(wires)
        literals = [
            w if (value >> (width - 1 - i)) & 1 else self.not_(w) for i, w in enumerate(wires)
        ]
        return self.and_all(literals)

    def mux(self, select: int, if_zero: int, if_one: int) -> int:
        return self.xor(if_zero, self.and_(select, self.xor(if_one, if_zero)))

    def build(self, outputs: list[int]) -> BooleanCircuit:
        return BooleanCircuit(self.desc_bits, self.data_bits, tuple(self.gates), tuple(outputs))


def evaluate_circuit(circuit: BooleanCircuit, d: Bits, x: Bits) -> Bits:
    if len(d) != circuit.desc_bits or len(x) != circuit.data_bits:
        raise BitLengthError(
            f"circuit takes {circuit.desc_bits}+{circuit.data_bits} input bits, got {len(d)}+{len(x)}"
        )
    wires = list(d.bits) + list(x.bits)
    for gate in circuit.gates:
        if gate.op == "AND":
            wires.append(wires[gate.a] & wires[gate.b])
        elif gate.op == "XOR":
            wires.append(wires[gate.a] ^ wires[gate.b])
        else:
            wires.append(1 - wires[gate.a])
    return Bits.from_bits(wires[w] for w in circuit.outputs)


def random_circuit(
    desc_bits: int, data_bits: int, gate_count: int, output_count: int, rng: np.random.Generator
) -> BooleanCircuit:
    builder = CircuitBuilder(desc_bits, data_bits)
    ops = ("AND", "XOR", "NOT")
    for _ in range(gate_count):
        wires = desc_bits + data_bits + len(builder.gates)
        op = ops[int(rng.integers(len(ops)))]
        a = int(rng.integers(wires))
        if op == "NOT":
            builder.not_(a)
        else:
            builder._add(Gate(op, a, int(rng.integers(wires))))
    total = desc_bits + data_bits + len(builder.gates)
    outputs = [int(w) for w in rng.integers(total, size=output_count)]
    return builder.build(outputs)


class FLayout(NamedTuple):
    """Bit widths of the data input (b, k_valid, k, otp, m_valid, m) of F[ct]."""

    key_bits: int
    width: int

    @property
    def data_bits(self) -> int:
        return 3 + self.key_bits + 2 * self.width

    def split(self, x: Bits) -> tuple[Bits, ...]:
        return x.split(1, 1, self.key_bits, self.width, 1, self.width)


def f_desc_bits(prf: PrfSpec) -> int:
    """F[ct] is described by the bits of ct = r || c2."""
    return prf.input_bits + prf.output_bits


def f_inputs(prf: PrfSpec, b: int, key: SkeKey | None = None, m: Bits | None = None) -> Bits:
    """
    Data input for F[ct]. A missing key or message is encoded as zeros with its
    validity bit cleared.
    """
    layout = FLayout(prf.key_bits, prf.output_bits)
    if b not in (0, 1):
        raise ValueError(f"selector must be 0 or 1, got {b}")
    if m is not None and len(m) != layout.width:
        raise BitLengthError(f"message has {len(m)} bits, F[ct] carries {layout.width}")
    k = key.k if key is not None else Bits.zeros(layout.key_bits)
    otp = key.otp if key is not None else Bits.zeros(layout.width)
    return (
        Bits(b, 1)
        + Bits(int(key is not None), 1)
        + k
        + otp
        + Bits(int(m is not None), 1)
        + (m if m is not None else Bits.zeros(layout.width))
    )


def evaluate_f(prf: PrfSpec, ct_bits: Bits, x: Bits) -> Bits:
    """F[ct](b, K, m): m when b = 1, otherwise SKE.Dec(K, ct)."""
    layout = FLayout(prf.key_bits, prf.output_bits)
    if len(ct_bits) != f_desc_bits(prf) or len(x) != layout.data_bits:
        raise BitLengthError("F[ct] input widths do not match the PRF")
    b, _, k, otp, _, m = layout.split(x)
    if b.value:
        return m
    r, c2 = ct_bits.split(prf.input_bits, prf.output_bits)
    return ske_decrypt(prf, SkeKey(k, otp), ClassicalCiphertext(r, c2))


def _estimated_gates(prf: TablePrf) -> int:
    lam, ell, w = prf.key_bits, prf.input_bits, prf.output_bits
    selectors = 2 * (lam << lam) + 2 * (ell << ell) + (1 << (lam + ell))
    ones = sum(bin(v).count("1") for row in prf.table for v in row)
    return selectors + ones + lam + ell + 6 * w + 2


def build_f_circuit(prf: PrfSpec) -> BooleanCircuit:
    """
    F[ct] as a circuit universal in ct. PRF_K(r) is a multiplexer over the
    table: output bit j is the XOR of the (K = k and r = x) indicators of every
    table entry with bit j set.
    """
    if not isinstance(prf, TablePrf):
        raise UsageError(f"F[ct] circuits need a table PRF, got {prf.kind!r}")
    if _estimated_gates(prf) > settings.CIRCUIT_GATE_BUDGET:
        raise BudgetExceeded(
            f"F[ct] needs about {_estimated_gates(prf)} gates, budget is {settings.CIRCUIT_GATE_BUDGET}"
        )

    lam, ell, w = prf.key_bits, prf.input_bits, prf.output_bits
    layout = FLayout(lam, w)
    cb = CircuitBuilder(f_desc_bits(prf), layout.data_bits)

    r = [cb.desc(i) for i in range(ell)]
    c2 = [cb.desc(ell + i) for i in range(w)]
    b = cb.data(0)
    k = [cb.data(2 + i) for i in range(lam)]
    otp = [cb.data(2 + lam + i) for i in range(w)]
    m = [cb.data(3 + lam + w + i) for i in range(w)]

    key_is = [cb.equals_const(k, kv) for kv in range(1 << lam)]
    input_is = [cb.equals_const(r, xv) for xv in range(1 << ell)]
    hits = {
        (kv, xv): cb.and_(key_is[kv], input_is[xv])
        for kv in range(1 << lam)
        for xv in range(1 << ell)
    }

    outputs = []
    for j in range(w):
        shift = w - 1 - j
        prf_bit = cb.xor_all(
            [hits[kv, xv] for (kv, xv) in hits if (prf.table[kv][xv] >> shift) & 1]
        )
        dec_bit = cb.xor(cb.xor(c2[j], prf_bit), otp[j])
        outputs.append(cb.mux(b, dec_bit, m[j]))
    return cb.build(outputs)
