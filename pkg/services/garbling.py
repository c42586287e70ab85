import numpy as np
from cryptography.hazmat.primitives import hashes
from cryptography.hazmat.primitives.ciphers import Cipher, algorithms, modes

from models.bits import Bits
from models.circuit import BooleanCircuit, GarbledCircuit
from models.errors import BitLengthError, GarbledEvaluationError
from models.settings import settings

LabelPair = tuple[bytes, bytes]


def _row_cipher(keys: tuple[bytes, ...], gate_id: int) -> Cipher:
    """AES-256-CTR keyed by SHA-256 over the input labels; the gate index is the initial counter block."""
    digest = hashes.Hash(hashes.SHA256())
    for key in keys:
        digest.update(key)
    return Cipher(algorithms.AES(digest.finalize()), modes.CTR(gate_id.to_bytes(16, "big")))


def _seal(keys: tuple[bytes, ...], gate_id: int, label: bytes) -> bytes:
    encryptor = _row_cipher(keys, gate_id).encryptor()
    return encryptor.update(label + bytes(settings.LABEL_BYTES)) + encryptor.finalize()


def _open(keys: tuple[bytes, ...], gate_id: int, row: bytes) -> bytes | None:
    decryptor = _row_cipher(keys, gate_id).decryptor()
    plain = decryptor.update(row) + decryptor.finalize()
    label, tag = plain[: settings.LABEL_BYTES], plain[settings.LABEL_BYTES :]
    return label if not any(tag) else None


def garble(circuit: BooleanCircuit, rng: np.random.Generator) -> tuple[GarbledCircuit, list[LabelPair]]:
    """
    Garbles every gate with fresh labels. Returns the garbled circuit and the
    (label for 0, label for 1) pairs of the input wires, description wires first.
    """
    size = settings.LABEL_BYTES
    labels: list[LabelPair] = [(rng.bytes(size), rng.bytes(size)) for _ in range(circuit.wire_count)]

    tables = []
    for i, gate in enumerate(circuit.gates):
        out = labels[circuit.input_count + i]
        if gate.op == "NOT":
            rows = [_seal((labels[gate.a][v],), i, out[1 - v]) for v in (0, 1)]
        else:
            fn = (lambda u, v: u & v) if gate.op == "AND" else (lambda u, v: u ^ v)
            rows = [
                _seal((labels[gate.a][u], labels[gate.b][v]), i, out[fn(u, v)])
                for u in (0, 1)
                for v in (0, 1)
            ]
        order = rng.permutation(len(rows))
        tables.append(tuple(rows[j] for j in order))

    output_labels = tuple(labels[w] for w in circuit.outputs)
    return GarbledCircuit(circuit, tuple(tables), output_labels), labels[: circuit.input_count]


def select_labels(labels: list[LabelPair], d: Bits, x: Bits) -> list[bytes]:
    bits = list(d.bits) + list(x.bits)
    if len(bits) != len(labels):
        raise BitLengthError(f"{len(labels)} input wires, {len(bits)} input bits")
    return [pair[b] for pair, b in zip(labels, bits)]


def eval_garbled(gc: GarbledCircuit, input_labels: list[bytes]) -> Bits:
    circuit = gc.circuit
    if len(input_labels) != circuit.input_count:
        raise GarbledEvaluationError(
            f"expected {circuit.input_count} input labels, got {len(input_labels)}"
        )
    wires = list(input_labels)
    for i, (gate, rows) in enumerate(zip(circuit.gates, gc.tables)):
        keys = (wires[gate.a],) if gate.op == "NOT" else (wires[gate.a], wires[gate.b])
        opened = [label for label in (_open(keys, i, row) for row in rows) if label is not None]
        if len(opened) != 1:
            raise GarbledEvaluationError(f"gate {i}: {len(opened)} rows decrypt, expected exactly one")
        wires.append(opened[0])

    out = []
    for j, (w, pair) in enumerate(zip(circuit.outputs, gc.output_labels)):
        if wires[w] not in pair:
            raise GarbledEvaluationError(f"output {j} carries an unknown label")
        out.append(pair.index(wires[w]))
    return Bits.from_bits(out)
