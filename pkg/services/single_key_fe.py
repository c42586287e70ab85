import struct
from concurrent.futures import ThreadPoolExecutor
from typing import Literal

import numpy as np
from tqdm import tqdm

from models.bits import Bits
from models.circuit import BooleanCircuit, GarbledCircuit, Gate
from models.errors import BitLengthError, GarbledEvaluationError, InvariantViolation
from models.fe import (
    FeCiphertext,
    FeFunctionKey,
    FeFunctionKeyRecord,
    FeKeyRecord,
    FeMasterPublicKey,
    FeMasterSecretKey,
    GarbledFeCiphertext,
    PkeCiphertext,
    ReferenceFeCiphertext,
)
from models.settings import settings
from services.circuits import evaluate_circuit
from services.garbling import eval_garbled, garble
from services.toy_pke import (
    bits_to_bytes,
    bytes_to_bits,
    pke_decrypt,
    pke_encrypt,
    pke_keygen,
    public_key_from_record,
    public_key_to_record,
    secret_key_from_record,
    secret_key_to_record,
)

Backend = Literal["garbled", "reference"]


def _child_rngs(rng: np.random.Generator, count: int) -> list[np.random.Generator]:
    return [np.random.default_rng(int(s)) for s in rng.integers(2**63, size=count)]


def _ordered_map(fn, *iterables) -> list:
    with ThreadPoolExecutor(max_workers=settings.MAX_WORKERS) as executor:
        return list(executor.map(fn, *iterables))


def fe_setup(desc_bits: int, rng: np.random.Generator) -> tuple[FeMasterPublicKey, FeMasterSecretKey]:
    if desc_bits < 1:
        raise BitLengthError("FE needs a description length L >= 1")
    pairs = _ordered_map(pke_keygen, _child_rngs(rng, 2 * desc_bits))
    pks = tuple((pairs[2 * i][0], pairs[2 * i + 1][0]) for i in range(desc_bits))
    sks = tuple((pairs[2 * i][1], pairs[2 * i + 1][1]) for i in range(desc_bits))
    return FeMasterPublicKey(pks), FeMasterSecretKey(sks)


def fe_keygen(msk: FeMasterSecretKey, d: Bits) -> FeFunctionKey:
    msk.claim(d)
    return FeFunctionKey(d, tuple(msk.sks[i][bit] for i, bit in enumerate(d.bits)))


def fe_encrypt(
    mpk: FeMasterPublicKey,
    x: Bits,
    circuit: BooleanCircuit,
    rng: np.random.Generator,
    backend: Backend | None = None,
) -> FeCiphertext:
    """
    Garbles U(., x) with x hardwired: the data-wire labels for x travel in the
    clear, and both labels of description wire i are encrypted under
    pk_(i,0) and pk_(i,1).
    """
    backend = backend or settings.FE_BACKEND
    if circuit.desc_bits != mpk.desc_bits:
        raise BitLengthError(f"circuit reads {circuit.desc_bits} description bits, mpk has L={mpk.desc_bits}")
    if len(x) != circuit.data_bits:
        raise BitLengthError(f"data has {len(x)} bits, circuit expects {circuit.data_bits}")
    if backend == "reference":
        return ReferenceFeCiphertext(circuit, x)

    gc, labels = garble(circuit, rng)
    L = circuit.desc_bits
    data_labels = tuple(labels[L + j][bit] for j, bit in enumerate(x.bits))

    jobs = [(mpk.pks[i][b], bytes_to_bits(labels[i][b])) for i in range(L) for b in (0, 1)]
    cts = _ordered_map(
        lambda job, child: pke_encrypt(job[0], job[1], child), jobs, _child_rngs(rng, len(jobs))
    )
    label_cts = tuple((cts[2 * i], cts[2 * i + 1]) for i in range(L))
    return GarbledFeCiphertext(gc, data_labels, label_cts)


def fe_decrypt(sk: FeFunctionKey, ct: FeCiphertext) -> Bits:
    if isinstance(ct, ReferenceFeCiphertext):
        return evaluate_circuit(ct.circuit, sk.description, ct.data)

    L = len(sk.description)
    if len(ct.label_cts) != L:
        raise BitLengthError(f"ciphertext has {len(ct.label_cts)} label slots, key has L={L}")
    if len(ct.garbled.tables) != len(ct.garbled.circuit.gates):
        raise GarbledEvaluationError("gate-table count does not match the circuit")
    desc_labels = [
        bits_to_bytes(pke_decrypt(sk.sks[i], ct.label_cts[i][bit]))
        for i, bit in enumerate(sk.description.bits)
    ]
    return eval_garbled(ct.garbled, desc_labels + list(ct.data_labels))


# --- serialization ------------------------------------------------------------


def mpk_to_record(mpk: FeMasterPublicKey) -> FeKeyRecord:
    return FeKeyRecord(
        desc_bits=mpk.desc_bits,
        slots=[(public_key_to_record(p0), public_key_to_record(p1)) for p0, p1 in mpk.pks],
    )


def mpk_from_record(record: FeKeyRecord) -> FeMasterPublicKey:
    return FeMasterPublicKey(
        tuple((public_key_from_record(r0), public_key_from_record(r1)) for r0, r1 in record.slots)
    )


def msk_to_record(msk: FeMasterSecretKey) -> FeKeyRecord:
    return FeKeyRecord(
        desc_bits=msk.desc_bits,
        slots=[(secret_key_to_record(s0), secret_key_to_record(s1)) for s0, s1 in msk.sks],
    )


def msk_from_record(record: FeKeyRecord) -> FeMasterSecretKey:
    return FeMasterSecretKey(
        tuple((secret_key_from_record(r0), secret_key_from_record(r1)) for r0, r1 in record.slots)
    )


def function_key_to_record(sk: FeFunctionKey) -> FeFunctionKeyRecord:
    return FeFunctionKeyRecord(
        description=sk.description.to_hex(),
        desc_bits=len(sk.description),
        sks=[secret_key_to_record(s) for s in sk.sks],
    )


def function_key_from_record(record: FeFunctionKeyRecord) -> FeFunctionKey:
    return FeFunctionKey(
        Bits.from_hex(record.description, record.desc_bits),
        tuple(secret_key_from_record(r) for r in record.sks),
    )


# Container layout, little-endian:
#   header   "UFEC" | version u8 | kind u8 | L u32 | W u32 | gates u32 | outputs u32
#            | label_bytes u16 | pke_dimension u16
#   circuit  per gate (op u8, a u32, b u32 with 0xffffffff for NOT), then outputs u32
#   reference: data bits, ceil(W / 8) bytes
#   garbled: 2L label blocks (u as u16[bits x dim], v as u16[bits]) ordered (i, b),
#            W data labels, gate-table block (rows u8, rows x 2*label_bytes),
#            output map (2 labels per output)

_MAGIC = b"UFEC"
_VERSION = 1
_HEADER = struct.Struct("<4sBBIIIIHH")
_GATE = struct.Struct("<BII")
_OPS = ("AND", "XOR", "NOT")
_NO_WIRE = 0xFFFFFFFF


def ciphertext_to_bytes(ct: FeCiphertext) -> bytes:
    circuit = ct.circuit if isinstance(ct, ReferenceFeCiphertext) else ct.garbled.circuit
    reference = isinstance(ct, ReferenceFeCiphertext)
    dimension = 0 if reference or not ct.label_cts else ct.label_cts[0][0].u.shape[1]
    parts = [
        _HEADER.pack(
            _MAGIC, _VERSION, int(reference), circuit.desc_bits, circuit.data_bits,
            len(circuit.gates), len(circuit.outputs), settings.LABEL_BYTES, dimension,
        )
    ]
    for gate in circuit.gates:
        parts.append(_GATE.pack(_OPS.index(gate.op), gate.a, _NO_WIRE if gate.b is None else gate.b))
    parts.append(struct.pack(f"<{len(circuit.outputs)}I", *circuit.outputs))

    if reference:
        parts.append(ct.data.value.to_bytes((circuit.data_bits + 7) // 8, "big"))
        return b"".join(parts)

    for pair in ct.label_cts:
        for pke_ct in pair:
            parts.append(np.asarray(pke_ct.u, dtype="<u2").tobytes())
            parts.append(np.asarray(pke_ct.v, dtype="<u2").tobytes())
    parts.extend(ct.data_labels)
    for rows in ct.garbled.tables:
        parts.append(struct.pack("<B", len(rows)))
        parts.extend(rows)
    for zero, one in ct.garbled.output_labels:
        parts.extend((zero, one))
    return b"".join(parts)


class _Reader:
    def __init__(self, data: bytes) -> None:
        self.data = data
        self.offset = 0

    def take(self, size: int) -> bytes:
        if self.offset + size > len(self.data):
            raise InvariantViolation("FE ciphertext container is truncated")
        chunk = self.data[self.offset : self.offset + size]
        self.offset += size
        return chunk

    def unpack(self, fmt: struct.Struct) -> tuple:
        return fmt.unpack(self.take(fmt.size))


def ciphertext_from_bytes(data: bytes) -> FeCiphertext:
    reader = _Reader(data)
    magic, version, reference, L, W, gate_count, output_count, label_bytes, dimension = reader.unpack(_HEADER)
    if magic != _MAGIC or version != _VERSION:
        raise InvariantViolation("not an FE ciphertext container")

    gates = []
    for _ in range(gate_count):
        op, a, b = reader.unpack(_GATE)
        if op >= len(_OPS):
            raise InvariantViolation(f"unknown gate opcode {op}")
        gates.append(Gate(_OPS[op], a, None if b == _NO_WIRE else b))
    outputs = struct.unpack(f"<{output_count}I", reader.take(4 * output_count))
    circuit = BooleanCircuit(L, W, tuple(gates), tuple(outputs))

    if reference:
        data_bits = Bits(int.from_bytes(reader.take((W + 7) // 8), "big"), W)
        ct: FeCiphertext = ReferenceFeCiphertext(circuit, data_bits)
    else:
        rows = 8 * label_bytes

        def pke_block() -> PkeCiphertext:
            u = np.frombuffer(reader.take(2 * rows * dimension), dtype="<u2").astype(np.int64)
            v = np.frombuffer(reader.take(2 * rows), dtype="<u2").astype(np.int64)
            return PkeCiphertext(u.reshape(rows, dimension), v)

        label_cts = tuple((pke_block(), pke_block()) for _ in range(L))
        data_labels = tuple(reader.take(label_bytes) for _ in range(W))
        tables = []
        for _ in range(gate_count):
            (count,) = reader.unpack(struct.Struct("<B"))
            tables.append(tuple(reader.take(2 * label_bytes) for _ in range(count)))
        output_labels = tuple(
            (reader.take(label_bytes), reader.take(label_bytes)) for _ in range(output_count)
        )
        ct = GarbledFeCiphertext(GarbledCircuit(circuit, tuple(tables), output_labels), data_labels, label_cts)

    if reader.offset != len(data):
        raise InvariantViolation("trailing bytes after FE ciphertext container")
    return ct


def fe_pipeline_failures(
    circuit: BooleanCircuit, trials: int, seed: int, backend: Backend | None = None
) -> int:
    """Random (d, x) end to end; counts decryptions that differ from plain evaluation."""
    failures = 0
    for t in tqdm(range(trials), desc="FE trials", leave=False):
        rng = np.random.default_rng([seed, t])
        d = Bits.random(circuit.desc_bits, rng)
        x = Bits.random(circuit.data_bits, rng)
        mpk, msk = fe_setup(circuit.desc_bits, rng)
        ct = fe_encrypt(mpk, x, circuit, rng, backend)
        if fe_decrypt(fe_keygen(msk, d), ct) != evaluate_circuit(circuit, d, x):
            failures += 1
    return failures
