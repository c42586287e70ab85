import numpy as np

from models.bits import Bits
from models.errors import BitLengthError, DimensionMismatch
from models.otue import OtueKey, OtueKeyRecord, QuantumCiphertext
from models.quantum import BasisFamily, DensityMatrix, Povm
from services.quantum_core import dump_matrix, family_from_id, load_matrix, povm_probabilities


def otue_setup(n: int, family: BasisFamily, rng: np.random.Generator) -> OtueKey:
    if family.n != n:
        raise DimensionMismatch(f"family is on {family.n} qubits, scheme has n={n}")
    theta = int(rng.integers(family.size))
    return OtueKey(theta, Bits.random(n, rng), family)


def all_keys(family: BasisFamily):
    for theta in family.thetas:
        for r in Bits.enumerate(family.n):
            yield OtueKey(theta, r, family)


def ciphertext_vector(key: OtueKey, m: Bits) -> np.ndarray:
    """Column (m xor r) of the key's basis."""
    if len(m) != key.n:
        raise BitLengthError(f"message has {len(m)} bits, key has n={key.n}")
    return key.family.matrix(key.theta)[:, (m ^ key.r).value].astype(complex)


def otue_encrypt(key: OtueKey, m: Bits) -> QuantumCiphertext:
    return QuantumCiphertext(DensityMatrix.from_pure(ciphertext_vector(key, m)), key.n)


def otue_decryption_povm(key: OtueKey) -> Povm:
    """Element m is the projector on |psi^theta_{m xor r}>."""
    basis = key.family.matrix(key.theta)
    r = key.r.value
    order = [m ^ r for m in range(1 << key.n)]
    return Povm.projective(basis[:, order])


def otue_decrypt_distribution(key: OtueKey, ct: QuantumCiphertext) -> np.ndarray:
    if ct.state.dim != key.family.dim:
        raise DimensionMismatch(f"ciphertext dim {ct.state.dim}, key expects {key.family.dim}")
    return povm_probabilities(otue_decryption_povm(key), ct.state)


def otue_decrypt_sample(
    key: OtueKey, ct: QuantumCiphertext, rng: np.random.Generator
) -> Bits:
    probs = otue_decrypt_distribution(key, ct)
    return Bits(int(rng.choice(len(probs), p=probs / probs.sum())), key.n)


def average_ciphertext(n: int, family: BasisFamily, m: Bits) -> DensityMatrix:
    if family.n != n or len(m) != n:
        raise DimensionMismatch(f"n={n} does not match family n={family.n} / |m|={len(m)}")
    total = np.zeros((family.dim, family.dim), dtype=complex)
    for key in all_keys(family):
        vec = ciphertext_vector(key, m)
        total += np.outer(vec, vec.conj())
    avg = total / (family.size << n)
    return DensityMatrix((avg + avg.conj().T) / 2)


def key_to_record(key: OtueKey) -> OtueKeyRecord:
    return OtueKeyRecord(theta=key.theta, r=key.r.to_hex(), n=key.n, family_id=key.family.family_id)


def key_from_record(record: OtueKeyRecord) -> OtueKey:
    family = family_from_id(record.family_id, record.n)
    return OtueKey(record.theta, Bits.from_hex(record.r, record.n), family)


def ciphertext_to_dump(ct: QuantumCiphertext) -> dict:
    """Debug dump only; a real quantum ciphertext cannot be written down."""
    return {"n": ct.n, "state": dump_matrix(ct.state.entries)}


def ciphertext_from_dump(data: dict) -> QuantumCiphertext:
    return QuantumCiphertext(DensityMatrix(load_matrix(data["state"])), int(data["n"]))
