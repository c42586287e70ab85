"""
Regev-style bit encryption with bounded noise.

With s uniform, noise from a centered binomial of parameter eta and a subset
sum over `samples` rows, |noise| <= samples * eta < q / 4, so decryption never
fails. This is a correctness vehicle, not a secure parameter set.
"""

import numpy as np

from models.bits import Bits
from models.errors import PkeDecryptionError
from models.fe import PkeCiphertext, PkeKeyRecord, PkePublicKey, PkeSecretKey
from models.settings import settings


def _noise(rng: np.random.Generator, eta: int, size: int) -> np.ndarray:
    return rng.binomial(2 * eta, 0.5, size=size) - eta


def pke_keygen(rng: np.random.Generator) -> tuple[PkePublicKey, PkeSecretKey]:
    q = settings.PKE_MODULUS
    s = rng.integers(q, size=settings.PKE_DIMENSION)
    a = rng.integers(q, size=(settings.PKE_SAMPLES, settings.PKE_DIMENSION))
    b = (a @ s + _noise(rng, settings.PKE_NOISE_ETA, settings.PKE_SAMPLES)) % q
    return PkePublicKey(a, b, q), PkeSecretKey(s, q)


def pke_encrypt(pk: PkePublicKey, bits: Bits, rng: np.random.Generator) -> PkeCiphertext:
    q = pk.modulus
    subsets = rng.integers(2, size=(len(bits), pk.a.shape[0]))
    u = (subsets @ pk.a) % q
    v = (subsets @ pk.b + np.array(bits.bits, dtype=np.int64) * (q // 2)) % q
    return PkeCiphertext(u, v)


def pke_decrypt(sk: PkeSecretKey, ct: PkeCiphertext) -> Bits:
    q = sk.modulus
    u, v = np.asarray(ct.u), np.asarray(ct.v)
    if u.ndim != 2 or u.shape[1] != sk.s.shape[0] or v.shape != (u.shape[0],):
        raise PkeDecryptionError(f"ciphertext shapes {u.shape}/{v.shape} do not fit the key")
    if (u < 0).any() or (u >= q).any() or (v < 0).any() or (v >= q).any():
        raise PkeDecryptionError("ciphertext entries outside [0, q)")
    diff = (v - u @ sk.s) % q
    return Bits.from_bits((diff > q // 4) & (diff < 3 * q // 4))


def bytes_to_bits(data: bytes) -> Bits:
    return Bits(int.from_bytes(data, "big"), 8 * len(data))


def bits_to_bytes(bits: Bits) -> bytes:
    return bits.value.to_bytes(len(bits) // 8, "big")


def _hex_array(values: np.ndarray, modulus: int) -> str:
    width = max(1, ((modulus - 1).bit_length() + 3) // 4)
    return "".join(format(int(v), f"0{width}x") for v in np.ravel(values))


def _array_from_hex(text: str, modulus: int, shape: tuple[int, ...]) -> np.ndarray:
    width = max(1, ((modulus - 1).bit_length() + 3) // 4)
    values = [int(text[i : i + width], 16) for i in range(0, len(text), width)]
    if len(values) != int(np.prod(shape)):
        raise PkeDecryptionError(f"hex field holds {len(values)} entries, expected shape {shape}")
    return np.array(values, dtype=np.int64).reshape(shape)


def public_key_to_record(pk: PkePublicKey) -> PkeKeyRecord:
    samples, dimension = pk.a.shape
    return PkeKeyRecord(
        modulus=pk.modulus, samples=samples, dimension=dimension,
        a=_hex_array(pk.a, pk.modulus), b=_hex_array(pk.b, pk.modulus),
    )


def public_key_from_record(record: PkeKeyRecord) -> PkePublicKey:
    q = record.modulus
    return PkePublicKey(
        _array_from_hex(record.a, q, (record.samples, record.dimension)),
        _array_from_hex(record.b, q, (record.samples,)),
        q,
    )


def secret_key_to_record(sk: PkeSecretKey) -> PkeKeyRecord:
    return PkeKeyRecord(
        modulus=sk.modulus, samples=0, dimension=sk.s.shape[0], s=_hex_array(sk.s, sk.modulus)
    )


def secret_key_from_record(record: PkeKeyRecord) -> PkeSecretKey:
    return PkeSecretKey(_array_from_hex(record.s, record.modulus, (record.dimension,)), record.modulus)
