import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from models.errors import PkeDecryptionError
from models.fe import PkeCiphertext
from models.settings import settings as lab_settings
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


def test_noise_stays_below_quarter_modulus():
    worst = lab_settings.PKE_SAMPLES * lab_settings.PKE_NOISE_ETA
    assert worst < lab_settings.PKE_MODULUS / 4


@settings(max_examples=25, deadline=None)
@given(st.binary(min_size=0, max_size=32), st.integers(min_value=0, max_value=2**32 - 1))
def test_roundtrip(data, seed):
    rng = np.random.default_rng(seed)
    pk, sk = pke_keygen(rng)
    ct = pke_encrypt(pk, bytes_to_bits(data), rng)
    assert bits_to_bytes(pke_decrypt(sk, ct)) == data


def test_wrong_key_does_not_decrypt():
    rng = np.random.default_rng(1)
    pk, _ = pke_keygen(rng)
    _, other = pke_keygen(rng)
    bits = bytes_to_bits(bytes(range(16)))
    assert pke_decrypt(other, pke_encrypt(pk, bits, rng)) != bits


def test_malformed_ciphertexts_are_rejected():
    rng = np.random.default_rng(2)
    pk, sk = pke_keygen(rng)
    ct = pke_encrypt(pk, bytes_to_bits(b"\x0f"), rng)
    with pytest.raises(PkeDecryptionError):
        pke_decrypt(sk, PkeCiphertext(ct.u[:, :-1], ct.v))
    with pytest.raises(PkeDecryptionError):
        pke_decrypt(sk, PkeCiphertext(ct.u, ct.v[:-1]))
    with pytest.raises(PkeDecryptionError):
        pke_decrypt(sk, PkeCiphertext(ct.u, ct.v + pk.modulus))


def test_key_records_reload():
    rng = np.random.default_rng(3)
    pk, sk = pke_keygen(rng)
    pk2 = public_key_from_record(public_key_to_record(pk))
    sk2 = secret_key_from_record(secret_key_to_record(sk))
    assert np.array_equal(pk2.a, pk.a) and np.array_equal(pk2.b, pk.b)
    assert np.array_equal(sk2.s, sk.s)

    bits = bytes_to_bits(b"uncloneable")
    assert pke_decrypt(sk2, pke_encrypt(pk2, bits, rng)) == bits


def test_truncated_record_is_rejected():
    record = secret_key_to_record(pke_keygen(np.random.default_rng(4))[1])
    with pytest.raises(PkeDecryptionError):
        secret_key_from_record(record.model_copy(update={"s": record.s[:-3]}))
