from collections import Counter
from fractions import Fraction
from typing import Callable

import numpy as np

from models.bits import Bits
from models.errors import BitLengthError, BudgetExceeded
from models.settings import settings
from models.ske import ClassicalCiphertext, CiphertextRecord, SkeKey, SkeKeyRecord
from services.prf import PrfSpec


def ske_setup(prf: PrfSpec, rng: np.random.Generator) -> SkeKey:
    return SkeKey(Bits.random(prf.key_bits, rng), Bits.random(prf.output_bits, rng), "real")


def _check_key(prf: PrfSpec, key: SkeKey) -> None:
    if len(key.k) != prf.key_bits or len(key.otp) != prf.output_bits:
        raise BitLengthError("SKE key widths do not match the PRF")


def ske_encrypt(
    prf: PrfSpec,
    key: SkeKey,
    m: Bits,
    rng: np.random.Generator | None = None,
    r: Bits | None = None,
) -> ClassicalCiphertext:
    """(r, PRF_k(r) xor m xor otp); `r` may be passed explicitly instead of sampled."""
    _check_key(prf, key)
    if len(m) != prf.output_bits:
        raise BitLengthError(f"message has {len(m)} bits, SKE plaintexts have {prf.output_bits}")
    if r is None:
        r = Bits.random(prf.input_bits, rng)
    return ClassicalCiphertext(r, prf.evaluate(key.k, r) ^ m ^ key.otp)


def ske_decrypt(prf: PrfSpec, key: SkeKey, ct: ClassicalCiphertext) -> Bits:
    _check_key(prf, key)
    if len(ct.r) != prf.input_bits or len(ct.c2) != prf.output_bits:
        raise BitLengthError("ciphertext widths do not match the PRF")
    return ct.c2 ^ prf.evaluate(key.k, ct.r) ^ key.otp


def fake_gen(
    prf: PrfSpec,
    ct0: ClassicalCiphertext,
    m: Bits,
    rng: np.random.Generator | None = None,
    k_prime: Bits | None = None,
) -> SkeKey:
    """Fresh k', and otp' chosen so that ct0 decrypts to m."""
    if len(m) != prf.output_bits:
        raise BitLengthError(f"message has {len(m)} bits, SKE plaintexts have {prf.output_bits}")
    if k_prime is None:
        k_prime = Bits.random(prf.key_bits, rng)
    otp = ct0.c2 ^ prf.evaluate(k_prime, ct0.r) ^ m
    return SkeKey(k_prime, otp, "fake")


FakeGenerator = Callable[[PrfSpec, ClassicalCiphertext, Bits, Bits], SkeKey]


def _fake_gen_with_coins(prf, ct0, m, k_prime):
    return fake_gen(prf, ct0, m, k_prime=k_prime)


def fakekey_tvd_bruteforce(
    prf: PrfSpec, m: Bits, generator: FakeGenerator = _fake_gen_with_coins
) -> Fraction:
    """
    Exact total-variation distance between {(Enc(key, m), key)} and
    {(Enc(key, 0), FakeGen(Enc(key, 0), m))}, enumerating every coin.
    """
    lam, ell, n = prf.key_bits, prf.input_bits, prf.output_bits
    if lam + ell + n + lam > settings.FAKEKEY_BUDGET_LOG2:
        raise BudgetExceeded(
            f"fake-key enumeration needs 2^{lam + ell + n + lam} cells, budget is 2^{settings.FAKEKEY_BUDGET_LOG2}"
        )

    real: Counter = Counter()
    fake: Counter = Counter()
    zero = Bits.zeros(n)
    for k in Bits.enumerate(lam):
        for otp in Bits.enumerate(n):
            key = SkeKey(k, otp)
            for r in Bits.enumerate(ell):
                ct = ske_encrypt(prf, key, m, r=r)
                real[(ct.r, ct.c2, k, otp)] += 1

                ct0 = ske_encrypt(prf, key, zero, r=r)
                for k_prime in Bits.enumerate(lam):
                    fk = generator(prf, ct0, m, k_prime)
                    fake[(ct0.r, ct0.c2, fk.k, fk.otp)] += 1

    # real has 2^lam times fewer cells than fake; compare integer counts on a common scale
    scale = 1 << lam
    total = sum(fake.values())
    diff = sum(abs(real[o] * scale - fake[o]) for o in set(real) | set(fake))
    return Fraction(diff, 2 * total)


def key_to_record(prf: PrfSpec, key: SkeKey) -> SkeKeyRecord:
    return SkeKeyRecord(
        k=key.k.to_hex(), otp=key.otp.to_hex(),
        lambda_=prf.key_bits, ell=prf.input_bits, n=prf.output_bits,
    )


def key_from_record(record: SkeKeyRecord) -> SkeKey:
    return SkeKey(Bits.from_hex(record.k, record.lambda_), Bits.from_hex(record.otp, record.n))


def ciphertext_to_record(ct: ClassicalCiphertext) -> CiphertextRecord:
    return CiphertextRecord(r=ct.r.to_hex(), c2=ct.c2.to_hex())


def ciphertext_from_record(prf: PrfSpec, record: CiphertextRecord) -> ClassicalCiphertext:
    return ClassicalCiphertext(
        Bits.from_hex(record.r, prf.input_bits), Bits.from_hex(record.c2, prf.output_bits)
    )
