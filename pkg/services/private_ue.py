from dataclasses import dataclass
from typing import Any, Callable, Iterator, Literal, NamedTuple

import numpy as np
from tqdm import tqdm

from models.adversary import AdversaryView, CloningAdversary, CoinSpace
from models.bits import Bits
from models.errors import BitLengthError, KeyDecodeError, UsageError
from models.hybrid import HybridCiphertext
from models.otue import OtueKey
from models.quantum import BasisFamily
from models.report import ExperimentReport, IndReport
from models.settings import settings
from models.ske import SkeKey
from services.cloning_harness import (
    Cell,
    run_experiment,
    wilson_half_width,
)
from services.conjugate_ue import all_keys, ciphertext_vector, otue_decrypt_sample, otue_encrypt, otue_setup
from services.fakekey_ske import fake_gen, ske_decrypt, ske_encrypt, ske_setup
from services.prf import PrfSpec


class OtueKeyEncoding:
    """
    theta as a big-endian integer over ceil(log2 |Theta|) bits, then r, then
    zero padding up to `width`.
    """

    def __init__(self, family: BasisFamily, width: int | None = None) -> None:
        self.family = family
        self.theta_bits = (family.size - 1).bit_length()
        self.needed = self.theta_bits + family.n
        self.width = self.needed if width is None else width
        if self.width < self.needed:
            raise BitLengthError(f"encoding needs {self.needed} bits, width is {self.width}")

    def encode(self, key: OtueKey) -> Bits:
        return (Bits(key.theta, self.theta_bits) + key.r).pad_to(self.width)

    def decode(self, bits: Bits) -> OtueKey:
        if len(bits) != self.width:
            raise KeyDecodeError(f"encoded key has {len(bits)} bits, expected {self.width}")
        theta, r, padding = bits.split(self.theta_bits, self.family.n, self.width - self.needed)
        if theta.value >= self.family.size:
            raise KeyDecodeError(f"basis index {theta.value} outside a family of {self.family.size}")
        if padding.value:
            raise KeyDecodeError("non-zero padding in encoded key")
        return OtueKey(theta.value, r, self.family)


@dataclass(frozen=True, eq=False)
class PrivateUeParams:
    n: int
    family: BasisFamily
    prf: PrfSpec

    def __post_init__(self) -> None:
        # raises if the SKE plaintext is too narrow for a one-time key
        OtueKeyEncoding(self.family, self.prf.output_bits)

    @property
    def encoding(self) -> OtueKeyEncoding:
        return OtueKeyEncoding(self.family, self.prf.output_bits)


def pue_setup(params: PrivateUeParams, rng: np.random.Generator) -> SkeKey:
    return ske_setup(params.prf, rng)


def pue_encrypt(
    params: PrivateUeParams, key: SkeKey, m: Bits, rng: np.random.Generator
) -> HybridCiphertext:
    if len(m) != params.n:
        raise BitLengthError(f"message has {len(m)} bits, scheme has n={params.n}")
    k_ue = otue_setup(params.n, params.family, rng)
    ct1 = ske_encrypt(params.prf, key, params.encoding.encode(k_ue), rng)
    return HybridCiphertext(ct1, otue_encrypt(k_ue, m))


def pue_decrypt(
    params: PrivateUeParams, key: SkeKey, hct: HybridCiphertext, rng: np.random.Generator
) -> Bits:
    k_ue = params.encoding.decode(ske_decrypt(params.prf, key, hct.ct1))
    return otue_decrypt_sample(k_ue, hct.ct2, rng)


class PrivateHybridScheme:
    """
    Cloning experiment on the composed scheme.
    Hybrid 1: ct1 = SKE.Enc(key, enc(k_UE)), the real key is revealed.
    Hybrid 2: ct1 = SKE.Enc(key, 0), FakeGen(ct1, enc(k_UE)) is revealed.
    """

    def __init__(self, params: PrivateUeParams, variant: Literal[1, 2]) -> None:
        if variant not in (1, 2):
            raise ValueError(f"private hybrids are 1 and 2, got {variant}")
        self.params = params
        self.variant = variant
        self.n = params.n
        self.name = f"private-h{variant}"

    def cell_count(self) -> int:
        prf = self.params.prf
        bits = prf.key_bits + prf.output_bits + prf.input_bits + 2 * self.n
        if self.variant == 2:
            bits += prf.key_bits
        return self.params.family.size << bits

    def _cell(self, key: SkeKey, k_ue: OtueKey, m: Bits, r: Bits, k_prime: Bits | None) -> Cell:
        prf = self.params.prf
        encoded = self.params.encoding.encode(k_ue)
        if self.variant == 1:
            ct1 = ske_encrypt(prf, key, encoded, r=r)
            revealed = key
        else:
            ct1 = ske_encrypt(prf, key, Bits.zeros(prf.output_bits), r=r)
            revealed = fake_gen(prf, ct1, encoded, k_prime=k_prime)
        return Cell(revealed, ct1, ciphertext_vector(k_ue, m), m.value)

    def cells(self) -> Iterator[Cell]:
        prf = self.params.prf
        primes = list(Bits.enumerate(prf.key_bits)) if self.variant == 2 else [None]
        for k in Bits.enumerate(prf.key_bits):
            for otp in Bits.enumerate(prf.output_bits):
                key = SkeKey(k, otp)
                for k_ue in all_keys(self.params.family):
                    for m in Bits.enumerate(self.n):
                        for r in Bits.enumerate(prf.input_bits):
                            for k_prime in primes:
                                yield self._cell(key, k_ue, m, r, k_prime)

    def sample_cell(self, rng: np.random.Generator) -> Cell:
        prf = self.params.prf
        key = ske_setup(prf, rng)
        k_ue = otue_setup(self.n, self.params.family, rng)
        m = Bits.random(self.n, rng)
        r = Bits.random(prf.input_bits, rng)
        k_prime = Bits.random(prf.key_bits, rng) if self.variant == 2 else None
        return self._cell(key, k_ue, m, r, k_prime)


def lift_private_adversary(adv: CloningAdversary, params: PrivateUeParams) -> CloningAdversary:
    """
    Run a one-time-UE adversary against the composed scheme: in phase 2 each
    party decrypts ct1 with the revealed SKE key to recover k_UE.
    """

    def recover(view: AdversaryView) -> AdversaryView:
        k_ue = params.encoding.decode(ske_decrypt(params.prf, view.key, view.classical))
        return AdversaryView(k_ue, None, view.coin)

    return CloningAdversary(
        adv.split,
        adv.dim_b,
        adv.dim_c,
        lambda view: adv.bob_povm(recover(view)),
        lambda view: adv.charlie_povm(recover(view)),
        adv.coins,
        adv.name,
    )


def pue_hybrid_experiment(
    variant: Literal[1, 2],
    adv: CloningAdversary,
    params: PrivateUeParams,
    mode: Literal["exact", "monte_carlo"] = "exact",
    trials: int | None = None,
    seed: int | None = None,
) -> ExperimentReport:
    """`adv` acts on the composed scheme (views carry the SKE key and ct1)."""
    return run_experiment(PrivateHybridScheme(params, variant), adv, mode, trials, seed)


def _reduction_coins(params: PrivateUeParams) -> CoinSpace:
    prf = params.prf
    bits = 2 * prf.key_bits + prf.output_bits + prf.input_bits
    enumerable = bits <= settings.EXACT_BUDGET_LOG2

    def items():
        for k in Bits.enumerate(prf.key_bits):
            for otp in Bits.enumerate(prf.output_bits):
                for r in Bits.enumerate(prf.input_bits):
                    for k_prime in Bits.enumerate(prf.key_bits):
                        yield (SkeKey(k, otp), r, k_prime)

    def sample(rng):
        return (ske_setup(prf, rng), Bits.random(prf.input_bits, rng), Bits.random(prf.key_bits, rng))

    return CoinSpace(1 << bits if enumerable else None, items, sample)


def pue_reduction_to_otue(adv: CloningAdversary, params: PrivateUeParams) -> CloningAdversary:
    """
    Wrap a composed-scheme adversary into one against bare conjugate UE. The
    shared coin (SKE key, SKE randomness r, FakeGen randomness k') fixes
    ct0 = SKE.Enc(key, 0; r); in phase 2 both parties compute
    fk = FakeGen(ct0, enc(k_UE); k') and hand (fk, ct0) to the inner parties.
    """
    if adv.coins.size != 1:
        raise UsageError("reductions wrap adversaries without shared coins of their own")
    prf = params.prf
    zero = Bits.zeros(prf.output_bits)

    def inner_view(view: AdversaryView) -> AdversaryView:
        ske_key, r, k_prime = view.coin
        ct0 = ske_encrypt(prf, ske_key, zero, r=r)
        fk = fake_gen(prf, ct0, params.encoding.encode(view.key), k_prime=k_prime)
        return AdversaryView(fk, ct0, None)

    return CloningAdversary(
        adv.split,
        adv.dim_b,
        adv.dim_c,
        lambda view: adv.bob_povm(inner_view(view)),
        lambda view: adv.charlie_povm(inner_view(view)),
        _reduction_coins(params),
        f"reduced-{adv.name}",
    )


class IndScheme(NamedTuple):
    setup: Callable[[np.random.Generator], Any]
    encrypt: Callable[[Any, Bits, np.random.Generator], Any]


Distinguisher = Callable[[list, np.random.Generator, Any], int]


def private_ind_scheme(params: PrivateUeParams) -> IndScheme:
    return IndScheme(
        lambda rng: pue_setup(params, rng),
        lambda key, m, rng: pue_encrypt(params, key, m, rng),
    )


def ind_experiment(
    scheme: IndScheme,
    distinguisher: Distinguisher,
    message_pairs: list[tuple[Bits, Bits]],
    trials: int,
    seed: int,
    distinguisher_gets_key: bool = False,
) -> IndReport:
    """
    Semantic-security game over q-tuples: a fresh key per trial, a hidden bit b,
    the distinguisher sees Enc(k, m_1^(b)), ..., Enc(k, m_q^(b)) and guesses b.
    Advantage is 2 Pr[correct] - 1. Handing the key to the distinguisher is
    only meaningful as a sanity upper bound.
    """
    q = len(message_pairs)
    if q < 1:
        raise ValueError("need at least one message pair")
    for m0, m1 in message_pairs:
        if len(m0) != len(m1):
            raise BitLengthError("message pairs must have equal lengths")

    correct = 0
    for t in tqdm(range(trials), desc="IND trials", leave=False):
        rng = np.random.default_rng([seed, t])
        key = scheme.setup(rng)
        b = int(rng.integers(2))
        cts = [scheme.encrypt(key, pair[b], rng) for pair in message_pairs]
        guess = distinguisher(cts, rng, key if distinguisher_gets_key else None)
        correct += int(guess == b)

    return IndReport(
        advantage=2 * correct / trials - 1,
        trials=trials,
        q=q,
        seed=seed,
        half_width=2 * wilson_half_width(correct, trials),
    )
