from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterator, Literal

import numpy as np
from tqdm import tqdm

from models.adversary import AdversaryView, CloningAdversary, CoinSpace
from models.bits import Bits
from models.circuit import BooleanCircuit
from models.errors import BitLengthError, UsageError
from models.fe import FeCiphertext, FeFunctionKey, FeMasterPublicKey
from models.hybrid import PubHybridCiphertext, PubUeKeys
from models.otue import OtueKey
from models.quantum import BasisFamily
from models.report import ExperimentReport
from models.settings import settings
from models.ske import SkeKey
from services.circuits import build_f_circuit, evaluate_circuit, f_desc_bits, f_inputs
from services.cloning_harness import Cell, run_experiment
from services.conjugate_ue import all_keys, ciphertext_vector, otue_decrypt_sample, otue_encrypt, otue_setup
from services.fakekey_ske import ske_encrypt, ske_setup
from services.prf import TablePrf
from services.private_ue import OtueKeyEncoding
from services.single_key_fe import Backend, fe_decrypt, fe_encrypt, fe_keygen, fe_setup


@dataclass(frozen=True, eq=False)
class PublicUeParams:
    """
    The embedded ciphertext has the SKE ciphertext length L = ell + w, so that
    a real SKE ciphertext can replace it bit for bit.
    """

    n: int
    family: BasisFamily
    prf: TablePrf
    backend: Backend | None = None

    def __post_init__(self) -> None:
        OtueKeyEncoding(self.family, self.prf.output_bits)

    @property
    def encoding(self) -> OtueKeyEncoding:
        return OtueKeyEncoding(self.family, self.prf.output_bits)

    @property
    def desc_bits(self) -> int:
        return f_desc_bits(self.prf)

    @cached_property
    def circuit(self) -> BooleanCircuit:
        return build_f_circuit(self.prf)


def pub_setup(params: PublicUeParams, rng: np.random.Generator) -> PubUeKeys:
    mpk, msk = fe_setup(params.desc_bits, rng)
    trojan_ct = Bits.random(params.desc_bits, rng)
    # msk goes out of scope here
    return PubUeKeys(mpk, fe_keygen(msk, trojan_ct), trojan_ct)


def pub_encrypt(
    params: PublicUeParams, pk: FeMasterPublicKey, m: Bits, rng: np.random.Generator
) -> PubHybridCiphertext:
    if len(m) != params.n:
        raise BitLengthError(f"message has {len(m)} bits, scheme has n={params.n}")
    k_ue = otue_setup(params.n, params.family, rng)
    x = f_inputs(params.prf, 1, m=params.encoding.encode(k_ue))
    ct1 = fe_encrypt(pk, x, params.circuit, rng, params.backend)
    return PubHybridCiphertext(ct1, otue_encrypt(k_ue, m))


def recover_k_ue(params: PublicUeParams, sk: FeFunctionKey, ct1: FeCiphertext) -> OtueKey:
    return params.encoding.decode(fe_decrypt(sk, ct1))


def pub_decrypt(
    params: PublicUeParams, sk: FeFunctionKey, hct: PubHybridCiphertext, rng: np.random.Generator
) -> Bits:
    return otue_decrypt_sample(recover_k_ue(params, sk, hct.ct1), hct.ct2, rng)


def outputs_over_descriptions(params: PublicUeParams, x: Bits) -> set[Bits]:
    """Plain F-circuit outputs on data `x` for every possible embedded ciphertext."""
    return {evaluate_circuit(params.circuit, d, x) for d in Bits.enumerate(params.desc_bits)}


class PublicHybridScheme:
    """
    Hybrid 1: the real scheme, embedded ciphertext uniform.
    Hybrid 2: embedded ciphertext = SKE.Enc(k_SKE, enc(k_UE)).
    Hybrid 3: as 2, and ct1 encrypts (0, k_SKE, -) instead of (1, -, enc(k_UE)).
    Each cell runs its own FE setup; `fe_seed` fixes those coins for enumeration.
    """

    def __init__(self, params: PublicUeParams, variant: Literal[1, 2, 3], fe_seed: int = 0) -> None:
        if variant not in (1, 2, 3):
            raise ValueError(f"public hybrids are 1, 2 and 3, got {variant}")
        self.params = params
        self.variant = variant
        self.fe_seed = fe_seed
        self.n = params.n
        self.name = f"public-h{variant}"

    def _coin_bits(self) -> int:
        prf = self.params.prf
        if self.variant == 1:
            return self.params.desc_bits
        return prf.key_bits + prf.output_bits + prf.input_bits

    def cell_count(self) -> int:
        return self.params.family.size << (2 * self.n + self._coin_bits())

    def _cell(
        self,
        k_ue: OtueKey,
        m: Bits,
        rng: np.random.Generator,
        trojan: Bits | None = None,
        ske_key: SkeKey | None = None,
        r: Bits | None = None,
    ) -> Cell:
        params = self.params
        encoded = params.encoding.encode(k_ue)
        mpk, msk = fe_setup(params.desc_bits, rng)
        if self.variant != 1:
            trojan = ske_encrypt(params.prf, ske_key, encoded, r=r).to_bits()
        sk = fe_keygen(msk, trojan)
        if self.variant == 3:
            x = f_inputs(params.prf, 0, key=ske_key)
        else:
            x = f_inputs(params.prf, 1, m=encoded)
        ct1 = fe_encrypt(mpk, x, params.circuit, rng, params.backend)
        return Cell(sk, ct1, ciphertext_vector(k_ue, m), m.value)

    def cells(self) -> Iterator[Cell]:
        prf = self.params.prf
        rng = np.random.default_rng(self.fe_seed)
        for k_ue in all_keys(self.params.family):
            for m in Bits.enumerate(self.n):
                if self.variant == 1:
                    for trojan in Bits.enumerate(self.params.desc_bits):
                        yield self._cell(k_ue, m, rng, trojan=trojan)
                    continue
                for k in Bits.enumerate(prf.key_bits):
                    for otp in Bits.enumerate(prf.output_bits):
                        for r in Bits.enumerate(prf.input_bits):
                            yield self._cell(k_ue, m, rng, ske_key=SkeKey(k, otp), r=r)

    def sample_cell(self, rng: np.random.Generator) -> Cell:
        prf = self.params.prf
        k_ue = otue_setup(self.n, self.params.family, rng)
        m = Bits.random(self.n, rng)
        if self.variant == 1:
            return self._cell(k_ue, m, rng, trojan=Bits.random(self.params.desc_bits, rng))
        return self._cell(
            k_ue, m, rng, ske_key=ske_setup(prf, rng), r=Bits.random(prf.input_bits, rng)
        )


def lift_public_adversary(adv: CloningAdversary, params: PublicUeParams) -> CloningAdversary:
    """One-time-UE adversary whose parties FE-decrypt ct1 with the revealed key."""

    def recover(view: AdversaryView) -> AdversaryView:
        return AdversaryView(recover_k_ue(params, view.key, view.classical), None, view.coin)

    return CloningAdversary(
        adv.split,
        adv.dim_b,
        adv.dim_c,
        lambda view: adv.bob_povm(recover(view)),
        lambda view: adv.charlie_povm(recover(view)),
        adv.coins,
        adv.name,
    )


def pub_hybrid_experiment(
    variant: Literal[1, 2, 3],
    adv: CloningAdversary,
    params: PublicUeParams,
    mode: Literal["exact", "monte_carlo"] = "exact",
    trials: int | None = None,
    seed: int | None = None,
    fe_seed: int = 0,
) -> ExperimentReport:
    return run_experiment(PublicHybridScheme(params, variant, fe_seed), adv, mode, trials, seed)


class PublicReduction:
    """
    Phase-1 state of the reduction, rebuilt deterministically from the shared
    coin (k_SKE, r, fe_seed): the FE keys come from fe_seed, so B and C derive
    bit-identical secret keys without exchanging msk.
    """

    def __init__(self, params: PublicUeParams) -> None:
        self.params = params
        self.classical_part = lru_cache(maxsize=4096)(self._classical_part)
        self.derive_key = lru_cache(maxsize=4096)(self._derive_key)

    def _classical_part(self, coin: tuple[SkeKey, Bits, int]) -> FeCiphertext:
        ske_key, _, fe_seed = coin
        rng = np.random.default_rng(fe_seed)
        mpk, _ = fe_setup(self.params.desc_bits, rng)
        x = f_inputs(self.params.prf, 0, key=ske_key)
        return fe_encrypt(mpk, x, self.params.circuit, rng, self.params.backend)

    def _derive_key(self, coin: tuple[SkeKey, Bits, int], k_ue: OtueKey) -> FeFunctionKey:
        ske_key, r, fe_seed = coin
        _, msk = fe_setup(self.params.desc_bits, np.random.default_rng(fe_seed))
        ct = ske_encrypt(self.params.prf, ske_key, self.params.encoding.encode(k_ue), r=r)
        return fe_keygen(msk, ct.to_bits())

    def coins(self) -> CoinSpace:
        prf = self.params.prf
        bits = prf.key_bits + prf.output_bits + prf.input_bits

        def items():
            for k in Bits.enumerate(prf.key_bits):
                for otp in Bits.enumerate(prf.output_bits):
                    for r in Bits.enumerate(prf.input_bits):
                        yield (SkeKey(k, otp), r, 0)

        def sample(rng):
            return (ske_setup(prf, rng), Bits.random(prf.input_bits, rng), int(rng.integers(2**63)))

        size = 1 << bits if bits <= settings.EXACT_BUDGET_LOG2 else None
        return CoinSpace(size, items, sample)

    def inner_view(self, view: AdversaryView) -> AdversaryView:
        return AdversaryView(self.derive_key(view.coin, view.key), self.classical_part(view.coin), None)


def pub_reduction_to_otue(adv: CloningAdversary, params: PublicUeParams) -> CloningAdversary:
    """Wrap a public-scheme adversary into one against bare conjugate UE, simulating Hybrid 3."""
    if adv.coins.size != 1:
        raise UsageError("reductions wrap adversaries without shared coins of their own")
    reduction = PublicReduction(params)
    return CloningAdversary(
        adv.split,
        adv.dim_b,
        adv.dim_c,
        lambda view: adv.bob_povm(reduction.inner_view(view)),
        lambda view: adv.charlie_povm(reduction.inner_view(view)),
        reduction.coins(),
        f"reduced-{adv.name}",
    )


def trojan_equivalence_failures(params: PublicUeParams, seed: int) -> int:
    """
    For every SKE key, SKE randomness and embedded value v, the key issued for
    ct = SKE.Enc(k_SKE, v; r) must decrypt both FE.Enc(1, -, v) and
    FE.Enc(0, k_SKE, -) to v. Returns the number of mismatches.
    """
    prf = params.prf
    rng = np.random.default_rng(seed)
    failures = 0
    cases = [
        (SkeKey(k, otp), r, v)
        for k in Bits.enumerate(prf.key_bits)
        for otp in Bits.enumerate(prf.output_bits)
        for r in Bits.enumerate(prf.input_bits)
        for v in Bits.enumerate(prf.output_bits)
    ]
    for ske_key, r, v in tqdm(cases, desc="Trojan equivalence", leave=False):
        mpk, msk = fe_setup(params.desc_bits, rng)
        sk = fe_keygen(msk, ske_encrypt(prf, ske_key, v, r=r).to_bits())
        real = fe_encrypt(mpk, f_inputs(prf, 1, m=v), params.circuit, rng, params.backend)
        trojan = fe_encrypt(mpk, f_inputs(prf, 0, key=ske_key), params.circuit, rng, params.backend)
        if not fe_decrypt(sk, real) == fe_decrypt(sk, trojan) == v:
            failures += 1
    return failures
