import math

import numpy as np
import pytest

from models.adversary import AdversaryView, CloningAdversary, CoinSpace
from models.bits import Bits
from models.circuit import GarbledCircuit
from models.errors import GarbledEvaluationError, InvariantViolation, UsageError
from models.fe import FeFunctionKey, GarbledFeCiphertext
from models.hybrid import PubHybridCiphertext, PubUeKeys
from models.run_config import RunConfig
from models.ske import SkeKey
from services.circuits import f_inputs
from services.cloner_attacks import build_cloner_adversary, trivial_adversary
from services.cloning_harness import ConjugateScheme, run_experiment
from services.experiment_setup import public_params
from services.prf import TablePrf
from services.private_ue import OtueKeyEncoding
from services.public_ue import (
    PublicReduction,
    PublicUeParams,
    lift_public_adversary,
    outputs_over_descriptions,
    pub_decrypt,
    pub_encrypt,
    pub_hybrid_experiment,
    pub_reduction_to_otue,
    pub_setup,
    trojan_equivalence_failures,
)
from services.quantum_core import wiesner_family
from services.single_key_fe import fe_decrypt, fe_keygen, fe_setup

P1 = (3 + 2 * math.sqrt(2)) / 8


def _params(backend="garbled", seed=0):
    family = wiesner_family(1)
    prf = TablePrf.random(1, 1, OtueKeyEncoding(family).needed, np.random.default_rng(seed))
    return PublicUeParams(1, family, prf, backend)


@pytest.mark.parametrize("backend", ["garbled", "reference"])
def test_decrypts_to_message(backend):
    params = _params(backend)
    rng = np.random.default_rng(1)
    keys = pub_setup(params, rng)
    for m in Bits.enumerate(1):
        for _ in range(3):
            assert pub_decrypt(params, keys.sk, pub_encrypt(params, keys.pk, m, rng), rng) == m


def test_random_round_trips():
    params = _params("reference", seed=6)
    rng = np.random.default_rng(7)
    keys = pub_setup(params, rng)
    for _ in range(1000):
        m = Bits.random(1, rng)
        assert pub_decrypt(params, keys.sk, pub_encrypt(params, keys.pk, m, rng), rng) == m


def test_secret_key_embeds_its_ciphertext():
    keys = pub_setup(_params(), np.random.default_rng(2))
    assert keys.sk.description == keys.trojan_ct
    assert len(keys.trojan_ct) == _params().desc_bits == 3
    with pytest.raises(InvariantViolation):
        PubUeKeys(keys.pk, FeFunctionKey(keys.trojan_ct ^ Bits(1, 3), keys.sk.sks), keys.trojan_ct)


def test_embedded_ciphertext_has_no_influence_on_real_encryptions():
    params = _params()
    for v in Bits.enumerate(params.prf.output_bits):
        assert outputs_over_descriptions(params, f_inputs(params.prf, 1, m=v)) == {v}


def test_trojan_equivalence():
    assert trojan_equivalence_failures(_params(), seed=3) == 0
    assert trojan_equivalence_failures(_params("reference"), seed=3) == 0


@pytest.mark.parametrize("backend", ["garbled", "reference"])
def test_hybrids_and_reduction_agree(backend):
    params = _params(backend)
    lifted = lift_public_adversary(build_cloner_adversary(1), params)
    h1, h2, h3 = (pub_hybrid_experiment(v, lifted, params) for v in (1, 2, 3))
    reduced = run_experiment(ConjugateScheme(1, params.family), pub_reduction_to_otue(lifted, params))

    assert [h.scheme for h in (h1, h2, h3)] == ["public-h1", "public-h2", "public-h3"]
    assert h1.success_probability == h2.success_probability == h3.success_probability
    assert h3.success_probability == reduced.success_probability
    assert reduced.success_probability == pytest.approx(P1, abs=1e-12)


def test_hybrid_monte_carlo():
    params = _params("reference", seed=4)
    lifted = lift_public_adversary(trivial_adversary(1), params)
    report = pub_hybrid_experiment(3, lifted, params, "monte_carlo", trials=300, seed=5)
    assert abs(report.success_probability - 0.5) <= 3 * report.half_width


def test_reduction_derives_identical_keys_for_both_parties():
    params = _params()
    reduction = PublicReduction(params)
    coin = (SkeKey(Bits.from_str("1"), Bits.from_str("01")), Bits.from_str("0"), 12345)
    view = AdversaryView(next(iter(ConjugateScheme(1, params.family).cells())).view_key, None, coin)

    first = reduction.inner_view(view)
    fresh = PublicReduction(params).inner_view(view)
    assert first.key.description == fresh.key.description
    assert all(np.array_equal(a.s, b.s) for a, b in zip(first.key.sks, fresh.key.sks))
    assert params.encoding.decode(fe_decrypt(first.key, first.classical)) == view.key


def test_reduction_refuses_adversaries_with_coins():
    params = _params()
    adv = trivial_adversary(1)
    coined = CloningAdversary(
        adv.split, adv.dim_b, adv.dim_c, adv.bob_povm, adv.charlie_povm,
        CoinSpace(None, lambda: (), lambda rng: 0),
    )
    with pytest.raises(UsageError):
        pub_reduction_to_otue(coined, params)


def test_public_scheme_needs_table_prf():
    with pytest.raises(UsageError):
        public_params(RunConfig(command="attack", prf="keyed-hash"))


def test_key_for_another_embedded_ciphertext_still_decrypts():
    params = _params()
    rng = np.random.default_rng(12)
    for other in Bits.enumerate(params.desc_bits):
        mpk, msk = fe_setup(params.desc_bits, rng)
        sk = fe_keygen(msk, other)
        for m in Bits.enumerate(1):
            assert pub_decrypt(params, sk, pub_encrypt(params, mpk, m, rng), rng) == m


def test_corrupted_fe_ciphertext_is_rejected():
    params = _params()
    rng = np.random.default_rng(13)
    keys = pub_setup(params, rng)
    hct = pub_encrypt(params, keys.pk, Bits.from_str("1"), rng)
    gc = hct.ct1.garbled
    first = tuple(row[:-1] + bytes([row[-1] ^ 1]) for row in gc.tables[0])
    tampered = GarbledFeCiphertext(
        GarbledCircuit(gc.circuit, (first,) + gc.tables[1:], gc.output_labels),
        hct.ct1.data_labels,
        hct.ct1.label_cts,
    )
    with pytest.raises(GarbledEvaluationError):
        pub_decrypt(params, keys.sk, PubHybridCiphertext(tampered, hct.ct2), rng)
