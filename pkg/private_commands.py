import numpy as np

from models.bits import Bits
from models.ske import CiphertextRecord, SkeKeyRecord
from models.hybrid import HybridCiphertext
from models.run_config import RunConfig
from services.conjugate_ue import ciphertext_from_dump, ciphertext_to_dump
from services.experiment_setup import private_params
from services.fakekey_ske import ciphertext_from_record, ciphertext_to_record, key_from_record, key_to_record
from services.json_files import read_json, write_json
from services.prf import prf_from_description
from services.private_ue import PrivateUeParams, pue_decrypt, pue_encrypt, pue_setup
from services.quantum_core import family_from_id


def _load_key(key_file: str):
    data = read_json(key_file)
    n = int(data["n"])
    params = PrivateUeParams(n, family_from_id(data["family_id"], n), prf_from_description(data["prf"]))
    return params, key_from_record(SkeKeyRecord.model_validate(data["key"]))


def keygen(config: RunConfig):
    params = private_params(config)
    key = pue_setup(params, np.random.default_rng(config.seed))
    data = {
        "n": params.n,
        "family_id": params.family.family_id,
        "prf": params.prf.describe(),
        "key": key_to_record(params.prf, key).model_dump(by_alias=True),
    }
    path = write_json(config.output, data)
    print(f"✓ SKE key (lambda={params.prf.key_bits}, ell={params.prf.input_bits}) saved to {path}")


def encrypt(key_file: str, message: str, seed: int, output: str):
    params, key = _load_key(key_file)
    hct = pue_encrypt(params, key, Bits.from_str(message), np.random.default_rng(seed))
    data = {"ct1": ciphertext_to_record(hct.ct1).model_dump(), "ct2": ciphertext_to_dump(hct.ct2)}
    path = write_json(output, data)
    print(f"✓ Hybrid ciphertext saved to {path}")


def decrypt(key_file: str, ciphertext_file: str, seed: int):
    params, key = _load_key(key_file)
    data = read_json(ciphertext_file)
    hct = HybridCiphertext(
        ciphertext_from_record(params.prf, CiphertextRecord.model_validate(data["ct1"])),
        ciphertext_from_dump(data["ct2"]),
    )
    m = pue_decrypt(params, key, hct, np.random.default_rng(seed))
    print(f"➤ {m}")
    return m


def run(action: str, config: RunConfig, args):
    print("--- Private-Key UE ---")
    if action == "keygen":
        keygen(config)
    elif action == "encrypt":
        encrypt(args.key, args.message, args.seed, args.output)
    else:
        return decrypt(args.key, args.ciphertext, args.seed)
