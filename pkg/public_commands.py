import numpy as np

from models.bits import Bits
from models.fe import FeFunctionKeyRecord, FeKeyRecord
from models.hybrid import PubHybridCiphertext
from models.run_config import RunConfig
from services.conjugate_ue import ciphertext_from_dump, ciphertext_to_dump
from services.experiment_setup import public_params
from services.json_files import read_json, write_json
from services.prf import prf_from_description
from services.public_ue import PublicUeParams, pub_decrypt, pub_encrypt, pub_setup
from services.quantum_core import family_from_id
from services.single_key_fe import (
    ciphertext_from_bytes,
    ciphertext_to_bytes,
    function_key_from_record,
    function_key_to_record,
    mpk_from_record,
    mpk_to_record,
)


def _params(data: dict, backend) -> PublicUeParams:
    n = int(data["n"])
    return PublicUeParams(n, family_from_id(data["family_id"], n), prf_from_description(data["prf"]), backend)


def keygen(config: RunConfig):
    params = public_params(config)
    keys = pub_setup(params, np.random.default_rng(config.seed))
    shared = {"n": params.n, "family_id": params.family.family_id, "prf": params.prf.describe()}

    pk_path = write_json(config.output + ".pk.json", {**shared, "mpk": mpk_to_record(keys.pk).model_dump()})
    sk_path = write_json(
        config.output + ".sk.json",
        {**shared, "trojan_ct": keys.trojan_ct.to_hex(), "sk": function_key_to_record(keys.sk).model_dump()},
    )
    print(f"✓ Public key saved to {pk_path}")
    print(f"✓ Secret key (embedded ct={keys.trojan_ct}) saved to {sk_path}")


def encrypt(pk_file: str, message: str, seed: int, output: str, backend):
    data = read_json(pk_file)
    params = _params(data, backend)
    mpk = mpk_from_record(FeKeyRecord.model_validate(data["mpk"]))
    hct = pub_encrypt(params, mpk, Bits.from_str(message), np.random.default_rng(seed))
    path = write_json(output, {"ct1": ciphertext_to_bytes(hct.ct1).hex(), "ct2": ciphertext_to_dump(hct.ct2)})
    print(f"✓ Hybrid ciphertext saved to {path}")


def decrypt(sk_file: str, ciphertext_file: str, seed: int):
    data = read_json(sk_file)
    params = _params(data, None)
    sk = function_key_from_record(FeFunctionKeyRecord.model_validate(data["sk"]))
    ct = read_json(ciphertext_file)
    hct = PubHybridCiphertext(ciphertext_from_bytes(bytes.fromhex(ct["ct1"])), ciphertext_from_dump(ct["ct2"]))
    m = pub_decrypt(params, sk, hct, np.random.default_rng(seed))
    print(f"➤ {m}")
    return m


def run(action: str, config: RunConfig, args):
    print("--- Public-Key UE ---")
    if action == "keygen":
        keygen(config)
    elif action == "encrypt":
        encrypt(args.key, args.message, args.seed, args.output, config.fe_backend)
    else:
        return decrypt(args.key, args.ciphertext, args.seed)
