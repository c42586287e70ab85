import numpy as np

from models.bits import Bits
from models.otue import OtueKeyRecord
from services.conjugate_ue import (
    ciphertext_from_dump,
    ciphertext_to_dump,
    key_from_record,
    key_to_record,
    otue_decrypt_sample,
    otue_encrypt,
    otue_setup,
)
from services.json_files import read_json, write_json
from services.quantum_core import family_from_id


def keygen(n: int, family_id: str, seed: int, output: str):
    key = otue_setup(n, family_from_id(family_id, n), np.random.default_rng(seed))
    path = write_json(output, key_to_record(key).model_dump())
    print(f"✓ One-time key (theta={key.theta}, r={key.r}) saved to {path}")


def encrypt(key_file: str, message: str, output: str):
    key = key_from_record(OtueKeyRecord.model_validate(read_json(key_file)))
    ct = otue_encrypt(key, Bits.from_str(message))
    path = write_json(output, ciphertext_to_dump(ct))
    print(f"✓ Ciphertext state (debug dump) saved to {path}")


def decrypt(key_file: str, ciphertext_file: str, seed: int):
    key = key_from_record(OtueKeyRecord.model_validate(read_json(key_file)))
    ct = ciphertext_from_dump(read_json(ciphertext_file))
    m = otue_decrypt_sample(key, ct, np.random.default_rng(seed))
    print(f"➤ {m}")
    return m


def run(action: str, args):
    print("--- Conjugate One-Time UE ---")
    if action == "keygen":
        keygen(args.n, args.family, args.seed, args.output)
    elif action == "encrypt":
        encrypt(args.key, args.message, args.output)
    else:
        return decrypt(args.key, args.ciphertext, args.seed)
