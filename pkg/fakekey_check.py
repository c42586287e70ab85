import numpy as np

from models.bits import Bits
from models.errors import InvariantViolation
from services.fakekey_ske import fakekey_tvd_bruteforce
from services.prf import HashPrf, PrfSpec, TablePrf


def build_prf(kind: str, lam: int, ell: int, n: int, seed: int) -> PrfSpec:
    if kind == "random":
        return TablePrf.random(lam, ell, n, np.random.default_rng(seed))
    if kind == "constant":
        return TablePrf.constant(lam, ell, n)
    if kind == "key-xor-input":
        return TablePrf.key_xor_input(lam, ell, n)
    return HashPrf(lam, ell, n)


def run(lam: int, ell: int, n: int, table: str, seed: int):
    print("--- Fake-Key Property Check ---")
    prf = build_prf(table, lam, ell, n, seed)
    print(f"- PRF {prf.kind} lambda={lam} ell={ell} n={n}")

    worst = 0
    for m in Bits.enumerate(n):
        tvd = fakekey_tvd_bruteforce(prf, m)
        print(f"{'✓' if tvd == 0 else '✗'} m={m} TVD={tvd}")
        worst = max(worst, tvd)

    print(f"➤ max TVD = {worst}")
    if worst != 0:
        raise InvariantViolation(f"fake keys are distinguishable from real keys (TVD {worst})")
    return worst
