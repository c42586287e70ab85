from models.errors import InvariantViolation
from models.run_config import RunConfig
from services.experiment_setup import public_params
from services.public_ue import trojan_equivalence_failures
from services.single_key_fe import fe_pipeline_failures


def run(config: RunConfig):
    print("--- Single-Key FE Demo ---")
    params = public_params(config)
    circuit = params.circuit
    backend = params.backend or "settings default"
    print(
        f"- F circuit: L={circuit.desc_bits} W={circuit.data_bits} gates={len(circuit.gates)} backend={backend}"
    )

    seed = config.seed or 0
    failures = fe_pipeline_failures(circuit, config.trials or 1000, seed, params.backend)
    print(f"{'✓' if failures == 0 else '✗'} pipeline: {failures} failures in {config.trials or 1000} trials")

    trojan = trojan_equivalence_failures(params, seed)
    print(f"{'✓' if trojan == 0 else '✗'} Trojan equivalence: {trojan} mismatches")

    if failures or trojan:
        raise InvariantViolation("FE pipeline or Trojan equivalence check failed")
    return failures, trojan
