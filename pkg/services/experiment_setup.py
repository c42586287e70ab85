import numpy as np

from models.adversary import CloningAdversary
from models.errors import UsageError
from models.quantum import BasisFamily
from models.report import ExperimentReport
from models.run_config import RunConfig
from services.cloner_attacks import build_cloner_adversary, load_custom_adversary, trivial_adversary
from services.prf import HashPrf, PrfSpec, TablePrf
from services.private_ue import OtueKeyEncoding, PrivateUeParams
from services.public_ue import PublicUeParams
from services.quantum_core import family_from_id
from services.report_io import emit_table


def family_for(config: RunConfig) -> BasisFamily:
    return family_from_id(config.family, config.n)


def prf_for(config: RunConfig, family: BasisFamily) -> PrfSpec:
    width = config.width or OtueKeyEncoding(family).needed
    if config.prf == "keyed-hash":
        return HashPrf(config.key_bits, config.input_bits, width)
    rng = np.random.default_rng(config.prf_seed)
    return TablePrf.random(config.key_bits, config.input_bits, width, rng)


def private_params(config: RunConfig) -> PrivateUeParams:
    family = family_for(config)
    return PrivateUeParams(config.n, family, prf_for(config, family))


def public_params(config: RunConfig) -> PublicUeParams:
    if config.prf != "table":
        raise UsageError("the public scheme needs --prf table (its F circuit multiplexes the table)")
    family = family_for(config)
    return PublicUeParams(config.n, family, prf_for(config, family), config.fe_backend)


def adversary_for(config: RunConfig) -> CloningAdversary:
    if config.adversary == "trivial":
        return trivial_adversary(config.n)
    if config.adversary == "cloner":
        return build_cloner_adversary(config.n)
    return load_custom_adversary(config.adversary_file, config.n)


def print_report(report: ExperimentReport) -> None:
    line = f"➤ {report.scheme:<12} {report.adversary:<16} n={report.n} success={report.success_probability:.9f}"
    if report.half_width is not None:
        line += f" ±{report.half_width:.6f}"
    if report.implied_t is not None:
        line += f" implied_t={report.implied_t:.6f}"
    print(line)


def write_reports(config: RunConfig, reports: list[ExperimentReport]) -> None:
    if config.output:
        path = emit_table(reports, config.output, config.format)
        print(f"✓ Saved {len(reports)} rows to {path}")
