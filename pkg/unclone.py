import argparse
import sys

from colorama import Fore, Style, init
from pydantic import ValidationError

import attack_clone
import attack_reduce
import fakekey_check
import fe_demo
import moe_commands
import otue_commands
import private_commands
import public_commands
import report_table
from models.errors import BudgetExceeded, UsageError
from models.run_config import RunConfig
from models.settings import settings

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_BUDGET = 3
EXIT_INVARIANT = 4


def add_experiment_args(p: argparse.ArgumentParser):
    p.add_argument("--n", type=int, default=1, help="Message length in bits")
    p.add_argument("--family", default="wiesner", help="Basis family: wiesner or haar-<size>-<seed>")
    p.add_argument(
        "--adversary", choices=["trivial", "cloner", "custom-file"], default="cloner", help="Adversary"
    )
    p.add_argument("--adversary-file", type=str, help="JSON adversary for --adversary custom-file")
    p.add_argument("--mode", choices=["exact", "mc"], default="exact", help="Exact enumeration or Monte Carlo")
    p.add_argument("--trials", type=int, help="Monte Carlo trials")
    p.add_argument("--seed", type=int, help="Seed (required for mc)")
    p.add_argument("--output", type=str, help="Path for the report table")
    p.add_argument("--format", choices=["csv", "json"], default="csv", help="Report table format")


def add_ske_args(p: argparse.ArgumentParser):
    p.add_argument("--lambda", dest="key_bits", type=int, default=1, help="PRF key bits")
    p.add_argument("--ell", dest="input_bits", type=int, default=1, help="PRF input bits")
    p.add_argument("--width", type=int, help="SKE plaintext bits (default: the encoded one-time key)")
    p.add_argument("--prf", choices=["table", "keyed-hash"], default="table", help="PRF backend")
    p.add_argument("--prf-seed", type=int, default=0, help="Seed for the random PRF table")
    p.add_argument("--fe-backend", choices=["garbled", "reference"], help="FE backend (default from settings)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="unclone", description="Uncloneable Encryption Lab")
    subparsers = parser.add_subparsers(dest="command", help="Available commands")
    subparsers.required = True

    ue_parser = subparsers.add_parser("ue", help="Key generation, encryption and decryption")
    ue_parser.add_argument("scheme", choices=["otue", "private", "public"])
    ue_parser.add_argument("action", choices=["keygen", "encrypt", "decrypt"])
    ue_parser.add_argument("--n", type=int, default=1, help="Message length in bits")
    ue_parser.add_argument("--family", default="wiesner", help="Basis family id")
    ue_parser.add_argument("--seed", required=True, type=int, help="Seed for keys and measurement")
    ue_parser.add_argument("--key", type=str, help="Key file (public key file for public encrypt)")
    ue_parser.add_argument("--message", type=str, help="Message as a bit string, e.g. 01")
    ue_parser.add_argument("--ciphertext", type=str, help="Ciphertext file")
    ue_parser.add_argument("--output", type=str, help="Path for the output file")
    add_ske_args(ue_parser)

    attack_parser = subparsers.add_parser("attack", help="Cloning experiments")
    attack_sub = attack_parser.add_subparsers(dest="attack", required=True)
    clone_parser = attack_sub.add_parser("clone", help="Attack conjugate one-time UE")
    add_experiment_args(clone_parser)
    reduce_parser = attack_sub.add_parser("reduce", help="Hybrids and reduction for a composed scheme")
    reduce_parser.add_argument("target", choices=["private", "public"])
    add_experiment_args(reduce_parser)
    add_ske_args(reduce_parser)

    moe_parser = subparsers.add_parser("moe", help="Monogamy-of-entanglement games")
    moe_parser.add_argument("action", choices=["value", "optimize"])
    moe_parser.add_argument("--n", type=int, default=1, help="Game order")
    moe_parser.add_argument("--family", default="wiesner", help="Basis family id")
    moe_parser.add_argument("--strategy", choices=["midway", "random"], default="midway")
    moe_parser.add_argument("--dim-b", type=int, default=2)
    moe_parser.add_argument("--dim-c", type=int, default=2)
    moe_parser.add_argument("--iterations", type=int, help="Seesaw iterations (default from settings)")
    moe_parser.add_argument("--restarts", type=int, default=5)
    moe_parser.add_argument("--seed", type=int, default=0)

    fakekey_parser = subparsers.add_parser("fakekey", help="Fake-key property of the SKE")
    fakekey_parser.add_argument("action", choices=["check"])
    fakekey_parser.add_argument("--lambda", dest="key_bits", required=True, type=int)
    fakekey_parser.add_argument("--ell", dest="input_bits", required=True, type=int)
    fakekey_parser.add_argument("--n", required=True, type=int, help="SKE plaintext bits")
    fakekey_parser.add_argument(
        "--table", choices=["random", "constant", "key-xor-input", "keyed-hash"], default="random"
    )
    fakekey_parser.add_argument("--seed", type=int, default=0)

    fe_parser = subparsers.add_parser("fe", help="Single-key FE pipeline")
    fe_parser.add_argument("action", choices=["demo"])
    fe_parser.add_argument("--n", type=int, default=1)
    fe_parser.add_argument("--trials", type=int, default=1000)
    fe_parser.add_argument("--seed", type=int, default=0)
    add_ske_args(fe_parser)

    report_parser = subparsers.add_parser("report", help="Success-probability tables")
    report_parser.add_argument("action", choices=["table"])
    report_parser.add_argument("--n-max", type=int, default=4)
    add_experiment_args(report_parser)

    return parser


def to_config(args: argparse.Namespace) -> RunConfig:
    fields = {
        name: getattr(args, name)
        for name in RunConfig.model_fields
        if name != "command" and getattr(args, name, None) is not None
    }
    if args.command == "ue":
        fields["scheme"] = args.scheme
    if args.command == "attack" and args.attack == "reduce":
        fields["scheme"] = args.target
    return RunConfig(command=args.command, **fields)


def dispatch(args: argparse.Namespace):
    config = to_config(args)

    if args.command == "ue":
        if args.action in ("keygen", "encrypt") and not args.output:
            raise UsageError(f"ue {args.action} needs --output")
        if args.action in ("encrypt", "decrypt") and not args.key:
            raise UsageError(f"ue {args.action} needs --key")
        if args.action == "encrypt" and args.message is None:
            raise UsageError("ue encrypt needs --message")
        if args.action == "decrypt" and not args.ciphertext:
            raise UsageError("ue decrypt needs --ciphertext")
        if args.scheme == "otue":
            return otue_commands.run(args.action, args)
        if args.scheme == "private":
            return private_commands.run(args.action, config, args)
        return public_commands.run(args.action, config, args)
    if args.command == "attack":
        if args.attack == "clone":
            return attack_clone.run(config)
        return attack_reduce.run(args.target, config)
    if args.command == "moe":
        if args.action == "value":
            return moe_commands.run_value(config, args.strategy, args.dim_b, args.dim_c)
        return moe_commands.run_optimize(
            config, args.dim_b, args.dim_c, args.iterations or settings.SEESAW_ITERATIONS, args.restarts
        )
    if args.command == "fakekey":
        return fakekey_check.run(args.key_bits, args.input_bits, args.n, args.table, args.seed)
    if args.command == "fe":
        return fe_demo.run(config)
    return report_table.run(config, args.n_max)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        dispatch(args)
    except (UsageError, ValidationError, FileNotFoundError) as e:
        print(f"[!] Error: {e}")
        return EXIT_USAGE
    except BudgetExceeded as e:
        print(f"[!] Error: {e}")
        return EXIT_BUDGET
    except ValueError as e:
        print(f"[!] Error: {e}")
        return EXIT_INVARIANT
    return EXIT_OK


init(autoreset=True)


def print_banner():
    banner = r"""
   _   _ _  _  ___ _    ___  _  _ ___
  | | | | \| |/ __| |  / _ \| \| | __|
  | |_| | .` | (__| |_| (_) | .` | _|
   \___/|_|\_|\___|____\___/|_|\_|___|
        """
    print(Fore.CYAN + Style.BRIGHT + banner)
    print(
        Fore.CYAN
        + Style.BRIGHT
        + " > "
        + Fore.LIGHTWHITE_EX
        + Style.NORMAL
        + "ONE COPY IN."
        + Fore.CYAN
        + Style.BRIGHT
        + " ONE COPY OUT."
    )
    print("-" * 42)
    print(Style.RESET_ALL, end="")


if __name__ == "__main__":
    status = EXIT_OK
    try:
        print_banner()
        status = main()
    except KeyboardInterrupt:
        pass
    sys.exit(status)
