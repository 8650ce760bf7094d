"""Command-line front end.

Subcommands:

    simulate     send the instance states through a network, emit output states
    condition    conditional state and weight after a photon-number outcome
    check        run the instance strategy, emit the discrimination verdict
    verify-nogo  seeded randomized verification of the transfer identity
    oracle-check seeded cross-check against the dense Fock reference

Reports are JSON (stdout or --out); summaries go to stderr.  Exit codes:
0 success, 1 failed verification suite, 2 schema error, 3 numeric validation
error (non-unitary network), 4 size or photon-cap violation.
"""

from __future__ import annotations

import argparse
import json
import sys

from .discriminate import DiscriminationInstance, cascade_discrimination, stage_orthogonality
from .errors import (
    FockCascadeError,
    PhotonCapError,
    SchemaError,
    StrategyError,
    UnitarityViolation,
)
from .instancefile import load_instance
from .measurement import condition
from .modes import DEFAULT_PHOTON_CAP
from .network import identity, substitute
from .suites import SuiteCapError, run_nogo_suite, run_oracle_suite

SCHEMA_VERSION = "1"

EXIT_OK = 0
EXIT_SUITE_FAILED = 1
EXIT_SCHEMA = 2
EXIT_NUMERIC = 3
EXIT_CAPS = 4


def _emit(report: dict, out_path: str | None) -> None:
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _cmd_simulate(args) -> int:
    instance = load_instance(
        args.instance, photon_cap=args.photon_cap, unitarity_tol=args.tolerance
    )
    net = instance.network(args.network)
    outputs = [substitute(instance.aux * psi, net) for psi in instance.states]
    _emit(
        {
            "schema_version": SCHEMA_VERSION,
            "command": "simulate",
            "output_states": [p.to_dict() for p in outputs],
        },
        args.out,
    )
    return EXIT_OK


def _cmd_condition(args) -> int:
    instance = load_instance(
        args.instance, photon_cap=args.photon_cap, unitarity_tol=args.tolerance
    )
    measured = args.measure or instance.measure
    if measured is None:
        raise SchemaError("no measured mode: pass --measure or set 'measure'")
    if measured not in instance.registry:
        raise SchemaError(f"measured mode {measured!r} not in instance modes")
    net = instance.network(args.network) if instance.networks else identity(instance.registry)
    conditionals = []
    for psi in instance.states:
        total = substitute(instance.aux * psi, net)
        cond = condition(total, measured, args.outcome)
        conditionals.append(
            {
                "outcome": cond.outcome,
                "weight": float(f"{cond.weight:.12g}"),
                "state": cond.state.to_dict(),
            }
        )
    _emit(
        {
            "schema_version": SCHEMA_VERSION,
            "command": "condition",
            "measured": measured,
            "conditionals": conditionals,
        },
        args.out,
    )
    return EXIT_OK


def _cmd_check(args) -> int:
    instance = load_instance(
        args.instance, photon_cap=args.photon_cap, unitarity_tol=args.tolerance
    )
    if instance.strategy is None:
        raise SchemaError("instance has no 'strategy' to check")
    disc = DiscriminationInstance(
        states=instance.states, aux=instance.aux, strategy=instance.strategy
    )
    root = instance.strategy
    root_net = root.network if root.network is not None else identity(instance.registry)
    stage = stage_orthogonality(disc, root_net, root.measure)
    cascade = cascade_discrimination(disc)
    _emit(
        {
            "schema_version": SCHEMA_VERSION,
            "command": "check",
            "verdict": cascade.verdict,
            "cascade": cascade.to_dict(),
            "root_stage": stage.to_dict(),
        },
        args.out,
    )
    return EXIT_OK


def _cmd_verify_nogo(args) -> int:
    result = run_nogo_suite(
        count=args.count,
        seed=args.seed,
        max_system_modes=args.max_system_modes,
        max_aux_modes=args.max_aux_modes,
        max_photons=args.max_photons,
        max_aux_photons=args.max_aux_photons,
        corruption=args.inject_corruption,
    )
    _emit(result.to_dict(), args.out)
    print(result.summary(), file=sys.stderr)
    return EXIT_OK if result.all_passed else EXIT_SUITE_FAILED


def _cmd_oracle_check(args) -> int:
    result = run_oracle_suite(
        count=args.count,
        seed=args.seed,
        max_modes=args.max_modes,
        max_photons=args.max_photons,
    )
    _emit(result.to_dict(), args.out)
    print(result.summary(), file=sys.stderr)
    return EXIT_OK if result.all_passed else EXIT_SUITE_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fockcascade",
        description="Linear-optical simulation, conditional measurement, and "
        "auxiliary-photon no-go verification.",
    )
    parser.add_argument(
        "--photon-cap", type=int, default=DEFAULT_PHOTON_CAP,
        help="per-mode occupation cap (default %(default)s)",
    )
    parser.add_argument(
        "--tolerance", type=float, default=1e-10,
        help="unitarity tolerance for loaded networks (default %(default)s)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="send instance states through a network")
    p.add_argument("instance")
    p.add_argument("--network", default=None, help="named network to use")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("condition", help="conditional state after an outcome")
    p.add_argument("instance")
    p.add_argument("--outcome", type=int, required=True, help="photon count N")
    p.add_argument("--measure", default=None, help="measured mode label")
    p.add_argument("--network", default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_condition)

    p = sub.add_parser("check", help="full-cascade discrimination verdict")
    p.add_argument("instance")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("verify-nogo", help="randomized transfer-identity suite")
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--max-system-modes", type=int, default=3)
    p.add_argument("--max-aux-modes", type=int, default=2)
    p.add_argument("--max-photons", type=int, default=3)
    p.add_argument("--max-aux-photons", type=int, default=2)
    p.add_argument(
        "--inject-corruption", type=float, default=0.0, help=argparse.SUPPRESS
    )
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_verify_nogo)

    p = sub.add_parser("oracle-check", help="dense Fock-space cross-check suite")
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=11)
    p.add_argument("--max-modes", type=int, default=4)
    p.add_argument("--max-photons", type=int, default=4)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_oracle_check)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (SchemaError, StrategyError, ValueError) as exc:
        if isinstance(exc, SuiteCapError):
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_CAPS
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except UnitarityViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except PhotonCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPS
    except FockCascadeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA


if __name__ == "__main__":
    sys.exit(main())
