"""
Command line interface. Every subcommand prints one JSON document
``{"status": ..., "payload": ...}`` to stdout; diagnostics go to stderr.

Exit codes:
    0: ok
    1: ``repro`` finished but a criterion failed
    2: invalid input, including usage errors
    3: resource limit exceeded
"""
from __future__ import annotations

import argparse
import logging
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Dict, List, Optional

from . import ahsp, analysis, bounds, probability, serialize
from .base import AbelianGroup, NilpotentProfile, parse_group
from .errors import InvalidInputError, ResourceLimitError
from .helper import fraction_to_json, parse_rational

logger = logging.getLogger(__name__)

STATUS_OK = "ok"
STATUS_INVALID = "invalid-input"
STATUS_LIMIT = "resource-limit"

EXIT_CODES = {STATUS_OK: 0, STATUS_INVALID: 2, STATUS_LIMIT: 3}


@dataclass
class CommandResult:
    """Outcome of one subcommand. ``payload`` is set when the status is ok,
    ``error`` otherwise."""

    status: str
    payload: Optional[dict]
    elapsed_ms: int
    error: Optional[str] = None
    exit_code: int = 0

    def to_json(self) -> dict:
        if self.status == STATUS_OK:
            return {"status": self.status, "payload": self.payload}
        return {"status": self.status, "error": self.error}


def parse_divisors(text: str) -> AbelianGroup:
    """Parses ``"12,2"``; the empty string is the trivial group."""
    parts = [part.strip() for part in text.split(",") if part.strip()]
    try:
        divisors = [int(part) for part in parts]
    except ValueError as e:
        raise InvalidInputError(f"'{text}' is not a list of integers") from e
    return parse_group(divisors)


def cmd_phi(args: argparse.Namespace) -> dict:
    """Exact, simulated or counted ``phi_k`` of a group."""
    group = parse_divisors(args.divisors)
    if args.k < 0:
        raise InvalidInputError("k must be non-negative")
    payload = {"group": serialize.group_to_json(group), "k": args.k}
    if args.monte_carlo:
        estimate = probability.estimate_phi(
            group, args.k, trials=args.trials, seed=args.seed
        )
        payload.update(mode="monte-carlo", estimate=estimate.to_json())
    elif args.brute_force:
        count = probability.count_generating_tuples(
            group, args.k, cap=args.max_tuples
        )
        total = group.order**args.k
        payload.update(
            mode="brute-force",
            count=str(count),
            tuples=str(total),
            value=fraction_to_json(Fraction(count, total)),
        )
    else:
        phi = probability.phi_abelian(group, args.k)
        payload.update(mode="exact", value=fraction_to_json(phi.value))
    return payload


def cmd_bounds(args: argparse.Namespace) -> dict:
    """Bound report of a group or of a nilpotent profile."""
    epsilon = parse_rational(args.epsilon)
    if args.profile is not None:
        profile = NilpotentProfile.from_string(args.profile)
        report = bounds.bound_report(profile, epsilon, exact=args.exact_min_k)
    else:
        group = parse_divisors(args.divisors)
        profile = group.profile
        report = bounds.group_bound_report(
            group, epsilon, exact=args.exact_min_k
        )
    return {
        "profile": ",".join(map(str, profile.entries)),
        "rank": profile.rank,
        "length": profile.length,
        **report.to_json(),
    }


def cmd_tightness(args: argparse.Namespace) -> dict:
    """Tightness witness on ``(Z/2)^n``."""
    epsilon = parse_rational(args.epsilon)
    return bounds.tightness_witness(args.mode, args.n, epsilon).to_json()


def cmd_ahsp(args: argparse.Namespace) -> dict:
    """Plans and simulates the recovery of a hidden subgroup."""
    epsilon = parse_rational(args.epsilon)
    instance = serialize.load_instance(args.instance)
    group, hidden = instance.group, instance.hidden
    plan = ahsp.plan_iterations(
        group, epsilon, hidden_length=hidden.length, strategy=args.strategy
    )
    hperp = ahsp.orthogonal_subgroup(group, hidden)
    result = ahsp.simulate_ahsp(instance, plan, args.trials, args.seed)
    return {
        "instance": serialize.instance_to_json(instance),
        "hidden": serialize.subgroup_to_json(hidden),
        "plan": plan.to_json(),
        "hperp": serialize.subgroup_to_json(hperp),
        "prior_counts": ahsp.prior_iteration_counts(group, epsilon),
        "simulation": result.to_json(),
    }


def cmd_regev(args: argparse.Namespace) -> dict:
    """Circuit repetitions for factoring with ``rank + 2`` samples."""
    if args.n_bits is not None:
        return {"n_bits": args.n_bits, **ahsp.regev_comparison(args.n_bits)}
    if args.rank < 1:
        raise InvalidInputError("rank must be positive")
    return {"rank": args.rank, "repetitions": ahsp.regev_repetitions(args.rank)}


def cmd_repro(args: argparse.Namespace) -> dict:
    """Runs the reproduction suite. Timings are logged, not emitted."""
    scale = "quick" if args.quick else "full"
    table = analysis.run_acceptance(scale=scale, seed=args.seed)
    logger.info("reproduction suite:\n%s", table)
    rows = table.drop(columns=["seconds"]).to_dict("records")
    return {
        "scale": scale,
        "seed": args.seed,
        "rows": serialize.rows_to_json(rows),
        "passed": bool(table["passed"].all()),
    }


COMMANDS: Dict[str, Callable[[argparse.Namespace], dict]] = {
    "phi": cmd_phi,
    "bounds": cmd_bounds,
    "tightness": cmd_tightness,
    "ahsp": cmd_ahsp,
    "regev": cmd_regev,
    "repro": cmd_repro,
}


def execute(args: argparse.Namespace) -> CommandResult:
    """Runs the selected subcommand and maps errors to a status."""
    start = time.perf_counter()
    try:
        payload = serialize.validate_payload(
            args.command, COMMANDS[args.command](args)
        )
        status, error = STATUS_OK, None
    except InvalidInputError as e:
        payload, status, error = None, STATUS_INVALID, str(e)
    except ResourceLimitError as e:
        payload, status, error = None, STATUS_LIMIT, str(e)
    elapsed_ms = round((time.perf_counter() - start) * 1000)
    logger.info("%s: %s in %d ms", args.command, status, elapsed_ms)
    exit_code = EXIT_CODES[status]
    if payload is not None and payload.get("passed") is False:
        exit_code = 1
    return CommandResult(
        status=status,
        payload=payload,
        elapsed_ms=elapsed_ms,
        error=error,
        exit_code=exit_code,
    )


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--output", type=Path, help="write the JSON document to this file"
    )
    common.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=0,
        help="log INFO (-v) or DEBUG (-vv) records to stderr",
    )

    parser = argparse.ArgumentParser(
        prog="genprob",
        description="Generation probabilities of finite nilpotent groups.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    phi = sub.add_parser("phi", parents=[common], help=cmd_phi.__doc__)
    phi.add_argument("--divisors", required=True, help='e.g. "12,2" or ""')
    phi.add_argument("--k", type=int, required=True)
    mode = phi.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", help="(default)")
    mode.add_argument("--monte-carlo", action="store_true")
    mode.add_argument("--brute-force", action="store_true")
    phi.add_argument("--trials", type=int, default=10**4)
    phi.add_argument("--seed", type=int, default=0)
    phi.add_argument(
        "--max-tuples", type=int, default=probability.MAX_TUPLES
    )

    bnd = sub.add_parser("bounds", parents=[common], help=cmd_bounds.__doc__)
    source = bnd.add_mutually_exclusive_group(required=True)
    source.add_argument("--divisors")
    source.add_argument("--profile", help='e.g. "2:3:3,5:1:2"')
    bnd.add_argument("--epsilon", required=True, help='exact, e.g. "1/10"')
    bnd.add_argument("--exact-min-k", action="store_true")

    tight = sub.add_parser(
        "tightness", parents=[common], help=cmd_tightness.__doc__
    )
    tight.add_argument("--mode", choices=["len", "rank"], required=True)
    tight.add_argument("--n", type=int, required=True)
    tight.add_argument("--epsilon", required=True)

    hsp = sub.add_parser("ahsp", parents=[common], help=cmd_ahsp.__doc__)
    hsp.add_argument("instance", help="JSON file with group and generators")
    hsp.add_argument("--epsilon", required=True)
    hsp.add_argument(
        "--strategy",
        choices=[s.value for s in ahsp.IterationStrategy],
        default=ahsp.IterationStrategy.rank.value,
    )
    hsp.add_argument("--trials", type=int, default=10**3)
    hsp.add_argument("--seed", type=int, default=0)

    reg = sub.add_parser("regev", parents=[common], help=cmd_regev.__doc__)
    size = reg.add_mutually_exclusive_group(required=True)
    size.add_argument("--n-bits", type=int)
    size.add_argument("--rank", type=int)

    rep = sub.add_parser("repro", parents=[common], help=cmd_repro.__doc__)
    rep.add_argument("--quick", action="store_true")
    rep.add_argument("--seed", type=int, default=0)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=[logging.WARNING, logging.INFO, logging.DEBUG][
            min(args.verbose, 2)
        ],
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    result = execute(args)
    text = serialize.dump(result.to_json())
    if args.output is None:
        print(text)
        return result.exit_code
    try:
        args.output.write_text(text + "\n", encoding="utf-8")
    except OSError as e:
        logger.error("cannot write %s: %s", args.output, e)
        result = CommandResult(
            status=STATUS_INVALID,
            payload=None,
            elapsed_ms=result.elapsed_ms,
            error=f"cannot write {args.output}: {e}",
            exit_code=EXIT_CODES[STATUS_INVALID],
        )
        print(serialize.dump(result.to_json()))
        return result.exit_code
    logger.info("wrote %s", args.output)
    return result.exit_code
