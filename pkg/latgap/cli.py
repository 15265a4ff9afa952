"""
Command-line interface for latgap.

Every subcommand reads one instance document (or a batch array), prints
one JSON document on stdout and logs diagnostics to stderr. Exit codes:
0 success, 1 internal error, 2 invalid input, 3 resource limit.
"""

import argparse
import asyncio
import json
import logging
import sys
import time
from dataclasses import replace
from fractions import Fraction
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence

from typing_extensions import NotRequired, TypedDict

from .bounds import bounds_report, covering_radius, grid_cover_check
from .config import LOG_LEVELS, Settings, get_settings, reset_settings
from .frobenius import frobenius_report, oracle_frobenius, representable_values
from .gomory import ip_bruteforce, relaxation_report, witness_rhs
from .groupsolve import GroupInstance, gap, oracle_m, oracle_table, solve_m
from .instances import Instance, parse_instance, read_instances
from .intlat import coset_label, det_abs
from .types import CommandResult, ExitCode, InstanceKind
from .utils import (
    InstanceFormatError,
    LatGapError,
    ResourceLimitError,
    ValidationError,
    dot,
    format_rational,
    parse_int_list_arg,
    parse_rational,
)

logger = logging.getLogger(__name__)

COMMANDS = ("gap", "solve", "frobenius", "bounds", "relax", "oracle", "cover-check")


class GapPayload(TypedDict):
    gap: str
    witness_label: List[int]
    witness_x: List[int]
    cosets: int
    elapsed: float
    verified: NotRequired[bool]


class SolvePayload(TypedDict):
    value: str
    minimizer: List[int]
    residue_label: List[int]
    verified: NotRequired[bool]


class FrobeniusPayload(TypedDict):
    frobenius: int
    gap: str
    det: int
    modulus: int
    verified: NotRequired[bool]


class CoverPayload(TypedDict):
    rho: str
    h: str
    points: int
    uncovered: List[List[str]]
    verdict: str


class ErrorPayload(TypedDict):
    error: str
    exit_code: int


def _rational(value) -> str:
    return format_rational(Fraction(value))


def _rationals(values) -> List[str]:
    return [_rational(v) for v in values]


def _require(instance: Instance, kind: InstanceKind, command: str) -> None:
    if instance.kind is not kind:
        raise InstanceFormatError(f"{command} expects a {kind.value} instance, got {instance.kind.value}")


def _verify_group_point(group: GroupInstance, x: Sequence[int], value: Fraction, r: Sequence[int]) -> bool:
    """Recompute l.x and the coset label of x."""
    return (
        all(v >= 0 for v in x)
        and dot(group.cost.l, x) == value
        and coset_label(group.snf, x) == coset_label(group.snf, r)
    )


class CommandRunner:
    """Runs one subcommand over the instances of a document."""

    def __init__(self, args: argparse.Namespace, settings: Settings):
        self.args = args
        self.settings = settings
        self.handlers: Dict[str, Callable[[Instance], Mapping[str, Any]]] = {
            "gap": self.cmd_gap,
            "solve": self.cmd_solve,
            "frobenius": self.cmd_frobenius,
            "bounds": self.cmd_bounds,
            "relax": self.cmd_relax,
            "oracle": self.cmd_oracle,
            "cover-check": self.cmd_cover_check,
        }

    @property
    def max_cosets(self) -> int:
        return self.settings.max_cosets

    def cmd_gap(self, instance: Instance) -> GapPayload:
        _require(instance, InstanceKind.GROUP, "gap")
        group = instance.group
        start = time.perf_counter()
        cert = gap(group, self.max_cosets)
        payload: GapPayload = {
            "gap": _rational(cert.gap),
            "witness_label": list(cert.witness_label.digits),
            "witness_x": list(cert.witness_x),
            "cosets": cert.coset_count,
            "elapsed": round(time.perf_counter() - start, 6),
        }
        if self.args.verify:
            payload["verified"] = (
                all(v >= 0 for v in cert.witness_x)
                and dot(group.cost.l, cert.witness_x) == cert.gap
                and coset_label(group.snf, cert.witness_x) == cert.witness_label
            )
        return payload

    def cmd_solve(self, instance: Instance) -> SolvePayload:
        _require(instance, InstanceKind.GROUP, "solve")
        if instance.residue is None:
            raise InstanceFormatError("solve needs a residue vector r")
        group = instance.group
        solution = solve_m(group, instance.residue, self.max_cosets)
        payload: SolvePayload = {
            "value": _rational(solution.value),
            "minimizer": list(solution.minimizer),
            "residue_label": list(solution.residue_label.digits),
        }
        if self.args.verify:
            payload["verified"] = _verify_group_point(group, solution.minimizer, solution.value, instance.residue)
        return payload

    def cmd_frobenius(self, instance: Instance) -> FrobeniusPayload:
        _require(instance, InstanceKind.FROBENIUS, "frobenius")
        result = frobenius_report(instance.a, self.max_cosets, smallest_modulus=self.args.smallest_modulus)
        payload: FrobeniusPayload = {
            "frobenius": result.frobenius,
            "gap": _rational(result.gap),
            "det": result.det,
            "modulus": result.modulus,
        }
        if self.args.verify:
            # f missed, f + 1 .. f + min(a) hit
            f = result.frobenius
            flags = representable_values(instance.a, range(f, f + min(instance.a) + 1), self.max_cosets)
            payload["verified"] = all(flags[1:]) and (f < 0 or not flags[0])
        return payload

    def cmd_bounds(self, instance: Instance) -> Dict[str, Any]:
        _require(instance, InstanceKind.GROUP, "bounds")
        group = instance.group
        gap_value = gap(group, self.max_cosets).gap if self.args.with_gap else None
        report = bounds_report(group.dim, det_abs(group.basis), group.cost.l, gap_value, self.settings.bound_digits)
        return report.to_dict()

    def cmd_relax(self, instance: Instance) -> Dict[str, Any]:
        _require(instance, InstanceKind.IP, "relax")
        ip = instance.ip
        report = relaxation_report(ip, self.args.row, self.max_cosets)
        lp, rel, solution = report.lp, report.relaxation, report.solution
        payload = {
            "lp": {
                "basis": list(lp.basis),
                "nonbasis": list(lp.nonbasis),
                "lp_value": _rational(lp.lp_value),
                "x": _rationals(lp.x),
                "reduced_costs": _rationals(lp.reduced_costs),
                "unique": lp.unique,
            },
            "relaxation": {
                "basis": [list(row) for row in rel.group.basis.rows],
                "det": rel.group.coset_count,
                "l": _rationals(rel.group.cost.l),
                "r": list(rel.residue),
                "constant": _rational(rel.constant),
                "row": rel.row,
            },
            "group_value": _rational(solution.group_value),
            "bound": _rational(solution.bound),
            "minimizer": list(solution.x_nonbasic),
            "lifted_x": _rationals(report.lifted.x),
            "ip_optimal": report.ip_optimal,
        }
        if self.args.verify:
            payload["verified"] = _verify_group_point(
                rel.group, solution.x_nonbasic, solution.group_value, rel.residue
            )
        if self.args.witness:
            witness = witness_rhs(ip.A, ip.c, max_cosets=self.max_cosets)
            payload["witness"] = {
                "b_prime": list(witness.b_prime),
                "u": list(witness.u),
                "gap": _rational(witness.gap),
                "predicted": _rational(witness.predicted),
            }
        return payload

    def cmd_oracle(self, instance: Instance) -> Dict[str, Any]:
        limit, points = self.settings.oracle_limit, self.settings.oracle_points
        if instance.kind is InstanceKind.FROBENIUS:
            return {"frobenius": oracle_frobenius(instance.a, points)}
        if instance.kind is InstanceKind.IP:
            result = ip_bruteforce(instance.ip, self.args.box, points)
            return {
                "value": _rational(result.value) if result.feasible else "infeasible",
                "x": list(result.x) if result.feasible else None,
                "box": result.box,
            }
        group = instance.group
        if instance.residue is not None:
            return {"value": _rational(oracle_m(group, instance.residue, limit, points))}
        table = oracle_table(group, limit, points)
        return {"gap": _rational(max(table.values())), "cosets": len(table)}

    def cmd_cover_check(self, instance: Instance) -> CoverPayload:
        _require(instance, InstanceKind.GROUP, "cover-check")
        group = instance.group
        rho = parse_rational(self.args.rho) if self.args.rho is not None else covering_radius(group, self.max_cosets)
        report = grid_cover_check(group, rho, parse_rational(self.args.grid_h), self.settings.max_grid_points)
        return {
            "rho": _rational(report.rho),
            "h": _rational(report.h),
            "points": report.points_checked,
            "uncovered": [_rationals(p) for p in report.uncovered],
            "verdict": report.verdict,
        }

    def run_one(self, command: str, doc: Dict[str, Any]) -> CommandResult:
        """Run a command on one instance object and capture failures."""
        try:
            instance = parse_instance(doc)
            return CommandResult(success=True, results=self.handlers[command](instance))
        except ValidationError as e:
            logger.error(f"Invalid input for {command}: {e}")
            return CommandResult(success=False, error=f"{type(e).__name__}: {e}", exit_code=ExitCode.INVALID_INPUT)
        except ResourceLimitError as e:
            logger.error(f"Resource limit in {command}: {e}")
            return CommandResult(success=False, error=f"{type(e).__name__}: {e}", exit_code=ExitCode.RESOURCE_LIMIT)
        except Exception as e:
            logger.error(f"Error in {command}: {e}")
            return CommandResult(success=False, error=f"{type(e).__name__}: {e}", exit_code=ExitCode.INTERNAL)

    async def run_batch(self, command: str, docs: List[Dict[str, Any]]) -> List[CommandResult]:
        """Run instances concurrently; results keep the input order."""
        semaphore = asyncio.Semaphore(max(1, self.settings.jobs))

        async def run(doc):
            async with semaphore:
                return await asyncio.to_thread(self.run_one, command, doc)

        return list(await asyncio.gather(*(run(doc) for doc in docs)))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="latgap", description="Lattice programming gaps and group relaxations")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--input", "-i", help="Instance document (JSON); '-' reads stdin")
    parser.add_argument("--a", help="Inline Frobenius vector, e.g. 3,5,7")
    parser.add_argument("--row", type=int, help="Build the single-row relaxation of this row (0-based)")
    parser.add_argument("--witness", action="store_true", help="Add the right-hand side attaining the gap")
    parser.add_argument("--with-gap", action="store_true", help="Compute the exact gap alongside the bounds")
    parser.add_argument("--box", type=int, help="Per-coordinate bound of the IP brute force")
    parser.add_argument("--max-cosets", type=int, help="Largest coset count solved")
    parser.add_argument("--verify", action="store_true", help="Recheck every emitted certificate")
    parser.add_argument("--grid-h", default="1/16", help="Grid spacing of cover-check")
    parser.add_argument("--rho", help="Radius tested by cover-check (default: covering radius)")
    parser.add_argument("--smallest-modulus", action="store_true",
                        help="Use the smallest entry of a as the modulus")
    parser.add_argument("--log-level", choices=LOG_LEVELS, help="Logging level on stderr")
    parser.add_argument("--jobs", type=int, help="Batch instances processed concurrently")
    return parser


def configure_logging(level: str) -> None:
    logging.basicConfig(
        level=getattr(logging, level),
        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
        stream=sys.stderr,
    )


def _emit(payload: Any) -> None:
    json.dump(payload, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _result_payload(result: CommandResult) -> Any:
    if result.success:
        return result.results
    error: ErrorPayload = {"error": result.error, "exit_code": result.exit_code.value}
    return error


def _documents(args: argparse.Namespace):
    if args.a is not None:
        return [{"kind": InstanceKind.FROBENIUS.value, "a": parse_int_list_arg(args.a)}], False
    if args.input is None:
        raise InstanceFormatError("Pass an instance document with --input")
    return read_instances(args.input)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Entry point of the latgap command.

    Args:
        argv: Arguments without the program name (defaults to sys.argv[1:])

    Returns:
        Process exit code
    """
    args = build_parser().parse_args(argv)
    try:
        reset_settings()
        settings = get_settings()
        overrides = {
            key: value
            for key, value in (
                ("max_cosets", args.max_cosets),
                ("log_level", args.log_level),
                ("jobs", args.jobs),
            )
            if value is not None
        }
        settings = replace(settings, **overrides)
        configure_logging(settings.log_level)
        docs, batch = _documents(args)
    except LatGapError as e:
        configure_logging("ERROR")
        logger.error(f"Cannot start {args.command}: {e}")
        _emit({"error": f"{type(e).__name__}: {e}", "exit_code": ExitCode.INVALID_INPUT.value})
        return ExitCode.INVALID_INPUT.value

    runner = CommandRunner(args, settings)
    if batch:
        results = asyncio.run(runner.run_batch(args.command, docs))
        _emit([_result_payload(r) for r in results])
    else:
        results = [runner.run_one(args.command, docs[0])]
        _emit(_result_payload(results[0]))
    failure = next((r for r in results if not r.success), None)
    return failure.exit_code.value if failure else ExitCode.SUCCESS.value


if __name__ == "__main__":
    sys.exit(main())
