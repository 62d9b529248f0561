"""Command line entry point: ``bhbounds table | bound | verify``.

Exit status is 0 on success, 2 on a usage error and 1 when an internal
consistency check fails (a certificate that does not replay, or a verified
ratio above its certified bound).
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence, TextIO

from .certificate import SCHEMA_VERSION
from .errors import BHError, Infeasible, ReplayMismatch
from .exponents import ExponentTuple, ScalarField, classical_tuple
from .intervals import DEFAULT_PRECISION
from .interpolation import DEFAULT_CAP, default_family, family_from_tuples, optimize_decomposition
from .recurrence import classical_table, recorded_split
from .verifier import campaign

log = logging.getLogger("bhbounds")

PRECISION_ENV = "BH_PRECISION_BITS"
CSV_COLUMNS = ("n", "upper_bound_decimal", "split_a", "split_b")


class UsageError(Exception):
    pass


class InvariantViolation(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    field: ScalarField
    precision_bits: int
    output_format: str = "json"
    max_n: int | None = None
    target: ExponentTuple | None = None
    family_path: Path | None = None
    cap: int = DEFAULT_CAP
    n: int | None = None
    dim: int | None = None
    trials: int = 0
    seed: int = 0
    digits: int = 30

    def __post_init__(self):
        if self.precision_bits < 32:
            raise UsageError(f"--precision must be >= 32, got {self.precision_bits}")


def _default_precision() -> int:
    raw = os.environ.get(PRECISION_ENV)
    if raw is None:
        return DEFAULT_PRECISION
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{PRECISION_ENV}={raw!r} is not an integer") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", default="real", choices=[f.value for f in ScalarField])
    common.add_argument("--precision", type=int, default=None,
                        help=f"working precision in bits (default ${PRECISION_ENV} or {DEFAULT_PRECISION})")
    common.add_argument("--digits", type=int, default=30,
                        help="significant digits of printed decimals (upper ends round up)")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="bhbounds", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("table", parents=[common], help="certified bounds for C_1..C_N")
    p.add_argument("--max-n", type=int, required=True)
    p.add_argument("--format", dest="output_format", choices=("csv", "json"), default="json")

    p = sub.add_parser("bound", parents=[common], help="certificate for one exponent tuple")
    p.add_argument("--exponents", required=True, help='comma-separated fractions, e.g. "5/3,5/3,5/3"')
    p.add_argument("--family", type=Path, default=None,
                   help="JSON array of generator tuple strings (default: built-in family)")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP, help="maximum size of the built-in family")

    p = sub.add_parser("verify", parents=[common], help="random audit of small forms")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--q", default=None, help="exponent tuple (default: classical 2n/(n+1))")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--distribution", choices=("sign", "gaussian"), default="sign")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--restarts", type=int, default=8, help="complex field: ascent restarts")
    p.add_argument("--iters", type=int, default=50, help="complex field: sweeps per restart")
    return parser


def _parse_tuple(text: str, flag: str) -> ExponentTuple:
    try:
        return ExponentTuple.parse(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"{flag}: {exc}") from None


def _load_family(path: Path, field: ScalarField, precision_bits: int):
    try:
        entries = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"--family: cannot read {path}: {exc}") from None
    if not isinstance(entries, list) or not all(isinstance(e, str) for e in entries):
        raise UsageError("--family: expected a JSON array of tuple strings")
    tuples = [_parse_tuple(e, "--family") for e in entries]
    return family_from_tuples(tuples, field, precision_bits)


def cmd_table(args, cfg: RunConfig, out: TextIO) -> int:
    if cfg.max_n is None or cfg.max_n < 1:
        raise UsageError(f"--max-n must be >= 1, got {cfg.max_n}")
    certs = classical_table(cfg.max_n, cfg.field, cfg.precision_bits)
    if cfg.output_format == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for n, cert in enumerate(certs, 1):
            split = recorded_split(cert) or ("", "")
            writer.writerow((n, cert.value.decimal_hi(cfg.digits), *split))
    else:
        doc = {
            "schema": SCHEMA_VERSION,
            "field": cfg.field.value,
            "precision_bits": cfg.precision_bits,
            "certificates": [c.to_dict(cfg.digits) for c in certs],
        }
        json.dump(doc, out, indent=2)
        out.write("\n")
    return 0


def cmd_bound(args, cfg: RunConfig, out: TextIO) -> int:
    target = cfg.target
    if not target.is_bohnenblust_hille:
        raise UsageError(f"--exponents: {target} has defect {target.defect}; need sum 1/q_i = (n+1)/2")
    if cfg.family_path is not None:
        family = _load_family(cfg.family_path, cfg.field, cfg.precision_bits)
    else:
        try:
            family = default_family(target.n, cfg.field, cfg.cap, cfg.precision_bits)
        except BHError as exc:
            raise UsageError(f"--cap: {exc}") from None
    try:
        cert = optimize_decomposition(target, family, cfg.precision_bits)
    except Infeasible as exc:
        raise UsageError(f"--exponents: {exc}") from None
    cert.check()
    json.dump(cert.to_dict(cfg.digits), out, indent=2)
    out.write("\n")
    return 0


def cmd_verify(args, cfg: RunConfig, out: TextIO) -> int:
    q = cfg.target or classical_tuple(cfg.n)
    if q.n != cfg.n:
        raise UsageError(f"--q has length {q.n} but --n is {cfg.n}")
    if not q.is_bohnenblust_hille:
        raise UsageError(f"--q: {q} has defect {q.defect}")
    result = campaign(cfg.n, cfg.dim, q, cfg.trials, cfg.seed, cfg.field,
                      args.distribution, args.workers, args.restarts, args.iters)
    cert = optimize_decomposition(q, default_family(q.n, cfg.field, DEFAULT_CAP, cfg.precision_bits))
    bound = float(cert.value.hi_fraction)
    for report in result.reports:
        out.write(json.dumps({"kind": "report", **report.to_dict()}) + "\n")
    summary = result.summary()
    exceeded = result.max_ratio > bound + 1e-9
    summary.update({
        "schema": SCHEMA_VERSION,
        "field": cfg.field.value,
        "n": cfg.n,
        "dim": cfg.dim,
        "q": str(q),
        "seed": cfg.seed,
        "certified_upper": cert.value.decimal_hi(cfg.digits),
        "exceeds_certificate": exceeded,
    })
    out.write(json.dumps(summary) + "\n")
    # a complex-field sup is only a lower estimate, so its ratios may overshoot
    if exceeded and summary["sup_exact"]:
        raise InvariantViolation(
            f"trial {result.argmax} ratio {result.max_ratio} exceeds certified bound {bound}")
    return 0


COMMANDS = {"table": cmd_table, "bound": cmd_bound, "verify": cmd_verify}


def _config(args) -> RunConfig:
    precision = args.precision if args.precision is not None else _default_precision()
    target = None
    if args.command == "bound":
        target = _parse_tuple(args.exponents, "--exponents")
    elif args.command == "verify" and args.q is not None:
        target = _parse_tuple(args.q, "--q")
    return RunConfig(
        command=args.command,
        field=ScalarField.parse(args.field),
        precision_bits=precision,
        output_format=getattr(args, "output_format", "json"),
        max_n=getattr(args, "max_n", None),
        target=target,
        family_path=getattr(args, "family", None),
        cap=getattr(args, "cap", DEFAULT_CAP),
        n=getattr(args, "n", None),
        dim=getattr(args, "dim", None),
        trials=getattr(args, "trials", 0),
        seed=getattr(args, "seed", 0),
        digits=args.digits,
    )


def run(argv: Sequence[str] | None = None, out: TextIO | None = None,
        err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=err)
    try:
        cfg = _config(args)
        return COMMANDS[cfg.command](args, cfg, out)
    except UsageError as exc:
        err.write(f"bhbounds {args.command}: error: {exc}\n")
        return 2
    except BHError as exc:
        err.write(f"bhbounds {args.command}: error: {exc}\n")
        return 2
    except (ReplayMismatch, InvariantViolation) as exc:
        err.write(f"bhbounds {args.command}: invariant violated: {exc}\n")
        return 1


def main() -> None:
    sys.exit(run())
