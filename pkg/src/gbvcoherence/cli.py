"""Command-line entry point: ``gbvcf run|verify|sweep|sample``.

Exit codes: 0 success, 1 check failure, 2 usage error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
from typing import Sequence

import numpy as np

from . import gbv
from .oracle import LinearOracle
from .statevector import MAX_QUBITS, SizeError, ValidationError, random_state
from .sweep import ClosedFormMismatch, LocalUnitaryParams, local_unitary, sweep

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3

DEFAULT_SEED = 0

SWEEP_FIELDS = [
    "n", "alpha", "beta", "theta",
    "cf_input", "cf_post_unitary", "cf_post_oracle", "cf_post_hadamard",
    "cf_post_unitary_sim", "cf_post_oracle_sim", "cf_post_hadamard_sim",
    "p_succ",
]

_PI_RE = re.compile(r"^\s*([+-]?(?:\d+(?:\.\d*)?|\.\d+)?)\s*\*?\s*pi\s*(?:/\s*(\d+(?:\.\d*)?))?\s*$")


class UsageError(Exception):
    pass


def parse_angle(text: str) -> float:
    """Decimal radians or a multiple of pi such as ``pi/8``, ``3pi/4``, ``-pi``."""
    m = _PI_RE.match(text.lower())
    if m:
        coeff, denom = m.groups()
        k = 1.0 if coeff in (None, "", "+") else -1.0 if coeff == "-" else float(coeff)
        return k * math.pi / (float(denom) if denom else 1.0)
    try:
        return float(text)
    except ValueError:
        raise UsageError(f"cannot parse angle {text!r}") from None


def parse_angle_list(text: str) -> list[float]:
    """Comma list of angles, or ``start:stop:count`` (endpoints included)."""
    if text.count(":") == 2:
        start, stop, count = text.split(":")
        try:
            k = int(count)
        except ValueError:
            raise UsageError(f"bad point count in {text!r}") from None
        if k < 1:
            raise UsageError(f"point count must be >= 1 in {text!r}")
        lo, hi = parse_angle(start), parse_angle(stop)
        return [lo] if k == 1 else [float(v) for v in np.linspace(lo, hi, k)]
    return [parse_angle(t) for t in text.split(",") if t.strip()]


def parse_n_range(text: str) -> list[int]:
    """``"1..10"``, ``"2,4,6"`` or ``"3"``."""
    out: list[int] = []
    try:
        for part in text.split(","):
            part = part.strip()
            if ".." in part:
                lo, hi = part.split("..")
                out.extend(range(int(lo), int(hi) + 1))
            elif part:
                out.append(int(part))
    except ValueError:
        raise UsageError(f"cannot parse qubit range {text!r}") from None
    if not out:
        raise UsageError("empty qubit range")
    for n in out:
        if not 1 <= n <= MAX_QUBITS:
            raise UsageError(f"qubit count {n} outside [1, {MAX_QUBITS}]")
    return out


def parse_secret(z: str | None, n: int | None) -> LinearOracle:
    if z is None:
        raise UsageError("--z is required")
    if not z or set(z) - {"0", "1"}:
        raise UsageError(f"secret must contain only 0/1 characters, got {z!r}")
    if n is not None and len(z) != n:
        raise UsageError(f"secret {z!r} has {len(z)} bits but --n is {n}")
    if len(z) > MAX_QUBITS:
        raise UsageError(f"secret longer than {MAX_QUBITS} bits")
    return LinearOracle.from_bits(z)


def parse_prep(text: str, n: int, seed: int):
    key = text.strip().lower()
    if key in ("hadamard", "identity"):
        return key
    if key.startswith("local:"):
        parts = key[len("local:"):].split(",")
        if len(parts) != 3:
            raise UsageError(f"local prep needs alpha,beta,theta, got {text!r}")
        return local_unitary(LocalUnitaryParams(*(parse_angle(p) for p in parts)))
    if key == "random":
        return random_state(n, seed)
    raise UsageError(f"unknown prep {text!r}; use hadamard, identity, random or local:a,b,t")


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _records_text(records: list[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(records if len(records) != 1 else records[0], indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    fields = list(records[0]) if records else []
    writer.writerow(fields)
    for r in records:
        writer.writerow([_fmt(r[f]) for f in fields])
    return buf.getvalue()


def sweep_records(rows) -> list[dict]:
    out = []
    for r in rows:
        out.append({
            "n": r.n,
            "alpha": r.params.alpha,
            "beta": r.params.beta,
            "theta": r.params.theta,
            "cf_input": r.cf_input[0],
            "cf_post_unitary": r.cf_post_unitary[0],
            "cf_post_oracle": r.cf_post_oracle[0],
            "cf_post_hadamard": r.cf_post_hadamard[0],
            "cf_post_unitary_sim": r.cf_post_unitary[1],
            "cf_post_oracle_sim": r.cf_post_oracle[1],
            "cf_post_hadamard_sim": r.cf_post_hadamard[1],
            "p_succ": r.p_succ,
        })
    return out


def write_sweep_csv(rows, fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(SWEEP_FIELDS)
    for rec in sweep_records(rows):
        writer.writerow([_fmt(rec[f]) for f in SWEEP_FIELDS])


# -- commands ---------------------------------------------------------------


def cmd_run(args) -> int:
    oracle = parse_secret(args.z, args.n)
    prep = parse_prep(args.prep, oracle.n, args.seed)
    run = gbv.run_gbv(oracle.n, oracle, prep)
    record = {
        "n": oracle.n,
        "z": oracle.bits,
        "prep": args.prep,
        "cf_input": run.cf_trace["input"],
        "cf_post_unitary": run.cf_trace["post_unitary"],
        "cf_post_oracle": run.cf_trace["post_oracle"],
        "cf_post_hadamard": run.cf_trace["post_hadamard"],
        "cf_full_final": run.cf_full_final,
        "success_probability": run.success_probability,
    }
    _emit(_records_text([record], args.format or "json"), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.theorem == "all":
        theorems = [1, 2, 3, 4]
    else:
        try:
            theorems = [int(args.theorem)]
        except ValueError:
            theorems = []
        if not theorems or theorems[0] not in gbv.THEOREM_TOLERANCE:
            raise UsageError(f"unknown theorem {args.theorem!r}; use 1, 2, 3, 4 or all")
    n_spec = args.n_range or (str(args.n) if args.n is not None else None)
    if n_spec is None:
        raise UsageError("verify needs --n or --n-range")
    ns = parse_n_range(n_spec)
    z = None
    if args.z is not None:
        if len(ns) != 1:
            raise UsageError("a fixed --z needs a single qubit count")
        z = parse_secret(args.z, ns[0]).z
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    reports = [gbv.verify_theorem(t, ns, args.trials, args.seed, z=z) for t in theorems]
    records = [r.as_dict() for r in reports]
    if (args.format or "json") == "csv":
        for rec in records:
            rec["n_values"] = " ".join(map(str, rec["n_values"]))
    _emit(_records_text(records, args.format or "json"), args.out)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_CHECK_FAILED


def cmd_sweep(args) -> int:
    alphas = parse_angle_list(args.alpha)
    betas = parse_angle_list(args.beta)
    thetas = parse_angle_list(args.theta)
    n_spec = args.n_range or (str(args.n) if args.n is not None else None)
    if n_spec is None:
        raise UsageError("sweep needs --n or --n-range")
    ns = parse_n_range(n_spec)
    try:
        rows = sweep(alphas, betas, thetas, ns)
    except ClosedFormMismatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    if (args.format or "csv") == "json":
        text = json.dumps(sweep_records(rows), indent=2) + "\n"
    else:
        buf = io.StringIO()
        write_sweep_csv(rows, buf)
        text = buf.getvalue()
    _emit(text, args.out)
    return EXIT_OK


def cmd_sample(args) -> int:
    if args.shots < 1:
        raise UsageError("--shots must be >= 1")
    oracle = parse_secret(args.z, args.n)
    prep = parse_prep(args.prep, oracle.n, args.seed)
    run = gbv.run_gbv(oracle.n, oracle, prep)
    hist = gbv.sample_measurement(run.stage("post_hadamard"), args.shots, args.seed)
    fmt = args.format or "json"
    if fmt == "json":
        record = {
            "n": oracle.n,
            "z": oracle.bits,
            "prep": args.prep,
            "shots": hist.shots,
            "seed": args.seed,
            "success_probability": run.success_probability,
            "frequency_z": hist.frequency(oracle.bits),
            "counts": hist.counts,
        }
        text = json.dumps(record, indent=2) + "\n"
    else:
        text = _records_text(
            [{"outcome": k, "count": v} for k, v in hist.counts.items()], "csv"
        )
    _emit(text, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gbvcf", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt_default: str):
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        p.add_argument("--out", help="output file (default: stdout)")
        p.add_argument("--format", choices=["csv", "json"], default=None,
                       help=f"output format (default: {fmt_default})")

    p = sub.add_parser("run", help="run one GBV instance")
    p.add_argument("--n", type=int)
    p.add_argument("--z", help="secret bits, most significant first")
    p.add_argument("--prep", default="hadamard", help="hadamard | identity | random | local:a,b,t")
    common(p, "json")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("verify", help="check theorems on Haar-random states")
    p.add_argument("--theorem", default="all", help="1, 2, 3, 4 or all")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--n", help="qubit count or range like 1..10")
    p.add_argument("--n-range", dest="n_range", help="qubit range like 1..10 or 2,4,6")
    p.add_argument("--z", help="force this secret in every trial")
    common(p, "json")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="closed-form vs simulated coherence fractions on a grid")
    p.add_argument("--alpha", default="0", help="comma list or start:stop:count; pi/8 style allowed")
    p.add_argument("--beta", default="0")
    p.add_argument("--theta", default="pi/4")
    p.add_argument("--n", help="qubit count or list")
    p.add_argument("--n-range", dest="n_range")
    common(p, "csv")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("sample", help="sample measurements of the final state")
    p.add_argument("--n", type=int)
    p.add_argument("--z")
    p.add_argument("--prep", default="hadamard")
    p.add_argument("--shots", type=int, default=1000)
    common(p, "json")
    p.set_defaults(func=cmd_sample)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, SizeError, ValidationError) as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"{parser.prog} {args.command}: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
