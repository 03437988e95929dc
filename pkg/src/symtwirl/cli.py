"""Command-line frontend.

Reports go to stdout as JSON, human-readable summaries to stderr.
Exit codes: 0 success, 1 verification failure, 2 invalid input or size limit.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

from .approx_channel import theorem4_report, verify_channel_design
from .bounds import bounds_report, shannon_entropy, support_lower_bound, support_upper_bound
from .design import (
    build_constraint_system,
    caratheodory_reduce,
    certify,
    is_uniform_forced,
    read_design,
    verify_design,
    verify_design_operational,
    write_design,
)
from .limits import ContractError, DimensionError, SizeLimitError, check_dim, size_limits
from .typestat import enumerate_types, type_class_size

EXIT_OK, EXIT_REJECT, EXIT_INVALID = 0, 1, 2


@dataclass
class RunConfig:
    command: str
    d: int | None = None
    n: int | None = None
    design: Path | None = None
    out: Path | None = None
    eps: float | None = None
    trials: int = 0
    seed: int = 0
    max_dim: int | None = None
    dh: int | None = None
    dk: int | None = None

    def __post_init__(self):
        for name in ("d", "n", "dh", "dk"):
            value = getattr(self, name)
            if value is not None and value < 1:
                raise ContractError(f"--{name} must be at least 1")


def _emit(report: dict) -> None:
    sys.stdout.write(json.dumps(report, indent=2, sort_keys=True) + "\n")


def _say(msg: str) -> None:
    print(msg, file=sys.stderr)


def cmd_design_find(cfg: RunConfig) -> int:
    d, n = cfg.d, cfg.n
    check_dim(d, n)
    sys_ = build_constraint_system(d, n)
    forced = is_uniform_forced(sys_)
    design = caratheodory_reduce(None, sys_)
    lo, hi = support_lower_bound(d, n), support_upper_bound(d, n)
    out = cfg.out or Path(f"design_d{d}_n{n}.json")
    write_design(design, out)
    entropy = shannon_entropy(design)
    report = {
        "d": d,
        "n": n,
        "support": len(design),
        "support_lower_bound": lo,
        "support_upper_bound": hi,
        "group_order": math.factorial(n),
        "uniform_forced": forced,
        "minimum_support": (
            {"status": "certified", "value": len(design)}
            if forced
            else {"status": "bracketed", "lower": lo if 1 <= lo <= len(design) else 1, "upper": len(design)}
        ),
        "below_support_lower_bound": len(design) < lo,
        "entropy": entropy,
        "entropy_rate": entropy / n,
        "verified": design.verified,
        "file": str(out),
    }
    _emit(report)
    note = " (uniform distribution is the only design)" if forced else ""
    if len(design) < lo:
        note += f"; this verified design lies below the floor {lo}"
    _say(f"design for d={d}, n={n}: support {len(design)}, bounds [{lo}, {hi}]{note}; wrote {out}")
    return EXIT_OK


def cmd_design_verify(cfg: RunConfig) -> int:
    design = read_design(cfg.design)
    sys_ = build_constraint_system(design.d, design.n)
    verdict = verify_design(design, sys_)
    report = {"d": design.d, "n": design.n, "support": len(design), "accepted": verdict.accepted}
    if not verdict.accepted:
        report["violated_pattern"] = verdict.violated.label()
    if cfg.trials:
        agree = verify_design_operational(design, design.d, trials=cfg.trials, seed=cfg.seed) == verdict.accepted
        report["operational_agrees"] = agree
        if not agree:
            raise AssertionError("compressed and operational verifiers disagree")
    _emit(report)
    _say(verdict.describe())
    return EXIT_OK if verdict.accepted else EXIT_REJECT


def cmd_bounds(cfg: RunConfig) -> int:
    d, n = cfg.d, cfg.n
    design = None
    if cfg.design is not None:
        raw = read_design(cfg.design)
        design = certify(raw, build_constraint_system(raw.d, raw.n))
        d, n = design.d, design.n
    if d is None or n is None:
        raise ContractError("bounds needs --d and --n (or --design)")
    report = bounds_report(d, n, design=design, eps=cfg.eps)
    _emit(report.to_json())
    _say(
        f"d={d}, n={n}: support in [{report.support_lower_bound}, {report.support_upper_bound}], "
        f"entropy rate floor {report.entropy_rate_lower:.4f}, ceiling {report.entropy_rate_upper:.4f}"
    )
    return EXIT_OK


def cmd_types(cfg: RunConfig) -> int:
    types = enumerate_types(cfg.n, cfg.d)
    rows = [{"counts": mu.to_json(), "size": type_class_size(mu), "entropy": mu.entropy()} for mu in types]
    total = sum(r["size"] for r in rows)
    _emit({"n": cfg.n, "d": cfg.d, "count": len(rows), "total_size": total, "types": rows})
    _say(f"{len(rows)} types of length-{cfg.n} words over {cfg.d} letters; class sizes sum to {total}")
    return EXIT_OK


def cmd_approx(cfg: RunConfig) -> int:
    design = read_design(cfg.design)
    report = theorem4_report(design, design.d)
    _emit(report.to_json())
    _say(f"diamond distance in [{report.eps_lower:.3g}, {report.eps_upper:.3g}]; entropy rate {report.H_rate:.4f}")
    return EXIT_OK


def cmd_channel_verify(cfg: RunConfig) -> int:
    if cfg.dh is None or cfg.dk is None:
        raise ContractError("channel verify needs --dh and --dk")
    design = read_design(cfg.design)
    verdict = verify_channel_design(design, cfg.dh, cfg.dk, seed=cfg.seed)
    _emit(
        {
            "n": design.n,
            "dH": cfg.dh,
            "dK": cfg.dk,
            "local_dimension": verdict.local_dimension,
            "accepted": verdict.accepted,
            "spot_check_deviation": verdict.spot_check_deviation,
        }
    )
    _say(f"channel design check at local dimension {verdict.local_dimension}: {verdict.detail}")
    return EXIT_OK if verdict.accepted else EXIT_REJECT


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="symtwirl", description="Weighted symmetric designs and their bounds")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--max-dim", type=int, default=None, help="override the d**n size limit")

    sub = parser.add_subparsers(dest="group", required=True)

    design = sub.add_parser("design", help="find or verify designs")
    design_sub = design.add_subparsers(dest="action", required=True)
    find = design_sub.add_parser("find", parents=[common])
    find.add_argument("--d", type=int, required=True)
    find.add_argument("--n", type=int, required=True)
    find.add_argument("--out", type=Path)
    verify = design_sub.add_parser("verify", parents=[common])
    verify.add_argument("design_file", nargs="?", type=Path)
    verify.add_argument("--design", type=Path)
    verify.add_argument("--trials", type=int, default=0)

    bounds = sub.add_parser("bounds", parents=[common])
    bounds.add_argument("--d", type=int)
    bounds.add_argument("--n", type=int)
    bounds.add_argument("--eps", type=float)
    bounds.add_argument("--design", type=Path)

    types = sub.add_parser("types", parents=[common])
    types.add_argument("--n", type=int, required=True)
    types.add_argument("--d", type=int, required=True)

    approx = sub.add_parser("approx", parents=[common])
    approx.add_argument("--design", type=Path, required=True)

    channel = sub.add_parser("channel")
    channel_sub = channel.add_subparsers(dest="action", required=True)
    cverify = channel_sub.add_parser("verify", parents=[common])
    cverify.add_argument("--design", type=Path, required=True)
    cverify.add_argument("--dh", type=int, required=True)
    cverify.add_argument("--dk", type=int, required=True)
    return parser


COMMANDS = {
    "design find": cmd_design_find,
    "design verify": cmd_design_verify,
    "bounds": cmd_bounds,
    "types": cmd_types,
    "approx": cmd_approx,
    "channel verify": cmd_channel_verify,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    command = args.group if getattr(args, "action", None) is None else f"{args.group} {args.action}"
    design_path = getattr(args, "design", None) or getattr(args, "design_file", None)
    try:
        cfg = RunConfig(
            command=command,
            d=getattr(args, "d", None),
            n=getattr(args, "n", None),
            design=design_path,
            out=getattr(args, "out", None),
            eps=getattr(args, "eps", None),
            trials=getattr(args, "trials", 0),
            seed=args.seed,
            max_dim=args.max_dim,
            dh=getattr(args, "dh", None),
            dk=getattr(args, "dk", None),
        )
        if command in ("design verify", "approx", "channel verify") and cfg.design is None:
            raise ContractError(f"{command} needs a design file")
        overrides = {"max_dim": cfg.max_dim} if cfg.max_dim else {}
        with size_limits(**overrides):
            return COMMANDS[command](cfg)
    except (SizeLimitError, ContractError, DimensionError, ValueError, OSError) as exc:
        _say(f"error: {exc}")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
