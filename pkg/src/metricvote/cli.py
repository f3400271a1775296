"""Command-line driver: build committees, run seeded experiments, attack
committees adversarially, and tabulate bound windows.

All configuration is explicit flags (no environment variables); a fixed --seed
makes every output byte-for-byte reproducible.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import adversary as adv_mod
from .bounds import bounds_report
from .committee import committee_experts_from_json, committee_to_json
from .experiments import (
    EXPERIMENT_HEADER,
    build_rule_committee,
    experiment_rows,
    rows_to_csv,
)
from .geometry import Ball, Box, Domain, Norm, unit_box
from .instance import instance_from_json, profile
from .oracle import true_regret
from .voting import alternative_rule, minimal_regret_rule, multiwinner_rule, two_round_protocol

RULES = ("minimal_regret", "alternative", "multiwinner", "two_round")


def _parse_p(text: str) -> float:
    if text.lower() in ("inf", "infinity", "max"):
        return math.inf
    return float(text)


def _parse_domain(text: str, dim: int) -> Domain:
    if text == "unit-box":
        return unit_box(dim)
    if text.startswith("box:"):
        _, lo, hi = text.split(":")
        return Box(np.full(dim, float(lo)), np.full(dim, float(hi)))
    if text.startswith("ball:"):
        _, radius = text.split(":")
        return Ball(np.zeros(dim), float(radius))
    raise argparse.ArgumentTypeError(f"cannot parse domain {text!r}")


def _write(out: str | None, text: str) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        Path(out).write_text(text, encoding="utf-8")


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--dim", type=int, default=1)
    sub.add_argument("--p", type=_parse_p, default=2.0, help="lp norm exponent, or 'inf'")
    sub.add_argument("--epsilon", type=float, default=0.5)
    sub.add_argument("--m", type=int, default=6)
    sub.add_argument("--k", type=int, default=1)
    sub.add_argument("--ell", type=int, default=1)
    sub.add_argument("--domain", type=str, default="unit-box", help="unit-box | box:LO:HI | ball:R")
    sub.add_argument("--out", type=str, default=None, help="output path, '-' for stdout")


def cmd_build_committee(args: argparse.Namespace) -> int:
    domain = _parse_domain(args.domain, args.dim)
    norm = Norm(args.p)
    built = build_rule_committee(domain, norm, args.epsilon, args.m, args.k, args.ell, args.rule)
    if args.rule == "two_round":
        screening, selection = built
        payload = {
            "screening": json.loads(committee_to_json(screening)),
            "selection": json.loads(committee_to_json(selection)),
        }
        _write(args.out, json.dumps(payload, indent=2))
    else:
        _write(args.out, committee_to_json(built))
    return 0


def _run_rule_on_instance(args: argparse.Namespace) -> int:
    domain, norm, cand, experts, k = instance_from_json(Path(args.instance).read_text("utf-8"))
    prof = profile(cand, experts, k, norm)
    if args.rule == "minimal_regret":
        chosen = str(minimal_regret_rule(cand.locations, experts, prof, norm))
        regret = true_regret(cand.qualities, int(chosen))
    elif args.rule == "alternative":
        chosen = str(alternative_rule(cand.locations, experts, prof, norm))
        regret = true_regret(cand.qualities, int(chosen))
    elif args.rule == "multiwinner":
        ids = multiwinner_rule(cand.locations, experts, prof, norm, args.ell)
        chosen = "|".join(str(j) for j in ids)
        regret = true_regret(cand.qualities, ids)
    else:
        screening, selection = build_rule_committee(
            domain, norm, args.epsilon, max(cand.m, 2), k, args.ell, "two_round"
        )
        winner = two_round_protocol(screening, selection, cand, norm)
        chosen = str(winner)
        regret = true_regret(cand.qualities, winner)
    ok = regret <= args.epsilon + 1e-9
    rows = [(0, chosen, regret, "", args.epsilon, 1 if ok else 0)]
    _write(args.out, rows_to_csv(EXPERIMENT_HEADER, rows))
    return 0 if ok else 1


def cmd_experiment(args: argparse.Namespace) -> int:
    if args.instance is not None:
        return _run_rule_on_instance(args)
    domain = _parse_domain(args.domain, args.dim)
    norm = Norm(args.p)
    rows, all_pass = experiment_rows(
        domain, norm, args.epsilon, args.m, args.k, args.ell, args.rule, args.trials, args.seed
    )
    _write(args.out, rows_to_csv(EXPERIMENT_HEADER, rows))
    return 0 if all_pass else 1


def cmd_adversary(args: argparse.Namespace) -> int:
    domain = _parse_domain(args.domain, args.dim)
    norm = Norm(args.p)
    experts = committee_experts_from_json(Path(args.committee).read_text("utf-8"))
    if experts.shape[1] != args.dim:
        raise SystemExit(f"committee dimension {experts.shape[1]} does not match --dim {args.dim}")
    nb = adv_mod.unit_ball_cover_size(norm, args.dim)
    center = adv_mod.find_deficient_ball(
        experts, domain, norm, args.epsilon, args.m, args.k, nb
    )
    if center is None:
        report = {
            "found": False,
            "nb_cover_size": nb,
            "threshold": adv_mod.deficiency_threshold(args.m, args.k, nb),
        }
        _write(args.out, json.dumps(report, indent=2))
        return 0
    instance = adv_mod.build_adversarial(
        experts, domain, norm, args.epsilon, args.m, args.k, center
    )
    indist = adv_mod.verify_indistinguishable(instance, experts, args.k, norm)
    gap_min = adv_mod.verify_regret_gap(instance, minimal_regret_rule, experts, args.k, norm)
    gap_alt = adv_mod.verify_regret_gap(instance, alternative_rule, experts, args.k, norm)
    report = {
        "found": True,
        "nb_cover_size": nb,
        "threshold": adv_mod.deficiency_threshold(args.m, args.k, nb),
        "center": center.tolist(),
        "candidate_count": instance.count,
        "indistinguishable": bool(indist),
        "regret_gap_minimal": gap_min,
        "regret_gap_alternative": gap_alt,
        "epsilon": args.epsilon,
        "instance": json.loads(instance.to_json()),
    }
    _write(args.out, json.dumps(report, indent=2))
    return 0


BOUNDS_HEADER = (
    "d", "p", "epsilon", "m", "k", "vol_theta",
    "vol_ball_inv_lo", "vol_ball_inv_hi", "cover_lo", "cover_hi",
    "committee_lower", "committee_upper", "cube_lower", "cube_upper", "a3_valid",
)


def cmd_bounds(args: argparse.Namespace) -> int:
    dims = [args.dim] if args.dim else [1, 2, 3]
    rows = []
    for d in dims:
        rep = bounds_report(d, args.p, args.epsilon, args.m, args.k)
        rows.append(
            (rep.d, rep.p, rep.epsilon, rep.m, rep.k, rep.vol_theta)
            + rep.vol_ball_inv_window
            + rep.cover_window
            + rep.committee_window
            + rep.cube_committee_window
            + (1 if rep.a3_valid else 0,)
        )
    _write(args.out, rows_to_csv(BOUNDS_HEADER, rows))
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    from .verify import run_verification

    return run_verification(seed=args.seed)


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="metricvote", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_build = sub.add_parser("build-committee", help="construct a committee and emit JSON")
    _add_common(p_build)
    p_build.add_argument("--rule", choices=RULES, default="minimal_regret")

    p_exp = sub.add_parser("experiment", help="run seeded trials and emit CSV")
    _add_common(p_exp)
    p_exp.add_argument("--rule", choices=RULES, default="minimal_regret")
    p_exp.add_argument("--seed", type=int, default=0)
    p_exp.add_argument("--trials", type=int, default=100)
    p_exp.add_argument("--instance", type=str, default=None,
                       help="run the rule on one instance JSON file instead of sampling")

    p_adv = sub.add_parser("adversary", help="attack a committee file and emit a report")
    _add_common(p_adv)
    p_adv.add_argument("--committee", type=str, required=True, help="committee JSON path")

    p_bounds = sub.add_parser("bounds", help="emit the bound-window table as CSV")
    p_bounds.add_argument("--dim", type=int, default=None, help="single dimension; default 1..3")
    p_bounds.add_argument("--p", type=_parse_p, default=2.0)
    p_bounds.add_argument("--epsilon", type=float, default=0.01)
    p_bounds.add_argument("--m", type=int, default=200)
    p_bounds.add_argument("--k", type=int, default=1)
    p_bounds.add_argument("--out", type=str, default=None)

    p_verify = sub.add_parser("verify", help="run the compact end-to-end verification")
    p_verify.add_argument("--seed", type=int, default=0)

    args = parser.parse_args(argv)
    handlers = {
        "build-committee": cmd_build_committee,
        "experiment": cmd_experiment,
        "adversary": cmd_adversary,
        "bounds": cmd_bounds,
        "verify": cmd_verify,
    }
    try:
        return handlers[args.command](args)
    except (ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
