"""Compact end-to-end verification behind `metricvote verify`.

A fast subset of the full acceptance suite: one line per check, exit code 0
only if everything holds.  The pytest suite runs the complete sweeps.
"""

from __future__ import annotations

import math

import numpy as np

from . import adversary as adv
from .bounds import gamma_sandwich
from .committee import construct_screening, construct_universal
from .experiments import sample_candidates, run_single_winner_trial
from .geometry import L2, Norm, unit_box
from .instance import Candidates, approval_ballot, profile
from .oracle import certify_lp_duality, true_regret
from .voting import alternative_rule, minimal_regret_rule, two_round_protocol


def _check_committee_size() -> bool:
    built = construct_universal(unit_box(1), L2, 0.5, 9, 1)
    return built.size == 65


def _check_kapproval() -> bool:
    for k in (2, 3):
        worlds = adv.kapproval_counterexample(k)
        for e in np.linspace(0.0, 1.0, 101):
            b1 = approval_ballot(np.array([e]), worlds.world(1), k, L2)
            b2 = approval_ballot(np.array([e]), worlds.world(2), k, L2)
            if b1 != b2:
                return False
        worst = min(
            max(true_regret(worlds.q1, j), true_regret(worlds.q2, j))
            for j in range(worlds.locations.shape[0])
        )
        if abs(worst - 0.5) > 1e-12:
            return False
    return True


def _check_regret_sweep(seed: int) -> bool:
    domain = unit_box(1)
    eps, m, k = 0.5, 6, 2
    committee = construct_universal(domain, L2, eps, m, k)
    rng = np.random.default_rng(seed)
    for _ in range(25):
        cand = sample_candidates(domain, L2, m, rng)
        res = run_single_winner_trial(cand, committee.experts, k, L2)
        if res.regret_min > eps + 1e-9 or res.regret_alt > eps + 1e-9:
            return False
    return True


def _check_duality(seed: int) -> bool:
    rng = np.random.default_rng(seed)
    for _ in range(20):
        m = int(rng.integers(2, 6))
        n = int(rng.integers(1, 5))
        k = int(rng.integers(1, m + 1))
        cand = Candidates(rng.uniform(0, 1, (m, 1)), rng.uniform(0, 1, m))
        experts = rng.uniform(0, 1, (n, 1))
        prof = profile(cand, experts, k, L2)
        for g in range(m):
            for h in range(m):
                if g != h and not certify_lp_duality(cand, experts, prof, g, h, L2):
                    return False
    return True


def _check_gamma() -> bool:
    for x in (0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0):
        lo, hi = gamma_sandwich(x)
        g = math.exp(math.lgamma(x))
        if not lo < g < hi:
            return False
    return True


def _check_adversary() -> bool:
    domain = unit_box(1)
    eps, m, k = 1.0 / 24.0, 24, 1
    experts = np.linspace(0.55, 1.0, 10).reshape(-1, 1)
    nb = adv.unit_ball_cover_size(L2, 1)
    center = adv.find_deficient_ball(experts, domain, L2, eps, m, k, nb)
    if center is None:
        return False
    inst = adv.build_adversarial(experts, domain, L2, eps, m, k, center)
    if not adv.verify_indistinguishable(inst, experts, k, L2):
        return False
    gap = adv.verify_regret_gap(inst, minimal_regret_rule, experts, k, L2)
    return gap >= eps - 1e-9


def _check_two_round(seed: int) -> bool:
    domain = unit_box(1)
    eps = 0.5
    screening = construct_screening(domain, L2, eps)
    selection = construct_universal(domain, L2, eps / 2.0, max(2, screening.size), 1)
    rng = np.random.default_rng(seed)
    for _ in range(10):
        cand = sample_candidates(domain, L2, 100, rng)
        winner = two_round_protocol(screening, selection, cand, L2)
        if true_regret(cand.qualities, winner) > eps + 1e-9:
            return False
    return True


def run_verification(seed: int = 0) -> int:
    checks = [
        ("committee size (eps=0.5, m=9, k=1) = 65", _check_committee_size),
        ("k-approval two worlds indistinguishable, forced regret 1/2", _check_kapproval),
        ("single-winner regret <= epsilon on seeded instances", lambda: _check_regret_sweep(seed)),
        ("shortest-path duality certificates", lambda: _check_duality(seed)),
        ("gamma sandwich strict at 7 points", _check_gamma),
        ("adversarial ball forces regret >= epsilon", _check_adversary),
        ("two-round protocol regret <= epsilon", lambda: _check_two_round(seed)),
    ]
    failures = 0
    for name, fn in checks:
        ok = fn()
        print(f"{'PASS' if ok else 'FAIL'}  {name}")
        failures += 0 if ok else 1
    return 0 if failures == 0 else 1
