"""Seeded experiment harness shared by the CLI and the acceptance suite.

Candidates are sampled uniformly over the domain with qualities uniform in
[0, diam(domain)], so location bias and quality are comparable in magnitude and
votes are nontrivially distorted.  All randomness flows through numpy
Generators seeded from explicit integers; a fixed seed reproduces every output
byte for byte.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .committee import (
    CommitteeBlueprint,
    construct_multiwinner,
    construct_screening,
    construct_universal,
)
from .geometry import Ball, Box, Domain, Norm, domain_diameter, unit_box
from .instance import Candidates, profile
from .oracle import regret_bound, true_regret
from .voting import (
    _graph_center,
    apsp,
    bellman_ford,
    build_pref_graph,
    minimal_regret_rule,
    multiwinner_with_bounds,
)

PASS_TOL = 1e-9


def sample_candidates(domain: Domain, norm: Norm, m: int, rng: np.random.Generator) -> Candidates:
    """m candidates uniform over the domain, qualities uniform in [0, diam]."""
    if isinstance(domain, Box):
        locs = rng.uniform(domain.low, domain.high, size=(m, domain.dim))
    else:
        low = domain.center - domain.radius
        high = domain.center + domain.radius
        rows = []
        while len(rows) < m:
            batch = rng.uniform(low, high, size=(max(2 * m, 8), domain.dim))
            inside = batch[np.atleast_1d(norm.length(batch - domain.center)) <= domain.radius]
            rows.extend(inside[: m - len(rows)])
        locs = np.asarray(rows)
    qualities = rng.uniform(0.0, domain_diameter(domain, norm), size=m)
    return Candidates(locations=locs, qualities=qualities)


@dataclass(frozen=True)
class SingleWinnerTrial:
    chosen_min: int
    regret_min: float
    bound_min: float
    chosen_alt: int
    regret_alt: float
    bound_alt: float


def run_single_winner_trial(
    cand: Candidates, expert_locs: np.ndarray, k: int, norm: Norm
) -> SingleWinnerTrial:
    """Both single-winner rules on one shared preference graph."""
    dist = norm.pairwise(expert_locs, cand.locations)
    prof = profile(cand, expert_locs, k, norm, dist=dist)
    graph = build_pref_graph(cand.locations, expert_locs, prof, norm, dist=dist)
    dm = apsp(graph)
    chosen_min, bound_min = _graph_center(dm.values)
    source = int(prof.ranked[0, 0])
    from_source = bellman_ford(graph, source).values
    first = prof.first_choices
    chosen_alt = int(first[np.argmax(from_source[first])])
    return SingleWinnerTrial(
        chosen_min=chosen_min,
        regret_min=true_regret(cand.qualities, chosen_min),
        bound_min=bound_min,
        chosen_alt=chosen_alt,
        regret_alt=true_regret(cand.qualities, chosen_alt),
        bound_alt=regret_bound(dm, chosen_alt),
    )


SWEEP_HEADER = (
    "d", "p", "epsilon", "m", "k", "trial",
    "chosen_min", "regret_min", "bound_min",
    "chosen_alt", "regret_alt", "bound_alt",
)


def single_winner_sweep(
    dims: Sequence[int],
    ps: Sequence[float],
    epsilons: Sequence[float],
    ms: Sequence[int],
    ks: Sequence[int],
    trials: int,
    seed: int,
) -> list[tuple]:
    """The end-to-end sweep behind the regret acceptance checks.

    For each parameter point a fresh spanning-tree committee is built and
    `trials` seeded instances are run through both single-winner rules.  The
    per-point generator is derived from (seed, point index), so any sub-slice
    of the sweep is reproducible on its own.
    """
    rows: list[tuple] = []
    point = 0
    for d in dims:
        domain = unit_box(d)
        for p in ps:
            norm = Norm(p)
            for eps in epsilons:
                for m in ms:
                    for k in ks:
                        committee = construct_universal(domain, norm, eps, m, k)
                        rng = np.random.default_rng(np.random.SeedSequence([seed, point]))
                        for t in range(trials):
                            cand = sample_candidates(domain, norm, m, rng)
                            res = run_single_winner_trial(cand, committee.experts, k, norm)
                            rows.append(
                                (d, p, eps, m, k, t,
                                 res.chosen_min, res.regret_min, res.bound_min,
                                 res.chosen_alt, res.regret_alt, res.bound_alt)
                            )
                        point += 1
    return rows


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def rows_to_csv(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    """CSV with a header row, shortest-roundtrip decimals, LF line endings."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


EXPERIMENT_HEADER = ("trial", "chosen", "true_regret", "bound", "epsilon", "pass")


def build_rule_committee(
    domain: Domain, norm: Norm, epsilon: float, m: int, k: int, ell: int, rule: str
) -> CommitteeBlueprint | tuple[CommitteeBlueprint, CommitteeBlueprint]:
    if rule in ("minimal_regret", "alternative"):
        return construct_universal(domain, norm, epsilon, m, k)
    if rule == "multiwinner":
        return construct_multiwinner(domain, norm, epsilon, m, k, ell)
    if rule == "two_round":
        screening = construct_screening(domain, norm, epsilon)
        m_sel = max(2, screening.size)
        selection = construct_universal(domain, norm, epsilon / 2.0, m_sel, 1)
        return screening, selection
    raise ValueError(f"unknown rule: {rule}")


def _two_round_trial(
    screening: CommitteeBlueprint,
    selection: CommitteeBlueprint,
    cand: Candidates,
    norm: Norm,
    epsilon: float,
) -> tuple[int, float, float]:
    """Winner, true regret, and the certified bound eps/2 + round-2 eccentricity."""
    prof1 = profile(cand, screening.experts, 1, norm)
    survivors = prof1.first_choices
    if survivors.size == 1:
        winner = int(survivors[0])
        return winner, true_regret(cand.qualities, winner), epsilon / 2.0
    sub = Candidates(cand.locations[survivors], cand.qualities[survivors])
    prof2 = profile(sub, selection.experts, 1, norm)
    graph = build_pref_graph(sub.locations, selection.experts, prof2, norm)
    dm = apsp(graph)
    local, ecc = _graph_center(dm.values)
    winner = int(survivors[local])
    return winner, true_regret(cand.qualities, winner), epsilon / 2.0 + ecc


def experiment_rows(
    domain: Domain,
    norm: Norm,
    epsilon: float,
    m: int,
    k: int,
    ell: int,
    rule: str,
    trials: int,
    seed: int,
) -> tuple[list[tuple], bool]:
    """Rows (trial, chosen, true_regret, bound, epsilon, pass) for one config."""
    built = build_rule_committee(domain, norm, epsilon, m, k, ell, rule)
    rng = np.random.default_rng(np.random.SeedSequence([seed]))
    rows: list[tuple] = []
    all_pass = True
    for t in range(trials):
        cand = sample_candidates(domain, norm, m, rng)
        if rule == "minimal_regret":
            res = run_single_winner_trial(cand, built.experts, k, norm)
            chosen, regret, bound = str(res.chosen_min), res.regret_min, res.bound_min
        elif rule == "alternative":
            res = run_single_winner_trial(cand, built.experts, k, norm)
            chosen, regret, bound = str(res.chosen_alt), res.regret_alt, res.bound_alt
        elif rule == "multiwinner":
            prof = profile(cand, built.experts, k, norm)
            ids, eccs = multiwinner_with_bounds(cand.locations, built.experts, prof, norm, ell)
            chosen = "|".join(str(j) for j in ids)
            regret = true_regret(cand.qualities, ids)
            # per-round center eccentricities certify the cumulative regret
            bound = float(sum(max(e, 0.0) for e in eccs))
        elif rule == "two_round":
            screening, selection = built
            winner, regret, bound = _two_round_trial(screening, selection, cand, norm, epsilon)
            chosen = str(winner)
        else:
            raise ValueError(f"unknown rule: {rule}")
        ok = regret <= epsilon + PASS_TOL
        all_pass = all_pass and ok
        rows.append((t, chosen, regret, bound, epsilon, 1 if ok else 0))
    return rows, all_pass
