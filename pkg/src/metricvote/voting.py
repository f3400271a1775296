"""Preference graphs and the voting rules built on their shortest paths.

The preference graph has candidates as vertices and an edge j -> j' whenever
some expert ranks j and places j' below it (or leaves j' unranked), weighted by
the smallest distance differential d(e, c_j') - d(e, c_j) across such experts.
For rankings induced by any true quality vector the graph has no negative
cycle, and the shortest-path distance d_G(g, h) equals the largest quality gap
q_h - q_g over all quality vectors consistent with the votes.  Voting rules
therefore reduce to graph centers and single-source distances.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .committee import CommitteeBlueprint
from .instance import Candidates, RankingProfile, profile

NEG_CYCLE_TOL = 1e-9


class NegativeCycleError(ValueError):
    """Raised when shortest paths expose a negative cycle, i.e. the ranking
    profile is not inducible by any quality vector."""


@dataclass(frozen=True)
class PrefGraph:
    """Weighted directed graph over candidate ids; +inf marks absent edges."""

    weights: np.ndarray  # (m, m), diagonal 0
    witnesses: np.ndarray | None = None  # (m, m) expert id attaining each min, -1 if absent

    @property
    def m(self) -> int:
        return self.weights.shape[0]


@dataclass(frozen=True)
class DistanceMatrix:
    """Shortest-path distances; source is None for all-pairs, else the row id."""

    values: np.ndarray  # (m, m) for all-pairs, (m,) for single-source
    source: int | None = None
    successor: np.ndarray | None = None  # next-hop matrix for path extraction

    @property
    def m(self) -> int:
        return self.values.shape[-1]


def build_pref_graph(
    cand_locs: np.ndarray,
    expert_locs: np.ndarray,
    prof: RankingProfile,
    norm,
    dist: np.ndarray | None = None,
    with_witnesses: bool = False,
) -> PrefGraph:
    """Edge weights minimized across experts, one pass over (expert, rank) pairs.

    `dist` may carry a precomputed (n, m) expert-candidate distance matrix.
    Qualities are never consulted; the graph is a function of locations and the
    reported rankings only.
    """
    cand_locs = np.atleast_2d(np.asarray(cand_locs, dtype=float))
    expert_locs = np.atleast_2d(np.asarray(expert_locs, dtype=float))
    m = cand_locs.shape[0]
    n = expert_locs.shape[0]
    weights = np.full((m, m), np.inf)
    np.fill_diagonal(weights, 0.0)
    if n == 0 or m == 1:
        return PrefGraph(weights=weights, witnesses=_empty_witnesses(m) if with_witnesses else None)
    if dist is None:
        dist = norm.pairwise(expert_locs, cand_locs)

    ranked = prof.ranked  # (n, kk)
    kk = ranked.shape[1]
    # position of every candidate within each expert's ranking, kk if unranked
    pos = np.full((n, m), kk, dtype=np.int64)
    np.put_along_axis(pos, ranked, np.arange(kk, dtype=np.int64)[None, :], axis=1)
    dist_src = np.take_along_axis(dist, ranked, axis=1)  # (n, kk)
    vals = dist[:, None, :] - dist_src[:, :, None]  # (n, kk, m)
    valid = pos[:, None, :] > np.arange(kk)[None, :, None]
    vals = np.where(valid, vals, np.inf).reshape(n * kk, m)
    src_flat = ranked.reshape(-1)

    order = np.argsort(src_flat, kind="stable")
    vals_sorted = vals[order]
    src_sorted = src_flat[order]
    starts = np.flatnonzero(np.r_[True, src_sorted[1:] != src_sorted[:-1]])
    group_ids = src_sorted[starts]
    group_min = np.minimum.reduceat(vals_sorted, starts, axis=0)
    better = group_min < weights[group_ids]
    weights[group_ids] = np.where(better, group_min, weights[group_ids])

    witnesses = None
    if with_witnesses:
        wit = np.full((m, m), n, dtype=np.int64)
        expert_of_row = np.repeat(np.arange(n, dtype=np.int64), kk)
        hit_rows, hit_cols = np.nonzero(np.isfinite(vals) & (vals == weights[src_flat]))
        np.minimum.at(wit, (src_flat[hit_rows], hit_cols), expert_of_row[hit_rows])
        wit[wit == n] = -1
        np.fill_diagonal(wit, -1)
        witnesses = wit
    return PrefGraph(weights=weights, witnesses=witnesses)


def _empty_witnesses(m: int) -> np.ndarray:
    return np.full((m, m), -1, dtype=np.int64)


def _floyd(values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Floyd-Warshall over +inf-extended reals with a successor matrix."""
    D = values.copy()
    m = D.shape[0]
    succ = np.where(np.isfinite(D), np.arange(m, dtype=np.int64)[None, :], -1)
    np.fill_diagonal(succ, np.arange(m))
    for via in range(m):
        alt = D[:, via, None] + D[None, via, :].reshape(1, m)
        better = alt < D
        if better.any():
            D = np.where(better, alt, D)
            succ = np.where(better, succ[:, via, None], succ)
    diag = np.diagonal(D)
    if np.any(diag < -NEG_CYCLE_TOL):
        raise NegativeCycleError(
            f"negative cycle detected (diagonal min {diag.min():.3e}); profile is not inducible"
        )
    return D, succ


def apsp(graph: PrefGraph) -> DistanceMatrix:
    """All-pairs shortest paths; raises NegativeCycleError on non-inducible input."""
    values, succ = _floyd(graph.weights)
    return DistanceMatrix(values=values, source=None, successor=succ)


def shortest_path(dm: DistanceMatrix, g: int, h: int) -> list[int] | None:
    """Vertex sequence of a shortest g -> h path, or None if unreachable."""
    if dm.successor is None:
        raise ValueError("path extraction requires an all-pairs DistanceMatrix")
    if not np.isfinite(dm.values[g, h]):
        return None
    path = [g]
    cur = g
    for _ in range(dm.m + 1):
        if cur == h:
            return path
        cur = int(dm.successor[cur, h])
        path.append(cur)
    raise NegativeCycleError("path extraction did not terminate; negative cycle suspected")


def bellman_ford(graph: PrefGraph, source: int) -> DistanceMatrix:
    """Single-source distances with negative edges; raises on negative cycles."""
    W = graph.weights
    m = graph.m
    dist = W[source].copy()
    dist[source] = 0.0
    for _ in range(m - 1):
        relaxed = np.minimum(dist, (dist[:, None] + W).min(axis=0))
        if np.array_equal(relaxed, dist):
            break
        dist = relaxed
    check = (dist[:, None] + W).min(axis=0)
    if np.any(check < dist - NEG_CYCLE_TOL):
        raise NegativeCycleError("negative cycle detected; profile is not inducible")
    return DistanceMatrix(values=dist, source=source)


def _graph_center(values: np.ndarray) -> tuple[int, float]:
    """Vertex minimizing its eccentricity max_{j' != j} d(j, j'); lowest id wins."""
    m = values.shape[0]
    if m == 1:
        return 0, 0.0
    off = values.copy()
    np.fill_diagonal(off, -np.inf)
    ecc = off.max(axis=1)
    center = int(np.argmin(ecc))
    return center, float(ecc[center])


def minimal_regret_rule(
    cand_locs: np.ndarray,
    expert_locs: np.ndarray,
    prof: RankingProfile,
    norm,
    dist: np.ndarray | None = None,
) -> int:
    """Graph center of the preference graph: the minimal-regret candidate."""
    graph = build_pref_graph(cand_locs, expert_locs, prof, norm, dist=dist)
    center, _ = _graph_center(apsp(graph).values)
    return center


def alternative_rule(
    cand_locs: np.ndarray,
    expert_locs: np.ndarray,
    prof: RankingProfile,
    norm,
    dist: np.ndarray | None = None,
) -> int:
    """Single-source variant for spanning-tree committees.

    Distances from the lowest-id expert's favorite v form a quality vector
    consistent with the votes; the winner is the first-choice candidate of
    greatest such proxy quality (ties to the lowest id).
    """
    cand_locs = np.atleast_2d(np.asarray(cand_locs, dtype=float))
    if cand_locs.shape[0] == 1:
        return 0
    if prof.n == 0:
        raise ValueError("alternative rule needs at least one expert")
    graph = build_pref_graph(cand_locs, expert_locs, prof, norm, dist=dist)
    source = int(prof.ranked[0, 0])
    dist_from_v = bellman_ford(graph, source).values
    first = prof.first_choices
    return int(first[np.argmax(dist_from_v[first])])


def multiwinner_rule(
    cand_locs: np.ndarray,
    expert_locs: np.ndarray,
    prof: RankingProfile,
    norm,
    ell: int,
    dist: np.ndarray | None = None,
) -> list[int]:
    """ell rounds of graph-center selection with vertex deletion in between."""
    chosen, _ = multiwinner_with_bounds(cand_locs, expert_locs, prof, norm, ell, dist=dist)
    return chosen


def multiwinner_with_bounds(
    cand_locs: np.ndarray,
    expert_locs: np.ndarray,
    prof: RankingProfile,
    norm,
    ell: int,
    dist: np.ndarray | None = None,
) -> tuple[list[int], list[float]]:
    """Multi-winner selection plus the per-round center eccentricities.

    Shortest paths are recomputed on the vertex-deleted subgraph each round,
    exactly mirroring the delete-and-recenter loop; at desk scale the repeated
    O(m^3) passes are negligible.
    """
    cand_locs = np.atleast_2d(np.asarray(cand_locs, dtype=float))
    m = cand_locs.shape[0]
    if not 1 <= ell <= min(prof.k, m):
        raise ValueError("need 1 <= ell <= min(k, m)")
    graph = build_pref_graph(cand_locs, expert_locs, prof, norm, dist=dist)
    alive = np.arange(m)
    chosen: list[int] = []
    bounds: list[float] = []
    for _ in range(ell):
        sub = graph.weights[np.ix_(alive, alive)]
        values, _ = _floyd(sub)
        local, ecc = _graph_center(values)
        chosen.append(int(alive[local]))
        bounds.append(ecc)
        alive = np.delete(alive, local)
    return chosen, bounds


def two_round_protocol(
    screening: CommitteeBlueprint,
    selection: CommitteeBlueprint,
    candidates: Candidates,
    norm,
) -> int:
    """Screen with top-1 votes, then run the minimal-regret rule on survivors.

    This simulates both voting rounds, so unlike the rules above it takes full
    candidates (qualities induce the votes).  Survivors are the candidates who
    ranked first for some screening expert; the returned id is global.
    """
    prof1 = profile(candidates, screening.experts, 1, norm)
    survivors = prof1.first_choices
    if survivors.size == 0:
        raise ValueError("screening committee is empty")
    if survivors.size == 1:
        return int(survivors[0])
    sub = Candidates(candidates.locations[survivors], candidates.qualities[survivors])
    prof2 = profile(sub, selection.experts, 1, norm)
    local = minimal_regret_rule(sub.locations, selection.experts, prof2, norm)
    return int(survivors[local])
