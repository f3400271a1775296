"""Ground-truth verification: exact optimality certificates and true regret.

The worst-case quality gap between two candidates g, h (an LP over all quality
vectors consistent with the votes) equals the shortest g -> h path length in
the preference graph.  Both optimality directions are certified constructively,
with no LP solver: the path itself is a feasible dual solution of that value,
and a feasible primal solution of the same value is assembled from shortest
path distances (distances from g for reachable candidates, a shifted distance
to g for the rest).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .instance import Candidates, RankingProfile, is_consistent
from .voting import DistanceMatrix, PrefGraph, apsp, bellman_ford, build_pref_graph, shortest_path


@dataclass(frozen=True)
class QualityCertificate:
    """A consistent quality vector anchored at candidate g (qhat[g] = 0)."""

    qhat: np.ndarray
    alpha: float  # shift applied to candidates unreachable from g
    source: int


@dataclass(frozen=True)
class DualPathCertificate:
    """A g -> h path whose edge list encodes a feasible dual solution."""

    path: tuple[int, ...]
    value: float
    witness_experts: tuple[int, ...]  # expert attaining each edge's minimal weight


def true_regret(q: np.ndarray, chosen) -> float:
    """Regret of a choice under hidden qualities q.

    A single id scores max_j q_j - q_chosen; a set of ell ids scores the best
    ell-subset quality sum minus the chosen sum.
    """
    q = np.asarray(q, dtype=float).reshape(-1)
    if np.isscalar(chosen) or isinstance(chosen, (int, np.integer)):
        return float(q.max() - q[int(chosen)])
    ids = [int(j) for j in chosen]
    best = float(np.sort(q)[::-1][: len(ids)].sum())
    return best - float(q[ids].sum())


def regret_bound(dm: DistanceMatrix, jstar: int) -> float:
    """Eccentricity of jstar: a certified upper bound on its true regret."""
    if dm.source is None:
        row = dm.values[jstar]
    elif dm.source == jstar:
        row = dm.values
    else:
        raise ValueError("single-source distances do not start at jstar")
    if row.shape[0] == 1:
        return 0.0
    mask = np.ones(row.shape[0], dtype=bool)
    mask[jstar] = False
    return float(row[mask].max())


def _is_ranked(prof: RankingProfile, g: int) -> bool:
    return bool(np.any(prof.ranked == g))


def primal_certificate(
    g: int,
    dm: DistanceMatrix,
    prof: RankingProfile,
    graph: PrefGraph,
) -> QualityCertificate:
    """Consistent quality vector with qhat[j] = d_G(g, j) on candidates
    reachable from g and qhat[j] = alpha - d_G(j, g) elsewhere.

    Requires g to appear in some expert's ranking (then every unreachable j has
    a direct edge to g, so d_G(j, g) is finite).  alpha is the exact maximum of
    d_G(j,g) + d_G(g,j') - d_G(j,j') over graph edges j -> j' crossing from the
    unreachable set into the reachable set, floored at 0.
    """
    if not _is_ranked(prof, g):
        raise ValueError(f"candidate {g} is ranked by no expert; certificate undefined")
    D = dm.values
    if dm.source is not None:
        raise ValueError("primal certificate needs all-pairs distances")
    reach = np.isfinite(D[g])
    m = D.shape[0]
    qhat = np.empty(m)
    qhat[reach] = D[g, reach]
    alpha = 0.0
    if not reach.all():
        unreach = ~reach
        if not np.all(np.isfinite(D[unreach, g])):
            raise ValueError("unreachable candidate cannot reach g; precondition violated")
        for j in np.flatnonzero(unreach):
            for jp in np.flatnonzero(reach):
                if np.isfinite(graph.weights[j, jp]):
                    alpha = max(alpha, D[j, g] + D[g, jp] - D[j, jp])
        qhat[unreach] = alpha - D[unreach, g]
    return QualityCertificate(qhat=qhat, alpha=float(alpha), source=g)


def dual_path_certificate(
    graph: PrefGraph,
    dm: DistanceMatrix,
    g: int,
    h: int,
) -> DualPathCertificate:
    """Shortest g -> h path with per-edge witness experts; value = d_G(g, h)."""
    if graph.witnesses is None:
        raise ValueError("graph was built without witnesses")
    path = shortest_path(dm, g, h)
    if path is None:
        raise ValueError("no g -> h path; the dual certificate does not exist")
    value = 0.0
    witnesses = []
    for a, b in zip(path[:-1], path[1:]):
        w = graph.weights[a, b]
        if not np.isfinite(w):
            raise ValueError("extracted path uses an absent edge")
        value += float(w)
        witnesses.append(int(graph.witnesses[a, b]))
    return DualPathCertificate(path=tuple(path), value=value, witness_experts=tuple(witnesses))


def certify_lp_duality(
    candidates: Candidates,
    expert_locs: np.ndarray,
    prof: RankingProfile,
    g: int,
    h: int,
    norm,
    tol: float = 1e-9,
) -> bool:
    """Certify that the worst-case quality gap from g to h equals d_G(g, h).

    Finite case: the dual path value and the primal qhat gap must both equal
    d_G(g, h) within tol, closing the optimum from both sides.  Infinite case:
    a consistent quality vector stays consistent after subtracting alpha from
    every candidate reachable from g, for alpha in {1, 10, 100} (the objective
    is unbounded along that direction).
    """
    expert_locs = np.atleast_2d(np.asarray(expert_locs, dtype=float))
    dist = norm.pairwise(expert_locs, candidates.locations) if expert_locs.shape[0] else None
    graph = build_pref_graph(
        candidates.locations, expert_locs, prof, norm, dist=dist, with_witnesses=True
    )
    dm = apsp(graph)
    target = dm.values[g, h]

    if np.isfinite(target):
        cert = dual_path_certificate(graph, dm, g, h)
        if abs(cert.value - target) > tol:
            return False
        if not _witnesses_valid(cert, graph, prof, dist):
            return False
        qc = primal_certificate(g, dm, prof, graph)
        if abs(qc.qhat[g]) > tol:
            return False
        if abs((qc.qhat[h] - qc.qhat[g]) - target) > tol:
            return False
        return is_consistent(qc.qhat, prof, candidates, expert_locs, norm, tol=tol)

    if prof.n == 0:
        base = np.zeros(candidates.m)
    else:
        source = int(prof.ranked[0, 0])
        base = bellman_ford(graph, source).values
    if not is_consistent(base, prof, candidates, expert_locs, norm, tol=tol):
        return False
    reach_g = np.isfinite(dm.values[g])
    if reach_g[h]:
        return False  # contradiction: target was infinite
    for alpha in (1.0, 10.0, 100.0):
        shifted = base - alpha * reach_g.astype(float)
        if not is_consistent(shifted, prof, candidates, expert_locs, norm, tol=tol):
            return False
    return True


def _witnesses_valid(
    cert: DualPathCertificate,
    graph: PrefGraph,
    prof: RankingProfile,
    dist: np.ndarray | None,
) -> bool:
    """Each path edge's witness expert must actually realize its weight."""
    if dist is None:
        return False
    kk = prof.ranked.shape[1]
    for (a, b), i in zip(zip(cert.path[:-1], cert.path[1:]), cert.witness_experts):
        if i < 0:
            return False
        ranking = prof.ranked[i]
        pos_a = np.flatnonzero(ranking == a)
        if pos_a.size == 0:
            return False
        pos_b = np.flatnonzero(ranking == b)
        if pos_b.size and pos_b[0] <= pos_a[0]:
            return False
        if abs((dist[i, b] - dist[i, a]) - graph.weights[a, b]) > 1e-12:
            return False
    return True
