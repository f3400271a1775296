"""Universal committee builders.

A committee is a set of expert locations fixed before candidates arrive.  The
single-winner builder covers the domain at radius eps/2, spans the cover with a
tree whose edges are at most eps long, and subdivides every tree edge into
ceil(8(m-1)/k) equal steps, placing an expert at each step.  The multi-winner
variant shrinks the cover to eps/(2*ell) and subdivides by a harmonic-number
count; the screening committee is just the cover itself.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .geometry import Cover, Domain, Norm, grid_cover


@dataclass(frozen=True)
class CommitteeBlueprint:
    """Expert locations plus the construction provenance behind them."""

    experts: np.ndarray  # (n, d), deduplicated
    cover: Cover
    tree_edges: tuple[tuple[int, int], ...]
    subdivisions: int  # experts per tree edge = subdivisions + 1, shared ends deduped
    epsilon: float
    m: int | None = None
    k: int | None = None
    ell: int | None = None

    @property
    def size(self) -> int:
        return self.experts.shape[0]


def build_neighbor_graph(cover: Cover, norm: Norm) -> list[tuple[int, int, float]]:
    """Edges (i, j, length), i < j, between cover points at distance in (0, 2r]."""
    if cover.size == 0:
        raise ValueError("cover must be nonempty")
    threshold = 2.0 * cover.radius
    dist = norm.pairwise(cover.points, cover.points)
    edges = []
    for i in range(cover.size):
        for j in range(i + 1, cover.size):
            d = float(dist[i, j])
            if 0.0 < d <= threshold:
                edges.append((i, j, d))
    return edges


class _UnionFind:
    def __init__(self, n: int) -> None:
        self.parent = list(range(n))

    def find(self, a: int) -> int:
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


def build_spanning_tree(n_vertices: int, edges: list[tuple[int, int, float]]) -> list[tuple[int, int]]:
    """Minimum spanning tree, Kruskal with ties broken by (length, i, j).

    Raises if the graph is disconnected, which signals an invalid cover of a
    convex domain (the neighbor graph of any valid cover is connected).
    """
    uf = _UnionFind(n_vertices)
    tree: list[tuple[int, int]] = []
    for i, j, _ in sorted(edges, key=lambda e: (e[2], e[0], e[1])):
        if uf.union(i, j):
            tree.append((i, j))
            if len(tree) == n_vertices - 1:
                break
    if len(tree) != n_vertices - 1:
        raise ValueError("neighbor graph is disconnected; cover is not valid for a convex domain")
    return tree


def _subdivision_experts(cover: Cover, tree: list[tuple[int, int]], n_e: int) -> np.ndarray:
    """All subdivision points of all tree edges, exact endpoints, deduplicated."""
    seen: set[bytes] = set()
    out: list[np.ndarray] = []

    def push(p: np.ndarray) -> None:
        key = p.tobytes()
        if key not in seen:
            seen.add(key)
            out.append(p)

    if not tree:
        for p in cover.points:
            push(np.asarray(p, dtype=float))
        return np.asarray(out)
    for i, j in tree:
        x = cover.points[i]
        y = cover.points[j]
        for step in range(n_e + 1):
            if step == 0:
                push(x.copy())
            elif step == n_e:
                push(y.copy())
            else:
                push(x + (step / n_e) * (y - x))
    return np.asarray(out)


def construct_universal(domain: Domain, norm: Norm, epsilon: float, m: int, k: int) -> CommitteeBlueprint:
    """Spanning-tree subdivision committee for top-k voting over m candidates.

    With a single-point cover the committee degenerates to that one point; a
    lone expert at an eps/2-cover point still bounds regret by eps/2 through
    the cover term of the regret bound.
    """
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    if m < 2:
        raise ValueError("m must be >= 2")
    if not 1 <= k <= m:
        raise ValueError("k must satisfy 1 <= k <= m")
    cover = grid_cover(domain, norm, epsilon / 2.0)
    n_e = -(-8 * (m - 1) // k)  # ceil
    if cover.size == 1:
        return CommitteeBlueprint(
            experts=cover.points.copy(), cover=cover, tree_edges=(), subdivisions=0,
            epsilon=epsilon, m=m, k=k,
        )
    tree = build_spanning_tree(cover.size, build_neighbor_graph(cover, norm))
    experts = _subdivision_experts(cover, tree, n_e)
    return CommitteeBlueprint(
        experts=experts, cover=cover, tree_edges=tuple(tree), subdivisions=n_e,
        epsilon=epsilon, m=m, k=k,
    )


def harmonic(n: int) -> float:
    """H_n = sum_{t=1}^n 1/t, with H_0 = 0."""
    return sum(1.0 / t for t in range(1, n + 1))


def construct_multiwinner(
    domain: Domain, norm: Norm, epsilon: float, m: int, k: int, ell: int
) -> CommitteeBlueprint:
    """Committee for choosing ell of m candidates from top-k rankings.

    Cover radius eps/(2*ell), neighbor threshold eps/ell, and
    ceil(8m(H_k - H_{k-ell})/ell) subdivisions per tree edge.
    """
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    if not 1 <= ell <= k <= m:
        raise ValueError("need 1 <= ell <= k <= m")
    cover = grid_cover(domain, norm, epsilon / (2.0 * ell))
    n_e = math.ceil(8.0 * m * (harmonic(k) - harmonic(k - ell)) / ell)
    if cover.size == 1:
        return CommitteeBlueprint(
            experts=cover.points.copy(), cover=cover, tree_edges=(), subdivisions=0,
            epsilon=epsilon, m=m, k=k, ell=ell,
        )
    tree = build_spanning_tree(cover.size, build_neighbor_graph(cover, norm))
    experts = _subdivision_experts(cover, tree, n_e)
    return CommitteeBlueprint(
        experts=experts, cover=cover, tree_edges=tuple(tree), subdivisions=n_e,
        epsilon=epsilon, m=m, k=k, ell=ell,
    )


def construct_screening(domain: Domain, norm: Norm, epsilon: float) -> CommitteeBlueprint:
    """First-round committee: experts exactly at an eps/2-cover, no tree."""
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    cover = grid_cover(domain, norm, epsilon / 2.0)
    return CommitteeBlueprint(
        experts=cover.points.copy(), cover=cover, tree_edges=(), subdivisions=0, epsilon=epsilon,
    )


def committee_to_json(blueprint: CommitteeBlueprint) -> str:
    payload = {
        "experts": blueprint.experts.tolist(),
        "cover": blueprint.cover.points.tolist(),
        "tree": [[int(i), int(j)] for i, j in blueprint.tree_edges],
        "n_e": int(blueprint.subdivisions),
    }
    return json.dumps(payload, indent=2)


def committee_experts_from_json(text: str) -> np.ndarray:
    obj = json.loads(text)
    experts = np.asarray(obj["experts"], dtype=float)
    return np.atleast_2d(experts)
