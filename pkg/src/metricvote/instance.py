"""Worlds and preferences: candidates with hidden qualities and expert votes.

Candidates are held as parallel arrays (locations, qualities); candidate ids
and expert ids are row indices.  Experts are a bare (n, d) location array.
An expert scores candidate j as quality_j - distance(expert, c_j) and reports
her top-k ids, best first.  Voting rules never read qualities; they only see
locations and the reported rankings.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .geometry import Ball, Box, Domain, Norm, domain_bounding_box

# Perceived qualities closer than this are treated as tied and broken by
# (distance to the expert, then candidate id).
TIE_TOL = 1e-9


@dataclass(frozen=True)
class Candidates:
    """m candidates: locations (m, d) and hidden qualities (m,)."""

    locations: np.ndarray
    qualities: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "locations", np.atleast_2d(np.asarray(self.locations, dtype=float)))
        object.__setattr__(self, "qualities", np.asarray(self.qualities, dtype=float).reshape(-1))
        if self.locations.shape[0] != self.qualities.shape[0]:
            raise ValueError("locations/qualities length mismatch")

    @property
    def m(self) -> int:
        return self.locations.shape[0]

    @property
    def dim(self) -> int:
        return self.locations.shape[1]

    @classmethod
    def from_pairs(cls, pairs: Sequence[tuple[Sequence[float], float]]) -> "Candidates":
        return cls(
            locations=np.asarray([p[0] for p in pairs], dtype=float),
            qualities=np.asarray([p[1] for p in pairs], dtype=float),
        )


@dataclass(frozen=True)
class RankingProfile:
    """One top-k ranking per expert: ranked[i, h] is expert i's (h+1)-th pick."""

    ranked: np.ndarray  # (n, min(k, m)) candidate ids, best first
    k: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "ranked", np.atleast_2d(np.asarray(self.ranked, dtype=np.int64)))

    @property
    def n(self) -> int:
        return self.ranked.shape[0]

    def ranking(self, expert_id: int) -> tuple[int, ...]:
        return tuple(int(j) for j in self.ranked[expert_id])

    @property
    def first_choices(self) -> np.ndarray:
        """V: sorted unique ids of candidates ranked first by some expert."""
        if self.ranked.size == 0:
            return np.zeros(0, dtype=np.int64)
        return np.unique(self.ranked[:, 0])


def perceived_quality(expert_loc: np.ndarray, cand_loc: np.ndarray, quality: float, norm: Norm) -> float:
    """quality - distance(expert, candidate)."""
    return quality - norm.distance(np.asarray(expert_loc, dtype=float), np.asarray(cand_loc, dtype=float))


def perceived_matrix(expert_locs: np.ndarray, candidates: Candidates, norm: Norm) -> np.ndarray:
    dist = norm.pairwise(np.atleast_2d(expert_locs), candidates.locations)
    return candidates.qualities[None, :] - dist


def _rank_rows(dist: np.ndarray, qualities: np.ndarray, k: int) -> np.ndarray:
    """Ranking ids per row: perceived quality desc, then distance asc, then id.

    Perceived qualities are bucketed at TIE_TOL before comparison so that exact
    rational ties (constructed instances) and sub-tolerance float noise both
    fall through to the proximity tie-break.
    """
    pq = qualities[None, :] - dist
    key = np.round(pq / TIE_TOL)
    order = np.argsort(dist, axis=1, kind="stable")  # secondary: distance, then id
    key_by_order = np.take_along_axis(key, order, axis=1)
    primary = np.argsort(-key_by_order, axis=1, kind="stable")
    full = np.take_along_axis(order, primary, axis=1)
    kk = min(k, dist.shape[1])
    return full[:, :kk].astype(np.int64)


def top_k_ranking(expert_loc: np.ndarray, candidates: Candidates, k: int, norm: Norm) -> tuple[int, ...]:
    """A single expert's top-k candidate ids, best first."""
    if k < 1:
        raise ValueError("k must be >= 1")
    dist = norm.pairwise(np.atleast_2d(expert_loc), candidates.locations)
    return tuple(int(j) for j in _rank_rows(dist, candidates.qualities, k)[0])


def profile(
    candidates: Candidates,
    expert_locs: np.ndarray,
    k: int,
    norm: Norm,
    dist: np.ndarray | None = None,
) -> RankingProfile:
    """Top-k rankings for every expert.  `dist` may be passed to reuse a
    precomputed (n, m) distance matrix."""
    if k < 1:
        raise ValueError("k must be >= 1")
    expert_locs = np.atleast_2d(np.asarray(expert_locs, dtype=float))
    if dist is None:
        dist = norm.pairwise(expert_locs, candidates.locations)
    return RankingProfile(ranked=_rank_rows(dist, candidates.qualities, k), k=k)


def approval_ballot(expert_loc: np.ndarray, candidates: Candidates, k: int, norm: Norm) -> frozenset[int]:
    """Unordered top-k set (the k-approval ballot)."""
    return frozenset(top_k_ranking(expert_loc, candidates, k, norm))


def is_consistent(
    qhat: np.ndarray,
    prof: RankingProfile,
    candidates: Candidates,
    expert_locs: np.ndarray,
    norm: Norm,
    tol: float = 1e-9,
) -> bool:
    """Whether qhat satisfies every inequality implied by the profile.

    For each expert, each ranked candidate j at position h must score at least
    as well (under qhat) as every candidate ranked below j and every unranked
    candidate, within tol.
    """
    qhat = np.asarray(qhat, dtype=float).reshape(-1)
    if qhat.shape[0] != candidates.m:
        raise ValueError("qhat length must equal the number of candidates")
    dist = norm.pairwise(np.atleast_2d(expert_locs), candidates.locations)
    values = qhat[None, :] - dist  # (n, m) scores under qhat
    m = candidates.m
    kk = prof.ranked.shape[1]
    for i in range(prof.n):
        ranked = prof.ranked[i]
        row = values[i]
        unranked = np.setdiff1d(np.arange(m), ranked, assume_unique=False)
        # best qhat-score strictly below each position: suffix maxima over
        # (lower-ranked, then unranked) candidates
        ceiling = row[unranked].max() if unranked.size else -np.inf
        for h in range(kk - 1, -1, -1):
            if row[ranked[h]] < ceiling - tol:
                return False
            ceiling = max(ceiling, row[ranked[h]])
    return True


# ----------------------------------------------------------------------------
# Instance JSON (the schema consumed by the CLI)


def norm_to_json(norm: Norm) -> dict:
    return {"p": "inf" if norm.is_inf else norm.p}


def norm_from_json(obj: dict) -> Norm:
    p = obj["p"]
    return Norm(float("inf") if p == "inf" else float(p))


def domain_to_json(domain: Domain) -> dict:
    if isinstance(domain, Box):
        return {"box": {"low": domain.low.tolist(), "high": domain.high.tolist()}}
    return {"ball": {"center": domain.center.tolist(), "radius": domain.radius}}


def domain_from_json(obj: dict) -> Domain:
    if "box" in obj:
        return Box(low=obj["box"]["low"], high=obj["box"]["high"])
    if "ball" in obj:
        return Ball(center=obj["ball"]["center"], radius=float(obj["ball"]["radius"]))
    raise ValueError(f"unknown domain object: {obj}")


def instance_to_json(
    domain: Domain,
    norm: Norm,
    candidates: Candidates,
    expert_locs: np.ndarray,
    k: int,
) -> str:
    low, _ = domain_bounding_box(domain)
    payload = {
        "dim": int(low.shape[0]),
        "norm": norm_to_json(norm),
        "domain": domain_to_json(domain),
        "k": int(k),
        "candidates": [
            {"loc": loc.tolist(), "q": float(q)}
            for loc, q in zip(candidates.locations, candidates.qualities)
        ],
        "experts": np.atleast_2d(np.asarray(expert_locs, dtype=float)).tolist(),
    }
    return json.dumps(payload, indent=2)


def instance_from_json(text: str) -> tuple[Domain, Norm, Candidates, np.ndarray, int]:
    obj = json.loads(text)
    domain = domain_from_json(obj["domain"])
    norm = norm_from_json(obj["norm"])
    cands = Candidates(
        locations=np.asarray([c["loc"] for c in obj["candidates"]], dtype=float),
        qualities=np.asarray([c["q"] for c in obj["candidates"]], dtype=float),
    )
    experts = np.asarray(obj["experts"], dtype=float)
    if experts.size == 0:
        experts = np.zeros((0, obj["dim"]))
    return domain, norm, cands, experts, int(obj["k"])
