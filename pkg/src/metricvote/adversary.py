"""Adversarial instance construction: two worlds one committee cannot tell apart.

Given a committee with a sparsely populated ball, candidates are placed so that
two quality vectors q1 (quality falls with distance from the ball center) and
q2 (quality rises with it) induce byte-identical rankings from every expert,
forcing any deterministic rule into regret at least epsilon in one world.  The
key device: each shielded site inside the inner ball gets a cover of its
outward sphere sector, and the covering candidates are pushed onto the 4eps
sphere, where they strictly beat the shielded candidates for every expert
outside the 12eps ball.

Also houses the k-approval two-world generator showing that unranked approval
ballots cannot achieve bounded regret no matter the committee.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .geometry import (
    Ball,
    Domain,
    Norm,
    domain_bounding_box,
    domain_contains,
    domain_diameter,
    grid_cover,
    greedy_packing,
    ray_exit_parameter,
    ray_sphere_root,
)
from .instance import Candidates, profile
from .oracle import true_regret

# Cover radii are shrunk by DELTA_FACTOR * epsilon so every shielding
# inequality is strict and no tie-break can leak information.
DELTA_FACTOR = 1e-6
N_DIRECTIONS = 2048

LABEL_CENTER = "center"
LABEL_BOUNDARY = "boundary"
LABEL_INTERIOR = "interior-expert"
LABEL_ANNULUS = "annulus-expert"


class CountOverflowError(RuntimeError):
    """The construction placed at least m candidates; the targeted ball was not
    deficient enough under the constructed covers."""

    def __init__(self, placed: int, m: int) -> None:
        super().__init__(f"construction placed {placed} candidates, needs < {m}")
        self.placed = placed
        self.m = m


@dataclass(frozen=True)
class BoundaryCover:
    """Shield for one site: cover points of its outward sphere sector and the
    candidates they induce on the 4eps sphere."""

    site: np.ndarray
    site_norm: float  # distance of the site from the ball center
    sphere_radius: float  # 4eps - site_norm
    cover_radius: float  # target radius (2eps - site_norm/2) minus the strictness delta
    points: np.ndarray  # (w, d) cover points, on the site's sphere
    lambdas: np.ndarray  # (w,) ray scalings pushing each point to the 4eps sphere
    candidates: np.ndarray  # (w, d) candidate locations on the 4eps sphere


@dataclass(frozen=True)
class AdversarialInstance:
    center: np.ndarray
    epsilon: float
    k: int
    locations: np.ndarray  # (M, d) with k co-located candidates per site
    q1: np.ndarray
    q2: np.ndarray
    labels: tuple[str, ...]
    boundary_covers: tuple[BoundaryCover, ...]

    @property
    def count(self) -> int:
        return self.locations.shape[0]

    def world(self, which: int) -> Candidates:
        if which not in (1, 2):
            raise ValueError("world index must be 1 or 2")
        return Candidates(self.locations, self.q1 if which == 1 else self.q2)

    def to_json(self) -> str:
        payload = {
            "center": self.center.tolist(),
            "epsilon": self.epsilon,
            "k": self.k,
            "candidates": [
                {"loc": loc.tolist(), "q1": float(a), "q2": float(b), "label": lab}
                for loc, a, b, lab in zip(self.locations, self.q1, self.q2, self.labels)
            ],
            "boundary_covers": [
                {
                    "site": bc.site.tolist(),
                    "points": bc.points.tolist(),
                    "lambdas": bc.lambdas.tolist(),
                    "radius": bc.cover_radius,
                }
                for bc in self.boundary_covers
            ],
        }
        return json.dumps(payload, indent=2)


def unit_ball_cover_size(norm: Norm, dim: int) -> int:
    """Size of the constructed 1/4-cover of the unit ball (stands in for the
    covering number of the unit ball at radius 1/4; never smaller than it)."""
    return grid_cover(Ball(np.zeros(dim), 1.0), norm, 0.25).size


def deficiency_threshold(m: int, k: int, nb_cover_size: int) -> float:
    return m / (k * (nb_cover_size + 1)) - 1.0


def find_deficient_ball(
    expert_locs: np.ndarray,
    domain: Domain,
    norm: Norm,
    epsilon: float,
    m: int,
    k: int,
    nb_cover_size: int,
    samples: int = 10_000,
) -> np.ndarray | None:
    """First point of a greedy 24eps-packing whose 12eps ball holds fewer than
    m/(k(nb+1)) - 1 experts, or None when the committee is dense everywhere."""
    if domain_diameter(domain, norm) < 12.0 * epsilon:
        raise ValueError("domain diameter must be at least 12 * epsilon")
    expert_locs = _as_locs(expert_locs, domain.dim)
    packing = greedy_packing(domain, norm, 24.0 * epsilon, samples=samples)
    threshold = deficiency_threshold(m, k, nb_cover_size)
    for x in packing.points:
        if expert_locs.shape[0]:
            count = int(np.sum(np.atleast_1d(norm.length(expert_locs - x)) <= 12.0 * epsilon))
        else:
            count = 0
        if count < threshold:
            return x
    return None


def _as_locs(expert_locs: np.ndarray, dim: int) -> np.ndarray:
    expert_locs = np.asarray(expert_locs, dtype=float)
    if expert_locs.size == 0:
        return np.zeros((0, dim))
    return np.atleast_2d(expert_locs)


def _unit_directions(dim: int, n_directions: int) -> np.ndarray:
    if dim == 1:
        return np.array([[1.0], [-1.0]])
    angles = 2.0 * math.pi * np.arange(n_directions) / n_directions
    return np.stack([np.cos(angles), np.sin(angles)], axis=-1)


def _boundary_samples(
    domain: Domain,
    norm: Norm,
    center: np.ndarray,
    site: np.ndarray,
    sphere_radius: float,
    epsilon: float,
    extra_targets: np.ndarray,
    n_directions: int,
) -> np.ndarray:
    """Points of the site's sphere sector facing the outside of the 12eps ball.

    Each active direction (one along which the domain extends past the 12eps
    ball) contributes the point at distance sphere_radius from the site.
    Directions toward every outside expert and toward the bounding-box corners
    are always included, so the shield holds for the actual committee
    regardless of the angular resolution.
    """
    dim = site.shape[0]
    dirs = [_unit_directions(dim, n_directions)]
    low, high = domain_bounding_box(domain)
    if dim == 2:
        corners = np.array([[low[0], low[1]], [low[0], high[1]], [high[0], low[1]], [high[0], high[1]]])
        dirs.append(corners - site)
    if extra_targets.shape[0]:
        dirs.append(extra_targets - site)
    out = []
    for direction in np.concatenate(dirs, axis=0):
        dn = float(norm.length(direction))
        if dn <= 0.0:
            continue
        s_max = ray_exit_parameter(domain, norm, site, direction)
        if s_max <= 1e-15:
            continue
        far = site + s_max * direction
        if float(norm.length(far - center)) <= 12.0 * epsilon:
            continue
        out.append(site + sphere_radius * (direction / dn))
    if not out:
        return np.zeros((0, dim))
    return np.asarray(out)


def _greedy_point_cover(points: np.ndarray, norm: Norm, radius: float) -> np.ndarray:
    """First-uncovered greedy cover: chosen points are members of the set."""
    if points.shape[0] == 0:
        return points
    covered = np.zeros(points.shape[0], dtype=bool)
    chosen = []
    for idx in range(points.shape[0]):
        if covered[idx]:
            continue
        chosen.append(idx)
        covered |= norm.pairwise(points, points[idx][None, :])[:, 0] <= radius
    return points[chosen]


def build_adversarial(
    expert_locs: np.ndarray,
    domain: Domain,
    norm: Norm,
    epsilon: float,
    m: int,
    k: int,
    center: np.ndarray,
    n_directions: int = N_DIRECTIONS,
) -> AdversarialInstance:
    """Run the four placement steps around a deficient ball center.

    1. k candidates at the center (q1 = 2eps, q2 = 0).
    2. k candidates at each point of a shield cover for the center.
    3. For each expert strictly inside the 4eps ball: k candidates at her
       location (q1 = 2eps - ||e||/2, q2 = ||e||/2) plus k candidates at each
       point of her own shield cover, pushed to the 4eps sphere by a ray root.
    4. k candidates at each expert location in the 4eps..12eps annulus
       (q1 = 0, q2 = 2eps).

    Raises CountOverflowError if the total reaches m.
    """
    dim = domain.dim
    if dim not in (1, 2):
        raise ValueError("adversarial construction supports dimensions 1 and 2 only")
    center = np.asarray(center, dtype=float).reshape(-1)
    expert_locs = _as_locs(expert_locs, dim)
    dist_c = np.atleast_1d(norm.length(expert_locs - center)) if expert_locs.shape[0] else np.zeros(0)
    inside = expert_locs[dist_c < 4.0 * epsilon] if expert_locs.shape[0] else np.zeros((0, dim))
    annulus = (
        expert_locs[(dist_c >= 4.0 * epsilon) & (dist_c <= 12.0 * epsilon)]
        if expert_locs.shape[0]
        else np.zeros((0, dim))
    )
    outside = expert_locs[dist_c > 12.0 * epsilon] if expert_locs.shape[0] else np.zeros((0, dim))

    delta = DELTA_FACTOR * epsilon
    margin_scale = 0.0 if dim == 1 else 4.0 * (2.0 * math.pi / n_directions)

    locations: list[np.ndarray] = []
    q1: list[float] = []
    q2: list[float] = []
    labels: list[str] = []
    covers: list[BoundaryCover] = []

    def place(loc: np.ndarray, a: float, b: float, label: str) -> None:
        for _ in range(k):
            locations.append(loc.copy())
            q1.append(a)
            q2.append(b)
            labels.append(label)

    def shield(site: np.ndarray, label: str) -> None:
        site_norm = float(norm.length(site - center))
        sphere_radius = 4.0 * epsilon - site_norm
        rho_target = (2.0 * epsilon - 0.5 * site_norm) - delta
        rho_build = rho_target - margin_scale * sphere_radius
        if rho_build <= 0:
            raise ValueError("degenerate shield radius; site too close to the 4eps sphere")
        samples = _boundary_samples(
            domain, norm, center, site, sphere_radius, epsilon, outside, n_directions
        )
        w_points = _greedy_point_cover(samples, norm, rho_build)
        lams = []
        cands = []
        for w in w_points:
            lam, shifted = ray_sphere_root(site - center, w - center, 4.0 * epsilon, norm)
            cand = center + shifted
            if not bool(domain_contains(domain, norm, cand[None, :])[0]):
                raise ValueError("shield candidate escaped the domain; construction invalid")
            lams.append(lam)
            cands.append(cand)
            place(cand, 0.0, 2.0 * epsilon, LABEL_BOUNDARY)
        covers.append(
            BoundaryCover(
                site=site.copy(),
                site_norm=site_norm,
                sphere_radius=sphere_radius,
                cover_radius=rho_target,
                points=w_points,
                lambdas=np.asarray(lams),
                candidates=np.asarray(cands) if cands else np.zeros((0, dim)),
            )
        )

    place(center, 2.0 * epsilon, 0.0, LABEL_CENTER)
    shield(center, LABEL_CENTER)
    for e in inside:
        nv = float(norm.length(e - center))
        place(e, 2.0 * epsilon - 0.5 * nv, 0.5 * nv, LABEL_INTERIOR)
        shield(e, LABEL_INTERIOR)
    for e in annulus:
        place(e, 0.0, 2.0 * epsilon, LABEL_ANNULUS)

    if len(locations) >= m:
        raise CountOverflowError(len(locations), m)
    return AdversarialInstance(
        center=center,
        epsilon=epsilon,
        k=k,
        locations=np.asarray(locations),
        q1=np.asarray(q1),
        q2=np.asarray(q2),
        labels=tuple(labels),
        boundary_covers=tuple(covers),
    )


def indistinguishability_witness(
    adv: AdversarialInstance,
    expert_locs: np.ndarray,
    k: int,
    norm: Norm,
) -> int | None:
    """Id of the first expert whose ranking differs between the two worlds."""
    expert_locs = _as_locs(expert_locs, adv.locations.shape[1])
    if expert_locs.shape[0] == 0:
        return None
    prof1 = profile(adv.world(1), expert_locs, k, norm)
    prof2 = profile(adv.world(2), expert_locs, k, norm)
    mismatch = np.any(prof1.ranked != prof2.ranked, axis=1)
    if not mismatch.any():
        return None
    return int(np.argmax(mismatch))


def verify_indistinguishable(
    adv: AdversarialInstance,
    expert_locs: np.ndarray,
    k: int,
    norm: Norm,
) -> bool:
    return indistinguishability_witness(adv, expert_locs, k, norm) is None


def verify_regret_gap(
    adv: AdversarialInstance,
    rule,
    expert_locs: np.ndarray,
    k: int,
    norm: Norm,
) -> float:
    """Worst regret across the two worlds of the rule's (single) choice.

    The profile is identical in both worlds, so the rule runs once; the
    construction guarantees the result is at least epsilon.
    """
    expert_locs = _as_locs(expert_locs, adv.locations.shape[1])
    prof = profile(adv.world(1), expert_locs, k, norm)
    chosen = rule(adv.locations, expert_locs, prof, norm)
    return max(true_regret(adv.q1, chosen), true_regret(adv.q2, chosen))


HIGH_QUALITY = 4.0  # dominates any unit-interval perceived score


@dataclass(frozen=True)
class KApprovalWorlds:
    """Two quality vectors over one candidate layout on [0, 1] that induce the
    same k-approval ballot from every expert location."""

    locations: np.ndarray
    q1: np.ndarray
    q2: np.ndarray
    k: int
    ell: int

    def world(self, which: int) -> Candidates:
        return Candidates(self.locations, self.q1 if which == 1 else self.q2)


def kapproval_counterexample(k: int, ell: int = 1) -> KApprovalWorlds:
    """Candidate layout at 0, 1/2 (duplicated), 1 with flipped extreme/middle
    qualities across worlds; for ell >= 3, extra high-quality candidates are
    added so any ell-subset choice still forfeits 1/2 in one world."""
    if k < 2:
        raise ValueError("approval counterexample requires k >= 2")
    if not 1 <= ell <= k:
        raise ValueError("need 1 <= ell <= k")
    mids = (k - 2 if ell <= 2 else k - ell) + 1
    high = max(0, ell - 2)
    locs = [0.0] + [0.5] * mids + [0.5] * high + [1.0]
    q_mid1, q_mid2 = 0.0, 0.5
    q1 = [0.5] + [q_mid1] * mids + [HIGH_QUALITY] * high + [0.5]
    q2 = [0.0] + [q_mid2] * mids + [HIGH_QUALITY] * high + [0.0]
    return KApprovalWorlds(
        locations=np.asarray(locs).reshape(-1, 1),
        q1=np.asarray(q1),
        q2=np.asarray(q2),
        k=k,
        ell=ell,
    )
