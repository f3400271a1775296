"""Normed-space primitives: lp norms, convex domains, covers, packings.

Everything downstream (committees, voting, adversarial constructions) is built
on the handful of operations in this module.  Points are plain float ndarrays;
a point set is a (count, dim) array.  All functions are pure and deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

TOL = 1e-9


@dataclass(frozen=True)
class Norm:
    """An lp norm on R^d.  Use p = math.inf for the max norm."""

    p: float

    def __post_init__(self) -> None:
        if not (self.p >= 1.0):
            raise ValueError(f"lp norm requires p >= 1, got {self.p}")

    @property
    def is_inf(self) -> bool:
        return math.isinf(self.p)

    def length(self, v: np.ndarray) -> np.ndarray | float:
        """Norm of v, reducing over the last axis."""
        a = np.abs(np.asarray(v, dtype=float))
        if self.is_inf:
            out = a.max(axis=-1)
        elif self.p == 1.0:
            out = a.sum(axis=-1)
        elif self.p == 2.0:
            out = np.sqrt((a * a).sum(axis=-1))
        else:
            out = (a**self.p).sum(axis=-1) ** (1.0 / self.p)
        return float(out) if np.ndim(out) == 0 else out

    def distance(self, x: np.ndarray, y: np.ndarray) -> float:
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if x.shape != y.shape:
            raise ValueError(f"dimension mismatch: {x.shape} vs {y.shape}")
        return float(self.length(x - y))

    def pairwise(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        """Distance matrix of shape (len(A), len(B))."""
        A = np.atleast_2d(np.asarray(A, dtype=float))
        B = np.atleast_2d(np.asarray(B, dtype=float))
        if A.shape[1] != B.shape[1]:
            raise ValueError(f"dimension mismatch: {A.shape} vs {B.shape}")
        return self.length(A[:, None, :] - B[None, :, :])


L1 = Norm(1.0)
L2 = Norm(2.0)
LINF = Norm(math.inf)


@dataclass(frozen=True)
class Box:
    """Axis-aligned box [low, high], coordinatewise low <= high."""

    low: np.ndarray
    high: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "low", np.asarray(self.low, dtype=float).reshape(-1))
        object.__setattr__(self, "high", np.asarray(self.high, dtype=float).reshape(-1))
        if self.low.shape != self.high.shape:
            raise ValueError("low/high dimension mismatch")
        if not np.all(self.low <= self.high):
            raise ValueError("box requires low <= high coordinatewise")

    @property
    def dim(self) -> int:
        return self.low.shape[0]


@dataclass(frozen=True)
class Ball:
    """Norm ball {x : ||x - center|| <= radius}; the norm is supplied per call."""

    center: np.ndarray
    radius: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "center", np.asarray(self.center, dtype=float).reshape(-1))
        if not self.radius > 0:
            raise ValueError("ball radius must be positive")

    @property
    def dim(self) -> int:
        return self.center.shape[0]


Domain = Union[Box, Ball]


def unit_box(dim: int) -> Box:
    return Box(np.zeros(dim), np.ones(dim))


def domain_contains(domain: Domain, norm: Norm, pts: np.ndarray, tol: float = TOL) -> np.ndarray:
    """Boolean membership per row of pts, with absolute slack tol."""
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    if isinstance(domain, Box):
        ok = (pts >= domain.low - tol) & (pts <= domain.high + tol)
        return ok.all(axis=1)
    r = norm.length(pts - domain.center)
    return np.atleast_1d(r) <= domain.radius + tol


def domain_bounding_box(domain: Domain) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(domain, Box):
        return domain.low, domain.high
    # A radius-r lp ball always fits in the coordinate cube of half-width r.
    return domain.center - domain.radius, domain.center + domain.radius


def domain_diameter(domain: Domain, norm: Norm) -> float:
    if isinstance(domain, Box):
        return float(norm.length(domain.high - domain.low))
    return 2.0 * domain.radius


def segment_point(x: np.ndarray, y: np.ndarray, t: float) -> np.ndarray:
    """Point x + t(y - x) on the segment, t in [0, 1]."""
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"segment parameter out of range: {t}")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise ValueError("dimension mismatch")
    return x + t * (y - x)


def _axis_counts(low: np.ndarray, high: np.ndarray, spacing: float) -> list[int]:
    counts = []
    for lo, hi in zip(low, high):
        width = hi - lo
        counts.append(max(1, math.ceil(width / spacing)) if width > 0 else 1)
    return counts


def _cell_grid(low: np.ndarray, high: np.ndarray, counts: list[int]) -> np.ndarray:
    """Centers of a regular cell partition of the box, row-major order."""
    axes = []
    for lo, hi, n in zip(low, high, counts):
        if hi > lo:
            w = (hi - lo) / n
            axes.append(lo + w * (np.arange(n) + 0.5))
        else:
            axes.append(np.array([lo]))
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)


@dataclass(frozen=True)
class Cover:
    """Point set covering its domain within `radius` (internal cover)."""

    radius: float
    points: np.ndarray

    @property
    def size(self) -> int:
        return self.points.shape[0]


@dataclass(frozen=True)
class Packing:
    """Point set with pairwise distances >= `separation`."""

    separation: float
    points: np.ndarray

    @property
    def size(self) -> int:
        return self.points.shape[0]


def grid_cover(domain: Domain, norm: Norm, r: float) -> Cover:
    """Construct an r-cover of the domain by a regular grid.

    Boxes: cells of spacing 2r/d^(1/p) (2r for the max norm), points at cell
    centers, so each cell's circumradius is at most r.  Balls: the same grid at
    half spacing over the bounding box, keeping interior centers and projecting
    centers of boundary-crossing cells onto the sphere; the halved spacing makes
    the projection error plus the cell circumradius stay within r.
    """
    if not r > 0:
        raise ValueError("cover radius must be positive")
    d = domain.dim
    dim_factor = 1.0 if norm.is_inf else d ** (1.0 / norm.p)
    spacing = 2.0 * r / dim_factor
    if isinstance(domain, Box):
        counts = _axis_counts(domain.low, domain.high, spacing)
        return Cover(radius=r, points=_cell_grid(domain.low, domain.high, counts))

    low, high = domain_bounding_box(domain)
    counts = _axis_counts(low, high, spacing / 2.0)
    grid = _cell_grid(low, high, counts)
    widths = (high - low) / np.asarray(counts, dtype=float)
    circum = float(norm.length(widths / 2.0))
    dist = np.atleast_1d(norm.length(grid - domain.center))
    pts = [domain.center.copy()]
    inside = grid[dist <= domain.radius]
    pts.extend(inside)
    band = (dist > domain.radius) & (dist <= domain.radius + circum)
    for g, dg in zip(grid[band], dist[band]):
        pts.append(domain.center + (g - domain.center) * (domain.radius / dg))
    seen: set[bytes] = set()
    out = []
    for p in pts:
        key = p.tobytes()
        if key not in seen:
            seen.add(key)
            out.append(p)
    return Cover(radius=r, points=np.asarray(out))


def domain_sample_grid(domain: Domain, norm: Norm, samples: int = 10_000) -> np.ndarray:
    """Deterministic dense sample of the domain with about `samples` points.

    Box corners / ball extreme points are included, so worst-case locations for
    cover verification are always probed.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    d = domain.dim
    side = max(2, round(samples ** (1.0 / d)))
    low, high = domain_bounding_box(domain)
    axes = [np.linspace(lo, hi, side) if hi > lo else np.array([lo]) for lo, hi in zip(low, high)]
    mesh = np.meshgrid(*axes, indexing="ij")
    grid = np.stack([m.ravel() for m in mesh], axis=-1)
    if isinstance(domain, Box):
        return grid
    keep = np.atleast_1d(norm.length(grid - domain.center)) <= domain.radius
    pts = [grid[keep], domain.center[None, :]]
    for axis in range(d):
        for sign in (-1.0, 1.0):
            e = domain.center.copy()
            e[axis] += sign * domain.radius
            pts.append(e[None, :])
    return np.concatenate(pts, axis=0)


def cover_verify(
    domain: Domain,
    norm: Norm,
    points: np.ndarray,
    r: float,
    samples: int = 10_000,
) -> bool:
    """Check that every dense-grid sample of the domain is within r of `points`."""
    grid = domain_sample_grid(domain, norm, samples)
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if grid.shape[0] == 0:
        return True
    if points.shape[0] == 0:
        return False
    chunk = max(1, 2_000_000 // max(1, points.shape[0]))
    for start in range(0, grid.shape[0], chunk):
        block = grid[start : start + chunk]
        nearest = norm.pairwise(block, points).min(axis=1)
        if np.any(nearest > r + TOL):
            return False
    return True


def greedy_packing(domain: Domain, norm: Norm, sep: float, samples: int = 10_000) -> Packing:
    """Greedy farthest-point packing over the dense sample grid.

    Starts from the first grid point and repeatedly inserts the grid point
    farthest from the chosen set while that distance is at least sep.  The
    result is maximal with respect to the grid: no remaining grid point can be
    added without violating the separation.
    """
    if not sep > 0:
        raise ValueError("separation must be positive")
    grid = domain_sample_grid(domain, norm, samples)
    chosen = [grid[0]]
    min_dist = norm.pairwise(grid, grid[0][None, :])[:, 0]
    while True:
        idx = int(np.argmax(min_dist))
        if min_dist[idx] < sep:
            break
        chosen.append(grid[idx])
        min_dist = np.minimum(min_dist, norm.pairwise(grid, grid[idx][None, :])[:, 0])
    return Packing(separation=sep, points=np.asarray(chosen))


def ray_sphere_root(
    x: np.ndarray,
    w: np.ndarray,
    R: float,
    norm: Norm,
    rel_tol: float = 1e-12,
) -> tuple[float, np.ndarray]:
    """Solve ||x + lambda (w - x)|| = R for the root on the increasing branch.

    Norms are measured from the coordinate origin, so callers translate the
    sphere center to 0 first.  Requires ||x|| < R and w != x; the map
    lambda -> ||x + lambda (w - x)|| is convex, below R at 0 and unbounded, so
    bracketing by doubling plus bisection finds the unique crossing.
    """
    x = np.asarray(x, dtype=float)
    w = np.asarray(w, dtype=float)
    direction = w - x
    if float(norm.length(direction)) == 0.0:
        raise ValueError("ray_sphere_root requires w != x")
    if not float(norm.length(x)) < R:
        raise ValueError("ray_sphere_root requires ||x|| < R")

    def f(lam: float) -> float:
        return float(norm.length(x + lam * direction))

    lo, hi = 0.0, 1.0
    while f(hi) <= R:
        lo = hi
        hi *= 2.0
        if hi > 2.0**80:
            raise ValueError("no root bracket found; precondition violated")
    while hi - lo > rel_tol * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if f(mid) <= R:
            lo = mid
        else:
            hi = mid
    lam = 0.5 * (lo + hi)
    return lam, x + lam * direction


def ray_exit_parameter(domain: Domain, norm: Norm, origin: np.ndarray, direction: np.ndarray) -> float:
    """Largest s >= 0 with origin + s * direction inside the domain.

    `origin` must lie in the domain; `direction` is a Euclidean direction
    vector.  Used to probe which directions lead out of a ball's neighborhood.
    """
    origin = np.asarray(origin, dtype=float)
    direction = np.asarray(direction, dtype=float)
    if isinstance(domain, Box):
        s = math.inf
        for a, dv, lo, hi in zip(origin, direction, domain.low, domain.high):
            if dv > 0:
                s = min(s, (hi - a) / dv)
            elif dv < 0:
                s = min(s, (lo - a) / dv)
        return max(0.0, s)
    shifted = origin - domain.center
    if float(norm.length(shifted + 0.0 * direction)) >= domain.radius:
        # Origin on the sphere: exit immediately unless the ray re-enters,
        # which convexity rules out.
        return 0.0
    lam, _ = ray_sphere_root(shifted, shifted + direction, domain.radius, norm)
    return lam
