"""Numeric bound windows: Gamma sandwiches, lp ball volumes, size windows.

Asymptotic statements are evaluated with their displayed explicit constants and
reported as windows, never as certified bounds; the suppressed constants inside
O(.) are not testable claims.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


def gamma_sandwich(x: float) -> tuple[float, float]:
    """Strict two-sided Stirling bracket sqrt(2pi/x)(x/e)^x < Gamma(x) < lo * e^(1/12x)."""
    if not x > 0:
        raise ValueError("gamma_sandwich requires x > 0")
    log_lo = 0.5 * math.log(2.0 * math.pi / x) + x * (math.log(x) - 1.0)
    return math.exp(log_lo), math.exp(log_lo + 1.0 / (12.0 * x))


def unit_ball_volume(d: int, p: float) -> float:
    """Volume of the unit lp ball in R^d: (2 Gamma(1/p + 1))^d / Gamma(d/p + 1)."""
    if d < 1:
        raise ValueError("dimension must be >= 1")
    if not p >= 1:
        raise ValueError("p must be >= 1")
    if math.isinf(p):
        return 2.0**d
    log_vol = d * (math.log(2.0) + math.lgamma(1.0 / p + 1.0)) - math.lgamma(d / p + 1.0)
    return math.exp(log_vol)


def ball_volume_inverse_window(d: int, p: float) -> tuple[float, float]:
    """Strict window around 1/vol(unit lp ball) from the Gamma sandwiches."""
    dp = 0.0 if math.isinf(p) else d / p
    shared = math.sqrt(2.0 * math.pi * (dp + 1.0)) * d**dp
    lo = shared / math.e * (1.0 / (4.0 * math.exp(1.0 / 12.0) * math.sqrt(math.pi))) ** d
    hi = shared * math.exp(1.0 / 12.0) * (math.e / (2.0 * math.sqrt(2.0 * math.pi))) ** d
    return lo, hi


def covering_volume_window(vol_theta: float, d: int, p: float, epsilon: float) -> tuple[float, float]:
    """Volume-argument window for the eps covering number of a convex body that
    contains an eps ball: ((1/eps)^d, (3/eps)^d) scaled by vol(body)/vol(ball)."""
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    ratio = vol_theta / unit_ball_volume(d, p)
    return (1.0 / epsilon) ** d * ratio, (3.0 / epsilon) ** d * ratio


def committee_size_window(
    d: int, p: float, epsilon: float, m: int, k: int, vol_theta: float = 1.0
) -> tuple[float, float]:
    """Explicit-constant window for the minimal universal committee size.

    lower: (1/(24 eps))^d * ratio * (m/(k(12^d + 1)) - 1), floored at 0 (the
    12^d term bounds the unit-ball 1/4-covering number).  upper:
    (8(m-1)/k + 1) * (6/eps)^d * ratio.  The lower expression needs the domain
    to contain a 24 eps ball to be meaningful; callers flag that separately.
    """
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    if m < 2 or not 1 <= k <= m:
        raise ValueError("need m >= 2 and 1 <= k <= m")
    ratio = vol_theta / unit_ball_volume(d, p)
    nb = 12**d
    lower = max(0.0, (1.0 / (24.0 * epsilon)) ** d * ratio * (m / (k * (nb + 1)) - 1.0))
    upper = (8.0 * (m - 1) / k + 1.0) * (6.0 / epsilon) ** d * ratio
    return lower, upper


def lp_cube_committee_window(d: int, p: float, epsilon: float, m: int) -> tuple[float, float]:
    """Unit-hypercube window with the printed closed-form constants (k = 1).

    Cross-checkable against committee_size_window composed with
    ball_volume_inverse_window; the two agree up to the suppressed
    dimension-only prefactors, and both are emitted by the CLI.
    """
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    dp = 0.0 if math.isinf(p) else d / p
    shape = d**dp * math.sqrt(dp + 1.0)
    lower = m * (1.0 / (1152.0 * math.exp(1.0 / 12.0) * epsilon * math.sqrt(math.pi))) ** d * shape
    upper = m * (3.0 * math.e / (epsilon * math.sqrt(2.0 * math.pi))) ** d * shape
    return lower, upper


def a3_epsilon_valid(epsilon: float) -> bool:
    """Whether epsilon is inside the hypercube theorem's stated range (0, 1/48)."""
    return 0.0 < epsilon < 1.0 / 48.0


@dataclass(frozen=True)
class BoundsReport:
    d: int
    p: float
    epsilon: float
    m: int
    k: int
    vol_theta: float
    vol_ball_inv_window: tuple[float, float]
    cover_window: tuple[float, float]
    committee_window: tuple[float, float]
    cube_committee_window: tuple[float, float]
    a3_valid: bool


def bounds_report(d: int, p: float, epsilon: float, m: int, k: int) -> BoundsReport:
    """All windows for the unit hypercube [0, 1]^d (volume 1)."""
    return BoundsReport(
        d=d,
        p=p,
        epsilon=epsilon,
        m=m,
        k=k,
        vol_theta=1.0,
        vol_ball_inv_window=ball_volume_inverse_window(d, p),
        cover_window=covering_volume_window(1.0, d, p, epsilon),
        committee_window=committee_size_window(d, p, epsilon, m, k),
        cube_committee_window=lp_cube_committee_window(d, p, epsilon, m),
        a3_valid=a3_epsilon_valid(epsilon),
    )
