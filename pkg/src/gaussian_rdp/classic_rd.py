"""Classical reverse water-filling for Gaussian vector sources.

With no perception constraint the optimal coding of a decorrelated Gaussian
vector pours a common water level ``nu`` over the spectrum: every component
with variance above ``nu`` is coded down to MMSE ``nu``, components below it
get zero rate, and ``sum(min(nu, lambda))`` exhausts the distortion budget.
The defining equation ``sum(max(lambda - nu, 0)) = max(sum(lambda) - D, 0)``
is piecewise linear in ``nu``, so the level is found by an exact breakpoint
scan rather than iteration, and the two asymptotic laws (high-distortion and
low-distortion expansions of the rate) are provided as reference estimates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NonPositiveDistortionError, DomainError
from .kkt import residuals as kkt_residuals
from .model import (
    ComponentAllocation,
    DualPoint,
    PerceptionMetric,
    RdpSolution,
    SolutionCase,
    SourceSpectrum,
)

__all__ = [
    "WaterLevel",
    "water_level",
    "reverse_waterfill",
    "high_distortion_rd_estimate",
    "low_distortion_rd_estimate",
]


@dataclass(frozen=True)
class WaterLevel:
    """Common level ``nu`` and the per-component levels ``min(nu, lambda)``."""

    nu: float
    per_component: np.ndarray

    def __post_init__(self) -> None:
        pc = np.asarray(self.per_component, dtype=float)
        pc.setflags(write=False)
        object.__setattr__(self, "per_component", pc)


def water_level(s: SourceSpectrum, D: float) -> WaterLevel:
    """Solve the water-level equation exactly by breakpoint scan.

    For ``D >= sum(lambdas)`` both sides of the defining equation vanish for
    any level at or above the largest variance; the largest variance itself
    is returned as the canonical choice.

    Raises
    ------
    NonPositiveDistortionError
        If ``D <= 0``.
    """
    if not (D > 0.0) or math.isnan(D):
        raise NonPositiveDistortionError(f"distortion budget must be positive, got {D!r}")
    lam = s.lambdas
    total = s.total_variance
    if D >= total:
        nu = float(np.max(lam))
        return WaterLevel(nu=nu, per_component=lam.copy())
    desc = np.sort(lam)[::-1]
    # tail[k] = sum of the variances below the k active components, summed
    # smallest-first; the form (D - tail) / k avoids cancellation at small D
    tail = np.concatenate((np.cumsum(desc[::-1])[::-1], [0.0]))
    nu = D / lam.size
    for k in range(1, lam.size + 1):
        candidate = (D - float(tail[k])) / k
        next_break = desc[k] if k < lam.size else -math.inf
        if candidate >= next_break:
            nu = candidate
            break
    return WaterLevel(nu=nu, per_component=np.minimum(nu, lam))


def reverse_waterfill(s: SourceSpectrum, D: float) -> RdpSolution:
    """Rate-distortion solution with no perception budget.

    Each component is assigned water level ``min(nu, lambda)``,
    reconstruction variance ``lambda - gamma``, and rate
    ``0.5*log(lambda/gamma)``. The solution's ``achieved_perception`` is NaN:
    no perception metric is part of this problem.
    """
    w = water_level(s, D)
    lam = s.lambdas
    gammas = w.per_component
    hats = lam - gammas
    allocations = []
    for l, g, h in zip(lam, gammas, hats):
        rate = 0.5 * math.log(l / g) if g < l else 0.0
        allocations.append(ComponentAllocation(gamma=float(g), lambda_hat=float(h), rate=rate))
    total_rate = float(sum(a.rate for a in allocations))
    achieved = float(np.sum(gammas))
    # slack distortion constraint (D beyond total variance) forces nu1 = 0
    nu1 = 0.0 if D >= s.total_variance else 1.0 / (2.0 * w.nu)
    resid = kkt_residuals(
        lam, gammas, hats, nu1, 0.0, PerceptionMetric.UNCONSTRAINED, D, math.inf
    ).max_abs()
    return RdpSolution(
        total_rate=total_rate,
        allocations=tuple(allocations),
        dual=DualPoint(nu1=nu1, nu2=0.0),
        case_tag=SolutionCase.DISTORTION_ONLY,
        kkt_residual=resid,
        achieved_distortion=achieved,
        achieved_perception=math.nan,
    )


def high_distortion_rd_estimate(
    s: SourceSpectrum, eps: float
) -> tuple[float, np.ndarray]:
    """First-order rate expansion near the zero-rate boundary.

    At distortion ``sum(lambdas) - eps`` only the maximal-variance
    components are coded; the estimate is ``eps/(2*max(lambda))`` with the
    shortfall split equally over the maximal set.
    """
    if eps < 0.0 or math.isnan(eps):
        raise DomainError(f"eps must be nonnegative, got {eps!r}")
    lam = s.lambdas
    lam_max = float(np.max(lam))
    top = lam == lam_max
    levels = lam.copy()
    levels[top] = lam_max - eps / float(np.count_nonzero(top))
    return eps / (2.0 * lam_max), levels


def low_distortion_rd_estimate(s: SourceSpectrum, eps: float) -> tuple[float, float]:
    """Exact rate below saturation: every component stays above the level.

    For ``eps < L*min(lambda)`` the water level is exactly ``eps/L`` and the
    rate is ``0.5*sum(log(L*lambda/eps))``; past that the formula is only an
    estimate.
    """
    if not eps > 0.0 or math.isnan(eps):
        raise DomainError(f"eps must be positive, got {eps!r}")
    lam = s.lambdas
    n = lam.size
    rate = float(0.5 * np.sum(np.log(n * lam / eps)))
    return rate, eps / n
