"""Domain types shared by every solver in the package.

A Gaussian vector source is reduced (by ``from_covariance``) to its spectrum
of component variances. A query fixes a total squared-error distortion
budget D, a perception budget P, and the perception metric (Kullback-Leibler
divergence of the reconstruction law from the source law, squared
Wasserstein-2 distance, or no perception constraint at all). Solutions
allocate to each component a water level ``gamma`` (the MMSE of estimating
the component from its reconstruction), a reconstruction variance
``lambda_hat``, and a rate ``0.5*log(lambda/gamma)``.

Rates are stored in nats throughout; conversion to bits happens only at the
output boundary. For perfect-perception solutions (P = 0) the perception
multiplier of the dual point is reported as ``+inf``: the constraint admits
no strictly feasible point there, and the pinned reconstruction
``lambda_hat = lambda`` absorbs the multiplier.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import (
    ConvergenceError,
    DimensionZeroError,
    DomainError,
    NonPositiveDistortionError,
)
from .rootfind import bisect_root
from .symeig import SymMatrix, decompose, strip_null_components

__all__ = [
    "PerceptionMetric",
    "SolutionCase",
    "SourceSpectrum",
    "TradeoffQuery",
    "ComponentAllocation",
    "DualPoint",
    "RdpSolution",
    "KktResiduals",
    "CurveSweep",
    "from_covariance",
    "max_zero_rate_distortion",
    "zero_rate_reconstruction",
]

DEFAULT_NULL_RTOL = 1e-12


class PerceptionMetric(enum.Enum):
    """Which divergence constrains the reconstruction law."""

    KL = "kl"
    W2 = "w2"
    UNCONSTRAINED = "none"

    @classmethod
    def from_name(cls, name: str) -> "PerceptionMetric":
        try:
            return cls(name.strip().lower())
        except ValueError:
            raise DomainError(
                f"unknown perception metric {name!r}; expected kl, w2 or none"
            ) from None


class SolutionCase(enum.Enum):
    """Which budget constraints bind at the optimum."""

    BOTH_ACTIVE = "BothActive"
    DISTORTION_ONLY = "DistortionOnly"
    DISTORTION_INACTIVE = "DistortionInactive"


@dataclass(frozen=True)
class SourceSpectrum:
    """Component variances of a decorrelated Gaussian vector source.

    ``lambdas`` keeps the order it was given; spectra built from a
    covariance matrix arrive sorted descending. ``basis`` (rows are
    eigenvectors) is retained when the source came from a covariance and is
    not used by the solvers themselves.
    """

    lambdas: np.ndarray
    basis: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        lam = np.atleast_1d(np.asarray(self.lambdas, dtype=float))
        if lam.ndim != 1:
            raise DomainError("spectrum must be a flat vector of variances")
        if lam.size == 0:
            raise DimensionZeroError("spectrum has no components")
        if not np.all(np.isfinite(lam)):
            raise DomainError("spectrum entries must be finite")
        if np.any(lam <= 0.0):
            raise DomainError(
                "spectrum entries must be strictly positive; strip null components first"
            )
        lam.setflags(write=False)
        object.__setattr__(self, "lambdas", lam)
        if self.basis is not None:
            b = np.asarray(self.basis, dtype=float)
            if b.ndim != 2 or b.shape[0] != lam.size:
                raise DomainError("basis must have one row per spectrum component")
            b.setflags(write=False)
            object.__setattr__(self, "basis", b)

    @property
    def dim(self) -> int:
        return int(self.lambdas.size)

    @property
    def total_variance(self) -> float:
        return float(np.sum(self.lambdas))


@dataclass(frozen=True)
class TradeoffQuery:
    """One (distortion budget, perception budget, metric) evaluation point."""

    distortion_budget: float
    perception_budget: float
    metric: PerceptionMetric

    def __post_init__(self) -> None:
        d = float(self.distortion_budget)
        p = float(self.perception_budget)
        if not (math.isfinite(d) and d > 0.0):
            raise NonPositiveDistortionError(
                f"distortion budget must be finite and positive, got {d!r}"
            )
        if math.isnan(p) or p < 0.0:
            raise DomainError(f"perception budget must be nonnegative, got {p!r}")
        unconstrained = self.metric is PerceptionMetric.UNCONSTRAINED
        if unconstrained != math.isinf(p):
            raise DomainError(
                "metric 'none' requires an infinite perception budget and vice versa"
            )
        object.__setattr__(self, "distortion_budget", d)
        object.__setattr__(self, "perception_budget", p)


@dataclass(frozen=True)
class ComponentAllocation:
    """Water level, reconstruction variance and rate of one component."""

    gamma: float
    lambda_hat: float
    rate: float

    def __post_init__(self) -> None:
        if not (self.gamma > 0.0 and math.isfinite(self.gamma)):
            raise DomainError(f"gamma must be positive and finite, got {self.gamma!r}")
        if self.lambda_hat < 0.0 or math.isnan(self.lambda_hat):
            raise DomainError(f"lambda_hat must be nonnegative, got {self.lambda_hat!r}")
        if self.rate < 0.0 or math.isnan(self.rate):
            raise DomainError(f"rate must be nonnegative, got {self.rate!r}")


@dataclass(frozen=True)
class DualPoint:
    """Multipliers of the distortion and perception constraints.

    ``nu2`` may be ``+inf`` for perfect-perception solutions (see module
    docstring); both multipliers are otherwise finite and nonnegative.
    """

    nu1: float
    nu2: float

    def __post_init__(self) -> None:
        if math.isnan(self.nu1) or self.nu1 < 0.0 or math.isinf(self.nu1):
            raise DomainError(f"nu1 must be finite and nonnegative, got {self.nu1!r}")
        if math.isnan(self.nu2) or self.nu2 < 0.0:
            raise DomainError(f"nu2 must be nonnegative, got {self.nu2!r}")


@dataclass(frozen=True)
class RdpSolution:
    """A full evaluation of the tradeoff at one query point."""

    total_rate: float
    allocations: tuple[ComponentAllocation, ...]
    dual: DualPoint
    case_tag: SolutionCase
    kkt_residual: float
    achieved_distortion: float
    achieved_perception: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "allocations", tuple(self.allocations))
        if self.total_rate < 0.0 or math.isnan(self.total_rate):
            raise DomainError(f"total rate must be nonnegative, got {self.total_rate!r}")

    @property
    def gammas(self) -> np.ndarray:
        return np.array([a.gamma for a in self.allocations])

    @property
    def lambda_hats(self) -> np.ndarray:
        return np.array([a.lambda_hat for a in self.allocations])

    @property
    def rates(self) -> np.ndarray:
        return np.array([a.rate for a in self.allocations])


@dataclass(frozen=True)
class KktResiduals:
    """Stationarity and complementarity residuals of a solution.

    ``stationarity_gamma`` and ``stationarity_lambda_hat`` are the
    per-component residuals of the two first-order conditions with the box
    multipliers ``xi`` (for gamma = lambda) and ``eta`` (for lambda_hat = 0)
    substituted; ``complementarity`` is the largest complementary-slackness
    violation across all constraints.
    """

    stationarity_gamma: np.ndarray
    stationarity_lambda_hat: np.ndarray
    xi: np.ndarray
    eta: np.ndarray
    complementarity: float

    def max_abs(self) -> float:
        """Largest residual magnitude across all conditions."""
        parts = [
            float(np.max(np.abs(self.stationarity_gamma))),
            float(np.max(np.abs(self.stationarity_lambda_hat))),
            abs(self.complementarity),
        ]
        return max(parts)


@dataclass(frozen=True)
class CurveSweep:
    """Aligned grid of queries and solutions from a curve evaluation.

    ``distortions`` and ``perceptions`` hold the raw grid values for every
    row, including rows whose budgets form no valid query; for those the
    aligned ``queries``/``solutions`` entries are ``None`` and ``failures``
    records why (``"infeasible"`` or ``"convergence_failure"``).
    """

    distortions: tuple[float, ...]
    perceptions: tuple[float, ...]
    metric: PerceptionMetric
    queries: tuple[Optional[TradeoffQuery], ...]
    solutions: tuple[Optional[RdpSolution], ...]
    failures: tuple[Optional[str], ...]
    metadata: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        n = len(self.distortions)
        for name in ("perceptions", "queries", "solutions", "failures"):
            if len(getattr(self, name)) != n:
                raise DomainError(f"sweep field {name} misaligned with grid")


def from_covariance(m: SymMatrix | np.ndarray, tol: float | None = None) -> SourceSpectrum:
    """Decompose a covariance matrix into a source spectrum.

    Null components (eigenvalues at or below ``tol``, defaulting to
    1e-12 times the largest eigenvalue) are dropped; eigenvalues more
    negative than ``-tol`` raise :class:`NotPsdError`. Surviving
    eigenvalues arrive sorted descending with their basis rows retained.
    """
    e = decompose(m)
    if tol is None:
        lam_max = float(e.eigenvalues[0]) if e.eigenvalues.size else 0.0
        tol = DEFAULT_NULL_RTOL * max(lam_max, 0.0)
    stripped = strip_null_components(e, tol)
    return SourceSpectrum(lambdas=stripped.eigenvalues, basis=stripped.basis)


def _kl_term(lam: float, lam_hat: float) -> float:
    if lam_hat == 0.0:
        return math.inf
    return 0.5 * (lam_hat / lam - 1.0 + math.log(lam / lam_hat))


def zero_rate_reconstruction(
    s: SourceSpectrum, metric: PerceptionMetric, P: float
) -> tuple[np.ndarray, float]:
    """Cheapest zero-rate reconstruction meeting a perception budget.

    At zero rate every component is independent of the source, so the
    component distortion is ``lambda + lambda_hat`` and the only freedom is
    the reconstruction variance vector. Returns the distortion-minimizing
    ``lambda_hat`` vector and its total distortion; this is the boundary of
    the zero-rate feasibility region, found by bisection on the scalar
    multiplier of the perception constraint.
    """
    if math.isnan(P) or P < 0.0:
        raise DomainError(f"perception budget must be nonnegative, got {P!r}")
    lam = s.lambdas
    total = s.total_variance
    if metric is PerceptionMetric.UNCONSTRAINED or math.isinf(P):
        return np.zeros_like(lam), total
    if P == 0.0:
        return lam.copy(), 2.0 * total
    if metric is PerceptionMetric.W2:
        # lambda_hat = (t*lambda^0.5)^2 keeps the W2 sum at (1-t)^2 * total
        t = max(0.0, 1.0 - math.sqrt(P / total))
        hats = (t * t) * lam
        return hats, total + float(np.sum(hats))
    if metric is not PerceptionMetric.KL:
        raise DomainError(f"unsupported metric {metric!r}")

    def hats_of(log_mu: float) -> np.ndarray:
        mu = math.exp(log_mu)
        return lam * (mu / (mu + 2.0 * lam))

    def excess(log_mu: float) -> float:
        hats = hats_of(log_mu)
        return sum(_kl_term(l, h) for l, h in zip(lam, hats)) - P

    # KL of the argmin is strictly decreasing in mu; expand a log bracket
    lo = hi = 0.0
    step = 1.0
    while excess(lo) <= 0.0:
        if lo <= -700.0:
            # the budget is so large the optimal variances sit below
            # floating-point resolution; this point is feasible and its
            # distortion rounds to the infimum sum(lambdas)
            hats = hats_of(lo)
            return hats, total + float(np.sum(hats))
        lo = max(lo - step, -700.0)
        step *= 2.0
    step = 1.0
    while excess(hi) >= 0.0:
        if hi >= 709.0:
            raise ConvergenceError("zero-rate multiplier bracket failed", side="hi")
        hi = min(hi + step, 709.0)
        step *= 2.0
    root = bisect_root(excess, lo, hi, rtol=1e-14, atol=1e-14)
    hats = hats_of(root)
    return hats, total + float(np.sum(hats))


def max_zero_rate_distortion(s: SourceSpectrum, metric: PerceptionMetric, P: float) -> float:
    """Distortion of the cheapest zero-rate reconstruction within budget P.

    Equals ``2*sum(lambdas)`` at P = 0 (the reconstruction must copy the
    source law) and ``sum(lambdas)`` when perception is unconstrained
    (deterministic zero reconstruction). Nonincreasing in P.
    """
    return zero_rate_reconstruction(s, metric, P)[1]
