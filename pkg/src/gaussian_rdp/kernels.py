"""Per-component loss kernels and closed-form stationary maps.

For one decorrelated component of variance ``lam`` the achievable points are
parametrized by the water level ``gamma`` (MMSE, in ``(0, lam]``) and the
reconstruction variance ``lambda_hat >= 0``:

    distortion  D(gamma, lambda_hat) = lam - 2*sqrt(lambda_hat*(lam-gamma)) + lambda_hat
    KL loss     P(lambda_hat) = 0.5*(lambda_hat/lam - 1 + log(lam/lambda_hat))
    W2 loss     P(lambda_hat) = (sqrt(lam) - sqrt(lambda_hat))**2
    rate        0.5*log(lam/gamma)

Given positive multipliers ``(nu1, nu2)`` for the two budgets, the inner
minimization of ``rate + nu1*D + nu2*P`` decouples per component and has the
closed-form stationary points implemented here.

KL metric: ``gamma`` is the unique root in ``(0, lam)`` of

    nu1*(1 - 2*nu1*g) = 0.5*nu2*(4*g^2*nu1^2/(lam-g) - 1/lam)

after which ``lambda_hat = (lam-g)/(4*g^2*nu1^2)``. The root is found on the
``(lam-g)``-scaled form of the equation, a quadratic with a guaranteed sign
change over ``(0, lam)`` and no pole, then Newton-polished; the explicit
quadratic formula is kept only as a cross-check because its valid sign
branch flips with ``nu2 - 1``.

W2 metric: with ``theta = sqrt((lam-g)/lambda_hat)``, ``theta`` is the
unique root of

    theta/(1 + (1-theta)*nu1/nu2) = sqrt(1 - theta/(2*nu1*lam))

whose left side increases and right side decreases over the bracket
``(0, min(1, 2*nu1*lam))``; then ``gamma = theta/(2*nu1)`` and
``lambda_hat = lam/(1 + (1-theta)*nu1/nu2)^2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, DualDegenerateError
from .rootfind import bisect_root

__all__ = [
    "ThetaFixedPoint",
    "distortion_component",
    "perception_component_kl",
    "perception_component_w2",
    "stationary_gamma_kl",
    "stationary_gamma_kl_quadratic",
    "kl_unique_residual",
    "stationary_lambda_hat_kl",
    "gamma_from_lambda_hat",
    "theta_fixed_point_w2",
    "stationary_pair_w2",
    "perfect_perception_gamma",
]


def _check_lambda(lam: float) -> None:
    if not (lam > 0.0 and math.isfinite(lam)):
        raise DomainError(f"component variance must be positive and finite, got {lam!r}")


def _check_duals(nu1: float, nu2: float) -> None:
    if not nu1 > 0.0 or not nu2 > 0.0:
        raise DualDegenerateError(
            f"stationary maps need strictly positive multipliers, got ({nu1!r}, {nu2!r})"
        )


def distortion_component(lam: float, gamma: float, lambda_hat: float) -> float:
    """Mean squared error of one component, ``>= 0`` for all valid inputs."""
    _check_lambda(lam)
    if not 0.0 < gamma <= lam:
        raise DomainError(f"gamma must lie in (0, {lam}], got {gamma!r}")
    if lambda_hat < 0.0 or math.isnan(lambda_hat):
        raise DomainError(f"lambda_hat must be nonnegative, got {lambda_hat!r}")
    return lam - 2.0 * math.sqrt(lambda_hat * max(lam - gamma, 0.0)) + lambda_hat


def perception_component_kl(lam: float, lambda_hat: float) -> float:
    """KL divergence of the reconstruction law from the source law.

    Returns ``+inf`` at ``lambda_hat = 0`` (point mass against a density),
    which is what lets the solver reject zero-variance reconstructions
    under any finite KL budget.
    """
    _check_lambda(lam)
    if lambda_hat < 0.0 or math.isnan(lambda_hat):
        raise DomainError(f"lambda_hat must be nonnegative, got {lambda_hat!r}")
    if lambda_hat == 0.0:
        return math.inf
    return 0.5 * (lambda_hat / lam - 1.0 + math.log(lam / lambda_hat))


def perception_component_w2(lam: float, lambda_hat: float) -> float:
    """Squared Wasserstein-2 distance between the two component laws."""
    _check_lambda(lam)
    if lambda_hat < 0.0 or math.isnan(lambda_hat):
        raise DomainError(f"lambda_hat must be nonnegative, got {lambda_hat!r}")
    d = math.sqrt(lam) - math.sqrt(lambda_hat)
    return d * d


def kl_unique_residual(lam: float, nu1: float, nu2: float, gamma: float) -> float:
    """Residual of the KL stationarity equation at a candidate gamma."""
    return nu1 * (1.0 - 2.0 * nu1 * gamma) - 0.5 * nu2 * (
        4.0 * gamma * gamma * nu1 * nu1 / (lam - gamma) - 1.0 / lam
    )


def _kl_quadratic_coeffs(lam: float, nu1: float, nu2: float) -> tuple[float, float, float]:
    a = 2.0 * nu1 * nu1 * (1.0 - nu2)
    b = -(nu1 + 2.0 * nu1 * nu1 * lam + 0.5 * nu2 / lam)
    c = nu1 * lam + 0.5 * nu2
    return a, b, c


def stationary_gamma_kl(lam: float, nu1: float, nu2: float) -> float:
    """Optimal water level of one component under the KL metric.

    Unique root in ``(0, lam)`` of the stationarity equation; strictly
    below ``lam`` for any positive multipliers.

    Raises
    ------
    DualDegenerateError
        If either multiplier is not strictly positive.
    """
    _check_lambda(lam)
    _check_duals(nu1, nu2)
    a, b, c = _kl_quadratic_coeffs(lam, nu1, nu2)

    def h(g: float) -> float:
        return (a * g + b) * g + c

    # endpoint signs are known analytically: h(0) = c > 0, h(lam) = -2*nu1^2*lam^2*nu2 < 0
    root = bisect_root(h, 0.0, lam, f_lo=c, f_hi=-2.0 * nu1 * nu1 * lam * lam * nu2)
    for _ in range(3):
        slope = 2.0 * a * root + b
        if slope == 0.0:
            break
        step = h(root) / slope
        candidate = root - step
        if 0.0 < candidate < lam and abs(h(candidate)) <= abs(h(root)):
            root = candidate
        else:
            break
    return root


def stationary_gamma_kl_quadratic(lam: float, nu1: float, nu2: float) -> float:
    """Explicit-formula cross-check for the KL water level, ``nu2 != 1`` only.

    Solves the same quadratic in closed form and returns the root lying in
    ``(0, lam)``; kept separate from the production path because the valid
    sign branch depends on ``nu2 - 1``.
    """
    _check_lambda(lam)
    _check_duals(nu1, nu2)
    a, b, c = _kl_quadratic_coeffs(lam, nu1, nu2)
    if a == 0.0:
        return -c / b
    disc = b * b - 4.0 * a * c
    if disc < 0.0:
        raise DomainError("quadratic discriminant negative; no real stationary point")
    q = -0.5 * (b + math.copysign(math.sqrt(disc), b))
    roots = [q / a]
    if q != 0.0:
        roots.append(c / q)
    inside = [r for r in roots if 0.0 < r < lam]
    if not inside:
        raise DomainError(f"no quadratic root inside (0, {lam}): {roots}")
    return inside[0]


def stationary_gap_kl(lam: float, nu1: float, nu2: float) -> float:
    """Gap ``lam - gamma`` at the KL stationary point, free of cancellation.

    Rewriting the stationarity quadratic in the gap variable keeps full
    relative precision when the optimal water level sits within rounding
    distance of ``lam``, where forming ``lam - gamma`` from the water level
    would lose every significant digit.  The constant term of the shifted
    quadratic is the exact product ``-2 nu1^2 lam^2 nu2``.
    """
    _check_lambda(lam)
    _check_duals(nu1, nu2)
    a, b0, _ = _kl_quadratic_coeffs(lam, nu1, nu2)
    b = -(2.0 * a * lam + b0)
    c = -2.0 * nu1 * nu1 * lam * lam * nu2
    if a == 0.0:
        return -c / b
    disc = b * b - 4.0 * a * c
    if disc < 0.0:
        raise DomainError("quadratic discriminant negative; no real stationary point")
    q = -0.5 * (b + math.copysign(math.sqrt(disc), b))
    roots = [q / a]
    if q != 0.0:
        roots.append(c / q)
    inside = [r for r in roots if 0.0 < r < lam]
    if not inside:
        raise DomainError(f"no gap root inside (0, {lam}): {roots}")
    return min(inside)


def stationary_pair_kl(lam: float, nu1: float, nu2: float) -> tuple[float, float]:
    """Jointly stationary ``(gamma, lambda_hat)`` of one KL component.

    The reconstruction variance is built from the gap form so components
    pinned near zero rate keep an accurate ``lambda_hat`` even when the
    water level itself rounds to ``lam``.  May return a nonfinite or zero
    ``lambda_hat`` when the multipliers are degenerate enough to underflow
    the gap; callers should treat that as a zero-rate boundary evaluation.
    """
    try:
        gap = stationary_gap_kl(lam, nu1, nu2)
    except DomainError:
        gap = None
    if gap is not None and gap <= 0.5 * lam:
        gamma = lam - gap
    else:
        gamma = stationary_gamma_kl(lam, nu1, nu2)
        gap = lam - gamma
    denom = 4.0 * gamma * gamma * nu1 * nu1
    lam_hat = gap / denom if denom > 0.0 else math.nan
    return gamma, lam_hat


def stationary_lambda_hat_kl(lam: float, gamma: float, nu1: float) -> float:
    """Optimal reconstruction variance under KL, given the water level."""
    _check_lambda(lam)
    if not 0.0 < gamma < lam:
        raise DomainError(f"gamma must lie in (0, {lam}), got {gamma!r}")
    if not nu1 > 0.0:
        raise DualDegenerateError(f"nu1 must be positive, got {nu1!r}")
    return (lam - gamma) / (4.0 * gamma * gamma * nu1 * nu1)


def gamma_from_lambda_hat(lam: float, lambda_hat: float, nu1: float) -> float:
    """Water level from the reconstruction variance, KL stationarity inverse."""
    _check_lambda(lam)
    if not lambda_hat > 0.0:
        raise DomainError(f"lambda_hat must be positive, got {lambda_hat!r}")
    if not nu1 > 0.0:
        raise DualDegenerateError(f"nu1 must be positive, got {nu1!r}")
    # hypot form of sqrt(1 + 16*lam*lambda_hat*nu1^2) avoids squaring; the
    # split square roots keep lam*lambda_hat itself in double range
    z = 4.0 * nu1 * math.sqrt(lam) * math.sqrt(lambda_hat)
    if z > 1e17:
        # 1 + sqrt(1 + z^2) equals z to machine precision, including z = inf
        return math.sqrt(lam) / math.sqrt(lambda_hat) / (2.0 * nu1)
    return 2.0 * lam / (1.0 + math.hypot(1.0, z))


@dataclass(frozen=True)
class ThetaFixedPoint:
    """Root of the W2 balance equation with its achieved residual."""

    theta: float
    residual: float


def theta_fixed_point_w2(lam: float, nu1: float, nu2: float) -> ThetaFixedPoint:
    """Solve the W2 balance equation for one component.

    The left side increases from 0 and the right side decreases from 1 over
    ``(0, min(1, 2*nu1*lam))``, so the crossing is unique; bisection plus a
    Newton polish leaves a residual at machine level (``<= 1e-12``
    contractually).
    """
    _check_lambda(lam)
    _check_duals(nu1, nu2)
    u = nu1 / nu2
    cap = 2.0 * nu1 * lam

    def g(t: float) -> float:
        return t / (1.0 + (1.0 - t) * u) - math.sqrt(max(1.0 - t / cap, 0.0))

    def g_prime(t: float) -> float:
        den = 1.0 + (1.0 - t) * u
        lhs = (1.0 + u) / (den * den)
        inner = max(1.0 - t / cap, 1e-300)
        return lhs + 0.5 / (cap * math.sqrt(inner))

    hi = min(1.0, cap)
    root = bisect_root(g, 0.0, hi, f_lo=-1.0)
    for _ in range(4):
        step = g(root) / g_prime(root)
        candidate = root - step
        if 0.0 < candidate < hi and abs(g(candidate)) <= abs(g(root)):
            root = candidate
        else:
            break
    return ThetaFixedPoint(theta=root, residual=g(root))


def stationary_pair_w2(lam: float, nu1: float, nu2: float) -> tuple[float, float]:
    """Optimal (water level, reconstruction variance) under the W2 metric."""
    theta = theta_fixed_point_w2(lam, nu1, nu2).theta
    gamma = theta / (2.0 * nu1)
    den = 1.0 + (1.0 - theta) * nu1 / nu2
    lambda_hat = lam / (den * den)
    return gamma, lambda_hat


def perfect_perception_gamma(lam: float, nu1: float) -> float:
    """Water level of one component when the reconstruction law is pinned.

    This is the KL/W2-independent perfect-perception solution
    ``2*lam/(1 + sqrt(1 + 16*nu1^2*lam^2))``, in ``(0, lam)`` for any
    positive ``nu1``.
    """
    _check_lambda(lam)
    if not nu1 > 0.0:
        raise DualDegenerateError(f"nu1 must be positive, got {nu1!r}")
    return 2.0 * lam / (1.0 + math.hypot(1.0, 4.0 * nu1 * lam))
