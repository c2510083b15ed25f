"""First-order optimality certificates for tradeoff solutions.

The per-component stationarity conditions of the rate program, with
multipliers ``nu1`` (distortion), ``nu2`` (perception), ``xi`` (active upper
box ``gamma = lambda``) and ``eta`` (active lower box ``lambda_hat = 0``):

    gamma:       1/(2*gamma) - nu1*sqrt(lambda_hat/(lam-gamma)) - xi = 0
    lambda_hat (KL):  nu1*(1 - sqrt((lam-gamma)/lambda_hat))
                      + 0.5*nu2*(1/lam - 1/lambda_hat) - eta = 0
    lambda_hat (W2):  nu1*(1 - sqrt((lam-gamma)/lambda_hat))
                      + nu2*(1 - sqrt(lam/lambda_hat)) - eta = 0

At box corners the ratios are evaluated in their matched-vanishing limit
(``lambda_hat`` and ``lam-gamma`` reaching zero together have ratio one),
``xi``/``eta`` are set to whatever value closes the condition, and any
negative multiplier (a genuine violation) is reported through the residual
instead. Perfect-perception solutions carry ``nu2 = +inf`` with
``lambda_hat`` pinned to ``lam``; the pinned condition is defined as zero
residual and the perception equality is checked through complementarity.
"""

from __future__ import annotations

import math

import numpy as np

from .kernels import (
    distortion_component,
    perception_component_kl,
    perception_component_w2,
)
from .model import KktResiduals, PerceptionMetric, RdpSolution, SourceSpectrum

__all__ = ["residuals", "solution_residuals"]


def _gamma_condition(
    lam: float, gamma: float, lambda_hat: float, nu1: float
) -> tuple[float, float]:
    """Return (residual, xi) for the gamma stationarity condition."""
    if gamma < lam:
        ratio = math.sqrt(lambda_hat / (lam - gamma))
        return 1.0 / (2.0 * gamma) - nu1 * ratio, 0.0
    # saturated component: gamma = lam
    if lambda_hat == 0.0:
        pull = nu1  # matched vanishing, ratio -> 1
    elif nu1 == 0.0:
        pull = 0.0
    else:
        pull = math.inf
    xi = 1.0 / (2.0 * gamma) - pull
    return (0.0, xi) if xi >= 0.0 else (xi, 0.0)


def _lambda_hat_condition(
    lam: float,
    gamma: float,
    lambda_hat: float,
    nu1: float,
    nu2: float,
    metric: PerceptionMetric,
) -> tuple[float, float]:
    """Return (residual, eta) for the lambda_hat stationarity condition."""
    if math.isinf(nu2):
        # pinned reconstruction law; the multiplier lives on that constraint
        return 0.0, 0.0
    if lambda_hat > 0.0:
        base = nu1 * (1.0 - math.sqrt(max(lam - gamma, 0.0) / lambda_hat))
        if metric is PerceptionMetric.KL:
            base += 0.5 * nu2 * (1.0 / lam - 1.0 / lambda_hat)
        elif metric is PerceptionMetric.W2:
            base += nu2 * (1.0 - math.sqrt(lam / lambda_hat))
        return base, 0.0
    # lambda_hat = 0: the box multiplier eta absorbs any nonnegative pull
    base = 0.0
    if nu1 > 0.0 and gamma < lam:
        base = -math.inf  # distortion pull toward positive variance is unbounded
    if nu2 > 0.0 and metric is not PerceptionMetric.UNCONSTRAINED:
        base = -math.inf  # either divergence pulls toward matched variance
    return (0.0, base) if base >= 0.0 else (base, 0.0)


def residuals(
    lambdas: np.ndarray,
    gammas: np.ndarray,
    lambda_hats: np.ndarray,
    nu1: float,
    nu2: float,
    metric: PerceptionMetric,
    distortion_budget: float,
    perception_budget: float,
) -> KktResiduals:
    """Evaluate all first-order conditions at a candidate solution."""
    n = len(lambdas)
    res_g = np.zeros(n)
    res_h = np.zeros(n)
    xi = np.zeros(n)
    eta = np.zeros(n)
    dist_sum = 0.0
    perc_sum = 0.0
    for i in range(n):
        lam = float(lambdas[i])
        g = min(float(gammas[i]), lam)
        h = float(lambda_hats[i])
        res_g[i], xi[i] = _gamma_condition(lam, g, h, nu1)
        res_h[i], eta[i] = _lambda_hat_condition(lam, g, h, nu1, nu2, metric)
        dist_sum += distortion_component(lam, g, h)
        if metric is PerceptionMetric.KL:
            perc_sum += perception_component_kl(lam, h)
        elif metric is PerceptionMetric.W2:
            perc_sum += perception_component_w2(lam, h)
    comp_d = nu1 * (dist_sum - distortion_budget) if nu1 != 0.0 else 0.0
    if metric is PerceptionMetric.UNCONSTRAINED:
        comp_p = 0.0 if nu2 == 0.0 else math.inf
    elif math.isinf(nu2):
        comp_p = perc_sum - perception_budget
    elif nu2 != 0.0:
        comp_p = nu2 * (perc_sum - perception_budget)
    else:
        comp_p = 0.0
    return KktResiduals(
        stationarity_gamma=res_g,
        stationarity_lambda_hat=res_h,
        xi=xi,
        eta=eta,
        complementarity=max(abs(comp_d), abs(comp_p)),
    )


def solution_residuals(
    s: SourceSpectrum,
    sol: RdpSolution,
    metric: PerceptionMetric,
    distortion_budget: float,
    perception_budget: float,
) -> KktResiduals:
    """Convenience wrapper evaluating :func:`residuals` on a solution."""
    return residuals(
        s.lambdas,
        sol.gammas,
        sol.lambda_hats,
        sol.dual.nu1,
        sol.dual.nu2,
        metric,
        distortion_budget,
        perception_budget,
    )
