"""Tests for per-component kernels and stationary-point maps.

High-precision reference values were produced with a 50-digit arbitrary
precision solve of the scalar stationarity conditions and are frozen here.
"""

import math

import numpy as np
import pytest

from gaussian_rdp import kernels
from gaussian_rdp.errors import DomainError, DualDegenerateError

# Scalar stationary points at lam = 1, nu1 = 1, nu2 = 1.  The divergence
# metric case solves in closed form: gamma = 3/7, lambda_hat = 7/9.
KL_UNIT = {
    "gamma": 3.0 / 7.0,
    "lambda_hat": 7.0 / 9.0,
    "distortion": 4.0 / 9.0,
    "perception": 0.0145461030293419277314577540898,
}

# Transport metric at the same duals: theta is the root of
# t^3 - 4t^2 + 12t - 8 = 0 in (0, 1).
W2_UNIT = {
    "theta": 0.860319418003893468177200083761,
    "gamma": 0.43015970900194673408860004188,
    "lambda_hat": 0.769898905872859696502604437709,
    "distortion": 0.445180948628113670541695583231,
    "perception": 0.0150212396261669364530955413506,
}

# Asymmetric point: lam = 2, nu1 = 0.7, nu2 = 0.3.
KL_ASYM = {
    "gamma": 0.684116459364421137324960606353,
    "lambda_hat": 1.43450248397586439108851365165,
    "distortion": 0.686675555172164667963947708714,
    "perception": 0.0247901672565583366451698052056,
}

W2_ASYM = {
    "theta": 0.936556624524205789157930984449,
    "gamma": 0.668969017517289849398522131749,
    "lambda_hat": 1.51746989714315878799344519405,
    "distortion": 0.67507692777217769972463183763,
    "perception": 0.0332541780543894073310417320185,
}


def test_distortion_component_values():
    assert kernels.distortion_component(1.0, 0.5, 0.5) == 0.5
    # At lambda_hat = lam - gamma the distortion equals gamma.
    assert abs(kernels.distortion_component(2.0, 0.7, 1.3) - 0.7) < 1e-15
    # Collapse corner: lambda_hat = 0 gives distortion lam.
    assert kernels.distortion_component(3.0, 1.0, 0.0) == 3.0
    # Zero-rate corner gamma = lambda_hat = lam also gives distortion lam.
    assert abs(kernels.distortion_component(2.0, 2.0, 2.0) - 4.0) < 1e-15


def test_distortion_component_domain():
    with pytest.raises(DomainError):
        kernels.distortion_component(0.0, 0.5, 0.5)
    with pytest.raises(DomainError):
        kernels.distortion_component(1.0, 0.0, 0.5)
    with pytest.raises(DomainError):
        kernels.distortion_component(1.0, 1.5, 0.5)
    with pytest.raises(DomainError):
        kernels.distortion_component(1.0, 0.5, -0.1)


def test_kl_component_values():
    assert kernels.perception_component_kl(1.0, 1.0) == 0.0
    assert abs(
        kernels.perception_component_kl(1.0, math.e) - (math.e - 2.0) / 2.0
    ) < 1e-15
    assert math.isinf(kernels.perception_component_kl(1.0, 0.0))


def test_w2_component_values():
    assert kernels.perception_component_w2(1.0, 1.0) == 0.0
    assert kernels.perception_component_w2(4.0, 0.0) == 4.0
    assert abs(kernels.perception_component_w2(4.0, 1.0) - 1.0) < 1e-15


def test_kl_stationary_unit_point():
    g = kernels.stationary_gamma_kl(1.0, 1.0, 1.0)
    assert abs(g - KL_UNIT["gamma"]) < 1e-14
    h = kernels.stationary_lambda_hat_kl(1.0, g, 1.0)
    assert abs(h - KL_UNIT["lambda_hat"]) < 1e-13
    assert abs(
        kernels.distortion_component(1.0, g, h) - KL_UNIT["distortion"]
    ) < 1e-13
    assert abs(
        kernels.perception_component_kl(1.0, h) - KL_UNIT["perception"]
    ) < 1e-13


def test_kl_stationary_asymmetric_point():
    g = kernels.stationary_gamma_kl(2.0, 0.7, 0.3)
    assert abs(g - KL_ASYM["gamma"]) < 1e-13
    h = kernels.stationary_lambda_hat_kl(2.0, g, 0.7)
    assert abs(h - KL_ASYM["lambda_hat"]) < 1e-12
    assert abs(
        kernels.distortion_component(2.0, g, h) - KL_ASYM["distortion"]
    ) < 1e-12
    assert abs(
        kernels.perception_component_kl(2.0, h) - KL_ASYM["perception"]
    ) < 1e-13


def test_kl_quadratic_route_agrees():
    # The closed-form quadratic is kept as an independent route; both must
    # land on the same root even when the leading coefficient changes sign.
    cases = [
        (1.0, 1.0, 1.0),
        (2.0, 0.7, 0.3),
        (0.5, 3.0, 2.0),
        (4.0, 0.05, 5.0),
        (1.0, 2.0, 1.0),  # degenerate leading coefficient: nu2 = 1
    ]
    for lam, nu1, nu2 in cases:
        a = kernels.stationary_gamma_kl(lam, nu1, nu2)
        b = kernels.stationary_gamma_kl_quadratic(lam, nu1, nu2)
        assert abs(a - b) < 1e-12 * lam


def test_kl_stationary_residual_is_tiny():
    rng = np.random.default_rng(17)
    for trial in range(40):
        lam = float(rng.uniform(0.05, 8.0))
        nu1 = float(rng.uniform(0.02, 4.0))
        nu2 = float(rng.uniform(0.02, 4.0))
        g = kernels.stationary_gamma_kl(lam, nu1, nu2)
        assert 0.0 < g < lam
        r = kernels.kl_unique_residual(lam, nu1, nu2, g)
        scale = max(nu1, nu2 / lam, 1.0)
        assert abs(r) < 1e-11 * scale


def test_kl_degenerate_duals_raise():
    with pytest.raises(DualDegenerateError):
        kernels.stationary_gamma_kl(1.0, 0.0, 1.0)
    with pytest.raises(DualDegenerateError):
        kernels.stationary_gamma_kl(1.0, 1.0, 0.0)


def test_gamma_lambda_hat_roundtrip():
    rng = np.random.default_rng(29)
    for trial in range(40):
        lam = float(rng.uniform(0.05, 8.0))
        nu1 = float(rng.uniform(0.02, 4.0))
        g = float(rng.uniform(0.01, 0.99) * lam)
        h = kernels.stationary_lambda_hat_kl(lam, g, nu1)
        back = kernels.gamma_from_lambda_hat(lam, h, nu1)
        assert abs(back - g) < 1e-12 * lam


def test_gamma_from_lambda_hat_huge_arguments():
    # The inverse map must survive arguments whose squares overflow.
    g = kernels.gamma_from_lambda_hat(1e200, 1e200, 1e150)
    assert 0.0 < g < 1e200


def test_w2_theta_unit_point():
    fp = kernels.theta_fixed_point_w2(1.0, 1.0, 1.0)
    assert abs(fp.theta - W2_UNIT["theta"]) < 1e-14
    assert abs(fp.residual) < 1e-12
    # Cubic witness for the same root.
    t = fp.theta
    assert abs(t**3 - 4.0 * t**2 + 12.0 * t - 8.0) < 1e-12


def test_w2_pair_unit_point():
    g, h = kernels.stationary_pair_w2(1.0, 1.0, 1.0)
    assert abs(g - W2_UNIT["gamma"]) < 1e-14
    assert abs(h - W2_UNIT["lambda_hat"]) < 1e-13
    assert abs(
        kernels.distortion_component(1.0, g, h) - W2_UNIT["distortion"]
    ) < 1e-13
    assert abs(
        kernels.perception_component_w2(1.0, h) - W2_UNIT["perception"]
    ) < 1e-13


def test_w2_pair_asymmetric_point():
    fp = kernels.theta_fixed_point_w2(2.0, 0.7, 0.3)
    assert abs(fp.theta - W2_ASYM["theta"]) < 1e-13
    g, h = kernels.stationary_pair_w2(2.0, 0.7, 0.3)
    assert abs(g - W2_ASYM["gamma"]) < 1e-13
    assert abs(h - W2_ASYM["lambda_hat"]) < 1e-12
    assert abs(
        kernels.distortion_component(2.0, g, h) - W2_ASYM["distortion"]
    ) < 1e-12
    assert abs(
        kernels.perception_component_w2(2.0, h) - W2_ASYM["perception"]
    ) < 1e-13


def test_w2_theta_residual_bound_holds_broadly():
    rng = np.random.default_rng(31)
    for trial in range(40):
        lam = float(rng.uniform(0.05, 8.0))
        nu1 = float(rng.uniform(0.02, 4.0))
        nu2 = float(rng.uniform(0.02, 4.0))
        fp = kernels.theta_fixed_point_w2(lam, nu1, nu2)
        assert 0.0 < fp.theta < min(1.0, 2.0 * nu1 * lam) + 1e-15
        assert abs(fp.residual) <= 1e-12
        g, h = kernels.stationary_pair_w2(lam, nu1, nu2)
        assert 0.0 < g < lam
        assert h > 0.0


def test_w2_uniqueness_by_sign_scan():
    # The defining function crosses zero exactly once on the bracket.
    lam, nu1, nu2 = 1.7, 0.9, 0.4
    u = nu1 / nu2
    cap = 2.0 * nu1 * lam
    hi = min(1.0, cap)

    def g(t):
        return t / (1.0 + (1.0 - t) * u) - math.sqrt(max(1.0 - t / cap, 0.0))

    ts = np.linspace(1e-9, hi - 1e-9, 2000)
    signs = np.sign([g(float(t)) for t in ts])
    flips = np.sum(signs[:-1] != signs[1:])
    assert flips == 1


def test_perfect_perception_gamma():
    # At nu1 = sqrt(3)/4, lam = 1 the closed form gives gamma = 2/3.
    g = kernels.perfect_perception_gamma(1.0, math.sqrt(3.0 / 16.0))
    assert abs(g - 2.0 / 3.0) < 1e-15
    # Scalar anchor: lam = 1, nu1 = 6/7 gives gamma = 7/16.
    assert abs(kernels.perfect_perception_gamma(1.0, 6.0 / 7.0) - 7.0 / 16.0) < 1e-15
    # Tiny multiplier approaches the zero-rate corner gamma -> lam.
    assert abs(kernels.perfect_perception_gamma(2.0, 1e-12) - 2.0) < 1e-10


def test_perfect_perception_gamma_matches_pinned_inverse():
    rng = np.random.default_rng(41)
    for trial in range(30):
        lam = float(rng.uniform(0.05, 8.0))
        nu1 = float(rng.uniform(0.01, 5.0))
        a = kernels.perfect_perception_gamma(lam, nu1)
        b = kernels.gamma_from_lambda_hat(lam, lam, nu1)
        assert abs(a - b) < 1e-14 * lam
