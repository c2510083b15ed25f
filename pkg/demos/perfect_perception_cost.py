#!/usr/bin/env python3
"""Measure what perfect perceptual quality costs in rate.

A reconstruction whose law equals the source law (perception budget zero)
doubles the zero-rate distortion ceiling from sum(lambda) to
2*sum(lambda), and at low distortion it costs an extra
eps/(8L) * sum(1/lambda) nats over the classical rate.  Both laws are
checked numerically here against the solvers.
"""

import numpy as np

from gaussian_rdp import (
    SourceSpectrum,
    high_distortion_p0_estimate,
    low_distortion_p0_estimate,
    reverse_waterfill,
    solve_perfect_perception,
)

LAMBDAS = (3.0, 2.0, 5.0, 4.0, 1.0)


def main():
    s = SourceSpectrum(LAMBDAS)
    total = s.total_variance

    print("rate with and without the perfect-perception constraint (nats)")
    print(f"{'D':>8} {'R(D, inf)':>12} {'R(D, 0)':>12} {'extra':>10}")
    for frac in (0.02, 0.1, 0.3, 0.6, 0.9, 0.99):
        d = frac * total
        r_rd = reverse_waterfill(s, d).total_rate
        r_p0 = solve_perfect_perception(s, d).total_rate
        print(f"{d:>8.3f} {r_rd:>12.5f} {r_p0:>12.5f} {r_p0 - r_rd:>10.5f}")

    print("\nbeyond D = sum(lambda) the classical rate is zero but the")
    print("perfect-perception rate stays positive up to twice that:")
    for d in (total, 1.2 * total, 1.6 * total, 1.95 * total):
        r_p0 = solve_perfect_perception(s, d).total_rate
        print(f"  D = {d:>6.2f}: R(D, 0) = {r_p0:.6f}")

    # quadratic law near the doubled ceiling
    print("\nnear-ceiling law  R ~ eps^2 / (8 sum lambda^2):")
    ssq = float(np.sum(np.array(LAMBDAS) ** 2))
    for eps in (1.0, 0.3, 0.1, 0.03):
        rate = solve_perfect_perception(s, 2.0 * total - eps).total_rate
        est, _ = high_distortion_p0_estimate(s, eps)
        print(
            f"  eps = {eps:<5}: solver {rate:.3e}  estimate {est:.3e}"
            f"  ratio {rate / est:.4f}"
        )

    # low-distortion extra cost
    print("\nlow-distortion extra cost  (eps/(8L)) sum(1/lambda):")
    n = s.dim
    inv_sum = float(np.sum(1.0 / np.array(LAMBDAS)))
    for eps in (0.5, 0.1, 0.02):
        gap = (
            solve_perfect_perception(s, eps).total_rate
            - reverse_waterfill(s, eps).total_rate
        )
        predicted = eps / (8.0 * n) * inv_sum
        est_rate, _ = low_distortion_p0_estimate(s, eps)
        print(
            f"  eps = {eps:<5}: measured gap {gap:.6f}  predicted {predicted:.6f}"
            f"  (expansion rate {est_rate:.4f})"
        )


if __name__ == "__main__":
    main()
