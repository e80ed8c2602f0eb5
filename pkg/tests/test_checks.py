import math

import numpy as np

from bounded_approx.core.circle import AnalyticPolynomial, CircleGrid, SampledFunction
from bounded_approx.quality.checks import (
    check_pointwise_convergence,
    check_uniform_bound,
    member_sup_bound,
    summarize_checks,
)


def _peaked(grid: CircleGrid) -> tuple[AnalyticPolynomial, SampledFunction]:
    # (1 + e^{-i pi/32} z)^8: sup 256, reached halfway between grid points of N=32
    p = AnalyticPolynomial(
        np.array([math.comb(8, k) * np.exp(-1j * np.pi * k / 32) for k in range(9)])
    )
    values = p.on_grid(grid).values
    return p, SampledFunction(grid, values, float(np.max(np.abs(values))))


def test_sampled_member_bound_ignores_its_claim():
    grid = CircleGrid(32)
    _, f = _peaked(grid)
    assert f.claimed_bound < 254.0
    assert member_sup_bound(f, grid) >= 256.0 - 1e-9


def test_uniform_bound_flags_a_member_peaking_off_grid():
    grid = CircleGrid(32)
    p, f = _peaked(grid)
    res = check_uniform_bound([f], M=f.claimed_bound, tol=1e-3, grid=grid)
    assert not res.passed
    assert res.details["violations"] == [1]

    ok = check_uniform_bound([p.scaled(1 / 256)], M=1.0, tol=1e-3, grid=CircleGrid(1024))
    assert ok.passed


def test_pointwise_convergence_and_summary():
    angles = np.array([0.0, 1.0])
    values = np.zeros(2, dtype=complex)
    shrinking = [AnalyticPolynomial.constant(2.0**-n) for n in range(1, 17)]
    flat = [AnalyticPolynomial.constant(0.5)] * 16
    good = check_pointwise_convergence(shrinking, angles=angles, values=values, tol=1e-3)
    bad = check_pointwise_convergence(flat, angles=angles, values=values, tol=1e-3)
    assert good.passed
    assert bad.details["verdict"] == "not-converged"
    assert summarize_checks([good, bad]) == {
        "total": 2,
        "passed": 1,
        "failed": ["pointwise_convergence"],
    }
