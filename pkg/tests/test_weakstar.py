import math

import numpy as np
import pytest

from bounded_approx.core.circle import AnalyticPolynomial, CircleGrid, SampledFunction
from bounded_approx.core.hardy import (
    BoundedAnalyticWitness,
    RadialSchedule,
    boundary_samples,
    radial_boundary_samples,
)
from bounded_approx.errors import BoundViolationError, ConfigError, WindowTooLargeError
from bounded_approx.ingest.scenarios import build_corollary1_sequence, build_negative_witness
from bounded_approx.quality.weakstar import (
    SequenceProvider,
    check_quotient_weak_null,
    check_weak_star,
    prefix_verdict,
    verify_khavinson,
)

GRID = CircleGrid(256)
ZERO = SampledFunction(GRID, np.zeros(256), 0.0)


def _monomials(length: int) -> SequenceProvider:
    return SequenceProvider(
        lambda n: SampledFunction(GRID, GRID.points**n, 1.0), GRID, 1.0, length, "monomials"
    )


def test_shifting_monomials_converge_to_zero():
    report = check_weak_star(_monomials(64), ZERO, 8, 1e-3, 64)
    assert report.verdict == "converged"
    assert report.deviations.shape == (64, 17)
    assert report.final_deviation < 1e-12


def test_alternating_constants_do_not_converge():
    seq = SequenceProvider(
        lambda n: SampledFunction(GRID, np.full(256, float(n % 2), dtype=complex), 1.0),
        GRID,
        1.0,
        32,
    )
    report = check_weak_star(seq, ZERO, 8, 1e-3, 32)
    assert report.verdict == "not-converged"
    assert report.witness[0] == 0


def test_fixed_function_converges_with_zero_deviation():
    f = SampledFunction(GRID, np.cos(GRID.angles), 1.0)
    seq = SequenceProvider(lambda n: f, GRID, 1.0, 16)
    report = check_weak_star(seq, f, 8, 1e-3, 16)
    assert report.verdict == "converged"
    assert float(report.deviations.max()) < 1e-15


def test_prefix_verdicts():
    assert prefix_verdict(np.array([1.0, 0.5, 1e-4, 1e-5]), 1e-3)[0] == "converged"
    slow = np.linspace(1.0, 0.3, 8)
    assert prefix_verdict(slow, 1e-3) == ("inconclusive", 6)
    assert prefix_verdict(np.ones(8), 1e-3)[0] == "not-converged"


def test_window_and_prefix_limits():
    with pytest.raises(WindowTooLargeError):
        check_weak_star(_monomials(8), ZERO, 200, 1e-3, 8)
    with pytest.raises(ConfigError):
        check_weak_star(_monomials(8), ZERO, 8, 1e-3, 9)


def test_provider_rejects_members_over_bound():
    seq = SequenceProvider(lambda n: SampledFunction(GRID, 2 * GRID.points, 2.0), GRID, 1.0, 4)
    with pytest.raises(BoundViolationError):
        seq.emit(1)


def test_corollary1_blaschke_sequence_converges():
    g = BoundedAnalyticWitness.blaschke([0.5])
    seq = build_corollary1_sequence(g, RadialSchedule.geometric(16), CircleGrid(1024))
    report = check_weak_star(seq, boundary_samples(g, seq.grid), 32, 1e-2, 16)
    assert report.verdict == "converged"


def test_conjugate_provider_keeps_unit_deviation():
    seq = build_negative_witness(GRID, length=16)
    g = BoundedAnalyticWitness.from_polynomial(AnalyticPolynomial(np.array([0.2, 0.3])))
    report = check_weak_star(seq, boundary_samples(g, GRID), 8, 1e-3, 16)
    assert report.verdict == "not-converged"
    assert np.all(report.curve >= 1.0 - 1e-12)


def test_khavinson_harness_on_monomials():
    family = [AnalyticPolynomial.monomial(n) for n in range(1, 33)]
    report = verify_khavinson(family, 1.0, None, BoundedAnalyticWitness.zero(), 8, 1e-3)
    assert report.verdict == "converged"
    assert not report.theorem_violation
    for n, err in enumerate(report.interior_errors, start=1):
        assert err <= 2.0**-n + 1e-15
    # z^n has no coefficient inside the window once n > K
    assert float(np.max(report.boundary.deviations[8:])) < 1e-12


def test_khavinson_rejects_unbounded_family():
    family = [AnalyticPolynomial.monomial(1, 2.0)]
    with pytest.raises(BoundViolationError):
        verify_khavinson(family, 1.0, None, BoundedAnalyticWitness.zero(), 4, 1e-3)


def test_quotient_weak_null():
    g = BoundedAnalyticWitness.blaschke([0.5])
    analytic = build_corollary1_sequence(g, RadialSchedule.geometric(16), GRID)
    assert check_quotient_weak_null(analytic, 16, 1e-6).verdict == "converged"
    conj = build_negative_witness(GRID, length=16)
    report = check_quotient_weak_null(conj, 16, 1e-6)
    assert report.verdict == "not-converged"
    assert abs(report.pairings[0, 0] - 2j * np.pi) < 1e-10


def test_prefix_verdict_separates_slow_decay_from_stalls():
    slow = 1.0 / np.arange(1, 65)
    assert prefix_verdict(slow, 1e-3)[0] == "inconclusive"
    stalled = np.array([1.0, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5])
    assert prefix_verdict(stalled, 1e-3)[0] == "not-converged"
    rising = np.linspace(0.3, 1.0, 8)
    assert prefix_verdict(rising, 1e-3)[0] == "not-converged"


def _fejer_means(p: np.ndarray, count: int) -> list[AnalyticPolynomial]:
    k = np.arange(p.size)
    return [AnalyticPolynomial(p * np.maximum(0.0, 1.0 - k / (n + 1))) for n in range(1, count + 1)]


def test_slowly_converging_fejer_means_are_not_a_violation():
    # boundary deviations decay like 1.09/(n+1)
    p = np.array([math.comb(8, k) for k in range(9)], dtype=complex) / 256
    family = _fejer_means(p, 64)
    g = BoundedAnalyticWitness.from_polynomial(AnalyticPolynomial(p))

    strict = verify_khavinson(family, 1.0, None, g, 32, 1e-2)
    assert strict.interior_verdict == "converged"
    assert strict.boundary.verdict == "inconclusive"
    assert strict.verdict == "inconclusive"
    assert not strict.theorem_violation

    assert verify_khavinson(family, 1.0, None, g, 32, 2e-2).verdict == "converged"


def test_dilated_blaschke_truncations_never_flag_a_violation():
    rng = np.random.default_rng(17)
    grid = CircleGrid(256)
    radii = RadialSchedule.geometric(16).radii
    for _ in range(20):
        count = int(rng.integers(1, 4))
        zeros = 0.6 * np.sqrt(rng.uniform(size=count)) * np.exp(2j * np.pi * rng.uniform(size=count))
        g = BoundedAnalyticWitness.blaschke(list(zeros))
        family = [
            AnalyticPolynomial(np.fft.fft(radial_boundary_samples(g, grid, r).values)[:65] / grid.n)
            for r in radii
        ]
        report = verify_khavinson(family, 1.1, None, g, 16, 1e-3)
        assert not report.theorem_violation


def test_verdict_is_invariant_under_unimodular_factor():
    g = BoundedAnalyticWitness.blaschke([0.5])
    seq = build_corollary1_sequence(g, RadialSchedule.geometric(16), GRID)
    target = boundary_samples(g, GRID)
    base = check_weak_star(seq, target, 8, 1e-3, 16)
    phase = np.exp(0.7j)
    rotated = SequenceProvider(lambda n: seq.emit(n).scaled(phase), GRID, 1.0, 16)
    turned = check_weak_star(rotated, target.scaled(phase), 8, 1e-3, 16)
    assert turned.verdict == base.verdict
    np.testing.assert_allclose(turned.deviations, base.deviations, atol=1e-12)
