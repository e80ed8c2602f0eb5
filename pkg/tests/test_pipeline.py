import math

import numpy as np
import pytest

from bounded_approx.config import PipelineConfig
from bounded_approx.core.circle import (
    AnalyticPolynomial,
    CircleGrid,
    SampledFunction,
    certified_sup_norm,
)
from bounded_approx.core.hardy import BoundedAnalyticWitness
from bounded_approx.errors import ConfigError, PreconditionViolationError
from bounded_approx.ingest.scenarios import builtin_scenario, prepare_scenario
from bounded_approx.quality.weakstar import SequenceProvider
from bounded_approx.logic.pipeline import (
    TargetSet,
    estimate_limit,
    rescale_factor,
    rescale_to_bound,
    run_sufficiency,
    truncate_to_polynomial,
    verify_conditions,
)


@pytest.fixture(scope="module")
def blaschke_run():
    prep = prepare_scenario(builtin_scenario("blaschke-arc"), PipelineConfig())
    polys, report = run_sufficiency(prep.seq, prep.E, prep.g, prep.cfg)
    return prep, polys, report


def test_rescale_to_bound():
    P = rescale_to_bound(AnalyticPolynomial.constant(1.2), 1.0, 1)
    assert P.coeffs[0] == pytest.approx(0.4)
    assert rescale_factor(1.0, 8) == pytest.approx(0.8)
    with pytest.raises(PreconditionViolationError):
        rescale_to_bound(AnalyticPolynomial.constant(5.0), 1.0, 1)


def test_truncate_to_polynomial_fejer_path():
    p = AnalyticPolynomial(np.array([math.comb(8, k) for k in range(9)], dtype=complex) / 256)
    u = p.on_grid(CircleGrid(256))
    Q, dev = truncate_to_polynomial(u, 0.2)
    assert dev < 0.2
    assert float(np.max(np.abs(Q.on_grid(u.grid).values - u.values))) <= dev


def test_truncate_to_polynomial_fails_off_the_disk_algebra():
    g = CircleGrid(64)
    with pytest.raises(PreconditionViolationError):
        truncate_to_polynomial(SampledFunction(g, np.conj(g.points)), 0.5)


def test_estimate_limit_of_dilated_identity():
    seq = [AnalyticPolynomial.monomial(1, 1.0 - 2.0**-n) for n in range(1, 9)]
    est = estimate_limit(seq)
    assert est.polynomial.coeffs[1] == pytest.approx(1.0 - 2.0**-8)
    assert est.spread < 0.01


def test_target_set_validation():
    TargetSet(np.array([0.0, 1.0]), np.array([1.0, 2.0]))
    with pytest.raises(ConfigError):
        TargetSet(np.array([1.0, 1.0]), np.array([1.0, 2.0]))
    with pytest.raises(ConfigError):
        TargetSet(np.array([7.0]), np.array([1.0]))


def test_blaschke_arc_every_step_succeeds_within_bounds(blaschke_run):
    _, polys, report = blaschke_run
    assert report.verdict == "positive"
    assert len(polys) == 8
    assert report.precondition.verdict == "converged"
    for step in report.steps:
        m = step.m
        assert step.achieved < 1.0 / m
        assert step.u_bound < 1.0 + 1.0 / m + 1e-9
        assert step.p_sup <= 1.0
        assert step.p_sup_recheck <= 1.0
        assert step.d_m == 32 * m
        assert step.k_m == 4 * m


def test_blaschke_arc_polynomials_are_certified_below_m(blaschke_run):
    _, polys, report = blaschke_run
    for step, P in zip(report.steps, polys, strict=True):
        assert certified_sup_norm(P, 8192) <= 1.0
        assert step.p_sup == pytest.approx(certified_sup_norm(P, max(4096, 64 * (P.degree + 1))))


def test_blaschke_arc_pointwise_errors_shrink(blaschke_run):
    _, _, report = blaschke_run
    medians = [s.median_err_E for s in report.steps]
    assert medians[-1] <= 0.25
    assert medians[-1] / medians[0] <= 0.4


def test_blaschke_arc_satisfies_both_conditions(blaschke_run):
    prep, polys, _ = blaschke_run
    cv = verify_conditions(polys, prep.E, 1.0, prep.g, 32, 0.25)
    assert cv.bound.passed
    assert cv.pointwise.passed
    assert cv.weak_star.passed
    assert cv.condition_i and cv.condition_ii


def test_negative_conjugate_stalls_and_fails_condition_ii():
    cfg = PipelineConfig(grid=1024, steps=3)
    prep = prepare_scenario(builtin_scenario("negative-conjugate"), cfg)
    assert prep.cfg.skip_precondition
    polys, report = run_sufficiency(prep.seq, prep.E, prep.g, prep.cfg)
    assert polys == []
    assert report.verdict == "negative"
    assert report.quotient_null.verdict == "not-converged"
    for step in report.steps:
        assert step.status == "target-not-reached"
        assert step.lower_witness >= 1.0 - 1e-3

    members = [prep.seq.emit(n) for n in range(1, 9)]
    g = BoundedAnalyticWitness.from_polynomial(AnalyticPolynomial(np.array([0.0, 0.5])))
    cv = verify_conditions(members, prep.E, 1.0, g, 8, 1e-3)
    assert cv.bound.passed
    assert cv.pointwise.passed
    assert not cv.weak_star.passed
    assert cv.report.verdict == "not-converged"


def test_precondition_violation_without_skip():
    cfg = PipelineConfig(grid=1024, steps=2)
    prep = prepare_scenario(builtin_scenario("negative-conjugate"), cfg)
    g = BoundedAnalyticWitness.zero()
    with pytest.raises(PreconditionViolationError):
        run_sufficiency(prep.seq, prep.E, g, cfg)


def test_zero_scenario_threads_and_limit_estimate(monkeypatch):
    monkeypatch.setenv("APPROX_THREADS", "2")
    cfg = PipelineConfig(grid=512, steps=3, threads=4)
    prep = prepare_scenario(builtin_scenario("zero"), cfg)
    polys, report = run_sufficiency(prep.seq, prep.E, prep.g, prep.cfg)
    assert report.verdict == "positive"
    assert [s.m for s in report.steps] == [1, 2, 3]
    for s in report.steps:
        assert s.max_err_E < 1e-6
    cv = verify_conditions(polys, prep.E, 1.0, None, 8, 1e-3)
    assert cv.condition_i and cv.condition_ii


def test_sequence_must_fit_config():
    cfg = PipelineConfig(grid=1024, steps=2)
    prep = prepare_scenario(builtin_scenario("blaschke-arc"), cfg)
    with pytest.raises(ConfigError):
        run_sufficiency(prep.seq, prep.E, prep.g, PipelineConfig(grid=2048, steps=2))


def test_polynomial_peaking_between_grid_points_is_omitted():
    # (1 + e^{-i pi/32} z)^8 has sup 256 but grid max ~253.5 on N=32
    grid = CircleGrid(32)
    p = AnalyticPolynomial(
        np.array([math.comb(8, k) * np.exp(-1j * np.pi * k / 32) for k in range(9)])
    )
    values = p.on_grid(grid).values
    M = float(np.max(np.abs(values)))
    f = SampledFunction(grid, values, M)
    seq = SequenceProvider.from_functions([f] * 8, M, name="peaked")
    cfg = PipelineConfig(M=M, grid=32, steps=1, K=8, degree_factor=8, hankel_size=4, tol=1e-2)
    E = TargetSet(np.array([0.0]), np.array([values[0]]))

    polys, report = run_sufficiency(seq, E, BoundedAnalyticWitness.from_polynomial(p), cfg)
    assert polys == []
    assert report.steps[0].status == "bound-not-certified"
    assert report.steps[0].u_bound > M + 2.0
    assert report.verdict == "negative"
