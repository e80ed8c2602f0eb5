import json
import math
from pathlib import Path

import numpy as np
import pytest
from pydantic import ValidationError

from bounded_approx.config import PipelineConfig
from bounded_approx.core.circle import AnalyticPolynomial, CircleGrid
from bounded_approx.core.hardy import BoundedAnalyticWitness, RadialSchedule, boundary_samples
from bounded_approx.errors import ConfigError, InvalidParamsError, ParseError
from bounded_approx.ingest.codec import ProviderSpecModel
from bounded_approx.ingest.scenarios import (
    BUILTIN_SCENARIOS,
    ScenarioSpec,
    build_corollary1_sequence,
    build_negative_witness,
    build_provider,
    build_target_set,
    builtin_scenario,
    list_scenarios,
    load_scenario,
    prepare_scenario,
)
from bounded_approx.quality.weakstar import check_weak_star


def _one(theta):
    return np.ones_like(theta, dtype=complex)


def test_arc_target_set():
    E = build_target_set("arc", {"start": 0.0, "end": math.pi, "count": 3}, _one)
    np.testing.assert_allclose(E.angles, [0.0, math.pi / 2, math.pi])
    assert E.descriptor["kind"] == "arc"


def test_arc_wrapping_zero_is_normalized():
    E = build_target_set("arc", {"start": -math.pi / 2, "end": math.pi / 2, "count": 101}, _one)
    assert E.angles.size == 101
    assert np.all((E.angles >= 0) & (E.angles < 2 * math.pi))


def test_finite_target_set_evaluates_source():
    E = build_target_set("finite", {"angles": [math.pi / 4]}, lambda t: np.exp(1j * t))
    assert E.angles.size == 1
    assert E.values[0] == pytest.approx(np.exp(1j * math.pi / 4))


def test_cantor_target_set_depth_two():
    E = build_target_set("cantor", {"start": 0.0, "end": 2 * math.pi / 3, "depth": 2}, _one)
    step = 2 * math.pi / 27
    expected = np.array([0, 1, 2, 3, 6, 7, 8, 9]) * step
    np.testing.assert_allclose(E.angles, expected, atol=1e-12)


def test_target_set_invalid_params():
    with pytest.raises(InvalidParamsError):
        build_target_set("arc", {"start": 1.0, "end": 0.0, "count": 3}, _one)
    with pytest.raises(InvalidParamsError):
        build_target_set("cantor", {"start": 0.0, "end": 1.0, "depth": 13}, _one)
    with pytest.raises(InvalidParamsError):
        build_target_set("finite", {"angles": [0.0, 2 * math.pi]}, _one)
    with pytest.raises(InvalidParamsError):
        build_target_set("finite", {"angles": []}, _one)


def test_target_set_is_deterministic():
    params = {"start": 0.0, "end": 1.0, "depth": 3}
    a = build_target_set("cantor", params, _one)
    b = build_target_set("cantor", params, _one)
    np.testing.assert_array_equal(a.angles, b.angles)


def test_corollary1_sequence_of_identity_and_zero():
    grid = CircleGrid(32)
    sched = RadialSchedule.geometric(4)
    ident = build_corollary1_sequence(
        BoundedAnalyticWitness.from_polynomial(AnalyticPolynomial.monomial(1)), sched, grid
    )
    np.testing.assert_allclose(ident.emit(3).values, 0.875 * grid.points)
    zero = build_corollary1_sequence(BoundedAnalyticWitness.zero(), sched, grid)
    assert not np.any(zero.emit(2).values)


def test_negative_witness_values():
    grid = CircleGrid(16)
    seq = build_negative_witness(grid)
    np.testing.assert_allclose(seq.emit(5).values, np.exp(-1j * grid.angles))
    assert seq.bound == 1.0


@pytest.mark.parametrize("name", sorted(BUILTIN_SCENARIOS))
def test_builtin_positive_scenarios_pass_weak_star(name):
    spec = builtin_scenario(name)
    if spec.expected != "positive":
        pytest.skip("negative scenario")
    prep = prepare_scenario(spec, PipelineConfig(grid=1024, steps=4))
    report = check_weak_star(prep.seq, boundary_samples(prep.g, prep.seq.grid), 32, 1e-2, 16)
    assert report.verdict == "converged"


def test_scenario_spec_requires_witness_or_obstruction():
    with pytest.raises(ValidationError):
        ScenarioSpec.model_validate(
            {"name": "x", "expected": "positive", "target": {"kind": "finite", "angles": [0.0]}}
        )
    with pytest.raises(ValidationError):
        ScenarioSpec.model_validate(
            {"name": "x", "expected": "negative", "target": {"kind": "finite", "angles": [0.0]}}
        )


def test_load_scenario_from_file_and_unknown_name(tmp_path: Path):
    p = tmp_path / "custom.json"
    p.write_text(
        json.dumps(
            {
                "name": "custom",
                "expected": "positive",
                "witness": {"kind": "blaschke", "zeros": [[0.0, 0.25]]},
                "target": {"kind": "arc", "start": 0.0, "end": 1.0, "count": 5},
            }
        ),
        encoding="utf-8",
    )
    spec = load_scenario(str(p))
    assert spec.name == "custom"
    with pytest.raises(ConfigError):
        load_scenario("no-such-scenario")

    bad = tmp_path / "bad.json"
    bad.write_text('{"name": "x", "expected": "maybe"}', encoding="utf-8")
    with pytest.raises(ParseError):
        load_scenario(str(bad))


def test_list_scenarios_covers_builtins():
    names = [s.name for s in list_scenarios()]
    assert names == sorted(BUILTIN_SCENARIOS)
    assert {"blaschke-arc", "negative-conjugate"} <= set(names)


def test_build_provider_kinds():
    mono = build_provider(ProviderSpecModel(kind="shifting-monomial", n=64, length=8, offset=1))
    np.testing.assert_allclose(mono.emit(2).values, mono.grid.points**3)
    alt = build_provider(ProviderSpecModel(kind="alternating", n=64, length=4))
    assert alt.emit(1).values[0] == 1.0
    assert alt.emit(2).values[0] == 0.0
    conj = build_provider(ProviderSpecModel(kind="conjugate", n=64, length=4))
    assert conj.length == 4


def test_prepare_rejects_witness_above_bound():
    with pytest.raises(ConfigError):
        prepare_scenario(builtin_scenario("blaschke-arc"), PipelineConfig(M=0.5, grid=1024, steps=2))
