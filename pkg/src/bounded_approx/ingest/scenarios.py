# src/bounded_approx/ingest/scenarios.py
"""
Reproducible experiment builders: radial-dilate sequences converging to a bounded
analytic witness, target sets E, and the conjugate obstruction.
"""

from __future__ import annotations

import dataclasses
import math
from collections.abc import Callable
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..config import PipelineConfig
from ..core.circle import CircleGrid, SampledFunction
from ..core.hardy import BoundedAnalyticWitness, RadialSchedule, radial_boundary_samples
from ..errors import ConfigError, InvalidParamsError
from ..logic.pipeline import TargetSet
from ..quality.weakstar import SequenceProvider
from .codec import ProviderSpecModel, WitnessModel, read_model

TWO_PI = 2.0 * math.pi
MAX_CANTOR_DEPTH = 12

TargetKind = Literal["arc", "finite", "cantor"]
Expected = Literal["positive", "negative"]


def build_corollary1_sequence(
    g: BoundedAnalyticWitness, sched: RadialSchedule, grid: CircleGrid
) -> SequenceProvider:
    """f_n(theta) = g(r_n e^{i theta}); converges to the boundary function of g at every point."""

    def emit(n: int) -> SampledFunction:
        return radial_boundary_samples(g, grid, sched.radius(n))

    return SequenceProvider(emit, grid, g.bound, len(sched), name="corollary1")


def build_negative_witness(grid: CircleGrid, length: int = 32) -> SequenceProvider:
    """f_n(theta) = e^{-i theta} for every n: distance 1 from the disk algebra."""
    f = SampledFunction.from_callable(grid, lambda t: np.exp(-1j * t), claimed_bound=1.0)
    return SequenceProvider(lambda n: f, grid, 1.0, length, name="conjugate")


def _normalize(angles: np.ndarray) -> np.ndarray:
    a = np.mod(np.asarray(angles, dtype=float), TWO_PI)
    # mod can return 2pi itself for tiny negative inputs
    a[a >= TWO_PI] = 0.0
    return a


def _interval(params: dict[str, Any]) -> tuple[float, float]:
    try:
        start = float(params["start"])
        end = float(params["end"])
    except (KeyError, TypeError, ValueError) as e:
        raise InvalidParamsError("needs numeric start and end", field="params") from e
    if not start < end:
        raise InvalidParamsError(f"start {start} must be below end {end}", field="params.start")
    if not end - start < TWO_PI:
        raise InvalidParamsError("E must be a proper subset of T", field="params.end")
    return start, end


def _cantor_endpoints(start: float, end: float, depth: int) -> np.ndarray:
    intervals = [(start, end)]
    for _ in range(depth):
        nxt = []
        for a, b in intervals:
            third = (b - a) / 3.0
            nxt.append((a, a + third))
            nxt.append((b - third, b))
        intervals = nxt
    return np.array([x for ab in intervals for x in ab])


def build_target_set(
    kind: TargetKind,
    params: dict[str, Any],
    f_source: Callable[[np.ndarray], np.ndarray],
) -> TargetSet:
    """Angles of E per kind, normalized to [0, 2pi), with f evaluated there."""
    if kind == "arc":
        start, end = _interval(params)
        count = params.get("count", 101)
        if not isinstance(count, int) or count < 1:
            raise InvalidParamsError(f"count must be a positive integer, got {count!r}", field="params.count")
        angles = np.linspace(start, end, count) if count > 1 else np.array([start])
    elif kind == "finite":
        raw = params.get("angles")
        if raw is None or len(raw) == 0:
            raise InvalidParamsError("finite target needs a nonempty angle list", field="params.angles")
        angles = np.asarray(raw, dtype=float)
    elif kind == "cantor":
        start, end = _interval(params)
        depth = params.get("depth")
        if not isinstance(depth, int) or not 0 <= depth <= MAX_CANTOR_DEPTH:
            raise InvalidParamsError(
                f"depth must be an integer in 0..{MAX_CANTOR_DEPTH}, got {depth!r}", field="params.depth"
            )
        angles = _cantor_endpoints(start, end, depth)
    else:
        raise InvalidParamsError(f"unknown target kind {kind!r}", field="kind")

    angles = _normalize(angles)
    if np.unique(angles).size != angles.size:
        raise InvalidParamsError("target angles must be distinct on T", field="params")
    values = np.asarray(f_source(angles), dtype=complex)
    return TargetSet(angles, values, {"kind": kind, **params})


class TargetModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: TargetKind
    start: float | None = None
    end: float | None = None
    count: int | None = None
    angles: list[float] | None = None
    depth: int | None = None

    def params(self) -> dict[str, Any]:
        return self.model_dump(exclude={"kind"}, exclude_none=True)


class ScenarioSpec(BaseModel):
    """One experiment: a witness (or obstruction), a target set and the expected outcome."""

    model_config = ConfigDict(extra="forbid")

    name: str
    description: str = ""
    expected: Expected
    witness: WitnessModel | None = None
    obstruction: Literal["conjugate"] | None = None
    target: TargetModel
    schedule_rule: Literal["1-2^-n"] = "1-2^-n"
    length: int | None = Field(default=None, ge=1)

    @model_validator(mode="after")
    def _witness_or_obstruction(self) -> ScenarioSpec:
        if self.expected == "positive" and self.witness is None:
            raise ValueError("positive scenarios carry a witness")
        if self.expected == "negative" and self.obstruction is None:
            raise ValueError("negative scenarios carry an obstruction symbol")
        if self.witness is not None and self.obstruction is not None:
            raise ValueError("give a witness or an obstruction, not both")
        return self


@dataclass(frozen=True)
class PreparedScenario:
    spec: ScenarioSpec
    seq: SequenceProvider
    E: TargetSet
    g: BoundedAnalyticWitness | None
    cfg: PipelineConfig


def prepare_scenario(spec: ScenarioSpec, cfg: PipelineConfig) -> PreparedScenario:
    """Sequence, target set and effective config for one pipeline run."""
    cfg.validate()
    grid = CircleGrid(cfg.grid)
    length = spec.length or cfg.max_tail_index
    if spec.witness is not None:
        g = spec.witness.to_domain()
        if g.bound > cfg.M:
            raise ConfigError(f"witness bound {g.bound} exceeds M={cfg.M}", field="M")
        seq = build_corollary1_sequence(g, RadialSchedule.geometric(length), grid)

        def f_source(theta: np.ndarray) -> np.ndarray:
            return g.evaluate(np.exp(1j * theta))

    else:
        g = None
        if cfg.M < 1.0:
            raise ConfigError(f"the conjugate symbol has sup 1, M={cfg.M}", field="M")
        seq = build_negative_witness(grid, length)
        # no analytic limit to test the precondition against
        cfg = dataclasses.replace(cfg, skip_precondition=True)

        def f_source(theta: np.ndarray) -> np.ndarray:
            return np.exp(-1j * theta)

    E = build_target_set(spec.target.kind, spec.target.params(), f_source)
    return PreparedScenario(spec, seq, E, g, cfg)


def build_provider(spec: ProviderSpecModel) -> SequenceProvider:
    grid = CircleGrid(spec.n)
    if spec.kind == "corollary1":
        g = spec.witness.to_domain()
        return build_corollary1_sequence(g, RadialSchedule.geometric(spec.length), grid)
    if spec.kind == "conjugate":
        return build_negative_witness(grid, spec.length)
    if spec.kind == "shifting-monomial":
        offset = spec.offset

        def monomial(n: int) -> SampledFunction:
            return SampledFunction(grid, grid.points ** (n + offset), 1.0)

        return SequenceProvider(monomial, grid, 1.0, spec.length, name="shifting-monomial")
    if spec.kind == "alternating":
        return SequenceProvider(
            lambda n: SampledFunction(grid, np.full(grid.n, float(n % 2), dtype=complex), 1.0),
            grid,
            1.0,
            spec.length,
            name="alternating",
        )
    if spec.kind == "fixed":
        f = spec.function.to_domain()
        if f.grid != grid:
            raise ConfigError(f"function has {f.grid.n} samples, provider n={spec.n}", field="n")
        bound = f.claimed_bound if f.claimed_bound is not None else f.sup_on_grid
        f = SampledFunction(grid, f.values, bound)
        return SequenceProvider(lambda n: f, grid, bound, spec.length, name="fixed")
    fs = [m.to_domain() for m in spec.members]
    return SequenceProvider.from_functions(fs, name="samples")


_HALF_ARC = {"kind": "arc", "start": -math.pi / 2, "end": math.pi / 2, "count": 101}

BUILTIN_SCENARIOS: dict[str, dict[str, Any]] = {
    "blaschke-arc": {
        "name": "blaschke-arc",
        "description": "Blaschke factor with zero 0.5 approximated on the right half circle",
        "expected": "positive",
        "witness": {"kind": "blaschke", "zeros": [[0.5, 0.0]]},
        "target": _HALF_ARC,
    },
    "negative-conjugate": {
        "name": "negative-conjugate",
        "description": "conjugate symbol e^{-i theta}; no convex combination nears the disk algebra",
        "expected": "negative",
        "obstruction": "conjugate",
        "target": _HALF_ARC,
    },
    "zero": {
        "name": "zero",
        "description": "identically zero witness on three points",
        "expected": "positive",
        "witness": {"kind": "polynomial", "coeffs": [[0.0, 0.0]], "bound": 0.0},
        "target": {"kind": "finite", "angles": [0.0, math.pi / 2, math.pi]},
    },
    "polynomial-finite": {
        "name": "polynomial-finite",
        "description": "(1 + z^2)/2 on a finite set",
        "expected": "positive",
        "witness": {"kind": "polynomial", "coeffs": [[0.5, 0.0], [0.0, 0.0], [0.5, 0.0]], "bound": 1.0},
        "target": {"kind": "finite", "angles": [math.pi / 4, math.pi, 5 * math.pi / 4]},
    },
    "blaschke-cantor": {
        "name": "blaschke-cantor",
        "description": "two-zero Blaschke product on a depth-4 middle-third set",
        "expected": "positive",
        "witness": {"kind": "blaschke", "zeros": [[0.5, 0.0], [0.0, -0.3]]},
        "target": {"kind": "cantor", "start": 0.0, "end": 2 * math.pi / 3, "depth": 4},
    },
}


def builtin_scenario(name: str) -> ScenarioSpec:
    try:
        raw = BUILTIN_SCENARIOS[name]
    except KeyError as e:
        known = ", ".join(sorted(BUILTIN_SCENARIOS))
        raise ConfigError(f"unknown scenario {name!r} (known: {known})", field="scenario") from e
    return ScenarioSpec.model_validate(raw)


def load_scenario(name_or_path: str) -> ScenarioSpec:
    """Built-in scenario by name, otherwise a scenario JSON file."""
    p = Path(name_or_path)
    if name_or_path not in BUILTIN_SCENARIOS and (p.exists() or p.suffix == ".json"):
        return read_model(p, ScenarioSpec)
    return builtin_scenario(name_or_path)


def list_scenarios() -> list[ScenarioSpec]:
    return [builtin_scenario(n) for n in sorted(BUILTIN_SCENARIOS)]
