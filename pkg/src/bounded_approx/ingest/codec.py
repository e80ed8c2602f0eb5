# src/bounded_approx/ingest/codec.py
"""
Wire models for every file the CLI reads or writes. Complex numbers travel as [re, im].
"""

from __future__ import annotations

from pathlib import Path
from typing import Annotated, Any, Literal

import numpy as np
import orjson
from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, ValidationError, model_validator

from ..core.circle import AnalyticPolynomial, CircleGrid, SampledFunction, TrigCoefficients
from ..core.hardy import BoundedAnalyticWitness
from ..errors import ParseError
from ..logic.nehari import DistanceCertificate
from ..logic.pipeline import StepRecord
from ..quality.checks import CheckResult
from ..quality.weakstar import QuotientNullReport, Verdict, WeakStarReport

Pair = tuple[float, float]


def to_pairs(values) -> list[Pair]:
    arr = np.asarray(values, dtype=complex).ravel()
    return [(float(z.real), float(z.imag)) for z in arr]


def from_pairs(pairs: list[Pair]) -> np.ndarray:
    if not pairs:
        return np.zeros(0, dtype=complex)
    a = np.asarray(pairs, dtype=float)
    return a[:, 0] + 1j * a[:, 1]


class _Wire(BaseModel):
    model_config = ConfigDict(extra="forbid")


# ---------- inputs ----------


class SampledFunctionModel(_Wire):
    n: int = Field(ge=4)
    values: list[Pair]
    claimed_bound: float | None = None

    @model_validator(mode="after")
    def _length(self) -> SampledFunctionModel:
        if len(self.values) != self.n:
            raise ValueError(f"expected {self.n} values, got {len(self.values)}")
        return self

    def to_domain(self) -> SampledFunction:
        return SampledFunction(CircleGrid(self.n), from_pairs(self.values), self.claimed_bound)

    @classmethod
    def from_domain(cls, f: SampledFunction) -> SampledFunctionModel:
        return cls(n=f.grid.n, values=to_pairs(f.values), claimed_bound=f.claimed_bound)


class AnalyticPolynomialModel(_Wire):
    degree: int = Field(ge=0)
    coeffs: list[Pair]

    @model_validator(mode="after")
    def _length(self) -> AnalyticPolynomialModel:
        if len(self.coeffs) != self.degree + 1:
            raise ValueError(f"degree {self.degree} needs {self.degree + 1} coefficients")
        return self

    def to_domain(self) -> AnalyticPolynomial:
        return AnalyticPolynomial(from_pairs(self.coeffs))

    @classmethod
    def from_domain(cls, p: AnalyticPolynomial) -> AnalyticPolynomialModel:
        return cls(degree=p.degree, coeffs=to_pairs(p.coeffs))


class TrigCoefficientsModel(_Wire):
    K: int = Field(ge=0)
    coeffs: list[Pair]  # c_{-K} .. c_{K}

    @model_validator(mode="after")
    def _length(self) -> TrigCoefficientsModel:
        if len(self.coeffs) != 2 * self.K + 1:
            raise ValueError(f"window K={self.K} needs {2 * self.K + 1} coefficients")
        return self

    def to_domain(self) -> TrigCoefficients:
        return TrigCoefficients(self.K, from_pairs(self.coeffs))


class PolynomialWitnessModel(_Wire):
    kind: Literal["polynomial"]
    coeffs: list[Pair]
    bound: float | None = None

    def to_domain(self) -> BoundedAnalyticWitness:
        return BoundedAnalyticWitness.from_polynomial(
            AnalyticPolynomial(from_pairs(self.coeffs)), self.bound
        )


class BlaschkeWitnessModel(_Wire):
    kind: Literal["blaschke"]
    zeros: list[Pair]
    unimodular: Pair = (1.0, 0.0)
    bound: float = 1.0

    def to_domain(self) -> BoundedAnalyticWitness:
        u = complex(*self.unimodular)
        return BoundedAnalyticWitness.blaschke(from_pairs(self.zeros), u, self.bound)


class ScaledCompositionWitnessModel(_Wire):
    kind: Literal["scaled-composition"]
    inner: WitnessModel
    scale: Pair = (1.0, 0.0)
    dilation: float = 1.0

    def to_domain(self) -> BoundedAnalyticWitness:
        return BoundedAnalyticWitness.scaled_composition(
            self.inner.to_domain(), complex(*self.scale), self.dilation
        )


WitnessModel = Annotated[
    PolynomialWitnessModel | BlaschkeWitnessModel | ScaledCompositionWitnessModel,
    Field(discriminator="kind"),
]
ScaledCompositionWitnessModel.model_rebuild()
WITNESS_ADAPTER: TypeAdapter = TypeAdapter(WitnessModel)


def witness_to_model(g: BoundedAnalyticWitness) -> dict[str, Any]:
    if g.kind == "polynomial":
        return {"kind": "polynomial", "coeffs": to_pairs(g.polynomial.coeffs), "bound": g.bound}
    if g.kind == "blaschke":
        return {
            "kind": "blaschke",
            "zeros": to_pairs(g.zeros),
            "unimodular": to_pairs([g.unimodular])[0],
            "bound": g.bound,
        }
    return {
        "kind": "scaled-composition",
        "inner": witness_to_model(g.inner),
        "scale": to_pairs([g.scale])[0],
        "dilation": g.dilation,
    }


ProviderKind = Literal["corollary1", "shifting-monomial", "alternating", "fixed", "conjugate", "samples"]


class ProviderSpecModel(_Wire):
    """A sequence f_1..f_length on an n-point grid."""

    kind: ProviderKind
    n: int = Field(default=1024, ge=4)
    length: int = Field(default=64, ge=1)
    witness: WitnessModel | None = None
    function: SampledFunctionModel | None = None
    members: list[SampledFunctionModel] | None = None
    offset: int = Field(default=0, ge=0)
    expected: Verdict | None = None

    @model_validator(mode="after")
    def _per_kind(self) -> ProviderSpecModel:
        if self.kind == "corollary1" and self.witness is None:
            raise ValueError("corollary1 provider needs a witness")
        if self.kind == "fixed" and self.function is None:
            raise ValueError("fixed provider needs a function")
        if self.kind == "samples":
            if not self.members:
                raise ValueError("samples provider needs members")
            if any(f.n != self.members[0].n for f in self.members):
                raise ValueError("members must share one grid")
        return self


# ---------- outputs ----------


class DistanceCertificateModel(_Wire):
    lower: float
    upper: float
    tol_cert: float
    grid_n: int
    d: int
    s: int
    approximant: AnalyticPolynomialModel
    # h - approximant on the grid; itself a valid symbol file
    residual: SampledFunctionModel

    @classmethod
    def from_domain(
        cls, cert: DistanceCertificate, h: SampledFunction, *, d: int, s: int
    ) -> DistanceCertificateModel:
        residual = SampledFunction(h.grid, cert.residual(h), cert.upper)
        return cls(
            lower=cert.lower,
            upper=cert.upper,
            tol_cert=cert.tol_cert,
            grid_n=cert.grid_used.n,
            d=d,
            s=s,
            approximant=AnalyticPolynomialModel.from_domain(cert.approximant),
            residual=SampledFunctionModel.from_domain(residual),
        )


class WeakStarReportModel(_Wire):
    K: int
    L: int
    tol: float
    verdict: Verdict
    witness: tuple[int, int]
    final_deviation: float
    curve: list[float]
    deviations: list[list[float]]

    @classmethod
    def from_domain(cls, r: WeakStarReport) -> WeakStarReportModel:
        return cls(
            K=r.K,
            L=r.L,
            tol=r.tol,
            verdict=r.verdict,
            witness=r.witness,
            final_deviation=r.final_deviation,
            curve=[float(x) for x in r.curve],
            deviations=r.deviations.tolist(),
        )


class StepRecordModel(_Wire):
    m: int
    tail_start: int
    k_m: int
    d_m: int
    status: Literal["success", "target-not-reached", "bound-not-certified"]
    target: float
    achieved: float
    program_bound: float
    u_bound: float
    weights: list[float]
    p_sup: float | None = None
    p_sup_recheck: float | None = None
    max_err_E: float | None = None
    median_err_E: float | None = None
    fourier_deviation: float | None = None
    lower_witness: float | None = None

    @classmethod
    def from_domain(cls, s: StepRecord) -> StepRecordModel:
        data = {k: getattr(s, k) for k in cls.model_fields}
        data["weights"] = list(s.weights)
        return cls(**data)


class QuotientNullModel(_Wire):
    verdict: Verdict
    tol: float
    symbol_degrees: list[int]
    curve: list[float]

    @classmethod
    def from_domain(cls, r: QuotientNullReport) -> QuotientNullModel:
        return cls(
            verdict=r.verdict,
            tol=r.tol,
            symbol_degrees=[G.degree for G in r.symbols],
            curve=[float(x) for x in r.curve],
        )


class CheckResultModel(_Wire):
    name: str
    check_type: str
    passed: bool
    details: dict[str, Any]

    @classmethod
    def from_domain(cls, c: CheckResult) -> CheckResultModel:
        return cls(name=c.name, check_type=c.check_type, passed=c.passed, details=c.details)


class PipelineReportModel(_Wire):
    schema_version: int = 1
    run_id: str
    snapshot_id: str = ""
    scenario: str
    expected: Literal["positive", "negative"]
    verdict: Literal["positive", "negative", "mixed"]
    config: dict[str, Any]
    code: dict[str, Any]
    target: dict[str, Any]
    steps: list[StepRecordModel]
    precondition: WeakStarReportModel | None = None
    quotient_null: QuotientNullModel
    conditions: list[CheckResultModel] = Field(default_factory=list)


SCHEMA_MODELS: dict[str, Any] = {
    "sampled-function": SampledFunctionModel,
    "analytic-polynomial": AnalyticPolynomialModel,
    "trig-coefficients": TrigCoefficientsModel,
    "witness": WITNESS_ADAPTER,
    "provider-spec": ProviderSpecModel,
    "distance-certificate": DistanceCertificateModel,
    "weakstar-report": WeakStarReportModel,
    "pipeline-report": PipelineReportModel,
}


def json_schema(name: str) -> dict[str, Any]:
    target = SCHEMA_MODELS[name]
    if isinstance(target, TypeAdapter):
        return target.json_schema()
    return target.model_json_schema()


# ---------- parsing ----------


def load_json(data: bytes | str, source: str = "<input>") -> Any:
    try:
        return orjson.loads(data)
    except orjson.JSONDecodeError as e:
        raise ParseError(f"line {e.lineno} column {e.colno}: {e.msg}", field=source) from e


def _validation_message(e: ValidationError) -> tuple[str, str]:
    err = e.errors()[0]
    loc = ".".join(str(p) for p in err["loc"]) or "<root>"
    extra = f" (+{e.error_count() - 1} more)" if e.error_count() > 1 else ""
    return loc, f"{err['msg']}{extra}"


def validate(raw: Any, model, source: str = "<input>"):
    try:
        if isinstance(model, TypeAdapter):
            return model.validate_python(raw)
        return model.model_validate(raw)
    except ValidationError as e:
        loc, msg = _validation_message(e)
        raise ParseError(f"{loc}: {msg}", field=source) from e


def read_model(path: str | Path, model):
    p = Path(path)
    return validate(load_json(p.read_bytes(), str(p)), model, str(p))


def parse_symbol(raw: Any, source: str = "<input>") -> SampledFunction | TrigCoefficients:
    """A symbol file holds either grid samples {"n", "values"} or a window {"K", "coeffs"}."""
    if isinstance(raw, dict) and "K" in raw:
        return validate(raw, TrigCoefficientsModel, source).to_domain()
    return validate(raw, SampledFunctionModel, source).to_domain()


def read_symbol(path: str | Path) -> SampledFunction | TrigCoefficients:
    p = Path(path)
    return parse_symbol(load_json(p.read_bytes(), str(p)), str(p))


def read_witness(path: str | Path) -> BoundedAnalyticWitness:
    return read_model(path, WITNESS_ADAPTER).to_domain()
