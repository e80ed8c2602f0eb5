"""
End-to-end construction of polynomials P_m, |P_m| <= M on T, converging on a target set E:

  1. convex combination of a tail of {f_n} plus a polynomial correction u_m with
     sup_T |sum alpha_n f_n - u_m| < 1/m;
  2. Q_m := u_m (already a polynomial; sampled corrections go through Fejer means);
  3. P_m := M / (M + 2/m) * Q_m.

plus the converse check of conditions (i)/(ii) on any bounded sequence.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Literal

import numpy as np

from ..config import PipelineConfig
from ..core.circle import (
    BOUND_SLACK,
    AnalyticPolynomial,
    CircleGrid,
    SampledFunction,
    certified_sup_norm,
    certified_sup_sampled,
    fejer_mean,
    fourier_window,
)
from ..core.hardy import BoundedAnalyticWitness, boundary_samples
from ..errors import ConfigError, PreconditionViolationError
from ..quality.checks import (
    CheckResult,
    Member,
    check_pointwise_convergence,
    check_uniform_bound,
)
from ..quality.weakstar import (
    QuotientNullReport,
    SequenceProvider,
    WeakStarReport,
    check_quotient_weak_null,
    check_weak_star,
)
from ..runtime import resolve_threads
from .mazur import find_convex_combination, greedy_tail_schedule

LOGGER = logging.getLogger(__name__)

DescriptorKind = Literal["arc", "finite", "cantor"]
StepStatus = Literal["success", "target-not-reached", "bound-not-certified"]
RunVerdict = Literal["positive", "negative", "mixed"]


@dataclass(frozen=True, eq=False)
class TargetSet:
    """Finite sample of E with prescribed values f(theta)."""

    angles: np.ndarray
    values: np.ndarray
    descriptor: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        a = np.array(self.angles, dtype=float)
        v = np.array(self.values, dtype=complex)
        if a.ndim != 1 or a.size == 0:
            raise ConfigError("target set needs at least one angle", field="angles")
        if v.shape != a.shape:
            raise ConfigError("one value per angle required", field="values")
        if np.any(a < 0) or np.any(a >= 2 * np.pi):
            raise ConfigError("angles must lie in [0, 2pi)", field="angles")
        if np.unique(a).size != a.size:
            raise ConfigError("angles must be distinct", field="angles")
        a.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "angles", a)
        object.__setattr__(self, "values", v)

    @property
    def points(self) -> np.ndarray:
        return np.exp(1j * self.angles)


def rescale_factor(M: float, m: int) -> float:
    return M / (M + 2.0 / m)


def rescale_to_bound(
    Q: AnalyticPolynomial,
    M: float,
    m: int,
    *,
    sup_bound: float | None = None,
    grid_n: int | None = None,
) -> AnalyticPolynomial:
    """P = M/(M + 2/m) * Q, requiring a certified sup of Q at most M + 2/m."""
    if not M > 0:
        raise ConfigError(f"must be > 0, got {M}", field="M")
    if m < 1:
        raise ConfigError(f"must be >= 1, got {m}", field="m")
    if sup_bound is None:
        n = grid_n or max(64, 64 * (Q.degree + 1))
        sup_bound = certified_sup_norm(Q, n)
    if sup_bound > M + 2.0 / m:
        raise PreconditionViolationError(
            f"precondition-violation: certified sup of Q = {sup_bound!r} exceeds M + 2/m = {M + 2.0 / m!r}"
        )
    return Q.scaled(rescale_factor(M, m))


def truncate_to_polynomial(
    u: SampledFunction, tolerance: float, *, max_n: int | None = None
) -> tuple[AnalyticPolynomial, float]:
    """
    Fejer path for a sampled disk-algebra function u: the analytic part of sigma_n(u)
    with n doubled until the certified deviation drops below `tolerance`.
    """
    grid = u.grid
    limit = max_n if max_n is not None else (grid.n - 1) // 2
    n = 1
    while True:
        sigma = fejer_mean(fourier_window(u, n), n)
        Q = sigma.analytic_part()
        deviation = certified_sup_sampled(u.values - Q.on_grid(grid).values)
        if deviation < tolerance:
            return Q, deviation
        if n >= limit:
            raise PreconditionViolationError(
                f"Fejer means up to n={n} stay {deviation:.3g} away (tolerance {tolerance:.3g})"
            )
        n = min(2 * n, limit)


@dataclass(frozen=True)
class LimitEstimate:
    polynomial: AnalyticPolynomial
    spread: float


def estimate_limit(P_seq: Sequence[AnalyticPolynomial], degree: int | None = None) -> LimitEstimate:
    """
    Locally uniform limit of a bounded polynomial sequence, read off its Taylor
    coefficients; `spread` is the largest coefficient change over the last quarter.
    """
    P_seq = list(P_seq)
    if not P_seq:
        raise ConfigError("empty sequence", field="P_seq")
    d = degree if degree is not None else max(p.degree for p in P_seq)
    coeffs = np.stack([p.padded(d)[: d + 1] for p in P_seq])
    q = max(1, int(np.ceil(len(P_seq) / 4)))
    tail = coeffs[-q - 1 :] if len(P_seq) > q else coeffs
    spread = float(np.max(np.abs(np.diff(tail, axis=0)))) if tail.shape[0] > 1 else 0.0
    return LimitEstimate(AnalyticPolynomial(coeffs[-1]), spread)


@dataclass(frozen=True)
class StepRecord:
    m: int
    tail_start: int
    k_m: int
    d_m: int
    status: StepStatus
    target: float
    achieved: float
    program_bound: float
    u_bound: float
    weights: tuple[float, ...]
    p_sup: float | None = None
    p_sup_recheck: float | None = None
    max_err_E: float | None = None
    median_err_E: float | None = None
    fourier_deviation: float | None = None
    lower_witness: float | None = None


@dataclass(frozen=True)
class PipelineReport:
    steps: tuple[StepRecord, ...]
    verdict: RunVerdict
    precondition: WeakStarReport | None
    quotient_null: QuotientNullReport

    def successful(self) -> list[StepRecord]:
        return [s for s in self.steps if s.status == "success"]


def _final_verdict(steps: Sequence[StepRecord]) -> RunVerdict:
    ok = [s.status == "success" for s in steps]
    if all(ok):
        return "positive"
    if not any(ok):
        return "negative"
    return "mixed"


def run_sufficiency(
    seq: SequenceProvider,
    E: TargetSet,
    g: BoundedAnalyticWitness | None,
    cfg: PipelineConfig,
) -> tuple[list[AnalyticPolynomial], PipelineReport]:
    cfg.validate()
    grid = seq.grid
    if grid.n != cfg.grid:
        raise ConfigError(f"sequence lives on N={grid.n}, config says {cfg.grid}", field="grid")
    if seq.bound > cfg.M * (1 + BOUND_SLACK):
        raise ConfigError(f"sequence bound {seq.bound} exceeds M={cfg.M}", field="M")
    if seq.length < cfg.steps:
        raise ConfigError(
            f"sequence prefix of length {seq.length} is shorter than steps={cfg.steps}",
            field="steps",
        )
    L = min(seq.length, cfg.max_tail_index)

    precondition = None
    g_boundary = None
    if g is not None:
        g_boundary = boundary_samples(g, grid)
        precondition = check_weak_star(seq, g_boundary, cfg.K, cfg.tol, L)
        if precondition.verdict != "converged" and not cfg.skip_precondition:
            raise PreconditionViolationError(
                f"precondition-violation: sequence does not converge weak-star to g ({precondition.verdict}, "
                f"final deviation {precondition.final_deviation:.3g}); "
                "set skip_precondition to run anyway"
            )
    elif not cfg.skip_precondition:
        raise ConfigError("no limit witness g given", field="skip_precondition")

    quotient_null = check_quotient_weak_null(seq, L, cfg.tol)
    g_window = None if g_boundary is None else fourier_window(g_boundary, cfg.K).coeffs

    def run_step(m: int) -> tuple[StepRecord, AnalyticPolynomial | None]:
        start, k_m, d_m = greedy_tail_schedule(seq, m, cfg)
        tail = [seq.emit(n) for n in range(start, k_m + 1)]
        res = find_convex_combination(
            tail,
            d_m,
            1.0 / m,
            m=m,
            solver=cfg.solver,
            hankel_size=cfg.hankel_size,
            seed=cfg.seed,
        )
        common = dict(
            m=m,
            tail_start=start,
            k_m=k_m,
            d_m=d_m,
            target=res.target,
            achieved=res.achieved,
            program_bound=res.program_bound,
            u_bound=res.u_bound,
            weights=tuple(float(a) for a in res.weights.alpha),
        )
        if not res.success:
            return StepRecord(status="target-not-reached", lower_witness=res.lower_witness, **common), None

        Q = res.u_m
        try:
            P = rescale_to_bound(Q, cfg.M, m, sup_bound=res.u_bound)
        except PreconditionViolationError as e:
            LOGGER.warning("m=%d: %s; P_m omitted", m, e)
            return StepRecord(status="bound-not-certified", **common), None
        n_cert = max(grid.n, 64 * (P.degree + 1))
        p_sup = certified_sup_norm(P, n_cert)
        recheck = certified_sup_norm(P, 2 * n_cert)
        if max(p_sup, recheck) > cfg.M:
            LOGGER.warning("m=%d: certified sup of P_m %.6g exceeds M; P_m omitted", m, max(p_sup, recheck))
            return (
                StepRecord(status="bound-not-certified", p_sup=p_sup, p_sup_recheck=recheck, **common),
                None,
            )

        err = np.abs(np.asarray(P.evaluate(E.points)) - E.values)
        dev = None
        if g_window is not None:
            cp_ = fourier_window(P.on_grid(grid), cfg.K).coeffs
            dev = float(np.max(np.abs(cp_ - g_window)))
        LOGGER.info(
            "m=%d: achieved %.3e, sup(P) <= %.6f, median error on E %.4f",
            m, res.achieved, p_sup, float(np.median(err)),
        )
        rec = StepRecord(
            status="success",
            p_sup=p_sup,
            p_sup_recheck=recheck,
            max_err_E=float(np.max(err)),
            median_err_E=float(np.median(err)),
            fourier_deviation=dev,
            **common,
        )
        return rec, P

    threads = resolve_threads(cfg.threads)
    ms = range(1, cfg.steps + 1)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run_step, ms))
    else:
        results = [run_step(m) for m in ms]

    steps = tuple(r for r, _ in results)
    polys = [P for _, P in results if P is not None]
    report = PipelineReport(steps, _final_verdict(steps), precondition, quotient_null)
    LOGGER.info(
        "pipeline verdict: %s (%d/%d steps succeeded)",
        report.verdict, len(report.successful()), len(steps),
    )
    return polys, report


@dataclass(frozen=True)
class ConditionsVerdict:
    bound: CheckResult
    pointwise: CheckResult
    weak_star: CheckResult
    report: WeakStarReport
    limit: BoundedAnalyticWitness

    @property
    def condition_i(self) -> bool:
        return self.bound.passed and self.pointwise.passed

    @property
    def condition_ii(self) -> bool:
        return self.weak_star.passed


def _default_grid(seq: Sequence[Member]) -> CircleGrid:
    sampled = [f for f in seq if isinstance(f, SampledFunction)]
    if sampled:
        return sampled[0].grid
    dmax = max(p.degree for p in seq)
    return CircleGrid(max(4096, 8 * (dmax + 1)))


def verify_conditions(
    P_seq: Sequence[Member],
    E: TargetSet,
    M: float,
    g: BoundedAnalyticWitness | None,
    K: int,
    tol: float,
    grid: CircleGrid | None = None,
) -> ConditionsVerdict:
    """
    (i) certified sup of every member <= M + tol and pointwise errors on E settle below
    tol; (ii) boundary samples converge weak-star to those of g. Verdicts, not exceptions.
    """
    P_seq = list(P_seq)
    if not P_seq:
        raise ConfigError("empty sequence", field="P_seq")
    grid = grid or _default_grid(P_seq)

    bound = check_uniform_bound(P_seq, M=M, tol=tol, grid=grid)
    pointwise = check_pointwise_convergence(P_seq, angles=E.angles, values=E.values, tol=tol)

    if g is None:
        polys = [p for p in P_seq if isinstance(p, AnalyticPolynomial)]
        if len(polys) != len(P_seq):
            raise ConfigError("a limit witness g is required for sampled sequences", field="g")
        est = estimate_limit(polys, degree=K)
        g = BoundedAnalyticWitness.from_polynomial(est.polynomial)
        LOGGER.info("no g supplied; using coefficient limit estimate (spread %.3g)", est.spread)

    samples = [
        f if isinstance(f, SampledFunction) else SampledFunction(grid, f.on_grid(grid).values)
        for f in P_seq
    ]
    seq = SequenceProvider.from_functions(samples, name="conditions")
    ws = check_weak_star(seq, boundary_samples(g, grid), K, tol, len(samples))
    weak_star = CheckResult(
        "weak_star_convergence",
        "convergence",
        ws.verdict == "converged",
        {"verdict": ws.verdict, "final_deviation": ws.final_deviation, "witness": list(ws.witness)},
    )
    return ConditionsVerdict(bound, pointwise, weak_star, ws, g)


__all__ = [
    "ConditionsVerdict",
    "LimitEstimate",
    "PipelineReport",
    "StepRecord",
    "TargetSet",
    "estimate_limit",
    "rescale_factor",
    "rescale_to_bound",
    "run_sufficiency",
    "truncate_to_polynomial",
    "verify_conditions",
]
