# src/bounded_approx/quality/checks.py
from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from ..core.circle import (
    AnalyticPolynomial,
    CircleGrid,
    SampledFunction,
    certified_sup_norm,
    certified_sup_sampled,
)
from .weakstar import Verdict, prefix_verdict


@dataclass(frozen=True)
class CheckResult:
    name: str
    check_type: str
    passed: bool
    details: dict


Member = AnalyticPolynomial | SampledFunction


def member_sup_bound(f: Member, grid: CircleGrid) -> float:
    """Certified sup over T of a sequence member."""
    if isinstance(f, AnalyticPolynomial):
        return certified_sup_norm(f, grid.n)
    return certified_sup_sampled(f)


def member_values(f: Member, theta: np.ndarray) -> np.ndarray:
    """Values at arbitrary angles; sampled members through their trigonometric interpolant."""
    theta = np.asarray(theta, dtype=float)
    if isinstance(f, AnalyticPolynomial):
        return np.asarray(f.evaluate(np.exp(1j * theta)), dtype=complex)
    n = f.grid.n
    c = np.fft.fft(f.values) / n
    # Nyquist mode (even N) sits at k = -N/2
    ks = np.fft.fftfreq(n, d=1.0 / n)
    return np.exp(1j * np.multiply.outer(theta, ks)) @ c


def check_uniform_bound(seq: Sequence[Member], *, M: float, tol: float, grid: CircleGrid) -> CheckResult:
    sups = [member_sup_bound(f, grid) for f in seq]
    over = [n for n, s in enumerate(sups, start=1) if s > M + tol]
    return CheckResult(
        "uniform_bound",
        "bound",
        len(over) == 0,
        {"M": M, "tol": tol, "certified_sup": sups, "violations": over},
    )


def check_pointwise_convergence(
    seq: Sequence[Member], *, angles: np.ndarray, values: np.ndarray, tol: float
) -> CheckResult:
    """Max error over the target samples must settle below tol by the last member."""
    errors = np.array(
        [float(np.max(np.abs(member_values(f, angles) - values))) for f in seq]
    )
    verdict: Verdict
    verdict, _ = prefix_verdict(errors, tol)
    return CheckResult(
        "pointwise_convergence",
        "convergence",
        verdict == "converged",
        {"verdict": verdict, "tol": tol, "max_error": errors.tolist()},
    )


def summarize_checks(results: list[CheckResult]) -> dict:
    return {
        "total": len(results),
        "passed": sum(1 for r in results if r.passed),
        "failed": [r.name for r in results if not r.passed],
    }
