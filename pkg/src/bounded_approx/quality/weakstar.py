"""
Finite-prefix weak-star checks for uniformly bounded boundary sequences.

Pairings are tested only against trigonometric monomials e^{-ik theta}, |k| <= K.
For sequences bounded by M this suffices: the monomials span a dense subset of L^1
and the pairings are equicontinuous in the L^1 argument. Limits cannot be decided
from finite data, so every verdict carries an explicit `inconclusive` state.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from ..core.circle import (
    BOUND_SLACK,
    AnalyticPolynomial,
    CircleGrid,
    SampledFunction,
    certified_sup_norm,
    fourier_window,
    fourier_windows,
)
from ..core.hardy import BoundedAnalyticWitness, boundary_samples, cauchy_pairing
from ..errors import BoundViolationError, ConfigError, WindowTooLargeError

LOGGER = logging.getLogger(__name__)

Verdict = Literal["converged", "not-converged", "inconclusive"]


@dataclass(frozen=True)
class SequenceProvider:
    """n -> f_n (1-based) on a fixed grid, uniformly bounded by M, finite prefix length."""

    generator: Callable[[int], SampledFunction]
    grid: CircleGrid
    bound: float
    length: int
    name: str = "sequence"

    def emit(self, n: int) -> SampledFunction:
        if not 1 <= n <= self.length:
            raise ConfigError(f"index {n} outside 1..{self.length}", field="n")
        f = self.generator(n)
        if f.grid != self.grid:
            raise ConfigError(f"f_{n} lives on N={f.grid.n}, provider on N={self.grid.n}", field="grid")
        if f.claimed_bound is None or f.claimed_bound > self.bound * (1 + BOUND_SLACK):
            raise BoundViolationError(
                f"f_{n} claims bound {f.claimed_bound}, provider bound is {self.bound}"
            )
        return f

    def prefix(self, L: int) -> list[SampledFunction]:
        return [self.emit(n) for n in range(1, L + 1)]

    @classmethod
    def from_functions(
        cls, fs: Sequence[SampledFunction], bound: float | None = None, name: str = "sequence"
    ) -> SequenceProvider:
        fs = list(fs)
        if not fs:
            raise ConfigError("empty sequence", field="sequence")
        if bound is None:
            bound = max(f.sup_on_grid for f in fs)
        fixed = [
            f if f.claimed_bound is not None else SampledFunction(f.grid, f.values, bound)
            for f in fs
        ]
        return cls(lambda n: fixed[n - 1], fixed[0].grid, float(bound), len(fixed), name)


def prefix_verdict(curve: np.ndarray, tol: float) -> tuple[Verdict, int]:
    """
    Verdict for a deviation curve over n = 1..L and the start (0-based) of its tail.

    converged:     final value <= tol and the last quarter is nonincreasing within 2*tol
    inconclusive:  last quarter nonincreasing and still decreasing, final value above tol
    not-converged: a rising or stalled tail
    """
    curve = np.asarray(curve, dtype=float)
    L = curve.size
    q = max(1, math.ceil(L / 4))
    start = L - q
    tail = curve[start:]
    if tail[-1] <= tol and bool(np.all(np.diff(tail) <= 2 * tol)):
        return "converged", start
    # rounding slack only; a flat tail is a stall
    eps = 1e-12 * max(1.0, float(np.max(np.abs(tail))))
    if tail.size > 1 and bool(np.all(np.diff(tail) <= eps)) and tail[0] - tail[-1] > eps:
        return "inconclusive", start
    return "not-converged", start


@dataclass(frozen=True, eq=False)
class WeakStarReport:
    K: int
    L: int
    tol: float
    deviations: np.ndarray  # (L, 2K+1): |c_k(f_n) - c_k(g)|
    verdict: Verdict
    witness: tuple[int, int]  # (k, n) of the largest deviation in the tail

    @property
    def curve(self) -> np.ndarray:
        return self.deviations.max(axis=1)

    @property
    def final_deviation(self) -> float:
        return float(self.curve[-1])


def _report(D: np.ndarray, K: int, tol: float) -> WeakStarReport:
    L = D.shape[0]
    verdict, start = prefix_verdict(D.max(axis=1), tol)
    tail = D[start:]
    i, j = np.unravel_index(int(np.argmax(tail)), tail.shape)
    witness = (int(j) - K, int(start + i) + 1)
    D = D.copy()
    D.setflags(write=False)
    return WeakStarReport(K, L, float(tol), D, verdict, witness)


def check_weak_star(
    seq: SequenceProvider, g: SampledFunction, K: int, tol: float, L: int
) -> WeakStarReport:
    if g.grid != seq.grid:
        raise ConfigError(f"g on N={g.grid.n}, sequence on N={seq.grid.n}", field="grid")
    if 2 * K + 1 > seq.grid.n:
        raise WindowTooLargeError(
            f"window-too-large: 2K+1={2 * K + 1} exceeds N={seq.grid.n}", field="K"
        )
    if not 1 <= L <= seq.length:
        raise ConfigError(f"prefix length {L} outside 1..{seq.length}", field="L")

    cg = fourier_window(g, K).coeffs
    C = fourier_windows(seq.prefix(L), K)
    report = _report(np.abs(C - cg[None, :]), K, tol)
    LOGGER.info(
        "weak-star %s vs g: %s (final deviation %.3e, witness k=%d n=%d)",
        seq.name, report.verdict, report.final_deviation, *report.witness,
    )
    return report


@dataclass(frozen=True, eq=False)
class KhavinsonReport:
    interior_errors: np.ndarray  # (L,) max over interior samples of |P_n(z) - g(z)|
    interior_verdict: Verdict
    boundary: WeakStarReport
    verdict: Verdict
    theorem_violation: bool


def default_interior_ring(radius: float = 0.5, count: int = 16) -> np.ndarray:
    return radius * np.exp(2j * np.pi * np.arange(count) / count)


def verify_khavinson(
    family: Sequence[AnalyticPolynomial],
    M: float,
    interior_samples: np.ndarray | None,
    g: BoundedAnalyticWitness,
    K: int,
    tol: float,
    grid: CircleGrid | None = None,
) -> KhavinsonReport:
    """
    (a) pointwise convergence P_n -> g at interior samples, then (b) weak-star
    convergence of the boundary samples to those of g. (a) without (b) is flagged as a
    theorem violation: it signals a numerical bug, never a valid state.
    """
    family = list(family)
    if not family:
        raise ConfigError("empty family", field="family")
    z = default_interior_ring() if interior_samples is None else np.asarray(interior_samples, complex)
    if np.any(np.abs(z) >= 1):
        raise ConfigError("interior samples must lie strictly inside the disk", field="interior_samples")
    if grid is None:
        dmax = max(p.degree for p in family)
        grid = CircleGrid(max(4096, 64 * (dmax + 1), 2 * K + 2))

    for n, p in enumerate(family, start=1):
        sup = certified_sup_norm(p, grid.n)
        if sup > M * (1 + BOUND_SLACK):
            raise BoundViolationError(f"member {n}: certified sup {sup!r} exceeds M={M!r}")

    gz = np.asarray(g.evaluate(z), dtype=complex)
    interior = np.array([float(np.max(np.abs(p.evaluate(z) - gz))) for p in family])
    interior_verdict, _ = prefix_verdict(interior, tol)

    seq = SequenceProvider.from_functions(
        [SampledFunction(grid, p.on_grid(grid).values, M) for p in family], M, name="family"
    )
    boundary = check_weak_star(seq, boundary_samples(g, grid), K, tol, len(family))

    violation = interior_verdict == "converged" and boundary.verdict == "not-converged"
    if violation:
        LOGGER.error("interior convergence without boundary weak-star convergence")
    if interior_verdict == "converged" and boundary.verdict == "converged":
        verdict: Verdict = "converged"
    elif "not-converged" in (interior_verdict, boundary.verdict):
        verdict = "not-converged"
    else:
        verdict = "inconclusive"
    return KhavinsonReport(interior, interior_verdict, boundary, verdict, violation)


@dataclass(frozen=True, eq=False)
class QuotientNullReport:
    symbols: tuple[AnalyticPolynomial, ...]
    pairings: np.ndarray  # (L, len(symbols)) complex
    verdict: Verdict
    tol: float

    @property
    def curve(self) -> np.ndarray:
        return np.abs(self.pairings).max(axis=1)


def default_symbols(count: int = 8) -> tuple[AnalyticPolynomial, ...]:
    return tuple(AnalyticPolynomial.monomial(j) for j in range(count))


def check_quotient_weak_null(
    seq: SequenceProvider,
    L: int,
    tol: float,
    symbols: Sequence[AnalyticPolynomial] | None = None,
) -> QuotientNullReport:
    """
    Psi_G(f_n + A) = contour integral of f_n G -> 0 for analytic polynomial symbols G,
    i.e. {f_n + A} tends weakly to zero in C/A when tested on these functionals.
    """
    symbols = tuple(symbols) if symbols is not None else default_symbols()
    fs = seq.prefix(L)
    P = np.array([[cauchy_pairing(f, G) for G in symbols] for f in fs], dtype=complex)
    verdict, _ = prefix_verdict(np.abs(P).max(axis=1), tol)
    return QuotientNullReport(symbols, P, verdict, float(tol))
