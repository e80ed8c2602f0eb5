"""
Two-sided certificates for the quotient distance dist(h, A) in C/A.

lower: largest singular value of the truncated Hankel matrix of negative Fourier
       coefficients (Nehari duality), by power iteration.
upper: certified sup of h - u for the minimax approximant u of degree <= d.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import hankel

from ..config import NehariConfig, SolverConfig
from ..core.circle import (
    AnalyticPolynomial,
    CircleGrid,
    SampledFunction,
    TrigCoefficients,
    certified_sup_sampled,
    fourier_window,
)
from ..errors import CertificateInconsistencyError, GridTooCoarseError, InsufficientWindowError
from .minimax import solve_minimax

LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class HankelTruncation:
    size: int
    entries: np.ndarray

    @classmethod
    def from_coefficients(cls, c: TrigCoefficients, s: int) -> HankelTruncation:
        if s < 1 or 2 * s - 1 > c.K:
            raise InsufficientWindowError(
                f"insufficient-window: s={s} needs c_-1..c_-{2 * s - 1}, window has K={c.K}",
                field="s",
            )
        neg = c.negative(2 * s - 1)
        # H[j][k] = c_{-(j+k+1)}
        entries = hankel(neg[:s], neg[s - 1 :])
        entries.setflags(write=False)
        return cls(s, entries)

    def is_hankel(self, tol: float = 0.0) -> bool:
        H = self.entries
        for j in range(self.size - 1):
            if np.any(np.abs(H[j + 1, :-1] - H[j, 1:]) > tol):
                return False
        return True


def _top_singular_value(
    H: np.ndarray, *, tol: float, max_iter: int, seed: int
) -> float:
    A = H.conj().T @ H
    if not np.any(A):
        return 0.0
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(A.shape[0]) + 1j * rng.standard_normal(A.shape[0])
    v /= np.linalg.norm(v)

    lam_prev = -1.0
    lam = 0.0
    for _ in range(max_iter):
        w = A @ v
        # Rayleigh quotient never exceeds sigma_1^2, so the bound stays sound if we stop early
        lam = float(np.vdot(v, w).real)
        norm = np.linalg.norm(w)
        if norm == 0.0:
            break
        v = w / norm
        if abs(lam - lam_prev) <= tol * max(lam, 1e-300):
            break
        lam_prev = lam
    else:
        LOGGER.warning("power iteration hit the %d-iteration cap", max_iter)
    return math.sqrt(max(lam, 0.0))


def hankel_lower_bound(
    c: TrigCoefficients,
    s: int,
    *,
    tol: float = 1e-10,
    max_iter: int = 1000,
    seed: int = 0,
) -> float:
    H = HankelTruncation.from_coefficients(c, s)
    return _top_singular_value(H.entries, tol=tol, max_iter=max_iter, seed=seed)


def chebyshev_upper_bound(
    h: SampledFunction, d: int, solver: SolverConfig | None = None
) -> tuple[float, AnalyticPolynomial]:
    """Certified sup of h - u over T for the grid-minimax u of degree <= d."""
    solver = solver or SolverConfig()
    grid = h.grid
    if not grid.n > math.pi * d:
        raise GridTooCoarseError(
            f"grid-too-coarse: N={grid.n} must exceed pi*d={math.pi * d:.1f}", field="N"
        )
    sol = solve_minimax(h.values, grid.angles, d, solver)
    u = AnalyticPolynomial(sol.coeffs)
    residual = h.values - u.on_grid(grid).values
    value = certified_sup_sampled(residual)
    LOGGER.debug(
        "chebyshev d=%d: program bound %.3e, grid max %.3e, certified %.3e",
        d, sol.program_bound, float(np.max(np.abs(residual))), value,
    )
    return value, u


@dataclass(frozen=True, eq=False)
class DistanceCertificate:
    lower: float
    upper: float
    approximant: AnalyticPolynomial
    grid_used: CircleGrid
    tol_cert: float

    def residual(self, h: SampledFunction) -> np.ndarray:
        return h.values - self.approximant.on_grid(h.grid).values


def distance_to_disk_algebra(
    h: SampledFunction, config: NehariConfig | None = None
) -> DistanceCertificate:
    config = config or NehariConfig()
    window = fourier_window(h, 2 * config.s - 1)
    lower = hankel_lower_bound(
        window,
        config.s,
        tol=config.power_tol,
        max_iter=config.power_max_iter,
        seed=config.seed,
    )
    upper, u = chebyshev_upper_bound(h, config.d, config.solver)
    tol_cert = config.tol_cert(upper)
    if lower > upper + tol_cert:
        raise CertificateInconsistencyError(
            f"certificate-inconsistency: lower {lower!r} > upper {upper!r} + {tol_cert!r}"
        )
    LOGGER.info("dist(h, A) in [%.6g, %.6g] (d=%d, s=%d)", lower, upper, config.d, config.s)
    return DistanceCertificate(lower, upper, u, h.grid, tol_cert)
