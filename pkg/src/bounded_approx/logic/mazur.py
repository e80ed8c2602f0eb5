"""
Constructive convex-combination step: find simplex weights over a tail f_m..f_{k_m}
and a polynomial correction u_m with

    sup_T | sum_n alpha_n f_n - u_m |  <  target.

Solved as one joint convex program over (alpha, u); the optimum is certified on the full grid.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from ..config import PipelineConfig, SolverConfig
from ..core.circle import (
    AnalyticPolynomial,
    SampledFunction,
    certified_sup_norm,
    certified_sup_sampled,
    fourier_window,
    require_same_grid,
)
from ..errors import ConfigError, GridTooCoarseError
from .minimax import solve_minimax
from .nehari import hankel_lower_bound

LOGGER = logging.getLogger(__name__)


def project_simplex(v: np.ndarray, z: float = 1.0) -> np.ndarray:
    """Euclidean projection onto {w >= 0, sum w = z} (sort-based)."""
    v = np.asarray(v, dtype=float).ravel()
    u = np.sort(v)[::-1]
    cssv = np.cumsum(u) - z
    ind = np.arange(1, v.size + 1)
    rho = np.count_nonzero(u - cssv / ind > 0)
    theta = cssv[rho - 1] / rho
    w = np.maximum(v - theta, 0.0)
    # renormalize the rounding left by the subtraction
    return w / w.sum() * z


@dataclass(frozen=True, eq=False)
class SimplexWeights:
    m: int
    k_m: int
    alpha: np.ndarray

    def __post_init__(self) -> None:
        a = np.array(self.alpha, dtype=float)
        if a.shape != (self.k_m - self.m + 1,):
            raise ConfigError(
                f"expected {self.k_m - self.m + 1} weights for n={self.m}..{self.k_m}",
                field="alpha",
            )
        if np.any(a < 0) or abs(a.sum() - 1.0) > 1e-12:
            raise ConfigError("weights must lie on the simplex", field="alpha")
        a.setflags(write=False)
        object.__setattr__(self, "alpha", a)

    @property
    def indices(self) -> range:
        return range(self.m, self.k_m + 1)


@dataclass(frozen=True, eq=False)
class CombinationResult:
    weights: SimplexWeights
    u_m: AnalyticPolynomial
    achieved: float
    u_bound: float
    target: float
    success: bool
    program_bound: float
    # Hankel sigma_1 of the optimal combination; only computed when the target is missed
    lower_witness: float | None = None


def _combine(tail: list[SampledFunction], alpha: np.ndarray) -> np.ndarray:
    return np.stack([f.values for f in tail], axis=1) @ alpha


def certify_combination(
    tail: list[SampledFunction], alpha: np.ndarray, u: AnalyticPolynomial
) -> tuple[float, float]:
    """(achieved, u_bound) recomputed from the components; both certified on T."""
    grid = require_same_grid(*tail)
    residual = _combine(tail, alpha) - u.on_grid(grid).values
    # u is exact, so a finer evaluation grid only tightens its bound
    return certified_sup_sampled(residual), certified_sup_norm(u, max(grid.n, 64 * (u.degree + 1)))


def find_convex_combination(
    tail: list[SampledFunction],
    d: int,
    target: float,
    *,
    m: int = 1,
    solver: SolverConfig | None = None,
    hankel_size: int = 16,
    seed: int = 0,
) -> CombinationResult:
    """
    Joint convex program over (alpha in simplex, u of degree <= d).

    A missed target is a reported outcome (success=False) carrying the best achieved
    value and a Hankel lower-bound witness for the optimal combination.
    """
    if not tail:
        raise ConfigError("empty tail", field="tail")
    if not target > 0:
        raise ConfigError(f"must be > 0, got {target}", field="target")
    grid = require_same_grid(*tail)
    if not grid.n > math.pi * d:
        raise GridTooCoarseError(
            f"grid-too-coarse: N={grid.n} must exceed pi*d={math.pi * d:.1f}", field="N"
        )
    solver = solver or SolverConfig()

    columns = np.stack([f.values for f in tail], axis=1)
    sol = solve_minimax(columns, grid.angles, d, solver)
    alpha = project_simplex(sol.weights) if len(tail) > 1 else np.ones(1)
    u = AnalyticPolynomial(sol.coeffs)

    achieved, u_bound = certify_combination(tail, alpha, u)
    weights = SimplexWeights(m, m + len(tail) - 1, alpha)
    success = achieved < target

    witness = None
    if success:
        bounds = [f.claimed_bound for f in tail]
        if all(b is not None for b in bounds):
            M = max(bounds)
            if not u_bound < M + target + 1e-9:
                LOGGER.warning(
                    "step m=%d: certified sup of u_m %.6g is not below M + target = %.6g",
                    m, u_bound, M + target,
                )
    else:
        mix = SampledFunction(grid, _combine(tail, alpha))
        s = min(hankel_size, max(1, (grid.n - 1) // 4))
        witness = hankel_lower_bound(fourier_window(mix, 2 * s - 1), s, seed=seed)
        LOGGER.warning(
            "step m=%d: target %.3g not reached (achieved %.4g, Hankel lower bound %.4g)",
            m, target, achieved, witness,
        )

    return CombinationResult(
        weights=weights,
        u_m=u,
        achieved=achieved,
        u_bound=u_bound,
        target=float(target),
        success=success,
        program_bound=sol.program_bound,
        lower_witness=witness,
    )


def greedy_tail_schedule(provider, m: int, cfg: PipelineConfig | None = None) -> tuple[int, int, int]:
    """(tail start, k_m, d_m) = (m, tail_factor*m, degree_factor*m), k_m capped by the provider."""
    if m < 1:
        raise ConfigError(f"must be >= 1, got {m}", field="m")
    cfg = cfg or PipelineConfig()
    k_m = cfg.tail_factor * m
    length = getattr(provider, "length", None)
    if length is not None and k_m > length:
        LOGGER.warning("tail end %d capped to provider length %d", k_m, length)
        k_m = max(m, int(length))
    return m, k_m, cfg.degree_factor * m
