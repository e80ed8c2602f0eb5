"""
Epigraph form of the complex minimax program

    min_{alpha in simplex, u in P_d}  max_j | sum_n alpha_n f_n(theta_j) - u(e^{i theta_j}) |

shared by the Chebyshev upper bound (one column, alpha = 1) and the Mazur step.
Complex unknowns are split into real and imaginary parts; each grid row is a
second-order cone (or, in polygon mode, `facets` half-planes).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import cvxpy as cp
import numpy as np

from ..config import SolverConfig
from ..errors import SolverFailureError

LOGGER = logging.getLogger(__name__)

_OK = (cp.OPTIMAL, cp.OPTIMAL_INACCURATE)


@dataclass(frozen=True, eq=False)
class MinimaxSolution:
    weights: np.ndarray
    coeffs: np.ndarray
    program_bound: float
    solver: str
    status: str
    solve_points: int


def solve_stride(n: int, degree: int, oversample: int) -> int:
    """Largest stride dividing N that keeps >= oversample*(degree+1) solve points."""
    if oversample <= 0:
        return 1
    need = oversample * (degree + 1)
    best = 1
    for stride in range(2, n + 1):
        if n % stride == 0 and n // stride >= need:
            best = stride
    return best


def solve_minimax(
    columns: np.ndarray,
    angles: np.ndarray,
    degree: int,
    cfg: SolverConfig,
) -> MinimaxSolution:
    """columns: shape (N, L) complex samples of f_1..f_L on `angles`."""
    columns = np.asarray(columns, dtype=complex)
    if columns.ndim == 1:
        columns = columns[:, None]
    n_points, n_cols = columns.shape

    stride = solve_stride(n_points, degree, cfg.oversample)
    theta = np.asarray(angles, dtype=float)[::stride]
    F = columns[::stride]

    ks = np.arange(degree + 1)
    C = np.cos(np.outer(theta, ks))
    S = np.sin(np.outer(theta, ks))

    x = cp.Variable(degree + 1)
    y = cp.Variable(degree + 1)
    t = cp.Variable()

    cons = []
    if n_cols == 1:
        alpha = None
        mix_re = F[:, 0].real
        mix_im = F[:, 0].imag
    else:
        alpha = cp.Variable(n_cols, nonneg=True)
        cons.append(cp.sum(alpha) == 1)
        mix_re = F.real @ alpha
        mix_im = F.imag @ alpha

    re = mix_re - (C @ x - S @ y)
    im = mix_im - (S @ x + C @ y)

    if cfg.modulus == "soc":
        cons.append(cp.SOC(t * np.ones(theta.size), cp.vstack([re, im]), axis=0))
        inflate = 1.0
    else:
        # Outer polygon: Re(e^{-i phi} w) <= t for every facet direction phi
        for phi in 2.0 * np.pi * np.arange(cfg.facets) / cfg.facets:
            cons.append(math.cos(phi) * re + math.sin(phi) * im <= t)
        inflate = 1.0 / math.cos(math.pi / cfg.facets)

    prob = cp.Problem(cp.Minimize(t), cons)
    LOGGER.debug(
        "minimax program: %d points (stride %d), degree %d, %d columns, modulus=%s",
        theta.size, stride, degree, n_cols, cfg.modulus,
    )

    used = cfg.solver
    try:
        prob.solve(solver=cfg.solver, **cfg.solver_opts(cfg.solver))
        status = prob.status
    except cp.error.SolverError as e:
        LOGGER.warning("solver %s failed (%s); falling back to %s", cfg.solver, e, cfg.fallback_solver)
        status = None

    if status not in _OK and cfg.fallback_solver:
        used = cfg.fallback_solver
        try:
            prob.solve(solver=cfg.fallback_solver, **cfg.solver_opts(cfg.fallback_solver))
            status = prob.status
        except cp.error.SolverError as e:
            raise SolverFailureError(f"solver-failure: {cfg.fallback_solver}: {e}") from e

    if status not in _OK:
        # u = 0 is always feasible, so this is an iteration cap or numerical breakdown.
        raise SolverFailureError(
            f"solver-failure: status {status!r} from {used}; raise SolverConfig.max_iter "
            "or switch solver"
        )
    if status == cp.OPTIMAL_INACCURATE:
        LOGGER.warning("solver %s returned an inaccurate optimum", used)

    weights = np.ones(1) if alpha is None else np.asarray(alpha.value, dtype=float)
    coeffs = np.asarray(x.value, dtype=float) + 1j * np.asarray(y.value, dtype=float)
    return MinimaxSolution(
        weights=weights,
        coeffs=coeffs,
        program_bound=float(t.value) * inflate,
        solver=used,
        status=str(status),
        solve_points=int(theta.size),
    )
