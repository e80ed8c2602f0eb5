from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Any, Literal

from .errors import ConfigError, GridTooCoarseError, WindowTooLargeError

ModulusMode = Literal["soc", "polygon"]


@dataclass(frozen=True)
class SolverConfig:
    solver: str = "CLARABEL"
    fallback_solver: str = "SCS"

    # "polygon" replaces |w| <= t by `facets` half-planes (LP-only backends)
    modulus: ModulusMode = "soc"
    facets: int = 16

    max_iter: int = 500
    tol: float = 1e-10

    # Solve on a subgrid of ~oversample*(d+1) points; certificates always use the full grid.
    # 0 solves on the full grid.
    oversample: int = 4

    def solver_opts(self, solver: str) -> dict[str, Any]:
        if solver == "CLARABEL":
            return {
                "max_iter": self.max_iter,
                "tol_gap_abs": self.tol,
                "tol_gap_rel": self.tol,
                "tol_feas": self.tol,
            }
        if solver == "SCS":
            return {"max_iters": 50 * self.max_iter, "eps_abs": 1e-9, "eps_rel": 1e-9}
        return {}


@dataclass(frozen=True)
class NehariConfig:
    d: int = 32
    s: int = 16

    # tol_cert = tol_cert_abs + tol_cert_rel * upper
    tol_cert_abs: float = 1e-6
    tol_cert_rel: float = 1e-2

    power_tol: float = 1e-10
    power_max_iter: int = 1000
    seed: int = 0

    solver: SolverConfig = field(default_factory=SolverConfig)

    def tol_cert(self, upper: float) -> float:
        return self.tol_cert_abs + self.tol_cert_rel * float(upper)


@dataclass(frozen=True)
class PipelineConfig:
    # Field names double as CLI flag names (--M, --grid, --steps, ...).
    M: float = 1.0
    grid: int = 4096
    steps: int = 8
    K: int = 32
    tol: float = 1e-3

    # Tail/degree schedule: k_m = tail_factor*m, d_m = degree_factor*m
    tail_factor: int = 4
    degree_factor: int = 32

    hankel_size: int = 16
    seed: int = 0
    threads: int = 1

    # Run even when the sequence fails the weak-star precondition (negative demonstrations).
    skip_precondition: bool = False

    solver: SolverConfig = field(default_factory=SolverConfig)

    @property
    def max_degree(self) -> int:
        return self.degree_factor * self.steps

    @property
    def max_tail_index(self) -> int:
        return self.tail_factor * self.steps

    def nehari(self) -> NehariConfig:
        return NehariConfig(
            d=self.max_degree, s=self.hankel_size, seed=self.seed, solver=self.solver
        )

    def validate(self) -> PipelineConfig:
        if not self.M > 0:
            raise ConfigError(f"must be > 0, got {self.M}", field="M")
        if self.grid < 4:
            raise GridTooCoarseError(f"grid-too-coarse: need N >= 4, got {self.grid}", field="grid")
        if self.steps < 1:
            raise ConfigError(f"must be >= 1, got {self.steps}", field="steps")
        if self.tail_factor < 1:
            raise ConfigError(f"must be >= 1, got {self.tail_factor}", field="tail_factor")
        if self.degree_factor < 0:
            raise ConfigError(f"must be >= 0, got {self.degree_factor}", field="degree_factor")
        if not self.grid > math.pi * self.max_degree:
            raise GridTooCoarseError(
                f"grid-too-coarse: N={self.grid} must exceed pi*d_max={math.pi * self.max_degree:.1f} "
                f"(d_max = degree_factor*steps = {self.max_degree})",
                field="grid",
            )
        if 2 * self.K + 1 > self.grid:
            raise WindowTooLargeError(
                f"window-too-large: 2K+1={2 * self.K + 1} exceeds N={self.grid}", field="K"
            )
        if 2 * (2 * self.hankel_size - 1) + 1 > self.grid:
            raise WindowTooLargeError(
                f"Hankel size {self.hankel_size} needs a window larger than N={self.grid}",
                field="hankel_size",
            )
        if not self.tol > 0:
            raise ConfigError(f"must be > 0, got {self.tol}", field="tol")
        if self.threads < 1:
            raise ConfigError(f"must be >= 1, got {self.threads}", field="threads")
        if self.solver.modulus not in ("soc", "polygon"):
            raise ConfigError(
                f"must be 'soc' or 'polygon', got {self.solver.modulus!r}", field="modulus"
            )
        return self

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)
