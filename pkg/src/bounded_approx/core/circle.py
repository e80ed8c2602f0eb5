"""
Shared numerical substrate on the unit circle T.

Conventions:
  - A CircleGrid of size N carries the angles theta_j = 2*pi*j/N.
  - A SampledFunction is identified with the trigonometric interpolant of its samples.
  - Polynomials are kept in coefficient form (ascending powers), so their exact degree
    feeds the Bernstein certificate.

Every value object is immutable after construction (numpy buffers are read-only).
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from numpy.polynomial import polynomial as npoly

from ..errors import (
    BoundViolationError,
    ConfigError,
    GridTooCoarseError,
    WindowExceededError,
    WindowTooLargeError,
)

DEFAULT_TOL = 1e-9

# Relative slack when checking sampled values against a claimed sup bound (rounding only).
BOUND_SLACK = 1e-12


def _readonly(values, dtype=complex) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class CircleGrid:
    n: int

    def __post_init__(self) -> None:
        if int(self.n) != self.n or self.n < 4:
            raise GridTooCoarseError(f"a circle grid needs N >= 4 points, got {self.n}", field="N")
        object.__setattr__(self, "n", int(self.n))

    @cached_property
    def angles(self) -> np.ndarray:
        a = 2.0 * np.pi * np.arange(self.n) / self.n
        a.setflags(write=False)
        return a

    @cached_property
    def points(self) -> np.ndarray:
        z = np.exp(1j * self.angles)
        z.setflags(write=False)
        return z


@dataclass(frozen=True, eq=False)
class SampledFunction:
    grid: CircleGrid
    values: np.ndarray
    claimed_bound: float | None = None

    def __post_init__(self) -> None:
        vals = _readonly(self.values)
        if vals.shape != (self.grid.n,):
            raise ConfigError(
                f"expected {self.grid.n} samples, got shape {vals.shape}", field="values"
            )
        object.__setattr__(self, "values", vals)

        if self.claimed_bound is not None:
            bound = float(self.claimed_bound)
            if bound < 0:
                raise ConfigError(f"must be nonnegative, got {bound}", field="claimed_bound")
            peak = self.sup_on_grid
            if peak > bound * (1.0 + BOUND_SLACK) + BOUND_SLACK:
                raise BoundViolationError(f"grid max {peak!r} exceeds claimed bound {bound!r}")
            object.__setattr__(self, "claimed_bound", bound)

    @classmethod
    def from_callable(
        cls,
        grid: CircleGrid,
        fn: Callable[[np.ndarray], np.ndarray],
        *,
        claimed_bound: float | None = None,
    ) -> SampledFunction:
        """Sample `fn` (a function of the angle array) on the grid."""
        return cls(grid, np.asarray(fn(grid.angles), dtype=complex), claimed_bound)

    @property
    def sup_on_grid(self) -> float:
        return float(np.max(np.abs(self.values)))

    def scaled(self, c: complex) -> SampledFunction:
        bound = None if self.claimed_bound is None else abs(c) * self.claimed_bound
        return SampledFunction(self.grid, c * self.values, bound)

    def __sub__(self, other: SampledFunction) -> SampledFunction:
        require_same_grid(self, other)
        return SampledFunction(self.grid, self.values - other.values)

    def __add__(self, other: SampledFunction) -> SampledFunction:
        require_same_grid(self, other)
        return SampledFunction(self.grid, self.values + other.values)


def require_same_grid(*fs: SampledFunction) -> CircleGrid:
    grids = {f.grid for f in fs}
    if len(grids) != 1:
        raise ConfigError(
            f"functions live on different grids: {sorted(g.n for g in grids)}", field="grid"
        )
    return fs[0].grid


@dataclass(frozen=True, eq=False)
class TrigCoefficients:
    """Fourier window c_k, |k| <= K, stored at index k + K."""

    K: int
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        if self.K < 0:
            raise ConfigError(f"must be nonnegative, got {self.K}", field="K")
        c = _readonly(self.coeffs)
        if c.shape != (2 * self.K + 1,):
            raise ConfigError(f"expected {2 * self.K + 1} coefficients, got {c.shape}", field="coeffs")
        object.__setattr__(self, "coeffs", c)

    @property
    def ks(self) -> np.ndarray:
        return np.arange(-self.K, self.K + 1)

    def c(self, k: int) -> complex:
        if abs(k) > self.K:
            return 0j
        return complex(self.coeffs[k + self.K])

    def negative(self, count: int) -> np.ndarray:
        """[c_{-1}, c_{-2}, ..., c_{-count}]."""
        if count > self.K:
            raise WindowExceededError(f"need c_-{count} but K={self.K}", field="K")
        return self.coeffs[self.K - 1 :: -1][:count].copy()

    def evaluate(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        return np.exp(1j * np.multiply.outer(theta, self.ks)) @ self.coeffs

    def on_grid(self, grid: CircleGrid) -> SampledFunction:
        return SampledFunction(grid, self.evaluate(grid.angles))

    def analytic_part(self) -> AnalyticPolynomial:
        return AnalyticPolynomial(self.coeffs[self.K :])


@dataclass(frozen=True, eq=False)
class AnalyticPolynomial:
    """a_0 + a_1 z + ... + a_d z^d. The leading coefficient may be zero."""

    coeffs: np.ndarray

    def __post_init__(self) -> None:
        c = _readonly(np.atleast_1d(self.coeffs))
        if c.ndim != 1 or c.size == 0:
            raise ConfigError("coefficient list must be a nonempty vector", field="coeffs")
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def constant(cls, c: complex) -> AnalyticPolynomial:
        return cls(np.array([c], dtype=complex))

    @classmethod
    def monomial(cls, k: int, c: complex = 1.0) -> AnalyticPolynomial:
        a = np.zeros(k + 1, dtype=complex)
        a[k] = c
        return cls(a)

    @property
    def degree(self) -> int:
        return int(self.coeffs.size - 1)

    def evaluate(self, z):
        return evaluate_poly(self, z)

    def on_grid(self, grid: CircleGrid) -> SampledFunction:
        return SampledFunction(grid, evaluate_poly(self, grid.points))

    def scaled(self, c: complex) -> AnalyticPolynomial:
        return AnalyticPolynomial(c * self.coeffs)

    def padded(self, degree: int) -> np.ndarray:
        out = np.zeros(max(degree, self.degree) + 1, dtype=complex)
        out[: self.coeffs.size] = self.coeffs
        return out

    def __add__(self, other: AnalyticPolynomial) -> AnalyticPolynomial:
        d = max(self.degree, other.degree)
        return AnalyticPolynomial(self.padded(d) + other.padded(d))

    def __sub__(self, other: AnalyticPolynomial) -> AnalyticPolynomial:
        d = max(self.degree, other.degree)
        return AnalyticPolynomial(self.padded(d) - other.padded(d))

    def l1_norm(self) -> float:
        return float(np.sum(np.abs(self.coeffs)))


def evaluate_poly(p: AnalyticPolynomial, z):
    """Horner evaluation of sum a_k z^k; scalar in, complex out."""
    out = npoly.polyval(np.asarray(z, dtype=complex), p.coeffs)
    if np.ndim(out) == 0:
        return complex(out)
    return out


def fourier_window(f: SampledFunction, K: int) -> TrigCoefficients:
    """c_k = (1/N) sum_j f(theta_j) e^{-ik theta_j} for |k| <= K (plain quadrature)."""
    n = f.grid.n
    if K < 0:
        raise ConfigError(f"must be nonnegative, got {K}", field="K")
    if 2 * K + 1 > n:
        raise WindowTooLargeError(f"window-too-large: 2K+1={2 * K + 1} exceeds N={n}", field="K")
    ks = np.arange(-K, K + 1)
    kernel = np.exp(-1j * np.outer(ks, f.grid.angles))
    return TrigCoefficients(K, kernel @ f.values / n)


def fourier_windows(fs: list[SampledFunction], K: int) -> np.ndarray:
    """Stacked windows, shape (len(fs), 2K+1); same contract as fourier_window."""
    if not fs:
        return np.zeros((0, 2 * K + 1), dtype=complex)
    grid = require_same_grid(*fs)
    if 2 * K + 1 > grid.n:
        raise WindowTooLargeError(
            f"window-too-large: 2K+1={2 * K + 1} exceeds N={grid.n}", field="K"
        )
    ks = np.arange(-K, K + 1)
    kernel = np.exp(-1j * np.outer(grid.angles, ks))
    return np.stack([f.values for f in fs]) @ kernel / grid.n


def _split_bound(grid_max: float, tails: np.ndarray, n: int) -> float:
    # sup|p| <= (grid_max + tail_D) / (1 - pi*D/N) + tail_D for every D < N/pi
    ds = np.arange(tails.size)
    factors = 1.0 - np.pi * ds / n
    ok = factors > 0
    bounds = (grid_max + tails[ok]) / factors[ok] + tails[ok]
    return float(np.min(bounds))


def certified_sup_norm(p: AnalyticPolynomial, N: int) -> float:
    """
    Certified upper bound for sup_{z in T} |p(z)| from N grid values.

    Candidates (all sound, the minimum is returned):
      - (grid max) / (1 - pi*d/N): Bernstein |p'| <= d*sup plus mesh radius pi/N;
      - the same with p split into its degree-D head and an l1-bounded tail, D < d;
      - sum |a_k|.
    """
    d = p.degree
    if not N > math.pi * d or N < 4:
        raise GridTooCoarseError(f"grid-too-coarse: N={N} must exceed pi*d={math.pi * d:.2f}", field="N")
    grid_max = float(np.max(np.abs(evaluate_poly(p, CircleGrid(N).points))))
    mags = np.abs(p.coeffs)
    l1 = float(np.sum(mags))
    tails = np.maximum(l1 - np.cumsum(mags), 0.0)
    return min(l1, _split_bound(grid_max, tails, N))


def certified_sup_sampled(f: SampledFunction | np.ndarray) -> float:
    """
    Certified sup over T of the trigonometric interpolant of grid samples.

    The interpolant is split into its |k| <= D part (Bernstein-inflated) and the
    remaining coefficients (bounded by their l1 mass); the best D is taken, or the
    full l1 mass when smaller.
    """
    values = f.values if isinstance(f, SampledFunction) else np.asarray(f, dtype=complex)
    n = values.size
    c = np.fft.fft(values) / n
    degrees = np.abs(np.fft.fftfreq(n, d=1.0 / n)).round().astype(int)
    mass = np.bincount(degrees, weights=np.abs(c))
    tails = np.maximum(float(mass.sum()) - np.cumsum(mass), 0.0)
    grid_max = float(np.max(np.abs(values)))
    return min(float(mass.sum()), _split_bound(grid_max, tails, n))


def fejer_mean(c: TrigCoefficients, n: int) -> TrigCoefficients:
    """Cesaro mean sigma_n: coefficients c_k * (1 - |k|/(n+1)), |k| <= n."""
    if n < 0:
        raise ConfigError(f"must be nonnegative, got {n}", field="n")
    if n > c.K:
        raise WindowExceededError(f"window-exceeded: n={n} > K={c.K}", field="n")
    ks = np.arange(-n, n + 1)
    weights = 1.0 - np.abs(ks) / (n + 1.0)
    return TrigCoefficients(n, c.coeffs[c.K - n : c.K + n + 1] * weights)
