"""
Bounded analytic witnesses on the disk, radial boundary sampling, and Cauchy pairings
against analytic polynomial symbols.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from ..errors import ConfigError, DomainError, GridTooCoarseError
from .circle import AnalyticPolynomial, CircleGrid, SampledFunction, certified_sup_norm

WitnessKind = Literal["polynomial", "blaschke", "scaled-composition"]

# |z| may exceed 1 by rounding only
DOMAIN_SLACK = 1e-12

# Grid used to certify the bound of a polynomial witness when none is given.
_WITNESS_CERT_N = 4096


@dataclass(frozen=True, eq=False)
class BoundedAnalyticWitness:
    kind: WitnessKind
    bound: float
    polynomial: AnalyticPolynomial | None = None
    zeros: tuple[complex, ...] = ()
    unimodular: complex = 1.0 + 0j
    inner: BoundedAnalyticWitness | None = None
    scale: complex = 1.0 + 0j
    dilation: float = 1.0

    def __post_init__(self) -> None:
        if self.bound < 0:
            raise ConfigError(f"must be nonnegative, got {self.bound}", field="bound")
        if self.kind == "polynomial":
            if self.polynomial is None:
                raise ConfigError("polynomial witness needs coefficients", field="polynomial")
        elif self.kind == "blaschke":
            for a in self.zeros:
                if not abs(a) < 1:
                    raise ConfigError(f"Blaschke zero {a} is not inside the disk", field="zeros")
            if abs(abs(self.unimodular) - 1.0) > 1e-12:
                raise ConfigError(f"|{self.unimodular}| != 1", field="unimodular")
            if self.bound < 1.0:
                raise ConfigError("a Blaschke product has sup norm 1", field="bound")
        elif self.kind == "scaled-composition":
            if self.inner is None:
                raise ConfigError("scaled composition needs an inner witness", field="inner")
            if not 0 < self.dilation <= 1:
                raise ConfigError(f"must lie in (0, 1], got {self.dilation}", field="dilation")
            if self.bound < abs(self.scale) * self.inner.bound * (1 - 1e-12):
                raise ConfigError("bound below |scale| * inner bound", field="bound")
        else:
            raise ConfigError(f"unknown witness kind {self.kind!r}", field="kind")

    @classmethod
    def from_polynomial(
        cls, p: AnalyticPolynomial, bound: float | None = None
    ) -> BoundedAnalyticWitness:
        cert_n = max(_WITNESS_CERT_N, 64 * (p.degree + 1))
        certified = certified_sup_norm(p, cert_n)
        if bound is None:
            bound = certified
        else:
            grid_max = float(np.max(np.abs(p.on_grid(CircleGrid(cert_n)).values)))
            if bound < grid_max * (1 - 1e-12):
                raise ConfigError(
                    f"bound {bound} is below the polynomial's grid max {grid_max}", field="bound"
                )
        return cls("polynomial", float(bound), polynomial=p)

    @classmethod
    def blaschke(
        cls, zeros, unimodular: complex = 1.0, bound: float = 1.0
    ) -> BoundedAnalyticWitness:
        return cls(
            "blaschke", float(bound), zeros=tuple(complex(a) for a in zeros),
            unimodular=complex(unimodular),
        )

    @classmethod
    def scaled_composition(
        cls, inner: BoundedAnalyticWitness, scale: complex = 1.0, dilation: float = 1.0
    ) -> BoundedAnalyticWitness:
        return cls(
            "scaled-composition",
            abs(scale) * inner.bound,
            inner=inner,
            scale=complex(scale),
            dilation=float(dilation),
        )

    @classmethod
    def zero(cls) -> BoundedAnalyticWitness:
        return cls("polynomial", 0.0, polynomial=AnalyticPolynomial.constant(0))

    def evaluate(self, z):
        return witness_eval(self, z)


def _eval(g: BoundedAnalyticWitness, z: np.ndarray) -> np.ndarray:
    if g.kind == "polynomial":
        return np.asarray(g.polynomial.evaluate(z), dtype=complex)
    if g.kind == "blaschke":
        out = np.full(z.shape, g.unimodular, dtype=complex)
        for a in g.zeros:
            out *= (z - a) / (1.0 - np.conj(a) * z)
        return out
    return g.scale * _eval(g.inner, g.dilation * z)


def witness_eval(g: BoundedAnalyticWitness, z):
    """g(z) for |z| <= 1; every shipped kind extends continuously to T."""
    arr = np.asarray(z, dtype=complex)
    if np.any(np.abs(arr) > 1.0 + DOMAIN_SLACK):
        raise DomainError(f"witness evaluated outside the closed disk (max |z| = {np.max(np.abs(arr))})")
    out = _eval(g, arr)
    if np.ndim(out) == 0:
        return complex(out)
    return out


def radial_boundary_samples(
    g: BoundedAnalyticWitness, grid: CircleGrid, r: float
) -> SampledFunction:
    """values_j = g(r e^{i theta_j}), claimed bound M."""
    if not 0 < r < 1:
        raise ConfigError(f"radius must lie in (0, 1), got {r}", field="r")
    return SampledFunction(grid, witness_eval(g, r * grid.points), g.bound)


def boundary_samples(g: BoundedAnalyticWitness, grid: CircleGrid) -> SampledFunction:
    """The boundary function of g sampled on T (continuous extension)."""
    return SampledFunction(grid, witness_eval(g, grid.points), g.bound)


@dataclass(frozen=True)
class RadialSchedule:
    radii: tuple[float, ...]
    rule: str = "1-2^-n"

    def __post_init__(self) -> None:
        r = np.asarray(self.radii, dtype=float)
        if r.size == 0:
            raise ConfigError("schedule needs at least one radius", field="radii")
        if np.any(r <= 0) or np.any(r >= 1) or np.any(np.diff(r) <= 0):
            raise ConfigError("radii must be strictly increasing in (0, 1)", field="radii")

    @classmethod
    def geometric(cls, length: int) -> RadialSchedule:
        """r_n = 1 - 2^{-n}, n = 1..length."""
        return cls(tuple(1.0 - 2.0 ** (-n) for n in range(1, length + 1)))

    def __len__(self) -> int:
        return len(self.radii)

    def radius(self, n: int) -> float:
        """1-based radius r_n."""
        if not 1 <= n <= len(self.radii):
            raise ConfigError(f"index {n} outside schedule of length {len(self.radii)}", field="n")
        return self.radii[n - 1]


def cauchy_pairing(f: SampledFunction, G: AnalyticPolynomial) -> complex:
    """
    Trapezoid approximation of the contour integral of f(z) G(z) dz over T:
    i * (2pi/N) * sum_j f(theta_j) G(e^{i theta_j}) e^{i theta_j}.
    """
    grid = f.grid
    if grid.n < 4 * (G.degree + 1):
        raise GridTooCoarseError(
            f"grid-too-coarse: N={grid.n} < 4*(deg G + 1)={4 * (G.degree + 1)}", field="N"
        )
    z = grid.points
    integrand = f.values * G.evaluate(z) * z
    return complex(1j * (2.0 * math.pi / grid.n) * np.sum(integrand))
