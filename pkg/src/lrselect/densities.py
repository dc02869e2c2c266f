"""Univariate densities used for contamination analysis and simulation.

Parametric families can be sampled; tabulated densities can only be evaluated
and integrated.  Text form (used by the CLI)::

    gaussian:MU,SIGMA
    laplacian:MU,SCALE
    gengauss:P,MU,SIGMA
    table:PATH          # two-column "x,density" CSV, '#' comments allowed
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from os import PathLike

import numpy as np
from scipy import special as sp_special

from .special import gamma_fn, zeta_p

# Per-side tail mass left outside the quadrature range of a parametric family.
_TAIL_MASS = 1e-17
_TRUNCATE_SD = 12.0


class DensitySpecError(ValueError):
    pass


class DensitySpec:
    """Base class: subclasses provide ``pdf``/``logpdf`` over numpy arrays."""

    kind: str = ""

    def pdf(self, x):
        return np.exp(self.logpdf(x))

    def logpdf(self, x):
        raise NotImplementedError

    @property
    def support(self) -> tuple[float, float]:
        return (-math.inf, math.inf)

    def quad_range(self) -> tuple[float, float]:
        """Finite interval carrying all but a negligible amount of mass."""
        raise NotImplementedError

    def breakpoints(self) -> tuple[float, ...]:
        """Points where the density is not smooth (or its mode)."""
        return ()

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        raise DensitySpecError(f"sampling is not supported for {self.kind} densities")

    def in_support(self, x) -> np.ndarray:
        lo, hi = self.support
        x = np.asarray(x, dtype=float)
        return (x >= lo) & (x <= hi)


@dataclass(frozen=True)
class Gaussian(DensitySpec):
    mu: float = 0.0
    sigma: float = 1.0
    kind = "gaussian"

    def __post_init__(self):
        if not self.sigma > 0:
            raise DensitySpecError(f"gaussian sigma must be positive, got {self.sigma}")

    def logpdf(self, x):
        z = (np.asarray(x, dtype=float) - self.mu) / self.sigma
        return -0.5 * z * z - math.log(self.sigma) - 0.5 * math.log(2.0 * math.pi)

    def quad_range(self):
        half = _TRUNCATE_SD * self.sigma
        return (self.mu - half, self.mu + half)

    def breakpoints(self):
        return (self.mu,)

    def sample(self, rng, size):
        u = np.maximum(rng.random(size), 2.0 ** -54)  # ndtri(0) = -inf
        return self.mu + self.sigma * sp_special.ndtri(u)

    def __str__(self):
        return f"gaussian:{self.mu!r},{self.sigma!r}"


@dataclass(frozen=True)
class Laplacian(DensitySpec):
    mu: float = 0.0
    scale: float = 1.0
    kind = "laplacian"

    def __post_init__(self):
        if not self.scale > 0:
            raise DensitySpecError(f"laplacian scale must be positive, got {self.scale}")

    def logpdf(self, x):
        return -np.abs(np.asarray(x, dtype=float) - self.mu) / self.scale - math.log(2.0 * self.scale)

    def quad_range(self):
        half = max(_TRUNCATE_SD * math.sqrt(2.0) * self.scale,
                   -self.scale * math.log(2.0 * _TAIL_MASS))
        return (self.mu - half, self.mu + half)

    def breakpoints(self):
        return (self.mu,)

    def sample(self, rng, size):
        # inverse CDF; u = 0 would map to -inf
        s = np.maximum(rng.random(size), 2.0 ** -54) - 0.5
        return self.mu - self.scale * np.sign(s) * np.log1p(-2.0 * np.abs(s))

    def __str__(self):
        return f"laplacian:{self.mu!r},{self.scale!r}"


@dataclass(frozen=True)
class GenGaussian(DensitySpec):
    """Generalized Gaussian with shape ``p``; ``sigma`` is its standard deviation."""

    p: float = 2.0
    mu: float = 0.0
    sigma: float = 1.0
    kind = "gengauss"
    _zeta: float = field(init=False, repr=False, compare=False)
    _log_norm: float = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.sigma > 0:
            raise DensitySpecError(f"gengauss sigma must be positive, got {self.sigma}")
        if not self.p > 0:
            raise DensitySpecError(f"gengauss shape p must be positive, got {self.p}")
        if not 0.25 < self.p <= 10.0:
            raise DensitySpecError(f"gengauss shape p={self.p} outside the supported range (0.25, 10]")
        if not 1.0 <= self.p <= 2.0:
            warnings.warn(f"gengauss shape p={self.p} lies outside [1, 2]", stacklevel=3)
        zeta = zeta_p(self.p)
        object.__setattr__(self, "_zeta", zeta)
        norm = 2.0 * self.sigma * zeta ** (1.0 / self.p) * gamma_fn(1.0 + 1.0 / self.p)
        object.__setattr__(self, "_log_norm", math.log(norm))

    @property
    def zeta(self) -> float:
        return self._zeta

    def logpdf(self, x):
        t = np.abs(np.asarray(x, dtype=float) - self.mu) / self.sigma
        return -(t ** self.p) / self._zeta - self._log_norm

    def quad_range(self):
        # |x - mu| / sigma = (zeta * G) ** (1/p) with G ~ Gamma(1/p)
        g = sp_special.gammainccinv(1.0 / self.p, 2.0 * _TAIL_MASS)
        half = self.sigma * max(_TRUNCATE_SD, (self._zeta * g) ** (1.0 / self.p))
        return (self.mu - half, self.mu + half)

    def breakpoints(self):
        return (self.mu,)

    def sample(self, rng, size):
        if self.p == 2.0:
            return Gaussian(self.mu, self.sigma).sample(rng, size)
        if self.p == 1.0:
            return Laplacian(self.mu, self.sigma / math.sqrt(2.0)).sample(rng, size)
        # numpy's standard_gamma is Marsaglia-Tsang rejection sampling
        # (squeezed Gaussian proposal, boosted by U**(1/shape) for shape < 1)
        g = rng.standard_gamma(1.0 / self.p, size)
        sign = np.where(rng.random(size) < 0.5, -1.0, 1.0)
        return self.mu + sign * self.sigma * (self._zeta * g) ** (1.0 / self.p)

    def __str__(self):
        return f"gengauss:{self.p!r},{self.mu!r},{self.sigma!r}"


@dataclass(frozen=True, eq=False)
class Tabulated(DensitySpec):
    """Piecewise-linear density through ``(x, density)`` nodes, zero outside."""

    xs: np.ndarray
    ys: np.ndarray
    source: str = "<table>"
    kind = "tabulated"

    def __post_init__(self):
        xs = np.asarray(self.xs, dtype=float)
        ys = np.asarray(self.ys, dtype=float)
        if xs.ndim != 1 or xs.shape != ys.shape or xs.size < 2:
            raise DensitySpecError("tabulated density needs at least two (x, density) pairs")
        if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(ys))):
            raise DensitySpecError("tabulated density contains non-finite values")
        if np.any(np.diff(xs) <= 0):
            raise DensitySpecError("tabulated x values must be strictly increasing")
        if np.any(ys < 0):
            raise DensitySpecError("tabulated density values must be non-negative")
        # trapezoid rule is exact for the piecewise-linear interpolant
        mass = float(np.sum(np.diff(xs) * (ys[1:] + ys[:-1]) / 2.0))
        if abs(mass - 1.0) > 1e-6:
            raise DensitySpecError(f"tabulated density integrates to {mass!r}, not 1 (tolerance 1e-6)")
        xs.setflags(write=False)
        ys.setflags(write=False)
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)

    def pdf(self, x):
        return np.interp(np.asarray(x, dtype=float), self.xs, self.ys, left=0.0, right=0.0)

    def logpdf(self, x):
        with np.errstate(divide="ignore"):
            return np.log(self.pdf(x))

    @property
    def support(self):
        return (float(self.xs[0]), float(self.xs[-1]))

    def quad_range(self):
        return self.support

    def breakpoints(self):
        return tuple(self.xs.tolist())

    def __str__(self):
        return f"table:{self.source}"


def read_tabulated(path: str | PathLike) -> Tabulated:
    xs, ys = [], []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            fields = line.split(",")
            if len(fields) != 2:
                raise DensitySpecError(f"{path}: line {lineno}: expected 'x,density'")
            try:
                xs.append(float(fields[0]))
                ys.append(float(fields[1]))
            except ValueError:
                raise DensitySpecError(f"{path}: line {lineno}: non-numeric value") from None
    return Tabulated(np.array(xs), np.array(ys), source=str(path))


def parse_density(text: str) -> DensitySpec:
    """Parse ``family:param,param,...`` (or ``table:PATH``) into a density."""
    family, sep, rest = text.partition(":")
    family = family.strip().lower()
    if not sep:
        raise DensitySpecError(f"density spec {text!r} must look like 'family:params'")
    if family == "table":
        return read_tabulated(rest)
    try:
        params = [float(v) for v in rest.split(",")]
    except ValueError:
        raise DensitySpecError(f"non-numeric parameter in density spec {text!r}") from None
    arity = {"gaussian": 2, "laplacian": 2, "gengauss": 3}
    if family not in arity:
        raise DensitySpecError(f"unknown density family {family!r}")
    if len(params) != arity[family]:
        raise DensitySpecError(f"{family} takes {arity[family]} parameters, got {len(params)}")
    if not all(math.isfinite(v) for v in params):
        raise DensitySpecError(f"non-finite parameter in density spec {text!r}")
    cls = {"gaussian": Gaussian, "laplacian": Laplacian, "gengauss": GenGaussian}[family]
    return cls(*params)


def joint_range(*densities: DensitySpec) -> tuple[float, float]:
    lows, highs = zip(*(d.quad_range() for d in densities))
    return min(lows), max(highs)


def joint_breakpoints(*densities: DensitySpec) -> tuple[float, ...]:
    return tuple(sorted({b for d in densities for b in d.breakpoints()}))
