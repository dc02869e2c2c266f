"""Gamma function and the generalized Gaussian normalizer."""

from __future__ import annotations

import math

# Lanczos approximation, g = 7, nine coefficients.
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_SQRT_2PI = math.sqrt(2.0 * math.pi)


def gamma_fn(x: float) -> float:
    """Gamma function for real ``x > 0``."""
    x = float(x)
    if not x > 0.0:
        raise ValueError(f"gamma_fn is defined here only for x > 0, got {x}")
    if x < 0.5:
        # reflection keeps the series in its most accurate range
        return math.pi / (math.sin(math.pi * x) * gamma_fn(1.0 - x))
    z = x - 1.0
    acc = _LANCZOS_COEF[0]
    for k in range(1, len(_LANCZOS_COEF)):
        acc += _LANCZOS_COEF[k] / (z + k)
    t = z + _LANCZOS_G + 0.5
    # split the power to stay finite for large x
    half = t ** (0.5 * (z + 0.5))
    return _SQRT_2PI * half * (half * math.exp(-t)) * acc


def zeta_p(p: float) -> float:
    """Normalizer ``[Gamma(1/p) / Gamma(3/p)] ** (p/2)`` giving the generalized
    Gaussian unit variance at ``sigma = 1``."""
    if not p > 0.0:
        raise ValueError(f"shape exponent p must be positive, got {p}")
    return (gamma_fn(1.0 / p) / gamma_fn(3.0 / p)) ** (p / 2.0)
