"""Supervised log-likelihood-ratio model selection.

Three outcomes are possible when comparing two models:

* ``H1`` -- model 1 has the larger expected log-likelihood,
* ``H2`` -- model 2 does,
* ``H0`` -- the two cannot be distinguished.

The raw statistic is the summed LLR.  The Vuong form standardizes it by
``sd * sqrt(n)`` and compares against a two-sided Normal critical value.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .scores import llr_array


class Outcome(str, enum.Enum):
    H0 = "H0"
    H1 = "H1"
    H2 = "H2"

    def swapped(self) -> "Outcome":
        return {Outcome.H0: Outcome.H0, Outcome.H1: Outcome.H2, Outcome.H2: Outcome.H1}[self]

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Decision:
    outcome: Outcome
    statistic: float
    threshold: float
    rule: str

    def as_dict(self) -> dict:
        return {"outcome": self.outcome.value, "statistic": self.statistic,
                "threshold": self.threshold, "rule": self.rule}


class DegenerateSampleError(ValueError):
    """All LLRs are identical, so the sample standard deviation is zero."""


@dataclass(frozen=True)
class VuongResult:
    t_lab: float
    standardized: float
    n: int
    sd: float
    alpha: float | None = None
    z_crit: float | None = None


def three_way(statistic: float, upper: float, lower: float, rule: str,
              threshold: float | None = None) -> Decision:
    """H1 above ``upper``, H2 below ``lower``, H0 otherwise (boundaries are H0)."""
    if statistic > upper:
        outcome = Outcome.H1
    elif statistic < lower:
        outcome = Outcome.H2
    else:
        outcome = Outcome.H0
    return Decision(outcome, float(statistic), float(upper if threshold is None else threshold), rule)


# Acklam's rational approximation to the Normal quantile (|rel err| < 1.15e-9),
# refined below by one Halley step against math.erfc.
_A = (-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
      1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00)
_B = (-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
      6.680131188771972e+01, -1.328068155288572e+01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
      -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
      3.754408661907416e+00)
_P_LOW = 0.02425


def norm_ppf(q: float) -> float:
    """Inverse CDF of the standard Normal distribution for 0 < q < 1."""
    if not 0.0 < q < 1.0:
        raise ValueError(f"quantile level must lie in (0, 1), got {q}")
    if q < _P_LOW:
        r = math.sqrt(-2.0 * math.log(q))
        x = (((((_C[0] * r + _C[1]) * r + _C[2]) * r + _C[3]) * r + _C[4]) * r + _C[5]) / \
            ((((_D[0] * r + _D[1]) * r + _D[2]) * r + _D[3]) * r + 1.0)
    elif q <= 1.0 - _P_LOW:
        s = q - 0.5
        r = s * s
        x = (((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * s / \
            (((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0)
    else:
        r = math.sqrt(-2.0 * math.log1p(-q))
        x = -(((((_C[0] * r + _C[1]) * r + _C[2]) * r + _C[3]) * r + _C[4]) * r + _C[5]) / \
            ((((_D[0] * r + _D[1]) * r + _D[2]) * r + _D[3]) * r + 1.0)
    # Halley refinement
    e = 0.5 * math.erfc(-x / math.sqrt(2.0)) - q
    u = e * math.sqrt(2.0 * math.pi) * math.exp(0.5 * x * x)
    return x - u / (1.0 + 0.5 * x * u)


def norm_cdf(x: float) -> float:
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def _check_alpha(alpha: float) -> None:
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")


def t_lab(samples) -> float:
    """Summed log-likelihood ratio over all samples."""
    x = llr_array(samples)
    if x.size == 0:
        raise ValueError("t_lab requires at least one sample")
    return math.fsum(x)


def vuong_statistic(samples) -> VuongResult:
    x = llr_array(samples)
    n = x.size
    if n < 2:
        raise ValueError(f"the Vuong statistic needs n >= 2 samples, got {n}")
    total = math.fsum(x)
    mean = total / n
    sd = math.sqrt(math.fsum((x - mean) ** 2) / (n - 1))
    if sd == 0.0 or (x == x[0]).all():
        raise DegenerateSampleError(
            f"all {n} log-likelihood ratios equal {float(x[0])!r}; sample standard deviation is zero")
    return VuongResult(t_lab=total, standardized=total / (sd * math.sqrt(n)), n=n, sd=sd)


def vuong_decide(samples, alpha: float = 0.05) -> Decision:
    """Two-sided directional Vuong test at significance level ``alpha``."""
    _check_alpha(alpha)
    res = vuong_statistic(samples)
    z = norm_ppf(1.0 - alpha / 2.0)
    return three_way(res.standardized, z, -z, f"vuong(alpha={alpha!r})")


def vuong_result(samples, alpha: float = 0.05) -> VuongResult:
    """Like :func:`vuong_statistic` with ``alpha`` and its critical value filled in."""
    _check_alpha(alpha)
    res = vuong_statistic(samples)
    return VuongResult(res.t_lab, res.standardized, res.n, res.sd, alpha,
                       norm_ppf(1.0 - alpha / 2.0))


def threshold_decide_lab(samples, tau_lab: float = 0.0) -> Decision:
    """Compare the summed LLR against ``tau_lab``; exact equality is H0."""
    return three_way(t_lab(samples), tau_lab, tau_lab, f"t_lab(tau={tau_lab!r})")
