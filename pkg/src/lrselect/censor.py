"""Censored likelihood-ratio tests for automatically labelled data.

Automatic labels make each observation come from an epsilon-contaminated
version of the true model.  The minimax test between the contaminated
hypotheses clips every likelihood ratio to ``[a, b]``; the bounds come from
the normalization of the least favorable pair

    p1~ = (1 - eps) * max(p1, a * p2)
    p2~ = (1 - eps) * max(p2, p1 / b)

As ``a, b -> 1`` the clipped statistic only sees which model scored higher,
i.e. the sign test.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.special import gammaln

from .densities import DensitySpec, joint_breakpoints, joint_range
from .lrt import Decision, three_way
from .numerics import adaptive_simpson, bisect
from .scores import llr_array

# exact rational tails up to this n, log-domain beyond
EXACT_BINOMIAL_MAX_N = 1029

_BISECT_LO = 1e-12
_BISECT_FTOL = 1e-10
_BISECT_MAX_ITER = 200
_QUAD_TOL = 1e-13
_MONOTONE_GRID = 4096
_MONOTONE_RTOL = 1e-9


class BreakdownError(ValueError):
    """Contamination is too large: the contaminated hypotheses overlap."""


class NonMonotoneRatioError(ValueError):
    pass


def _check_epsilon(eps: float) -> float:
    eps = float(eps)
    if not 0.0 <= eps < 1.0:
        raise ValueError(f"contamination level must lie in [0, 1), got {eps}")
    return eps


@dataclass(frozen=True)
class ContaminationLevel:
    epsilon: float

    def __post_init__(self):
        _check_epsilon(self.epsilon)


def _exp(x: float) -> float:
    return math.inf if x > 709.0 else math.exp(x)


@dataclass(frozen=True)
class CensoringBounds:
    """Clipping bounds for likelihood ratios.

    ``a = 0`` and ``b = inf`` are allowed and mean "no censoring" on that side
    (the limit reached at zero contamination).  Bounds built with
    :meth:`from_log` keep their log values exactly, so LLRs are clipped at
    precisely those levels.
    """

    a: float
    b: float
    _logs: tuple[float, float] | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        a, b = float(self.a), float(self.b)
        if math.isnan(a) or math.isnan(b) or a < 0.0 or b <= 0.0 or a > b:
            raise ValueError(f"censoring bounds need 0 <= a <= b, got a={a}, b={b}")
        if a == 0.0 and b == 0.0:
            raise ValueError("censoring bounds cannot both be zero")
        if self._logs is None:
            logs = (-math.inf if a == 0.0 else math.log(a), math.inf if b == math.inf else math.log(b))
            object.__setattr__(self, "_logs", logs)

    @classmethod
    def from_log(cls, log_a: float, log_b: float) -> "CensoringBounds":
        if math.isnan(log_a) or math.isnan(log_b) or log_a > log_b:
            raise ValueError(f"log bounds need log_a <= log_b, got {log_a}, {log_b}")
        return cls(_exp(log_a), _exp(log_b), (float(log_a), float(log_b)))

    @classmethod
    def symmetric_log(cls, delta: float) -> "CensoringBounds":
        """Clip each LLR to ``[-delta, delta]``, i.e. bounds ``(e**-delta, e**delta)``."""
        return cls.from_log(-delta, delta)

    @classmethod
    def uncensored(cls) -> "CensoringBounds":
        return cls(0.0, math.inf)

    @property
    def log_a(self) -> float:
        return self._logs[0]

    @property
    def log_b(self) -> float:
        return self._logs[1]

    def is_standard(self) -> bool:
        """True when ``a <= 1 <= b`` (always so for derived bounds)."""
        return self.a <= 1.0 <= self.b


def censor_ratio(ratio: float, bounds: CensoringBounds) -> float:
    if not ratio > 0:
        raise ValueError(f"likelihood ratio must be positive, got {ratio}")
    return min(max(ratio, bounds.a), bounds.b)


def censored_llrs(samples, bounds: CensoringBounds) -> np.ndarray:
    return np.clip(llr_array(samples), bounds.log_a, bounds.log_b)


def censored_statistic(samples, bounds: CensoringBounds) -> float:
    """Sum of LLRs clipped to ``[log a, log b]``."""
    x = llr_array(samples)
    if x.size == 0:
        raise ValueError("censored_statistic requires at least one sample")
    return math.fsum(np.clip(x, bounds.log_a, bounds.log_b))


def decide_censored(samples, bounds: CensoringBounds, tau: float = 0.0) -> Decision:
    stat = censored_statistic(samples, bounds)
    return three_way(stat, tau, tau, f"censored(a={bounds.a!r}, b={bounds.b!r}, tau={tau!r})")


# ---------------------------------------------------------------------------
# Sign test
# ---------------------------------------------------------------------------

def sign_statistic(samples) -> int:
    """Number of strictly positive LLRs."""
    x = llr_array(samples)
    if x.size == 0:
        raise ValueError("sign_statistic requires at least one sample")
    return int(np.count_nonzero(x > 0))


def sign_decide_wta(samples) -> Decision:
    """Winner-takes-all: H1 if more than half the LLRs are positive.

    Zero LLRs are not positive, so they count toward model 2.
    """
    n = llr_array(samples).size
    s = sign_statistic(samples)
    return three_way(s, n / 2.0, n / 2.0, "sign(wta)")


def sign_decide_threshold(samples, tau: float) -> Decision:
    """Sign count compared against an explicit threshold ``tau``."""
    return three_way(sign_statistic(samples), tau, tau, f"sign(tau={tau!r})")


@lru_cache(maxsize=256)
def _exact_upper_tails(n: int) -> tuple[Fraction, ...]:
    """``tails[k] = P(S >= k)`` for S ~ Bin(n, 1/2), k = 0..n+1, as exact fractions."""
    denom = 2 ** n
    tails = [Fraction(0)] * (n + 2)
    acc = 0
    for k in range(n, -1, -1):
        acc += math.comb(n, k)
        tails[k] = Fraction(acc, denom)
    return tuple(tails)


def _log_upper_tails(n: int) -> np.ndarray:
    k = np.arange(n + 1)
    log_pmf = gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1) - n * math.log(2.0)
    # reverse cumulative log-sum-exp
    tails = np.logaddexp.accumulate(log_pmf[::-1])[::-1]
    return np.concatenate([tails, [-np.inf]])


def binomial_critical_value(n: int, alpha: float) -> int:
    """Smallest k with ``P(S >= k) <= alpha`` for S ~ Bin(n, 1/2).

    Returns ``n + 1`` when even ``P(S = n)`` exceeds ``alpha``.
    """
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    n = int(n)
    if n <= EXACT_BINOMIAL_MAX_N:
        bound = Fraction(alpha)
        tails = _exact_upper_tails(n)
        for k in range(n + 2):
            if tails[k] <= bound:
                return k
        return n + 1  # pragma: no cover - tails[n + 1] == 0
    log_alpha = math.log(alpha)
    tails = _log_upper_tails(n)
    return int(np.argmax(tails <= log_alpha))


def sign_decide_level(samples, alpha: float) -> Decision:
    """One-sided sign tests of size alpha in each direction.

    H1 if the count exceeds ``k_alpha``; H2 if it is below ``n - k_alpha``.
    """
    n = llr_array(samples).size
    k = binomial_critical_value(n, alpha)
    s = sign_statistic(samples)
    return three_way(s, k, n - k, f"sign(level, alpha={alpha!r}, k_alpha={k})", threshold=k)


def correct_selection_prob(n: int, k_alpha: int, p: float) -> float:
    """``P(S > k_alpha)`` for S ~ Bin(n, p): power of the upper-tail sign test."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"success probability must lie in (0, 1), got {p}")
    if not 0 <= k_alpha <= n:
        raise ValueError(f"need 0 <= k_alpha <= n, got k_alpha={k_alpha}, n={n}")
    if k_alpha >= n:
        return 0.0
    if n <= 1000:  # comb(n, k) still fits in a double
        q = 1.0 - p
        return math.fsum(math.comb(n, k) * p ** k * q ** (n - k) for k in range(k_alpha + 1, n + 1))
    k = np.arange(k_alpha + 1, n + 1)
    log_terms = (gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)
                 + k * math.log(p) + (n - k) * math.log1p(-p))
    return math.fsum(np.exp(log_terms))


# ---------------------------------------------------------------------------
# Least favorable pair
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LeastFavorablePair:
    p1: DensitySpec
    p2: DensitySpec
    epsilon: float
    bounds: CensoringBounds
    normalization_residuals: tuple[float, float]

    def _check_support(self, x):
        x = np.asarray(x, dtype=float)
        inside = self.p1.in_support(x) | self.p2.in_support(x)
        if not np.all(inside):
            raise ValueError("evaluation point outside the support of both densities")
        return x

    def pdf1(self, x):
        x = self._check_support(x)
        return (1.0 - self.epsilon) * np.maximum(self.p1.pdf(x), self.bounds.a * self.p2.pdf(x))

    def pdf2(self, x):
        x = self._check_support(x)
        inv_b = 0.0 if self.bounds.b == math.inf else 1.0 / self.bounds.b
        return (1.0 - self.epsilon) * np.maximum(self.p2.pdf(x), inv_b * self.p1.pdf(x))

    def sample(self, which: int, rng: np.random.Generator, size: int) -> np.ndarray:
        """Draw from p1~ (``which=1``) or p2~ (``which=2``).

        Rejection sampling: propose from ``(p + c q) / (1 + c)`` with
        ``c = a`` (resp. ``1/b``) and accept with probability
        ``max(p, c q) / (p + c q)``, which is at least 1/2.
        """
        if which == 1:
            main, other, c = self.p1, self.p2, self.bounds.a
        elif which == 2:
            main, other = self.p2, self.p1
            c = 0.0 if self.bounds.b == math.inf else 1.0 / self.bounds.b
        else:
            raise ValueError("which must be 1 or 2")
        if c == 0.0:
            return main.sample(rng, size)
        out = np.empty(0)
        w_other = c / (1.0 + c)
        while out.size < size:
            m = 2 * (size - out.size) + 8
            pick_other = rng.random(m) < w_other
            x = np.where(pick_other, other.sample(rng, m), main.sample(rng, m))
            fm, fo = main.pdf(x), c * other.pdf(x)
            accept = rng.random(m) * (fm + fo) < np.maximum(fm, fo)
            out = np.concatenate([out, x[accept]])
        return out[:size]


def lfp_density_eval(lfp: LeastFavorablePair, x: float) -> tuple[float, float]:
    return float(lfp.pdf1(x)), float(lfp.pdf2(x))


def _integral_of_max(f, g, scale_g: float, lo: float, hi: float, breakpoints) -> float:
    return adaptive_simpson(lambda x: np.maximum(f.pdf(x), scale_g * g.pdf(x)),
                            lo, hi, tol=_QUAD_TOL, breakpoints=breakpoints)


def check_monotone_ratio(p1: DensitySpec, p2: DensitySpec) -> int:
    """Verify p1/p2 is monotone on a 4096-point grid.

    Returns +1 (non-decreasing) or -1 (non-increasing); constant ratios count
    as +1.  Points where both densities vanish are skipped.
    """
    lo, hi = joint_range(p1, p2)
    x = np.linspace(lo, hi, _MONOTONE_GRID)
    with np.errstate(divide="ignore", invalid="ignore"):
        llr = p1.logpdf(x) - p2.logpdf(x)
    llr = llr[~np.isnan(llr)]
    if llr.size < 2:
        raise NonMonotoneRatioError("densities share no evaluable support")
    # a relative change of 1e-9 in the ratio is an absolute 1e-9 in its log;
    # comparisons (not differences) keep infinite log-ratios meaningful
    prev, nxt = llr[:-1], llr[1:]
    increasing = bool(np.all(nxt >= prev - _MONOTONE_RTOL))
    decreasing = bool(np.all(nxt <= prev + _MONOTONE_RTOL))
    if not (increasing or decreasing):
        raise NonMonotoneRatioError("likelihood ratio p1/p2 is not monotone on the support")
    direction = 1 if increasing else -1
    return direction


def epsilon_breakdown(p1: DensitySpec, p2: DensitySpec) -> float:
    """Contamination level at which the censoring bounds collapse to a = b = 1.

    ``T = integral(max(p1, p2)) - 1`` and the breakdown level is ``T / (1 + T)``.
    """
    lo, hi = joint_range(p1, p2)
    total = _integral_of_max(p1, p2, 1.0, lo, hi, joint_breakpoints(p1, p2))
    t = max(total - 1.0, 0.0)
    return t / (1.0 + t)


def _solve_scale(main: DensitySpec, other: DensitySpec, eps: float) -> tuple[float, float]:
    """Solve ``(1 - eps) * integral(max(main, c * other)) = 1`` for c in (0, 1]."""
    lo, hi = joint_range(main, other)
    bps = joint_breakpoints(main, other)

    def residual(c):
        return (1.0 - eps) * _integral_of_max(main, other, c, lo, hi, bps) - 1.0

    c, res, _ = bisect(residual, _BISECT_LO, 1.0, ftol=_BISECT_FTOL, max_iter=_BISECT_MAX_ITER)
    return c, res


def least_favorable_pair(p1: DensitySpec, p2: DensitySpec, eps) -> LeastFavorablePair:
    """Construct the least favorable pair and its censoring bounds.

    Raises
    ------
    BreakdownError
        If ``eps`` reaches the breakdown level; use the sign test instead.
    NonMonotoneRatioError
        If p1/p2 is not monotone.
    """
    if isinstance(eps, ContaminationLevel):
        eps = eps.epsilon
    eps = _check_epsilon(eps)
    check_monotone_ratio(p1, p2)
    lo, hi = joint_range(p1, p2)
    bps = joint_breakpoints(p1, p2)
    if eps == 0.0:
        r1 = _integral_of_max(p1, p2, 0.0, lo, hi, bps) - 1.0
        r2 = _integral_of_max(p2, p1, 0.0, lo, hi, bps) - 1.0
        return LeastFavorablePair(p1, p2, 0.0, CensoringBounds.uncensored(), (r1, r2))
    eps_star = epsilon_breakdown(p1, p2)
    if eps >= eps_star:
        raise BreakdownError(
            f"epsilon={eps} is at or above the breakdown level {eps_star:.6g}; the contaminated "
            "hypotheses overlap and the censored test degenerates to the sign test")
    a, r1 = _solve_scale(p1, p2, eps)
    inv_b, r2 = _solve_scale(p2, p1, eps)
    return LeastFavorablePair(p1, p2, eps, CensoringBounds(a, 1.0 / inv_b), (r1, r2))
