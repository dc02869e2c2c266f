"""Efficacy and asymptotic relative efficiency of the sign test against the
summed-LLR (mean) test.

For a location family with density ``f`` and variance ``sigma**2`` the ARE of
the sign test relative to the mean test is ``(2 * sigma * f(0)) ** 2``.  For
the generalized Gaussian with exponent ``p`` this is
``p**2 * Gamma(3/p) / Gamma(1/p)**3``: ``2/pi`` for the Normal, 2 for the
Laplacian.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from os import PathLike

import numpy as np
from scipy import stats

from .densities import GenGaussian
from .lrt import norm_ppf
from .numerics import bisect
from .special import gamma_fn, zeta_p
from .streams import blocks, check_seed, map_blocks, trial_rng

__all__ = [
    "gamma_fn", "zeta_p", "GenGaussian", "gen_gaussian_pdf", "are_from_density",
    "are_closed_form", "AreCurve", "are_curve", "are_crossing", "empirical_are",
    "EmpiricalAre", "PowerUnreachableError",
]


def gen_gaussian_pdf(params: GenGaussian, x):
    """Generalized Gaussian density at ``x`` (scalar or array)."""
    out = params.pdf(x)
    return float(out) if np.ndim(out) == 0 else out


def are_from_density(sigma: float, f0: float) -> float:
    """ARE ``[2 sigma f(0)]**2`` from the null spread and the density at the centre."""
    if not (sigma > 0 and f0 > 0):
        raise ValueError(f"sigma and f0 must be positive, got sigma={sigma}, f0={f0}")
    return (2.0 * sigma * f0) ** 2


def are_closed_form(p: float) -> float:
    if not p > 0:
        raise ValueError(f"shape exponent p must be positive, got {p}")
    return p * p * gamma_fn(3.0 / p) / gamma_fn(1.0 / p) ** 3


@dataclass(frozen=True)
class AreCurve:
    points: tuple[tuple[float, float], ...]

    @property
    def p(self) -> np.ndarray:
        return np.array([pt[0] for pt in self.points])

    @property
    def are(self) -> np.ndarray:
        return np.array([pt[1] for pt in self.points])

    def to_csv(self) -> str:
        lines = ["# p,are"] + [f"{p!r},{a!r}" for p, a in self.points]
        return "\n".join(lines) + "\n"

    def write_csv(self, path: str | PathLike) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.to_csv())


def are_curve(p_min: float = 1.0, p_max: float = 2.0, steps: int = 101) -> AreCurve:
    if not 0 < p_min < p_max:
        raise ValueError(f"need 0 < p_min < p_max, got {p_min}, {p_max}")
    if steps < 2:
        raise ValueError(f"steps must be at least 2, got {steps}")
    grid = np.linspace(p_min, p_max, steps)
    grid[0], grid[-1] = p_min, p_max
    return AreCurve(tuple((float(p), are_closed_form(float(p))) for p in grid))


def are_crossing(p_lo: float = 1.0, p_hi: float = 2.0, tol: float = 1e-13) -> float:
    """Exponent where the sign and mean tests are equally efficient (ARE = 1)."""
    p, _, _ = bisect(lambda p: are_closed_form(p) - 1.0, p_lo, p_hi, ftol=tol)
    return p


# ---------------------------------------------------------------------------
# Monte Carlo sample-size ratio
# ---------------------------------------------------------------------------

class PowerUnreachableError(RuntimeError):
    pass


@dataclass(frozen=True)
class EmpiricalAre:
    ratio: float
    n_mean: float
    n_sign: float
    p: float
    effect: float
    alpha: float
    power_target: float
    trials: int
    seed: int
    max_n: int


_MAX_N = 1 << 21
_FIT_HALFWIDTH = 0.08
_CELLS_PER_BLOCK = 4_000_000


def _sign_test_cutoffs(n_max: int, alpha: float) -> tuple[np.ndarray, np.ndarray]:
    """Randomized one-sided sign test of exact size ``alpha`` for n = 1..n_max.

    Reject when S > k, or when S == k with probability gamma.
    """
    n = np.arange(1, n_max + 1)
    k = stats.binom.isf(alpha, n, 0.5)  # smallest k with P(S > k) <= alpha
    above = stats.binom.sf(k, n, 0.5)
    at = stats.binom.pmf(k, n, 0.5)
    with np.errstate(divide="ignore", invalid="ignore"):
        gamma = np.where(at > 0, (alpha - above) / at, 0.0)
    return k, np.clip(gamma, 0.0, 1.0)


def _crossing(power: np.ndarray, target: float) -> float | None:
    """Sample size where a power curve reaches ``target``.

    Power of a consistent location test behaves like Phi(c0 + c1 sqrt(n)); a
    least-squares line through probit(power) against sqrt(n), restricted to
    the points near ``target``, is solved for the crossing.
    """
    n = np.arange(1, power.size + 1, dtype=float)
    window = (power >= target - _FIT_HALFWIDTH) & (power <= target + _FIT_HALFWIDTH)
    if power[-1] < target + _FIT_HALFWIDTH or np.count_nonzero(window) < 8:
        return None
    probit = stats.norm.ppf(power[window])
    c1, c0 = np.polyfit(np.sqrt(n[window]), probit, 1)
    if c1 <= 0:
        return None
    return float(((stats.norm.ppf(target) - c0) / c1) ** 2)


def _rejection_counts(dist: GenGaussian, effect: float, alpha: float, n_max: int,
                      seed: int, trial_range: range, k: np.ndarray, gamma: np.ndarray):
    z_alpha = norm_ppf(1.0 - alpha)
    sqrt_n = np.sqrt(np.arange(1, n_max + 1, dtype=float))
    mean_hits = np.zeros(n_max, dtype=np.int64)
    sign_hits = np.zeros(n_max, dtype=np.int64)
    for t in trial_range:
        rng = trial_rng(seed, t, stream=1)
        x = dist.sample(rng, n_max) + effect
        u = rng.random()
        # unit-variance family, so the standardized mean is sum / sqrt(n)
        mean_hits += np.cumsum(x) / sqrt_n > z_alpha
        s = np.cumsum(x > 0)
        sign_hits += (s > k) | ((s == k) & (u < gamma))
    return mean_hits, sign_hits


def empirical_are(p: float, effect: float, alpha: float = 0.05, power_target: float = 0.8,
                  trials: int = 20000, seed: int = 0, workers: int = 1,
                  max_n: int = _MAX_N) -> EmpiricalAre:
    """Monte Carlo estimate of ``n_mean / n_sign`` at equal level and power.

    Samples are unit-variance generalized Gaussian with exponent ``p``,
    shifted by ``effect``.  Every trial draws one stream of observations and
    both one-sided tests (standardized mean with known unit variance,
    randomized exact-size sign test) read the same draws at every prefix
    length ``n``, so one pass yields both complete power-vs-n curves.  The
    explored length starts from a Normal-theory guess and doubles until both
    curves pass the target; each crossing is then read off a probit fit.

    The result depends only on the arguments (``workers`` included or not).
    """
    if not effect > 0:
        raise ValueError(f"effect must be positive, got {effect}")
    if not 0 < alpha < 0.5:
        raise ValueError(f"alpha must lie in (0, 0.5), got {alpha}")
    if not alpha < power_target < 1:
        raise ValueError(f"power_target must lie in (alpha, 1), got {power_target}")
    if trials < 100:
        raise ValueError(f"need at least 100 trials, got {trials}")
    seed = check_seed(seed)
    dist = GenGaussian(p, 0.0, 1.0)

    z_sum = norm_ppf(1.0 - alpha) + norm_ppf(min(power_target + _FIT_HALFWIDTH, 0.999))
    guess = (z_sum / effect) ** 2 * max(1.0, 1.0 / are_closed_form(p))
    n_max = int(min(max(64, math.ceil(1.2 * guess)), max_n))
    while True:
        k, gamma = _sign_test_cutoffs(n_max, alpha)
        per_block = max(1, _CELLS_PER_BLOCK // n_max)
        parts = map_blocks(
            lambda r: _rejection_counts(dist, effect, alpha, n_max, seed, r, k, gamma),
            blocks(trials, per_block), workers)
        mean_hits = sum(part[0] for part in parts)
        sign_hits = sum(part[1] for part in parts)
        n_mean = _crossing(mean_hits / trials, power_target)
        n_sign = _crossing(sign_hits / trials, power_target)
        if n_mean is not None and n_sign is not None:
            break
        if n_max >= max_n:
            raise PowerUnreachableError(
                f"power {power_target} not reached within n in [1, {max_n}] "
                f"(effect={effect}, p={p})")
        n_max = min(2 * n_max, max_n)
    return EmpiricalAre(n_mean / n_sign, n_mean, n_sign, p, effect, alpha,
                        power_target, trials, seed, n_max)
