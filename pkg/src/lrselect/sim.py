"""Monte Carlo checks of selection error under contamination.

Every trial draws its observations from a generator keyed by
``(seed, trial index)``; all tests see the same draws in a trial, so their
decisions are directly comparable trial by trial.  Results are identical
whether trials run on one thread or many.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .censor import (CensoringBounds, LeastFavorablePair, _check_epsilon, decide_censored,
                     epsilon_breakdown, least_favorable_pair, sign_decide_wta)
from .densities import DensitySpec, Gaussian
from .lrt import DegenerateSampleError, Outcome, norm_ppf, threshold_decide_lab, vuong_decide
from .streams import blocks, check_seed, map_blocks, trial_rng

Z_99 = norm_ppf(0.995)

_CODE = {Outcome.H0: 0, Outcome.H1: 1, Outcome.H2: 2}


@dataclass(frozen=True)
class ContaminationModel:
    """``(1 - epsilon) * base + epsilon * contaminant``."""

    base: DensitySpec
    contaminant: DensitySpec
    epsilon: float

    def __post_init__(self):
        _check_epsilon(self.epsilon)

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        pick = rng.random(n) < self.epsilon
        x = self.base.sample(rng, n)
        y = self.contaminant.sample(rng, n)
        return np.where(pick, y, x)


@dataclass(frozen=True)
class LfpSide:
    """One member (1 or 2) of a least favorable pair, as a sampling source."""

    lfp: LeastFavorablePair
    which: int

    def sample(self, rng, n):
        return self.lfp.sample(self.which, rng, n)


Source = Union[DensitySpec, ContaminationModel, LfpSide]


def sample_contaminated(model: ContaminationModel, n: int, seed: int) -> np.ndarray:
    """``n`` i.i.d. draws from the contamination mixture; deterministic in ``seed``."""
    return model.sample(trial_rng(seed, 0, stream=3), n)


@dataclass(frozen=True)
class TestSpec:
    """A selection rule applied to the per-observation LLRs.

    ``kind`` is ``"uncensored"`` (summed LLR vs ``tau``), ``"censored"``
    (clipped sum vs ``tau``) or ``"sign"`` (winner-takes-all count).
    """

    __test__ = False  # not a pytest class

    kind: str
    tau: float = 0.0
    bounds: CensoringBounds | None = None

    def __post_init__(self):
        if self.kind not in ("uncensored", "censored", "sign"):
            raise ValueError(f"unknown test kind {self.kind!r}")
        if self.kind == "censored" and self.bounds is None:
            raise ValueError("a censored test needs bounds")

    @property
    def name(self) -> str:
        return {"uncensored": "uncensored_lr", "censored": "censored", "sign": "sign_wta"}[self.kind]

    def decide(self, llr: np.ndarray):
        if self.kind == "uncensored":
            return threshold_decide_lab(llr, self.tau)
        if self.kind == "censored":
            return decide_censored(llr, self.bounds, self.tau)
        return sign_decide_wta(llr)


@dataclass(frozen=True)
class SimulationReport:
    seed: int
    trials: int
    n_per_trial: int
    error_rates: dict[str, float]
    ci_halfwidths: dict[str, float]
    label: str = "simulation"
    params: dict = field(default_factory=dict)
    extras: dict = field(default_factory=dict)
    # per-trial outcome codes (0=H0, 1=H1, 2=H2); kept out of serialization
    outcomes: dict[str, np.ndarray] = field(default_factory=dict, repr=False, compare=False)

    def as_dict(self) -> dict:
        return {
            "label": self.label,
            "seed": self.seed,
            "trials": self.trials,
            "n_per_trial": self.n_per_trial,
            "params": self.params,
            "error_rates": self.error_rates,
            "ci_halfwidths": self.ci_halfwidths,
            "extras": self.extras,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, indent=2)

    def to_text(self) -> str:
        lines = [f"label: {self.label}", f"seed: {self.seed}", f"trials: {self.trials}",
                 f"n_per_trial: {self.n_per_trial}"]
        for k, v in sorted(self.params.items()):
            lines.append(f"param.{k}: {v}")
        for name in sorted(self.error_rates):
            lines.append(f"error_rate.{name}: {self.error_rates[name]!r} "
                         f"+/- {self.ci_halfwidths[name]!r}")
        for k, v in sorted(self.extras.items()):
            lines.append(f"{k}: {v}")
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        lines = [f"# label={self.label} seed={self.seed} trials={self.trials} n={self.n_per_trial}",
                 "test,error_rate,ci_halfwidth"]
        for name in sorted(self.error_rates):
            lines.append(f"{name},{self.error_rates[name]!r},{self.ci_halfwidths[name]!r}")
        return "\n".join(lines) + "\n"


def ci_halfwidth(rate: float, trials: int) -> float:
    """99% Normal-approximation half-width of a binomial proportion."""
    return Z_99 * math.sqrt(rate * (1.0 - rate) / trials)


def _check_counts(n: int, trials: int) -> None:
    if int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    if int(trials) != trials or trials < 1:
        raise ValueError(f"trials must be a positive integer, got {trials}")


def _run_trials(source: Source, p1: DensitySpec, p2: DensitySpec, tests: Sequence[TestSpec],
                n: int, trials: int, seed: int, stream: int, workers: int) -> np.ndarray:
    """Outcome codes, shape (trials, len(tests))."""

    def run(block: range) -> np.ndarray:
        out = np.empty((len(block), len(tests)), dtype=np.int8)
        for row, t in enumerate(block):
            x = source.sample(trial_rng(seed, t, stream), n)
            llr = p1.logpdf(x) - p2.logpdf(x)
            for col, test in enumerate(tests):
                out[row, col] = _CODE[test.decide(llr).outcome]
        return out

    return np.concatenate(map_blocks(run, blocks(trials, 512), workers))


def _describe(source) -> str:
    if isinstance(source, ContaminationModel):
        return f"contaminated({source.base};{source.contaminant};eps={source.epsilon!r})"
    if isinstance(source, LfpSide):
        return f"least_favorable_{source.which}(eps={source.lfp.epsilon!r})"
    return str(source)


def _resolve_source(truth, p1, p2, contamination) -> tuple[Source, int]:
    if truth not in (1, 2):
        raise ValueError(f"truth must be 1 or 2, got {truth!r}")
    if contamination is not None:
        return contamination, truth
    return (p1 if truth == 1 else p2), truth


def simulate_selection_error(p1: DensitySpec, p2: DensitySpec, truth: int = 1,
                             contamination: Source | None = None,
                             tests: Sequence[TestSpec] = (TestSpec("uncensored"), TestSpec("sign")),
                             n: int = 50, trials: int = 1000, seed: int = 0, workers: int = 1,
                             stream: int = 0) -> SimulationReport:
    """Rate at which each test fails to select model ``truth``.

    Observations come from ``contamination`` when given (any object with
    ``sample(rng, n)``), otherwise from the true model itself.  LLRs are
    always ``log p1(x) - log p2(x)``.  An H0 outcome counts as an error.
    """
    _check_counts(n, trials)
    seed = check_seed(seed)
    tests = list(tests)
    if not tests:
        raise ValueError("at least one test is required")
    for t in tests:
        if not isinstance(t, TestSpec):
            raise ValueError(f"invalid test spec {t!r}")
    names = [t.name for t in tests]
    if len(set(names)) != len(names):
        raise ValueError(f"duplicate test names: {names}")
    source, correct = _resolve_source(truth, p1, p2, contamination)
    codes = _run_trials(source, p1, p2, tests, n, trials, seed, stream, workers)
    rates, halfwidths, outcomes = {}, {}, {}
    for col, name in enumerate(names):
        rate = float(np.count_nonzero(codes[:, col] != correct)) / trials
        rates[name] = rate
        halfwidths[name] = ci_halfwidth(rate, trials)
        outcomes[name] = codes[:, col].copy()
    return SimulationReport(
        seed=seed, trials=trials, n_per_trial=n, error_rates=rates, ci_halfwidths=halfwidths,
        label="selection_error",
        params={"p1": str(p1), "p2": str(p2), "truth": truth,
                "source": _describe(source)},
        outcomes=outcomes)


def minimax_comparison(p1: DensitySpec, p2: DensitySpec, eps: float, n: int = 25,
                       trials: int = 20000, seed: int = 0, workers: int = 1) -> SimulationReport:
    """Worst-case selection error over the two least favorable truths.

    Compares the uncensored summed-LLR test, the censored test with bounds
    solved for ``eps``, and the winner-takes-all sign test.
    """
    lfp = least_favorable_pair(p1, p2, eps)
    tests = [TestSpec("uncensored"), TestSpec("censored", bounds=lfp.bounds), TestSpec("sign")]
    per_truth = [
        simulate_selection_error(p1, p2, truth=w, contamination=LfpSide(lfp, w), tests=tests,
                                 n=n, trials=trials, seed=seed, workers=workers, stream=w)
        for w in (1, 2)
    ]
    rates, halfwidths, outcomes = {}, {}, {}
    for t in tests:
        worst = max(per_truth, key=lambda r: r.error_rates[t.name])
        rates[t.name] = worst.error_rates[t.name]
        halfwidths[t.name] = worst.ci_halfwidths[t.name]
        outcomes[t.name] = np.concatenate([r.outcomes[t.name] for r in per_truth])
    extras = {
        "bound_a": lfp.bounds.a,
        "bound_b": lfp.bounds.b,
        "epsilon_breakdown": epsilon_breakdown(p1, p2),
        "censored_vs_sign_disagreement": float(np.mean(outcomes["censored"] != outcomes["sign_wta"])),
        "censored_vs_uncensored_disagreement":
            float(np.mean(outcomes["censored"] != outcomes["uncensored_lr"])),
    }
    for r, w in zip(per_truth, (1, 2)):
        for name, rate in r.error_rates.items():
            extras[f"truth{w}.error_rate.{name}"] = rate
    return SimulationReport(
        seed=check_seed(seed), trials=trials, n_per_trial=n, error_rates=rates,
        ci_halfwidths=halfwidths, label="minimax",
        params={"p1": str(p1), "p2": str(p2), "epsilon": eps},
        extras=extras, outcomes=outcomes)


def null_calibration(n: int = 200, trials: int = 10000, alpha: float = 0.05, seed: int = 0,
                     shift: float = 0.0, workers: int = 1) -> SimulationReport:
    """Rejection rate of the Vuong test on Normal(shift, 1) LLRs; about ``alpha`` at shift 0."""
    _check_counts(n, trials)
    if n < 2:
        raise ValueError("null calibration needs n >= 2")
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    seed = check_seed(seed)
    source = Gaussian(shift, 1.0)

    def run(block: range) -> np.ndarray:
        out = np.empty(len(block), dtype=np.int8)
        for row, t in enumerate(block):
            llr = source.sample(trial_rng(seed, t, stream=4), n)
            try:
                out[row] = _CODE[vuong_decide(llr, alpha).outcome]
            except DegenerateSampleError:  # pragma: no cover - probability zero
                out[row] = 0
        return out

    codes = np.concatenate(map_blocks(run, blocks(trials, 512), workers))
    rate = float(np.count_nonzero(codes != 0)) / trials
    band = ci_halfwidth(alpha, trials)
    return SimulationReport(
        seed=seed, trials=trials, n_per_trial=n,
        error_rates={"vuong_rejection": rate},
        ci_halfwidths={"vuong_rejection": ci_halfwidth(rate, trials)},
        label="null_calibration",
        params={"alpha": alpha, "shift": shift},
        extras={"expected_band_low": max(0.0, alpha - band), "expected_band_high": alpha + band,
                "h1_rate": float(np.count_nonzero(codes == 1)) / trials,
                "h2_rate": float(np.count_nonzero(codes == 2)) / trials},
        outcomes={"vuong_rejection": codes})
