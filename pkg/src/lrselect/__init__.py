"""Likelihood-ratio model selection with labelled and automatically labelled data.

Supervised tests sum per-sample log-likelihood ratios.  When labels come
from an imperfect automatic process, the censored ratio test bounds each
sample's influence, and its limit, the sign test, needs no density model.
"""

from .censor import (
    BreakdownError,
    CensoringBounds,
    LeastFavorablePair,
    binomial_critical_value,
    censored_statistic,
    correct_selection_prob,
    decide_censored,
    epsilon_breakdown,
    least_favorable_pair,
    sign_decide_level,
    sign_decide_threshold,
    sign_decide_wta,
    sign_statistic,
)
from .densities import Gaussian, GenGaussian, Laplacian, Tabulated, parse_density
from .efficiency import are_closed_form, are_crossing, are_curve, empirical_are
from .lrt import Decision, Outcome, threshold_decide_lab, vuong_decide, vuong_statistic
from .perutil import anti_oracle_select, oracle_select, per, phone_edit_distance
from .scores import ScoreSet, llr_samples, parse_score_file, read_score_file, summarize
from .sim import minimax_comparison, null_calibration, simulate_selection_error
from .tournament import load_pairwise_dir, run_tournament

__version__ = "0.1.0"

__all__ = [
    "BreakdownError", "CensoringBounds", "Decision", "Gaussian", "GenGaussian", "Laplacian",
    "LeastFavorablePair", "Outcome", "ScoreSet", "Tabulated", "anti_oracle_select",
    "are_closed_form", "are_crossing", "are_curve", "binomial_critical_value",
    "censored_statistic", "correct_selection_prob", "decide_censored", "empirical_are",
    "epsilon_breakdown", "least_favorable_pair", "llr_samples", "load_pairwise_dir",
    "minimax_comparison", "null_calibration", "oracle_select", "parse_density",
    "parse_score_file", "per", "phone_edit_distance", "read_score_file", "run_tournament",
    "sign_decide_level", "sign_decide_threshold", "sign_decide_wta", "sign_statistic",
    "simulate_selection_error", "summarize", "threshold_decide_lab", "vuong_decide",
    "vuong_statistic",
]
