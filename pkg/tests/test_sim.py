import math

import numpy as np
import pytest

from lrselect.censor import CensoringBounds, correct_selection_prob, epsilon_breakdown
from lrselect.densities import Gaussian, Laplacian, Tabulated
from lrselect.lrt import norm_cdf
from lrselect.sim import (ContaminationModel, TestSpec, ci_halfwidth, minimax_comparison,
                          null_calibration, sample_contaminated, simulate_selection_error)

P1, P2 = Gaussian(0.0, 1.0), Gaussian(1.0, 1.0)
Z99 = 2.5758293035489004


def test_sample_contaminated_degenerate_mixtures():
    base, cont = Gaussian(0.0, 1.0), Gaussian(100.0, 1.0)
    assert np.all(sample_contaminated(ContaminationModel(base, cont, 0.0), 2000, 1) < 50)
    assert np.all(sample_contaminated(ContaminationModel(base, cont, 1 - 1e-12), 2000, 1) > 50)
    m = ContaminationModel(base, cont, 0.3)
    x = sample_contaminated(m, 4000, 9)
    assert np.array_equal(x, sample_contaminated(m, 4000, 9))
    assert np.mean(x > 50) == pytest.approx(0.3, abs=0.03)


def test_tabulated_source_is_rejected():
    tab = Tabulated([0.0, 1.0, 2.0], [0.0, 1.0, 0.0])
    with pytest.raises(ValueError, match="sampling"):
        sample_contaminated(ContaminationModel(P1, tab, 0.5), 10, 0)


def test_test_spec_validation():
    with pytest.raises(ValueError):
        TestSpec("bogus")
    with pytest.raises(ValueError):
        TestSpec("censored")
    with pytest.raises(ValueError):
        simulate_selection_error(P1, P2, tests=["sign"], trials=5)
    with pytest.raises(ValueError):
        simulate_selection_error(P1, P2, truth=3, trials=5)


def test_well_separated_error_is_small():
    rep = simulate_selection_error(Gaussian(0, 1), Gaussian(2, 1), n=50, trials=2000, seed=4)
    # closed form for the summed test: Phi(-sqrt(n) * d / 2) with d = 2
    assert norm_cdf(-math.sqrt(50)) < 1e-10
    assert rep.error_rates["uncensored_lr"] < 0.01


def test_identical_models_never_select():
    # llr is identically zero: the summed test is always undecided, and the
    # sign test sees no positive llr, so it always falls to model 2
    rep = simulate_selection_error(P1, P1, n=21, trials=300, seed=5)
    assert np.all(rep.outcomes["uncensored_lr"] == 0)
    assert np.all(rep.outcomes["sign_wta"] == 2)


def test_equidistant_truth_is_a_coin_flip():
    midpoint = Gaussian(0.5, 1.0)
    rep = simulate_selection_error(P1, P2, 1, midpoint, [TestSpec("uncensored"), TestSpec("sign")],
                                   n=21, trials=4000, seed=5)
    for name, codes in rep.outcomes.items():
        h1 = np.mean(codes == 1)
        assert abs(h1 - 0.5) <= ci_halfwidth(0.5, 4000), name
        assert abs(rep.error_rates[name] - 0.5) <= ci_halfwidth(0.5, 4000), name


@pytest.mark.parametrize("n", [9, 10, 25])
def test_sign_error_matches_binomial(n):
    trials = 6000
    rep = simulate_selection_error(P1, P2, n=n, trials=trials, seed=21, tests=[TestSpec("sign")])
    p_pos = norm_cdf(0.5)  # P(llr > 0) under p1: llr = 1/2 - x
    exact = 1.0 - correct_selection_prob(n, n // 2, p_pos)
    assert abs(rep.error_rates["sign_wta"] - exact) <= ci_halfwidth(exact, trials)


@pytest.mark.slow
def test_sign_error_monotone_in_n():
    rates = [simulate_selection_error(P1, P2, n=n, trials=20000, seed=8,
                                      tests=[TestSpec("sign")]).error_rates["sign_wta"]
             for n in (5, 10, 20, 40, 80)]
    assert all(b <= a for a, b in zip(rates, rates[1:])), rates


def test_coupled_decisions_when_bounds_do_not_bind():
    tests = [TestSpec("uncensored"), TestSpec("censored", bounds=CensoringBounds(1e-300, 1e300))]
    rep = simulate_selection_error(P1, P2, n=15, trials=1500, seed=3, tests=tests)
    assert np.array_equal(rep.outcomes["uncensored_lr"], rep.outcomes["censored"])


def test_determinism_across_workers():
    tests = [TestSpec("uncensored"), TestSpec("censored", bounds=CensoringBounds(0.5, 2.0)),
             TestSpec("sign")]
    src = ContaminationModel(P1, Laplacian(3.0, 1.0), 0.1)
    a = simulate_selection_error(P1, P2, 1, src, tests, n=12, trials=1500, seed=77, workers=1)
    b = simulate_selection_error(P1, P2, 1, src, tests, n=12, trials=1500, seed=77, workers=4)
    assert a.to_json() == b.to_json() and a.to_csv() == b.to_csv() and a.to_text() == b.to_text()
    assert all(np.array_equal(a.outcomes[k], b.outcomes[k]) for k in a.outcomes)


def test_report_serialization_fields():
    rep = simulate_selection_error(P1, P2, n=5, trials=200, seed=2)
    assert '"seed": 2' in rep.to_json()
    assert "test,error_rate,ci_halfwidth" in rep.to_csv().splitlines()
    for name, r in rep.error_rates.items():
        assert 0.0 <= r <= 1.0
        assert rep.ci_halfwidths[name] == pytest.approx(Z99 * math.sqrt(r * (1 - r) / 200), rel=1e-12)


def test_minimax_at_zero_epsilon_coincides():
    rep = minimax_comparison(P1, P2, 0.0, n=10, trials=800, seed=1)
    assert rep.error_rates["censored"] == rep.error_rates["uncensored_lr"]
    assert np.array_equal(rep.outcomes["censored"], rep.outcomes["uncensored_lr"])
    assert rep.extras["censored_vs_uncensored_disagreement"] == 0.0


def test_minimax_near_breakdown_approaches_sign_test():
    eps_star = epsilon_breakdown(P1, P2)
    near = minimax_comparison(P1, P2, eps_star - 0.002, n=25, trials=1500, seed=2)
    mid = minimax_comparison(P1, P2, 0.1, n=25, trials=1500, seed=2)
    assert near.extras["censored_vs_sign_disagreement"] < mid.extras["censored_vs_sign_disagreement"]
    assert near.extras["censored_vs_sign_disagreement"] < 0.05


def test_null_calibration_band_and_power():
    rep = null_calibration(n=100, trials=3000, alpha=0.01, seed=6)
    band = Z99 * math.sqrt(0.01 * 0.99 / 3000)
    assert abs(rep.error_rates["vuong_rejection"] - 0.01) <= band
    assert rep.extras["expected_band_high"] == pytest.approx(0.01 + band, rel=1e-12)
    shifted = null_calibration(n=100, trials=500, alpha=0.05, seed=6, shift=1.0)
    assert shifted.error_rates["vuong_rejection"] == 1.0 and shifted.extras["h1_rate"] == 1.0
