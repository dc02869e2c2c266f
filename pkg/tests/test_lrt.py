import math

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from lrselect.lrt import (DegenerateSampleError, Outcome, norm_cdf, norm_ppf, t_lab,
                          threshold_decide_lab, vuong_decide, vuong_result, vuong_statistic)

Z975 = 1.959963984540054


def test_t_lab_examples():
    assert t_lab([1.0, -0.25, 0.75]) == 1.5
    assert t_lab([0.0] * 5) == 0.0
    assert t_lab([0.5] * 10) == 5.0
    with pytest.raises(ValueError):
        t_lab([])


def test_vuong_statistic_examples():
    assert vuong_statistic([1.0, 2.0, 3.0]).standardized == pytest.approx(3.464101615137755, abs=1e-14)
    assert vuong_statistic([-1.0, 1.0]).standardized == 0.0
    with pytest.raises(DegenerateSampleError, match="2.5"):
        vuong_statistic([2.5] * 4)
    with pytest.raises(ValueError):
        vuong_statistic([1.0])


def test_vuong_decide_examples():
    assert vuong_decide([1.0, 2.0, 3.0], 0.05).outcome is Outcome.H1
    assert vuong_decide([-1.0, 1.0], 0.3).outcome is Outcome.H0
    # standardized -2.5: llrs with mean -2.5*sd/sqrt(n)
    x = np.array([-1.0, 1.0, -1.0, 1.0])
    x = x - 2.5 * np.std(x, ddof=1) / 2.0
    d = vuong_decide(x, 0.05)
    assert d.statistic == pytest.approx(-2.5, abs=1e-12) and d.outcome is Outcome.H2
    with pytest.raises(ValueError):
        vuong_decide([1.0, 2.0], 1.5)


def test_vuong_result_carries_critical_value():
    r = vuong_result([1.0, 2.0, 3.0], 0.05)
    assert r.alpha == 0.05 and r.z_crit == pytest.approx(Z975, abs=1e-12)
    assert r.standardized == pytest.approx(r.t_lab / (r.sd * math.sqrt(r.n)), rel=1e-15)


def test_threshold_decide_lab():
    assert threshold_decide_lab([151.92]).outcome is Outcome.H1
    assert threshold_decide_lab([1.0, -1.0]).outcome is Outcome.H0
    assert threshold_decide_lab([-3.2]).outcome is Outcome.H2
    d = threshold_decide_lab([2.0], tau_lab=2.0)
    assert d.outcome is Outcome.H0 and d.threshold == 2.0 and "tau" in d.rule


@pytest.mark.parametrize("q", [1e-12, 1e-6, 0.001, 0.02425, 0.1, 0.5, 0.9, 0.975, 0.995, 1 - 1e-9])
def test_norm_ppf_matches_scipy(q):
    from scipy.special import ndtri
    assert norm_ppf(q) == pytest.approx(float(ndtri(q)), abs=1e-9)
    assert norm_cdf(norm_ppf(q)) == pytest.approx(q, rel=1e-9)


llr_lists = st.lists(st.floats(-50, 50, allow_nan=False), min_size=2, max_size=60)


@given(llr_lists, st.sampled_from([0.5, 2.0, 4.0, 0.25, 8.0]))
def test_scale_invariance(xs, c):
    x = np.array(xs)
    assume(np.std(x) > 1e-6)
    a, b = vuong_statistic(x), vuong_statistic(c * x)
    assert b.standardized == pytest.approx(a.standardized, rel=1e-12, abs=1e-12)
    assert vuong_decide(c * x).outcome is vuong_decide(x).outcome


@given(llr_lists)
def test_swap_antisymmetry(xs):
    x = np.array(xs)
    assume(np.std(x) > 1e-6)
    fwd, rev = vuong_statistic(x), vuong_statistic(-x)
    assert rev.t_lab == -fwd.t_lab and rev.standardized == -fwd.standardized
    assert vuong_decide(-x).outcome is vuong_decide(x).outcome.swapped()
    assert threshold_decide_lab(-x).outcome is threshold_decide_lab(x).outcome.swapped()


@given(llr_lists, st.floats(0.001, 0.5))
def test_decision_invariant(xs, alpha):
    x = np.array(xs)
    assume(np.std(x) > 1e-6)
    d = vuong_decide(x, alpha)
    if d.outcome is Outcome.H1:
        assert d.statistic > d.threshold
    elif d.outcome is Outcome.H2:
        assert d.statistic < -d.threshold
    else:
        assert -d.threshold <= d.statistic <= d.threshold
