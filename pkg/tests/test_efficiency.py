import math
import warnings

import mpmath
import numpy as np
import pytest

from lrselect.densities import GenGaussian
from lrselect.efficiency import (AreCurve, PowerUnreachableError, are_closed_form, are_crossing,
                                 are_curve, are_from_density, empirical_are, gen_gaussian_pdf)


def mp_are(p):
    p = mpmath.mpf(p)
    return p ** 2 * mpmath.gamma(3 / p) / mpmath.gamma(1 / p) ** 3


def test_are_from_density_examples():
    assert are_from_density(1.0, 1 / math.sqrt(2 * math.pi)) == pytest.approx(2 / math.pi, abs=1e-15)
    assert are_from_density(1.0, 0.5) == 1.0
    assert are_from_density(2.0, 0.25) == 1.0
    with pytest.raises(ValueError):
        are_from_density(0.0, 0.5)
    with pytest.raises(ValueError):
        are_from_density(1.0, -0.5)


def test_are_closed_form_anchors():
    assert are_closed_form(2.0) == pytest.approx(2 / math.pi, abs=1e-12)
    assert are_closed_form(1.0) == pytest.approx(2.0, abs=1e-12)
    assert are_closed_form(1.5) == pytest.approx(0.9061770168146697, abs=1e-12)


@pytest.mark.parametrize("p", np.linspace(0.5, 5.0, 19))
def test_are_against_mpmath_and_density(p):
    assert are_closed_form(p) == pytest.approx(float(mp_are(p)), rel=1e-12)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for sigma in (0.5, 1.0, 3.0):
            f0 = gen_gaussian_pdf(GenGaussian(p, 0.7, sigma), 0.7)
            assert abs(are_closed_form(p) - are_from_density(sigma, f0)) < 1e-10


def test_curve_shape_and_csv(tmp_path):
    c = are_curve(1.0, 2.0, 101)
    assert len(c.points) == 101 and c.p[0] == 1.0 and c.p[-1] == 2.0
    assert np.all(np.diff(c.p) > 0) and np.all(np.diff(c.are) < 0) and np.all(c.are > 0)
    text = c.to_csv()
    assert text.splitlines()[0] == "# p,are" and len(text.splitlines()) == 102
    c.write_csv(tmp_path / "fig.csv")
    back = np.loadtxt(tmp_path / "fig.csv", delimiter=",", comments="#")
    assert np.array_equal(back[:, 1], c.are)
    with pytest.raises(ValueError):
        are_curve(2.0, 1.0, 10)
    with pytest.raises(ValueError):
        are_curve(1.0, 2.0, 1)


def test_crossing_is_unique_root():
    root = are_crossing()
    ref = float(mpmath.findroot(lambda p: mp_are(p) - 1, 1.4))
    assert root == pytest.approx(ref, abs=1e-12)
    assert root == pytest.approx(1.4074261222932616, abs=1e-12)
    c = are_curve(1.0, 2.0, 1001)
    assert np.count_nonzero(np.diff(np.sign(c.are - 1.0))) == 1


def test_empirical_are_determinism_and_workers():
    a = empirical_are(2.0, 0.3, trials=400, seed=11)
    b = empirical_are(2.0, 0.3, trials=400, seed=11, workers=3)
    assert a == b
    assert a.n_mean > 0 and a.n_sign > 0 and a.ratio == a.n_mean / a.n_sign
    assert empirical_are(2.0, 0.3, trials=400, seed=12).ratio != a.ratio


def test_empirical_are_validation():
    with pytest.raises(ValueError):
        empirical_are(2.0, 0.0)
    with pytest.raises(ValueError):
        empirical_are(2.0, 0.1, power_target=0.01)
    with pytest.raises(ValueError):
        empirical_are(2.0, 0.1, trials=10)
    with pytest.raises(PowerUnreachableError, match="64"):
        empirical_are(2.0, 0.01, trials=200, seed=1, max_n=64)
