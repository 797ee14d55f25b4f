import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from risdssm.analysis import special
from oracles import e1_integral, k0_integral, k1_integral, whittaker_scaled_mp


@pytest.mark.parametrize("x", [1e-3, 0.1, 1.0, 3.0, 20.0])
def test_bessel_against_integral_representation(x):
    assert special.bessel_k0(x) == pytest.approx(k0_integral(x), rel=1e-9)
    assert special.bessel_k1(x) == pytest.approx(k1_integral(x), rel=1e-9)


@pytest.mark.parametrize("z", [1e-4, 0.2, 1.0, 5.0, 40.0])
def test_exp1_against_integral(z):
    assert special.exp1(z) == pytest.approx(e1_integral(z), rel=1e-9)


@given(st.floats(1e-6, 5e3))
@settings(max_examples=60, deadline=None)
def test_whittaker_against_mpmath(z):
    assert special.whittaker_w_mhalf_0_scaled(z) == pytest.approx(whittaker_scaled_mp(z), rel=1e-10)


def test_whittaker_frozen():
    assert special.whittaker_w_mhalf_0(0.3) == pytest.approx(0.57633895062642347717, rel=1e-13)
    assert special.whittaker_w_mhalf_0(7.0) == pytest.approx(0.010117960835846585109, rel=1e-12)


def test_scaled_exp1_large_argument_tail():
    z = np.array([100.0, 499.0, 501.0, 1e4, 1e8])
    got = special.scaled_exp1(z)
    # e^z E1(z) ~ 1/z (1 - 1/z + 2/z^2 - ...)
    approx = 1 / z * (1 - 1 / z + 2 / z**2 - 6 / z**3)
    assert np.allclose(got, approx, rtol=3e-8)
    assert np.all(np.diff(got) < 0)


def test_digamma_values():
    assert special.digamma(1.0) == pytest.approx(-special.EULER_GAMMA, rel=1e-15)
    assert special.digamma(1.5) == pytest.approx(2 - special.EULER_GAMMA - 2 * math.log(2), rel=1e-14)


def test_q_function():
    assert special.q_function(0.0) == 0.5
    assert special.q_function(3.0) == pytest.approx(1.3498980316300946e-3, rel=1e-12)


@pytest.mark.parametrize("v,expected", [(0, 1 / 2), (1, 3 / 8), (2, 15 / 48), (3, 105 / 384)])
def test_double_factorial_ratio(v, expected):
    assert special.double_factorial_ratio(v) == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize("fn", [special.bessel_k0, special.bessel_k1, special.exp1,
                                special.digamma, special.whittaker_w_mhalf_0])
def test_domain_errors(fn):
    with pytest.raises(ValueError):
        fn(0.0)
    with pytest.raises(ValueError):
        fn(-1.0)
