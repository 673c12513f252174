import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from emfsim.antenna import PatternParams, attenuation, gain, pattern_params
from emfsim.profiles import builtin_profile

P5 = pattern_params(builtin_profile("5g"))
P4 = pattern_params(builtin_profile("4g"))
P39 = pattern_params(builtin_profile("3.9g"))


def test_boresight_attenuation_is_zero():
    assert attenuation(P5, 0.0, 0.0) == 0.0
    assert attenuation(P4, 0.0, 0.0) == 0.0
    assert attenuation(P39, 0.0, 0.0) == 0.0


def test_half_beamwidth_gives_3db():
    # 12 * (32.5 / 65)^2 == 3 exactly
    assert attenuation(P5, 32.5, 0.0) == pytest.approx(3.0, abs=1e-12)
    assert attenuation(P5, 0.0, 32.5) == pytest.approx(3.0, abs=1e-12)


def test_back_lobe_capped_at_front_to_back():
    assert attenuation(P5, 180.0, 0.0) == 30.0
    assert attenuation(P5, 180.0, 90.0) == 30.0
    assert attenuation(P39, 0.0, 180.0) == 23.0


def test_gain_values():
    assert P5.g_max == pytest.approx(26.06179973983887, rel=1e-12)
    assert gain(P5, 0.0, 0.0) == pytest.approx(26.06179973983887, rel=1e-12)
    assert gain(P5, 180.0, 0.0) == pytest.approx(-3.9382002601611283, rel=1e-9)
    assert P4.g_max == pytest.approx(14.020599913279625, rel=1e-12)


def test_39g_is_omnidirectional_in_azimuth():
    for az in (-180.0, -90.0, 0.0, 45.0, 180.0):
        assert gain(P39, az, 0.0) == pytest.approx(17.0, abs=1e-12)


def test_39g_elevation_pattern_active():
    # elevation term still applies, capped by the 23 dB side-lobe limit
    assert attenuation(P39, 0.0, 35.0) == pytest.approx(12.0, abs=1e-12)
    assert attenuation(P39, 123.0, 35.0) == pytest.approx(12.0, abs=1e-12)


def test_gain_drop_at_half_beamwidth_is_exactly_3db():
    assert gain(P5, 0.0, 0.0) - gain(P5, P5.az_3db / 2.0, 0.0) == pytest.approx(3.0, abs=1e-12)


def test_vectorized_matches_scalar():
    az = np.array([-170.0, -30.0, 0.0, 12.5, 90.0])
    el = np.array([0.0, 5.0, -5.0, 60.0, 10.0])
    vec = attenuation(P5, az, el)
    scalar = [attenuation(P5, a, e) for a, e in zip(az, el)]
    np.testing.assert_allclose(vec, scalar, rtol=0, atol=0)


@given(st.floats(min_value=-180.0, max_value=180.0),
       st.floats(min_value=-90.0, max_value=90.0))
def test_attenuation_even_in_both_angles(az, el):
    a = attenuation(P5, az, el)
    assert a == attenuation(P5, -az, el)
    assert a == attenuation(P5, az, -el)


@given(st.floats(min_value=-180.0, max_value=180.0),
       st.floats(min_value=-90.0, max_value=90.0))
def test_attenuation_bounded(az, el):
    a = attenuation(P5, az, el)
    assert 0.0 <= a <= P5.a_m


@pytest.mark.parametrize("params", [P5, P4, P39])
def test_attenuation_monotone_in_azimuth_until_cap(params):
    az = np.linspace(0.0, 180.0, 361)
    vals = attenuation(params, az, np.zeros_like(az))
    diffs = np.diff(vals)
    assert np.all(diffs >= -1e-12)


def test_attenuation_monotone_in_elevation_until_cap():
    el = np.linspace(0.0, 90.0, 181)
    vals = attenuation(P5, np.zeros_like(el), el)
    assert np.all(np.diff(vals) >= -1e-12)


def test_attenuation_bounds_on_random_grid():
    rng = np.random.default_rng(7)
    az = rng.uniform(-180.0, 180.0, 10_000)
    el = rng.uniform(-90.0, 90.0, 10_000)
    for params in (P5, P4, P39):
        vals = attenuation(params, az, el)
        assert np.all(vals >= 0.0)
        assert np.all(vals <= params.a_m)


def test_pattern_params_validation():
    with pytest.raises(ValueError):
        PatternParams(az_3db=0.0, el_3db=65.0, a_m=30.0, sla_v=30.0, g_max=8.0)
    with pytest.raises(ValueError):
        PatternParams(az_3db=65.0, el_3db=65.0, a_m=61.0, sla_v=30.0, g_max=8.0)
