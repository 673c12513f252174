import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from emfsim.antenna import pattern_params
from emfsim.exposure import (FREE_SPACE_IMPEDANCE, FreeSpaceParams, TissueParams,
                             pd_at_positions, pd_from_field, pd_from_link,
                             sar_boundary, sar_point, sector_average_sar)
from emfsim.layout import LinkGeometry, build_layout
from emfsim.profiles import builtin_profile

P5 = builtin_profile("5g")


def flat_geom(d3, az=0.0, el=90.0):
    return LinkGeometry(distance_2d=d3, distance_3d=d3, azimuth_offset=az,
                        elevation_angle=el)


PD_FIELD_CASES = [
    (0.0, 0.0),
    (61.4, 10.007060759695273),
    (1.0, 0.0026544209380723596),
    (10.0, 0.26544209380723593),
    (100.0, 26.544209380723593),
    (377.0, 377.27019350728636),
]


@pytest.mark.parametrize("e,expected", PD_FIELD_CASES)
def test_pd_from_field_hand_values(e, expected):
    got = pd_from_field(e)
    if expected == 0.0:
        assert got == 0.0
    else:
        assert got == pytest.approx(expected, rel=1e-12)


def test_pd_from_field_quadratic():
    assert pd_from_field(2.0) == pytest.approx(4.0 * pd_from_field(1.0), rel=1e-12)


def test_pd_from_field_rejects_negative_amplitude():
    with pytest.raises(ValueError):
        pd_from_field(-1.0)


def test_field_for_ten_w_m2():
    # |E|^2 = 10 * 376.73 solves to E ~ 61.38 V/m; 61.4 lands just above 10
    assert pd_from_field(math.sqrt(10.0 * FREE_SPACE_IMPEDANCE)) == pytest.approx(10.0, rel=1e-12)


SAR_BOUNDARY_CASES = [
    # (pd, R, delta, rho, expected W/kg)
    (10.0, 0.6, 1e-3, 1000.0, 12.8),
    (10.0, 0.0, 1e-3, 1000.0, 20.0),
    (1.0, 0.5, 1e-3, 1000.0, 1.5),
    (5.0, 0.9, 2e-3, 1100.0, 0.8636363636363633),
    (2.5, 0.3, 1e-3, 900.0, 5.055555555555555),
    (0.25, 0.6, 5e-4, 1000.0, 0.64),
]


@pytest.mark.parametrize("pd,r,delta,rho,expected", SAR_BOUNDARY_CASES)
def test_sar_boundary_hand_values(pd, r, delta, rho, expected):
    tissue = TissueParams(reflection_coefficient=r, penetration_depth=delta,
                          mass_density=rho)
    assert sar_boundary(pd, tissue) == pytest.approx(expected, rel=1e-12)


def test_sar_boundary_zero_pd():
    assert sar_boundary(0.0) == 0.0


def test_sar_boundary_no_reflection_reduces():
    tissue = TissueParams(reflection_coefficient=0.0)
    assert sar_boundary(3.0, tissue) == pytest.approx(
        2.0 * 3.0 / (tissue.penetration_depth * tissue.mass_density), rel=1e-12)


SAR_POINT_CASES = [
    # (E, sigma, rho, expected)
    (0.0, 38.2, 1000.0, 0.0),
    (100.0, 1.0, 1000.0, 10.0),
    (10.0, 38.2, 1000.0, 3.82),
    (1.0, 0.5, 900.0, 0.0005555555555555556),
    (50.0, 2.0, 1100.0, 4.545454545454546),
]


@pytest.mark.parametrize("e,sigma,rho,expected", SAR_POINT_CASES)
def test_sar_point_hand_values(e, sigma, rho, expected):
    tissue = TissueParams(conductivity=sigma, mass_density=rho)
    got = sar_point(e, tissue)
    if expected == 0.0:
        assert got == 0.0
    else:
        assert got == pytest.approx(expected, rel=1e-12)


def test_sar_point_linear_in_conductivity():
    base = sar_point(10.0, TissueParams(conductivity=1.0))
    scaled = sar_point(10.0, TissueParams(conductivity=7.5))
    assert scaled == pytest.approx(7.5 * base, rel=1e-12)


PD_LINK_CASES = [
    # (tx watt, gain dBi, distance m, expected W/m^2)
    (1.0, 0.0, 1.0, 0.07957747154594767),
    (1.0, 0.0, 2.0, 0.019894367886486918),
    (2.0, 10.0, 10.0, 0.015915494309189534),
    (0.5, 3.0, 5.0, 0.0031755586019227536),
    (8.0, 26.0, 55.0, 0.08378277563493201),
    (1.0, -3.0, 1.0, 0.03988321282316649),
]


@pytest.mark.parametrize("pw,g,d,expected", PD_LINK_CASES)
def test_pd_from_link_hand_values(pw, g, d, expected):
    # drive the formula through a synthetic profile carrying the target
    # power and a pattern pinned at gain g on boresight
    from emfsim.antenna import PatternParams
    from emfsim.profiles import apply_overrides
    from emfsim.units import watt_to_dbm
    profile = apply_overrides(P5, {"element_tx_power": float(watt_to_dbm(pw)),
                                   "array_elements": 1})
    pattern = PatternParams(az_3db=65.0, el_3db=65.0, a_m=30.0, sla_v=30.0, g_max=g)
    got = pd_from_link(profile, flat_geom(d), pattern)
    assert got == pytest.approx(expected, rel=1e-9)


def test_pd_from_link_inverse_square():
    g1 = pd_from_link(P5, flat_geom(10.0))
    g4 = pd_from_link(P5, flat_geom(40.0))
    assert g1 == pytest.approx(16.0 * g4, rel=1e-12)


@given(st.floats(min_value=0.0, max_value=1e3),
       st.floats(min_value=0.0, max_value=100.0))
def test_sar_boundary_linear_in_pd(scale, pd):
    tissue = TissueParams()
    assert sar_boundary(scale * pd, tissue) == pytest.approx(
        scale * sar_boundary(pd, tissue), rel=1e-9, abs=1e-30)


@given(st.floats(min_value=0.0, max_value=0.98))
def test_sar_boundary_monotone_decreasing_in_reflection(r):
    lo = sar_boundary(10.0, TissueParams(reflection_coefficient=r))
    hi = sar_boundary(10.0, TissueParams(reflection_coefficient=min(r + 0.01, 0.99)))
    assert hi < lo


def test_chained_field_identity():
    # pd_from_field then sar_boundary == 2 (1-R^2) |E|^2 / (rho0 delta rho)
    tissue = TissueParams()
    for e in (0.5, 10.0, 61.4, 200.0):
        chained = sar_boundary(pd_from_field(e), tissue)
        direct = (2.0 * (1.0 - tissue.reflection_coefficient ** 2) * e * e
                  / (FREE_SPACE_IMPEDANCE * tissue.penetration_depth * tissue.mass_density))
        assert chained == pytest.approx(direct, rel=1e-12)


def test_exposure_chain_decreases_with_boresight_distance():
    sector = build_layout(P5, num_rings=0)[0]
    pattern = pattern_params(P5)
    tissue = TissueParams()
    dists = np.linspace(30.0, 115.0, 35)
    positions = np.column_stack([dists, np.zeros_like(dists)])
    sar = pd_at_positions(P5, sector, positions) * tissue.boundary_sar_factor
    assert np.all(np.diff(sar) < 0.0)


def test_tissue_validation():
    with pytest.raises(ValueError):
        TissueParams(reflection_coefficient=1.0)
    with pytest.raises(ValueError):
        TissueParams(reflection_coefficient=-0.1)
    with pytest.raises(ValueError):
        TissueParams(penetration_depth=0.0)
    with pytest.raises(ValueError):
        TissueParams(conductivity=-1.0)
    with pytest.raises(ValueError):
        FreeSpaceParams(characteristic_impedance=0.0)


class TestSectorAverageSar:
    def setup_method(self):
        self.sector = build_layout(P5, num_rings=0)[0]

    def test_constant_field(self):
        est = sector_average_sar(self.sector, P5, 500, np.random.default_rng(0),
                                 field=lambda pos: np.full(len(pos), 2.5))
        assert est.mean == 2.5
        assert est.stderr == 0.0

    def test_half_sector_indicator(self):
        # indicator of the y>0 half: the boresight splits the wedge evenly,
        # so the mean tends to half the plateau value
        sar0 = 4.0
        est = sector_average_sar(
            self.sector, P5, 200_000, np.random.default_rng(1),
            field=lambda pos: np.where(pos[:, 1] > 0.0, sar0, 0.0))
        assert est.mean == pytest.approx(0.5 * sar0, abs=4.0 * est.stderr)
        assert est.mean == pytest.approx(0.5 * sar0, rel=0.02)

    def test_same_seed_bit_identical(self):
        a = sector_average_sar(self.sector, P5, 2000, np.random.default_rng(7))
        b = sector_average_sar(self.sector, P5, 2000, np.random.default_rng(7))
        assert a.mean == b.mean
        assert a.stderr == b.stderr

    def test_stderr_scales_inverse_sqrt_n(self):
        n = 4000
        a = sector_average_sar(self.sector, P5, n, np.random.default_rng(21))
        b = sector_average_sar(self.sector, P5, 4 * n, np.random.default_rng(22))
        ratio = a.stderr / b.stderr
        assert 2.0 * 0.8 <= ratio <= 2.0 * 1.2

    def test_rejects_zero_samples(self):
        with pytest.raises(ValueError):
            sector_average_sar(self.sector, P5, 0, np.random.default_rng(0))
