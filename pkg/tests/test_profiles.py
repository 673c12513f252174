import math

import pytest
import yaml
from hypothesis import given
from hypothesis import strategies as st

from emfsim.profiles import (PATH_LOSS_COEFFICIENTS, ExposureLimits, Generation,
                             PathLossModel, SystemProfile, apply_overrides,
                             builtin_profile, effective_tx_power, load_profile,
                             path_loss_coefficients)
from emfsim.units import dbm_to_watt, watt_to_dbm


def test_builtin_5g_parameters():
    p = builtin_profile("5g")
    assert p.carrier_frequency == 28e9
    assert p.bandwidth == 850e6
    assert p.inter_site_distance == 200.0
    assert p.array_elements == 64
    assert p.element_tx_power == 21.0
    assert p.element_gain_max == 8.0
    assert p.bs_antenna_height == 10.0
    assert p.az_3db_angle == 65.0
    assert p.front_to_back == 30.0
    assert p.pathloss_model is PathLossModel.UMI_38901
    assert p.power_is_per_element


def test_builtin_39g_parameters():
    p = builtin_profile("3.9g")
    assert p.inter_site_distance == 1000.0
    assert p.bs_antenna_height == 32.0
    assert p.front_to_back == 23.0
    assert p.element_gain_max == 17.0
    assert p.element_tx_power == 43.0
    assert p.array_elements == 1
    assert p.omni_azimuth
    assert p.cell_radius == 500.0
    assert p.default_num_rings == 0


def test_builtin_4g_parameters():
    p = builtin_profile("4g")
    assert p.array_elements == 4
    assert p.element_tx_power == 44.0
    assert p.bandwidth == 20e6
    assert not p.power_is_per_element


@pytest.mark.parametrize("gen", ["5g", "4g", "3.9g"])
def test_common_parameters(gen):
    p = builtin_profile(gen)
    assert p.sectors_per_site == 3
    assert p.ue_noise_figure == 7.0
    assert p.temperature == 290.0


def test_builtin_profile_is_pure():
    assert builtin_profile("5g") == builtin_profile(Generation.FIVE_G)
    assert builtin_profile("4g") == builtin_profile("4G")


def test_effective_tx_power_per_element_aggregation():
    # 21 dBm/element x 64 elements, coherent power sum
    expected = 21.0 + 10.0 * math.log10(64)
    assert effective_tx_power(builtin_profile("5g")) == pytest.approx(expected, rel=1e-12)
    assert expected == pytest.approx(39.061799739838875, rel=1e-12)


def test_effective_tx_power_totals_pass_through():
    assert effective_tx_power(builtin_profile("3.9g")) == 43.0
    assert effective_tx_power(builtin_profile("4g")) == 44.0


def test_effective_tx_power_single_element_identity():
    p = apply_overrides(builtin_profile("5g"), {"array_elements": 1, "element_tx_power": 0.0})
    assert effective_tx_power(p) == 0.0


@given(st.floats(min_value=-30.0, max_value=60.0),
       st.integers(min_value=1, max_value=512))
def test_power_watt_dbm_roundtrip(dbm, n):
    p = apply_overrides(builtin_profile("5g"),
                        {"element_tx_power": dbm, "array_elements": n})
    total = effective_tx_power(p)
    assert watt_to_dbm(dbm_to_watt(total)) == pytest.approx(total, abs=1e-9)


def test_profile_immutable():
    p = builtin_profile("5g")
    with pytest.raises(Exception):
        p.carrier_frequency = 1.0


@pytest.mark.parametrize("gen", ["5g", "4g", "3.9g"])
def test_dict_roundtrip_exact(gen):
    p = builtin_profile(gen)
    assert SystemProfile.from_dict(p.to_dict()) == p


@pytest.mark.parametrize("gen", ["5g", "4g", "3.9g"])
def test_yaml_roundtrip_exact(gen):
    p = builtin_profile(gen)
    dumped = yaml.safe_dump(p.to_dict())
    assert SystemProfile.from_dict(yaml.safe_load(dumped)) == p


def test_validation_rejects_nonpositive():
    with pytest.raises(ValueError):
        apply_overrides(builtin_profile("5g"), {"carrier_frequency": 0.0})
    with pytest.raises(ValueError):
        apply_overrides(builtin_profile("5g"), {"bandwidth": -1.0})
    with pytest.raises(ValueError):
        apply_overrides(builtin_profile("5g"), {"array_elements": 0})
    with pytest.raises(ValueError):
        apply_overrides(builtin_profile("5g"), {"sectors_per_site": 6})


def test_apply_overrides_rejects_unknown_fields():
    with pytest.raises(ValueError, match="unknown profile fields"):
        apply_overrides(builtin_profile("5g"), {"not_a_field": 1})


def test_load_profile_from_file(tmp_path):
    cfg = tmp_path / "profile.yaml"
    cfg.write_text(yaml.safe_dump({
        "generation": "5g",
        "carrier_frequency": 26e9,
        "az_3db_angle": 130.0,   # literal reading of the 3-dB angle
    }))
    p = load_profile(cfg)
    assert p.carrier_frequency == 26e9
    assert p.az_3db_angle == 130.0
    assert p.bandwidth == 850e6  # untouched base value


def test_load_profile_requires_generation(tmp_path):
    cfg = tmp_path / "profile.yaml"
    cfg.write_text(yaml.safe_dump({"carrier_frequency": 26e9}))
    with pytest.raises(ValueError, match="generation"):
        load_profile(cfg)


def test_exposure_limits_defaults():
    limits = ExposureLimits()
    assert limits.pd_limit == 10.0
    assert limits.sar_limit == 1.6
    with pytest.raises(ValueError):
        ExposureLimits(pd_limit=0.0)


def test_path_loss_coefficient_table():
    assert PATH_LOSS_COEFFICIENTS[PathLossModel.UMI_38901] == (32.4, 21.0, 20.0)
    assert PATH_LOSS_COEFFICIENTS[PathLossModel.UMI_36873] == (28.0, 22.0, 20.0)
    assert PATH_LOSS_COEFFICIENTS[PathLossModel.UMI_25996] == (34.53, 38.0, 0.0)


def test_path_loss_coefficient_override():
    p = builtin_profile("5g")
    row = path_loss_coefficients(p, {"umi_38901": [30.0, 20.0, 20.0]})
    assert row == (30.0, 20.0, 20.0)
    assert path_loss_coefficients(p) == (32.4, 21.0, 20.0)
