import numpy as np
import pytest

from tempalign.errors import ValidationError
from tempalign.fair import N_PARAMS, PARAM_NAMES, ModelConfig, ParameterVector


def test_default_vector_is_valid_and_20_long():
    pv = ParameterVector()
    arr = pv.to_array()
    assert arr.shape == (N_PARAMS,) == (20,)
    assert len(PARAM_NAMES) == 20
    assert abs(sum(pv.a) - 1.0) <= 1e-12


def test_roundtrip_array():
    pv = ParameterVector()
    again = ParameterVector.from_array(pv.to_array())
    assert np.array_equal(again.to_array(), pv.to_array())
    assert again.a[3] == pytest.approx(pv.a[3], abs=1e-15)


def test_json_roundtrip(tmp_path):
    pv = ParameterVector(F2x=3.9)
    path = tmp_path / "theta.json"
    pv.save(path)
    text = path.read_text()
    assert '"names"' in text and '"values"' in text
    assert np.array_equal(ParameterVector.load(path).to_array(), pv.to_array())


@pytest.mark.parametrize("kw", [
    {"a": (0.5, 0.3, 0.3, 0.1)},           # sum 1.2
    {"a": (0.5, 0.5, 0.2, -0.2)},          # negative fraction
    {"tau": (1.0, -4.0, 36.0, 4.0)},
    {"d1": 4.1, "d2": 4.1},                # equal timescales
    {"q1": 0.0},
    {"F2x": -1.0},
])
def test_invariant_violations_rejected(kw):
    with pytest.raises(ValidationError):
        ParameterVector(**kw)


def test_from_array_infers_a4():
    arr = ParameterVector().to_array()
    pv = ParameterVector.from_array(arr)
    assert pv.a[3] == pytest.approx(1.0 - arr[0] - arr[1] - arr[2], abs=1e-15)


def test_bad_length_rejected():
    with pytest.raises(ValidationError):
        ParameterVector.from_array(np.ones(19))


def test_model_config_validation():
    with pytest.raises(ValidationError):
        ModelConfig(alpha_min=1.0, alpha_max=0.5)
    with pytest.raises(ValidationError):
        ModelConfig(c0_ppm=-278.0)


def test_scale_lookup():
    pv = ParameterVector(scales=(1.1, 1.2, 1.3, 1.4, 1.5))
    assert pv.scale_for("co2") == 1.0
    assert pv.scale_for("ch4") == 1.1
    assert pv.scale_for("other") == 1.5
