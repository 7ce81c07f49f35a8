"""Unit tests for variable layouts and their decode/encode maps."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from optosqueeze.dynamics import BipartiteCovariance, SystemParams
from optosqueeze.exceptions import ConfigError
from optosqueeze.harness import LayoutBounds, default_detuning_bounds, make_layout
from optosqueeze.pulses import PulseConfig, effective_gain, square_integral
from optosqueeze.squeezing import DetectionAngles, optimal_phi

PARAMS = SystemParams(gamma=0.0, n_th=0.0, n_0=5.0)
TARGET = BipartiteCovariance(v=np.diag([3.0, 0.5, 2.0, 1.0]))


def layout(kind: str, **kwargs):
    kwargs.setdefault("n_knots", 3)
    kwargs.setdefault("fout_grid_points", 64)
    return make_layout(kind, PARAMS, **kwargs)


@pytest.mark.parametrize(
    ("kind", "kwargs", "dims"),
    [
        ("const_coupling", {}, 2),
        ("const_coupling_detuning", {}, 3),
        ("fout_only", {"fixed_g": 0.2, "fixed_tau": 10.0}, 3),
        ("pwl_coupling_fout", {}, 7),
        ("pwl_all", {}, 10),
        ("detection_angles", {"target": TARGET}, 2),
    ],
)
def test_layout_dimensions(kind, kwargs, dims):
    """Vector length per layout kind with three knots per profile."""
    built = layout(kind, **kwargs)
    assert built.dims == dims
    assert built.bounds.shape == (dims, 2)


def test_layout_bounds():
    built = layout("pwl_all")
    b = built.bounds
    np.testing.assert_array_equal(b[0], [0.01, 2.0])
    np.testing.assert_array_equal(b[3], [0.05, 1.0])
    np.testing.assert_array_equal(b[4], [-1.0, 1.0])
    lo, hi = default_detuning_bounds(PARAMS)
    assert -1.0 < lo < hi < 1.0
    np.testing.assert_array_equal(b[-1], [lo, hi])


def test_custom_bounds_are_used():
    bounds = LayoutBounds(coupling=(0.05, 0.5), detuning=(-0.2, 0.2))
    b = layout("const_coupling_detuning", bounds=bounds).bounds
    np.testing.assert_array_equal(b, [[0.05, 0.5], [0.05, 1.0], [-0.2, 0.2]])


@pytest.mark.parametrize(
    ("kind", "kwargs"),
    [
        ("square_pulse", {}),
        ("fout_only", {"fixed_g": 0.2}),
        ("detection_angles", {}),
        ("pwl_all", {"n_knots": 1}),
    ],
)
def test_layout_validation(kind, kwargs):
    with pytest.raises(ConfigError):
        layout(kind, **kwargs)


def test_decode_const_coupling():
    """Duration follows from the gain target; fout is the matched weighting."""
    pulse = layout("const_coupling").decode([0.3, 0.5])
    assert isinstance(pulse, PulseConfig)
    assert pulse.coupling.knots == (0.3, 0.3)
    assert pulse.tau == pytest.approx(math.log(25.0) / (2 * 0.09))
    assert pulse.gain_proportion == 0.5
    assert pulse.fout_is_normalized
    assert square_integral(pulse.fout) == pytest.approx(1.0, abs=1e-12)
    assert not any(pulse.detuning_offset.knots)
    assert effective_gain(pulse) == pytest.approx(25.0, rel=1e-9)


def test_decode_const_coupling_detuning():
    pulse = layout("const_coupling_detuning").decode([0.3, 0.5, 0.25])
    assert pulse.detuning_offset.knots == (0.25, 0.25)


def test_decode_rescales_coupling_at_minimum_duration():
    """A strong coupling clamped at tau_min is scaled down to the gain target."""
    pulse = layout("const_coupling").decode([2.0, 1.0])
    assert pulse.tau == 1.0
    assert pulse.coupling.knots[0] < 2.0
    assert effective_gain(pulse) == pytest.approx(50.0, rel=1e-9)


def test_decode_fout_only():
    built = layout("fout_only", fixed_g=0.2, fixed_tau=10.0)
    pulse = built.decode([0.1, -0.4, 0.9])
    assert pulse.tau == 10.0
    assert pulse.coupling.knots == (0.2, 0.2)
    assert pulse.fout.knots == (0.1, -0.4, 0.9)
    assert not pulse.fout_is_normalized


def test_decode_detection_angles():
    """The mixing angle is eliminated in closed form."""
    angles = layout("detection_angles", target=TARGET).decode([0.2, 0.5])
    assert isinstance(angles, DetectionAngles)
    assert angles.phi == pytest.approx(optimal_phi(TARGET, 0.2, 0.5)[0])


def test_decode_rejects_wrong_length():
    with pytest.raises(ValueError):
        layout("const_coupling").decode([0.3])


def test_round_trip_const_coupling():
    built = layout("const_coupling_detuning")
    vector = np.array([0.3, 0.5, -0.4])
    np.testing.assert_allclose(built.encode(built.decode(vector)), vector)


def test_round_trip_piecewise():
    built = layout("pwl_all")
    vector = np.array([0.2, 0.4, 0.3, 0.6, 0.1, -0.5, 0.9, 0.0, 0.3, -0.3])
    np.testing.assert_allclose(built.encode(built.decode(vector)), vector, rtol=1e-12)


def test_encode_type_checks():
    with pytest.raises(TypeError):
        layout("const_coupling").encode(DetectionAngles(0.1, 0.2))
    with pytest.raises(TypeError):
        layout("detection_angles", target=TARGET).encode(PulseConfig.constant(0.1, 10.0))
    with pytest.raises(ValueError):
        layout("pwl_coupling_fout").encode(PulseConfig.constant(0.1, 10.0))


@settings(max_examples=80, deadline=None)
@given(seed=st.integers(0, 100_000))
def test_decoded_pulses_respect_gain_limit(seed):
    """No vector in the box decodes to a pulse above p * G_lim."""
    built = layout("pwl_coupling_fout", n_knots=6)
    b = built.bounds
    vector = np.random.default_rng(seed).uniform(b[:, 0], b[:, 1])
    pulse = built.decode(vector)
    assert 1.0 <= pulse.tau <= 100.0
    assert effective_gain(pulse) <= pulse.gain_proportion * 50.0 * (1 + 1e-9)


def test_profile_knots():
    """Constant layouts report one coupling value; piecewise ones report fout normalized."""
    const = layout("const_coupling")
    assert const.profile_knots(const.decode([0.3, 0.5])) == {"coupling": [0.3]}

    pwl = layout("pwl_all")
    knots = pwl.profile_knots(pwl.decode([0.2, 0.4, 0.3, 0.6, 0.1, -0.5, 0.9, 0.0, 0.3, -0.3]))
    assert set(knots) == {"coupling", "fout", "detuning"}
    assert len(knots["fout"]) == 3
    assert knots["detuning"] == [0.0, 0.3, -0.3]

    fout_only = layout("fout_only", fixed_g=0.2, fixed_tau=10.0)
    assert set(fout_only.profile_knots(fout_only.decode([0.1, 0.2, 0.3]))) == {"fout"}


def test_contains():
    built = layout("const_coupling")
    assert built.contains([0.3, 0.5])
    assert not built.contains([3.0, 0.5])
