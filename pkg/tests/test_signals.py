"""Drive-signal models and physical-unit conversions."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from washboard import (ContinuousWave, GaussianPulse, PhysicalDevice,
                       min_detectable_power, pulse_amplitude, signal_value)
from washboard.signals import sample_half_grid

# working-point device: 0.975 uA junction, plasma frequency 71.2 GHz
DEVICE = PhysicalDevice(i_c=0.975e-6, capacitance=5.844e-13, r_mw=100.0,
                        chi=0.5)


class TestSignalValue:
    def test_none_is_zero(self):
        assert signal_value(None, 3.0) == 0.0
        out = signal_value(None, np.linspace(0, 10, 5))
        assert out.shape == (5,) and not out.any()

    def test_cw_formula(self):
        cw = ContinuousWave(i_mw=0.003, omega_mw=0.9)
        for tau in (0.0, 1.7, 250.0):
            assert signal_value(cw, tau) == pytest.approx(
                0.003 * math.sin(0.9 * tau), abs=1e-18)

    def test_cw_array(self):
        cw = ContinuousWave(i_mw=0.01, omega_mw=1.0)
        taus = np.linspace(0, 20, 7)
        np.testing.assert_allclose(signal_value(cw, taus),
                                   0.01 * np.sin(taus), rtol=1e-15)

    def test_pulse_peak(self):
        pulse = GaussianPulse(n_ph=4.0, i_ph=0.005, omega_ph=1.0,
                              tau_ph=1.0, tau_d=100.0)
        assert signal_value(pulse, 100.0) == pytest.approx(0.01, abs=1e-18)

    def test_pulse_formula(self):
        pulse = GaussianPulse(n_ph=9.0, i_ph=0.002, omega_ph=1.3,
                              tau_ph=5.0, tau_d=40.0)
        for tau in (30.0, 40.0, 47.5):
            x = tau - 40.0
            expected = (3.0 * 0.002 * math.exp(-0.5 * (x / 5.0) ** 2)
                        * math.cos(1.3 * x))
            assert signal_value(pulse, tau) == pytest.approx(expected,
                                                             abs=1e-18)

    @given(st.floats(0, 50))
    @settings(max_examples=50)
    def test_pulse_envelope_symmetry(self, x):
        pulse = GaussianPulse(n_ph=1.0, i_ph=0.005, omega_ph=1.0,
                              tau_ph=3.0, tau_d=200.0)
        assert signal_value(pulse, 200.0 + x) == pytest.approx(
            signal_value(pulse, 200.0 - x), abs=1e-18)

    @given(st.floats(-1e4, 1e4))
    @settings(max_examples=50)
    def test_cw_bounded_by_amplitude(self, tau):
        cw = ContinuousWave(i_mw=0.003, omega_mw=1.0)
        assert abs(signal_value(cw, tau)) <= 0.003 * (1 + 1e-12)

    def test_zero_photons_is_silent(self):
        pulse = GaussianPulse(n_ph=0.0, i_ph=0.005, omega_ph=1.0,
                              tau_ph=1.0, tau_d=10.0)
        assert signal_value(pulse, 10.0) == 0.0


class TestValidation:
    @pytest.mark.parametrize("kwargs", [
        dict(i_mw=-0.001, omega_mw=1.0),
        dict(i_mw=0.001, omega_mw=0.0),
    ])
    def test_cw(self, kwargs):
        with pytest.raises(ValueError):
            ContinuousWave(**kwargs)

    @pytest.mark.parametrize("field,value", [
        ("n_ph", -1.0), ("i_ph", -0.1), ("omega_ph", 0.0), ("tau_ph", 0.0),
    ])
    def test_pulse(self, field, value):
        kwargs = dict(n_ph=1.0, i_ph=0.005, omega_ph=1.0, tau_ph=1.0,
                      tau_d=0.0)
        kwargs[field] = value
        with pytest.raises(ValueError):
            GaussianPulse(**kwargs)

    @pytest.mark.parametrize("field,value", [
        ("i_c", 0.0), ("capacitance", -1e-12), ("r_mw", 0.0),
        ("chi", 0.0), ("chi", 1.5),
    ])
    def test_device(self, field, value):
        kwargs = dict(i_c=1e-6, capacitance=1e-12, r_mw=100.0, chi=0.5)
        kwargs[field] = value
        with pytest.raises(ValueError):
            PhysicalDevice(**kwargs)


class TestHalfGrid:
    def test_none_signal(self):
        assert sample_half_grid(None, 0.0, 0, 100, 0.01) is None

    def test_interleaving(self):
        cw = ContinuousWave(i_mw=0.5, omega_mw=2.0)
        out = sample_half_grid(cw, 10.0, 3, 4, 0.25)
        assert out.shape == (9,)
        taus_whole = 10.0 + np.arange(3, 8, dtype=float) * 0.25
        np.testing.assert_array_equal(out[0::2], signal_value(cw, taus_whole))
        np.testing.assert_array_equal(
            out[1::2], signal_value(cw, taus_whole[:4] + 0.125))

    def test_matches_scalar_evaluation(self):
        pulse = GaussianPulse(n_ph=2.0, i_ph=0.004, omega_ph=1.1,
                              tau_ph=7.0, tau_d=15.0)
        out = sample_half_grid(pulse, 1.5, 10, 6, 0.5)
        # whole-step times are tau_start + j * dt computed elementwise
        assert out[0] == signal_value(pulse, 1.5 + 10 * 0.5)
        assert out[2] == signal_value(pulse, 1.5 + 11 * 0.5)


class TestDevice:
    def test_plasma_frequency(self):
        expected = math.sqrt(2 * 1.602176634e-19 * 0.975e-6
                             / (1.054571817e-34 * 5.844e-13))
        assert DEVICE.omega_j == pytest.approx(expected, rel=1e-12)
        assert DEVICE.omega_j == pytest.approx(7.12e10, rel=2e-3)

    def test_josephson_energy(self):
        expected = 1.054571817e-34 * 0.975e-6 / (2 * 1.602176634e-19)
        assert DEVICE.e_j0 == pytest.approx(expected, rel=1e-12)

    def test_normalized_pulse_width_matches_5ns(self):
        # tau_ph = 356 normalized time units is 5 ns at this junction
        assert 356.0 / DEVICE.omega_j == pytest.approx(5e-9, rel=2e-3)


class TestPulseAmplitude:
    def test_working_point(self):
        i_ph = pulse_amplitude(DEVICE, omega_ph=1.0, tau_ph=356.0)
        assert 0.0035 <= i_ph <= 0.0065

    def test_width_scaling(self):
        a1 = pulse_amplitude(DEVICE, 1.0, 100.0)
        a4 = pulse_amplitude(DEVICE, 1.0, 400.0)
        assert a4 == pytest.approx(a1 / 2.0, rel=1e-12)

    def test_frequency_scaling(self):
        a1 = pulse_amplitude(DEVICE, 1.0, 100.0)
        a2 = pulse_amplitude(DEVICE, 2.0, 100.0)
        assert a2 == pytest.approx(a1 * math.sqrt(2.0), rel=1e-12)

    def test_validation(self):
        with pytest.raises(ValueError):
            pulse_amplitude(DEVICE, 0.0, 1.0)
        with pytest.raises(ValueError):
            pulse_amplitude(DEVICE, 1.0, -1.0)


class TestMinDetectablePower:
    def test_closed_form(self):
        p = min_detectable_power(2e-4, DEVICE)
        expected = (2e-4) ** 2 * (0.975e-6) ** 2 * 100.0 / (2 * 0.5)
        assert p == pytest.approx(expected, rel=1e-15)

    def test_reference_amplitude_anchor(self):
        # 2.91e-4 I_c with R = 100 ohm, chi = 0.5 gives 8.4681e-6 I_c^2
        device = PhysicalDevice(i_c=1.0, capacitance=1e-12, r_mw=100.0,
                                chi=0.5)
        assert min_detectable_power(2.91e-4, device) == pytest.approx(
            8.4681e-6, rel=1e-9)

    def test_scales_with_critical_current_squared(self):
        d1 = PhysicalDevice(i_c=1e-6, capacitance=1e-12, r_mw=50.0, chi=0.8)
        d3 = PhysicalDevice(i_c=3e-6, capacitance=1e-12, r_mw=50.0, chi=0.8)
        assert min_detectable_power(1e-4, d3) == pytest.approx(
            9.0 * min_detectable_power(1e-4, d1), rel=1e-12)

    def test_validation(self):
        with pytest.raises(ValueError):
            min_detectable_power(-1e-4, DEVICE)
