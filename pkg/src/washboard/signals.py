"""Drive-signal models and physical-unit conversions.

A signal spec is either None (no drive), a ContinuousWave, or a
GaussianPulse.  signal_value evaluates any of them on scalars or
arrays; the integrator samples signals once per ensemble on the shared
half-step time grid, so both backends consume identical values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

HBAR = 1.054571817e-34
E_CHARGE = 1.602176634e-19


def _require(cond, message):
    if not cond:
        raise ValueError(message)


@dataclass(frozen=True)
class ContinuousWave:
    """Continuous drive i_mw sin(omega_mw tau)."""

    i_mw: float
    omega_mw: float

    def __post_init__(self):
        _require(self.i_mw >= 0.0,
                 f"signal.i_mw: amplitude >= 0 required, got {self.i_mw}")
        _require(self.omega_mw > 0.0,
                 f"signal.omega_mw: frequency > 0 required, got {self.omega_mw}")


@dataclass(frozen=True)
class GaussianPulse:
    """Gaussian photon pulse.

    sqrt(n_ph) i_ph exp(-(tau - tau_d)^2 / (2 tau_ph^2)) cos(omega_ph (tau - tau_d))

    n_ph is real-valued so optimizers can scan it continuously; integer
    photon numbers are a presentation-layer restriction.
    """

    n_ph: float
    i_ph: float
    omega_ph: float
    tau_ph: float
    tau_d: float

    def __post_init__(self):
        _require(self.n_ph >= 0.0,
                 f"signal.n_ph: photon count >= 0 required, got {self.n_ph}")
        _require(self.i_ph >= 0.0,
                 f"signal.i_ph: amplitude >= 0 required, got {self.i_ph}")
        _require(self.omega_ph > 0.0,
                 f"signal.omega_ph: frequency > 0 required, got {self.omega_ph}")
        _require(self.tau_ph > 0.0,
                 f"signal.tau_ph: width > 0 required, got {self.tau_ph}")


SignalSpec = Optional[Union[ContinuousWave, GaussianPulse]]


def signal_value(spec: SignalSpec, tau):
    """Evaluate the drive current at tau (scalar or array)."""
    if spec is None:
        return np.zeros_like(np.asarray(tau, dtype=float))
    t = np.asarray(tau, dtype=float)
    if isinstance(spec, ContinuousWave):
        return spec.i_mw * np.sin(spec.omega_mw * t)
    if isinstance(spec, GaussianPulse):
        dt = t - spec.tau_d
        envelope = np.exp(-0.5 * (dt / spec.tau_ph) ** 2)
        return math.sqrt(spec.n_ph) * spec.i_ph * envelope * np.cos(spec.omega_ph * dt)
    raise TypeError(f"unknown signal spec: {spec!r}")


def sample_half_grid(spec: SignalSpec, tau_start: float, step0: int, n: int, dt: float):
    """Sample a signal on the integrator's half-step grid.

    Returns 2 n + 1 values covering whole steps step0 .. step0 + n and
    the midpoints between them, or None when spec is None.  The time of
    whole step j is computed as tau_start + j dt, elementwise identical
    to the scalar expression used inside the integrator kernels.
    """
    if spec is None:
        return None
    jd = np.arange(step0, step0 + n + 1, dtype=np.float64)
    tau_whole = tau_start + jd * dt
    tau_half = tau_whole[:n] + 0.5 * dt
    out = np.empty(2 * n + 1, dtype=np.float64)
    out[0::2] = signal_value(spec, tau_whole)
    out[1::2] = signal_value(spec, tau_half)
    return out


@dataclass(frozen=True)
class PhysicalDevice:
    """Physical junction and source parameters in SI units.

    Derived quantities (plasma frequency, Josephson energy) are always
    recomputed from the stored fields.
    """

    i_c: float
    capacitance: float
    r_mw: float
    chi: float

    def __post_init__(self):
        _require(self.i_c > 0.0,
                 f"device.i_c: critical current > 0 required, got {self.i_c}")
        _require(self.capacitance > 0.0,
                 f"device.capacitance: capacitance > 0 required, got {self.capacitance}")
        _require(self.r_mw > 0.0,
                 f"device.r_mw: impedance > 0 required, got {self.r_mw}")
        _require(0.0 < self.chi <= 1.0,
                 f"device.chi: coupling efficiency in (0, 1] required, got {self.chi}")

    @property
    def omega_j(self) -> float:
        """Plasma frequency sqrt(2 e I_c / (hbar C)) in rad/s."""
        return math.sqrt(2.0 * E_CHARGE * self.i_c / (HBAR * self.capacitance))

    @property
    def e_j0(self) -> float:
        """Josephson energy hbar I_c / (2 e) in joules."""
        return HBAR * self.i_c / (2.0 * E_CHARGE)


def pulse_amplitude(device: PhysicalDevice, omega_ph: float, tau_ph: float) -> float:
    """Single-photon pulse amplitude i_ph in units of I_c.

    i_ph = sqrt(hbar omega_ph omega_J^2 / (R I_c^2 tau_ph)), with
    omega_ph and tau_ph in normalized units.  The dimensional
    bookkeeping follows the source expression as printed; the anchor is
    the documented working value of about 0.005 for a 5 ns pulse.
    """
    _require(omega_ph > 0.0,
             f"pulse_amplitude: omega_ph > 0 required, got {omega_ph}")
    _require(tau_ph > 0.0,
             f"pulse_amplitude: tau_ph > 0 required, got {tau_ph}")
    return math.sqrt(HBAR * omega_ph * device.omega_j ** 2
                     / (device.r_mw * device.i_c ** 2 * tau_ph))


def min_detectable_power(i_mw: float, device: PhysicalDevice) -> float:
    """Minimum detectable power i_mw^2 I_c^2 R_MW / (2 chi) in watts."""
    _require(i_mw >= 0.0,
             f"min_detectable_power: i_mw >= 0 required, got {i_mw}")
    return i_mw ** 2 * device.i_c ** 2 * device.r_mw / (2.0 * device.chi)
