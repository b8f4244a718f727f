"""Parameter types and washboard-potential helpers.

All quantities are dimensionless: currents in units of the critical
current I_c, energies in units of the Josephson energy E_J0, time in
units of the inverse plasma frequency 1/omega_J.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

DEFAULT_DPHI_SW = 4.0 * math.pi


def _require(cond, message):
    if not cond:
        raise ValueError(message)


@dataclass(frozen=True)
class JunctionParams:
    """Dimensionless junction parameters.

    beta is the dissipation coefficient 1/(R C omega_J), theta the
    reduced temperature k_B T / E_J0.  The Langevin noise intensity
    D = 2 beta theta is derived, never stored, so it can not drift out
    of sync with its factors.
    """

    beta: float
    theta: float

    def __post_init__(self):
        _require(math.isfinite(self.beta) and self.beta > 0.0,
                 f"junction.beta: beta > 0 required, got {self.beta}")
        _require(math.isfinite(self.theta) and self.theta >= 0.0,
                 f"junction.theta: theta >= 0 required, got {self.theta}")

    @property
    def noise_intensity(self) -> float:
        """Langevin noise intensity D = 2 beta theta."""
        return 2.0 * self.beta * self.theta

    @classmethod
    def from_noise_intensity(cls, beta: float, noise_intensity: float) -> "JunctionParams":
        """Build from (beta, D) with theta = D / (2 beta)."""
        _require(math.isfinite(beta) and beta > 0.0,
                 f"junction.beta: beta > 0 required, got {beta}")
        _require(math.isfinite(noise_intensity) and noise_intensity >= 0.0,
                 f"junction.noise_intensity: D >= 0 required, got {noise_intensity}")
        return cls(beta=beta, theta=noise_intensity / (2.0 * beta))


@dataclass(frozen=True)
class BiasProtocol:
    """Linear bias ramp i_b(tau) = v tau with censoring cap.

    i_start > 0 starts the integration at tau = i_start / v with the
    state placed directly at the configured initial condition; it is a
    performance lever for slow sweeps, not a physical working point,
    and defaults to 0.
    """

    v: float
    i_start: float = 0.0
    i_cap: float = 1.5
    dt: float = 0.01

    def __post_init__(self):
        _require(math.isfinite(self.v) and self.v > 0.0,
                 f"protocol.v: v > 0 required, got {self.v}")
        _require(0.0 <= self.i_start < 1.0,
                 f"protocol.i_start: 0 <= i_start < 1 required, got {self.i_start}")
        _require(self.i_cap > 1.0,
                 f"protocol.i_cap: i_cap > 1 required, got {self.i_cap}")
        _require(math.isfinite(self.dt) and self.dt > 0.0,
                 f"protocol.dt: dt > 0 required, got {self.dt}")

    def kappa(self, params: JunctionParams) -> float:
        """Effective sweep-rate parameter kappa = v / beta."""
        return self.v / params.beta

    @classmethod
    def from_kappa(cls, kappa: float, params: JunctionParams, **kwargs) -> "BiasProtocol":
        _require(math.isfinite(kappa) and kappa > 0.0,
                 f"protocol.kappa: kappa > 0 required, got {kappa}")
        return cls(v=kappa * params.beta, **kwargs)

    @property
    def tau_start(self) -> float:
        return self.i_start / self.v

    @property
    def tau_cap(self) -> float:
        return self.i_cap / self.v

    @property
    def n_steps_cap(self) -> int:
        """Number of integration steps from tau_start to the censoring cap."""
        return int(math.ceil((self.tau_cap - self.tau_start) / self.dt))


@dataclass(frozen=True)
class InitialCondition:
    """Initial phase and phase velocity at the start of the sweep."""

    phi0: float
    phi_dot0: float = 0.0

    def __post_init__(self):
        _require(math.isfinite(self.phi0),
                 f"initial.phi0: finite value required, got {self.phi0}")
        _require(math.isfinite(self.phi_dot0),
                 f"initial.phi_dot0: finite value required, got {self.phi_dot0}")


@dataclass(frozen=True)
class PhaseState:
    """Instantaneous integrator state (tau, phi, phi_dot)."""

    tau: float
    phi: float
    phi_dot: float


@dataclass(frozen=True)
class SwitchCriterion:
    """Phase-excursion switching criterion.

    The junction is declared switched once phi exceeds phi_ref +
    dphi_sw, where phi_ref is the well minimum at the starting bias.
    The default excursion of 4 pi separates the running state from any
    intrawell oscillation and is insensitive to its exact value once
    beyond 2 pi.
    """

    dphi_sw: float = DEFAULT_DPHI_SW
    phi_ref: float = 0.0

    def __post_init__(self):
        _require(self.dphi_sw > 0.0,
                 f"criterion.dphi_sw: positive excursion required, got {self.dphi_sw}")

    @property
    def phi_threshold(self) -> float:
        return self.phi_ref + self.dphi_sw

    @classmethod
    def for_protocol(cls, protocol: BiasProtocol, dphi_sw: float = DEFAULT_DPHI_SW) -> "SwitchCriterion":
        return cls(dphi_sw=dphi_sw, phi_ref=math.asin(protocol.i_start))


@dataclass(frozen=True)
class SwitchEvent:
    """Outcome of a single bias sweep.

    switched is False for a trial censored at the current cap.  seed is
    the (master_seed, trial_index) pair identifying the trial's noise
    stream for replay.
    """

    i_sw: float
    tau_sw: float
    switched: bool
    seed: tuple[int, int]


def normalized_potential(phi, i_b):
    """Tilted washboard potential u(phi) = 1 - cos(phi) - i_b phi.

    Accepts scalars or arrays and broadcasts like numpy.
    """
    return 1.0 - np.cos(phi) - np.asarray(i_b) * np.asarray(phi)


def barrier_height(i_b):
    """Well depth 2 [sqrt(1 - i_b^2) - i_b arccos(i_b)] for 0 <= i_b <= 1."""
    arr = np.asarray(i_b, dtype=float)
    if not np.all((arr >= 0.0) & (arr <= 1.0)):
        raise ValueError(f"barrier_height: i_b in [0, 1] required, got {i_b}")
    out = 2.0 * (np.sqrt(1.0 - arr * arr) - arr * np.arccos(arr))
    if np.ndim(i_b) == 0:
        return float(out)
    return out
