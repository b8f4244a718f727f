"""Single-trial phase dynamics: drift, stepping, and switch detection.

The equation of motion is the damped driven pendulum with additive
noise,

    phi'' + beta phi' + sin(phi) = v tau + i_s(tau) + i_n(tau),

integrated with a classical RK4 pass over the deterministic part and
an end-of-step velocity kick of standard deviation sqrt(D dt).
"""

from __future__ import annotations

import math

import numpy as np

from . import backend
from ._driver import run_batch, trial_generator  # noqa: F401  (re-exported)
from ._pykernel import psin
from .params import (BiasProtocol, InitialCondition, JunctionParams,
                     PhaseState, SwitchCriterion, SwitchEvent)
from .signals import SignalSpec, sample_half_grid, signal_value


class IntegrationError(RuntimeError):
    """The integrator produced a non-finite state (dt too large)."""


def drift(state: PhaseState, params: JunctionParams, protocol: BiasProtocol,
          signal: SignalSpec = None) -> float:
    """Deterministic phase acceleration v tau + i_s - sin(phi) - beta phi_dot."""
    i_b = protocol.v * state.tau
    i_s = float(signal_value(signal, state.tau))
    return i_b + i_s - psin(state.phi) - params.beta * state.phi_dot


def step(state: PhaseState, params: JunctionParams, protocol: BiasProtocol,
         draw: float = 0.0, signal: SignalSpec = None) -> PhaseState:
    """Advance one step of length protocol.dt from state.tau.

    draw is the trial stream's standard normal deviate for this step;
    the velocity kick applied is sqrt(D dt) * draw.
    """
    dt = protocol.dt
    phi = np.array([state.phi], dtype=np.float64)
    pdot = np.array([state.phi_dot], dtype=np.float64)
    first = np.empty(1, dtype=np.int64)
    draws = np.array([draw], dtype=np.float64)
    sig_half = sample_half_grid(signal, state.tau, 0, 1, dt)
    phi_buf = np.empty(1, dtype=np.float64)
    noise_scale = math.sqrt(params.noise_intensity * dt)
    backend.run_chunk(phi, pdot, first, 1, 1, 0, state.tau, dt, protocol.v,
                      params.beta, noise_scale, math.inf, draws, sig_half,
                      phi_buf)
    if not (math.isfinite(phi[0]) and math.isfinite(pdot[0])):
        raise IntegrationError(
            f"non-finite state after step at tau = {state.tau}; "
            "dt is too large for this configuration")
    return PhaseState(tau=state.tau + dt, phi=float(phi[0]),
                      phi_dot=float(pdot[0]))


def detect_switch(state: PhaseState, init: InitialCondition,
                  criterion: SwitchCriterion | None = None) -> bool:
    """True once phi has advanced dphi_sw beyond the starting well."""
    if criterion is None:
        criterion = SwitchCriterion()
    return state.phi >= criterion.phi_threshold


def run_trial(params: JunctionParams, protocol: BiasProtocol,
              init: InitialCondition, signal: SignalSpec = None,
              seed: int = 0, trial_index: int = 0,
              criterion: SwitchCriterion | None = None) -> SwitchEvent:
    """Integrate one sweep and return its switching event.

    The trial's noise stream is keyed by (seed, trial_index), so the
    result is bit-identical whether the trial runs alone or inside any
    ensemble using the same master seed.
    """
    events, _, _ = run_batch(params, protocol, init, signal, seed,
                             [trial_index], criterion)
    return events[0]


def run_trial_recorded(params: JunctionParams, protocol: BiasProtocol,
                       init: InitialCondition, signal: SignalSpec = None,
                       seed: int = 0, trial_index: int = 0,
                       criterion: SwitchCriterion | None = None,
                       stride: int = 100):
    """run_trial plus a decimated (tau, phi, phi_dot, i_b) trajectory."""
    events, trajectory, _ = run_batch(params, protocol, init, signal, seed,
                                      [trial_index], criterion,
                                      record_stride=stride)
    return events[0], trajectory


def integrate_constant_bias(params: JunctionParams, i_b: float, phi0: float,
                            phi_dot0: float, n_steps: int, dt: float,
                            draws=None, seed: int | None = None,
                            record: bool = False):
    """Validation harness: integrate at fixed bias, no ramp, no switching.

    Returns (phi, phi_dot) trajectories as arrays of length n_steps
    when record is True, else the final (phi, phi_dot) pair.  Noise is
    taken from draws (length n_steps) when given, from a seeded trial
    stream when seed is set, and is absent otherwise.
    """
    if draws is None:
        if seed is None:
            draws = np.zeros(n_steps, dtype=np.float64)
        else:
            draws = trial_generator(seed, 0).standard_normal(n_steps)
    draws = np.asarray(draws, dtype=np.float64)
    if draws.shape != (n_steps,):
        raise ValueError("draws must have shape (n_steps,)")
    noise_scale = math.sqrt(params.noise_intensity * dt)

    phi = np.array([phi0], dtype=np.float64)
    pdot = np.array([phi_dot0], dtype=np.float64)
    first = np.empty(1, dtype=np.int64)
    chunk = 16384
    phi_buf = np.empty(chunk, dtype=np.float64)
    pdot_buf = np.empty(chunk, dtype=np.float64)
    phis = np.empty(n_steps, dtype=np.float64) if record else None
    pdots = np.empty(n_steps, dtype=np.float64) if record else None

    step0 = 0
    while step0 < n_steps:
        n = min(chunk, n_steps - step0)
        sig_half = np.full(2 * n + 1, i_b, dtype=np.float64)
        backend.run_chunk(phi, pdot, first, n, 1, step0, 0.0, dt, 0.0,
                          params.beta, noise_scale, math.inf,
                          draws[step0:step0 + n], sig_half, phi_buf, pdot_buf)
        if first[0] >= 0:
            raise IntegrationError(
                f"non-finite state at step {step0 + int(first[0])}; "
                "dt is too large for this configuration")
        if record:
            phis[step0:step0 + n] = phi_buf[:n]
            pdots[step0:step0 + n] = pdot_buf[:n]
        step0 += n
    if record:
        return phis, pdots
    return float(phi[0]), float(pdot[0])
