"""Experiment campaigns: parameter sweeps, sensitivity search, photon response.

Every campaign evaluates signal-on against signal-off ensembles that
share one trial-seed schedule (common random numbers), so AUC
differences reflect the signal rather than noise-path resampling, and
every result is a deterministic function of (configuration,
master_seed).
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, replace

import numpy as np

from .ensemble import EnsembleTelemetry, run_ensemble
from .metrics import DETECTION_THRESHOLD, auc
from .params import BiasProtocol, InitialCondition, JunctionParams
from .signals import ContinuousWave, GaussianPulse, SignalSpec

DEFAULT_KAPPA_GRID = tuple(np.geomspace(0.1, 10.0, 20))
DEFAULT_PHI0_GRID = tuple(np.linspace(0.0, 0.5, 11))


class BracketError(RuntimeError):
    """Amplitude bracket does not straddle the target r_auc."""

    def __init__(self, lo, hi, r_lo, r_hi, target):
        self.lo, self.hi, self.r_lo, self.r_hi = lo, hi, r_lo, r_hi
        super().__init__(
            f"bracket [{lo}, {hi}] does not straddle r_auc = {target}: "
            f"endpoint values are {r_lo:.4f} and {r_hi:.4f}")


@dataclass
class SweepResult:
    """r_auc along one swept axis."""

    axis_name: str
    axis_values: np.ndarray
    r_auc_values: np.ndarray
    best_index: int
    best_value: float


@dataclass
class PhotonResponse:
    """r_auc versus pulse photon number with its linear dynamic range.

    linear_range_end is the largest grid photon number for which a
    straight-line fit over the grid up to that point keeps every
    residual below the linearity tolerance; it doubles as the maximal
    resolvable photon number n_ph_max.
    """

    n_ph_values: np.ndarray
    r_auc_values: np.ndarray
    linear_range_end: float
    n_ph_max: float


def resolve_signal(signal, protocol: BiasProtocol) -> SignalSpec:
    """Materialize a signal: factories are called with the protocol."""
    if callable(signal) and not isinstance(signal, (ContinuousWave, GaussianPulse)):
        return signal(protocol)
    return signal


def _pair_r_auc(params, protocol, init, signal, n_trials, master_seed,
                workers, telemetry, label=""):
    off = run_ensemble(params, protocol, init, None, n_trials, master_seed,
                       label=f"{label}off", workers=workers,
                       telemetry=telemetry)
    on = run_ensemble(params, protocol, init, signal, n_trials, master_seed,
                      label=f"{label}on", workers=workers,
                      telemetry=telemetry)
    return auc(off, on)[1]


def _sweep(axis_name, axis_values, evaluate) -> SweepResult:
    values = np.asarray(axis_values, dtype=np.float64)
    if values.size == 0:
        raise ValueError(f"{axis_name} grid must be nonempty")
    r = np.array([evaluate(x) for x in values])
    best = int(np.argmax(r))
    return SweepResult(axis_name=axis_name, axis_values=values,
                       r_auc_values=r, best_index=best,
                       best_value=float(r[best]))


def sweep_kappa(params: JunctionParams, protocol: BiasProtocol,
                init: InitialCondition, kappa_grid, signal,
                n_trials: int, master_seed: int, *, workers: int = 1,
                telemetry: EnsembleTelemetry | None = None) -> SweepResult:
    """r_auc between signal-on and signal-off along a kappa grid.

    beta stays fixed; each point sets v = kappa beta.  Pulse arrival
    times given as a factory are re-resolved per point.
    """
    def evaluate(kappa):
        proto = replace(protocol, v=kappa * params.beta)
        return _pair_r_auc(params, proto, init, resolve_signal(signal, proto),
                           n_trials, master_seed, workers, telemetry,
                           label=f"kappa={kappa:g},")
    return _sweep("kappa", kappa_grid, evaluate)


def sweep_phi0(params: JunctionParams, protocol: BiasProtocol,
               init: InitialCondition, phi0_grid, signal,
               n_trials: int, master_seed: int, *, workers: int = 1,
               telemetry: EnsembleTelemetry | None = None) -> SweepResult:
    """r_auc between signal-on and signal-off along a phi0 grid."""
    sig = resolve_signal(signal, protocol)

    def evaluate(phi0):
        ini = replace(init, phi0=phi0)
        return _pair_r_auc(params, protocol, ini, sig, n_trials, master_seed,
                           workers, telemetry, label=f"phi0={phi0:g},")
    return _sweep("phi0", phi0_grid, evaluate)


def min_detectable_amplitude(params: JunctionParams, protocol: BiasProtocol,
                             init: InitialCondition, bracket, *,
                             n_trials: int, master_seed: int,
                             target: float = DETECTION_THRESHOLD,
                             omega_mw: float = 1.0, rel_tol: float = 0.05,
                             workers: int = 1,
                             telemetry: EnsembleTelemetry | None = None,
                             history: list | None = None) -> float:
    """Bisect the CW amplitude at which r_auc crosses the target.

    The no-signal ensemble is amplitude-independent and computed once;
    every amplitude evaluation reuses the same trial-seed schedule, so
    the scanned curve is a deterministic function of master_seed.
    Stops when the bracket is narrower than rel_tol of its midpoint and
    returns the midpoint.
    """
    lo, hi = bracket
    if not 0.0 <= lo < hi:
        raise ValueError(f"bracket must satisfy 0 <= lo < hi, got {bracket}")
    off = run_ensemble(params, protocol, init, None, n_trials, master_seed,
                       label="off", workers=workers, telemetry=telemetry)

    def evaluate(amplitude):
        on = run_ensemble(params, protocol, init,
                          ContinuousWave(i_mw=amplitude, omega_mw=omega_mw),
                          n_trials, master_seed,
                          label=f"i_mw={amplitude:g}", workers=workers,
                          telemetry=telemetry)
        r = auc(off, on)[1]
        if history is not None:
            history.append((float(amplitude), float(r)))
        return r

    r_lo = evaluate(lo)
    r_hi = evaluate(hi)
    if not (r_lo < target <= r_hi):
        raise BracketError(lo, hi, r_lo, r_hi, target)
    while (hi - lo) > rel_tol * 0.5 * (hi + lo):
        mid = 0.5 * (lo + hi)
        if evaluate(mid) >= target:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def photon_response(params: JunctionParams, protocol: BiasProtocol,
                    init: InitialCondition, n_ph_grid,
                    pulse_template, *, n_trials: int, master_seed: int,
                    linear_tol: float = 0.02, workers: int = 1,
                    telemetry: EnsembleTelemetry | None = None) -> PhotonResponse:
    """r_auc versus photon number for a fixed pulse template.

    The template's n_ph field is replaced per grid point.  The linear
    dynamic range is the longest grid prefix a straight line fits with
    every residual below linear_tol.
    """
    template = resolve_signal(pulse_template, protocol)
    if not isinstance(template, GaussianPulse):
        raise TypeError("photon_response requires a GaussianPulse template")
    grid = np.asarray(n_ph_grid, dtype=np.float64)
    if grid.size == 0:
        raise ValueError("n_ph grid must be nonempty")
    off = run_ensemble(params, protocol, init, None, n_trials, master_seed,
                       label="off", workers=workers, telemetry=telemetry)
    r = np.empty_like(grid)
    for k, n_ph in enumerate(grid):
        on = run_ensemble(params, protocol, init,
                          dataclasses.replace(template, n_ph=float(n_ph)),
                          n_trials, master_seed, label=f"n_ph={n_ph:g}",
                          workers=workers, telemetry=telemetry)
        r[k] = auc(off, on)[1]

    end = linear_range(grid, r, linear_tol)
    return PhotonResponse(n_ph_values=grid, r_auc_values=r,
                          linear_range_end=end, n_ph_max=end)


def linear_range(grid, values, tol: float) -> float:
    """Largest grid point whose prefix a straight line fits within tol.

    Fits y = a x + b over grid prefixes from longest to shortest and
    returns the grid value ending the first prefix whose maximum
    absolute residual stays below tol.  Falls back to the first grid
    point when even two-point prefixes bend more than tol allows.
    """
    grid = np.asarray(grid, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    if grid.shape != values.shape or grid.ndim != 1 or grid.size == 0:
        raise ValueError("grid and values must be matching 1-d arrays")
    if tol <= 0.0:
        raise ValueError(f"tol must be > 0, got {tol}")
    for k in range(grid.size - 1, 0, -1):
        coeffs = np.polyfit(grid[:k + 1], values[:k + 1], 1)
        residuals = values[:k + 1] - np.polyval(coeffs, grid[:k + 1])
        if np.max(np.abs(residuals)) < tol:
            return float(grid[k])
    return float(grid[0])


def thermal_robustness(params: JunctionParams, protocol: BiasProtocol,
                       init: InitialCondition, d1: float, d2: float, *,
                       n_trials: int, master_seed: int, workers: int = 1,
                       telemetry: EnsembleTelemetry | None = None) -> float:
    """r_auc between no-signal ensembles at noise intensities d1 and d2."""
    if d1 < 0.0 or d2 < 0.0:
        raise ValueError(f"noise intensities must be >= 0, got {d1}, {d2}")
    samples = []
    for d in (d1, d2):
        p = JunctionParams.from_noise_intensity(params.beta, d)
        samples.append(run_ensemble(p, protocol, init, None, n_trials,
                                    master_seed, label=f"D={d:g}",
                                    workers=workers, telemetry=telemetry))
    return auc(samples[0], samples[1])[1]
