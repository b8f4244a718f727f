"""Stochastic simulator for switching dynamics of a driven washboard potential.

A phase particle in a tilted, thermally noisy washboard potential is
swept toward its critical tilt while optionally driven by a weak
microwave tone or photon pulse.  The package integrates single trials,
builds switching-current distributions, scores signal distinguishability
with ROC/AUC metrics, and searches operating parameters for detection
thresholds.
"""

from .backend import BACKEND_NAME, available_backends
from .bundle import BundleResult, emit_plot_data, run
from .campaigns import (BracketError, PhotonResponse, SweepResult,
                        linear_range, min_detectable_amplitude,
                        photon_response, resolve_signal, sweep_kappa,
                        sweep_phi0, thermal_robustness)
from .config import CampaignSpec, ConfigError, RunConfig, load_config
from .dynamics import (IntegrationError, detect_switch, drift, run_trial,
                       run_trial_recorded, step)
from .ensemble import (EnsembleTelemetry, ScdSample, load_sample,
                       run_ensemble, save_sample)
from .escape import (DensityCurve, Histogram, RateCurve, fd_escape_rate,
                     histogram, scd_from_rate)
from .metrics import (DETECTION_THRESHOLD, EmpiricalCdf, RocResult, auc,
                      detect, empirical_cdf, ks_distance, roc_curve)
from .params import (BiasProtocol, InitialCondition, JunctionParams,
                     PhaseState, SwitchCriterion, SwitchEvent,
                     barrier_height, normalized_potential)
from .signals import (ContinuousWave, GaussianPulse, PhysicalDevice,
                      min_detectable_power, pulse_amplitude, signal_value)

__version__ = "0.1.0"

__all__ = [
    "BACKEND_NAME", "available_backends",
    "BundleResult", "emit_plot_data", "run",
    "BracketError", "PhotonResponse", "SweepResult", "linear_range",
    "min_detectable_amplitude", "photon_response", "resolve_signal",
    "sweep_kappa", "sweep_phi0", "thermal_robustness",
    "CampaignSpec", "ConfigError", "RunConfig", "load_config",
    "IntegrationError", "detect_switch", "drift", "run_trial",
    "run_trial_recorded", "step",
    "EnsembleTelemetry", "ScdSample", "load_sample", "run_ensemble",
    "save_sample",
    "DensityCurve", "Histogram", "RateCurve", "fd_escape_rate",
    "histogram", "scd_from_rate",
    "DETECTION_THRESHOLD", "EmpiricalCdf", "RocResult", "auc", "detect",
    "empirical_cdf", "ks_distance", "roc_curve",
    "BiasProtocol", "InitialCondition", "JunctionParams", "PhaseState",
    "SwitchCriterion", "SwitchEvent", "barrier_height",
    "normalized_potential",
    "ContinuousWave", "GaussianPulse", "PhysicalDevice",
    "min_detectable_power", "pulse_amplitude", "signal_value",
    "__version__",
]
