"""Distinguishability metrics between two switching-current samples.

The detection statistic is the Mann-Whitney AUC with ties counted
half, folded to r_auc = max(A, 1 - A); the ROC staircase sweeps every
pooled threshold so its trapezoidal area reproduces the AUC exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DETECTION_THRESHOLD = 0.7


def _values_of(sample):
    values = np.asarray(getattr(sample, "values", sample), dtype=np.float64)
    if values.size == 0:
        raise ValueError("empty sample")
    return values


class EmpiricalCdf:
    """Right-continuous empirical CDF F(x) = fraction of sample <= x."""

    def __init__(self, values):
        self.values = np.sort(_values_of(values))
        self.n = self.values.size

    def __call__(self, x):
        idx = np.searchsorted(self.values, np.asarray(x, dtype=np.float64),
                              side="right")
        out = idx / self.n
        if np.ndim(x) == 0:
            return float(out)
        return out


def empirical_cdf(sample) -> EmpiricalCdf:
    """Empirical CDF of a sample: 0 below min, 1 at and above max."""
    return EmpiricalCdf(sample)


def ks_distance(a, b) -> float:
    """Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.

    Both empirical CDFs are step functions, so the supremum is attained
    at a pooled sample point.
    """
    fa = empirical_cdf(a)
    fb = empirical_cdf(b)
    pooled = np.concatenate((fa.values, fb.values))
    return float(np.max(np.abs(fa(pooled) - fb(pooled))))


def auc(no_signal, signal) -> tuple[float, float]:
    """Mann-Whitney AUC of signal against no-signal, and its folded value.

    auc_raw counts pairs where the signal value ranks below the
    no-signal value, ties weighted half; integer counting keeps
    AUC(a, a) = 0.5 exact.
    """
    ns = np.sort(_values_of(no_signal))
    s = _values_of(signal)
    left = np.searchsorted(ns, s, side="left")
    right = np.searchsorted(ns, s, side="right")
    greater = ns.size * s.size - int(np.sum(right))
    ties = int(np.sum(right - left))
    auc_raw = (greater + 0.5 * ties) / (ns.size * s.size)
    return auc_raw, max(auc_raw, 1.0 - auc_raw)


def detect(r_auc: float, threshold: float = DETECTION_THRESHOLD) -> bool:
    """Binary detection decision: r_auc >= threshold (inclusive)."""
    if not 0.0 <= r_auc <= 1.0:
        raise ValueError(f"r_auc in [0, 1] required, got {r_auc}")
    return r_auc >= threshold


@dataclass
class RocResult:
    """ROC staircase with its summary statistics."""

    points: np.ndarray
    auc_raw: float
    r_auc: float
    d_kc: float
    decision: bool


def roc_curve(no_signal, signal,
              threshold: float = DETECTION_THRESHOLD) -> RocResult:
    """ROC staircase over all pooled thresholds plus the infinite ends.

    A trial counts as positive when its i_sw lies at or below the
    threshold (the drive advances switching), so each point is
    (F_no_signal(t), F_signal(t)) and both coordinates run 0 to 1.
    """
    f0 = empirical_cdf(no_signal)
    f1 = empirical_cdf(signal)
    pooled = np.unique(np.concatenate((f0.values, f1.values)))
    thresholds = np.concatenate(([-np.inf], pooled, [np.inf]))
    points = np.column_stack((f0(thresholds), f1(thresholds)))
    auc_raw, r_auc = auc(no_signal, signal)
    d_kc = ks_distance(no_signal, signal)
    return RocResult(points=points, auc_raw=auc_raw, r_auc=r_auc, d_kc=d_kc,
                     decision=detect(r_auc, threshold))
