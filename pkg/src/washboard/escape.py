"""Histogramming and escape-rate inversion for switching samples.

The inversion recovers the escape rate from the empirical survival
function, Gamma(i_k) = v ln(S_k / S_{k+1}) / di, and the forward map
rebuilds the density P(i) = (Gamma / v) exp(-int Gamma / v di).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class Histogram:
    """Density-normalized histogram of switching currents."""

    bin_edges: np.ndarray
    densities: np.ndarray
    n: int


@dataclass
class RateCurve:
    """Escape rate Gamma(i) on bin centers."""

    i: np.ndarray
    gamma: np.ndarray


@dataclass
class DensityCurve:
    """Predicted switching density on a current grid."""

    i: np.ndarray
    density: np.ndarray


def _values_of(sample):
    values = np.asarray(getattr(sample, "values", sample), dtype=np.float64)
    if values.size == 0:
        raise ValueError("empty sample")
    return values


def _edges_for(values, bin_count):
    if bin_count is None:
        return np.histogram_bin_edges(values, bins="fd")
    if bin_count < 1:
        raise ValueError(f"bin_count >= 1 required, got {bin_count}")
    return np.histogram_bin_edges(values, bins=bin_count)


def histogram(sample, bin_count: int | None = None) -> Histogram:
    """Histogram over [min, max] of the sample.

    bin_count None selects the Freedman-Diaconis rule, which stays
    robust against the heavy left tails of slow-sweep samples.
    Censored trials carry no i_sw and are excluded from the mass.
    """
    values = _values_of(sample)
    edges = _edges_for(values, bin_count)
    densities, edges = np.histogram(values, bins=edges, density=True)
    return Histogram(bin_edges=edges, densities=densities, n=values.size)


def fd_escape_rate(sample, v: float, bin_count: int | None = None) -> RateCurve:
    """Escape rate from the binned empirical survival function.

    Survivors at a bin edge include censored trials, which by
    definition outlasted every edge.  Bins past the first one with no
    survivors are truncated, not extrapolated.
    """
    if v <= 0.0:
        raise ValueError(f"sweep rate v > 0 required, got {v}")
    values = _values_of(sample)
    censored = int(getattr(sample, "censored_count", 0))
    edges = _edges_for(values, bin_count)
    survivors = values.size - np.searchsorted(np.sort(values), edges, side="left")
    survivors = survivors + censored

    centers = []
    gamma = []
    for k in range(len(edges) - 1):
        s0 = survivors[k]
        s1 = survivors[k + 1]
        if s1 <= 0:
            break
        di = edges[k + 1] - edges[k]
        centers.append(0.5 * (edges[k] + edges[k + 1]))
        gamma.append(v * np.log(s0 / s1) / di)
    return RateCurve(i=np.array(centers), gamma=np.array(gamma))


def scd_from_rate(rate, v: float) -> DensityCurve:
    """Forward prediction P(i) = (Gamma / v) exp(-int Gamma / v di).

    The cumulative integral runs from the start of the rate grid with
    trapezoidal quadrature; the result integrates to at most 1.
    """
    if v <= 0.0:
        raise ValueError(f"sweep rate v > 0 required, got {v}")
    if isinstance(rate, RateCurve):
        grid, gamma = rate.i, rate.gamma
    else:
        grid, gamma = rate
    grid = np.asarray(grid, dtype=np.float64)
    gamma = np.asarray(gamma, dtype=np.float64)
    if np.any(gamma < 0.0):
        raise ValueError("rate curve must be nonnegative")
    g = gamma / v
    if grid.size == 0:
        return DensityCurve(i=grid, density=gamma)
    increments = 0.5 * (g[1:] + g[:-1]) * np.diff(grid)
    cumulative = np.concatenate(([0.0], np.cumsum(increments)))
    return DensityCurve(i=grid, density=g * np.exp(-cumulative))
