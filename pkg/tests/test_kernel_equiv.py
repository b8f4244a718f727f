"""Backend equivalence: compiled and pure-Python kernels are bitwise twins."""

import math

import numpy as np
import pytest

from washboard.backend import available_backends, get_backend
from washboard.dynamics import trial_generator
from washboard.signals import (ContinuousWave, GaussianPulse,
                               sample_half_grid)

HAS_C = "c" in available_backends()
needs_c = pytest.mark.skipif(not HAS_C, reason="compiled kernel unavailable")

PY = get_backend("python")
CC = get_backend("c") if HAS_C else None


def bits(x):
    return np.asarray(x, dtype=np.float64).view(np.uint64)


def run_workload(kernel, *, W=8, n=600, step0=0, tau_start=0.0, dt=0.01,
                 v=5e-4, beta=1e-4, noise_scale=1e-4, phi_thresh=math.inf,
                 signal=None, seed=101, phi=None, pdot=None):
    if phi is None:
        phi = 0.1 + 0.01 * np.arange(W, dtype=np.float64)
    else:
        phi = phi.copy()
    if pdot is None:
        pdot = np.zeros(W, dtype=np.float64)
    else:
        pdot = pdot.copy()
    first = np.empty(W, dtype=np.int64)
    draws = np.empty(n * W, dtype=np.float64)
    for w in range(W):
        draws[w::W] = trial_generator(seed, w).standard_normal(n)
    sig_half = sample_half_grid(signal, tau_start, step0, n, dt)
    phi_buf = np.empty(n * W, dtype=np.float64)
    pdot_buf = np.empty(n * W, dtype=np.float64)
    kernel.run_chunk(phi, pdot, first, n, W, step0, tau_start, dt, v, beta,
                     noise_scale, phi_thresh, draws, sig_half, phi_buf,
                     pdot_buf)
    return phi, pdot, first, phi_buf, pdot_buf


WORKLOADS = {
    "noise_only": dict(),
    "cw": dict(signal=ContinuousWave(i_mw=0.003, omega_mw=1.0)),
    "pulse": dict(signal=GaussianPulse(n_ph=4.0, i_ph=0.005, omega_ph=1.0,
                                       tau_ph=2.0, tau_d=3.0)),
    "offset_chunk": dict(step0=50000, tau_start=10.0),
    "crossing": dict(noise_scale=0.0, v=0.2, phi_thresh=4.0, n=1000),
    "single_lane": dict(W=1, n=1000),
}


@needs_c
@pytest.mark.parametrize("name", sorted(WORKLOADS))
def test_bitwise_agreement(name):
    kwargs = WORKLOADS[name]
    out_py = run_workload(PY, **kwargs)
    out_c = run_workload(CC, **kwargs)
    for a, b, label in zip(out_py, out_c,
                           ("phi", "pdot", "first", "phi_buf", "pdot_buf")):
        if label == "first":
            np.testing.assert_array_equal(a, b, err_msg=label)
        else:
            np.testing.assert_array_equal(bits(a), bits(b), err_msg=label)


@needs_c
def test_crossing_index_agreement():
    out_py = run_workload(PY, **WORKLOADS["crossing"])
    out_c = run_workload(CC, **WORKLOADS["crossing"])
    assert (out_py[2] >= 0).all(), "crossing workload must actually cross"
    np.testing.assert_array_equal(out_py[2], out_c[2])


@pytest.mark.parametrize("kernel_name", ["python", "c"])
def test_chunk_split_invariance(kernel_name):
    if kernel_name == "c" and not HAS_C:
        pytest.skip("compiled kernel unavailable")
    kernel = get_backend(kernel_name)
    W, n, dt, v, beta = 4, 3000, 0.01, 5e-4, 1e-4
    signal = ContinuousWave(i_mw=0.01, omega_mw=1.0)
    draws = np.empty(n * W, dtype=np.float64)
    for w in range(W):
        draws[w::W] = trial_generator(55, w).standard_normal(n)

    def integrate(splits):
        phi = np.full(W, 0.2, dtype=np.float64)
        pdot = np.zeros(W, dtype=np.float64)
        first = np.empty(W, dtype=np.int64)
        phi_buf = np.empty(n * W, dtype=np.float64)
        step0 = 0
        for m in splits:
            sig = sample_half_grid(signal, 0.0, step0, m, dt)
            kernel.run_chunk(phi, pdot, first, m, W, step0, 0.0, dt, v,
                             beta, 1e-4, math.inf,
                             draws[step0 * W:(step0 + m) * W], sig, phi_buf)
            step0 += m
        return phi, pdot

    one = integrate([n])
    split = integrate([1000, 500, 1500])
    np.testing.assert_array_equal(bits(one[0]), bits(split[0]))
    np.testing.assert_array_equal(bits(one[1]), bits(split[1]))


class TestPolynomialSine:
    def test_accuracy_physical_range(self):
        xs = np.linspace(-50.0, 50.0, 20001)
        err = max(abs(PY.psin_scalar(float(x)) - math.sin(x)) for x in xs)
        assert err <= 2e-14

    def test_accuracy_wide_range(self):
        rng = np.random.default_rng(5)
        xs = rng.uniform(-1e4, 1e4, 2000)
        err = max(abs(PY.psin_scalar(float(x)) - math.sin(x)) for x in xs)
        assert err <= 1e-11

    def test_odd_function(self):
        rng = np.random.default_rng(6)
        for x in rng.uniform(1e-3, 100.0, 200):
            assert PY.psin_scalar(-float(x)) == -PY.psin_scalar(float(x))

    def test_nonfinite_propagates(self):
        for x in (math.inf, -math.inf, math.nan):
            assert math.isnan(PY.psin_scalar(x))

    def test_zero(self):
        assert PY.psin_scalar(0.0) == 0.0
        assert PY.psin_scalar(-0.0) == 0.0

    @needs_c
    def test_backends_agree_bitwise(self):
        rng = np.random.default_rng(7)
        xs = list(rng.uniform(-60.0, 60.0, 500))
        xs += list(rng.uniform(-1e6, 1e6, 200))
        xs += [1e300, -1e300, 2.0 ** 53 * 3.0, 1e15, 0.0,
               3.0 * math.pi / 2.0, math.pi, -math.pi]
        for x in xs:
            a, b = PY.psin_scalar(float(x)), CC.psin_scalar(float(x))
            assert bits(a) == bits(b), f"psin({x}) differs: {a!r} vs {b!r}"

    @needs_c
    def test_backends_agree_nonfinite(self):
        for x in (math.inf, -math.inf, math.nan):
            assert math.isnan(CC.psin_scalar(x))

    @needs_c
    def test_backends_agree_at_zero(self):
        # sign of zero is the one tolerated difference; values are equal
        assert PY.psin_scalar(-0.0) == CC.psin_scalar(-0.0) == 0.0
        assert bits(PY.psin_scalar(0.0)) == bits(CC.psin_scalar(0.0))


@needs_c
def test_nan_state_detected_identically():
    # a non-finite state must be flagged as crossed by both kernels
    phi = np.array([1e160], dtype=np.float64)
    for kernel in (PY, CC):
        p = phi.copy()
        pd = np.array([1e160], dtype=np.float64)
        first = np.empty(1, dtype=np.int64)
        phi_buf = np.empty(10, dtype=np.float64)
        kernel.run_chunk(p, pd, first, 10, 1, 0, 0.0, 1.0, 0.0, 1e-4, 0.0,
                         math.inf, np.zeros(10), None, phi_buf)
        assert first[0] >= 0
