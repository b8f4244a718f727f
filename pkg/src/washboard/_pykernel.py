"""Pure-Python integrator kernel.

Bitwise twin of the compiled kernel in _ckernel.pyx: same polynomial
sine, same statement order, double precision throughout, so either
backend produces byte-identical trajectories.  Keep the two files in
sync; the equivalence test compares them exhaustively.

One step advances (phi, phi_dot) with a classical RK4 pass over the
deterministic right-hand side followed by an additive end-of-step
velocity kick of standard deviation noise_scale = sqrt(D dt).  For
additive noise this is strong order 1 and keeps the noiseless pendulum
energy drift near machine precision.
"""

from __future__ import annotations

import math

import numpy as np

BACKEND_NAME = "python"

# sin(y) = y * (C0 + C1 y^2 + ... + C9 y^18) on |y| <= pi/2 after
# Cody-Waite reduction by multiples of pi; max relative error 3.3e-16.
SIN_COEF = (
    1.0,
    -0.16666666666666666,
    0.008333333333333333,
    -0.0001984126984126967,
    2.755731922394071e-06,
    -2.5052108378602197e-08,
    1.6059043206300948e-10,
    -7.647127739966418e-13,
    2.8102145350022103e-15,
    -7.982518961783833e-18,
)
INV_PI = 0.3183098861837907
PI_HI = 3.141592653589793
PI_LO = 1.2246467991473532e-16

_C0, _C1, _C2, _C3, _C4, _C5, _C6, _C7, _C8, _C9 = SIN_COEF


def psin(x: float) -> float:
    """Polynomial sine, identical in both backends.

    NaN and infinities return NaN, the value the compiled twin's
    reduction produces by propagation; for any finite argument the
    integer parity decision matches the compiled twin's floor-based
    one exactly.
    """
    t = x * INV_PI
    if not math.isfinite(t):
        return x - x
    kd = float(round(t))
    y = (x - kd * PI_HI) - kd * PI_LO
    u = y * y
    p = _C9
    p = p * u + _C8
    p = p * u + _C7
    p = p * u + _C6
    p = p * u + _C5
    p = p * u + _C4
    p = p * u + _C3
    p = p * u + _C2
    p = p * u + _C1
    p = p * u + _C0
    s = y * p
    if int(kd) & 1:
        s = -s
    return s


psin_scalar = psin


def run_chunk(phi, pdot, first, n, W, step0, tau_start, dt, v, beta,
              noise_scale, phi_thresh, draws, sig_half, phi_buf,
              pdot_buf=None):
    """Advance W lanes by n steps and scan for threshold crossings.

    phi, pdot: float64[W], updated in place.
    first: int64[W], set to the chunk-local index of the first step
        whose end-of-step phi fails (phi < phi_thresh), or -1.  A NaN
        phi also fails the comparison, so numerical blow-ups surface
        here as well.
    draws: float64[n * W], step-major standard normal deviates.
    sig_half: float64[2 n + 1] signal samples on the half-step grid
        (see signals.sample_half_grid), or None for no drive.
    phi_buf: float64[n * W] scratch, receives the phi trajectory.
    pdot_buf: optional float64[n * W], receives the velocity trajectory.
    """
    hh = 0.5 * dt
    six = dt / 6.0
    has_sig = sig_half is not None
    sig = sig_half.tolist() if has_sig else None
    dr = draws.tolist()
    fs = phi.tolist()
    ps = pdot.tolist()
    buf = [0.0] * (n * W)
    pbuf = [0.0] * (n * W) if pdot_buf is not None else None

    for k in range(n):
        jd = float(step0 + k)
        tau0 = tau_start + jd * dt
        tauh = tau0 + hh
        tau1 = tau0 + dt
        if has_sig:
            s0 = sig[2 * k]
            sh = sig[2 * k + 1]
            s1 = sig[2 * k + 2]
        else:
            s0 = sh = s1 = 0.0
        F0 = v * tau0 + s0
        Fh = v * tauh + sh
        F1 = v * tau1 + s1
        base = k * W
        for w in range(W):
            f = fs[w]
            p = ps[w]
            k1f = p
            k1p = F0 - psin(f) - beta * p
            f2 = f + hh * k1f
            p2 = p + hh * k1p
            k2f = p2
            k2p = Fh - psin(f2) - beta * p2
            f3 = f + hh * k2f
            p3 = p + hh * k2p
            k3f = p3
            k3p = Fh - psin(f3) - beta * p3
            f4 = f + dt * k3f
            p4 = p + dt * k3p
            k4f = p4
            k4p = F1 - psin(f4) - beta * p4
            fn = f + six * (k1f + 2.0 * (k2f + k3f) + k4f)
            pn = p + six * (k1p + 2.0 * (k2p + k3p) + k4p) + noise_scale * dr[base + w]
            fs[w] = fn
            ps[w] = pn
            buf[base + w] = fn
            if pbuf is not None:
                pbuf[base + w] = pn

    phi[:] = fs
    pdot[:] = ps
    phi_buf[: n * W] = buf
    if pdot_buf is not None:
        pdot_buf[: n * W] = pbuf

    view = np.asarray(phi_buf[: n * W]).reshape(n, W)
    crossed = ~(view < phi_thresh)
    any_cross = crossed.any(axis=0)
    idx = crossed.argmax(axis=0)
    out = np.where(any_cross, idx, -1)
    first[:W] = out
