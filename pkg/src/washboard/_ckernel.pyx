# cython: language_level=3, boundscheck=False, wraparound=False
# cython: cdivision=True, initializedcheck=False
"""Compiled integrator kernel.

Bitwise twin of _pykernel.py: same polynomial sine, same statement
order.  Compiled with -ffp-contract=off and without -ffast-math so the
C arithmetic matches Python float semantics exactly; the equivalence
test enforces this.
"""

import numpy as np

from libc.math cimport floor, nearbyint

BACKEND_NAME = "c"

cdef double INV_PI = 0.3183098861837907
cdef double PI_HI = 3.141592653589793
cdef double PI_LO = 1.2246467991473532e-16
cdef double C0 = 1.0
cdef double C1 = -0.16666666666666666
cdef double C2 = 0.008333333333333333
cdef double C3 = -0.0001984126984126967
cdef double C4 = 2.755731922394071e-06
cdef double C5 = -2.5052108378602197e-08
cdef double C6 = 1.6059043206300948e-10
cdef double C7 = -7.647127739966418e-13
cdef double C8 = 2.8102145350022103e-15
cdef double C9 = -7.982518961783833e-18

_EMPTY = np.zeros(1, dtype=np.float64)


def psin_scalar(double x):
    """Module-level psin for the backend equivalence tests."""
    return psin(x)


cdef inline double psin(double x) noexcept nogil:
    # Reduction-index parity comes from floor (a single rounding
    # instruction under these compile flags), not an integer cast, so
    # every double is defined: NaN and infinities propagate as NaN,
    # huge finite arguments keep an exact even/odd decision.
    cdef double kd = nearbyint(x * INV_PI)
    cdef double y = (x - kd * PI_HI) - kd * PI_LO
    cdef double u = y * y
    cdef double p = C9
    cdef double s
    cdef double half_k
    p = p * u + C8
    p = p * u + C7
    p = p * u + C6
    p = p * u + C5
    p = p * u + C4
    p = p * u + C3
    p = p * u + C2
    p = p * u + C1
    p = p * u + C0
    s = y * p
    half_k = kd * 0.5
    if half_k - floor(half_k) != 0.0:
        s = -s
    return s


def run_chunk(double[::1] phi, double[::1] pdot, long long[::1] first,
              Py_ssize_t n, Py_ssize_t W, long long step0,
              double tau_start, double dt, double v, double beta,
              double noise_scale, double phi_thresh,
              double[::1] draws, sig_half, double[::1] phi_buf,
              pdot_buf=None):
    """See _pykernel.run_chunk for the contract."""
    cdef double hh = 0.5 * dt
    cdef double six = dt / 6.0
    cdef bint has_sig = sig_half is not None
    cdef double[::1] sig = sig_half if has_sig else _EMPTY
    cdef bint rec_p = pdot_buf is not None
    cdef double[::1] pbuf = pdot_buf if rec_p else _EMPTY
    cdef Py_ssize_t k, w, base
    cdef double jd, tau0, tauh, tau1, s0, sh, s1, F0, Fh, F1
    cdef double f, p, k1f, k1p, f2, p2, k2f, k2p, f3, p3, k3f, k3p
    cdef double f4, p4, k4f, k4p, fn, pn

    with nogil:
        for k in range(n):
            jd = <double> (step0 + k)
            tau0 = tau_start + jd * dt
            tauh = tau0 + hh
            tau1 = tau0 + dt
            if has_sig:
                s0 = sig[2 * k]
                sh = sig[2 * k + 1]
                s1 = sig[2 * k + 2]
            else:
                s0 = 0.0
                sh = 0.0
                s1 = 0.0
            F0 = v * tau0 + s0
            Fh = v * tauh + sh
            F1 = v * tau1 + s1
            base = k * W
            for w in range(W):
                f = phi[w]
                p = pdot[w]
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
                pn = p + six * (k1p + 2.0 * (k2p + k3p) + k4p) + noise_scale * draws[base + w]
                phi[w] = fn
                pdot[w] = pn
                phi_buf[base + w] = fn
                if rec_p:
                    pbuf[base + w] = pn
        for w in range(W):
            first[w] = -1
            for k in range(n):
                if not (phi_buf[k * W + w] < phi_thresh):
                    first[w] = k
                    break
