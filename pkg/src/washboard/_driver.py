"""Chunked batch driver over the integrator kernel.

Runs up to LANES trials in lockstep on a shared time grid.  Each trial
owns a counter-based RNG stream keyed by (master_seed, trial_index),
so results are independent of lane placement, chunk size, worker
count, and execution order.  A finished lane keeps integrating until
the whole batch completes (the skew between lanes is a small fraction
of a sweep), but it stops consuming its RNG stream and its later
states are ignored.
"""

from __future__ import annotations

import math

import numpy as np

from . import backend
from .params import SwitchCriterion, SwitchEvent
from .signals import sample_half_grid

CHUNK = 16384
LANES = 8


class TrialNumericsError(RuntimeError):
    """A trial produced a non-finite state (dt too large for the drive).

    Carries the (master_seed, trial_index) pair needed to replay the
    offending trial.
    """

    def __init__(self, master_seed, trial_index, step):
        self.master_seed = master_seed
        self.trial_index = trial_index
        self.step = step
        super().__init__(
            f"trial {trial_index} (master_seed {master_seed}) became "
            f"non-finite at step {step}; reduce dt or the drive amplitude")


def trial_generator(master_seed: int, trial_index: int) -> np.random.Generator:
    """Independent per-trial stream from a counter-based generator."""
    key = np.array([master_seed, trial_index], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def run_batch(params, protocol, init, signal, master_seed, trial_indices,
              criterion: SwitchCriterion | None = None,
              record_stride: int | None = None):
    """Integrate one batch of trials to switch or censoring cap.

    Returns (events, trajectory, lane_steps): events align with
    trial_indices; trajectory is an (m, 4) array of decimated
    (tau, phi, phi_dot, i_b) rows for the first lane when record_stride
    is set, else None; lane_steps counts integrated lane-steps for
    telemetry.
    """
    if criterion is None:
        criterion = SwitchCriterion.for_protocol(protocol)
    W = len(trial_indices)
    v = protocol.v
    dt = protocol.dt
    tau_start = protocol.tau_start
    n_cap = protocol.n_steps_cap
    noise_scale = math.sqrt(params.noise_intensity * dt)
    phi_thresh = criterion.phi_threshold

    gens = [trial_generator(master_seed, t) for t in trial_indices]
    phi = np.full(W, init.phi0, dtype=np.float64)
    pdot = np.full(W, init.phi_dot0, dtype=np.float64)
    first = np.empty(W, dtype=np.int64)
    draws = np.zeros((CHUNK, W), dtype=np.float64)
    phi_buf = np.empty(CHUNK * W, dtype=np.float64)
    pdot_buf = np.empty(CHUNK * W, dtype=np.float64) if record_stride else None

    switch_step = np.full(W, -1, dtype=np.int64)
    traj_rows = []
    if record_stride:
        traj_rows.append((tau_start, float(phi[0]), float(pdot[0]), v * tau_start))
    lane_steps = 0

    step0 = 0
    while step0 < n_cap and (switch_step < 0).any():
        n = min(CHUNK, n_cap - step0)
        for w in range(W):
            if switch_step[w] < 0:
                draws[:n, w] = gens[w].standard_normal(n)
        sig_half = sample_half_grid(signal, tau_start, step0, n, dt)
        backend.run_chunk(phi, pdot, first, n, W, step0, tau_start, dt, v,
                          params.beta, noise_scale, phi_thresh,
                          draws[:n].reshape(-1), sig_half, phi_buf,
                          pdot_buf)
        lane_steps += n * W
        for w in range(W):
            if switch_step[w] < 0 and first[w] >= 0:
                k = int(first[w])
                if not math.isfinite(phi_buf[k * W + w]):
                    raise TrialNumericsError(master_seed, trial_indices[w],
                                             step0 + k)
                switch_step[w] = step0 + k
        if record_stride:
            limit = n if switch_step[0] < 0 else int(switch_step[0]) - step0 + 1
            for k in range(n):
                j = step0 + k
                if k < limit and (j + 1) % record_stride == 0:
                    tau = tau_start + (j + 1) * dt
                    traj_rows.append((tau, float(phi_buf[k * W]),
                                      float(pdot_buf[k * W]), v * tau))
        step0 += n

    events = []
    tau_end = tau_start + n_cap * dt
    for w, t in enumerate(trial_indices):
        if switch_step[w] >= 0:
            tau_sw = tau_start + (int(switch_step[w]) + 1) * dt
            events.append(SwitchEvent(i_sw=v * tau_sw, tau_sw=tau_sw,
                                      switched=True, seed=(master_seed, t)))
        else:
            events.append(SwitchEvent(i_sw=v * tau_end, tau_sw=tau_end,
                                      switched=False, seed=(master_seed, t)))
    trajectory = np.array(traj_rows) if record_stride else None
    return events, trajectory, lane_steps
