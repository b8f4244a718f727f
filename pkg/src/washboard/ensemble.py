"""Seeded trial ensembles producing switching-current samples.

Trials are grouped into fixed batches of LANES consecutive indices;
batches are independent jobs safe to run on any worker pool.  Because
every trial's noise stream is keyed by (master_seed, trial_index), the
assembled sample is byte-identical for any worker count.
"""

from __future__ import annotations

import concurrent.futures
import time
from dataclasses import dataclass, field

import numpy as np

from . import backend
from ._driver import LANES, run_batch
from .params import (BiasProtocol, InitialCondition, JunctionParams,
                     SwitchCriterion, SwitchEvent)
from .signals import SignalSpec


@dataclass
class ScdSample:
    """Switching-current sample from one ensemble.

    values holds i_sw of the non-censored trials in trial-index order;
    censored trials are counted, never silently dropped.
    """

    values: np.ndarray
    censored_count: int
    label: str
    config_digest: str
    master_seed: int
    n_trials: int

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if len(self.values) + self.censored_count != self.n_trials:
            raise ValueError(
                "sample bookkeeping: len(values) + censored_count must "
                f"equal n_trials, got {len(self.values)} + "
                f"{self.censored_count} != {self.n_trials}")


@dataclass
class EnsembleTelemetry:
    """Wall-clock and work accounting for one ensemble run."""

    wall_seconds: float = 0.0
    lane_steps: int = 0
    backend: str = field(default_factory=lambda: backend.BACKEND_NAME)

    def add(self, other: "EnsembleTelemetry"):
        self.wall_seconds += other.wall_seconds
        self.lane_steps += other.lane_steps


def run_ensemble(params: JunctionParams, protocol: BiasProtocol,
                 init: InitialCondition, signal: SignalSpec,
                 n_trials: int, master_seed: int, *,
                 label: str = "", config_digest: str = "",
                 workers: int = 1,
                 criterion: SwitchCriterion | None = None,
                 telemetry: EnsembleTelemetry | None = None,
                 return_events: bool = False):
    """Run n_trials independent trials and collect their i_sw values.

    The result is a deterministic function of the configuration and
    master_seed alone.  Numerical failures propagate with the offending
    trial's seed; censored trials are counted in censored_count.
    """
    if n_trials < 1:
        raise ValueError(f"ensemble.n_trials: n_trials >= 1 required, got {n_trials}")
    if not 0 <= master_seed < 2 ** 64:
        raise ValueError(
            f"ensemble.master_seed: uint64 range required, got {master_seed}")
    if criterion is None:
        criterion = SwitchCriterion.for_protocol(protocol)

    batches = [list(range(b, min(b + LANES, n_trials)))
               for b in range(0, n_trials, LANES)]

    t0 = time.monotonic()
    lane_steps = 0
    events: list[SwitchEvent | None] = [None] * n_trials

    def job(indices):
        return run_batch(params, protocol, init, signal, master_seed,
                         indices, criterion)

    if workers <= 1 or len(batches) == 1:
        results = map(job, batches)
    else:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(job, batches))

    for batch, (batch_events, _, steps) in zip(batches, results):
        lane_steps += steps
        for idx, event in zip(batch, batch_events):
            events[idx] = event

    if telemetry is not None:
        telemetry.add(EnsembleTelemetry(wall_seconds=time.monotonic() - t0,
                                        lane_steps=lane_steps))

    values = np.array([e.i_sw for e in events if e.switched], dtype=np.float64)
    censored = sum(1 for e in events if not e.switched)
    sample = ScdSample(values=values, censored_count=censored, label=label,
                       config_digest=config_digest, master_seed=master_seed,
                       n_trials=n_trials)
    if return_events:
        return sample, events
    return sample


def save_sample(sample: ScdSample, path):
    """Serialize a sample to columnar text, one i_sw per row."""
    lines = [
        f"# label = {sample.label}",
        f"# config_digest = {sample.config_digest}",
        f"# master_seed = {sample.master_seed}",
        f"# n_trials = {sample.n_trials}",
        f"# censored_count = {sample.censored_count}",
    ]
    lines.extend(repr(v) for v in sample.values.tolist())
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def load_sample(path) -> ScdSample:
    """Inverse of save_sample."""
    header = {}
    values = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, _, value = line[1:].partition("=")
                header[key.strip()] = value.strip()
            else:
                values.append(float(line))
    return ScdSample(values=np.array(values, dtype=np.float64),
                     censored_count=int(header["censored_count"]),
                     label=header["label"],
                     config_digest=header["config_digest"],
                     master_seed=int(header["master_seed"]),
                     n_trials=int(header["n_trials"]))
