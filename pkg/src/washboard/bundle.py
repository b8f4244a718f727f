"""Run bundles: execute a configured campaign and write its products.

A bundle is a directory of plain-text products (summary.txt plus
campaign-specific data files).  Everything except telemetry.txt is a
deterministic function of the configuration, so reruns of the same
config produce byte-identical bundles regardless of worker count or
kernel backend.  The directory is staged under a temporary name and
renamed into place only when complete.
"""

from __future__ import annotations

import os
import re
import shutil
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import campaigns
from .backend import BACKEND_NAME
from .campaigns import resolve_signal
from .config import RunConfig
from .ensemble import EnsembleTelemetry, run_ensemble, save_sample
from .escape import fd_escape_rate, histogram
from .metrics import detect, roc_curve
from .params import JunctionParams


@dataclass
class BundleResult:
    """Outcome of one run: where it landed and what it decided."""

    path: Path
    decision: bool | None
    telemetry: EnsembleTelemetry


def _fmt(x) -> str:
    return repr(float(x))


def _safe(label: str) -> str:
    return re.sub(r"[^A-Za-z0-9._=+-]", "_", label) or "base"


def _stamp(config) -> list:
    return [f"# config_digest = {config.digest}",
            f"# master_seed = {config.master_seed}"]


def _write_xy(config, path: Path, x, y, columns: str) -> None:
    lines = _stamp(config) + [f"# columns: {columns}"]
    lines += [f"{_fmt(a)} {_fmt(b)}" for a, b in zip(x, y)]
    path.write_text("\n".join(lines) + "\n")


def _write_histogram(config, path: Path, hist, label: str) -> None:
    centers = 0.5 * (hist.bin_edges[:-1] + hist.bin_edges[1:])
    lines = ["# washboard histogram", f"# label = {label}"] + _stamp(config)
    lines += [
        f"# n = {hist.n}",
        "# bin_edges = " + " ".join(_fmt(e) for e in hist.bin_edges),
        "# columns: bin_center (I_c units) density (1/I_c units)",
    ]
    lines += [f"{_fmt(c)} {_fmt(d)}" for c, d in zip(centers, hist.densities)]
    path.write_text("\n".join(lines) + "\n")


def _sample_products(config, tmp, sample, label, lines):
    """Write raw sample, histogram, and escape rate for one ensemble."""
    tag = _safe(label)
    if config.save_raw and config.n_trials <= 100000:
        save_sample(sample, tmp / f"sample_{tag}.txt")
    values = sample.values
    lines.append(f"sample.{tag}.n_switched = {values.size}")
    lines.append(f"sample.{tag}.censored = {sample.censored_count}")
    if values.size:
        lines.append(f"sample.{tag}.mean = {_fmt(values.mean())}")
        lines.append(f"sample.{tag}.std = {_fmt(values.std())}")
    bins = config.campaign.bin_count or None
    try:
        hist = histogram(sample, bin_count=bins)
        _write_histogram(config, tmp / f"histogram_{tag}.txt", hist, label)
    except ValueError as exc:
        lines.append(f"sample.{tag}.histogram = unavailable ({exc})")
        return
    try:
        rate = fd_escape_rate(sample, config.protocol.v, bin_count=bins)
        _write_xy(config, tmp / f"rate_{tag}.txt", rate.i, rate.gamma,
                  "i (I_c units) gamma (1/tau units)")
    except ValueError as exc:
        lines.append(f"sample.{tag}.rate = unavailable ({exc})")


def _scd_variants(config):
    spec = config.campaign
    if not spec.vary:
        yield "base", config.params, config.protocol, config.init
        return
    for value in spec.values:
        label = f"{spec.vary}={value:g}"
        if spec.vary == "v":
            yield (label, config.params,
                   replace(config.protocol, v=value), config.init)
        elif spec.vary == "phi0":
            yield (label, config.params, config.protocol,
                   replace(config.init, phi0=value))
        else:
            params = JunctionParams.from_noise_intensity(
                config.params.beta, value)
            yield label, params, config.protocol, config.init


def _run_scd(config, tmp, workers, telemetry, lines):
    for label, params, protocol, init in _scd_variants(config):
        signal = resolve_signal(config.signal, protocol)
        sample = run_ensemble(params, protocol, init, signal,
                              config.n_trials, config.master_seed,
                              label=label, config_digest=config.digest,
                              workers=workers, criterion=config.criterion,
                              telemetry=telemetry)
        _sample_products(config, tmp, sample, label, lines)
    return None


def _pair_products(config, tmp, off, on, lines):
    result = roc_curve(off, on)
    _write_xy(config, tmp / "roc.txt", result.points[:, 0],
              result.points[:, 1], "fpr tpr")
    lines.append(f"roc.auc_raw = {_fmt(result.auc_raw)}")
    lines.append(f"roc.r_auc = {_fmt(result.r_auc)}")
    lines.append(f"roc.d_kc = {_fmt(result.d_kc)}")
    word = "positive" if result.decision else "negative"
    lines.append(f"roc.decision = {word}")
    return result.decision


def _run_roc(config, tmp, workers, telemetry, lines):
    signal = resolve_signal(config.signal, config.protocol)
    samples = {}
    for label, sig in (("off", None), ("on", signal)):
        samples[label] = run_ensemble(
            config.params, config.protocol, config.init, sig,
            config.n_trials, config.master_seed, label=label,
            config_digest=config.digest, workers=workers,
            criterion=config.criterion, telemetry=telemetry)
        _sample_products(config, tmp, samples[label], label, lines)
    return _pair_products(config, tmp, samples["off"], samples["on"], lines)


def _run_thermal(config, tmp, workers, telemetry, lines):
    spec = config.campaign
    if spec.kappa_values:
        r = []
        for kappa in spec.kappa_values:
            proto = replace(config.protocol, v=kappa * config.params.beta)
            r.append(campaigns.thermal_robustness(
                config.params, proto, config.init, spec.d1, spec.d2,
                n_trials=config.n_trials, master_seed=config.master_seed,
                workers=workers, telemetry=telemetry))
        _write_xy(config, tmp / "sweep.txt", spec.kappa_values, r,
                  "kappa r_auc")
        best = int(np.argmax(r))
        lines.append(f"sweep.axis = kappa")
        lines.append(f"sweep.best_kappa = {_fmt(spec.kappa_values[best])}")
        lines.append(f"sweep.best_r_auc = {_fmt(r[best])}")
        return None
    samples = []
    for d in (spec.d1, spec.d2):
        params = JunctionParams.from_noise_intensity(config.params.beta, d)
        label = f"D={d:g}"
        sample = run_ensemble(params, config.protocol, config.init, None,
                              config.n_trials, config.master_seed,
                              label=label, config_digest=config.digest,
                              workers=workers, criterion=config.criterion,
                              telemetry=telemetry)
        _sample_products(config, tmp, sample, label, lines)
        samples.append(sample)
    return _pair_products(config, tmp, samples[0], samples[1], lines)


def _run_sweep(config, tmp, workers, telemetry, lines):
    spec = config.campaign
    common = dict(n_trials=config.n_trials, master_seed=config.master_seed,
                  workers=workers, telemetry=telemetry)
    if spec.type == "sweep-kappa":
        result = campaigns.sweep_kappa(config.params, config.protocol,
                                       config.init, spec.kappa_values,
                                       config.signal, **common)
    else:
        result = campaigns.sweep_phi0(config.params, config.protocol,
                                      config.init, spec.phi0_values,
                                      config.signal, **common)
    _write_xy(config, tmp / "sweep.txt", result.axis_values,
              result.r_auc_values, f"{result.axis_name} r_auc")
    lines.append(f"sweep.axis = {result.axis_name}")
    best = result.axis_values[result.best_index]
    lines.append(f"sweep.best_{result.axis_name} = {_fmt(best)}")
    lines.append(f"sweep.best_r_auc = {_fmt(result.best_value)}")
    return None


def _run_amplitude(config, tmp, workers, telemetry, lines):
    spec = config.campaign
    history = []
    threshold = campaigns.min_detectable_amplitude(
        config.params, config.protocol, config.init,
        (spec.bracket_lo, spec.bracket_hi), n_trials=config.n_trials,
        master_seed=config.master_seed, target=spec.target,
        omega_mw=spec.omega_mw, rel_tol=spec.rel_tol, workers=workers,
        telemetry=telemetry, history=history)
    amps = [a for a, _ in history]
    rs = [r for _, r in history]
    _write_xy(config, tmp / "history.txt", amps, rs, "i_mw r_auc")
    lines.append(f"threshold.i_mw = {_fmt(threshold)}")
    lines.append(f"threshold.target = {_fmt(spec.target)}")
    lines.append(f"threshold.evaluations = {len(history)}")
    return None


def _run_photon(config, tmp, workers, telemetry, lines):
    spec = config.campaign
    response = campaigns.photon_response(
        config.params, config.protocol, config.init, spec.n_ph_values,
        config.signal, n_trials=config.n_trials,
        master_seed=config.master_seed, linear_tol=spec.linear_tol,
        workers=workers, telemetry=telemetry)
    _write_xy(config, tmp / "response.txt", response.n_ph_values,
              response.r_auc_values, "n_ph r_auc")
    lines.append(f"response.linear_range_end = {_fmt(response.linear_range_end)}")
    lines.append(f"response.n_ph_max = {_fmt(response.n_ph_max)}")
    decision = detect(float(response.r_auc_values[0]))
    word = "positive" if decision else "negative"
    lines.append(f"response.decision_at_min = {word}")
    return decision


_RUNNERS = {
    "scd": _run_scd,
    "roc": _run_roc,
    "thermal-robustness": _run_thermal,
    "sweep-kappa": _run_sweep,
    "sweep-phi0": _run_sweep,
    "min-amplitude": _run_amplitude,
    "photon-response": _run_photon,
}


def run(config: RunConfig, *, workers: int = 1,
        force: bool = False) -> BundleResult:
    """Execute the configured campaign and write its bundle.

    Refuses to overwrite an existing bundle unless force is given.
    Returns the bundle path plus the campaign's detection decision
    (None when the campaign has no detection semantics).
    """
    final = config.output_dir
    if final.exists() and not force:
        raise FileExistsError(
            f"output bundle already exists: {final} (rerun with force)")
    final.parent.mkdir(parents=True, exist_ok=True)
    tmp = final.parent / f".{final.name}.tmp"
    if tmp.exists():
        shutil.rmtree(tmp)
    tmp.mkdir()

    telemetry = EnsembleTelemetry()
    lines = [
        "# washboard run summary",
        f"config = {config.source.name}",
        f"digest = {config.digest}",
        f"campaign = {config.campaign.type}",
        f"n_trials = {config.n_trials}",
        f"master_seed = {config.master_seed}",
    ]
    try:
        decision = _RUNNERS[config.campaign.type](config, tmp, workers,
                                                  telemetry, lines)
        (tmp / "summary.txt").write_text("\n".join(lines) + "\n")
        (tmp / "telemetry.txt").write_text(
            f"# config_digest = {config.digest}\n"
            f"# master_seed = {config.master_seed}\n"
            f"backend = {BACKEND_NAME}\n"
            f"workers = {workers}\n"
            f"wall_seconds = {telemetry.wall_seconds:.3f}\n"
            f"lane_steps = {telemetry.lane_steps}\n")
    except BaseException:
        shutil.rmtree(tmp, ignore_errors=True)
        raise
    if final.exists():
        shutil.rmtree(final)
    os.replace(tmp, final)
    return BundleResult(path=final, decision=decision, telemetry=telemetry)


_PLOT_SOURCES = {
    "histogram": ("histogram_*.txt", "bin_center density"),
    "rate": ("rate_*.txt", "i gamma"),
    "roc": ("roc.txt", "fpr tpr"),
    "sweep": ("sweep.txt", None),
    "response": ("response.txt", "n_ph r_auc"),
    "history": ("history.txt", "i_mw r_auc"),
}


def _data_rows(path: Path):
    rows = []
    stamp = []
    header = None
    for line in path.read_text().splitlines():
        if line.startswith("#"):
            if line.startswith("# columns:"):
                header = line[len("# columns:"):].strip()
            elif line.startswith(("# config_digest", "# master_seed")):
                stamp.append(line)
            continue
        if line.strip():
            rows.append(line)
    return header, stamp, rows


def emit_plot_data(bundle_dir, which: str) -> list:
    """Extract two-column plot files from a finished bundle.

    which names a product family (histogram, rate, roc, sweep,
    response, history).  Writes plot_<name>.txt next to the source
    files and returns the paths written.  Raises ValueError when the
    bundle holds no such product.
    """
    bundle_dir = Path(bundle_dir)
    if not (bundle_dir / "summary.txt").is_file():
        raise ValueError(f"not a run bundle (no summary.txt): {bundle_dir}")
    if which not in _PLOT_SOURCES:
        known = ", ".join(sorted(_PLOT_SOURCES))
        raise ValueError(f"unknown plot kind {which!r} (expected {known})")
    pattern, fallback = _PLOT_SOURCES[which]
    sources = sorted(bundle_dir.glob(pattern))
    if not sources:
        raise ValueError(f"bundle has no {which} data: {bundle_dir}")
    written = []
    for source in sources:
        header, stamp, rows = _data_rows(source)
        columns = header or fallback or "x y"
        out = bundle_dir / f"plot_{source.name}"
        out.write_text("\n".join(stamp + [f"# columns: {columns}"] + rows)
                       + "\n")
        written.append(out)
    return written
