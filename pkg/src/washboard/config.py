"""INI experiment configuration: parsing, validation, canonical digest.

A config file fully determines a run.  Sections:

  [junction]   beta, and exactly one of theta | noise_intensity
  [protocol]   exactly one of v | kappa, plus i_start, i_cap, dt, dphi_sw
  [initial]    phi0, phi_dot0
  [signal]     kind = none | cw | pulse, plus kind-specific fields
  [ensemble]   n_trials, master_seed, full_n_trials
  [campaign]   type plus type-specific fields (optional section)
  [output]     directory, save_raw

The digest is a sha256 over the resolved values of every section except
[output], so two configs that resolve to the same physics and sampling
plan share a digest regardless of formatting or comments.
"""

from __future__ import annotations

import configparser
import hashlib
import math
import re
from dataclasses import dataclass
from pathlib import Path

from .params import (BiasProtocol, InitialCondition, JunctionParams,
                     SwitchCriterion)
from .signals import ContinuousWave, GaussianPulse


class ConfigError(ValueError):
    """Configuration file is missing, malformed, or inconsistent."""


CAMPAIGN_TYPES = ("scd", "roc", "sweep-kappa", "sweep-phi0", "min-amplitude",
                  "photon-response", "thermal-robustness")

_KNOWN_KEYS = {
    "junction": {"beta", "theta", "noise_intensity"},
    "protocol": {"v", "kappa", "i_start", "i_cap", "dt", "dphi_sw"},
    "initial": {"phi0", "phi_dot0"},
    "signal": {"kind", "i_mw", "omega_mw", "n_ph", "i_ph", "omega_ph",
               "tau_ph", "tau_d"},
    "ensemble": {"n_trials", "master_seed", "full_n_trials"},
    "campaign": {"type", "vary", "values", "kappa_values", "phi0_values",
                 "n_ph_values", "bracket_lo", "bracket_hi", "target",
                 "rel_tol", "omega_mw", "linear_tol", "d1", "d2",
                 "bin_count"},
    "output": {"directory", "save_raw"},
}

_CAMPAIGN_KEYS = {
    "scd": {"vary", "values", "bin_count"},
    "roc": {"bin_count"},
    "thermal-robustness": {"d1", "d2", "kappa_values", "bin_count"},
    "sweep-kappa": {"kappa_values"},
    "sweep-phi0": {"phi0_values"},
    "min-amplitude": {"bracket_lo", "bracket_hi", "target", "rel_tol",
                      "omega_mw"},
    "photon-response": {"n_ph_values", "linear_tol"},
}


@dataclass(frozen=True)
class CampaignSpec:
    """Resolved [campaign] section."""

    type: str = "scd"
    vary: str = ""
    values: tuple = ()
    kappa_values: tuple = ()
    phi0_values: tuple = ()
    n_ph_values: tuple = ()
    bracket_lo: float = 0.0
    bracket_hi: float = 0.0
    target: float = 0.7
    rel_tol: float = 0.05
    omega_mw: float = 1.0
    linear_tol: float = 0.02
    d1: float = 0.0
    d2: float = 0.0
    bin_count: int = 0


@dataclass(frozen=True)
class RunConfig:
    """Everything a run needs, resolved and validated."""

    params: JunctionParams
    protocol: BiasProtocol
    init: InitialCondition
    criterion: SwitchCriterion
    signal: object
    signal_kind: str
    tau_d_auto: bool
    n_trials: int
    full_n_trials: int
    master_seed: int
    campaign: CampaignSpec
    output_dir: Path
    save_raw: bool
    digest: str
    source: Path


def _float_list(raw: str, where: str) -> tuple:
    tokens = [t for t in re.split(r"[,\s]+", raw.strip()) if t]
    if not tokens:
        raise ConfigError(f"{where}: expected a list of numbers")
    try:
        return tuple(float(t) for t in tokens)
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from None


class _Section:
    """One INI section with typed, tracked access."""

    def __init__(self, cp: configparser.ConfigParser, name: str):
        self.name = name
        self.raw = dict(cp[name]) if cp.has_section(name) else {}
        unknown = set(self.raw) - _KNOWN_KEYS[name]
        if unknown:
            keys = ", ".join(sorted(unknown))
            raise ConfigError(f"{name}: unknown key(s) {keys}")

    def has(self, key):
        return key in self.raw

    def _convert(self, key, cast, default, required):
        if key not in self.raw:
            if required:
                raise ConfigError(f"{self.name}.{key}: required")
            return default
        try:
            return cast(self.raw[key])
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"{self.name}.{key}: {exc}") from None

    def get_float(self, key, default=None, required=False):
        return self._convert(key, float, default, required)

    def get_int(self, key, default=None, required=False):
        def cast(s):
            value = int(s, 0)
            return value
        return self._convert(key, cast, default, required)

    def get_str(self, key, default=None, required=False):
        return self._convert(key, str, default, required)

    def get_bool(self, key, default=None):
        def cast(s):
            states = configparser.ConfigParser.BOOLEAN_STATES
            try:
                return states[s.lower()]
            except KeyError:
                raise ValueError(f"not a boolean: {s!r}") from None
        return self._convert(key, cast, default, False)

    def get_list(self, key, default=()):
        if key not in self.raw:
            return default
        return _float_list(self.raw[key], f"{self.name}.{key}")


def _build_signal(sec: _Section, protocol: BiasProtocol):
    """Return (signal-or-factory, kind, tau_d_auto, digest_items)."""
    kind = sec.get_str("kind", "none").lower()
    items = [("signal.kind", kind)]
    if kind == "none":
        extras = set(sec.raw) - {"kind"}
        if extras:
            raise ConfigError(
                f"signal: kind=none takes no other keys, got "
                f"{', '.join(sorted(extras))}")
        return None, kind, False, items
    if kind == "cw":
        allowed = {"kind", "i_mw", "omega_mw"}
        extras = set(sec.raw) - allowed
        if extras:
            raise ConfigError(
                f"signal: kind=cw does not take "
                f"{', '.join(sorted(extras))}")
        signal = ContinuousWave(i_mw=sec.get_float("i_mw", required=True),
                                omega_mw=sec.get_float("omega_mw", 1.0))
        items += [("signal.i_mw", signal.i_mw),
                  ("signal.omega_mw", signal.omega_mw)]
        return signal, kind, False, items
    if kind == "pulse":
        extras = set(sec.raw) - {"kind", "n_ph", "i_ph", "omega_ph",
                                 "tau_ph", "tau_d"}
        if extras:
            raise ConfigError(
                f"signal: kind=pulse does not take "
                f"{', '.join(sorted(extras))}")
        n_ph = sec.get_float("n_ph", required=True)
        i_ph = sec.get_float("i_ph", required=True)
        omega_ph = sec.get_float("omega_ph", 1.0)
        tau_ph = sec.get_float("tau_ph", required=True)
        items += [("signal.n_ph", n_ph), ("signal.i_ph", i_ph),
                  ("signal.omega_ph", omega_ph), ("signal.tau_ph", tau_ph)]
        if sec.has("tau_d"):
            tau_d = sec.get_float("tau_d")
            items.append(("signal.tau_d", tau_d))
            signal = GaussianPulse(n_ph=n_ph, i_ph=i_ph, omega_ph=omega_ph,
                                   tau_ph=tau_ph, tau_d=tau_d)
            return signal, kind, False, items
        items.append(("signal.tau_d", "auto"))

        def factory(proto: BiasProtocol) -> GaussianPulse:
            return GaussianPulse(n_ph=n_ph, i_ph=i_ph, omega_ph=omega_ph,
                                 tau_ph=tau_ph, tau_d=0.5 / proto.v)
        return factory, kind, True, items
    raise ConfigError(f"signal.kind: must be none, cw, or pulse, got {kind!r}")


def _build_campaign(sec: _Section):
    ctype = sec.get_str("type", "scd").lower()
    if ctype not in CAMPAIGN_TYPES:
        raise ConfigError(
            f"campaign.type: must be one of {', '.join(CAMPAIGN_TYPES)}, "
            f"got {ctype!r}")
    extras = set(sec.raw) - {"type"} - _CAMPAIGN_KEYS[ctype]
    if extras:
        raise ConfigError(
            f"campaign: type={ctype} does not take "
            f"{', '.join(sorted(extras))}")
    spec = CampaignSpec(
        type=ctype,
        vary=sec.get_str("vary", "").lower(),
        values=sec.get_list("values"),
        kappa_values=sec.get_list("kappa_values"),
        phi0_values=sec.get_list("phi0_values"),
        n_ph_values=sec.get_list("n_ph_values"),
        bracket_lo=sec.get_float("bracket_lo", 0.0),
        bracket_hi=sec.get_float("bracket_hi", 0.0),
        target=sec.get_float("target", 0.7),
        rel_tol=sec.get_float("rel_tol", 0.05),
        omega_mw=sec.get_float("omega_mw", 1.0),
        linear_tol=sec.get_float("linear_tol", 0.02),
        d1=sec.get_float("d1", 0.0),
        d2=sec.get_float("d2", 0.0),
        bin_count=sec.get_int("bin_count", 0),
    )
    if ctype == "scd":
        if spec.vary not in ("", "v", "phi0", "noise_intensity"):
            raise ConfigError(
                "campaign.vary: must be v, phi0, or noise_intensity, "
                f"got {spec.vary!r}")
        if bool(spec.vary) != bool(spec.values):
            raise ConfigError(
                "campaign: vary and values must be given together")
    if ctype == "thermal-robustness":
        if not (spec.d1 >= 0.0 and spec.d2 >= 0.0):
            raise ConfigError("campaign.d1/d2: must be >= 0")
        if spec.d1 == spec.d2:
            raise ConfigError("campaign.d1/d2: must differ")
    if ctype == "min-amplitude":
        if not 0.0 <= spec.bracket_lo < spec.bracket_hi:
            raise ConfigError(
                "campaign.bracket_lo/bracket_hi: need 0 <= lo < hi, got "
                f"{spec.bracket_lo}, {spec.bracket_hi}")
        if not 0.5 <= spec.target <= 1.0:
            raise ConfigError(
                f"campaign.target: must be in [0.5, 1], got {spec.target}")
    if ctype == "photon-response" and not spec.n_ph_values:
        raise ConfigError("campaign.n_ph_values: required")
    if ctype == "sweep-kappa" and not spec.kappa_values:
        raise ConfigError("campaign.kappa_values: required")
    if ctype == "sweep-phi0" and not spec.phi0_values:
        raise ConfigError("campaign.phi0_values: required")
    return spec


def _campaign_digest_items(spec: CampaignSpec):
    items = [("campaign.type", spec.type)]
    for key in _CAMPAIGN_KEYS[spec.type]:
        items.append((f"campaign.{key}", getattr(spec, key)))
    return sorted(items)


def load_config(path, *, full: bool = False) -> RunConfig:
    """Parse and validate an INI file into a RunConfig.

    With full=True the ensemble size is taken from full_n_trials.
    Raises ConfigError on any structural or semantic problem.
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        with open(path, encoding="utf-8") as fh:
            cp.read_file(fh)
    except (configparser.Error, UnicodeDecodeError) as exc:
        raise ConfigError(f"{path}: {exc}") from None
    known = set(_KNOWN_KEYS)
    unknown = set(cp.sections()) - known
    if unknown:
        raise ConfigError(f"unknown section(s): {', '.join(sorted(unknown))}")

    sections = {name: _Section(cp, name) for name in _KNOWN_KEYS}
    jn, pr = sections["junction"], sections["protocol"]
    ini, sig = sections["initial"], sections["signal"]
    ens, cam = sections["ensemble"], sections["campaign"]
    out = sections["output"]

    beta = jn.get_float("beta", required=True)
    if jn.has("theta") == jn.has("noise_intensity"):
        raise ConfigError(
            "junction: give exactly one of theta | noise_intensity")
    try:
        if jn.has("theta"):
            params = JunctionParams(beta=beta, theta=jn.get_float("theta"))
        else:
            params = JunctionParams.from_noise_intensity(
                beta, jn.get_float("noise_intensity"))

        if pr.has("v") == pr.has("kappa"):
            raise ConfigError("protocol: give exactly one of v | kappa")
        if pr.has("v"):
            v = pr.get_float("v")
        else:
            v = pr.get_float("kappa") * beta
        protocol = BiasProtocol(v=v,
                                i_start=pr.get_float("i_start", 0.0),
                                i_cap=pr.get_float("i_cap", 1.5),
                                dt=pr.get_float("dt", 0.01))
        dphi_sw = pr.get_float("dphi_sw", 4.0 * math.pi)
        criterion = SwitchCriterion.for_protocol(protocol, dphi_sw=dphi_sw)
        init = InitialCondition(phi0=ini.get_float("phi0", 0.0),
                                phi_dot0=ini.get_float("phi_dot0", 0.0))
        signal, kind, tau_d_auto, signal_items = _build_signal(sig, protocol)
        campaign = _build_campaign(cam)
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from None

    allowed_kinds = {
        "scd": ("none", "cw", "pulse"),
        "roc": ("cw", "pulse"),
        "sweep-kappa": ("cw", "pulse"),
        "sweep-phi0": ("cw", "pulse"),
        "thermal-robustness": ("none",),
        "min-amplitude": ("none",),
        "photon-response": ("pulse",),
    }[campaign.type]
    if kind not in allowed_kinds:
        raise ConfigError(
            f"campaign.type={campaign.type} requires signal.kind in "
            f"{allowed_kinds}, got {kind!r}")

    n_trials = ens.get_int("n_trials", required=True)
    full_n_trials = ens.get_int("full_n_trials", 10000)
    master_seed = ens.get_int("master_seed", required=True)
    if n_trials <= 0 or full_n_trials <= 0:
        raise ConfigError("ensemble.n_trials: must be positive")
    if not 0 <= master_seed < 2 ** 64:
        raise ConfigError("ensemble.master_seed: must fit in uint64")
    resolved_n = full_n_trials if full else n_trials

    directory = out.get_str("directory", "")
    if directory:
        output_dir = Path(directory)
        if not output_dir.is_absolute():
            output_dir = path.parent / output_dir
    else:
        output_dir = path.parent / "runs" / path.stem
    save_raw = out.get_bool("save_raw", True)

    items = [
        ("junction.beta", params.beta),
        ("junction.theta", params.theta),
        ("protocol.v", protocol.v),
        ("protocol.i_start", protocol.i_start),
        ("protocol.i_cap", protocol.i_cap),
        ("protocol.dt", protocol.dt),
        ("protocol.dphi_sw", dphi_sw),
        ("initial.phi0", init.phi0),
        ("initial.phi_dot0", init.phi_dot0),
    ]
    items += signal_items
    items += [("ensemble.n_trials", resolved_n),
              ("ensemble.master_seed", master_seed)]
    items += _campaign_digest_items(campaign)
    canonical = "\n".join(f"{k}={v!r}" for k, v in items)
    digest = hashlib.sha256(canonical.encode()).hexdigest()[:16]

    return RunConfig(params=params, protocol=protocol, init=init,
                     criterion=criterion, signal=signal, signal_kind=kind,
                     tau_d_auto=tau_d_auto, n_trials=resolved_n,
                     full_n_trials=full_n_trials, master_seed=master_seed,
                     campaign=campaign, output_dir=output_dir,
                     save_raw=save_raw, digest=digest, source=path)
