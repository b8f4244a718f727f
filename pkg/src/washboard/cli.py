"""Command-line interface.

Subcommands:

  run           execute a config and write its bundle
  validate      parse a config and print the resolved run plan
  emit-plot     extract two-column plot files from a finished bundle
  replay-trial  re-integrate one trial and print or save its trajectory

Exit codes: 0 success, 2 configuration error, 3 runtime failure,
4 campaign finished with a negative detection decision.
"""

from __future__ import annotations

import argparse
import os
import sys

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3
EXIT_NEGATIVE = 4


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="washboard",
        description="Stochastic washboard-potential escape simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute a config into a bundle")
    p_run.add_argument("config", help="INI configuration file")
    p_run.add_argument("--workers", type=int, default=os.cpu_count() or 1,
                       help="worker threads per ensemble "
                            "(default: machine parallelism)")
    p_run.add_argument("--full", action="store_true",
                       help="use full_n_trials instead of n_trials")
    p_run.add_argument("--force", action="store_true",
                       help="overwrite an existing bundle")

    p_val = sub.add_parser("validate", help="check a config and print it")
    p_val.add_argument("config", help="INI configuration file")
    p_val.add_argument("--full", action="store_true",
                       help="resolve the full_n_trials ensemble size")

    p_emit = sub.add_parser("emit-plot",
                            help="write plot_*.txt files from a bundle")
    p_emit.add_argument("bundle", help="bundle directory written by run")
    p_emit.add_argument("--which", required=True,
                        help="product family: histogram, rate, roc, sweep, "
                             "response, or history")

    p_rep = sub.add_parser("replay-trial",
                           help="re-integrate one trial deterministically")
    p_rep.add_argument("config", help="INI configuration file")
    p_rep.add_argument("--trial", type=int, required=True,
                       help="trial index to replay")
    p_rep.add_argument("--signal", choices=("on", "off"), default="on",
                       help="include the configured signal (default on)")
    p_rep.add_argument("--stride", type=int, default=100,
                       help="record every Nth step (default 100)")
    p_rep.add_argument("--output", default="",
                       help="write the trajectory to this file")
    return parser


def _describe(config, out) -> None:
    p, proto = config.params, config.protocol
    cam = config.campaign
    print(f"config: {config.source}", file=out)
    print(f"digest: {config.digest}", file=out)
    print(f"junction: beta={p.beta:g} theta={p.theta:g} "
          f"noise_intensity={p.noise_intensity:g}", file=out)
    print(f"protocol: v={proto.v:g} kappa={proto.kappa(p):g} "
          f"i_start={proto.i_start:g} i_cap={proto.i_cap:g} "
          f"dt={proto.dt:g}", file=out)
    print(f"switch: dphi_sw={config.criterion.dphi_sw:g} "
          f"phi_ref={config.criterion.phi_ref:g}", file=out)
    print(f"initial: phi0={config.init.phi0:g} "
          f"phi_dot0={config.init.phi_dot0:g}", file=out)
    tau_d = " tau_d=auto" if config.tau_d_auto else ""
    print(f"signal: kind={config.signal_kind}{tau_d}", file=out)
    print(f"ensemble: n_trials={config.n_trials} "
          f"master_seed={config.master_seed}", file=out)
    fields = []
    for key in sorted(vars(cam)):
        if key == "type":
            continue
        value = getattr(cam, key)
        if value not in ("", (), 0, 0.0) or key in ("target",):
            fields.append(f"{key}={value}")
    print(f"campaign: type={cam.type} " + " ".join(fields), file=out)
    print(f"output: {config.output_dir}", file=out)


def _cmd_run(args) -> int:
    from . import bundle
    from .config import load_config
    config = load_config(args.config, full=args.full)
    if args.workers < 1:
        print("error: --workers must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    result = bundle.run(config, workers=args.workers, force=args.force)
    products = sorted(p.name for p in result.path.iterdir())
    print(f"bundle: {result.path}")
    print(f"products: {', '.join(products)}")
    if result.decision is None:
        return EXIT_OK
    print(f"decision: {'positive' if result.decision else 'negative'}")
    return EXIT_OK if result.decision else EXIT_NEGATIVE


def _cmd_validate(args) -> int:
    from .config import load_config
    config = load_config(args.config, full=args.full)
    _describe(config, sys.stdout)
    print("ok")
    return EXIT_OK


def _cmd_emit_plot(args) -> int:
    from .bundle import emit_plot_data
    written = emit_plot_data(args.bundle, args.which)
    for path in written:
        print(path)
    return EXIT_OK


def _cmd_replay_trial(args) -> int:
    from .campaigns import resolve_signal
    from .config import load_config
    from .dynamics import run_trial_recorded
    config = load_config(args.config)
    if args.trial < 0 or args.trial >= config.n_trials:
        print(f"error: --trial must be in [0, {config.n_trials})",
              file=sys.stderr)
        return EXIT_CONFIG
    if args.stride < 1:
        print("error: --stride must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    signal = None
    if args.signal == "on":
        signal = resolve_signal(config.signal, config.protocol)
    event, trajectory = run_trial_recorded(
        config.params, config.protocol, config.init, signal=signal,
        seed=config.master_seed, trial_index=args.trial,
        criterion=config.criterion, stride=args.stride)
    state = "switched" if event.switched else "censored"
    print(f"trial {args.trial} ({state}): i_sw={event.i_sw!r} "
          f"tau_sw={event.tau_sw!r}")
    if args.output:
        lines = ["# columns: tau phi phi_dot i_b"]
        lines += [" ".join(repr(float(v)) for v in row)
                  for row in trajectory]
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
        print(f"trajectory: {args.output} ({len(trajectory)} rows)")
    return EXIT_OK


def main(argv=None) -> int:
    from .config import ConfigError
    args = _build_parser().parse_args(argv)
    handlers = {
        "run": _cmd_run,
        "validate": _cmd_validate,
        "emit-plot": _cmd_emit_plot,
        "replay-trial": _cmd_replay_trial,
    }
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
