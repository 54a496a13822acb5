"""Command line front end: ``pogs <subcommand> ...``.

Exit codes: 0 success, 2 usage, 3 data or parse error, 4 numerical failure
(non-finite input, or non-convergence under ``--strict``).
"""
import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .exceptions import DomainError, MissingMetadataError, ParseError, PogsError
from .io import (
    SCHEMA_VERSION,
    SignalFile,
    read_labels,
    read_signal,
    write_json,
    write_labels,
    write_signal,
)
from .metrics import TransientLabels, rmse, roc, threshold_at_detection
from .noise import estimate_sigma, lambda_for_pattern, lambda_from_table
from .pattern import contiguous_pattern, parse_bitstring, periodic_pattern
from .penalty import Family, Penalty, max_noncvx_a
from .signalgen import RNG_NAME, SimConfig, simulate, simulate_compound
from .solver import SolverConfig, denoise
from .spectral import MFS_MOTOR_ORDERS, BearingSpec, envelope_spectrum, fault_frequencies, magnitude_spectrum


EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERICAL = 4


class CliError(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def _positive(text):
    v = float(text)
    if not v > 0 or not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"must be a positive number, got {text}")
    return v


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text}")
    return v


def _global_flags(suppress):
    p = argparse.ArgumentParser(add_help=False)
    default = argparse.SUPPRESS if suppress else None
    p.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS if suppress else False,
                   help="do not print the run report")
    p.add_argument("--report", metavar="PATH", default=default, help="also write the run report here")
    return p


def _add_pattern_flags(p, multi_freq=False):
    g = p.add_argument_group("group pattern (choose one mode)")
    if multi_freq:
        g.add_argument("--fault-freq", type=_positive, action="append", required=True,
                       help="fault frequency in Hz; repeat for each fault")
    else:
        g.add_argument("--fault-freq", type=_positive, help="fault frequency in Hz (periodic mode)")
        g.add_argument("--group-size", type=_positive_int, help="contiguous group length K")
        g.add_argument("--pattern", help="explicit bitstring, e.g. 1100110")
    g.add_argument("--n1", type=_positive_int, default=2, help="ones per period (default 2)")
    g.add_argument("--m", type=int, default=4, help="periods per group (default 4)")


def _add_solver_flags(p):
    lam = p.add_mutually_exclusive_group(required=True)
    lam.add_argument("--lambda", dest="lam", type=float, help="regularization weight (> 0)")
    lam.add_argument("--auto-lambda", action="store_true",
                     help="lambda = table multiplier x MAD noise estimate of the input")
    p.add_argument("--fs", type=_positive, help="sampling rate in Hz (overrides the file header)")
    p.add_argument("--penalty", choices=[f.value for f in Family], default="atan")
    p.add_argument("--a", type=float, help="non-convexity parameter (default safety/(K1*lambda))")
    p.add_argument("--safety", type=float, default=0.99, help="fraction of the convexity bound (default 0.99)")
    p.add_argument("--max-iters", type=_positive_int, default=200)
    p.add_argument("--tol", type=_positive, default=1e-6)
    p.add_argument("--support-eps", type=float, default=1e-10)
    p.add_argument("--strict", action="store_true", help="exit 4 if the solver does not converge")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="pogs",
        parents=[_global_flags(False)],
        description="Periodic group-sparse denoising of vibration signals.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    common = _global_flags(True)

    p = sub.add_parser("simulate", parents=[common], help="generate a labeled synthetic fault signal")
    d = SimConfig()
    p.add_argument("--seed", type=int, default=d.seed)
    p.add_argument("--fs", type=_positive, default=d.fs)
    p.add_argument("--duration", type=_positive, default=d.duration)
    p.add_argument("--fault-freq", type=_positive, action="append",
                   help=f"fault frequency in Hz (default {d.fault_freq}); repeat for compound faults")
    p.add_argument("--first-fault-time", type=float, default=d.first_fault_time)
    p.add_argument("--n-faults", type=int, default=d.n_faults)
    p.add_argument("--transient-len", type=_positive_int, default=d.transient_len)
    p.add_argument("--max-components", type=_positive_int, default=d.max_components)
    p.add_argument("--noise-sigma", type=float, default=d.noise_sigma)
    p.add_argument("--out-clean", required=True)
    p.add_argument("--out-noisy", required=True)
    p.add_argument("--out-labels", required=True)

    p = sub.add_parser("denoise", parents=[common], help="denoise one signal")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    _add_pattern_flags(p)
    _add_solver_flags(p)

    p = sub.add_parser("compound", parents=[common], help="one denoise run per fault frequency")
    p.add_argument("--input", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--jobs", type=_positive_int, default=1, help="concurrent runs")
    p.add_argument("--smooth-width", type=_positive_int, default=5)
    _add_pattern_flags(p, multi_freq=True)
    _add_solver_flags(p)

    p = sub.add_parser("estimate-noise", parents=[common], help="robust noise level and implied lambda")
    p.add_argument("--input", required=True)
    p.add_argument("--m", type=int)
    p.add_argument("--n1", type=int)

    p = sub.add_parser("evaluate", parents=[common], help="RMSE and ROC of an estimate")
    p.add_argument("--estimate", required=True)
    p.add_argument("--clean", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--n-thresholds", type=int, default=256)

    p = sub.add_parser("spectrum", parents=[common], help="Fourier or envelope spectrum as CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--fs", type=_positive)
    p.add_argument("--mode", choices=["fourier", "envelope"], default="envelope")
    p.add_argument("--out", required=True)
    p.add_argument("--smooth-width", type=_positive_int, default=5)

    p = sub.add_parser("fault-freqs", parents=[common], help="bearing characteristic frequencies")
    speed = p.add_mutually_exclusive_group(required=True)
    speed.add_argument("--rpm", type=_positive)
    speed.add_argument("--shaft-freq", type=_positive)
    p.add_argument("--orders", help="e.g. ftf=0.384,bpfo=3.066,bpfi=4.932,bsf=2.03 (default: MFS motor bearing)")
    return parser


def _parse_orders(text):
    if not text:
        return dict(MFS_MOTOR_ORDERS)
    orders = {}
    for item in text.split(","):
        name, sep, val = item.partition("=")
        if not sep:
            raise CliError(EXIT_USAGE, f"bad order spec {item!r}; expected name=value")
        try:
            orders[name.strip().upper()] = float(val)
        except ValueError:
            raise CliError(EXIT_USAGE, f"bad order value {val!r}") from None
    return orders


def _write_spectrum_csv(spec, path, width):
    smoothed = spec.smoothed(width)
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("freq_hz,magnitude,smoothed\n")
        for f, m, s in zip(spec.freqs.tolist(), spec.mags.tolist(), smoothed.tolist()):
            fh.write(f"{f!r},{m!r},{s!r}\n")


def _resolve_lambda(args, y, pattern):
    """Return (lam, sigma_hat or None)."""
    if args.auto_lambda:
        sigma = estimate_sigma(y)
        if sigma == 0:
            raise CliError(EXIT_DATA, "estimated noise level is zero; pass --lambda")
        try:
            return lambda_for_pattern(sigma, pattern), sigma
        except DomainError as exc:
            raise CliError(EXIT_USAGE, str(exc)) from None
    return args.lam, None


def _build_config(args, lam, pattern):
    a = args.a if args.a is not None else max_noncvx_a(pattern.k1, lam, args.safety)
    return SolverConfig(
        lam=lam,
        penalty=Penalty(args.penalty, a),
        pattern=pattern,
        max_iters=args.max_iters,
        tol=args.tol,
        support_eps=args.support_eps,
    )


def _convexity_status(cfg):
    if cfg.strictly_convex:
        return "strictly_convex"
    if cfg.convex:
        return "boundary"
    return "violated"


def _run_solver(y, cfg, strict):
    if not np.all(np.isfinite(y)):
        raise CliError(EXIT_NUMERICAL, "input contains NaN or infinite samples")
    res = denoise(y, cfg)
    if strict and not res.converged:
        raise CliError(EXIT_NUMERICAL, f"solver did not converge within {cfg.max_iters} iterations")
    return res


def _solver_section(cfg, res, sigma):
    return {
        "lambda": cfg.lam,
        "sigma_hat": sigma,
        "penalty": cfg.penalty.family.value,
        "a": cfg.penalty.effective_a,
        "a_bound": cfg.a_bound,
        "convexity": _convexity_status(cfg),
        "pattern": cfg.pattern.to_dict(),
        "tol": cfg.tol,
        "max_iters": cfg.max_iters,
        "support_eps": cfg.support_eps,
        "iterations": res.iters,
        "final_objective": res.final_objective,
        "converged": res.converged,
        "nonzero_samples": int(np.count_nonzero(res.x)),
    }


def _read_input_signal(path, fs, require_fs):
    sig = read_signal(path, fs_override=fs, require_fs=require_fs)
    if sig.samples.size == 0:
        raise CliError(EXIT_DATA, f"{path}: no samples")
    return sig


def cmd_simulate(args):
    freqs = args.fault_freq or [SimConfig().fault_freq]
    if args.noise_sigma < 0:
        raise CliError(EXIT_USAGE, "--noise-sigma must be >= 0")
    # compound trains are capped individually; validate the base config
    # against the fastest train, which fits whenever any of them does
    cfg = SimConfig(
        fs=args.fs,
        duration=args.duration,
        fault_freq=freqs[0] if len(freqs) == 1 else max(freqs),
        first_fault_time=args.first_fault_time,
        n_faults=args.n_faults,
        transient_len=args.transient_len,
        max_components=args.max_components,
        noise_sigma=args.noise_sigma,
        seed=args.seed,
    )
    sig = simulate(cfg) if len(freqs) == 1 else simulate_compound(cfg, freqs)
    labels = TransientLabels(sig.transient_intervals, sig.clean.size)
    sim_meta = cfg.to_dict()
    sim_meta["fault_freqs"] = list(freqs)
    write_signal(SignalFile(sig.clean, cfg.fs, "clean"), args.out_clean)
    write_signal(SignalFile(sig.noisy, cfg.fs, "noisy"), args.out_noisy)
    write_labels(labels, args.out_labels, fs=cfg.fs, sim_config=sim_meta, rng=RNG_NAME)
    return {
        "sim_config": sim_meta,
        "rng": RNG_NAME,
        "n_samples": int(sig.clean.size),
        "n_transients": len(labels.intervals),
        "outputs": {"clean": args.out_clean, "noisy": args.out_noisy, "labels": args.out_labels},
    }


def _pattern_from_args(args, fs, fault_freq=None):
    if fault_freq is None:
        modes = [args.fault_freq is not None, args.group_size is not None, args.pattern is not None]
        if sum(modes) != 1:
            raise CliError(EXIT_USAGE, "choose exactly one of --fault-freq, --group-size, --pattern")
        fault_freq = args.fault_freq
        if args.group_size is not None:
            return contiguous_pattern(args.group_size)
        if args.pattern is not None:
            return parse_bitstring(args.pattern)
    if fs is None:
        raise CliError(EXIT_USAGE, "periodic patterns need a sampling rate: add --fs or a '# fs=' header")
    return periodic_pattern(fs, fault_freq, args.n1, args.m)


def _check_lambda(args):
    if args.lam is not None and not (args.lam > 0 and math.isfinite(args.lam)):
        raise CliError(EXIT_USAGE, f"--lambda must be positive, got {args.lam}")


def cmd_denoise(args):
    _check_lambda(args)
    sig = _read_input_signal(args.input, args.fs, require_fs=False)
    pattern = _pattern_from_args(args, sig.fs)
    lam, sigma = _resolve_lambda(args, sig.samples, pattern)
    cfg = _build_config(args, lam, pattern)
    res = _run_solver(sig.samples, cfg, args.strict)
    write_signal(SignalFile(res.x, sig.fs, "denoised"), args.output)
    return {"solver": _solver_section(cfg, res, sigma), "input": args.input, "output": args.output}


def _freq_tag(freq):
    return f"{freq:g}Hz"


def cmd_compound(args):
    _check_lambda(args)
    sig = _read_input_signal(args.input, args.fs, require_fs=True)
    os.makedirs(args.out_dir, exist_ok=True)
    plans = []
    for freq in args.fault_freq:
        pattern = _pattern_from_args(args, sig.fs, fault_freq=freq)
        lam, sigma = _resolve_lambda(args, sig.samples, pattern)
        plans.append((freq, _build_config(args, lam, pattern), sigma))

    def run(plan):
        freq, cfg, sigma = plan
        res = _run_solver(sig.samples, cfg, args.strict)
        tag = _freq_tag(freq)
        x_path = os.path.join(args.out_dir, f"x_{tag}.csv")
        env_path = os.path.join(args.out_dir, f"envelope_{tag}.csv")
        write_signal(SignalFile(res.x, sig.fs, f"denoised_{tag}"), x_path)
        spec = envelope_spectrum(res.x, sig.fs)
        _write_spectrum_csv(spec, env_path, args.smooth_width)
        peak_f, peak_m = spec.peak(fmin=freq / 2.0)
        return {
            "fault_freq": freq,
            "solver": _solver_section(cfg, res, sigma),
            "envelope_peak_hz": peak_f,
            "envelope_peak_magnitude": peak_m,
            "magnitude_at_fault_freq": float(spec.mags[spec.bin_of(freq)]),
            "outputs": {"estimate": x_path, "envelope_spectrum": env_path},
        }

    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            runs = list(pool.map(run, plans))
    else:
        runs = [run(p) for p in plans]
    return {"input": args.input, "fs": sig.fs, "runs": runs}


def cmd_estimate_noise(args):
    sig = _read_input_signal(args.input, None, require_fs=False)
    sigma = estimate_sigma(sig.samples)
    out = {"input": args.input, "sigma_hat": sigma}
    if (args.m is None) != (args.n1 is None):
        raise CliError(EXIT_USAGE, "--m and --n1 go together")
    if args.m is not None:
        try:
            out["lambda"] = lambda_from_table(sigma, args.m, args.n1)
        except DomainError as exc:
            raise CliError(EXIT_USAGE, str(exc)) from None
        out["m"], out["n1"] = args.m, args.n1
    return out


def cmd_evaluate(args):
    est = _read_input_signal(args.estimate, None, require_fs=False)
    clean = _read_input_signal(args.clean, None, require_fs=False)
    labels, _ = read_labels(args.labels)
    if est.samples.size != clean.samples.size or est.samples.size != labels.n_samples:
        raise CliError(EXIT_DATA, "estimate, clean signal and labels disagree on length")
    curve = roc(est.samples, labels, args.n_thresholds)
    result = {
        "rmse": rmse(est.samples, clean.samples),
        "auc": curve.auc,
        "threshold_at_detection_0.9": threshold_at_detection(curve, 0.9),
        "roc": curve.to_dict(),
        "estimate": args.estimate,
        "clean": args.clean,
        "labels": args.labels,
    }
    write_json(_document("evaluate", args, result), args.out)
    return {k: v for k, v in result.items() if k != "roc"}


def cmd_spectrum(args):
    sig = _read_input_signal(args.input, args.fs, require_fs=True)
    fn = envelope_spectrum if args.mode == "envelope" else magnitude_spectrum
    spec = fn(sig.samples, sig.fs)
    _write_spectrum_csv(spec, args.out, args.smooth_width)
    peak_f, peak_m = spec.peak(fmin=spec.freqs[1])
    return {"input": args.input, "mode": args.mode, "fs": sig.fs, "bins": int(spec.freqs.size),
            "peak_hz": peak_f, "peak_magnitude": peak_m, "output": args.out}


def cmd_fault_freqs(args):
    shaft = args.shaft_freq if args.shaft_freq is not None else args.rpm / 60.0
    spec = BearingSpec(shaft, _parse_orders(args.orders))
    return {"shaft_freq_hz": shaft, "orders": spec.orders, "fault_freqs_hz": fault_frequencies(spec)}


COMMANDS = {
    "simulate": cmd_simulate,
    "denoise": cmd_denoise,
    "compound": cmd_compound,
    "estimate-noise": cmd_estimate_noise,
    "evaluate": cmd_evaluate,
    "spectrum": cmd_spectrum,
    "fault-freqs": cmd_fault_freqs,
}


def _document(command, args, result):
    echo = {k: v for k, v in sorted(vars(args).items()) if k not in ("quiet", "report")}
    return {"schema_version": SCHEMA_VERSION, "kind": "report", "command": command, "args": echo, "result": result}


def _error(exc):
    print(f"pogs: error: {exc}", file=sys.stderr)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result = COMMANDS[args.command](args)
    except CliError as exc:
        if exc.code == EXIT_USAGE:
            parser.print_usage(sys.stderr)
        _error(exc)
        return exc.code
    except (ParseError, MissingMetadataError, OSError) as exc:
        _error(exc)
        return EXIT_DATA
    except PogsError as exc:
        parser.print_usage(sys.stderr)
        _error(exc)
        return EXIT_USAGE
    report = _document(args.command, args, result)
    if args.report:
        write_json(report, args.report)
    if not args.quiet:
        json.dump(report, sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
