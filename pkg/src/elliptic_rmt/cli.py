"""Command-line entry point for all experiments.

Exit codes: 0 success, 1 usage/configuration error, 2 numerical failure.
Every subcommand prints exactly one JSON line to stdout; file outputs are
byte-stable given identical arguments and seed.

Seed resolution order: --seed flag, config file, ELLIPTIC_RMT_SEED
environment variable, then the package default DEFAULT_SEED.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .concentration import (
    WeightedSumSpec,
    estimate_concentration,
    petrov_bound,
    sample_weighted_sum,
    weighted_truncated_moments,
)
from .elliptic import EllipticLaw, elliptic_report
from .ensemble import EnsembleSpec, _stream, ensemble_from_toml_dict, sample_matrix
from .errors import (
    DegenerateSubspaceError,
    EllipticRmtError,
    EnumerationLimitError,
    HypothesisViolatedError,
    InsufficientDataError,
    InternalInvariantError,
    InvalidSpecError,
    InvalidVectorError,
    NumericalFailureError,
    PoleError,
    SingularMinorError,
    UnsupportedLawError,
)
from .geometry import ClassParams, classify, spread_set
from .potential import log_potential_pair, min_sv_tail_experiment
from .report import render_eigen_scatter
from .spectra import (
    EigenSpectrum,
    eigenvalues,
    read_eigenvalues_csv,
    singular_values,
    write_eigenvalues_csv,
    write_singular_values_csv,
)

# Default seed for reproducible runs; override with --seed, a config file,
# or the ELLIPTIC_RMT_SEED environment variable.
DEFAULT_SEED = 0xE11171C
ENV_SEED = "ELLIPTIC_RMT_SEED"

_GEOMETRY_STREAM = 8

_USAGE_ERRORS = (InvalidSpecError, InvalidVectorError, UnsupportedLawError,
                 EnumerationLimitError, InsufficientDataError)
_NUMERICAL_ERRORS = (NumericalFailureError, PoleError, InternalInvariantError,
                     HypothesisViolatedError, DegenerateSubspaceError, SingularMinorError)

_COMMAND_KEYS = {
    "sample": {"format"},
    "spectrum": {"svals_out", "plot"},
    "elliptic-check": {"eig_csv", "plot"},
    "sn-tail": {"trials", "B", "threads"},
    "logpot": {"z_re", "z_im"},
    "concentration": {"lambda", "n_samples"},
    "geometry": {"delta", "r", "tau", "count"},
}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _seed_literal(text: str) -> int:
    try:
        return int(text, 0)
    except ValueError:
        raise _UsageError(f"cannot parse seed {text!r} as an integer") from None


def _add_ensemble_args(p, shift: bool = True):
    p.add_argument("--n", type=int, default=None, help="matrix dimension")
    p.add_argument("--rho", type=float, default=None,
                   help="correlation of off-diagonal pairs, in [-1, 1] (default 0)")
    p.add_argument("--family", choices=["gaussian", "rademacher"], default=None,
                   help="off-diagonal pair family (default gaussian)")
    p.add_argument("--diag-family", choices=["gaussian", "rademacher"], default=None,
                   help="diagonal family (default: same as --family)")
    if shift:
        p.add_argument("--shift-kind", choices=["zero", "scaled-identity"], default=None,
                       help="deterministic shift (default: scaled-identity when "
                            "--shift-scale is given, else zero)")
        p.add_argument("--shift-scale", type=float, default=None,
                       help="z in the shift z*sqrt(n)*I")
        p.add_argument("--shift-K", type=float, default=None,
                       help="norm budget constant K in ||M|| <= K*n^Q (default 1)")
        p.add_argument("--shift-Q", type=float, default=None,
                       help="norm budget exponent Q (default 0.5)")


def _add_common_args(p):
    p.add_argument("--seed", type=_seed_literal, default=None,
                   help=f"64-bit seed (default 0x{DEFAULT_SEED:X}, or {ENV_SEED})")
    p.add_argument("--config", default=None, help="TOML config file; flags override it")
    p.add_argument("--out", default=None, help="output file path")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="elliptic-rmt",
                     description="Experiments on random matrices with correlated "
                                 "off-diagonal pairs: spectra, the elliptic limit law, "
                                 "least-singular-value tails, log potentials, and "
                                 "concentration diagnostics.")
    sub = parser.add_subparsers(dest="command", metavar="subcommand")

    p = sub.add_parser("sample", help="draw one matrix and write its entries")
    _add_ensemble_args(p)
    _add_common_args(p)
    p.add_argument("--format", choices=["csv", "json"], default=None,
                   help="entry file format (default csv)")

    p = sub.add_parser("spectrum", help="eigenvalues (and optionally singular values) "
                                        "of one scaled sample")
    _add_ensemble_args(p)
    _add_common_args(p)
    p.add_argument("--svals-out", default=None, help="also write singular values here")
    p.add_argument("--plot", default=None, help="render a scatter + ellipse PNG here")

    p = sub.add_parser("elliptic-check", help="goodness of fit of a spectrum against "
                                              "the limiting ellipse")
    _add_ensemble_args(p, shift=False)
    _add_common_args(p)
    p.add_argument("--eig-csv", default=None,
                   help="read eigenvalues from this re,im CSV instead of sampling")
    p.add_argument("--plot", default=None, help="render a scatter + ellipse PNG here")

    p = sub.add_parser("sn-tail", help="Monte Carlo tail of the least singular value "
                                       "of shifted samples")
    _add_ensemble_args(p)
    _add_common_args(p)
    p.add_argument("--trials", type=int, default=None, help="number of matrices (default 100)")
    p.add_argument("--B", type=float, default=None,
                   help="threshold exponent: count s_n <= n^-B (default 3)")
    p.add_argument("--threads", type=int, default=None, help="worker cap (default 1)")

    p = sub.add_parser("logpot", help="log potential of one sample by the eigenvalue "
                                      "and singular-value routes")
    _add_ensemble_args(p)
    _add_common_args(p)
    p.add_argument("--z-re", type=float, default=None, help="Re z (default 0.5)")
    p.add_argument("--z-im", type=float, default=None, help="Im z (default 0)")

    p = sub.add_parser("concentration", help="empirical Levy concentration of a "
                                             "weighted sum, with the applicable bound")
    _add_ensemble_args(p, shift=False)
    _add_common_args(p)
    p.add_argument("--lambda", type=float, default=None, dest="lam",
                   help="window half-width (default 0.1)")
    p.add_argument("--n-samples", type=int, default=None,
                   help="Monte Carlo sample count (default 100000)")

    p = sub.add_parser("geometry", help="classify random unit vectors and check "
                                        "spread-set extraction")
    _add_common_args(p)
    p.add_argument("--n", type=int, default=None, help="vector dimension (default 200)")
    p.add_argument("--delta", type=float, default=None, help="sparsity fraction (default 0.1)")
    p.add_argument("--r", type=float, default=None, help="compressibility radius (default 0.2)")
    p.add_argument("--tau", type=float, default=None, help="spread-set radius (default 0.2)")
    p.add_argument("--count", type=int, default=None, help="number of vectors (default 100)")

    return parser


def _load_config(path: str) -> dict:
    try:
        with open(path, "rb") as fh:
            cfg = tomllib.load(fh)
    except FileNotFoundError:
        raise _UsageError(f"config file not found: {path}") from None
    except tomllib.TOMLDecodeError as exc:
        raise _UsageError(f"invalid TOML in {path}: {exc}") from None
    unknown = set(cfg) - {"ensemble", "command", "seed", "output"}
    if unknown:
        raise _UsageError(f"unknown config keys: {sorted(unknown)}")
    out_sec = cfg.get("output", {})
    unknown = set(out_sec) - {"path", "format"}
    if unknown:
        raise _UsageError(f"unknown [output] keys: {sorted(unknown)}")
    if "format" in out_sec and out_sec["format"] not in ("csv", "json"):
        raise _UsageError(f"[output] format must be csv or json, got {out_sec['format']!r}")
    return cfg


def _command_cfg(cfg: dict, command: str) -> dict:
    section = cfg.get("command", {})
    unknown = set(section) - _COMMAND_KEYS[command]
    if unknown:
        raise _UsageError(f"unknown [command] keys for {command}: {sorted(unknown)}")
    return section


def _pick(flag_value, cmd_cfg: dict, key: str, default):
    if flag_value is not None:
        return flag_value
    if key in cmd_cfg:
        return cmd_cfg[key]
    return default


def _resolve_seed(args, cfg: dict) -> int:
    if args.seed is not None:
        return int(args.seed)
    if "seed" in cfg:
        return int(cfg["seed"])
    env = os.environ.get(ENV_SEED)
    if env is not None and env != "":
        return _seed_literal(env)
    return DEFAULT_SEED


def _resolve_out(args, cfg: dict):
    if args.out is not None:
        return args.out
    return cfg.get("output", {}).get("path")


def _resolve_ensemble(args, cfg: dict, shift: bool = True) -> EnsembleSpec:
    section = dict(cfg.get("ensemble", {}))
    shift_sec = dict(section.get("shift", {}))
    if args.n is not None:
        section["n"] = args.n
    if args.rho is not None:
        section["rho"] = args.rho
    if args.family is not None:
        section["family"] = args.family
    if args.diag_family is not None:
        section["diag_family"] = args.diag_family
    if shift:
        if args.shift_kind is not None:
            shift_sec["kind"] = args.shift_kind
        if args.shift_scale is not None:
            shift_sec["scale"] = args.shift_scale
        if args.shift_K is not None:
            shift_sec["K"] = args.shift_K
        if args.shift_Q is not None:
            shift_sec["Q"] = args.shift_Q
    if "kind" not in shift_sec:
        shift_sec["kind"] = "scaled-identity" if shift_sec.get("scale") else "zero"
    section["shift"] = shift_sec
    section.setdefault("family", "gaussian")
    section.setdefault("rho", 0.0)
    if "n" not in section:
        raise _UsageError("--n is required (or [ensemble] n in the config file)")
    return ensemble_from_toml_dict(section)


def _write_json(obj, path) -> None:
    with open(path, "w") as fh:
        fh.write(json.dumps(obj, sort_keys=True, indent=2) + "\n")


def _cmd_sample(args, cfg):
    cmd = _command_cfg(cfg, "sample")
    spec = _resolve_ensemble(args, cfg)
    seed = _resolve_seed(args, cfg)
    out = _resolve_out(args, cfg)
    fmt = _pick(args.format, cmd, "format", cfg.get("output", {}).get("format", "csv"))
    sample = sample_matrix(spec, seed)
    if out is not None:
        if fmt == "csv":
            with open(out, "w", newline="") as fh:
                for row in sample.entries:
                    fh.write(",".join(repr(float(v)) for v in row) + "\n")
        else:
            _write_json({"schema_version": 1, "n": spec.n, "seed": seed,
                         "entries": sample.entries.tolist()}, out)
    return {"command": "sample", "schema_version": 1, "n": spec.n, "seed": seed,
            "out": out, "format": fmt if out else None,
            "frobenius_norm": float(np.linalg.norm(sample.entries))}


def _cmd_spectrum(args, cfg):
    cmd = _command_cfg(cfg, "spectrum")
    spec = _resolve_ensemble(args, cfg)
    seed = _resolve_seed(args, cfg)
    out = _resolve_out(args, cfg)
    svals_out = _pick(args.svals_out, cmd, "svals_out", None)
    plot = _pick(args.plot, cmd, "plot", None)
    if out is None:
        raise _UsageError("spectrum requires --out (or [output] path) for the eigenvalue CSV")
    sample = sample_matrix(spec, seed)
    eig = eigenvalues(sample.entries, seed=seed)
    write_eigenvalues_csv(eig, out)
    if svals_out is not None:
        write_singular_values_csv(singular_values(sample.entries, seed=seed), svals_out)
    if plot is not None:
        render_eigen_scatter(eig.values.real, eig.values.imag, spec.pair_dist.rho, plot,
                             dilation=1.05)
    return {"command": "spectrum", "schema_version": 1, "n": spec.n, "seed": seed,
            "rho": spec.pair_dist.rho, "out": out, "svals_out": svals_out, "plot": plot,
            "spectral_radius": float(np.abs(eig.values).max())}


def _cmd_elliptic_check(args, cfg):
    cmd = _command_cfg(cfg, "elliptic-check")
    seed = _resolve_seed(args, cfg)
    out = _resolve_out(args, cfg)
    eig_csv = _pick(args.eig_csv, cmd, "eig_csv", None)
    plot = _pick(args.plot, cmd, "plot", None)
    if eig_csv is not None:
        if args.rho is None and "rho" not in cfg.get("ensemble", {}):
            raise _UsageError("--rho is required with --eig-csv")
        rho = args.rho if args.rho is not None else float(cfg["ensemble"]["rho"])
        values = read_eigenvalues_csv(eig_csv)
        spectrum = EigenSpectrum(values=values, n=values.size)
    else:
        spec = _resolve_ensemble(args, cfg, shift=False)
        rho = spec.pair_dist.rho
        sample = sample_matrix(spec, seed)
        spectrum = eigenvalues(sample.entries, seed=seed)
    law = EllipticLaw(rho)
    rep = elliptic_report(spectrum, law)
    if out is not None:
        _write_json(rep, out)
    if plot is not None:
        render_eigen_scatter(spectrum.values.real, spectrum.values.imag, rho, plot,
                             dilation=1.05)
    return rep


def _cmd_sn_tail(args, cfg):
    cmd = _command_cfg(cfg, "sn-tail")
    spec = _resolve_ensemble(args, cfg)
    seed = _resolve_seed(args, cfg)
    out = _resolve_out(args, cfg)
    trials = int(_pick(args.trials, cmd, "trials", 100))
    B = float(_pick(args.B, cmd, "B", 3.0))
    threads = int(_pick(args.threads, cmd, "threads", 1))
    report = min_sv_tail_experiment(spec, trials=trials, B=B, root_seed=seed,
                                    threads=threads)
    if out is not None:
        _write_json(report.to_dict(), out)
    return {"command": "sn-tail", "schema_version": 1, "n": report.n,
            "trials": report.trials, "B": report.threshold_exponent,
            "threshold": report.threshold, "hits": report.hits,
            "empirical_prob": report.empirical_prob, "failures": len(report.failures),
            "seed": seed, "out": out}


def _cmd_logpot(args, cfg):
    cmd = _command_cfg(cfg, "logpot")
    spec = _resolve_ensemble(args, cfg)
    seed = _resolve_seed(args, cfg)
    out = _resolve_out(args, cfg)
    z_re = float(_pick(args.z_re, cmd, "z_re", 0.5))
    z_im = float(_pick(args.z_im, cmd, "z_im", 0.0))
    sample = sample_matrix(spec, seed)
    result = log_potential_pair(sample.entries, complex(z_re, z_im), seed=seed)
    summary = {"command": "logpot", "schema_version": 1, "n": result.n, "seed": seed,
               "z_re": z_re, "z_im": z_im, "u_eigs": result.u_eigs,
               "u_svals": result.u_svals, "abs_diff": result.abs_diff}
    if out is not None:
        _write_json(summary, out)
    return summary


def _cmd_concentration(args, cfg):
    cmd = _command_cfg(cfg, "concentration")
    spec = _resolve_ensemble(args, cfg, shift=False)
    seed = _resolve_seed(args, cfg)
    out = _resolve_out(args, cfg)
    lam = float(_pick(args.lam, cmd, "lambda", 0.1))
    n_samples = int(_pick(args.n_samples, cmd, "n_samples", 100_000))
    n = spec.n
    weights = np.full(n, 1.0 / np.sqrt(n))
    sums = sample_weighted_sum(WeightedSumSpec(a=weights, pair_dist=spec.pair_dist),
                               n_samples, seed=seed)
    est = estimate_concentration(sums, lam)
    bound = petrov_bound(weights**2, weighted_truncated_moments(spec.pair_dist, weights, lam),
                         lam)
    rep = {"schema_version": 1, "lambda": est.lam, "q_hat": est.q_hat,
           "n_samples": est.n_samples, "bound": bound,
           "bound_applicable": bound is not None}
    if out is not None:
        _write_json(rep, out)
    return rep


def _cmd_geometry(args, cfg):
    cmd = _command_cfg(cfg, "geometry")
    seed = _resolve_seed(args, cfg)
    out = _resolve_out(args, cfg)
    n = int(_pick(args.n, cmd, "n", 200))
    delta = float(_pick(args.delta, cmd, "delta", 0.1))
    r = float(_pick(args.r, cmd, "r", 0.2))
    tau = float(_pick(args.tau, cmd, "tau", 0.2))
    count = int(_pick(args.count, cmd, "count", 100))
    if count < 1:
        raise _UsageError(f"--count must be >= 1, got {count}")
    params = ClassParams(delta=delta, r=r)
    rng = _stream(seed, _GEOMETRY_STREAM)
    counts = {"sparse": 0, "compressible": 0, "incompressible": 0}
    spread_checked = 0
    spread_ok = 0
    for _ in range(count):
        x = rng.standard_normal(n)
        x /= np.linalg.norm(x)
        cls = classify(x, params)
        counts[cls.label] += 1
        if cls.label == "incompressible" and cls.distance > tau:
            spread_checked += 1
            sset = spread_set(x, delta, tau)  # raises on any violated conclusion
            spread_ok += 1
            del sset
    rep = {"command": "geometry", "schema_version": 1, "n": n, "delta": delta, "r": r,
           "tau": tau, "count": count, "counts": counts,
           "spread_checked": spread_checked, "spread_ok": spread_ok, "seed": seed}
    if out is not None:
        _write_json(rep, out)
    return rep


_HANDLERS = {
    "sample": _cmd_sample,
    "spectrum": _cmd_spectrum,
    "elliptic-check": _cmd_elliptic_check,
    "sn-tail": _cmd_sn_tail,
    "logpot": _cmd_logpot,
    "concentration": _cmd_concentration,
    "geometry": _cmd_geometry,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return 0 if exc.code in (0, None) else 1
    if args.command is None:
        parser.print_help(sys.stderr)
        return 1
    try:
        cfg = _load_config(args.config) if args.config else {}
        summary = _HANDLERS[args.command](args, cfg)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 1
    except _USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except _NUMERICAL_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(json.dumps(summary, sort_keys=True))
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
