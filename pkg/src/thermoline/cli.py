"""Command-line front end.

Exit codes: 0 success, 1 a ``verify`` check failed, 2 usage or configuration
error, 3 output could not be written.

A ``--config FILE`` of flat ``key=value`` lines (``#`` starts a comment)
supplies defaults; command-line flags override it.
"""

import argparse
from dataclasses import dataclass, fields
import math
import sys

import numpy as np

from .csvio import format_rows, write_csv
from .detector import DetectorConfig, doppler_scan
from .errors import ConfigError, ThermolineError
from .juttner import EnsembleParams, juttner_sample
from .monte_carlo import SimulationSpec, default_bin_edges, simulate_spectrum
from .numerics import RandomStream
from .special_functions import MAX_ORDER, bessel_k
from .spectrum import spectral_moment, spectral_moment_quadrature, tabulate

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

SUBCOMMANDS = ("spectrum", "sample", "simulate", "scan", "moments", "table", "verify")


@dataclass
class RunConfig:
    subcommand: str
    alpha: float = None
    kind: str = "intensity"
    mode: str = "intensity"
    x_min: float = None
    x_max: float = None
    points: int = 500
    log_density: bool = False
    n: int = None
    bins: int = 100
    seed: int = 0
    chunk_size: int = 1 << 16
    xd: float = 1.0
    gamma_d: float = 1e-4
    exponent: int = None
    v_min: float = -0.5
    v_max: float = 0.5
    v_points: int = 201
    absorber: bool = False
    order: int = None
    x: float = None
    scaled: bool = False
    fast: bool = False
    omega0: float = 1.0
    intensity0: float = 1.0
    out: str = None


# keys each subcommand accepts, from file or flags
_KEYS = {
    "spectrum": {"alpha", "kind", "x_min", "x_max", "points", "log_density", "omega0",
                 "intensity0", "out"},
    "sample": {"alpha", "n", "seed", "out"},
    "simulate": {"alpha", "mode", "n", "bins", "x_min", "x_max", "seed", "chunk_size",
                 "omega0", "out"},
    "scan": {"alpha", "xd", "gamma_d", "exponent", "v_min", "v_max", "v_points", "absorber",
             "out"},
    "moments": {"alpha", "kind", "exponent"},
    "table": {"order", "x", "scaled"},
    "verify": {"fast"},
}

_TYPES = {f.name: f.type for f in fields(RunConfig)}
_BOOL_WORDS = {"1": True, "true": True, "yes": True, "on": True,
               "0": False, "false": False, "no": False, "off": False}


def _coerce(key, raw):
    kind = _TYPES[key]
    if isinstance(raw, str):
        text = raw.strip()
        try:
            if kind is bool:
                return _BOOL_WORDS[text.lower()]
            if kind is int:
                value = float(text)
                if value != int(value):
                    raise ValueError
                return int(value)
            if kind is float:
                return float(text)
        except (KeyError, ValueError):
            raise ConfigError(key, f"cannot parse {raw!r} as {kind.__name__}") from None
        return text
    return raw


def read_config_file(path):
    """Parse ``key=value`` lines; returns a dict of raw strings."""
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"line {lineno}", "expected key=value")
            key, value = line.split("=", 1)
            values[key.strip().replace("-", "_")] = value.strip()
    return values


def _require(cfg, key, ok, bound):
    if not ok:
        raise ConfigError(key, f"value {getattr(cfg, key)!r} out of range, must be {bound}")


def _validate(cfg):
    sub = cfg.subcommand
    if "alpha" in _KEYS[sub]:
        if cfg.alpha is None:
            raise ConfigError("alpha", "required, must be > 0")
        _require(cfg, "alpha", math.isfinite(cfg.alpha) and cfg.alpha > 0, "> 0")
    if sub == "spectrum":
        cfg.x_min = 0.5 if cfg.x_min is None else cfg.x_min
        cfg.x_max = 2.5 if cfg.x_max is None else cfg.x_max
        _require(cfg, "kind", cfg.kind in ("intensity", "counting"), "intensity|counting")
        _require(cfg, "x_min", cfg.x_min > 0, "> 0")
        _require(cfg, "x_max", cfg.x_max > cfg.x_min, "> x_min")
        _require(cfg, "points", cfg.points >= 2, ">= 2")
    if sub in ("spectrum", "simulate"):
        _require(cfg, "omega0", cfg.omega0 > 0, "> 0")
    if sub == "spectrum":
        _require(cfg, "intensity0", cfg.intensity0 >= 0, ">= 0")
    if sub == "sample":
        cfg.n = 1000 if cfg.n is None else cfg.n
        _require(cfg, "n", cfg.n >= 0, ">= 0")
    if sub == "simulate":
        cfg.n = 1_000_000 if cfg.n is None else cfg.n
        _require(cfg, "mode", cfg.mode in ("intensity", "counting", "unweighted"),
                 "intensity|counting|unweighted")
        _require(cfg, "n", cfg.n >= 1, ">= 1")
        _require(cfg, "bins", cfg.bins >= 1, ">= 1")
        _require(cfg, "chunk_size", cfg.chunk_size >= 1, ">= 1")
        if cfg.x_min is not None:
            _require(cfg, "x_min", 0 < cfg.x_min < 1, "in (0, 1)")
        if cfg.x_max is not None:
            _require(cfg, "x_max", cfg.x_max > 1, "> 1")
    if sub == "scan":
        cfg.exponent = 4 if cfg.exponent is None else cfg.exponent
        _require(cfg, "xd", cfg.xd > 0, "> 0")
        _require(cfg, "gamma_d", 0 < cfg.gamma_d < 0.1, "in (0, 0.1)")
        _require(cfg, "exponent", cfg.exponent >= 0, ">= 0")
        _require(cfg, "v_min", -0.9 < cfg.v_min, "> -0.9")
        _require(cfg, "v_max", cfg.v_min < cfg.v_max < 0.9, "in (v_min, 0.9)")
        _require(cfg, "v_points", cfg.v_points >= 2, ">= 2")
    if sub == "moments":
        cfg.exponent = 0 if cfg.exponent is None else cfg.exponent
        _require(cfg, "kind", cfg.kind in ("intensity", "counting"), "intensity|counting")
    if sub == "table":
        if cfg.order is None:
            raise ConfigError("order", f"required, must be in [0, {MAX_ORDER}]")
        if cfg.x is None:
            raise ConfigError("x", "required, must be > 0")
        _require(cfg, "order", 0 <= cfg.order <= MAX_ORDER, f"in [0, {MAX_ORDER}]")
        _require(cfg, "x", cfg.x > 0 and math.isfinite(cfg.x), "> 0")
    return cfg


def load_config(subcommand, flags=None, path=None):
    """Merge defaults, an optional config file and explicit flags (highest priority)."""
    if subcommand not in SUBCOMMANDS:
        raise ConfigError("subcommand", f"unknown subcommand {subcommand!r}")
    allowed = _KEYS[subcommand]
    merged = {}
    if path:
        for key, raw in read_config_file(path).items():
            if key not in allowed:
                raise ConfigError(key, f"unknown key for '{subcommand}'")
            merged[key] = _coerce(key, raw)
    for key, value in (flags or {}).items():
        if value is None:
            continue
        if key not in allowed:
            raise ConfigError(key, f"unknown key for '{subcommand}'")
        merged[key] = _coerce(key, value)
    return _validate(RunConfig(subcommand, **merged))


def _emit(cfg, text):
    if cfg.out:
        write_csv(cfg.out, text)
    else:
        sys.stdout.write(text)


def _info(cfg, message):
    # keep stdout clean when it carries CSV
    print(message, file=sys.stdout if cfg.out else sys.stderr)


def _run_spectrum(cfg):
    x = np.linspace(cfg.x_min, cfg.x_max, cfg.points)
    table = tabulate(EnsembleParams(cfg.alpha, cfg.omega0, cfg.intensity0), x, cfg.kind)
    xs, density = table.physical()
    header, cols = ["x", "density"], [xs, density]
    if cfg.log_density:
        header.append("log_density")
        with np.errstate(divide="ignore"):
            cols.append(table.log_density + np.log(table.unit_scale()))
    _emit(cfg, format_rows(header, cols))
    return EXIT_OK


def _run_sample(cfg):
    beta = juttner_sample(cfg.alpha, cfg.n, RandomStream(cfg.seed, 0))
    _emit(cfg, format_rows(["beta"], [beta]))
    return EXIT_OK


def _run_simulate(cfg):
    if cfg.x_min is None or cfg.x_max is None:
        default = default_bin_edges(cfg.alpha, cfg.bins)
        lo = default[0] if cfg.x_min is None else cfg.x_min
        hi = default[-1] if cfg.x_max is None else cfg.x_max
    else:
        lo, hi = cfg.x_min, cfg.x_max
    edges = np.linspace(lo, hi, cfg.bins + 1)
    spec = SimulationSpec(EnsembleParams(cfg.alpha), cfg.mode, cfg.n, edges, cfg.seed,
                          cfg.chunk_size)
    result = simulate_spectrum(spec)
    est, err = result.bin_estimates()
    e = result.histogram.bin_edges * cfg.omega0
    _emit(cfg, format_rows(["x_lo", "x_hi", "weight", "weight_err"], [e[:-1], e[1:], est, err]))
    h = result.histogram
    _info(cfg, f"mean_x={result.mean_x:.17g} mean_x_error={result.mean_x_error:.3g} "
               f"effective_sample_size={result.effective_sample_size:.6g} "
               f"out_of_range_weight={h.out_of_range_weight / result.n_samples:.3g}")
    return EXIT_OK


def _run_scan(cfg):
    v = np.linspace(cfg.v_min, cfg.v_max, cfg.v_points)
    det = DetectorConfig(cfg.xd, cfg.gamma_d, cfg.exponent, v, cfg.absorber)
    curve = doppler_scan(cfg.alpha, det)
    _emit(cfg, format_rows(["v_over_c", "count_rate"], [curve.drive_velocities, curve.count_rate]))
    _info(cfg, f"centroid_velocity={curve.centroid_velocity:.17g} "
               f"centroid_frequency_ratio={curve.centroid_frequency_ratio:.17g}")
    return EXIT_OK


def _run_moments(cfg):
    rows = [[], [], []]
    for m in (1, 2):
        rows[0].append(m)
        rows[1].append(spectral_moment(cfg.alpha, cfg.kind, cfg.exponent, m))
        rows[2].append(spectral_moment_quadrature(cfg.alpha, cfg.kind, cfg.exponent, m))
    sys.stdout.write(format_rows(["order", "bessel_ratio", "quadrature"], rows))
    return EXIT_OK


def _run_table(cfg):
    value = bessel_k(cfg.order, cfg.x, scaled=cfg.scaled)
    sys.stdout.write(format_rows(["order", "x", "scaled", "value"],
                                 [[cfg.order], [cfg.x], [int(cfg.scaled)], [value]]))
    return EXIT_OK


def _run_verify(cfg):
    from .verification import run_checks

    results = run_checks(fast=cfg.fast)
    for r in results:
        print(r.line(), flush=True)
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_VERIFY


_RUNNERS = {
    "spectrum": _run_spectrum,
    "sample": _run_sample,
    "simulate": _run_simulate,
    "scan": _run_scan,
    "moments": _run_moments,
    "table": _run_table,
    "verify": _run_verify,
}


def run(cfg):
    """Execute a validated :class:`RunConfig`; returns the exit code."""
    try:
        return _RUNNERS[cfg.subcommand](cfg)
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO


def build_parser():
    parser = argparse.ArgumentParser(
        prog="thermoline",
        description="Thermal line shapes of a relativistic gas of monochromatic radiators.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key=value file; flags override it")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add(name, help_text):
        return sub.add_parser(name, parents=[common], help=help_text)

    def alpha(p):
        p.add_argument("--alpha", type=float, help="m c^2 / k T")

    def out(p):
        p.add_argument("--out", help="output CSV path (default stdout)")

    p = add("spectrum", "tabulate the intensity or counting spectrum")
    alpha(p)
    p.add_argument("--kind", choices=["intensity", "counting"])
    p.add_argument("--x-min", type=float)
    p.add_argument("--x-max", type=float)
    p.add_argument("--points", type=int)
    p.add_argument("--log-density", action="store_true", default=None)
    p.add_argument("--omega0", type=float)
    p.add_argument("--intensity0", type=float)
    out(p)

    p = add("sample", "draw speeds from the Juttner distribution")
    alpha(p)
    p.add_argument("--n", type=int)
    p.add_argument("--seed", type=int)
    out(p)

    p = add("simulate", "Monte Carlo histogram of observed frequency ratios")
    alpha(p)
    p.add_argument("--mode", choices=["intensity", "counting", "unweighted"])
    p.add_argument("--n", type=int)
    p.add_argument("--bins", type=int)
    p.add_argument("--x-min", type=float)
    p.add_argument("--x-max", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--chunk-size", type=int)
    p.add_argument("--omega0", type=float)
    out(p)

    p = add("scan", "Doppler scan with a driven resonance detector")
    alpha(p)
    p.add_argument("--xd", type=float)
    p.add_argument("--gamma-d", type=float)
    p.add_argument("--exponent", type=int)
    p.add_argument("--v-min", type=float)
    p.add_argument("--v-max", type=float)
    p.add_argument("--v-points", type=int)
    p.add_argument("--absorber", action="store_true", default=None)
    out(p)

    p = add("moments", "weighted spectral moments, Bessel form and quadrature")
    alpha(p)
    p.add_argument("--kind", choices=["intensity", "counting"])
    p.add_argument("--exponent", type=int)

    p = add("table", "evaluate K_order(x)")
    p.add_argument("--order", type=int)
    p.add_argument("--x", type=float)
    p.add_argument("--scaled", action="store_true", default=None)

    p = add("verify", "run the cross-check suite")
    p.add_argument("--fast", action="store_true", default=None)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    flags = {k: v for k, v in vars(args).items() if k not in ("subcommand", "config")}
    try:
        cfg = load_config(args.subcommand, flags, args.config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return run(cfg)
    except ThermolineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
