"""Resonance-detector registration of a thermally broadened line.

A detector tuned to ``x_d`` registers each frequency component with relative
weight ``(x_d / x)^p`` (``p = 4`` by default). Driving the detector with
velocity ``v`` moves its resonance to ``x_d (1 + v)``; sweeping ``v`` gives a
count-rate curve whose centroid estimates the registered line position.

The resonance is a unit-area Lorentzian of full width ``gamma_d``.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from .errors import ConfigError, ConvergenceError, DataError, DomainError
from .numerics import integrate_adaptive
from .spectrum import intensity_spectrum, kernel_breakpoints

# The drive is treated to first order in v; beyond this the model is meaningless.
MAX_DRIVE = 0.9


@dataclass(frozen=True)
class DetectorConfig:
    x_d: float = 1.0
    gamma_d: float = 1e-4
    weight_exponent: int = 4
    drive_velocities: np.ndarray = field(default=None)
    absorber: bool = False

    def __post_init__(self):
        if not self.x_d > 0:
            raise ConfigError("x_d", "must be > 0")
        if not 0 < self.gamma_d < 0.1:
            raise ConfigError("gamma_d", "must lie in (0, 0.1)")
        if int(self.weight_exponent) != self.weight_exponent or self.weight_exponent < 0:
            raise ConfigError("weight_exponent", "must be an integer >= 0")
        if self.drive_velocities is not None:
            v = np.asarray(self.drive_velocities, dtype=float)
            if v.ndim != 1 or v.size < 2 or np.any(np.diff(v) <= 0):
                raise ConfigError("drive_velocities", "must be strictly ascending, >= 2 points")
            if np.any(np.abs(v) >= MAX_DRIVE):
                raise ConfigError("drive_velocities", f"|v/c| must be < {MAX_DRIVE}")
            object.__setattr__(self, "drive_velocities", v)


@dataclass(frozen=True)
class ScanCurve:
    drive_velocities: np.ndarray
    count_rate: np.ndarray
    centroid_velocity: float
    centroid_frequency_ratio: float
    absorber: bool = False


def response_weight(x, cfg):
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0)):
        raise DomainError("x must be > 0")
    return (cfg.x_d / x) ** int(cfg.weight_exponent)


def lorentzian(u, fwhm):
    half = 0.5 * fwhm
    return (half / math.pi) / (u * u + half * half)


def _positive(f):
    def g(x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        pos = x > 0
        out[pos] = f(x[pos])
        return out
    return g


def registered_mean(alpha, cfg, rel_tol=1e-12):
    """Mean frequency ratio seen through the detector weighting, by quadrature."""
    pts = kernel_breakpoints(alpha)

    def weighted(power):
        f = _positive(lambda x: x ** power * response_weight(x, cfg) * intensity_spectrum(x, alpha))
        return integrate_adaptive(f, 0.0, math.inf, rel_tol=rel_tol, points=pts).value

    return weighted(1) / weighted(0)


def _scan_points(centre, gamma_d, source_points):
    offsets = np.array([-1e3, -1e2, -30, -10, -3, -1, -0.5, 0, 0.5, 1, 3, 10, 30, 1e2, 1e3])
    pts = list(centre + gamma_d * offsets) + list(source_points)
    return sorted(p for p in set(pts) if p > 0)


def doppler_scan(alpha, cfg, source=None, source_points=None, rel_tol=1e-10):
    """Count rate against drive velocity for a source spectrum.

    ``rate(v) = integral S(x) w(x) L(x - x_d (1 + v)) dx`` with ``w`` the
    detector weight and ``L`` the unit-area Lorentzian. ``source`` defaults
    to the thermal intensity spectrum at ``alpha``; any vectorized density
    may be supplied instead, with ``source_points`` marking its features.
    In absorber mode the curve is the weighted total minus that resonant
    term, so the line appears as a dip.
    """
    if cfg.drive_velocities is None:
        raise ConfigError("drive_velocities", "required for a scan")
    if source is None:
        source = lambda x: intensity_spectrum(x, alpha)  # noqa: E731
        if source_points is None:
            source_points = kernel_breakpoints(alpha)
    source_points = list(source_points or [])
    weighted_source = _positive(lambda x: source(x) * response_weight(x, cfg))

    rates = np.empty(cfg.drive_velocities.size)
    for i, v in enumerate(cfg.drive_velocities):
        centre = cfg.x_d * (1.0 + v)

        def f(x, centre=centre):
            return weighted_source(x) * lorentzian(x - centre, cfg.gamma_d)

        try:
            res = integrate_adaptive(f, 0.0, math.inf, rel_tol=rel_tol,
                                     points=_scan_points(centre, cfg.gamma_d, source_points))
        except ConvergenceError as exc:
            raise ConvergenceError(f"scan quadrature failed at v={v!r}: {exc}",
                                   exc.estimate, exc.error_estimate) from exc
        rates[i] = res.value

    if cfg.absorber:
        total = integrate_adaptive(weighted_source, 0.0, math.inf, rel_tol=rel_tol,
                                   points=source_points).value
        rates = total - rates

    v_c = scan_centroid_values(cfg.drive_velocities, rates, cfg.absorber)
    return ScanCurve(cfg.drive_velocities, rates, v_c, cfg.x_d * (1.0 + v_c), cfg.absorber)


def scan_centroid_values(velocities, rates, absorber=False):
    v = np.asarray(velocities, dtype=float)
    r = np.asarray(rates, dtype=float)
    if v.shape != r.shape or v.size < 1:
        raise DataError("velocity and rate arrays must have equal, non-zero length")
    signal = (r.max() - r) if absorber else (r - r.min())
    scale = np.abs(r).max()
    if not signal.sum() > 1e-12 * scale * signal.size:
        raise DataError("scan curve is flat; centroid undefined")
    # trapezoid weights so non-uniform grids are integrated, not just summed
    if v.size == 1:
        return float(v[0])
    dv = np.diff(v)
    w = np.zeros_like(v)
    w[:-1] += 0.5 * dv
    w[1:] += 0.5 * dv
    ws = w * signal
    return float((ws * v).sum() / ws.sum())


def scan_centroid(curve):
    """Background-subtracted, rate-weighted mean drive velocity of a scan."""
    return scan_centroid_values(curve.drive_velocities, curve.count_rate, curve.absorber)
