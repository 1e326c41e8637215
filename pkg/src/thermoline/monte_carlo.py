"""Monte Carlo realization of the ensemble-averaged line shape.

Every simulated radiator contributes its analytic weight at its exact
Doppler-shifted frequency ratio; nothing is smoothed or resampled. Work is
cut into fixed-size chunks, chunk ``i`` draws from stream ``(seed, i)`` and
partial results are merged in chunk order, so the output does not depend on
how many worker threads ran.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import enum
import math
import os

import numpy as np

from .errors import ConfigError, DataError
from .juttner import EnsembleParams, juttner_quantile, sample_emission
from .kinematics import counting_weight, doppler_factor, doppler_support, energy_rate_boost
from .numerics import RandomStream, WeightedHistogram, histogram_accumulate, integrate_adaptive

THREADS_ENV = "THERMOLINE_THREADS"
DEFAULT_CHUNK = 1 << 16


class WeightMode(str, enum.Enum):
    INTENSITY = "intensity"
    COUNTING = "counting"
    UNWEIGHTED = "unweighted"


def default_bin_edges(alpha, bins=100, coverage=0.9999):
    """Edges spanning the Doppler range of all but ``1 - coverage`` of the speeds."""
    beta_q = juttner_quantile(coverage, alpha)
    lo, hi = doppler_support(beta_q)
    return np.linspace(max(float(lo), 1e-6), float(hi), int(bins) + 1)


@dataclass(frozen=True)
class SimulationSpec:
    params: EnsembleParams
    mode: WeightMode = WeightMode.INTENSITY
    n_samples: int = 1_000_000
    bin_edges: np.ndarray = field(default=None)
    seed: int = 0
    chunk_size: int = DEFAULT_CHUNK

    def __post_init__(self):
        try:
            object.__setattr__(self, "mode", WeightMode(self.mode))
        except ValueError:
            raise ConfigError("mode", f"unknown weighting mode {self.mode!r}") from None
        if int(self.n_samples) < 1:
            raise ConfigError("n_samples", "must be >= 1")
        if int(self.chunk_size) < 1:
            raise ConfigError("chunk_size", "must be >= 1")
        edges = self.bin_edges
        if edges is None:
            edges = default_bin_edges(self.params.alpha)
        edges = np.asarray(edges, dtype=float)
        if edges.ndim != 1 or edges.size < 2 or np.any(np.diff(edges) <= 0):
            raise ConfigError("bins", "edges must be strictly ascending")
        if not (0.0 < edges[0] < 1.0 < edges[-1]):
            raise ConfigError("bins", "histogram range must satisfy 0 < x_lo < 1 < x_hi")
        object.__setattr__(self, "bin_edges", edges)


@dataclass(frozen=True)
class _Moments:
    # sums over samples of w, w^2, w x, w^2 x, w^2 x^2
    w: float = 0.0
    w2: float = 0.0
    wx: float = 0.0
    w2x: float = 0.0
    w2x2: float = 0.0

    def __add__(self, other):
        return _Moments(self.w + other.w, self.w2 + other.w2, self.wx + other.wx,
                        self.w2x + other.w2x, self.w2x2 + other.w2x2)


@dataclass(frozen=True)
class SimulationResult:
    histogram: WeightedHistogram
    n_samples: int
    effective_sample_size: float
    mean_x: float
    mean_x_error: float
    mean_weight: float
    mean_weight_error: float

    def bin_estimates(self):
        """Per-bin estimates of the integrated density and their standard errors."""
        h = self.histogram
        n = self.n_samples
        est = h.weighted_counts / n
        var = np.maximum(h.sum_sq_weights - h.weighted_counts ** 2 / n, 0.0) / (n * (n - 1.0))
        return est, np.sqrt(var)


def _weights(mode, beta, cos_theta):
    if mode is WeightMode.INTENSITY:
        return energy_rate_boost(beta, cos_theta)
    if mode is WeightMode.COUNTING:
        return counting_weight(beta, cos_theta)
    return np.ones_like(beta)


def _run_chunk(spec, index, size):
    stream = RandomStream(spec.seed, index)
    s = sample_emission(spec.params.alpha, size, stream)
    x = doppler_factor(s.beta, s.cos_theta)
    w = _weights(spec.mode, s.beta, s.cos_theta)
    h = histogram_accumulate(WeightedHistogram(spec.bin_edges), x, w)
    w2 = w * w
    moments = _Moments(float(w.sum()), float(w2.sum()), float((w * x).sum()),
                       float((w2 * x).sum()), float((w2 * x * x).sum()))
    return h, moments


def worker_count(requested=None):
    n = requested if requested is not None else (os.cpu_count() or 1)
    cap = os.environ.get(THREADS_ENV)
    if cap:
        try:
            n = min(n, int(cap))
        except ValueError:
            raise ConfigError(THREADS_ENV, f"must be an integer, got {cap!r}") from None
    return max(1, int(n))


def simulate_spectrum(spec, workers=None):
    """Histogram Doppler-shifted frequency ratios of ``spec.n_samples`` radiators.

    Weights: the energy-rate boost ``(1 - b^2)^2 / (1 - b cos)^3`` in
    intensity mode, ``1 - b cos`` in counting mode and ``1`` for the
    unweighted diagnostic. The result is bit-identical for any ``workers``.
    """
    n = int(spec.n_samples)
    size = int(spec.chunk_size)
    sizes = [min(size, n - start) for start in range(0, n, size)]
    workers = worker_count(workers)

    if workers == 1 or len(sizes) == 1:
        parts = [_run_chunk(spec, i, m) for i, m in enumerate(sizes)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda im: _run_chunk(spec, *im), enumerate(sizes)))

    hist = WeightedHistogram(spec.bin_edges)
    mom = _Moments()
    for h, m in parts:
        hist = hist.merge(h)
        mom = mom + m

    mean_x = mom.wx / mom.w
    # ratio-estimator variance: sum w^2 (x - mean)^2 / W^2
    dev = mom.w2x2 - 2.0 * mean_x * mom.w2x + mean_x ** 2 * mom.w2
    mean_x_error = math.sqrt(max(dev, 0.0)) / mom.w
    mean_w = mom.w / n
    var_w = max(mom.w2 / n - mean_w ** 2, 0.0) * n / max(n - 1, 1)
    return SimulationResult(
        histogram=hist,
        n_samples=n,
        effective_sample_size=mom.w ** 2 / mom.w2,
        mean_x=mean_x,
        mean_x_error=mean_x_error,
        mean_weight=mean_w,
        mean_weight_error=math.sqrt(var_w / n),
    )


@dataclass(frozen=True)
class HistogramDistance:
    l1: float
    chi2_per_bin: float
    bins_used: int
    nbins: int

    def __iter__(self):
        return iter((self.l1, self.chi2_per_bin))


def bin_integrals(density, edges, rel_tol=1e-10):
    edges = np.asarray(edges, dtype=float)
    return np.array([
        integrate_adaptive(density, lo, hi, rel_tol=rel_tol).value
        for lo, hi in zip(edges[:-1], edges[1:])
    ])


def histogram_distance(result, density):
    """Compare a simulated histogram with a density on ``x``.

    ``l1`` is the summed absolute difference between per-bin estimates
    (weight / n) and the density integrated over each bin. ``chi2_per_bin``
    is the reduced chi-square over bins whose estimated error is non-zero,
    using the ``sum_sq_weights`` error estimate.
    """
    h = result.histogram
    if not np.any(h.weighted_counts > 0):
        raise DataError("histogram is empty")
    expected = bin_integrals(density, h.bin_edges)
    est, err = result.bin_estimates()
    l1 = float(np.abs(est - expected).sum())
    used = err > 0
    chi2 = float((((est[used] - expected[used]) / err[used]) ** 2).sum() / used.sum())
    return HistogramDistance(l1, chi2, int(used.sum()), h.nbins)
