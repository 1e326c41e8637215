"""Weighted histograms with error accumulators.

Bins are half-open ``[e_i, e_{i+1})`` except the last, which also contains
its right edge. Weight that lands outside the edges is kept in
``out_of_range_weight`` so mass is conserved exactly:
``total_weight == weighted_counts.sum() + out_of_range_weight``.
"""

from dataclasses import dataclass, field

import numpy as np

from ..errors import DataError


@dataclass(frozen=True)
class WeightedHistogram:
    bin_edges: np.ndarray
    weighted_counts: np.ndarray = field(default=None)
    sum_sq_weights: np.ndarray = field(default=None)
    total_weight: float = 0.0
    out_of_range_weight: float = 0.0

    def __post_init__(self):
        edges = np.asarray(self.bin_edges, dtype=float)
        if edges.ndim != 1 or edges.size < 2:
            raise DataError("need at least two bin edges")
        if not np.all(np.isfinite(edges)) or np.any(np.diff(edges) <= 0):
            raise DataError("bin edges must be finite and strictly ascending")
        nbins = edges.size - 1
        counts = (np.zeros(nbins) if self.weighted_counts is None
                  else np.asarray(self.weighted_counts, dtype=float))
        sumsq = (np.zeros(nbins) if self.sum_sq_weights is None
                 else np.asarray(self.sum_sq_weights, dtype=float))
        if counts.shape != (nbins,) or sumsq.shape != (nbins,):
            raise DataError("accumulator length must equal the number of bins")
        object.__setattr__(self, "bin_edges", edges)
        object.__setattr__(self, "weighted_counts", counts)
        object.__setattr__(self, "sum_sq_weights", sumsq)

    @classmethod
    def uniform(cls, lo, hi, bins):
        return cls(np.linspace(lo, hi, int(bins) + 1))

    @property
    def nbins(self):
        return self.weighted_counts.size

    @property
    def bin_widths(self):
        return np.diff(self.bin_edges)

    def bin_index(self, values):
        """Bin of each value, or -1 when it falls outside the edges."""
        values = np.asarray(values, dtype=float)
        idx = np.searchsorted(self.bin_edges, values, side="right") - 1
        idx[values == self.bin_edges[-1]] = self.nbins - 1
        idx[(idx < 0) | (idx >= self.nbins)] = -1
        return idx

    def merge(self, other):
        if not np.array_equal(self.bin_edges, other.bin_edges):
            raise DataError("cannot merge histograms with different edges")
        return WeightedHistogram(
            self.bin_edges,
            self.weighted_counts + other.weighted_counts,
            self.sum_sq_weights + other.sum_sq_weights,
            self.total_weight + other.total_weight,
            self.out_of_range_weight + other.out_of_range_weight,
        )


def histogram_accumulate(h, values, weights=None):
    """Return a new histogram with ``(value, weight)`` samples added.

    ``weights`` defaults to one per sample. NaN values and negative or
    non-finite weights raise :class:`DataError`; infinite values are simply
    out of range.
    """
    values = np.atleast_1d(np.asarray(values, dtype=float))
    if weights is None:
        weights = np.ones_like(values)
    weights = np.atleast_1d(np.asarray(weights, dtype=float))
    if values.shape != weights.shape:
        raise DataError("values and weights differ in length")
    if values.size == 0:
        return h
    if np.any(np.isnan(values)):
        raise DataError("NaN sample value")
    if not np.all(np.isfinite(weights)) or np.any(weights < 0):
        raise DataError("weights must be finite and non-negative")

    idx = h.bin_index(values)
    inside = idx >= 0
    counts = np.bincount(idx[inside], weights=weights[inside], minlength=h.nbins)
    sumsq = np.bincount(idx[inside], weights=weights[inside] ** 2, minlength=h.nbins)
    return WeightedHistogram(
        h.bin_edges,
        h.weighted_counts + counts,
        h.sum_sq_weights + sumsq,
        h.total_weight + float(weights.sum()),
        h.out_of_range_weight + float(weights[~inside].sum()),
    )
