"""Quadrature, random streams and histogram accumulation."""

from .histogram import WeightedHistogram, histogram_accumulate
from .quadrature import QuadratureResult, integrate_adaptive, integrate_segments
from .rng import RandomStream, uniform_stream

__all__ = [
    "QuadratureResult",
    "RandomStream",
    "WeightedHistogram",
    "histogram_accumulate",
    "integrate_adaptive",
    "integrate_segments",
    "uniform_stream",
]
