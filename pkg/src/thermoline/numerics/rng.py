"""Counter-based random streams.

A stream is Philox-4x64 keyed by ``(seed, stream_id)``; the output sequence is
fixed by the key and the draw position alone, so parallel chunks that each
own a stream id reproduce the same numbers regardless of scheduling. Doubles
are built from the top 53 bits of each raw 64-bit word, which keeps the
mapping independent of NumPy's distribution code.
"""

import numpy as np

_MASK64 = (1 << 64) - 1
_TO_UNIT = 2.0 ** -53


class RandomStream:
    """Deterministic stream of doubles in ``[0, 1)``.

    Parameters
    ----------
    seed, stream_id : int
        Reduced modulo 2**64. Equal pairs give equal sequences on every
        platform; distinct ``stream_id`` values give independent streams.
    """

    def __init__(self, seed, stream_id=0):
        self.seed = int(seed) & _MASK64
        self.stream_id = int(stream_id) & _MASK64
        key = np.array([self.seed, self.stream_id], dtype=np.uint64)
        self._bitgen = np.random.Philox(key=key)
        self.position = 0

    def __repr__(self):
        return (f"RandomStream(seed={self.seed}, stream_id={self.stream_id}, "
                f"position={self.position})")

    def uniform(self, n):
        """Next ``n`` draws from ``[0, 1)`` as a float64 array."""
        n = int(n)
        if n < 0:
            raise ValueError("n must be non-negative")
        raw = self._bitgen.random_raw(n)
        self.position += n
        return (np.asarray(raw, dtype=np.uint64) >> np.uint64(11)).astype(np.float64) * _TO_UNIT

    def open_uniform(self, n):
        """Next ``n`` draws from ``(0, 1]``, safe to pass to ``log``."""
        return 1.0 - self.uniform(n)

    def exponential(self, n):
        return -np.log(self.open_uniform(n))

    def normal(self, n):
        """Standard normals by the Box-Muller transform (two draws each)."""
        r = np.sqrt(2.0 * self.exponential(n))
        phi = 2.0 * np.pi * self.uniform(n)
        return r * np.cos(phi)

    def spawn(self, stream_id):
        """Fresh stream sharing this seed with a different id."""
        return RandomStream(self.seed, stream_id)


def uniform_stream(seed, stream_id=0):
    return RandomStream(seed, stream_id)
