"""Counter-based uniform random streams.

Every variate is a pure function of ``(seed, substream, draw_index)``: draw
``k`` of a stream is ``mix64(origin + (k + 1) * GOLDEN)`` where ``origin``
derives from the seed and the substream id, and ``mix64`` is the SplitMix64
finalizer.  That makes streams splittable (hand substream ``i`` to worker
``i`` and results never depend on scheduling) and bit-reproducible across
runs of the same build.  The simulation kernels inline the identical integer
arithmetic, so compiled and interpreted paths draw the same numbers.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX_A = 0xBF58476D1CE4E5B9
_MIX_B = 0x94D049BB133111EB
_SEED_SALT = 0x6A09E667F3BCC909

#: Substream ids are partitioned as ``member * SUBSTREAM_STRIDE + node`` so
#: that ensemble members and nodes never share a stream.
SUBSTREAM_STRIDE = 1 << 32

_INV_2_53 = 1.0 / 9007199254740992.0  # 2**-53


def _mix64(z: int) -> int:
    z &= _MASK64
    z = ((z ^ (z >> 30)) * _MIX_A) & _MASK64
    z = ((z ^ (z >> 27)) * _MIX_B) & _MASK64
    return z ^ (z >> 31)


def stream_origin(seed: int, substream: int) -> int:
    """Origin word of ``substream`` under ``seed`` (a 64-bit unsigned int)."""
    return _mix64(_mix64(seed ^ _SEED_SALT) + ((substream * _GOLDEN) & _MASK64))


def member_substream(member: int, node: int) -> int:
    """Substream id for node ``node`` of independent run ``member``."""
    return member * SUBSTREAM_STRIDE + node


def node_origins(seed: int, n_nodes: int, member: int = 0) -> np.ndarray:
    """Per-node stream origins for a simulation run, as a uint64 array."""
    return np.array(
        [stream_origin(seed, member_substream(member, i)) for i in range(n_nodes)],
        dtype=np.uint64,
    )


# --- compiled twins used inside simulation kernels ---------------------------

@njit(cache=True)
def _u64_at(origin, k):
    z = origin + (k + np.uint64(1)) * np.uint64(_GOLDEN)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX_A)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX_B)
    return z ^ (z >> np.uint64(31))


@njit(cache=True)
def _u01_at(origin, k):
    """Draw ``k`` of the stream at ``origin``, uniform on [0, 1)."""
    return (_u64_at(origin, k) >> np.uint64(11)) * _INV_2_53


class RandomStream:
    """Seedable uniform generator with independent substreams.

    >>> a = RandomStream(7, substream=0)
    >>> b = RandomStream(7, substream=1)
    >>> a.uniform01() == RandomStream(7).uniform01()
    True

    Scalar and vectorized draws advance the same counter, so
    ``uniform01(size=3)`` consumes exactly three draws.
    """

    __slots__ = ("seed", "substream", "_origin", "_count")

    def __init__(self, seed: int, substream: int = 0):
        self.seed = int(seed)
        self.substream = int(substream)
        self._origin = stream_origin(self.seed, self.substream)
        self._count = 0

    def spawn(self, substream: int) -> "RandomStream":
        """Fresh stream with the same seed and the given substream id."""
        return RandomStream(self.seed, substream)

    @property
    def draws_consumed(self) -> int:
        return self._count

    def _next_words(self, n: int) -> np.ndarray:
        ks = np.arange(self._count, self._count + n, dtype=np.uint64)
        self._count += n
        z = np.uint64(self._origin) + (ks + np.uint64(1)) * np.uint64(_GOLDEN)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX_A)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX_B)
        return z ^ (z >> np.uint64(31))

    def uniform01(self, size: int | None = None):
        """Uniform on [0, 1); scalar when ``size`` is None."""
        if size is None:
            w = _mix64((self._origin + (self._count + 1) * _GOLDEN) & _MASK64)
            self._count += 1
            return (w >> 11) * _INV_2_53
        return (self._next_words(int(size)) >> np.uint64(11)) * _INV_2_53

    def uniform_sym(self, size: int | None = None):
        """Uniform on [-1, 1); scalar when ``size`` is None."""
        u = self.uniform01(size)
        return 2.0 * u - 1.0

    def coin(self) -> int:
        """Fair ±1 draw."""
        return 1 if self.uniform01() < 0.5 else -1
