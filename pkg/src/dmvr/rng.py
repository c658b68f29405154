"""Buffered uniform random stream shared by the reference code and the kernels.

Every random decision in a run (inter-event time, ticking node, neighbour,
leader repair, Bernoulli copy) consumes exactly one uniform double from a
single stream. The stream hands out draws one at a time to Python code and as
contiguous blocks to compiled kernels, and both views see the same sequence.
"""
import numpy as np

_BLOCK = 1 << 16


class RandomStream:
    """Sequential stream of uniform doubles in [0, 1) backed by PCG64.

    The sequence depends only on ``seed``; it does not depend on how the
    draws are split between :meth:`random` calls and kernel blocks.
    """

    def __init__(self, seed, block_size=_BLOCK):
        self.seed = seed
        self._gen = np.random.Generator(np.random.PCG64(seed))
        self._block = int(block_size)
        self._buf = np.empty(0)
        self._pos = 0
        self.consumed = 0

    def random(self):
        if self._pos >= self._buf.shape[0]:
            self._refill(1)
        u = float(self._buf[self._pos])
        self._pos += 1
        self.consumed += 1
        return u

    def index(self, n):
        """One bounded-uniform draw in ``range(n)``."""
        return min(int(self.random() * n), n - 1)

    def view(self, min_available):
        """Return ``(buffer, position)`` with at least ``min_available`` unread draws."""
        if self._buf.shape[0] - self._pos < min_available:
            self._refill(min_available)
        return self._buf, self._pos

    def seek(self, pos):
        """Mark everything before ``pos`` in the current buffer as consumed."""
        if pos < self._pos or pos > self._buf.shape[0]:
            raise ValueError("stream position can only move forward within the buffer")
        self.consumed += pos - self._pos
        self._pos = pos

    def _refill(self, need):
        rest = self._buf[self._pos:]
        size = max(self._block, need)
        self._buf = np.concatenate([rest, self._gen.random(size)])
        self._pos = 0
