"""Intermediate-frequency path: front-end model and IF-rate correlators.

The front end is an ideal integrate-and-dump mixer: block ``i`` of ``D``
passband samples becomes::

    y_c(i) = sum_{u<D} y(i*D + u) * exp(-j*2*pi*(i*D + u)/S)

``S`` divides ``D``, so a unit carrier block with phase ``theta`` gives
exactly ``D/2 * exp(j*theta)``.  A sum of ``G`` consecutive IF samples is
the carrier-rate ``Ma1`` correlation at the last passband sample of the
block, which is what makes the IF and carrier paths agree exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .buffers import IfBuffer, PassbandBuffer
from .carrier import RESUM_INTERVAL, OutOfOrderFeed, _check_sequence, _Streaming
from .ops import OpCounter
from .params import WaveformParams
from .sequence import PhaseSequence


class EmptyInput(ValueError):
    pass


def downconvert(y, params: WaveformParams) -> IfBuffer:
    """Mix to zero IF and integrate over blocks of ``D`` samples.  A trailing
    partial block is dropped."""
    samples = y.samples if isinstance(y, PassbandBuffer) else np.asarray(y, dtype=float)
    D, S = params.D, params.S
    n_blocks = len(samples) // D
    u = np.arange(n_blocks * D)
    mixed = samples[: n_blocks * D] * np.exp(-2j * np.pi * (u % S) / S)
    return IfBuffer(mixed.reshape(n_blocks, D).sum(axis=1))


def if_index_to_carrier(index: int, params: WaveformParams) -> int:
    """Passband sample at which the IF sample ``index`` is complete."""
    return (index + 1) * params.D - 1


class Ma4State(_Streaming):
    """Moving sum of the last ``G`` IF samples: two complex additions per
    sample and no multiplications."""

    def __init__(self, params: WaveformParams, counter: OpCounter | None = None) -> None:
        self.window = params.G
        self.ring = [0j] * self.window
        self.head = 0
        self.rho = 0j
        self.tau = 0
        self.counter = counter if counter is not None else OpCounter()
        self.resums = 0

    def step(self, yc_new: complex, tau: int | None = None) -> complex:
        self._check(tau)
        head = self.head
        old = self.ring[head]
        self.ring[head] = yc_new
        self.rho = self.rho + yc_new - old
        self.counter.complex_adds += 2
        self.head = head + 1 if head + 1 < self.window else 0
        self.tau += 1
        if self.tau % RESUM_INTERVAL == 0:
            self.rho = sum(self.ring, 0j)
            self.resums += 1
        return self.rho


@dataclass
class ReductionTrace:
    """Additions and critical-path depth of one :func:`tree_reduce` call."""

    adds: int = 0
    depth: int = 0


def tree_reduce(partials: Sequence[complex], trace: ReductionTrace | None = None) -> complex:
    """Balanced pairwise sum.  Each level adds neighbours in parallel, so
    ``K`` inputs take ``K - 1`` additions on ``ceil(log2 K)`` levels."""
    level = np.array(partials, dtype=complex)
    n = level.size
    if n == 0:
        raise EmptyInput("tree_reduce needs at least one value")
    adds = depth = 0
    while n > 1:
        # pair i with i + half; an odd leftover moves up unchanged
        half = n // 2
        level[:half] += level[half : 2 * half]
        if n % 2:
            level[half] = level[n - 1]
        adds += half
        depth += 1
        n = half + n % 2
    if trace is not None:
        trace.adds += adds
        trace.depth = max(trace.depth, depth)
    return complex(level[0])


class Ma5State(_Streaming):
    """``K`` moving averages on the IF stream delayed by ``k*G`` samples,
    each rotated back by its repetition's phase, then summed.

    The ``K`` moving averages are independent of each other and are updated
    together as one vector operation; the final sum is a tree reduction.
    Per IF sample: ``2K`` additions for the moving averages, ``K``
    rotations and ``K - 1`` additions for the sum, i.e. ``3K - 1`` complex
    additions and ``K`` complex multiplications.
    """

    def __init__(self, params: WaveformParams, sequence: PhaseSequence) -> None:
        _check_sequence(params, sequence)
        K, G = params.K, params.G
        self.K, self.G = K, G
        self.counter = OpCounter()
        # average j covers the window ending at tau - j*G, i.e. repetition K-1-j
        self.sums = np.zeros(K, dtype=complex)
        self.rotations = np.array(sequence.phasors()[::-1])
        # delay line of K+1 blocks of G IF samples: line[c, q] holds the IF
        # sample with index c (mod G) in block q (mod K+1)
        self.line = np.zeros((G, K + 1), dtype=complex)
        j = np.arange(K)
        self.new_idx = np.array([(q - j) % (K + 1) for q in range(K + 1)])
        self.old_idx = np.array([(q - j - 1) % (K + 1) for q in range(K + 1)])
        self.col = 0
        self.block = 0
        self.tau = 0
        self.resums = 0
        self.last_trace = ReductionTrace()

    @property
    def ops_per_step(self) -> tuple[int, int]:
        return (3 * self.K - 1, self.K)

    def step(self, yc_new: complex, tau: int | None = None) -> complex:
        self._check(tau)
        col, block = self.col, self.block
        row = self.line[col]
        row[block] = yc_new
        # every average adds its newest input and drops its oldest one
        self.sums += row[self.new_idx[block]]
        self.sums -= row[self.old_idx[block]]
        self.counter.complex_adds += 2 * self.K

        partials = self.sums * self.rotations
        self.counter.complex_muls += self.K
        trace = ReductionTrace()
        out = tree_reduce(partials, trace)
        self.counter.complex_adds += trace.adds
        self.last_trace = trace

        col += 1
        if col == self.G:
            col = 0
            block = block + 1 if block + 1 <= self.K else 0
        self.col, self.block = col, block
        self.tau += 1
        if self.tau % RESUM_INTERVAL == 0:
            self._resum()
        return out

    def _resum(self) -> None:
        # window of average j: blocks (q - j) back, all columns of the block
        # the current sample belongs to, plus the columns of the older block
        # that are still inside the window
        last = self.tau - 1
        for j in range(self.K):
            end = last - j * self.G
            idx = np.arange(end - self.G + 1, end + 1)
            idx = idx[idx >= 0]
            cols = idx % self.G
            blocks = (idx // self.G) % (self.K + 1)
            self.sums[j] = self.line[cols, blocks].sum()
        self.resums += 1


def ma4_step(state: Ma4State, yc_new: complex, tau: int | None = None) -> complex:
    return state.step(yc_new, tau)


def ma5_step(state: Ma5State, yc_new: complex, tau: int | None = None) -> complex:
    return state.step(yc_new, tau)


__all__ = [
    "EmptyInput",
    "Ma4State",
    "Ma5State",
    "OutOfOrderFeed",
    "ReductionTrace",
    "downconvert",
    "if_index_to_carrier",
    "ma4_step",
    "ma5_step",
    "tree_reduce",
]
