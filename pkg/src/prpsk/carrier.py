"""Correlation with the carrier at the passband sampling rate.

``rho_direct`` evaluates the K-repetition correlation literally over a
forward window ``[tau, tau + K*T)``.  The streaming states emit one value
per input sample over the trailing window ending at the current sample:

* :class:`Ma1State` -- moving-average correlation for ``K = 1``;
  ``Ma1State`` at ``tau`` equals ``rho_direct`` (K=1) at ``tau - T + 1``.
* :class:`Ma2State` -- ``K`` delayed ``Ma1`` outputs rotated by
  ``exp(j*phi_k)``; equals ``rho_direct`` at ``tau - K*T + 1``.
* :class:`Ma3State` -- time-shift shortcut: sum the ``K`` shifted real
  samples first and multiply once.  No modulo on the shift, so the last
  ``m_k`` samples of each repetition are read from the next one.

The reference carrier is anchored at absolute sample 0: the sample at index
``u`` is always weighted by ``exp(-j*2*pi*u/S)``.  A window starting at
``tau`` therefore carries an extra factor ``exp(-j*2*pi*tau/S)`` compared to
a window-relative reference; the two agree whenever ``S`` divides ``tau``.
"""

from __future__ import annotations

import cmath
from typing import Literal, Sequence

import numpy as np

from .buffers import PassbandBuffer
from .ops import OpCounter
from .params import WaveformParams
from .sequence import PhaseSequence

# running sums are rebuilt from their ring buffers this often
RESUM_INTERVAL = 1 << 16

Anchor = Literal["stream", "window"]


class OutOfOrderFeed(ValueError):
    pass


class CarrierLut:
    """``exp(-j*2*pi*t/S)`` for ``t`` in ``[0, T)``; ``S`` distinct values repeated."""

    def __init__(self, params: WaveformParams) -> None:
        s = params.S
        self.period = s
        self.distinct = [cmath.exp(-2j * cmath.pi * t / s) for t in range(s)]
        self.table = np.array([self.distinct[t % s] for t in range(params.T)])

    def __len__(self) -> int:
        return len(self.table)

    def __getitem__(self, index: int) -> complex:
        return self.distinct[index % self.period]


def _as_passband(y) -> PassbandBuffer:
    return y if isinstance(y, PassbandBuffer) else PassbandBuffer(np.asarray(y, dtype=float))


def _check_sequence(params: WaveformParams, sequence: PhaseSequence) -> None:
    if sequence.K != params.K or sequence.samples_per_period != params.S:
        raise ValueError(
            f"sequence (K={sequence.K}, S={sequence.samples_per_period}) does not match "
            f"params (K={params.K}, S={params.S})"
        )


def time_shift(t: int, shift: int, T: int) -> int:
    """Read offset of intra-symbol index ``t`` for a repetition shifted by
    ``shift`` samples: ``shift`` while the read stays inside the repetition,
    ``shift - T`` once it would cross into the next one."""
    # t == T - shift wraps: it would address sample T, the next repetition
    return shift if t < T - shift else shift - T


def rho_direct(
    y,
    tau: int,
    params: WaveformParams,
    sequence: PhaseSequence,
    counter: OpCounter | None = None,
    anchor: Anchor = "stream",
) -> complex:
    """Correlation of the window ``[tau, tau + K*T)`` with the phase-shifted
    carrier, as a plain double loop.  Reads outside the recorded samples are
    zero.  ``anchor="window"`` restarts the reference phase at ``tau``."""
    _check_sequence(params, sequence)
    y = _as_passband(y)
    lut = CarrierLut(params)
    T, K = params.T, params.K
    shifts = sequence.shifts
    acc = 0j
    for t in range(T):
        inner = 0.0
        for k in range(K):
            inner += y.at(k * T + time_shift(t, shifts[k], T) + t + tau)
        ref = lut[t + tau] if anchor == "stream" else lut[t]
        acc += ref * inner
    if counter is not None:
        counter.add(complex_adds=T - 1, complex_muls=T, real_adds=T * (K - 1))
    return complex(acc)


def rho_direct_many(
    y,
    taus: Sequence[int],
    params: WaveformParams,
    sequence: PhaseSequence,
    anchor: Anchor = "stream",
    chunk: int = 2048,
) -> np.ndarray:
    """:func:`rho_direct` for many window starts at once (gather + dot)."""
    _check_sequence(params, sequence)
    y = _as_passband(y)
    taus = np.asarray(taus, dtype=np.int64)
    T, K, S = params.T, params.K, params.S
    t = np.arange(T)
    shifts = np.asarray(sequence.shifts)[:, None]
    offsets = (np.arange(K)[:, None] * T + (t[None, :] + shifts) % T).ravel()
    weights = np.tile(np.exp(-2j * np.pi * t / S), K)
    out = np.empty(len(taus), dtype=complex)
    if len(taus) == 0:
        return out
    lo = min(int(taus.min()), 0)
    hi = int(taus.max()) + K * T
    pad_before = -lo
    padded = y.padded(pad_before, max(hi - len(y), 0))
    for start in range(0, len(taus), chunk):
        tc = taus[start : start + chunk]
        block = padded[tc[:, None] + offsets[None, :] + pad_before]
        vals = block @ weights
        if anchor == "stream":
            vals = vals * np.exp(-2j * np.pi * (tc % S) / S)
        out[start : start + chunk] = vals
    return out


class _Streaming:
    """In-order feed bookkeeping shared by the streaming correlators."""

    counter: OpCounter
    tau: int

    def _check(self, tau: int | None) -> None:
        if tau is not None and tau != self.tau:
            raise OutOfOrderFeed(f"expected sample {self.tau}, got {tau}")

    def process(self, samples) -> np.ndarray:
        step = self.step
        return np.array([step(v) for v in np.asarray(samples).tolist()], dtype=complex)


class Ma1State(_Streaming):
    """Moving-average correlation over the last ``T`` samples.

    Per sample: one complex multiplication (sample times table value) and
    two complex additions (add the newest product, subtract the evicted one).
    """

    def __init__(self, params: WaveformParams, counter: OpCounter | None = None) -> None:
        self.window = params.T
        self.lut = CarrierLut(params).distinct
        self.period = params.S
        self.ring = [0j] * self.window
        self.head = 0
        self.phase = 0
        self.rho = 0j
        self.tau = 0
        self.counter = counter if counter is not None else OpCounter()
        self.resums = 0

    def step(self, y_new: float, tau: int | None = None) -> complex:
        self._check(tau)
        prod = y_new * self.lut[self.phase]
        head = self.head
        old = self.ring[head]
        self.ring[head] = prod
        self.rho = self.rho + prod - old
        self.counter.complex_muls += 1
        self.counter.complex_adds += 2

        self.head = head + 1 if head + 1 < self.window else 0
        self.phase = self.phase + 1 if self.phase + 1 < self.period else 0
        self.tau += 1
        if self.tau % RESUM_INTERVAL == 0:
            self.rho = sum(self.ring, 0j)
            self.resums += 1
        return self.rho

    def buffered_sum(self) -> complex:
        return sum(self.ring, 0j)


class Ma2State(_Streaming):
    """``K`` moving-average correlations spaced ``T`` apart, each rotated
    back by its repetition's phase.

    The window ending at ``tau`` holds repetition ``k`` in its ``k``-th
    block of ``T`` samples, so ``Ma1(tau - (K-1-k)*T)`` is rotated by
    ``exp(j*phi_k)``.

    Per sample: the ``Ma1`` update (1 mul, 2 adds) plus ``K`` rotations and
    ``K - 1`` additions of the rotated terms, i.e. ``K + 1`` complex
    multiplications and ``K + 1`` complex additions.
    """

    def __init__(self, params: WaveformParams, sequence: PhaseSequence) -> None:
        _check_sequence(params, sequence)
        K, T = params.K, params.T
        self.K, self.T = K, T
        self.counter = OpCounter()
        self.ma1 = Ma1State(params, self.counter)
        # ring[c, q] holds Ma1 at a sample whose index is c (mod T) and whose
        # block number is q (mod K); one row has all K values needed at once
        self.ring = np.zeros((T, K), dtype=complex)
        phasors = np.array(sequence.phasors())
        r = np.arange(K)
        self.weights = np.array([phasors[K - 1 - (q - r) % K] for q in range(K)])
        self.col = 0
        self.block = 0
        self.tau = 0

    @property
    def ops_per_step(self) -> tuple[int, int]:
        return (self.K + 1, self.K + 1)

    def step(self, y_new: float, tau: int | None = None) -> complex:
        self._check(tau)
        col, block = self.col, self.block
        self.ring[col, block] = self.ma1.step(y_new)
        out = complex(self.ring[col] @ self.weights[block])
        self.counter.complex_muls += self.K
        self.counter.complex_adds += self.K - 1

        col += 1
        if col == self.T:
            col = 0
            block = block + 1 if block + 1 < self.K else 0
        self.col, self.block = col, block
        self.tau += 1
        return out


class Ma3State(_Streaming):
    """Wrap-free time-shift correlation.

    For the group anchor ``a`` the real samples ``y(a + k*T + m_k)`` of all
    repetitions are summed (``K - 1`` real additions), multiplied once by
    ``exp(-j*2*pi*a/S)`` and pushed through a ``T``-element moving average
    (2 complex additions).  The group sum needs ``max(m_k)`` samples past the
    window end, so the value returned after feeding sample ``n`` belongs to
    the window ending at ``n - delay`` (``delay = max(m_k)``), i.e. it is the
    approximation of ``Ma2State`` at that index.
    """

    def __init__(self, params: WaveformParams, sequence: PhaseSequence) -> None:
        _check_sequence(params, sequence)
        K, T, S = params.K, params.T, params.S
        self.K, self.T, self.period = K, T, S
        self.delay = sequence.max_shift
        span = (K - 1) * T + self.delay
        self.hist_len = span + 1
        # each sample is written twice so a fixed offset vector never wraps
        self.hist = np.zeros(2 * self.hist_len)
        back = np.array([(K - 1 - k) * T + self.delay - m for k, m in enumerate(sequence.shifts)])
        self.read_offsets = self.hist_len - back
        self.pos = 0
        self.lut = CarrierLut(params).distinct
        self.phase = (-span) % S
        self.slot = (-span) % T
        self.ring = [0j] * T
        self.rho = 0j
        self.tau = 0
        self.counter = OpCounter()
        self.resums = 0

    def step(self, y_new: float, tau: int | None = None) -> complex:
        self._check(tau)
        pos = self.pos
        self.hist[pos] = y_new
        self.hist[pos + self.hist_len] = y_new
        group = float(self.hist[self.read_offsets + pos].sum())
        self.counter.real_adds += self.K - 1

        prod = group * self.lut[self.phase]
        slot = self.slot
        old = self.ring[slot]
        self.ring[slot] = prod
        self.rho = self.rho + prod - old
        self.counter.complex_muls += 1
        self.counter.complex_adds += 2

        self.pos = pos + 1 if pos + 1 < self.hist_len else 0
        self.phase = self.phase + 1 if self.phase + 1 < self.period else 0
        self.slot = slot + 1 if slot + 1 < self.T else 0
        self.tau += 1
        if self.tau % RESUM_INTERVAL == 0:
            self.rho = sum(self.ring, 0j)
            self.resums += 1
        return self.rho


def ma1_step(state: Ma1State, y_new: float, tau: int | None = None) -> complex:
    return state.step(y_new, tau)


def ma2_step(state: Ma2State, y_new: float, tau: int | None = None) -> complex:
    return state.step(y_new, tau)


def ma3_step(state: Ma3State, y_new: float, tau: int | None = None) -> complex:
    return state.step(y_new, tau)
