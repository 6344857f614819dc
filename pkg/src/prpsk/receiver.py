"""Synchronization, demodulation and bit error rate.

Two engines are available: ``"ma2"`` correlates the passband stream at the
carrier rate, ``"ma5"`` correlates the IF stream (a passband input is
downconverted first).  Indices in :class:`SyncResult` are in the engine's
own sample domain: passband samples for ``ma2``, IF samples for ``ma5``.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .buffers import IfBuffer, PassbandBuffer
from .carrier import Ma2State
from .frontend import Ma5State, downconvert
from .modulator import phases_to_bits
from .params import WaveformParams
from .sequence import PhaseSequence

Engine = Literal["ma2", "ma5"]

# relative slack under which two scores count as a tie
_TIE_RTOL = 1e-9


class NoLock(RuntimeError):
    def __init__(self, message: str, result: "SyncResult") -> None:
        super().__init__(message)
        self.result = result


class NotLocked(ValueError):
    pass


class LengthMismatch(ValueError):
    pass


@dataclass(frozen=True)
class SyncResult:
    tau_star: int
    peak_value: complex
    lock: bool
    engine: str = "ma2"
    threshold: float = 0.5

    def to_dict(self) -> dict:
        return {
            "tau_star": self.tau_star,
            "peak_re": self.peak_value.real,
            "peak_im": self.peak_value.imag,
            "peak_abs": abs(self.peak_value),
            "lock": self.lock,
            "engine": self.engine,
            "threshold": self.threshold,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _engine_input(stream, params: WaveformParams, engine: str):
    if engine == "ma2":
        if isinstance(stream, IfBuffer):
            raise TypeError("the ma2 engine needs a passband stream")
        return stream if isinstance(stream, PassbandBuffer) else PassbandBuffer(stream)
    if engine == "ma5":
        if isinstance(stream, IfBuffer):
            return stream
        return downconvert(stream, params)
    raise ValueError(f"unknown engine {engine!r}")


def window_length(params: WaveformParams, engine: str) -> int:
    return params.K * (params.T if engine == "ma2" else params.G)


def correlate(stream, params: WaveformParams, sequence: PhaseSequence, engine: Engine = "ma2"):
    """Run the engine over every sample.  Returns the correlation trace
    (entry ``i`` belongs to the window ending at ``i``) and the engine's
    input buffer."""
    buf = _engine_input(stream, params, engine)
    state = Ma2State(params, sequence) if engine == "ma2" else Ma5State(params, sequence)
    return state.process(buf.samples), buf


def _window_energy(samples: np.ndarray, width: int) -> np.ndarray:
    c = np.concatenate([[0.0], np.cumsum(np.abs(samples) ** 2)])
    idx = np.arange(len(samples))
    return c[idx + 1] - c[np.maximum(idx + 1 - width, 0)]


def synchronize(
    stream,
    params: WaveformParams,
    sequence: PhaseSequence,
    engine: Engine = "ma2",
    threshold: float = 0.5,
    metric: Literal["normalized", "magnitude"] = "normalized",
) -> SyncResult:
    """Locate the first frame symbol.

    Lock is declared once ``|rho|`` reaches ``threshold * K*T/2``.  Inside one
    window length from the first crossing the peak is the sample maximizing
    ``|rho|^2 / E`` (``E`` the window energy), which by Cauchy-Schwarz is
    maximal exactly at alignment for a clean signal; ``metric="magnitude"``
    uses ``|rho|`` instead.  Ties go to the earliest sample.
    """
    if not 0 < threshold <= 1:
        raise ValueError(f"threshold must be in (0, 1], got {threshold}")
    trace, buf = correlate(stream, params, sequence, engine)
    width = window_length(params, engine)
    if len(trace) < width:
        raise ValueError(f"stream has {len(trace)} samples, a window needs {width}")
    level = threshold * params.ideal_peak
    mags = np.abs(trace)
    crossings = np.flatnonzero(mags >= level)
    if crossings.size == 0:
        best = int(np.argmax(mags))
        result = SyncResult(best - width + 1, complex(trace[best]), False, engine, threshold)
        raise NoLock(f"no sample reaches {threshold} of the ideal peak", result)
    first = int(crossings[0])
    region = slice(first, min(first + width, len(trace)))
    if metric == "normalized":
        energy = _window_energy(buf.samples, width)[region]
        score = np.where(energy > 0, mags[region] ** 2 / np.where(energy > 0, energy, 1.0), 0.0)
    elif metric == "magnitude":
        score = mags[region]
    else:
        raise ValueError(f"unknown metric {metric!r}")
    best = first + int(np.flatnonzero(score >= score.max() * (1 - _TIE_RTOL))[0])
    peak = complex(trace[best])
    lock = abs(peak) >= level
    result = SyncResult(best - width + 1, peak, lock, engine, threshold)
    if not lock:
        raise NoLock("peak below threshold", result)
    return result


def demodulate(
    stream,
    sync: SyncResult,
    n_symbols: int,
    params: WaveformParams,
    sequence: PhaseSequence,
    engine: Engine | None = None,
    reference: Literal["pilot", "window"] = "pilot",
) -> list[int]:
    """Bits of ``n_symbols`` data symbols following the synchronization point.

    With ``reference="pilot"`` the symbol at ``sync.tau_star`` is the ``theta=0``
    pilot and data phases are measured against it.  With ``"window"`` the
    absolute carrier phase at the window start is removed instead, which is
    only meaningful when transmitter and receiver share the carrier phase.
    """
    if not sync.lock:
        raise NotLocked("synchronization has no lock")
    engine = engine or sync.engine
    trace, _ = correlate(stream, params, sequence, engine)
    width = window_length(params, engine)
    first = sync.tau_star + width - 1
    offset = 1 if reference == "pilot" else 0
    last = first + (n_symbols + offset - 1) * width
    if n_symbols and last >= len(trace):
        raise ValueError(f"stream ends before symbol {n_symbols - 1}")
    if reference == "pilot":
        ref = trace[first]
        if ref == 0:
            raise NotLocked("pilot correlation is zero")
        rot = abs(ref) / ref
    elif reference == "window":
        start = sync.tau_star * (1 if engine == "ma2" else params.D)
        rot = cmath.exp(2j * math.pi * (start % params.S) / params.S)
    else:
        raise ValueError(f"unknown reference {reference!r}")
    phases = [
        cmath.phase(trace[first + (i + offset) * width] * rot) for i in range(n_symbols)
    ]
    return phases_to_bits(phases, params.M)


def bit_error_rate(sent: Sequence[int], received: Sequence[int]) -> float:
    if len(sent) != len(received):
        raise LengthMismatch(f"{len(sent)} bits sent, {len(received)} received")
    if not sent:
        return 0.0
    return sum(int(a) != int(b) for a, b in zip(sent, received)) / len(sent)
