"""K-repetition pseudorandom PSK transmitter.

Each data symbol with phase ``theta`` is sent ``K`` times; repetition ``k``
is the symbol's carrier burst cyclically delayed by ``m_k`` samples::

    y(k*T + t) = cos(2*pi*(t - m_k)/S + theta),   0 <= t < T

Since ``S`` divides ``T`` the cyclic delay is exactly the phase rotation
``exp(-j*phi_k)`` of the analytic signal, which the receiver undoes either by
reading ``m_k`` samples ahead or by multiplying with ``exp(+j*phi_k)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .buffers import PassbandBuffer
from .params import WaveformParams
from .sequence import PhaseSequence


class LengthNotDivisible(ValueError):
    pass


def _gray(i: int) -> int:
    return i ^ (i >> 1)


def _gray_inverse(g: int) -> int:
    i = 0
    while g:
        i ^= g
        g >>= 1
    return i


def _bits_per_symbol(order: int) -> int:
    if order < 2 or order & (order - 1):
        raise ValueError(f"constellation order must be a power of two >= 2, got {order}")
    return order.bit_length() - 1


def map_bits_to_phases(bits: Sequence[int], order: int) -> list[float]:
    """Gray-coded M-PSK.  Each group of ``log2(M)`` bits (MSB first) is read as
    a Gray codeword ``g``; the symbol angle is ``2*pi*i/M`` with ``gray(i) = g``,
    so neighbouring constellation points differ in exactly one bit."""
    n = _bits_per_symbol(order)
    bits = [int(b) for b in bits]
    if len(bits) % n:
        raise LengthNotDivisible(f"{len(bits)} bits is not a multiple of log2({order}) = {n}")
    phases = []
    for start in range(0, len(bits), n):
        g = 0
        for b in bits[start : start + n]:
            if b not in (0, 1):
                raise ValueError(f"not a bit: {b!r}")
            g = (g << 1) | b
        phases.append(2 * math.pi * _gray_inverse(g) / order)
    return phases


def nearest_index(theta: float, order: int) -> int:
    """Constellation index closest to ``theta``.  An angle exactly halfway
    between two points goes to the one with the lower angle."""
    x = (theta % (2 * math.pi)) * order / (2 * math.pi)
    return math.ceil(x - 0.5) % order


def phases_to_bits(phases: Iterable[float], order: int) -> list[int]:
    """Inverse of :func:`map_bits_to_phases` with nearest-point decisions."""
    n = _bits_per_symbol(order)
    bits: list[int] = []
    for theta in phases:
        g = _gray(nearest_index(theta, order))
        bits.extend((g >> (n - 1 - j)) & 1 for j in range(n))
    return bits


def bytes_to_bits(data: bytes) -> list[int]:
    return [(byte >> (7 - j)) & 1 for byte in data for j in range(8)]


def bits_to_bytes(bits: Sequence[int]) -> bytes:
    if len(bits) % 8:
        raise ValueError("bit count is not a multiple of 8")
    out = bytearray()
    for i in range(0, len(bits), 8):
        v = 0
        for b in bits[i : i + 8]:
            v = (v << 1) | int(b)
        out.append(v)
    return bytes(out)


def _symbol_samples(theta: float, params: WaveformParams, sequence: PhaseSequence) -> np.ndarray:
    if sequence.K != params.K or sequence.samples_per_period != params.S:
        raise ValueError(
            f"sequence (K={sequence.K}, S={sequence.samples_per_period}) does not match "
            f"params (K={params.K}, S={params.S})"
        )
    t = np.arange(params.T)
    shifts = np.asarray(sequence.shifts)[:, None]
    return np.cos(2 * np.pi * (t[None, :] - shifts) / params.S + theta).ravel()


def synth_symbol(theta: float, params: WaveformParams, sequence: PhaseSequence) -> PassbandBuffer:
    """The ``K*T`` passband samples carrying one data phase."""
    return PassbandBuffer(_symbol_samples(theta, params, sequence))


@dataclass(frozen=True, eq=False)
class Frame:
    data_phases: tuple[float, ...]
    passband: PassbandBuffer
    params: WaveformParams
    sequence: PhaseSequence
    pilot: bool = False

    @property
    def n_symbols(self) -> int:
        """Symbols on air, the pilot included."""
        return len(self.data_phases) + int(self.pilot)


def modulate_frame(
    bits: Sequence[int],
    params: WaveformParams,
    sequence: PhaseSequence,
    pilot: bool = False,
) -> Frame:
    """Concatenate one K-repetition burst per data symbol.  The same phase
    sequence is used for every symbol.  With ``pilot=True`` a ``theta=0``
    symbol is sent first as the receiver's phase reference."""
    phases = map_bits_to_phases(bits, params.M)
    on_air = ([0.0] if pilot else []) + phases
    if on_air:
        samples = np.concatenate([_symbol_samples(th, params, sequence) for th in on_air])
    else:
        samples = np.zeros(0)
    return Frame(
        data_phases=tuple(phases),
        passband=PassbandBuffer(samples),
        params=params,
        sequence=sequence,
        pilot=pilot,
    )
