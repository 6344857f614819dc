"""Pseudorandom phase sequences for the K repetitions of a symbol.

Phase shifts are quantized to the sample grid: repetition ``k`` is shifted
by an integer ``m_k`` in ``[0, S)`` samples, which is the phase
``phi_k = 2*pi*m_k/S`` of a carrier with period ``S``.

The generator is xorshift64* (Vigna, 2016) seeded through one round of
splitmix64, so that any 64-bit seed (including 0) gives a non-zero state::

    seed:   z = (seed + 0x9E3779B97F4A7C15) mod 2^64
            z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 mod 2^64
            z = (z ^ (z >> 27)) * 0x94D049BB133111EB mod 2^64
            state = z ^ (z >> 31)          (0 is replaced by 0x9E3779B97F4A7C15)
    next:   x ^= x >> 12; x ^= x << 25 (mod 2^64); x ^= x >> 27
            return x * 0x2545F4914F6CDD1D mod 2^64
    below(n): (next() * n) >> 64

Every value is pure integer arithmetic, so sequences reproduce bit-for-bit
in any language.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .params import WaveformParams

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _splitmix64(seed: int) -> int:
    z = (seed + _GOLDEN) & _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


class XorShift64Star:
    """xorshift64* with splitmix64 seeding (see module docstring)."""

    def __init__(self, seed: int) -> None:
        if not 0 <= seed <= _MASK:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
        self.state = _splitmix64(seed) or _GOLDEN

    def next_u64(self) -> int:
        x = self.state
        x ^= x >> 12
        x ^= (x << 25) & _MASK
        x ^= x >> 27
        self.state = x
        return (x * 0x2545F4914F6CDD1D) & _MASK

    def below(self, n: int) -> int:
        """Integer in ``[0, n)`` by multiply-shift on the high bits."""
        return (self.next_u64() * n) >> 64


@dataclass(frozen=True)
class PhaseSequence:
    seed: int
    samples_per_period: int
    shifts: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "shifts", tuple(int(m) for m in self.shifts))
        s = self.samples_per_period
        for m in self.shifts:
            if not 0 <= m < s:
                raise ValueError(f"shift {m} outside [0, {s})")
        if not self.shifts:
            raise ValueError("a phase sequence needs at least one shift")

    @property
    def K(self) -> int:
        return len(self.shifts)

    @property
    def phases(self) -> tuple[float, ...]:
        s = self.samples_per_period
        return tuple(2 * math.pi * m / s for m in self.shifts)

    @property
    def unwrapped_offsets(self) -> tuple[int, ...]:
        # time shift phi_k * R / (2 pi f) without the modulo, in samples
        return self.shifts

    @property
    def max_shift(self) -> int:
        return max(self.shifts)

    def phasors(self) -> list[complex]:
        """``exp(j*phi_k)`` for every repetition."""
        return [complex(math.cos(ph), math.sin(ph)) for ph in self.phases]

    def to_json(self) -> str:
        return json.dumps(
            {
                "seed": self.seed,
                "S": self.samples_per_period,
                "K": self.K,
                "shifts": list(self.shifts),
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "PhaseSequence":
        obj = json.loads(text)
        seq = cls(seed=int(obj["seed"]), samples_per_period=int(obj["S"]), shifts=obj["shifts"])
        if seq.K != int(obj["K"]):
            raise ValueError(f"K={obj['K']} but {seq.K} shifts given")
        return seq


def generate_phase_sequence(seed: int, params: WaveformParams) -> PhaseSequence:
    rng = XorShift64Star(seed)
    shifts = tuple(rng.below(params.S) for _ in range(params.K))
    return PhaseSequence(seed=seed, samples_per_period=params.S, shifts=shifts)
