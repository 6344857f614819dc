"""Superposition of transmitters and additive white Gaussian noise.

Streams are combined with integer sample delays and real gains; path loss
beyond a flat gain and multipath are deliberately not modelled.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .buffers import PassbandBuffer


class EmptySpec(ValueError):
    pass


@dataclass(frozen=True)
class ChannelEntry:
    stream: int
    delay: int = 0
    gain: float = 1.0

    def __post_init__(self) -> None:
        if self.delay < 0:
            raise ValueError(f"delay must be >= 0, got {self.delay}")
        if self.gain < 0:
            raise ValueError(f"gain must be >= 0, got {self.gain}")


@dataclass(frozen=True)
class ChannelSpec:
    entries: tuple[ChannelEntry, ...] = field(default_factory=tuple)
    noise_sigma: float = 0.0
    noise_seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(
            self,
            "entries",
            tuple(e if isinstance(e, ChannelEntry) else ChannelEntry(*e) for e in self.entries),
        )
        if self.noise_sigma < 0:
            raise ValueError(f"noise_sigma must be >= 0, got {self.noise_sigma}")

    def to_json(self) -> str:
        return json.dumps(
            {
                "entries": [
                    {"stream": e.stream, "delay": e.delay, "gain": e.gain} for e in self.entries
                ],
                "noise_sigma": self.noise_sigma,
                "noise_seed": self.noise_seed,
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "ChannelSpec":
        obj = json.loads(text)
        entries = tuple(
            ChannelEntry(int(e["stream"]), int(e.get("delay", 0)), float(e.get("gain", 1.0)))
            for e in obj["entries"]
        )
        return cls(entries, float(obj.get("noise_sigma", 0.0)), int(obj.get("noise_seed", 0)))


def superpose(streams: Sequence[PassbandBuffer], spec: ChannelSpec) -> PassbandBuffer:
    """``out(tau) = sum_i gain_i * stream_i(tau - delay_i)``; noise is not added."""
    if not spec.entries:
        raise EmptySpec("channel spec has no entries")
    for e in spec.entries:
        if not 0 <= e.stream < len(streams):
            raise IndexError(f"entry refers to stream {e.stream}, only {len(streams)} given")
    n = max(e.delay + len(streams[e.stream]) for e in spec.entries)
    out = np.zeros(n)
    for e in spec.entries:
        src = streams[e.stream].samples
        out[e.delay : e.delay + len(src)] += e.gain * src
    return PassbandBuffer(out)


def add_awgn(buffer: PassbandBuffer, sigma: float, seed: int) -> PassbandBuffer:
    """Add i.i.d. N(0, sigma^2) samples drawn from numpy's PCG64 generator
    seeded with ``seed``."""
    if sigma < 0:
        raise ValueError(f"sigma must be >= 0, got {sigma}")
    if sigma == 0:
        return buffer
    noise = np.random.default_rng(seed).normal(0.0, sigma, len(buffer))
    return PassbandBuffer(buffer.samples + noise)


def apply_channel(streams: Sequence[PassbandBuffer], spec: ChannelSpec) -> PassbandBuffer:
    return add_awgn(superpose(streams, spec), spec.noise_sigma, spec.noise_seed)
