"""Sample containers and their raw binary file formats.

Passband files are little-endian binary64, one real sample per record.
IF files are little-endian binary64 ``(re, im)`` pairs, interleaved.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

_PASSBAND_DTYPE = np.dtype("<f8")
_IF_DTYPE = np.dtype("<c16")


class _Buffer:
    samples: np.ndarray
    _dtype: np.dtype

    def __len__(self) -> int:
        return len(self.samples)

    def at(self, index: int):
        """Sample at ``index``; zero outside the recorded span."""
        if 0 <= index < len(self.samples):
            return self.samples[index]
        return self._dtype.type(0)

    def window(self, start: int, length: int) -> np.ndarray:
        """``length`` samples from ``start`` with zero padding on both ends."""
        out = np.zeros(length, dtype=self._dtype)
        lo = max(start, 0)
        hi = min(start + length, len(self.samples))
        if hi > lo:
            out[lo - start : hi - start] = self.samples[lo:hi]
        return out

    def padded(self, before: int, after: int) -> np.ndarray:
        return np.concatenate(
            [np.zeros(before, self._dtype), self.samples, np.zeros(after, self._dtype)]
        )

    def to_file(self, path: str | Path) -> None:
        Path(path).write_bytes(self.samples.astype(self._dtype, copy=False).tobytes())


@dataclass(frozen=True, eq=False)
class PassbandBuffer(_Buffer):
    """Real samples at the carrier sampling rate, origin at index 0."""

    samples: np.ndarray
    _dtype = _PASSBAND_DTYPE

    def __post_init__(self) -> None:
        arr = np.array(self.samples, dtype=np.float64)
        if arr.ndim != 1:
            raise ValueError("passband samples must be one-dimensional")
        arr.setflags(write=False)
        object.__setattr__(self, "samples", arr)

    @classmethod
    def from_file(cls, path: str | Path) -> "PassbandBuffer":
        raw = Path(path).read_bytes()
        if len(raw) % _PASSBAND_DTYPE.itemsize:
            raise ValueError(f"{path}: size {len(raw)} is not a multiple of 8 bytes")
        return cls(np.frombuffer(raw, dtype=_PASSBAND_DTYPE))


@dataclass(frozen=True, eq=False)
class IfBuffer(_Buffer):
    """Complex samples at ``G`` per symbol, origin at index 0."""

    samples: np.ndarray
    _dtype = np.dtype(np.complex128)

    def __post_init__(self) -> None:
        arr = np.array(self.samples, dtype=np.complex128)
        if arr.ndim != 1:
            raise ValueError("IF samples must be one-dimensional")
        arr.setflags(write=False)
        object.__setattr__(self, "samples", arr)

    def to_file(self, path: str | Path) -> None:
        Path(path).write_bytes(self.samples.astype(_IF_DTYPE).tobytes())

    @classmethod
    def from_file(cls, path: str | Path) -> "IfBuffer":
        raw = Path(path).read_bytes()
        if len(raw) % _IF_DTYPE.itemsize:
            raise ValueError(f"{path}: size {len(raw)} is not a multiple of 16 bytes")
        return cls(np.frombuffer(raw, dtype=_IF_DTYPE))
