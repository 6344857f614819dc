"""Operation accounting for the correlator update paths.

Conventions: a complex+complex sum is one complex addition, a real*complex
or complex*complex product is one complex multiplication, reading a
precomputed exponential from a table costs nothing.  Sums of real samples
(the ``rho_ma3`` group sum) are tallied separately as real additions.
"""

from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass
class OpCounter:
    complex_adds: int = 0
    complex_muls: int = 0
    real_adds: int = 0

    def add(self, complex_adds: int = 0, complex_muls: int = 0, real_adds: int = 0) -> None:
        self.complex_adds += complex_adds
        self.complex_muls += complex_muls
        self.real_adds += real_adds

    def reset(self) -> None:
        self.complex_adds = self.complex_muls = self.real_adds = 0

    def copy(self) -> "OpCounter":
        return replace(self)

    def __sub__(self, other: "OpCounter") -> "OpCounter":
        return OpCounter(
            self.complex_adds - other.complex_adds,
            self.complex_muls - other.complex_muls,
            self.real_adds - other.real_adds,
        )

    def as_tuple(self) -> tuple[int, int]:
        return (self.complex_adds, self.complex_muls)


def counter_snapshot(state) -> OpCounter:
    """Copy of a correlator state's tallies; the state is not touched."""
    return state.counter.copy()
