"""Waveform constants and their validation.

Everything is normalized to samples: the carrier has period ``S`` samples
(``f/R = 1/S``), a symbol spans ``p`` carrier periods (``T = p*S`` samples),
each symbol is repeated ``K`` times, and the IF front end delivers ``G``
complex samples per symbol (decimation ``D = T/G``).
"""

from __future__ import annotations

from dataclasses import asdict, dataclass


class ParamError(ValueError):
    """Base class for invalid waveform parameters."""


class NonPositive(ParamError):
    pass


class SLessThan3(ParamError):
    pass


class GDoesNotDivideP(ParamError):
    pass


class MNotPowerOfTwo(ParamError):
    pass


@dataclass(frozen=True)
class WaveformParams:
    samples_per_period: int
    periods_per_symbol: int
    repetitions: int
    if_samples_per_symbol: int
    psk_order: int

    def __post_init__(self) -> None:
        names = (
            "samples_per_period",
            "periods_per_symbol",
            "repetitions",
            "if_samples_per_symbol",
            "psk_order",
        )
        for name in names:
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int):
                raise NonPositive(f"{name} must be an integer, got {value!r}")
            if value <= 0:
                raise NonPositive(f"{name} must be positive, got {value}")
        if self.samples_per_period < 3:
            raise SLessThan3(
                f"samples_per_period must be >= 3, got {self.samples_per_period}"
            )
        if self.periods_per_symbol % self.if_samples_per_symbol:
            raise GDoesNotDivideP(
                f"if_samples_per_symbol={self.if_samples_per_symbol} does not divide "
                f"periods_per_symbol={self.periods_per_symbol}"
            )
        m = self.psk_order
        if m < 2 or m & (m - 1):
            raise MNotPowerOfTwo(f"psk_order must be a power of two >= 2, got {m}")

    # one-letter aliases, short because they appear in every index expression
    @property
    def S(self) -> int:
        return self.samples_per_period

    @property
    def p(self) -> int:
        return self.periods_per_symbol

    @property
    def K(self) -> int:
        return self.repetitions

    @property
    def G(self) -> int:
        return self.if_samples_per_symbol

    @property
    def M(self) -> int:
        return self.psk_order

    @property
    def samples_per_symbol(self) -> int:
        return self.samples_per_period * self.periods_per_symbol

    T = samples_per_symbol

    @property
    def decimation(self) -> int:
        return self.samples_per_symbol // self.if_samples_per_symbol

    D = decimation

    @property
    def bits_per_symbol(self) -> int:
        return self.psk_order.bit_length() - 1

    @property
    def ideal_peak(self) -> float:
        """Magnitude of the matched correlation of one unit-amplitude frame symbol."""
        return self.repetitions * self.samples_per_symbol / 2

    def replace(self, **changes) -> "WaveformParams":
        fields = asdict(self)
        fields.update(changes)
        return WaveformParams(**fields)

    def to_dict(self) -> dict:
        return asdict(self)


def validate_params(
    samples_per_period: int,
    periods_per_symbol: int,
    repetitions: int,
    if_samples_per_symbol: int,
    psk_order: int,
) -> WaveformParams:
    """Build a :class:`WaveformParams`, raising a :class:`ParamError` subclass
    naming the first violated invariant."""
    return WaveformParams(
        samples_per_period=samples_per_period,
        periods_per_symbol=periods_per_symbol,
        repetitions=repetitions,
        if_samples_per_symbol=if_samples_per_symbol,
        psk_order=psk_order,
    )
