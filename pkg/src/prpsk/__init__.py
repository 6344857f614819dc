"""Pseudorandom PSK with K-fold symbol repetition: transmitter, channel and
streaming correlation receivers at carrier and intermediate frequency."""

from .params import (
    GDoesNotDivideP,
    MNotPowerOfTwo,
    NonPositive,
    ParamError,
    SLessThan3,
    WaveformParams,
    validate_params,
)
from .sequence import PhaseSequence, XorShift64Star, generate_phase_sequence
from .buffers import IfBuffer, PassbandBuffer
from .ops import OpCounter, counter_snapshot
from .modulator import Frame, map_bits_to_phases, modulate_frame, phases_to_bits, synth_symbol
from .channel import ChannelSpec, add_awgn, superpose
from .carrier import CarrierLut, Ma1State, Ma2State, Ma3State, rho_direct, rho_direct_many
from .frontend import Ma4State, Ma5State, downconvert, tree_reduce
from .receiver import NoLock, SyncResult, bit_error_rate, demodulate, synchronize

__version__ = "0.1.0"

__all__ = [
    "GDoesNotDivideP",
    "MNotPowerOfTwo",
    "NonPositive",
    "ParamError",
    "SLessThan3",
    "WaveformParams",
    "validate_params",
    "PhaseSequence",
    "XorShift64Star",
    "generate_phase_sequence",
    "IfBuffer",
    "PassbandBuffer",
    "OpCounter",
    "counter_snapshot",
    "Frame",
    "map_bits_to_phases",
    "modulate_frame",
    "phases_to_bits",
    "synth_symbol",
    "ChannelSpec",
    "add_awgn",
    "superpose",
    "CarrierLut",
    "Ma1State",
    "Ma2State",
    "Ma3State",
    "rho_direct",
    "rho_direct_many",
    "Ma4State",
    "Ma5State",
    "downconvert",
    "tree_reduce",
    "NoLock",
    "SyncResult",
    "bit_error_rate",
    "demodulate",
    "synchronize",
]
