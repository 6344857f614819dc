"""Randomized experiments shared by the verification command and the tests."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .carrier import Ma2State, Ma3State
from .modulator import synth_symbol
from .params import WaveformParams
from .sequence import PhaseSequence, XorShift64Star, generate_phase_sequence


@dataclass(frozen=True)
class Ma3Deviation:
    phase: float
    magnitude: float
    repetitions: int


def adversarial_sequence(samples_per_period: int, repetitions: int) -> PhaseSequence:
    """First repetition unshifted, all others shifted by ``S - 1``: almost a
    full carrier period is read from the following symbol."""
    shifts = [0] + [samples_per_period - 1] * (repetitions - 1)
    return PhaseSequence(seed=0, samples_per_period=samples_per_period, shifts=shifts)


def ma3_adversarial_trial(
    periods: int, seed: int, samples_per_period: int = 8, max_repetitions: int = 16
) -> Ma3Deviation:
    """Two consecutive symbols ``pi`` apart sent with the adversarial
    sequence after a random lead-in; compares ``rho_ma3`` with ``rho_ma2`` at
    the aligned sample of the first symbol.

    ``seed`` picks ``K`` in ``[2, max_repetitions]``, the first symbol's phase
    on the 8-PSK grid and a lead-in of up to three carrier periods.
    """
    rng = XorShift64Star(seed)
    S = samples_per_period
    K = 2 + rng.below(max_repetitions - 1)
    theta = 2 * math.pi * rng.below(8) / 8
    lead = rng.below(3 * S)
    params = WaveformParams(S, periods, K, periods, 2)
    seq = adversarial_sequence(S, K)
    y = np.concatenate(
        [
            np.zeros(lead),
            synth_symbol(theta, params, seq).samples,
            synth_symbol(theta + math.pi, params, seq).samples,
            np.zeros(params.T),
        ]
    )
    ref = Ma2State(params, seq).process(y)
    approx_state = Ma3State(params, seq)
    approx = approx_state.process(y)
    aligned = lead + K * params.T - 1
    exact = ref[aligned]
    shortcut = approx[aligned + approx_state.delay]
    return Ma3Deviation(
        phase=abs(cmath.phase(shortcut / exact)),
        magnitude=abs(abs(shortcut) - abs(exact)) / abs(exact),
        repetitions=K,
    )


def predicted_suppression(repetitions: int) -> float:
    """Matched over mismatched mean correlation magnitude: ``K`` coherent
    unit phasors against the mean length ``sqrt(pi*K)/2`` of a sum of ``K``
    random ones."""
    return 2 * math.sqrt(repetitions / math.pi)


def random_phasor_sum_mean(repetitions: int, samples_per_period: int, draws: int, seed: int) -> float:
    """Monte-Carlo mean of ``|sum_k exp(j*2*pi*u_k/S)|`` with ``u_k`` uniform
    on the sample grid."""
    rng = np.random.default_rng(seed)
    u = rng.integers(0, samples_per_period, size=(draws, repetitions))
    return float(np.abs(np.exp(2j * np.pi * u / samples_per_period).sum(axis=1)).mean())


@dataclass(frozen=True)
class Suppression:
    repetitions: int
    mean_matched: float
    mean_mismatched: float

    @property
    def ratio(self) -> float:
        return self.mean_matched / self.mean_mismatched

    @property
    def predicted(self) -> float:
        return predicted_suppression(self.repetitions)


def interference_suppression(
    repetitions: int,
    n_seeds: int = 200,
    base_seed: int = 1,
    samples_per_period: int = 8,
    periods: int = 4,
) -> Suppression:
    """Correlate a transmitter using sequence A with receivers using A and
    an independent sequence B, at the transmitter's aligned sample."""
    params = WaveformParams(samples_per_period, periods, repetitions, periods, 4)
    seeds = XorShift64Star(base_seed)
    aligned = params.K * params.T - 1
    matched, mismatched = [], []
    for _ in range(n_seeds):
        seq_a = generate_phase_sequence(seeds.next_u64(), params)
        seq_b = generate_phase_sequence(seeds.next_u64(), params)
        theta = 2 * math.pi * seeds.below(params.M) / params.M
        y = synth_symbol(theta, params, seq_a).samples
        matched.append(abs(Ma2State(params, seq_a).process(y)[aligned]))
        mismatched.append(abs(Ma2State(params, seq_b).process(y)[aligned]))
    return Suppression(repetitions, float(np.mean(matched)), float(np.mean(mismatched)))
