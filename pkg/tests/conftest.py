import cmath
import math

import numpy as np
import pytest

from prpsk import PhaseSequence, WaveformParams


def brute_rho(y, tau, S, T, K, shifts):
    """Forward-window correlation written from scratch: repetition k is read
    ``shifts[k]`` samples ahead, wrapping inside its own block of T samples,
    against a reference carrier whose phase is zero at sample 0."""
    total = 0j
    n = len(y)
    for k in range(K):
        for t in range(T):
            i = tau + k * T + (t + shifts[k]) % T
            sample = y[i] if 0 <= i < n else 0.0
            total += sample * cmath.exp(-2j * math.pi * (t + tau) / S)
    return total


@pytest.fixture
def params():
    return WaveformParams(8, 4, 8, 4, 4)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def zero_sequence(S, K):
    return PhaseSequence(seed=0, samples_per_period=S, shifts=[0] * K)
