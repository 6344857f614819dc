"""Per-sample operation counts and wall-clock cost of every correlator.

Counts come from the instrumented states (steady state, one step after
warm-up) and are exact integers per sample; timings are medians over
repeated runs of ``samples`` steps.  ``rho`` (direct evaluation) is
timed on far fewer samples because it costs ``K*T`` per sample.

``adds_per_sample`` is complex plus real additions: the real sample sums of
``rho`` and ``ma3`` are part of their addition cost.
"""

from __future__ import annotations

import statistics
import time
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .carrier import Ma1State, Ma2State, Ma3State, rho_direct
from .frontend import Ma4State, Ma5State
from .ops import OpCounter
from .params import WaveformParams
from .sequence import generate_phase_sequence

BENCH_SCHEMA = "prpsk.bench/1"
BENCH_COLUMNS = ("method", "K", "T", "adds_per_sample", "muls_per_sample", "ns_per_sample")
METHODS = ("rho", "ma1", "ma2", "ma3", "ma4", "ma5")
DEFAULT_K = (1, 2, 4, 8, 16, 32)
DEFAULT_T = (32, 256, 1024)
SAMPLES_PER_PERIOD = 8
IF_SAMPLES = 4


@dataclass(frozen=True)
class BenchRow:
    method: str
    K: int
    T: int
    adds_per_sample: int
    muls_per_sample: int
    ns_per_sample: float

    def as_row(self) -> tuple:
        return (self.method, self.K, self.T, self.adds_per_sample, self.muls_per_sample,
                f"{self.ns_per_sample:.1f}")


def params_for(K: int, T: int) -> WaveformParams:
    return WaveformParams(SAMPLES_PER_PERIOD, T // SAMPLES_PER_PERIOD, K, IF_SAMPLES, 4)


def _make_state(method: str, params: WaveformParams, seed: int):
    seq = generate_phase_sequence(seed, params)
    return {
        "ma1": lambda: Ma1State(params.replace(repetitions=1)),
        "ma2": lambda: Ma2State(params, seq),
        "ma3": lambda: Ma3State(params, seq),
        "ma4": lambda: Ma4State(params),
        "ma5": lambda: Ma5State(params, seq),
    }[method]()


def _inputs(method: str, n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    if method in ("ma4", "ma5"):
        return rng.normal(size=n) + 1j * rng.normal(size=n)
    return rng.uniform(-1, 1, n)


def time_per_sample(method: str, params: WaveformParams, samples: int, repeats: int, seed: int = 1) -> float:
    """Median nanoseconds per streamed sample (state construction excluded)."""
    y = _inputs(method, samples, seed)
    runs = []
    for _ in range(repeats):
        state = _make_state(method, params, seed)
        step = state.step
        values = y.tolist()
        t0 = time.perf_counter_ns()
        for v in values:
            step(v)
        runs.append((time.perf_counter_ns() - t0) / samples)
    return statistics.median(runs)


def steady_counts(method: str, params: WaveformParams, seed: int = 1) -> OpCounter:
    """Operations spent on one step after the state is fully warmed up."""
    if method == "rho":
        c = OpCounter()
        rho_direct(_inputs("rho", 2 * params.K * params.T, seed), 0, params,
                   generate_phase_sequence(seed, params), counter=c)
        return c
    state = _make_state(method, params, seed)
    warm = params.K * (params.G if method in ("ma4", "ma5") else params.T) + params.S
    y = _inputs(method, warm + 1, seed)
    state.process(y[:-1])
    before = state.counter.copy()
    state.step(y[-1].item())
    return state.counter - before


def run_bench(
    Ks: Sequence[int] = DEFAULT_K,
    Ts: Sequence[int] = DEFAULT_T,
    methods: Iterable[str] = METHODS,
    samples: int = 2000,
    repeats: int = 3,
    direct_samples: int = 4,
) -> list[BenchRow]:
    rows = []
    for method in methods:
        if method not in METHODS:
            raise ValueError(f"unknown method {method!r}")
        # ma1 and ma4 have no repetitions
        ks = (1,) if method in ("ma1", "ma4") else Ks
        for T in sorted(Ts):
            for K in sorted(ks):
                params = params_for(K, T)
                counts = steady_counts(method, params)
                if method == "rho":
                    y = _inputs("rho", 2 * K * T, 1)
                    seq = generate_phase_sequence(1, params)
                    t0 = time.perf_counter_ns()
                    for tau in range(direct_samples):
                        rho_direct(y, tau, params, seq)
                    ns = (time.perf_counter_ns() - t0) / direct_samples
                else:
                    ns = time_per_sample(method, params, samples, repeats)
                adds = counts.complex_adds + counts.real_adds
                rows.append(BenchRow(method, K, T, adds, counts.complex_muls, ns))
    return rows
