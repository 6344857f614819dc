"""Acceptance criteria, one test each.  Every test prints a single
``[PASS]``/``[FAIL]`` line with the measured value next to its limit."""

import cmath
import math
import time

import numpy as np
import pytest

from prpsk import (
    Ma1State,
    Ma2State,
    Ma3State,
    Ma4State,
    Ma5State,
    PhaseSequence,
    WaveformParams,
    demodulate,
    downconvert,
    generate_phase_sequence,
    modulate_frame,
    rho_direct_many,
    superpose,
    synchronize,
    synth_symbol,
    ChannelSpec,
    PassbandBuffer,
)
from prpsk.bench import time_per_sample
from prpsk.experiments import interference_suppression, ma3_adversarial_trial
from prpsk.frontend import if_index_to_carrier
from prpsk.modulator import bytes_to_bits

pytestmark = pytest.mark.acceptance


@pytest.fixture
def verdict(capsys):
    def emit(criterion, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}")
        assert ok, f"{criterion}: {detail}"

    return emit


def max_relative_deviation(out, want, floor=1e-6):
    keep = np.abs(want) > floor
    return float(np.max(np.abs(out[keep] - want[keep]) / np.abs(want[keep])))


def streaming_vs_direct(params, seed, streams=50, length=10_000):
    rng = np.random.default_rng(seed)
    width = params.K * params.T
    worst = 0.0
    for i in range(streams):
        if params.K == 1:
            seq = PhaseSequence(0, params.S, (0,))
            state = Ma1State(params)
        else:
            seq = generate_phase_sequence(seed * 1000 + i, params)
            state = Ma2State(params, seq)
        y = rng.uniform(-1, 1, length)
        out = state.process(y)
        taus = np.arange(width - 1, length)
        worst = max(worst, max_relative_deviation(out[taus], rho_direct_many(y, taus - width + 1, params, seq)))
    return worst


def test_c1_single_repetition_equivalence(verdict):
    t0 = time.perf_counter()
    dev = streaming_vs_direct(WaveformParams(8, 4, 1, 4, 4), seed=1)
    elapsed = time.perf_counter() - t0
    verdict("C1 Ma1 equals direct correlation", dev <= 1e-9 and elapsed < 10,
            f"max rel dev {dev:.2e} (<= 1e-9), {elapsed:.2f} s (< 10 s)")


def test_c2_repetition_equivalence(verdict):
    devs = {K: streaming_vs_direct(WaveformParams(8, 4, K, 4, 4), seed=2 + K) for K in (2, 8, 16)}
    worst = max(devs.values())
    verdict("C2 Ma2 equals direct correlation", worst <= 1e-9,
            ", ".join(f"K={K}: {d:.2e}" for K, d in devs.items()) + " (<= 1e-9)")


def test_c3_time_shift_approximation_bounds(verdict):
    parts, ok = [], True
    for p in (4, 8, 16):
        devs = [ma3_adversarial_trial(p, 7919 * p + t) for t in range(100)]
        inside = sum(d.phase <= 1 / (p - 1) and d.magnitude <= 1 / (p - 2) for d in devs)
        ph = max(d.phase for d in devs)
        mag = max(d.magnitude for d in devs)
        ok &= inside == 100
        parts.append(f"p={p}: {inside}/100, phase {ph:.3f} <= {1 / (p - 1):.3f}, mag {mag:.3f} <= {1 / (p - 2):.3f}")
    verdict("C3 Ma3 phase and magnitude bounds", ok, "; ".join(parts))


def steady(state, inputs):
    state.process(inputs[:-1])
    before = state.counter.copy()
    state.step(inputs[-1].item())
    d = state.counter - before
    return d.complex_adds, d.complex_muls


def test_c4_exact_operation_counts(verdict):
    rng = np.random.default_rng(4)
    got, want = {}, {}
    base = WaveformParams(8, 4, 1, 4, 4)
    y = rng.uniform(-1, 1, 200)
    got["ma1"], want["ma1"] = steady(Ma1State(base), y), (2, 1)
    got["ma4"], want["ma4"] = steady(Ma4State(base), y + 0j), (2, 0)
    for K in (1, 2, 8, 32):
        params = base.replace(repetitions=K)
        x = rng.normal(size=3 * K * params.G) + 1j * rng.normal(size=3 * K * params.G)
        got[f"ma5 K={K}"] = steady(Ma5State(params, generate_phase_sequence(K, params)), x)
        want[f"ma5 K={K}"] = (3 * K - 1, K)
    params = base.replace(repetitions=8)
    state = Ma3State(params, generate_phase_sequence(3, params))
    got["ma3 muls"] = steady(state, rng.uniform(-1, 1, 1000))[1]
    want["ma3 muls"] = 1
    bad = [k for k in want if got[k] != want[k]]
    verdict("C4 exact per-sample operation counts", not bad,
            ", ".join(f"{k}={got[k]}" for k in want) + (f"; mismatched: {bad}" if bad else ""))


def test_c5_per_sample_cost_shape(verdict):
    def cost(method, K, T):
        params = WaveformParams(8, T // 8, K, 4, 4)
        return time_per_sample(method, params, samples=4000, repeats=5)

    parts, ok = [], True
    for method in ("ma2", "ma5"):
        ks = {K: cost(method, K, 32) for K in (8, 16, 32)}
        for lo, hi in ((8, 16), (16, 32)):
            r = ks[hi] / ks[lo]
            ok &= r <= 1.5
            parts.append(f"{method} K{lo}->{hi} x{r:.2f}")
        t_ratio = cost(method, 8, 1024) / ks[8]
        spread = max(t_ratio, 1 / t_ratio)
        ok &= spread < 2
        parts.append(f"{method} T32->1024 x{t_ratio:.2f}")
    verdict("C5 cost growth <= 1.5x per K doubling, < 2x across T", ok, ", ".join(parts))


def test_c6_if_path_matches_carrier_path(verdict):
    rng = np.random.default_rng(6)
    params = WaveformParams(8, 4, 8, 4, 4)
    worst = 0.0
    for frame_no in range(20):
        seq = generate_phase_sequence(600 + frame_no, params)
        bits = bytes_to_bits(rng.integers(0, 256, 4).astype(np.uint8).tobytes())
        frame = modulate_frame(bits, params, seq, pilot=True).passband.samples
        y = np.concatenate([np.zeros(int(rng.integers(0, 64))), frame, np.zeros(64)])
        y = y + rng.normal(0, 0.1, len(y))
        carrier = Ma2State(params, seq).process(y)
        ifp = Ma5State(params, seq).process(downconvert(y, params).samples)
        idx = np.arange(params.K * params.G - 1, len(ifp))
        want = carrier[[if_index_to_carrier(i, params) for i in idx]]
        worst = max(worst, max_relative_deviation(ifp[idx], want))
    verdict("C6 IF pipeline equals carrier pipeline", worst <= 1e-9, f"max rel dev {worst:.2e} over 20 frames (<= 1e-9)")


def test_c7_coherent_peak(verdict):
    mag_dev = phase_dev = 0.0
    for K in (1, 8):
        for M in (2, 4, 8):
            params = WaveformParams(8, 4, K, 4, M)
            seq = generate_phase_sequence(70 + K * M, params)
            for i in range(M):
                theta = 2 * math.pi * i / M
                peak = Ma2State(params, seq).process(synth_symbol(theta, params, seq).samples)[-1]
                ideal = params.ideal_peak
                mag_dev = max(mag_dev, abs(abs(peak) - ideal) / ideal)
                phase_dev = max(phase_dev, abs(cmath.phase(peak * cmath.exp(-1j * theta))))
    verdict("C7 coherent peak K*T/2 at angle theta", mag_dev <= 1e-9 and phase_dev <= 1e-9,
            f"magnitude rel dev {mag_dev:.1e}, phase dev {phase_dev:.1e} (<= 1e-9)")


def test_c8_interference_suppression(verdict):
    results = [interference_suppression(K, n_seeds=200, base_seed=8) for K in (8, 16, 32)]
    within = all(abs(r.ratio / r.predicted - 1) <= 0.25 for r in results)
    monotone = all(a.ratio < b.ratio for a, b in zip(results, results[1:]))
    verdict("C8 matched/mismatched peak ratio near 2*sqrt(K/pi)", within and monotone,
            ", ".join(f"K={r.repetitions}: {r.ratio:.2f} vs {r.predicted:.2f}" for r in results)
            + f", monotone={monotone}")


def test_c9_loopback(verdict):
    t0 = time.perf_counter()
    failures, runs = 0, 0
    for K in (1, 2, 8, 16):
        for M in (2, 4, 8):
            params = WaveformParams(8, 4, K, 4, M)
            for seed in range(20):
                rng = np.random.default_rng(9000 + 100 * K + 10 * M + seed)
                seq = generate_phase_sequence(int(rng.integers(0, 2**63)), params)
                bits = bytes_to_bits(rng.integers(0, 256, 3).astype(np.uint8).tobytes())
                frame = modulate_frame(bits, params, seq, pilot=True)
                delayed = superpose([frame.passband], ChannelSpec([(0, int(rng.integers(0, 100)), 1.0)]))
                rx = PassbandBuffer(np.concatenate([delayed.samples, np.zeros(params.T)]))
                sync = synchronize(rx, params, seq)
                failures += demodulate(rx, sync, len(frame.data_phases), params, seq) != bits
                runs += 1
    elapsed = time.perf_counter() - t0
    verdict("C9 loopback is bit exact", failures == 0,
            f"{runs - failures}/{runs} frames exact (K in 1,2,8,16; M in 2,4,8; 20 seeds each), {elapsed:.1f} s")
