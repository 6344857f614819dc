import numpy as np
import pytest

from prpsk import (
    NoLock,
    PassbandBuffer,
    SyncResult,
    WaveformParams,
    add_awgn,
    bit_error_rate,
    demodulate,
    downconvert,
    generate_phase_sequence,
    modulate_frame,
    synchronize,
)
from prpsk.modulator import bytes_to_bits
from prpsk.receiver import LengthMismatch, NotLocked


def make_frame(seed, K, M=4, n_bytes=3, lead=None):
    params = WaveformParams(8, 4, K, 4, M)
    seq = generate_phase_sequence(seed, params)
    rng = np.random.default_rng(seed)
    bits = bytes_to_bits(rng.integers(0, 256, n_bytes).astype(np.uint8).tobytes())
    frame = modulate_frame(bits, params, seq, pilot=True)
    lead = int(rng.integers(0, 3 * params.T)) if lead is None else lead
    y = np.concatenate([np.zeros(lead), frame.passband.samples, np.zeros(params.T)])
    return params, seq, bits, frame, lead, y


@pytest.mark.parametrize("K", [2, 8, 16])
def test_noiseless_sync_is_exact(K):
    for seed in range(10):
        params, seq, _, _, lead, y = make_frame(seed, K)
        sync = synchronize(y, params, seq)
        assert sync.lock and sync.tau_star == lead
        assert abs(abs(sync.peak_value) - params.ideal_peak) <= 1e-9 * params.ideal_peak


def test_noiseless_sync_single_repetition_within_one_sample():
    # with K=1 a window one sample early can differ only by a zero-valued
    # carrier sample, an exact tie that goes to the earlier index
    for seed in range(20):
        params, seq, bits, frame, lead, y = make_frame(seed, 1)
        sync = synchronize(y, params, seq)
        assert abs(sync.tau_star - lead) <= 1
        assert demodulate(y, sync, len(frame.data_phases), params, seq) == bits


def test_ma5_engine_sync_in_if_samples():
    for seed in range(5):
        params, seq, _, _, _, y = make_frame(seed, 8, lead=8 * seed * 3)
        sync = synchronize(y, params, seq, engine="ma5")
        assert sync.engine == "ma5" and sync.tau_star == 3 * seed
        sync_if = synchronize(downconvert(y, params), params, seq, engine="ma5")
        assert sync_if == sync


@pytest.mark.parametrize("engine", ["ma2", "ma5"])
@pytest.mark.parametrize("K", [1, 2, 8, 16])
@pytest.mark.parametrize("M", [2, 4, 8])
def test_loopback(engine, K, M):
    for seed in range(20):
        lead = None if engine == "ma2" else 8 * (seed % 5)
        params, seq, bits, frame, _, y = make_frame(seed * 31 + K, K, M, lead=lead)
        sync = synchronize(y, params, seq, engine=engine)
        assert demodulate(y, sync, len(frame.data_phases), params, seq) == bits


def test_window_reference_without_pilot():
    params = WaveformParams(8, 4, 8, 4, 4)
    seq = generate_phase_sequence(3, params)
    bits = bytes_to_bits(b"\x5a\x0f")
    y = np.concatenate([np.zeros(13), modulate_frame(bits, params, seq).passband.samples])
    sync = synchronize(y, params, seq)
    assert sync.tau_star == 13
    assert demodulate(y, sync, 8, params, seq, reference="window") == bits


def test_zero_stream_and_noise_do_not_lock():
    params = WaveformParams(8, 4, 8, 4, 4)
    seq = generate_phase_sequence(1, params)
    with pytest.raises(NoLock) as info:
        synchronize(np.zeros(1000), params, seq)
    assert info.value.result.lock is False
    misses = 0
    for seed in range(100):
        noise = np.random.default_rng(seed).normal(0, 0.3, 2000)
        try:
            synchronize(noise, params, seq)
        except NoLock:
            misses += 1
    assert misses >= 99


def test_sync_accuracy_under_noise():
    hits = 0
    for trial in range(200):
        params, seq, _, _, lead, y = make_frame(1000 + trial, 8)
        noisy = add_awgn(PassbandBuffer(y), 0.1, trial).samples
        hits += abs(synchronize(noisy, params, seq).tau_star - lead) <= 1
    assert hits >= 190


def _interfered_ber(K, trials=30):
    errors = total = 0
    for trial in range(trials):
        params, seq_a, bits, frame, lead, y = make_frame(500 + trial, K, n_bytes=8, lead=0)
        seq_b = generate_phase_sequence(10_000 + trial, params)
        rng = np.random.default_rng(trial)
        other = bytes_to_bits(rng.integers(0, 256, 8).astype(np.uint8).tobytes())
        interferer = modulate_frame(other, params, seq_b, pilot=True).passband.samples
        shift = int(rng.integers(1, params.T))
        mixed = y.copy()
        mixed[shift : shift + len(interferer)] += interferer[: len(mixed) - shift]
        sync = SyncResult(0, 1 + 0j, True)
        got = demodulate(mixed, sync, len(frame.data_phases), params, seq_a)
        errors += round(bit_error_rate(bits, got) * len(bits))
        total += len(bits)
    return errors / total


def test_interferer_hurts_less_with_more_repetitions():
    assert _interfered_ber(16) < _interfered_ber(1)


def test_demodulate_requires_lock():
    params = WaveformParams(8, 4, 1, 4, 4)
    seq = generate_phase_sequence(1, params)
    with pytest.raises(NotLocked):
        demodulate(np.zeros(100), SyncResult(0, 0j, False), 1, params, seq)


def test_threshold_range():
    params = WaveformParams(8, 4, 1, 4, 4)
    with pytest.raises(ValueError):
        synchronize(np.zeros(100), params, generate_phase_sequence(1, params), threshold=0)


def test_bit_error_rate_examples():
    a = [0, 1, 1, 0, 1, 0, 0, 1]
    assert bit_error_rate(a, a) == 0
    assert bit_error_rate(a, [1 - b for b in a]) == 1
    assert bit_error_rate(a, [1 - a[0]] + a[1:]) == 0.125
    with pytest.raises(LengthMismatch):
        bit_error_rate(a, a[:-1])


def test_sync_result_json():
    r = SyncResult(5, 3 + 4j, True)
    d = r.to_dict()
    assert d["peak_abs"] == 5 and d["tau_star"] == 5 and d["lock"] is True
