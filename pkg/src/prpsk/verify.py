"""Self-generating verification suite behind ``prpsk verify``.

Every check builds its own random inputs from one seed and reports the
measured deviation next to the bound it must stay under.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Iterable

import numpy as np

from .carrier import Ma1State, Ma2State, Ma3State, rho_direct_many
from .experiments import ma3_adversarial_trial
from .frontend import Ma4State, Ma5State, downconvert, if_index_to_carrier
from .modulator import bytes_to_bits, modulate_frame
from .params import WaveformParams
from .receiver import demodulate, synchronize
from .sequence import PhaseSequence, XorShift64Star, generate_phase_sequence

REPORT_SCHEMA = "prpsk.verify/1"
EQUIV_RTOL = 1e-9


@dataclass
class Check:
    name: str
    measured: float
    bound: float
    passed: bool
    detail: str = ""

    def __post_init__(self) -> None:
        self.measured = float(self.measured)
        self.bound = float(self.bound)
        self.passed = bool(self.passed)


def _max_rel(a: np.ndarray, b: np.ndarray, floor: float = 1e-6) -> float:
    keep = np.abs(b) > floor
    if not keep.any():
        return 0.0
    return float(np.max(np.abs(a[keep] - b[keep]) / np.abs(b[keep])))


def _equivalence_check(params: WaveformParams, seed: int, length: int, streams: int) -> float:
    rng = np.random.default_rng(seed)
    width = params.K * params.T
    worst = 0.0
    for i in range(streams):
        # plain PSK has no repetition phase; Ma1 is compared to the unshifted case
        if params.K == 1:
            seq = PhaseSequence(seed=0, samples_per_period=params.S, shifts=(0,))
        else:
            seq = generate_phase_sequence(seed * 1000 + i, params)
        y = rng.uniform(-1, 1, length)
        state = Ma1State(params) if params.K == 1 else Ma2State(params, seq)
        out = state.process(y)
        taus = np.arange(width - 1, length)
        worst = max(worst, _max_rel(out[taus], rho_direct_many(y, taus - width + 1, params, seq)))
    return worst


def _steady_counts(state, inputs) -> tuple[int, int, int]:
    state.process(inputs[:-1])
    before = state.counter.copy()
    state.step(inputs[-1])
    d = state.counter - before
    return d.complex_adds, d.complex_muls, d.real_adds


def run_checks(seed: int = 1, periods: Iterable[int] = (4, 8, 16), trials: int = 100) -> list[Check]:
    checks: list[Check] = []
    S = 8

    base = WaveformParams(S, 4, 1, 4, 4)
    dev = _equivalence_check(base, seed, 4000, 5)
    checks.append(Check("ma1_vs_direct", dev, EQUIV_RTOL, dev <= EQUIV_RTOL))
    for K in (2, 8, 16):
        dev = _equivalence_check(base.replace(repetitions=K), seed, 4000, 3)
        checks.append(Check(f"ma2_vs_direct_K{K}", dev, EQUIV_RTOL, dev <= EQUIV_RTOL))

    previous = None
    for p in periods:
        devs = [ma3_adversarial_trial(p, seed * 100_003 + t) for t in range(trials)]
        ph = max(d.phase for d in devs)
        mag = max(d.magnitude for d in devs)
        checks.append(Check(f"ma3_phase_p{p}", ph, 1 / (p - 1), ph <= 1 / (p - 1)))
        checks.append(Check(f"ma3_magnitude_p{p}", mag, 1 / (p - 2), mag <= 1 / (p - 2)))
        if previous is not None:
            checks.append(
                Check(
                    f"ma3_phase_shrinks_p{previous[0]}_to_p{p}",
                    ph,
                    previous[1],
                    ph < previous[1],
                )
            )
        previous = (p, ph)

    rng = np.random.default_rng(seed)
    for K in (1, 2, 8, 32):
        params = WaveformParams(S, 4, K, 4, 4)
        seq = generate_phase_sequence(seed + K, params)
        n = 3 * K * params.T
        adds, muls, _ = _steady_counts(Ma5State(params, seq), rng.normal(size=n) + 0j)
        want = (3 * K - 1, K)
        checks.append(
            Check(f"ops_ma5_K{K}", float(adds + muls), float(sum(want)), (adds, muls) == want,
                  f"adds={adds} muls={muls} expected {want}")
        )
    params = WaveformParams(S, 4, 8, 4, 4)
    seq = generate_phase_sequence(seed, params)
    y = rng.uniform(-1, 1, 3 * params.K * params.T)
    for name, state, want in (
        ("ma1", Ma1State(params.replace(repetitions=1)), (2, 1)),
        ("ma2", Ma2State(params, seq), (params.K + 1, params.K + 1)),
        ("ma3", Ma3State(params, seq), (2, 1)),
        ("ma4", Ma4State(params), (2, 0)),
    ):
        inputs = y + 0j if name == "ma4" else y
        adds, muls, _ = _steady_counts(state, inputs)
        checks.append(
            Check(f"ops_{name}", float(adds + muls), float(sum(want)), (adds, muls) == want,
                  f"adds={adds} muls={muls} expected {want}")
        )

    worst = 0.0
    for i in range(5):
        seq = generate_phase_sequence(seed * 7 + i, params)
        y = rng.uniform(-1, 1, 6 * params.K * params.T)
        carrier = Ma2State(params, seq).process(y)
        ifp = Ma5State(params, seq).process(downconvert(y, params).samples)
        idx = np.arange(params.K * params.G - 1, len(ifp))
        worst = max(worst, _max_rel(ifp[idx], carrier[[if_index_to_carrier(i, params) for i in idx]]))
    checks.append(Check("path_if_vs_carrier", worst, EQUIV_RTOL, worst <= EQUIV_RTOL))

    picker = XorShift64Star(seed)
    failures = 0
    runs = 0
    for K in (1, 8):
        for M in (2, 4, 8):
            params = WaveformParams(S, 4, K, 4, M)
            seq = generate_phase_sequence(picker.next_u64(), params)
            data = bytes(picker.below(256) for _ in range(3))
            bits = bytes_to_bits(data)
            frame = modulate_frame(bits, params, seq, pilot=True)
            y = np.concatenate([np.zeros(picker.below(4 * S)), frame.passband.samples])
            sync = synchronize(y, params, seq)
            got = demodulate(y, sync, len(frame.data_phases), params, seq)
            runs += 1
            failures += got != bits
    checks.append(Check("loopback_bit_exact", float(failures), 0.0, failures == 0, f"{runs} frames"))
    return checks


def report(checks: list[Check], seed: int) -> dict:
    return {
        "schema": REPORT_SCHEMA,
        "seed": seed,
        "passed": all(c.passed for c in checks),
        "checks": [asdict(c) for c in checks],
    }


__all__ = ["Check", "REPORT_SCHEMA", "report", "run_checks"]
