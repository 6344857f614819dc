"""``prpsk`` command line: modulate, channel, downconvert, receive, verify, bench.

Exit codes: 0 ok, 2 invalid parameters, 3 no lock, 4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from . import bench as bench_mod
from . import verify as verify_mod
from .buffers import IfBuffer, PassbandBuffer
from .channel import ChannelEntry, ChannelSpec, EmptySpec, apply_channel
from .frontend import downconvert
from .modulator import LengthNotDivisible, bits_to_bytes, bytes_to_bits, modulate_frame
from .params import ParamError, WaveformParams
from .receiver import NoLock, bit_error_rate, correlate, demodulate, synchronize, window_length
from .sequence import PhaseSequence, generate_phase_sequence
from .traces import save_trace, write_rows

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NO_LOCK = 3
EXIT_VERIFY_FAILED = 4

CONFIG_SCHEMA = "prpsk.config/1"


@dataclass
class RunConfig:
    """Everything a command ran with; embedded in each JSON report."""

    command: str
    options: dict = field(default_factory=dict)

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        opts = {}
        for key, value in sorted(vars(args).items()):
            if key in ("command", "func"):
                continue
            if isinstance(value, Path):
                value = str(value)
            elif isinstance(value, tuple):
                value = list(value)
            opts[key] = value
        return cls(args.command, opts)

    def to_dict(self) -> dict:
        return {"schema": CONFIG_SCHEMA, "command": self.command, "options": self.options}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        obj = json.loads(text)
        if obj.get("schema") != CONFIG_SCHEMA:
            raise ValueError(f"unsupported config schema {obj.get('schema')!r}")
        return cls(obj["command"], obj["options"])


class UsageError(Exception):
    pass


def _add_param_flags(p: argparse.ArgumentParser, with_reps: bool = True) -> None:
    p.add_argument("--samples-per-period", type=int, default=8, help="S, samples per carrier period")
    p.add_argument("--periods", type=int, default=4, help="p, carrier periods per symbol")
    if with_reps:
        p.add_argument("--repetitions", type=int, default=8, help="K, repetitions per symbol")
    p.add_argument("--if-samples", type=int, default=4, help="G, IF samples per symbol")
    p.add_argument("--psk-order", type=int, default=4, help="M, PSK constellation size")


def _params(args, repetitions: int | None = None, samples_per_period: int | None = None) -> WaveformParams:
    return WaveformParams(
        samples_per_period if samples_per_period is not None else args.samples_per_period,
        args.periods,
        repetitions if repetitions is not None else args.repetitions,
        args.if_samples,
        args.psk_order,
    )


def _hex_bits(text: str) -> list[int]:
    try:
        return bytes_to_bits(bytes.fromhex(text))
    except ValueError as exc:
        raise UsageError(f"--bits-hex: {exc}") from exc


def _emit(obj: dict, out: Path | None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True)
    if out is not None:
        out.write_text(text + "\n")
    print(text)


def cmd_modulate(args) -> int:
    params = _params(args)
    seq = generate_phase_sequence(args.seed, params)
    bits = _hex_bits(args.bits_hex)
    frame = modulate_frame(bits, params, seq, pilot=not args.no_pilot)
    frame.passband.to_file(args.out)
    seq_path = args.sequence_out or Path(str(args.out) + ".seq.json")
    seq_path.write_text(seq.to_json() + "\n")
    _emit(
        {
            "schema": "prpsk.modulate/1",
            "samples": len(frame.passband),
            "symbols": frame.n_symbols,
            "data_symbols": len(frame.data_phases),
            "pilot": frame.pilot,
            "passband": str(args.out),
            "sequence": str(seq_path),
            "config": RunConfig.from_args(args).to_dict(),
        },
        None,
    )
    return EXIT_OK


def cmd_channel(args) -> int:
    if args.spec is not None:
        spec = ChannelSpec.from_json(args.spec.read_text())
    else:
        n = len(args.input)
        delays = args.delay or [0] * n
        gains = args.gain or [1.0] * n
        if len(delays) != n or len(gains) != n:
            raise UsageError("give one --delay and one --gain per --input, or none")
        spec = ChannelSpec(
            tuple(ChannelEntry(i, d, g) for i, (d, g) in enumerate(zip(delays, gains))),
            args.sigma,
            args.noise_seed,
        )
    streams = [PassbandBuffer.from_file(p) for p in args.input]
    out = apply_channel(streams, spec)
    out.to_file(args.out)
    _emit({"schema": "prpsk.channel/1", "samples": len(out), "spec": json.loads(spec.to_json())}, None)
    return EXIT_OK


def cmd_downconvert(args) -> int:
    params = _params(args, repetitions=1)
    yc = downconvert(PassbandBuffer.from_file(args.input), params)
    yc.to_file(args.out)
    _emit({"schema": "prpsk.downconvert/1", "samples": len(yc), "decimation": params.D}, None)
    return EXIT_OK


def cmd_receive(args) -> int:
    seq = PhaseSequence.from_json(args.sequence.read_text())
    params = _params(args, repetitions=seq.K, samples_per_period=seq.samples_per_period)
    if args.format == "if":
        stream = IfBuffer.from_file(args.input)
        engine = args.engine or "ma5"
    else:
        stream = PassbandBuffer.from_file(args.input)
        engine = args.engine or "ma2"
    config = RunConfig.from_args(args).to_dict()
    try:
        sync = synchronize(stream, params, seq, engine=engine, threshold=args.threshold)
    except NoLock as exc:
        _emit({"schema": "prpsk.receive/1", "sync": exc.result.to_dict(), "error": str(exc),
               "config": config}, args.report)
        return EXIT_NO_LOCK
    width = window_length(params, engine)
    stream_len = len(stream) if engine == "ma2" or args.format == "if" else len(stream) // params.D
    if args.n_symbols is not None:
        n_symbols = args.n_symbols
    else:
        n_symbols = max((stream_len - sync.tau_star) // width - 1, 0)
    bits = demodulate(stream, sync, n_symbols, params, seq, engine)
    result = {
        "schema": "prpsk.receive/1",
        "sync": sync.to_dict(),
        "data_symbols": n_symbols,
        "bits": "".join(map(str, bits)),
        "bits_hex": bits_to_bytes(bits).hex() if len(bits) % 8 == 0 else None,
        "ber": None,
        "config": config,
    }
    if args.bits_hex is not None:
        sent = _hex_bits(args.bits_hex)
        if len(sent) != len(bits):
            raise UsageError(f"--bits-hex has {len(sent)} bits, {len(bits)} were demodulated")
        result["ber"] = bit_error_rate(sent, bits)
    if args.trace_out is not None:
        trace, _ = correlate(stream, params, seq, engine)
        save_trace(args.trace_out, trace)
    _emit(result, args.report)
    return EXIT_OK


def cmd_verify(args) -> int:
    checks = verify_mod.run_checks(seed=args.seed, periods=args.periods, trials=args.trials)
    rep = verify_mod.report(checks, args.seed)
    rep["config"] = RunConfig.from_args(args).to_dict()
    _emit(rep, args.report)
    return EXIT_OK if rep["passed"] else EXIT_VERIFY_FAILED


def cmd_bench(args) -> int:
    rows = bench_mod.run_bench(
        Ks=args.K, Ts=args.T, methods=args.methods, samples=args.samples, repeats=args.repeats
    )
    lines = (r.as_row() for r in rows)
    if args.out is None:
        write_rows(sys.stdout, bench_mod.BENCH_SCHEMA, bench_mod.BENCH_COLUMNS, lines)
    else:
        with open(args.out, "w", newline="") as fh:
            write_rows(fh, bench_mod.BENCH_SCHEMA, bench_mod.BENCH_COLUMNS, lines)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="prpsk", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("modulate", help="write a passband frame and its phase sequence")
    _add_param_flags(p)
    p.add_argument("--seed", type=int, default=1, help="phase sequence seed (u64)")
    p.add_argument("--bits-hex", required=True, help="payload bytes as hex")
    p.add_argument("--no-pilot", action="store_true", help="omit the theta=0 pilot symbol")
    p.add_argument("--out", type=Path, required=True, help="passband output file")
    p.add_argument("--sequence-out", type=Path, help="sequence JSON (default <out>.seq.json)")
    p.set_defaults(func=cmd_modulate)

    p = sub.add_parser("channel", help="superpose passband files and add noise")
    p.add_argument("--input", type=Path, action="append", required=True)
    p.add_argument("--delay", type=int, action="append")
    p.add_argument("--gain", type=float, action="append")
    p.add_argument("--sigma", type=float, default=0.0, help="noise std-dev per sample")
    p.add_argument("--noise-seed", type=int, default=0)
    p.add_argument("--spec", type=Path, help="ChannelSpec JSON (overrides delay/gain/sigma)")
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(func=cmd_channel)

    p = sub.add_parser("downconvert", help="passband file to IF file")
    _add_param_flags(p, with_reps=False)
    p.add_argument("--input", type=Path, required=True)
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(func=cmd_downconvert)

    p = sub.add_parser("receive", help="synchronize and demodulate a file")
    _add_param_flags(p, with_reps=False)
    p.add_argument("--input", type=Path, required=True)
    p.add_argument("--format", choices=("passband", "if"), default="passband")
    p.add_argument("--sequence", type=Path, required=True, help="sequence JSON")
    p.add_argument("--engine", choices=("ma2", "ma5"))
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--n-symbols", type=int, help="data symbols after the pilot")
    p.add_argument("--bits-hex", help="expected payload, for the bit error rate")
    p.add_argument("--trace-out", type=Path, help="write the correlation trace as CSV")
    p.add_argument("--report", type=Path, help="also write the JSON result here")
    p.set_defaults(func=cmd_receive)

    p = sub.add_parser("verify", help="run the equivalence and error-bound checks")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--periods", type=int, nargs="+", default=[4, 8, 16])
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--report", type=Path)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="operation counts and timing per sample")
    p.add_argument("--K", type=int, nargs="+", default=list(bench_mod.DEFAULT_K))
    p.add_argument("--T", type=int, nargs="+", default=list(bench_mod.DEFAULT_T))
    p.add_argument("--methods", nargs="+", default=list(bench_mod.METHODS), choices=bench_mod.METHODS)
    p.add_argument("--samples", type=int, default=2000)
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParamError, LengthNotDivisible, EmptySpec, UsageError) as exc:
        print(f"prpsk {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (ValueError, OSError) as exc:
        print(f"prpsk {args.command}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
