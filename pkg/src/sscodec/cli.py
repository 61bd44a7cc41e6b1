"""Command-line front end: encode, decode, analyze, compare, synth.

Exit codes: 0 success, 2 usage or format error, 3 numerical abort inside a
pursuit (the failing block index is reported). Outputs carry no timestamps,
so identical inputs and flags give byte-identical streams and CSVs; the
one exception is the wall-time column of ``compare``, which measures the
runs themselves.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import codec, metrics, synth
from .audio import UnsupportedWavError, read_wav, write_wav
from .codec import BlockEncodingError, StreamFormatError
from .dictionary import Case, DictionarySpec, atom_count_for_redundancy
from .pursuit import ConvergenceError

__all__ = ["main"]

_DEFAULTS = {
    "case": "mixed",
    "redundancy": 4.0,
    "block_size": 8192,
    "snr": 35.0,
    "method": "spmp",
}
_BLOCK_SIZE_GRID = "512,1024,2048,4096,8192,16384"


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    return [int(part) for part in text.split(",") if part]


def _str_list(text: str) -> list[str]:
    return [part.strip() for part in text.split(",") if part.strip()]


def _add_spec_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--case", choices=[c.value for c in Case], default=None,
                        help="dictionary family (default: mixed)")
    parser.add_argument("--redundancy", type=float, default=None,
                        help="atoms per sample, M = redundancy * block size (default: 4; "
                             "the basis method runs at 1)")
    parser.add_argument("--block-size", type=int, default=None,
                        help="partition unit length N_b (default: 8192)")
    parser.add_argument("--snr", type=float, default=None,
                        help="target SNR in dB (default: 35; 25 suits multi-instrument material)")
    parser.add_argument("--epsilon", type=float, default=None,
                        help="self-projection tolerance (default: 1e-4 * block threshold)")
    parser.add_argument("--jobs", type=int, default=os.cpu_count() or 1,
                        help="parallel block-encoding workers (default: logical cores)")


def _resolve_spec(args, method: str) -> DictionarySpec:
    case = Case.from_string(args.case or _DEFAULTS["case"])
    block_size = args.block_size or _DEFAULTS["block_size"]
    if method == "basis":
        if args.redundancy is not None and args.redundancy != 1.0:
            raise UsageError("the basis method requires redundancy 1")
        redundancy = 1.0
    else:
        redundancy = args.redundancy if args.redundancy is not None else _DEFAULTS["redundancy"]
    num_atoms = atom_count_for_redundancy(case, redundancy, block_size)
    return DictionarySpec(case, num_atoms, block_size)


def _echo_spec(spec: DictionarySpec, method: str, target_snr: float) -> None:
    print(
        f"case={spec.case.value} M={spec.num_atoms} block={spec.block_len} "
        f"redundancy={spec.redundancy:g} method={method} target_snr={target_snr:g}dB"
    )


def _cmd_encode(args) -> int:
    method = args.method or _DEFAULTS["method"]
    spec = _resolve_spec(args, method)
    target_snr = args.snr if args.snr is not None else _DEFAULTS["snr"]
    signal, sample_rate = read_wav(args.input)
    _echo_spec(spec, method, target_snr)

    result = codec.encode(
        signal, spec, target_snr, method,
        epsilon=args.epsilon, sample_rate=sample_rate, jobs=args.jobs,
    )
    codec.write_stream(result.stream, args.output)
    if args.debug_json:
        Path(args.debug_json).write_text(codec.stream_to_json(result.stream))

    report = metrics.report_from_stream(result.stream, signal, result.iteration_logs)
    metrics_path = args.metrics or f"{args.output}.metrics.csv"
    metrics.write_metrics_csv(report, metrics_path)
    print(
        f"wrote {args.output}: K={result.stream.total_coefficients} "
        f"SR={report.sr:.3f} SNR={report.snr_db:.2f}dB kappa={report.kappa_bar_bar:.2f}"
    )
    return 0


def _cmd_decode(args) -> int:
    stream = codec.read_stream(args.input)
    signal = codec.decode(stream)
    write_wav(args.output, signal, stream.header.sample_rate)
    print(f"wrote {args.output}: {signal.size} samples at {stream.header.sample_rate} Hz")
    return 0


def _cmd_analyze(args) -> int:
    stream = codec.read_stream(args.input)
    original, _ = read_wav(args.original)
    if original.size != stream.header.signal_len:
        raise UsageError(
            f"original length {original.size} does not match the stream "
            f"({stream.header.signal_len} samples)"
        )
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = Path(args.input).stem

    report = metrics.report_from_stream(stream, original)
    metrics.write_metrics_csv(report, out_dir / f"{stem}_metrics.csv")
    metrics.write_block_profile_csv(report, out_dir / f"{stem}_blocks.csv")
    metrics.sparse_spectrogram_export(
        stream,
        out_dir / f"{stem}_sparse_power.csv",
        out_dir / f"{stem}_sparse_power_dense.csv",
    )
    window = min(args.window, original.size)
    metrics.classic_spectrogram(
        original, window, args.overlap, out_dir / f"{stem}_spectrogram.csv"
    )
    print(f"SNR={report.snr_db:.2f}dB SR={report.sr:.3f} -> {out_dir}")
    return 0


def _cmd_compare(args) -> int:
    signal, sample_rate = read_wav(args.input)
    target_snr = args.snr if args.snr is not None else _DEFAULTS["snr"]
    block_sizes = args.block_sizes
    methods = args.methods
    for method in methods:
        if method not in codec.METHODS:
            raise UsageError(f"unknown method {method!r}")

    rows = []
    sr_by_cell: dict[tuple[int, str], float] = {}
    for block_size in block_sizes:
        for method in methods:
            sub_args = argparse.Namespace(
                case=args.basis_case if method == "basis" else args.case,
                redundancy=None if method == "basis" else args.redundancy,
                block_size=block_size,
            )
            spec = _resolve_spec(sub_args, method)
            started = time.perf_counter()
            try:
                result = codec.encode(
                    signal, spec, target_snr, method,
                    epsilon=args.epsilon, sample_rate=sample_rate, jobs=args.jobs,
                )
            except (BlockEncodingError, ConvergenceError) as exc:
                print(f"block_size={block_size} method={method} failed: {exc}",
                      file=sys.stderr)
                rows.append((block_size, method, "failed", "", "", ""))
                continue
            elapsed = time.perf_counter() - started
            report = metrics.report_from_stream(
                result.stream, signal, result.iteration_logs
            )
            sr_by_cell[(block_size, method)] = report.sr
            gain_cell = ""
            if method == "spmp" and (block_size, "mp") in sr_by_cell:
                gain_cell = f"{metrics.gain(report.sr, sr_by_cell[(block_size, 'mp')]):.4f}"
            rows.append(
                (block_size, method, f"{report.sr:.6f}",
                 f"{report.kappa_bar_bar:.6f}", f"{elapsed:.3f}", gain_cell)
            )
            print(f"block_size={block_size} method={method} SR={report.sr:.3f} "
                  f"kappa={report.kappa_bar_bar:.2f} time={elapsed:.2f}s")

    with open(args.output, "w", encoding="utf-8") as handle:
        handle.write("block_size,method,sr,kappa_bar_bar,wall_time_s,gain_percent\n")
        for row in rows:
            handle.write(",".join(str(cell) for cell in row) + "\n")
    print(f"wrote {args.output}")
    return 0


def _cmd_synth(args) -> int:
    rng = np.random.default_rng(args.seed)
    length = int(round(args.duration * args.sample_rate))
    if length < 16:
        raise UsageError("duration too short for the sample rate")
    if args.kind == "grid":
        block = args.block_size or _DEFAULTS["block_size"]
        signal = synth.grid_sinusoids(length, block, rng, components=args.components)
    elif args.kind == "mix":
        signal = synth.decaying_mixture(length, args.sample_rate, rng, notes=args.components)
    elif args.kind == "noise":
        signal = synth.white_noise(length, rng)
    else:  # sparse
        spec = _resolve_spec(args, method="spmp")
        blocks = max(1, length // spec.block_len)
        pieces = []
        for _ in range(blocks):
            piece, _ = synth.sparse_atoms(spec, args.components, rng)
            peak = np.max(np.abs(piece))
            pieces.append(piece * (0.9 / peak if peak > 1.0 else 1.0))
        signal = np.concatenate(pieces)
    write_wav(args.output, signal, args.sample_rate)
    print(f"wrote {args.output}: kind={args.kind} {signal.size} samples")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sscodec",
        description="Sparse spectral audio coding over redundant trigonometric dictionaries",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    enc = commands.add_parser("encode", help="encode a WAV file to an SSC1 stream")
    enc.add_argument("input")
    enc.add_argument("output")
    enc.add_argument("--method", choices=codec.METHODS, default=None,
                     help="sparse coding method (default: spmp)")
    _add_spec_flags(enc)
    enc.add_argument("--metrics", default=None, help="metrics CSV path "
                     "(default: <output>.metrics.csv)")
    enc.add_argument("--debug-json", default=None,
                     help="also dump the stream as canonical JSON")
    enc.set_defaults(run=_cmd_encode)

    dec = commands.add_parser("decode", help="decode an SSC1 stream to WAV")
    dec.add_argument("input")
    dec.add_argument("output")
    dec.set_defaults(run=_cmd_decode)

    ana = commands.add_parser("analyze",
                              help="measure a stream against the original WAV")
    ana.add_argument("input", help="SSC1 stream")
    ana.add_argument("original", help="original WAV")
    ana.add_argument("--out-dir", default=".")
    ana.add_argument("--window", type=int, default=4096,
                     help="classic spectrogram window (default: 4096)")
    ana.add_argument("--overlap", type=float, default=0.5,
                     help="classic spectrogram overlap fraction (default: 0.5)")
    ana.set_defaults(run=_cmd_analyze)

    cmp_ = commands.add_parser("compare",
                               help="sweep block sizes and methods at a fixed SNR")
    cmp_.add_argument("input")
    cmp_.add_argument("output", help="CSV sweep report")
    cmp_.add_argument("--block-sizes", type=_int_list, default=_int_list(_BLOCK_SIZE_GRID),
                      help=f"comma-separated N_b sweep (default: {_BLOCK_SIZE_GRID})")
    cmp_.add_argument("--methods", type=_str_list, default=["basis", "mp", "spmp"],
                      help="comma-separated methods (default: basis,mp,spmp)")
    cmp_.add_argument("--basis-case", choices=[c.value for c in Case], default="dct",
                      help="orthonormal basis used for basis cells (default: dct)")
    _add_spec_flags(cmp_)
    cmp_.set_defaults(run=_cmd_compare)

    syn = commands.add_parser("synth", help="generate a synthetic test WAV")
    syn.add_argument("output")
    syn.add_argument("--kind", choices=["grid", "mix", "noise", "sparse"], default="mix")
    syn.add_argument("--seed", type=int, default=0)
    syn.add_argument("--duration", type=float, default=2.0, help="seconds (default: 2)")
    syn.add_argument("--sample-rate", type=int, default=22050)
    syn.add_argument("--components", type=int, default=5,
                     help="sinusoids / notes / atoms per block (default: 5)")
    _add_spec_flags(syn)
    syn.set_defaults(run=_cmd_synth)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.run(args)
    except (UsageError, UnsupportedWavError, StreamFormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (BlockEncodingError, ConvergenceError) as exc:
        print(f"numerical abort: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
