"""Command-line interface.

Exit codes: 0 success, 1 I/O or unexpected codec failure, 2 usage error or
missing input, 3 malformed container, 4 tied vote, 5 coverage gap,
6 other decode failure (footer, parity, file id, dangling trits),
7 input too large.
"""

from __future__ import annotations

import argparse
import csv
import os
import shutil
import sys
import tempfile
from pathlib import Path

from . import __version__
from .channel import ChannelConfig, iter_trials
from .decoder import decode_dnac
from .encoder import (
    DEFAULT_BUFFER_SIZE,
    EncodeReport,
    EncoderConfig,
    OligoSegmenter,
    iter_oligo_batches,
)
from .errors import (
    BadOligo,
    CodecError,
    CoverageGap,
    InputTooLarge,
    MalformedContainer,
    OutOfOrder,
    VoteTie,
)
from .estimator import estimate_biochem, estimate_memory
from .formats import DnacWriter, export_fasta, parse_dnac_stream
from .huffman3 import build_table

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_CONTAINER = 3
EXIT_TIE = 4
EXIT_COVERAGE = 5
EXIT_DECODE = 6
EXIT_TOO_LARGE = 7

SIMULATE_FIELDS = ["seed", "trial", "drop_rate", "sub_rate", "dup_factor",
                   "recovered", "discarded", "conflicts"]


class UsageError(Exception):
    pass


def human_size(n: float) -> str:
    for unit in ("B", "KiB", "MiB", "GiB", "TiB"):
        if abs(n) < 1024 or unit == "TiB":
            return f"{n:.0f} {unit}" if unit == "B" else f"{n:.1f} {unit}"
        n /= 1024


def _exit_code(exc: Exception) -> int:
    if isinstance(exc, (MalformedContainer, BadOligo)):
        return EXIT_CONTAINER
    if isinstance(exc, VoteTie):
        return EXIT_TIE
    if isinstance(exc, CoverageGap):
        return EXIT_COVERAGE
    if isinstance(exc, InputTooLarge):
        return EXIT_TOO_LARGE
    if isinstance(exc, CodecError):
        return EXIT_DECODE
    return EXIT_FAILURE


def _emit(report: dict, labels: dict, machine: bool, stream, save: str | None = None) -> None:
    if machine:
        lines = [f"{k}={v}" for k, v in report.items()]
    else:
        width = max(len(labels[k]) for k in report)
        lines = [f"{labels[k]:<{width}} : {_fmt(k, v)}" for k, v in report.items()]
    text = "\n".join(lines) + "\n"
    stream.write(text)
    if save:
        Path(save).write_text(text)


def _fmt(key: str, value) -> str:
    if key in _BYTE_KEYS:
        return f"{value} bytes ({human_size(value)})"
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


_BYTE_KEYS = {"file_size", "bytes_written", "free_memory_required", "dnac_size"}

_LABELS = {
    "input": "Input",
    "output": "Output",
    "file_size": "File size",
    "dna_length": "Length of DNA string",
    "oligo_count": "No of DNA oligonucleotides (chunks)",
    "oligo_length": "Length of each DNA oligonucleotide",
    "dnac_size": "Container size",
    "bytes_written": "Bytes written",
    "oligos_read": "Oligos read",
    "discarded": "Oligos discarded",
    "vote_conflicts": "Positions with disagreeing votes",
    "dna_string_length": "Size of DNA string (bases)",
    "free_memory_required": "Free memory required",
    "dna_mass_g": "Amount of DNA required (g)",
    "total_bases": "Total synthesized bases",
    "gc_percent": "GC content (%)",
    "melting_temperature_c": "Melting temperature (C)",
    "salt_mm": "Salt concentration (mM)",
    "cost_per_base": "Cost per base",
    "total_cost": "Total cost",
}


def _require_input(path: str) -> Path:
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"input file not found: {path}")
    return p


def _replace_output(tmp_path: str, output: str | None) -> None:
    if output is None or output == "-":
        with open(tmp_path, "rb") as fh:
            shutil.copyfileobj(fh, sys.stdout.buffer)
        sys.stdout.flush()
        os.unlink(tmp_path)
    else:
        os.replace(tmp_path, output)


def _temp_near(output: str | None) -> str:
    where = None if output in (None, "-") else (os.path.dirname(os.path.abspath(output)))
    fd, path = tempfile.mkstemp(prefix=".dnastash-", dir=where)
    os.close(fd)
    return path


def cmd_encode(args) -> int:
    src = _require_input(args.input)
    output = args.output or str(src) + ".dnac"
    config = EncoderConfig(args.buffer_size, args.file_id, not args.force_index_overflow)
    seg = OligoSegmenter(config.file_id, config.check_index_capacity)
    tmp = _temp_near(output)
    try:
        with open(src, "rb") as fin, open(tmp, "wb") as fout:
            writer = DnacWriter(fout)
            for batch in iter_oligo_batches(fin, config, segmenter=seg):
                writer.write(batch)
            size = writer.close()
        _replace_output(tmp, output)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    report = EncodeReport(src.stat().st_size, seg.total_length, seg.count)
    info = {
        "input": str(src),
        "output": output,
        "file_size": report.file_size,
        "dna_length": report.dna_length,
        "oligo_count": report.oligo_count,
        "oligo_length": report.oligo_length,
        "dnac_size": size,
    }
    _emit(info, _LABELS, args.machine_readable, sys.stdout if output != "-" else sys.stderr)
    return EXIT_OK


def cmd_decode(args) -> int:
    src = _require_input(args.input)
    tmp = _temp_near(args.output)
    try:
        try:
            with open(src, "rb") as fin, open(tmp, "wb") as fout:
                rep = decode_dnac(fin, fout, expect_file_id=args.file_id,
                                  unwrap=args.force_index_overflow)
        except (OutOfOrder, CoverageGap):
            # not in chunk order (a gap may just be a late oligo): hold everything
            with open(src, "rb") as fin, open(tmp, "wb") as fout:
                rep = decode_dnac(fin, fout, expect_file_id=args.file_id,
                                  reorder_window=None)
        _replace_output(tmp, args.output)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    info = {
        "input": str(src),
        "output": args.output or "-",
        "bytes_written": rep.bytes_written,
        "dna_length": rep.dna_length,
        "oligos_read": rep.oligos_read,
        "discarded": len(rep.reassembly.discarded),
        "vote_conflicts": rep.reassembly.vote_conflicts,
    }
    data_to_file = args.output not in (None, "-")
    _emit(info, _LABELS, args.machine_readable, sys.stdout if data_to_file else sys.stderr)
    return EXIT_OK


def cmd_estimate_memory(args) -> int:
    src = _require_input(args.input)
    size = src.stat().st_size
    trits = None
    if args.exact:
        table = build_table()
        trits = 0
        with open(src, "rb") as fh:
            while chunk := fh.read(args.buffer_size):
                trits += table.payload_trits(chunk)
    est = estimate_memory(size, payload_trits=trits, buffer_size=args.buffer_size)
    info = {
        "input": str(src),
        "file_size": est.file_size,
        "dna_string_length": est.dna_string_length,
        "oligo_count": est.oligo_count,
        "free_memory_required": est.free_memory_required,
        "dna_mass_g": est.dna_mass,
    }
    _emit(info, _LABELS, args.machine_readable, sys.stdout, args.save)
    return EXIT_OK


def cmd_estimate_biochem(args) -> int:
    src = _require_input(args.input)
    if args.salt_mm <= 0:
        raise UsageError("--salt-mm must be positive")
    if args.cost_per_base < 0:
        raise UsageError("--cost-per-base must be nonnegative")
    with open(src, "rb") as fh:
        est = estimate_biochem(parse_dnac_stream(fh), args.salt_mm, args.cost_per_base)
    info = {
        "input": str(src),
        "oligo_count": est.oligo_count,
        "total_bases": est.total_bases,
        "gc_percent": round(est.gc_fraction * 100, 4),
        "melting_temperature_c": round(est.melting_temperature, 4),
        "salt_mm": args.salt_mm,
        "cost_per_base": args.cost_per_base,
        "total_cost": round(est.total_cost, 6),
    }
    _emit(info, _LABELS, args.machine_readable, sys.stdout, args.save)
    return EXIT_OK


def cmd_export_fasta(args) -> int:
    src = _require_input(args.input)
    output = args.output or str(src.with_suffix("")) + ".fasta"
    tmp = _temp_near(output)
    try:
        with open(src, "rb") as fin, open(tmp, "wb") as fout:
            oligos = parse_dnac_stream(fin)
            first = next(oligos, None)
            if first is None:
                raise UsageError("container holds no oligos")
            file_id = args.file_id if args.file_id is not None else first.index.file_id

            def chained():
                yield first
                yield from oligos

            export_fasta(chained(), file_id, fout)
        _replace_output(tmp, output)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    if output != "-":
        print(f"wrote {output}")
    return EXIT_OK


def cmd_simulate(args) -> int:
    src = _require_input(args.input)
    if args.dup_factor < 0:
        raise UsageError("--dup-factor must be nonnegative")
    channel = ChannelConfig(args.drop_rate, args.sub_rate, args.dup_factor, args.seed)
    data = src.read_bytes()
    out = sys.stdout if args.output in (None, "-") else open(args.output, "w", newline="")
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(SIMULATE_FIELDS)
        for rep in iter_trials(data, channel, args.trials, EncoderConfig(file_id=args.file_id or 0)):
            writer.writerow([rep.seed, rep.trial, args.drop_rate, args.sub_rate, args.dup_factor,
                             str(rep.recovered).lower(), rep.discarded_oligos, rep.vote_conflicts])
            if rep.error:
                print(f"trial {rep.trial}: {rep.error}", file=sys.stderr)
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def _rate(text: str) -> float:
    value = float(text)
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError("must be within [0, 1]")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def _file_id(text: str) -> int:
    value = int(text)
    if not 0 <= value <= 8:
        raise argparse.ArgumentTypeError("must be in 0..8")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dnastash", description="Store files as DNA oligo pools.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, output_help):
        sp.add_argument("input")
        sp.add_argument("-o", "--output", help=output_help)
        sp.add_argument("--machine-readable", action="store_true",
                        help="print key=value lines instead of a labeled report")

    e = sub.add_parser("encode", help="file -> .dnac")
    common(e, "destination .dnac (default: <input>.dnac)")
    e.add_argument("--buffer-size", type=_positive_int, default=DEFAULT_BUFFER_SIZE)
    e.add_argument("--file-id", type=_file_id, default=0)
    e.add_argument("--force-index-overflow", action="store_true",
                   help="let chunk numbers wrap instead of refusing large inputs")
    e.set_defaults(func=cmd_encode)

    d = sub.add_parser("decode", help=".dnac -> file")
    common(d, "destination file (default: standard output)")
    d.add_argument("--file-id", type=_file_id, default=None,
                   help="reject oligos carrying another file id")
    d.add_argument("--force-index-overflow", action="store_true",
                   help="container was written with wrapped chunk numbers")
    d.set_defaults(func=cmd_decode)

    m = sub.add_parser("estimate-memory", help="size and mass projections for a file")
    common(m, argparse.SUPPRESS)
    m.add_argument("--buffer-size", type=_positive_int, default=DEFAULT_BUFFER_SIZE)
    m.add_argument("--exact", action="store_true",
                   help="scan the file for its exact codeword total")
    m.add_argument("--save", metavar="PATH", help="also write the report to PATH")
    m.set_defaults(func=cmd_estimate_memory)

    b = sub.add_parser("estimate-biochem", help="GC content, Tm and cost of a .dnac pool")
    common(b, argparse.SUPPRESS)
    b.add_argument("--salt-mm", type=float, required=True)
    b.add_argument("--cost-per-base", type=float, required=True)
    b.add_argument("--save", metavar="PATH", help="also write the report to PATH")
    b.set_defaults(func=cmd_estimate_biochem)

    f = sub.add_parser("export-fasta", help=".dnac -> FASTA for synthesizers")
    common(f, "destination FASTA (default: <input without .dnac>.fasta)")
    f.add_argument("--file-id", type=_file_id, default=None)
    f.set_defaults(func=cmd_export_fasta)

    s = sub.add_parser("simulate", help="channel trials; one CSV row per trial")
    common(s, "CSV destination (default: standard output)")
    s.add_argument("--drop-rate", type=_rate, default=0.0)
    s.add_argument("--sub-rate", type=_rate, default=0.0)
    s.add_argument("--dup-factor", type=float, default=1.0)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--trials", type=_positive_int, default=1)
    s.add_argument("--file-id", type=_file_id, default=0)
    s.set_defaults(func=cmd_simulate)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CodecError, OSError, ValueError) as exc:
        print(f"{parser.prog}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return _exit_code(exc)


if __name__ == "__main__":
    sys.exit(main())
