"""Simulated synthesis/sequencing channel and recovery trials.

Each trial draws from its own PCG64 stream seeded by ``(seed, trial)``.
Random draws are made in a fixed order (copy counts, drop uniforms,
substitution uniforms) whatever the rates, so two configs that differ only
in ``drop_rate`` see the same uniforms and their drop sets are nested.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from typing import BinaryIO, Iterator, Sequence

import numpy as np

from .decoder import DnaStreamDecoder, Reassembler
from .encoder import OLIGO_LENGTH, EncoderConfig, encode_to_oligos
from .errors import CodecError
from .trit_dna import _BASE_CODE, _LETTERS


@dataclass(frozen=True)
class ChannelConfig:
    drop_rate: float = 0.0
    substitution_rate: float = 0.0
    duplication_factor: float = 1.0
    seed: int = 0

    def __post_init__(self):
        for name in ("drop_rate", "substitution_rate"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must be within [0, 1]")
        if self.duplication_factor < 0:
            raise ValueError("duplication_factor must be nonnegative")


@dataclass(frozen=True)
class TrialReport:
    seed: int
    trial: int
    recovered: bool
    discarded_oligos: int
    vote_conflicts: int
    error: str | None = None


def trial_rng(seed: int, trial: int = 0) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, trial])))


def apply_channel(
    oligos: Sequence[str],
    config: ChannelConfig,
    rng: np.random.Generator | None = None,
) -> list[str]:
    """Duplicate, drop and mutate a pool; returns the surviving copies shuffled.

    Each oligo gets ``floor(f)`` copies plus one more with probability
    ``f - floor(f)``. Every copy is then lost with ``drop_rate`` and each of
    its bases replaced by one of the other three with ``substitution_rate``.
    """
    rng = rng or trial_rng(config.seed)
    seqs = [o if isinstance(o, str) else o.bases for o in oligos]
    n = len(seqs)
    whole = math.floor(config.duplication_factor)
    extra = rng.random(n) < (config.duplication_factor - whole)
    copies = np.full(n, whole, dtype=np.int64) + extra
    source = np.repeat(np.arange(n), copies)
    keep = rng.random(source.size) >= config.drop_rate
    sub_u = rng.random((source.size, OLIGO_LENGTH))
    shift = rng.integers(1, 4, size=(source.size, OLIGO_LENGTH))
    order = rng.permutation(source.size)

    if n == 0 or source.size == 0:
        return []
    if config.substitution_rate == 0.0:
        survivors = source[order][keep[order]]
        return [seqs[i] for i in survivors.tolist()]

    raw = "".join(seqs).encode("ascii")
    codes = _BASE_CODE[np.frombuffer(raw, dtype=np.uint8)].reshape(n, OLIGO_LENGTH)
    pool = codes[source].astype(np.int64)
    hit = sub_u < config.substitution_rate
    pool[hit] = (pool[hit] + shift[hit]) % 4
    pool = pool[order][keep[order]]
    flat = _LETTERS[pool.ravel()].tobytes().decode("ascii")
    return [flat[i : i + OLIGO_LENGTH] for i in range(0, len(flat), OLIGO_LENGTH)]


def _recover(pool: list[str], original: bytes, seed: int, trial: int, file_id=None) -> TrialReport:
    r = Reassembler(file_id, reorder_window=None)
    sink = io.BytesIO()
    try:
        r.add(pool)
        dec = DnaStreamDecoder(sink)
        dec.feed(r.finish())
        dec.finish()
    except CodecError as exc:
        return TrialReport(seed, trial, False, len(r.report.discarded),
                           r.report.vote_conflicts, f"{type(exc).__name__}: {exc}")
    return TrialReport(
        seed, trial, sink.getvalue() == original,
        len(r.report.discarded), r.report.vote_conflicts,
    )


def iter_trials(
    data: bytes,
    channel: ChannelConfig,
    trials: int,
    encoder: EncoderConfig = EncoderConfig(),
) -> Iterator[TrialReport]:
    """Encode once, then push the pool through ``trials`` channel draws."""
    oligos = encode_to_oligos(data, encoder)
    for t in range(trials):
        pool = apply_channel(oligos, channel, trial_rng(channel.seed, t))
        yield _recover(pool, data, channel.seed, t, encoder.file_id)


def run_trial(
    file: bytes | BinaryIO,
    channel: ChannelConfig,
    trial: int = 0,
    encoder: EncoderConfig = EncoderConfig(),
) -> TrialReport:
    data = file if isinstance(file, (bytes, bytearray)) else file.read()
    oligos = encode_to_oligos(bytes(data), encoder)
    pool = apply_channel(oligos, channel, trial_rng(channel.seed, trial))
    return _recover(pool, bytes(data), channel.seed, trial, encoder.file_id)


def recover_pool(pool: Sequence[str], original: bytes, seed: int = 0, trial: int = 0) -> TrialReport:
    """Decode an already-degraded pool and compare with ``original``."""
    return _recover(list(pool), original, seed, trial)


def recovery_rate(reports: Sequence[TrialReport]) -> float:
    return sum(r.recovered for r in reports) / len(reports) if reports else float("nan")
