"""File -> DNA string -> 117-base oligos.

The byte stream is read ``buffer_size`` bytes at a time; each buffer is
Huffman coded and rotation coded starting from the last base of the
previous buffer, so the result never depends on the buffer size. A zero pad
and a 20-trit length footer close the string at a multiple of 25 bases.

Segmentation cuts 100-base windows every 25 bases (each interior base lands
in four oligos) and keeps only the trailing 75 bases between feeds.
"""

from __future__ import annotations

import io
import os
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import BinaryIO, Iterator

import numpy as np

from .errors import InputTooLarge, ParityMismatch, TooShort, TritOverflow
from .huffman3 import Huffman3Table, build_table
from .trit_dna import (
    BASES,
    SEED_BASE,
    base_code,
    codes_to_dna,
    dna_to_codes,
    dna_to_trits,
    int_to_trits,
    rotate_array,
    trits_to_array,
    trits_to_dna,
)

SEGMENT_LENGTH = 100
STEP = 25
OVERLAP = SEGMENT_LENGTH - STEP
ID_TRITS = 2
CHUNK_TRITS = 12
INDEX_TRITS = ID_TRITS + CHUNK_TRITS + 1
FOOTER_TRITS = 20
OLIGO_LENGTH = 1 + SEGMENT_LENGTH + INDEX_TRITS + 1

MAX_FILE_ID = 3**ID_TRITS - 1
CHUNK_CAPACITY = 3**CHUNK_TRITS
MAX_PAYLOAD_LENGTH = 3**FOOTER_TRITS - 1
# worst case is six trits for every byte
MAX_FILE_SIZE = MAX_PAYLOAD_LENGTH // 6

DEFAULT_BUFFER_SIZE = 1 << 20
_SMALL_BUFFER = 64
_COALESCE = 1 << 16

_A, _C, _G, _T = range(4)


@dataclass(frozen=True)
class EncoderConfig:
    buffer_size: int = DEFAULT_BUFFER_SIZE
    file_id: int = 0
    check_index_capacity: bool = True

    def __post_init__(self):
        if self.buffer_size < 1:
            raise ValueError("buffer_size must be at least 1")
        if not 0 <= self.file_id <= MAX_FILE_ID:
            raise ValueError(f"file_id must be in 0..{MAX_FILE_ID}")


@dataclass(frozen=True)
class IndexInfo:
    """File id, chunk number and parity: 15 trits in all."""

    file_id: int
    chunk_number: int

    @property
    def parity(self) -> int:
        return sum(map(int, self._body())) % 3

    def _body(self) -> str:
        return int_to_trits(self.file_id, ID_TRITS) + int_to_trits(self.chunk_number, CHUNK_TRITS)

    def trits(self) -> str:
        return self._body() + str(self.parity)

    @classmethod
    def from_trits(cls, trits: str) -> "IndexInfo":
        if len(trits) != INDEX_TRITS:
            raise ValueError(f"index must be {INDEX_TRITS} trits, got {len(trits)}")
        info = cls(int(trits[:ID_TRITS], 3), int(trits[ID_TRITS:-1], 3))
        if int(trits[-1]) != info.parity:
            raise ParityMismatch(info.chunk_number)
        return info


@dataclass(frozen=True)
class Oligo:
    """One synthesized strand: flank, 100-base payload, index, flank."""

    bases: str

    @property
    def payload(self) -> str:
        return self.bases[1 : 1 + SEGMENT_LENGTH]

    @property
    def index_region(self) -> str:
        return self.bases[1 + SEGMENT_LENGTH : -1]

    @cached_property
    def index(self) -> IndexInfo:
        """Decoded index; raises ``ParityMismatch`` or ``HomopolymerViolation``."""
        trits = dna_to_trits(self.index_region, self.bases[SEGMENT_LENGTH])
        return IndexInfo.from_trits(trits)

    @property
    def position(self) -> int:
        return self.index.chunk_number

    def __len__(self):
        return len(self.bases)

    def __str__(self):
        return self.bases


@dataclass(frozen=True)
class EncodeReport:
    file_size: int
    dna_length: int
    oligo_count: int
    oligo_length: int = OLIGO_LENGTH


# -- bytes -> DNA string ----------------------------------------------------


def footer_for(payload_length: int, prev: int, min_length: int = 0) -> str:
    """DNA that follows a payload: zero pad, then the 20-trit length.

    ``prev`` is the code of the payload's last base. The pad is the shortest
    run that brings the total to a multiple of 25 and at least
    ``min_length``.
    """
    try:
        length_trits = int_to_trits(payload_length, FOOTER_TRITS)
    except TritOverflow as exc:
        raise InputTooLarge(
            f"DNA payload of {payload_length} bases exceeds {MAX_PAYLOAD_LENGTH}"
        ) from exc
    total = payload_length + FOOTER_TRITS
    total = max(total, min_length)
    total += -total % STEP
    pad = total - payload_length - FOOTER_TRITS
    return trits_to_dna("0" * pad + length_trits, BASES[prev])


def append_length_footer(payload: str, min_length: int = 0) -> str:
    prev = payload[-1] if payload else SEED_BASE
    return payload + footer_for(len(payload), base_code(prev), min_length)


@lru_cache(maxsize=None)
def _byte_lut(table: Huffman3Table) -> tuple[list[list[str]], list[list[int]]]:
    dna = [[""] * 256 for _ in range(4)]
    last = [[0] * 256 for _ in range(4)]
    for prev in range(4):
        for b in range(256):
            codes = rotate_array(trits_to_array(table.codeword_of[b]), prev)
            dna[prev][b] = codes_to_dna(codes)
            last[prev][b] = int(codes[-1])
    return dna, last


class DnaStreamEncoder:
    """Incremental bytes -> homopolymer-free DNA with a closing footer."""

    def __init__(self, table: Huffman3Table | None = None, min_length: int = 0):
        self.table = table or build_table()
        self.min_length = min_length
        self.prev = base_code(SEED_BASE)
        self.length = 0
        self.bytes_in = 0
        self._lut = None

    def update(self, data: bytes) -> str:
        if len(data) < _SMALL_BUFFER:
            if self._lut is None:
                self._lut = _byte_lut(self.table)
            dna_lut, last_lut = self._lut
            prev = self.prev
            parts = []
            for b in data:
                parts.append(dna_lut[prev][b])
                prev = last_lut[prev][b]
            out = "".join(parts)
            self.prev = prev
        else:
            codes = rotate_array(self.table.encode_array(data), self.prev)
            out = codes_to_dna(codes)
            if codes.size:
                self.prev = int(codes[-1])
        self.length += len(out)
        self.bytes_in += len(data)
        if self.length > MAX_PAYLOAD_LENGTH:
            raise InputTooLarge(
                f"DNA payload exceeds {MAX_PAYLOAD_LENGTH} bases after {self.bytes_in} bytes"
            )
        return out

    def finish(self) -> str:
        return footer_for(self.length, self.prev, self.min_length)


def _known_size(stream) -> int | None:
    try:
        return os.fstat(stream.fileno()).st_size - stream.tell()
    except (AttributeError, OSError, io.UnsupportedOperation):
        pass
    if isinstance(stream, io.BytesIO):
        return len(stream.getbuffer()) - stream.tell()
    return None


def check_file_size(size: int) -> None:
    """Reject inputs whose worst-case DNA length cannot fit the footer."""
    if size > MAX_FILE_SIZE:
        raise InputTooLarge(f"input of {size} bytes exceeds the {MAX_FILE_SIZE}-byte limit")


def iter_dna(
    stream: BinaryIO,
    config: EncoderConfig = EncoderConfig(),
    table: Huffman3Table | None = None,
    min_length: int = 0,
) -> Iterator[str]:
    """Yield the DNA string for ``stream`` piece by piece, footer last."""
    size = _known_size(stream)
    if size is not None:
        check_file_size(size)
    enc = DnaStreamEncoder(table, min_length)
    while True:
        buf = stream.read(config.buffer_size)
        if not buf:
            break
        piece = enc.update(buf)
        if piece:
            yield piece
    yield enc.finish()


def encode_stream_to_dna(
    stream: BinaryIO,
    config: EncoderConfig = EncoderConfig(),
    table: Huffman3Table | None = None,
) -> str:
    return "".join(iter_dna(stream, config, table))


# -- DNA string -> oligos ---------------------------------------------------

_ID_POWERS = 3 ** np.arange(CHUNK_TRITS - 1, -1, -1)


def _build_oligos(window_codes: np.ndarray, chunks: np.ndarray, file_id: int) -> list[str]:
    """Assemble flanked, indexed oligos from an (n, 100) array of payloads."""
    n = window_codes.shape[0]
    id_trits = trits_to_array(int_to_trits(file_id, ID_TRITS)).astype(np.int64)
    index = np.empty((n, INDEX_TRITS), dtype=np.int64)
    index[:, :ID_TRITS] = id_trits
    index[:, ID_TRITS:-1] = (chunks[:, None] // _ID_POWERS) % 3
    index[:, -1] = index[:, :-1].sum(axis=1) % 3

    out = np.empty((n, OLIGO_LENGTH), dtype=np.uint8)
    out[:, 1 : 1 + SEGMENT_LENGTH] = window_codes
    last = window_codes[:, -1].astype(np.int64)
    out[:, 1 + SEGMENT_LENGTH : -1] = (last[:, None] + np.cumsum(index + 1, axis=1)) % 4
    out[:, 0] = np.where(window_codes[:, 0] == _A, _T, _A)
    out[:, -1] = np.where(out[:, -2] == _G, _C, _G)
    flat = codes_to_dna(out.ravel())
    return [flat[i : i + OLIGO_LENGTH] for i in range(0, len(flat), OLIGO_LENGTH)]


class OligoSegmenter:
    """Cut a DNA string arriving in pieces into overlapping oligos."""

    def __init__(self, file_id: int = 0, check_index_capacity: bool = True):
        self.file_id = file_id
        self.check_index_capacity = check_index_capacity
        self.pending = ""
        self.count = 0
        self.total_length = 0

    def feed(self, dna: str) -> list[str]:
        self.total_length += len(dna)
        buf = self.pending + dna
        n = (len(buf) - OVERLAP) // STEP if len(buf) >= SEGMENT_LENGTH else 0
        if n <= 0:
            self.pending = buf
            return []
        chunks = np.arange(self.count, self.count + n, dtype=np.int64)
        if chunks[-1] >= CHUNK_CAPACITY:
            if self.check_index_capacity:
                raise InputTooLarge(
                    f"more than {CHUNK_CAPACITY} oligos; the chunk number field would wrap"
                )
            chunks %= CHUNK_CAPACITY
        codes = dna_to_codes(buf[: (n - 1) * STEP + SEGMENT_LENGTH])
        windows = np.lib.stride_tricks.sliding_window_view(codes, SEGMENT_LENGTH)[::STEP]
        oligos = _build_oligos(windows, chunks, self.file_id)
        self.count += n
        self.pending = buf[n * STEP :]
        return oligos

    def finish(self) -> list[str]:
        if self.total_length % STEP:
            raise ValueError(f"DNA length {self.total_length} is not a multiple of {STEP}")
        if self.total_length < SEGMENT_LENGTH:
            raise TooShort(f"DNA length {self.total_length} is below {SEGMENT_LENGTH}")
        return []


def segment_into_oligos(dna: str, config: EncoderConfig = EncoderConfig()) -> list[Oligo]:
    seg = OligoSegmenter(config.file_id, config.check_index_capacity)
    if len(dna) < SEGMENT_LENGTH:
        raise TooShort(f"DNA length {len(dna)} is below {SEGMENT_LENGTH}")
    oligos = seg.feed(dna) + seg.finish()
    return [Oligo(s) for s in oligos]


def iter_oligo_batches(
    stream: BinaryIO,
    config: EncoderConfig = EncoderConfig(),
    table: Huffman3Table | None = None,
    segmenter: OligoSegmenter | None = None,
) -> Iterator[list[str]]:
    """Full encode pipeline, yielding lists of oligo strings in order.

    DNA strings shorter than one segment are zero-padded before the footer
    so that even an empty file yields one oligo.
    """
    seg = segmenter or OligoSegmenter(config.file_id, config.check_index_capacity)
    pending: list[str] = []
    size = 0
    for piece in iter_dna(stream, config, table, min_length=SEGMENT_LENGTH):
        pending.append(piece)
        size += len(piece)
        if size >= _COALESCE:
            batch = seg.feed("".join(pending))
            pending, size = [], 0
            if batch:
                yield batch
    batch = seg.feed("".join(pending)) + seg.finish()
    if batch:
        yield batch


def encode_to_oligos(
    data: bytes | BinaryIO,
    config: EncoderConfig = EncoderConfig(),
    table: Huffman3Table | None = None,
) -> list[str]:
    """In-memory convenience wrapper: bytes or stream -> list of oligo strings."""
    stream = io.BytesIO(data) if isinstance(data, (bytes, bytearray, memoryview)) else data
    out: list[str] = []
    for batch in iter_oligo_batches(stream, config, table):
        out.extend(batch)
    return out
