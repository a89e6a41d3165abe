"""The ``.dnac`` container and FASTA export.

A ``.dnac`` file is one ASCII list literal::

    ['SEQ1', 'SEQ2', ..., 'SEQn']

with ``, `` between items and no trailing newline. The reader is a small
state machine that works on arbitrary read sizes: an item split across two
reads is simply held until its closing quote arrives.
"""

from __future__ import annotations

import re
from typing import BinaryIO, Iterable, Iterator

import numpy as np

from .encoder import OLIGO_LENGTH, Oligo
from .errors import BadOligo, MalformedContainer
from .trit_dna import _BASE_CODE

FASTA_TAG = "dnacloud"
READ_SIZE = 1 << 16
_BATCH = 4096

_OPEN, _FIRST, _ITEM, _SEP, _END = range(5)


def _as_str(oligo) -> str:
    return oligo.bases if isinstance(oligo, Oligo) else oligo


class DnacWriter:
    """Streaming ``.dnac`` writer; call :meth:`close` to emit the ``]``."""

    def __init__(self, sink: BinaryIO):
        self.sink = sink
        self.count = 0
        self.bytes_written = 0
        self._closed = False

    def write(self, oligos: Iterable) -> None:
        parts = []
        for oligo in oligos:
            seq = _as_str(oligo)
            if len(seq) != OLIGO_LENGTH:
                raise BadOligo(self.count, f"length {len(seq)} != {OLIGO_LENGTH}")
            parts.append(seq)
            self.count += 1
        if not parts:
            return
        lead = "['" if self.count == len(parts) else ", '"
        text = lead + "', '".join(parts) + "'"
        self.bytes_written += self.sink.write(text.encode("ascii"))

    def close(self) -> int:
        if not self._closed:
            tail = "]" if self.count else "[]"
            self.bytes_written += self.sink.write(tail.encode("ascii"))
            self._closed = True
        return self.bytes_written


def write_dnac(oligos: Iterable, sink: BinaryIO) -> int:
    """Serialize oligos to ``sink``; returns the byte count."""
    writer = DnacWriter(sink)
    writer.write(oligos)
    return writer.close()


def _validate(items: list[bytes], first_ordinal: int) -> list[str]:
    for i, raw in enumerate(items):
        if len(raw) != OLIGO_LENGTH:
            raise BadOligo(first_ordinal + i, f"length {len(raw)} != {OLIGO_LENGTH}")
    if not items:
        return []
    joined = b"".join(items)
    codes = _BASE_CODE[np.frombuffer(joined, dtype=np.uint8)].reshape(len(items), OLIGO_LENGTH)
    bad = (codes == 255).any(axis=1)
    if bad.any():
        i = int(np.argmax(bad))
        raise BadOligo(first_ordinal + i, "character outside A/C/G/T")
    repeats = (codes[:, 1:] == codes[:, :-1]).any(axis=1)
    if repeats.any():
        i = int(np.argmax(repeats))
        raise BadOligo(first_ordinal + i, "adjacent equal bases")
    text = joined.decode("ascii")
    return [text[i : i + OLIGO_LENGTH] for i in range(0, len(text), OLIGO_LENGTH)]


def iter_dnac_batches(source: BinaryIO, read_size: int = READ_SIZE) -> Iterator[list[str]]:
    """Yield validated oligo strings from a ``.dnac`` stream in batches."""
    buf = b""
    base = 0  # absolute offset of buf[0]
    pos = 0
    state = _OPEN
    eof = False
    items: list[bytes] = []
    ordinal = 0

    def fail(offset, msg):
        raise MalformedContainer(offset, msg)

    while True:
        if not eof and (len(buf) - pos < 3 or state == _ITEM):
            chunk = source.read(read_size)
            if chunk:
                buf = buf[pos:] + chunk
                base += pos
                pos = 0
            else:
                eof = True
        progressed = False
        while pos < len(buf):
            if state == _OPEN:
                if buf[pos : pos + 1] != b"[":
                    fail(base + pos, "expected '['")
                pos += 1
                state = _FIRST
            elif state == _FIRST:
                c = buf[pos : pos + 1]
                if c == b"]":
                    pos += 1
                    state = _END
                elif c == b"'":
                    pos += 1
                    state = _ITEM
                else:
                    fail(base + pos, "expected quote or ']'")
            elif state == _ITEM:
                q = buf.find(b"'", pos)
                if q < 0:
                    break
                items.append(buf[pos:q])
                pos = q + 1
                state = _SEP
            elif state == _SEP:
                c = buf[pos : pos + 1]
                if c == b"]":
                    pos += 1
                    state = _END
                elif c == b",":
                    if len(buf) - pos < 3:
                        if eof:
                            fail(base + pos, "truncated separator")
                        break
                    if buf[pos : pos + 3] != b", '":
                        fail(base + pos, "expected \", '\"")
                    pos += 3
                    state = _ITEM
                else:
                    fail(base + pos, "expected ',' or ']'")
            else:
                fail(base + pos, "data after closing ']'")
            progressed = True
        if len(items) >= _BATCH:
            yield _validate(items, ordinal)
            ordinal += len(items)
            items = []
        if eof and not progressed:
            break
    if state != _END:
        fail(base + len(buf), "unexpected end of input")
    if items:
        yield _validate(items, ordinal)


def parse_dnac_stream(source: BinaryIO, read_size: int = READ_SIZE) -> Iterator[Oligo]:
    for batch in iter_dnac_batches(source, read_size):
        for seq in batch:
            yield Oligo(seq)


def read_dnac(source: BinaryIO) -> list[Oligo]:
    return list(parse_dnac_stream(source))


def export_fasta(oligos: Iterable, file_id: int, sink: BinaryIO) -> int:
    """One two-line record per oligo, chunk number taken from its index."""
    written = 0
    for oligo in oligos:
        if not isinstance(oligo, Oligo):
            oligo = Oligo(oligo)
        record = f">{FASTA_TAG}|id={file_id}|chunk={oligo.position}\n{oligo.bases}\n"
        written += sink.write(record.encode("ascii"))
    return written


_HEADER = re.compile(rf"^>{FASTA_TAG}\|id=(\d+)\|chunk=(\d+)$")


def read_fasta(source: BinaryIO) -> list[tuple[int, int, str]]:
    """Parse records written by :func:`export_fasta` into (id, chunk, seq)."""
    records = []
    header = None
    for n, line in enumerate(source.read().decode("ascii").splitlines(), 1):
        if line.startswith(">"):
            m = _HEADER.match(line)
            if not m:
                raise ValueError(f"line {n}: unrecognized header {line!r}")
            header = (int(m.group(1)), int(m.group(2)))
        elif line:
            if header is None:
                raise ValueError(f"line {n}: sequence before header")
            records.append((*header, line))
            header = None
    return records
