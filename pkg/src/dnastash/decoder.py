"""Oligos -> DNA string -> original bytes.

Reassembly buckets payloads by the chunk number in their index and settles
each 25-base block by majority vote over the (up to four) payloads that
cover it. With a finite ``reorder_window`` blocks are emitted as soon as no
later oligo can still touch them, so an ordered container decodes in
constant memory. ``reorder_window=None`` holds everything and accepts any
arrival order.

The DNA decoder keeps the last 100 bases back until the stream ends, since
only then is it known which of them are pad and footer.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import BinaryIO, Iterable

import numpy as np

from .encoder import (
    CHUNK_CAPACITY,
    CHUNK_TRITS,
    FOOTER_TRITS,
    ID_TRITS,
    OLIGO_LENGTH,
    SEGMENT_LENGTH,
    STEP,
    Oligo,
)
from .errors import (
    BadFooter,
    BadOligo,
    CodecError,
    CoverageGap,
    DanglingTrits,
    HomopolymerViolation,
    InvalidBase,
    OutOfOrder,
    ParityMismatch,
    VoteTie,
    WrongFileId,
)
from .formats import iter_dnac_batches
from .huffman3 import Huffman3Table, build_table
from .trit_dna import (
    SEED_BASE,
    _BASE_CODE,
    _LETTERS,
    base_code,
    dna_to_codes,
    trits_to_int,
    unrotate_array,
    array_to_trits,
)

COVER = SEGMENT_LENGTH // STEP
DEFAULT_REORDER_WINDOW = 4
HOLDBACK = SEGMENT_LENGTH

_CHUNK_POWERS = 3 ** np.arange(CHUNK_TRITS - 1, -1, -1)


@dataclass
class ReassemblyReport:
    file_id: int | None = None
    accepted: int = 0
    discarded: list[CodecError] = field(default_factory=list)
    vote_conflicts: int = 0
    dna_length: int = 0


def _decode_indices(seqs: list[str]):
    """Vectorized index decode for a batch of oligo strings.

    Returns ``(file_ids, chunks, errors)`` where ``errors[i]`` is ``None``
    for a usable oligo and the reason it was rejected otherwise.
    """
    errors: list[CodecError | None] = [None] * len(seqs)
    good = []
    for i, s in enumerate(seqs):
        if len(s) != OLIGO_LENGTH:
            errors[i] = BadOligo(i, f"length {len(s)} != {OLIGO_LENGTH}")
        else:
            good.append(i)
    ids = np.zeros(len(seqs), dtype=np.int64)
    chunks = np.zeros(len(seqs), dtype=np.int64)
    if not good:
        return ids, chunks, errors
    raw = "".join(seqs[i] for i in good).encode("ascii", "replace")
    codes = _BASE_CODE[np.frombuffer(raw, dtype=np.uint8)].reshape(len(good), OLIGO_LENGTH)
    region = codes[:, SEGMENT_LENGTH : OLIGO_LENGTH - 1].astype(np.int16)
    trits = (np.diff(region, axis=1) - 1) % 4
    body = trits[:, :-1]
    file_ids = body[:, 0] * 3 + body[:, 1]
    chunk_nos = body[:, ID_TRITS:] @ _CHUNK_POWERS
    foreign = (codes == 255).any(axis=1)
    repeat = (trits == 3).any(axis=1)
    parity_ok = body.sum(axis=1) % 3 == trits[:, -1]
    for row, i in enumerate(good):
        if foreign[row]:
            errors[i] = InvalidBase(i, "?")
        elif repeat[row]:
            errors[i] = HomopolymerViolation(int(np.argmax(trits[row] == 3)))
        elif not parity_ok[row]:
            errors[i] = ParityMismatch(int(chunk_nos[row]))
        ids[i] = file_ids[row]
        chunks[i] = chunk_nos[row]
    return ids, chunks, errors


class Reassembler:
    """Accumulate oligos and emit the DNA string block by block."""

    def __init__(
        self,
        expect_file_id: int | None = None,
        reorder_window: int | None = DEFAULT_REORDER_WINDOW,
        unwrap: bool = False,
    ):
        self.expect_file_id = expect_file_id
        self.reorder_window = reorder_window
        self.unwrap = unwrap
        self.report = ReassemblyReport(file_id=expect_file_id)
        self._buckets: dict[int, list[str]] = {}
        self._next_block = 0
        self._k_max = -1

    def add(self, oligos: Iterable) -> str:
        """Add a batch of oligos (``Oligo`` or str); return newly final DNA."""
        seqs = [o.bases if isinstance(o, Oligo) else o for o in oligos]
        ids, chunks, errors = _decode_indices(seqs)
        rep = self.report
        for s, fid, k, err in zip(seqs, ids.tolist(), chunks.tolist(), errors):
            if err is not None:
                rep.discarded.append(err)
                continue
            if rep.file_id is None:
                rep.file_id = fid
            elif fid != rep.file_id:
                raise WrongFileId(rep.file_id, fid, k)
            if self.unwrap:
                anchor = max(self._k_max, 0)
                k += CHUNK_CAPACITY * round((anchor - k) / CHUNK_CAPACITY)
            if k < self._next_block:
                raise OutOfOrder(k, self._next_block)
            self._buckets.setdefault(k, []).append(s[1 : 1 + SEGMENT_LENGTH])
            rep.accepted += 1
            if k > self._k_max:
                self._k_max = k
        if self.reorder_window is None:
            return ""
        return self._emit_until(self._k_max - self.reorder_window)

    def finish(self) -> str:
        if self._k_max < 0:
            raise CoverageGap(0)
        return self._emit_until(self._k_max + COVER)

    def _emit_until(self, stop: int) -> str:
        blocks = []
        buckets = self._buckets
        for j in range(self._next_block, stop):
            cands = []
            for k in range(max(0, j - COVER + 1), j + 1):
                off = (j - k) * STEP
                for p in buckets.get(k, ()):
                    cands.append(p[off : off + STEP])
            if not cands:
                raise CoverageGap(j * STEP)
            first = cands[0]
            if all(c == first for c in cands):
                blocks.append(first)
            else:
                blocks.append(self._vote(j, cands))
            buckets.pop(j - COVER + 1, None)
        if stop > self._next_block:
            self._next_block = stop
        out = "".join(blocks)
        self.report.dna_length += len(out)
        return out

    def _vote(self, block: int, cands: list[str]) -> str:
        arr = np.frombuffer("".join(cands).encode("ascii", "replace"), dtype=np.uint8)
        arr = arr.reshape(len(cands), STEP)
        counts = (arr[None, :, :] == _LETTERS[:, None, None]).sum(axis=1)
        best = counts.max(axis=0)
        ties = (counts == best).sum(axis=0) > 1
        if ties.any():
            raise VoteTie(block * STEP + int(np.argmax(ties)))
        self.report.vote_conflicts += int((best < len(cands)).sum())
        return _LETTERS[counts.argmax(axis=0)].tobytes().decode("ascii")


def reassemble_dna(
    oligos: Iterable,
    expect_file_id: int | None = None,
    *,
    unwrap: bool = False,
) -> str:
    """Rebuild the DNA string from oligos in any order.

    Oligos failing the index parity check are dropped; see
    :class:`Reassembler` for access to what was dropped.
    """
    r = Reassembler(expect_file_id, reorder_window=0 if unwrap else None, unwrap=unwrap)
    head = r.add(list(oligos))
    return head + r.finish()


class DnaStreamDecoder:
    """Incremental DNA -> bytes, validating the footer on :meth:`finish`."""

    def __init__(self, sink: BinaryIO, table: Huffman3Table | None = None):
        self.sink = sink
        self.table = table or build_table()
        self.written = 0
        self.consumed = 0  # bases already decoded as payload
        self._prev = base_code(SEED_BASE)
        self._carry = np.empty(0, dtype=np.uint8)
        self._tail = ""

    def feed(self, dna: str) -> None:
        self._tail += dna
        if len(self._tail) > 4 * HOLDBACK:
            cut = len(self._tail) - HOLDBACK
            self._decode_payload(self._tail[:cut])
            self._tail = self._tail[cut:]

    def _decode_payload(self, dna: str) -> None:
        if not dna:
            return
        codes = dna_to_codes(dna)
        try:
            trits = unrotate_array(codes, self._prev)
        except HomopolymerViolation as exc:
            raise HomopolymerViolation(self.consumed + exc.position) from None
        self._prev = int(codes[-1])
        self.consumed += len(dna)
        if self._carry.size:
            trits = np.concatenate([self._carry, trits])
        data, used = self.table.decode_array(trits)
        self._carry = trits[used:]
        if data:
            self.written += self.sink.write(data) or len(data)

    def finish(self) -> int:
        tail = self._tail
        total = self.consumed + len(tail)
        if total < STEP or total % STEP:
            raise BadFooter(f"DNA length {total} is not a positive multiple of {STEP}")
        codes = dna_to_codes(tail)
        prev_of_tail = self._prev
        try:
            trits = unrotate_array(codes, prev_of_tail)
        except HomopolymerViolation as exc:
            raise HomopolymerViolation(self.consumed + exc.position) from None
        length = trits_to_int(array_to_trits(trits[-FOOTER_TRITS:]))
        if length > total - FOOTER_TRITS:
            raise BadFooter(f"footer claims {length} payload bases but only {total - FOOTER_TRITS} precede it")
        if length < self.consumed:
            raise BadFooter(f"footer claims {length} payload bases, fewer than already decoded")
        split = length - self.consumed
        if trits[split:-FOOTER_TRITS].any():
            raise BadFooter("nonzero trit in the pad before the footer")
        self._decode_payload(tail[:split])
        if self._carry.size:
            raise DanglingTrits(int(self._carry.size))
        self._tail = ""
        return self.written


def decode_dna_to_bytes(dna: str, table: Huffman3Table | None, output: BinaryIO) -> int:
    dec = DnaStreamDecoder(output, table)
    dec.feed(dna)
    return dec.finish()


@dataclass
class DecodeReport:
    bytes_written: int
    dna_length: int
    oligos_read: int
    reassembly: ReassemblyReport


def decode_dnac(
    source: BinaryIO,
    sink: BinaryIO,
    *,
    expect_file_id: int | None = None,
    reorder_window: int | None = DEFAULT_REORDER_WINDOW,
    unwrap: bool = False,
    table: Huffman3Table | None = None,
) -> DecodeReport:
    """Stream a ``.dnac`` container back into the original bytes.

    With a finite ``reorder_window`` a container that is not in chunk order
    fails with ``OutOfOrder`` or an early ``CoverageGap``; retry with
    ``reorder_window=None`` to accept any order.
    """
    r = Reassembler(expect_file_id, reorder_window, unwrap)
    dec = DnaStreamDecoder(sink, table)
    read = 0
    for batch in iter_dnac_batches(source):
        read += len(batch)
        dec.feed(r.add(batch))
    dec.feed(r.finish())
    written = dec.finish()
    return DecodeReport(written, r.report.dna_length, read, r.report)
