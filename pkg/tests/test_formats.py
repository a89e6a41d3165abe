import hashlib
import io
import random

import pytest
from hypothesis import given, settings, strategies as st

from dnastash.encoder import Oligo, encode_to_oligos
from dnastash.errors import BadOligo, MalformedContainer
from dnastash.formats import (
    export_fasta,
    iter_dnac_batches,
    parse_dnac_stream,
    read_dnac,
    read_fasta,
    write_dnac,
)
from dnastash.trit_dna import trits_to_dna

GOLDEN_DNAC_SHA256 = "d5ffbb25b8d636fe996dca320ac31b9d6c25761b9fb2d690828d9fde0ece6638"
GOLDEN_FASTA_SHA256 = "abc126ef3e8a2302c9ea07270610895f9f630b624c5740508a8529b3c5df9967"
GOLDEN_INPUT = b"golden fixture, 3 oligos"


class TrickleReader(io.RawIOBase):
    """Return at most ``step`` bytes per read, to exercise split items."""

    def __init__(self, data, step):
        self._buf = io.BytesIO(data)
        self._step = step

    def readable(self):
        return True

    def read(self, n=-1):
        return self._buf.read(self._step if n < 0 else min(n, self._step))


def random_oligo(rng):
    seq = trits_to_dna("".join(rng.choice("012") for _ in range(117)), rng.choice("ACGT"))
    return seq


def serialize(oligos):
    buf = io.BytesIO()
    n = write_dnac(oligos, buf)
    assert n == len(buf.getvalue())
    return buf.getvalue()


def test_empty_container():
    assert serialize([]) == b"[]"
    assert read_dnac(io.BytesIO(b"[]")) == []


def test_singleton(rng):
    s = random_oligo(rng)
    assert serialize([s]) == f"['{s}']".encode()
    assert read_dnac(io.BytesIO(f"['{s}']".encode())) == [Oligo(s)]


@pytest.mark.parametrize("n", [1, 2, 3, 10, 57])
def test_container_size_formula(rng, n):
    blob = serialize([random_oligo(rng) for _ in range(n)])
    assert len(blob) == 2 + 119 * n + 2 * (n - 1)


def test_golden_dnac(data_dir):
    golden = (data_dir / "golden3.dnac").read_bytes()
    assert hashlib.sha256(golden).hexdigest() == GOLDEN_DNAC_SHA256
    oligos = encode_to_oligos(GOLDEN_INPUT)
    assert serialize(oligos) == golden
    assert [o.bases for o in read_dnac(io.BytesIO(golden))] == oligos


def test_golden_fasta(data_dir):
    golden = (data_dir / "golden3.fasta").read_bytes()
    assert hashlib.sha256(golden).hexdigest() == GOLDEN_FASTA_SHA256
    buf = io.BytesIO()
    export_fasta(encode_to_oligos(GOLDEN_INPUT), 0, buf)
    assert buf.getvalue() == golden


def test_split_at_every_boundary(data_dir):
    blob = (data_dir / "golden3.dnac").read_bytes()
    whole = read_dnac(io.BytesIO(blob))
    for cut in range(1, len(blob)):
        class TwoReads(io.RawIOBase):
            parts = [blob[:cut], blob[cut:]]

            def readable(self):
                return True

            def read(self, n=-1):
                return self.parts.pop(0) if self.parts else b""

        assert list(parse_dnac_stream(TwoReads())) == whole


@pytest.mark.parametrize("step", [1, 2, 3, 5, 118, 119, 121, 1000])
def test_tiny_reads(rng, step):
    oligos = [random_oligo(rng) for _ in range(9)]
    blob = serialize(oligos)
    got = [o.bases for o in parse_dnac_stream(TrickleReader(blob, step), read_size=step)]
    assert got == oligos


def test_roundtrip_thousand_random_pools():
    rng = random.Random(99)
    pool = [random_oligo(rng) for _ in range(300)]
    for _ in range(1000):
        oligos = [rng.choice(pool) for _ in range(rng.randrange(0, 12))]
        assert [o.bases for o in read_dnac(io.BytesIO(serialize(oligos)))] == oligos


def test_roundtrip_ten_thousand(rng):
    oligos = [random_oligo(rng) for _ in range(10_000)]
    assert [o.bases for o in read_dnac(io.BytesIO(serialize(oligos)))] == oligos
    assert sum(len(b) for b in iter_dnac_batches(io.BytesIO(serialize(oligos)))) == 10_000


@pytest.mark.parametrize(
    "blob,offset",
    [
        (b"", 0),
        (b"x[]", 0),
        (b"[", 1),
        (b"[ ]", 1),
        (b"[]\n", 2),
        (b"['A", 3),
        (b"['A'", 4),
        (b"['A',]", 4),
        (b"['A';'C']", 4),
        (b"['A','C']", 4),
    ],
)
def test_malformed(blob, offset):
    with pytest.raises(MalformedContainer) as info:
        list(iter_dnac_batches(io.BytesIO(blob)))
    assert info.value.offset == offset


def test_bad_oligo_length(rng):
    with pytest.raises(BadOligo, match="length"):
        read_dnac(io.BytesIO(b"['ACGT']"))


def test_bad_oligo_alphabet(rng):
    s = random_oligo(rng)
    s = s[:50] + "N" + s[51:]
    with pytest.raises(BadOligo, match="A/C/G/T"):
        read_dnac(io.BytesIO(f"['{s}']".encode()))


def test_bad_oligo_homopolymer(rng):
    s = "AAGT" + random_oligo(rng)[4:]
    with pytest.raises(BadOligo, match="adjacent") as info:
        read_dnac(io.BytesIO(f"['{random_oligo(rng)}', '{s}']".encode()))
    assert info.value.ordinal == 1


def test_writer_rejects_wrong_length():
    with pytest.raises(BadOligo):
        serialize(["ACGT"])


def test_fasta_records():
    oligos = encode_to_oligos(bytes(range(200)))
    buf = io.BytesIO()
    export_fasta(oligos, 0, buf)
    lines = buf.getvalue().decode().split("\n")
    assert lines[-1] == ""
    assert len(lines) - 1 == 2 * len(oligos)
    assert "\r" not in buf.getvalue().decode()
    records = read_fasta(io.BytesIO(buf.getvalue()))
    assert [r[2] for r in records] == oligos
    chunks = [r[1] for r in records]
    assert chunks == sorted(set(chunks))
    assert all(r[0] == 0 for r in records)


def test_fasta_single_record():
    (oligo,) = encode_to_oligos(b"x")
    buf = io.BytesIO()
    export_fasta([oligo], 5, buf)
    assert buf.getvalue().decode() == f">dnacloud|id=5|chunk=0\n{oligo}\n"


@settings(max_examples=50, deadline=None)
@given(st.lists(st.text("ACGT", min_size=117, max_size=117), max_size=20))
def test_writer_reader_inverse_property(oligos):
    # reader validates homopolymers, so keep only oligos that pass
    oligos = [s for s in oligos if all(a != b for a, b in zip(s, s[1:]))]
    assert [o.bases for o in read_dnac(io.BytesIO(serialize(oligos)))] == oligos
