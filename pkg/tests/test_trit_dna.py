import itertools
import random

import pytest
from hypothesis import given, strategies as st

from dnastash.errors import HomopolymerViolation, InvalidBase, TritOverflow
from dnastash.trit_dna import (
    ROTATION,
    dna_to_trits,
    has_homopolymer,
    int_to_trits,
    trits_to_dna,
    trits_to_int,
)

# the decided table, written out by hand
HAND_TABLE = {
    "A": "CGT",
    "C": "GTA",
    "G": "TAC",
    "T": "ACG",
}


def slow_encode(trits, prev):
    out = []
    for t in trits:
        prev = HAND_TABLE[prev][int(t)]
        out.append(prev)
    return "".join(out)


def test_rotation_table_matches_hand_table():
    for prev, row in HAND_TABLE.items():
        for t in range(3):
            assert ROTATION.next[(prev, t)] == row[t]
            assert ROTATION.inverse[(prev, row[t])] == t


def test_rotation_table_invariants():
    for prev in "ACGT":
        outs = {ROTATION.next[(prev, t)] for t in range(3)}
        assert len(outs) == 3
        assert prev not in outs


def test_worked_example():
    assert trits_to_dna("012", "A") == "CTG"
    assert dna_to_trits("CTG", "A") == "012"


def test_empty():
    assert trits_to_dna("", "G") == ""
    assert dna_to_trits("", "G") == ""


def test_no_homopolymers_long_random(rng):
    trits = "".join(rng.choice("012") for _ in range(10_000))
    dna = trits_to_dna(trits, "G")
    assert len(dna) == 10_000
    assert not has_homopolymer("G" + dna)


def test_matches_slow_reference(rng):
    for _ in range(200):
        prev = rng.choice("ACGT")
        trits = "".join(rng.choice("012") for _ in range(rng.randrange(0, 60)))
        assert trits_to_dna(trits, prev) == slow_encode(trits, prev)


def test_exhaustive_roundtrip_short():
    for prev in "ACGT":
        for n in range(0, 8):
            for combo in itertools.product("012", repeat=n):
                trits = "".join(combo)
                assert dna_to_trits(trits_to_dna(trits, prev), prev) == trits


def test_sampled_roundtrip_length_12():
    rng = random.Random(7)
    for _ in range(100_000 // 4):
        trits = "".join(rng.choice("012") for _ in range(12))
        for prev in "ACGT":
            assert dna_to_trits(trits_to_dna(trits, prev), prev) == trits


def test_homopolymer_rejected():
    with pytest.raises(HomopolymerViolation) as info:
        dna_to_trits("AAT", "G")
    assert info.value.position == 1
    with pytest.raises(HomopolymerViolation):
        dna_to_trits("CT", "C")


def test_foreign_base_rejected():
    with pytest.raises(InvalidBase):
        dna_to_trits("ACNT", "G")


def test_concatenation_threads_previous_base(rng):
    trits = "".join(rng.choice("012") for _ in range(500))
    whole = trits_to_dna(trits, "A")
    pieces, prev = [], "A"
    for i in range(0, 500, 37):
        piece = trits_to_dna(trits[i : i + 37], prev)
        pieces.append(piece)
        prev = piece[-1]
    assert "".join(pieces) == whole
    assert not has_homopolymer("A" + whole)


@given(st.text("012", max_size=300), st.sampled_from("ACGT"))
def test_roundtrip_property(trits, prev):
    dna = trits_to_dna(trits, prev)
    assert len(dna) == len(trits)
    assert not has_homopolymer(prev + dna)
    assert dna_to_trits(dna, prev) == trits


@pytest.mark.parametrize(
    "n,width,expected",
    [(0, 20, "0" * 20), (3486784400, 20, "2" * 20), (5, 3, "012")],
)
def test_int_to_trits(n, width, expected):
    assert int_to_trits(n, width) == expected
    assert trits_to_int(expected) == n


def test_int_to_trits_overflow():
    with pytest.raises(TritOverflow):
        int_to_trits(3486784401, 20)
    with pytest.raises(OverflowError):
        int_to_trits(27, 3)


@given(st.integers(0, 3**20 - 1))
def test_int_roundtrip(n):
    assert trits_to_int(int_to_trits(n, 20)) == n
