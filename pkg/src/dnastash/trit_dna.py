"""Rotation coding between trits and homopolymer-free DNA.

Each trit picks one of the three bases that differ from the previous one.
With the bases in the cyclic order A, C, G, T the rule is simply
``next = (prev + trit + 1) mod 4``, so a run of trits becomes a cumulative
sum and the whole conversion vectorises.

Trit strings are ``str`` over ``"012"`` and DNA strings are ``str`` over
``"ACGT"``; the ``*_array`` helpers work on ``uint8`` numpy arrays of codes
for the hot paths.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

import numpy as np

from .errors import HomopolymerViolation, InvalidBase, TritOverflow

BASES = "ACGT"
SEED_BASE = "A"

_LETTERS = np.frombuffer(BASES.encode("ascii"), dtype=np.uint8)
# ASCII byte -> base code, 255 for anything else
_BASE_CODE = np.full(256, 255, dtype=np.uint8)
for _i, _b in enumerate(BASES.encode("ascii")):
    _BASE_CODE[_b] = _i
_DIGIT = ord("0")


@dataclass(frozen=True)
class RotationTable:
    """Lookup form of the rotation rule.

    ``next[(prev, trit)]`` gives the base to emit, ``inverse[(prev, base)]``
    recovers the trit.
    """

    next: Mapping[tuple[str, int], str] = field(default_factory=dict)
    inverse: Mapping[tuple[str, str], int] = field(default_factory=dict)

    @classmethod
    def cyclic(cls) -> "RotationTable":
        nxt = {}
        inv = {}
        for p, prev in enumerate(BASES):
            for t in range(3):
                base = BASES[(p + t + 1) % 4]
                nxt[(prev, t)] = base
                inv[(prev, base)] = t
        return cls(MappingProxyType(nxt), MappingProxyType(inv))


ROTATION = RotationTable.cyclic()


def base_code(base: str) -> int:
    code = BASES.find(base)
    if len(base) != 1 or code < 0:
        raise InvalidBase(0, base)
    return code


def dna_to_codes(dna: str | bytes) -> np.ndarray:
    """ASCII DNA -> array of base codes 0..3, rejecting foreign characters."""
    raw = dna.encode("ascii", "replace") if isinstance(dna, str) else dna
    codes = _BASE_CODE[np.frombuffer(raw, dtype=np.uint8)]
    if codes.size and codes.max() == 255:
        pos = int(np.argmax(codes == 255))
        raise InvalidBase(pos, chr(raw[pos]))
    return codes


def codes_to_dna(codes: np.ndarray) -> str:
    return _LETTERS[codes].tobytes().decode("ascii")


def trits_to_array(trits: str) -> np.ndarray:
    arr = np.frombuffer(trits.encode("ascii"), dtype=np.uint8) - _DIGIT
    if arr.size and arr.max() > 2:
        pos = int(np.argmax(arr > 2))
        raise ValueError(f"not a trit: {trits[pos]!r} at position {pos}")
    return arr


def array_to_trits(arr: np.ndarray) -> str:
    return (arr.astype(np.uint8) + _DIGIT).tobytes().decode("ascii")


def rotate_array(trits: np.ndarray, prev: int) -> np.ndarray:
    """Trit array -> base codes, starting after base code ``prev``."""
    if trits.size == 0:
        return np.empty(0, dtype=np.uint8)
    steps = np.cumsum(trits.astype(np.int64) + 1)
    return ((steps + prev) % 4).astype(np.uint8)


def unrotate_array(codes: np.ndarray, prev: int) -> np.ndarray:
    """Base codes -> trit array; inverse of :func:`rotate_array`."""
    if codes.size == 0:
        return np.empty(0, dtype=np.uint8)
    full = np.empty(codes.size + 1, dtype=np.int16)
    full[0] = prev
    full[1:] = codes
    trits = (np.diff(full) - 1) % 4
    bad = trits == 3
    if bad.any():
        raise HomopolymerViolation(int(np.argmax(bad)))
    return trits.astype(np.uint8)


def trits_to_dna(trits: str, prev: str = SEED_BASE) -> str:
    """Encode a trit string as DNA, each base differing from the one before.

    >>> trits_to_dna("012", "A")
    'CTG'
    """
    return codes_to_dna(rotate_array(trits_to_array(trits), base_code(prev)))


def dna_to_trits(dna: str, prev: str = SEED_BASE) -> str:
    """Exact inverse of :func:`trits_to_dna`.

    Raises ``HomopolymerViolation`` if two adjacent bases (``prev`` included)
    are equal, since no trit can produce a repeat.
    """
    return array_to_trits(unrotate_array(dna_to_codes(dna), base_code(prev)))


def int_to_trits(n: int, width: int) -> str:
    """Big-endian base-3 digits of ``n``, zero-padded to exactly ``width``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n >= 3**width:
        raise TritOverflow(f"{n} needs more than {width} trits")
    digits = []
    for _ in range(width):
        n, r = divmod(n, 3)
        digits.append(chr(_DIGIT + r))
    return "".join(reversed(digits))


def trits_to_int(trits: str) -> int:
    return int(trits, 3) if trits else 0


def has_homopolymer(dna: str) -> bool:
    return any(a == b for a, b in zip(dna, dna[1:]))
