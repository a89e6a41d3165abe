"""Storage-size, mass, melting-temperature and cost estimates."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Iterable

from .encoder import (
    DEFAULT_BUFFER_SIZE,
    FOOTER_TRITS,
    OLIGO_LENGTH,
    SEGMENT_LENGTH,
    STEP,
    Oligo,
)
from .errors import EmptyPool
from .huffman3 import Huffman3Table, build_table

AVOGADRO = 6.022e23
NUCLEOTIDE_MASS = 325.0  # g/mol, average per base
REDUNDANCY = SEGMENT_LENGTH // STEP


@dataclass(frozen=True)
class MemoryEstimate:
    file_size: int
    dna_string_length: int
    oligo_count: int
    free_memory_required: int
    dna_mass: float

    def as_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class BiochemEstimate:
    oligo_count: int
    total_bases: int
    gc_fraction: float
    melting_temperature: float
    total_cost: float

    def as_dict(self):
        return asdict(self)


def dna_mass(dna_string_length: int) -> float:
    """Grams of DNA for a string synthesized with four-fold overlap."""
    return REDUNDANCY * dna_string_length * NUCLEOTIDE_MASS / AVOGADRO


def dnac_size(oligo_count: int) -> int:
    """Exact byte size of a ``.dnac`` file holding ``oligo_count`` oligos."""
    if oligo_count == 0:
        return 2
    return 2 + (OLIGO_LENGTH + 2) * oligo_count + 2 * (oligo_count - 1)


def estimate_memory(
    file_size: int,
    table: Huffman3Table | None = None,
    *,
    payload_trits: int | None = None,
    buffer_size: int = DEFAULT_BUFFER_SIZE,
) -> MemoryEstimate:
    """Project DNA length, oligo count, disk footprint and mass for a file.

    The DNA length uses the table's mean codeword length unless the exact
    ``payload_trits`` is supplied, in which case it matches the encoder.
    """
    if file_size < 0:
        raise ValueError("file_size must be nonnegative")
    table = table or build_table()
    if payload_trits is None:
        payload_trits = math.ceil(file_size * table.avg_codeword_length)
    length = payload_trits + FOOTER_TRITS
    length += -length % STEP
    # the encoder pads anything shorter than one segment up to one oligo
    n_oligos = max(length, SEGMENT_LENGTH) // STEP - (REDUNDANCY - 1)
    return MemoryEstimate(
        file_size=file_size,
        dna_string_length=length,
        oligo_count=n_oligos,
        free_memory_required=dnac_size(n_oligos) + buffer_size,
        dna_mass=dna_mass(length),
    )


def melting_temperature(gc_fraction: float, length: int, salt_molar: float) -> float:
    """Salt-adjusted GC formula for oligos longer than ~14 nt."""
    return 81.5 + 16.6 * math.log10(salt_molar) + 0.41 * (gc_fraction * 100) - 600 / length


def estimate_biochem(oligos: Iterable, salt_mM: float, cost_per_base: float) -> BiochemEstimate:
    if salt_mM <= 0:
        raise ValueError("salt concentration must be positive")
    if cost_per_base < 0:
        raise ValueError("cost per base must be nonnegative")
    salt = salt_mM / 1000.0
    n = total = gc = 0
    tm_sum = 0.0
    for oligo in oligos:
        seq = oligo.bases if isinstance(oligo, Oligo) else oligo
        g = seq.count("G") + seq.count("C")
        n += 1
        total += len(seq)
        gc += g
        tm_sum += melting_temperature(g / len(seq), len(seq), salt)
    if n == 0:
        raise EmptyPool("no oligos to estimate")
    return BiochemEstimate(
        oligo_count=n,
        total_bases=total,
        gc_fraction=gc / total,
        melting_temperature=tm_sum / n,
        total_cost=cost_per_base * total,
    )
