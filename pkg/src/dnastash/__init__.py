"""Store arbitrary files as homopolymer-free DNA oligo pools and read them back."""

__version__ = "0.1.0"

from .decoder import (
    DnaStreamDecoder,
    Reassembler,
    decode_dna_to_bytes,
    decode_dnac,
    reassemble_dna,
)
from .encoder import (
    EncoderConfig,
    IndexInfo,
    Oligo,
    append_length_footer,
    encode_stream_to_dna,
    encode_to_oligos,
    segment_into_oligos,
)
from .estimator import estimate_biochem, estimate_memory
from .formats import export_fasta, parse_dnac_stream, read_dnac, write_dnac
from .huffman3 import build_table, decode_trits, encode_bytes
from .trit_dna import dna_to_trits, int_to_trits, trits_to_dna, trits_to_int

__all__ = [
    "DnaStreamDecoder",
    "EncoderConfig",
    "IndexInfo",
    "Oligo",
    "Reassembler",
    "append_length_footer",
    "build_table",
    "decode_dna_to_bytes",
    "decode_dnac",
    "decode_trits",
    "dna_to_trits",
    "encode_bytes",
    "encode_stream_to_dna",
    "encode_to_oligos",
    "estimate_biochem",
    "estimate_memory",
    "export_fasta",
    "int_to_trits",
    "parse_dnac_stream",
    "read_dnac",
    "reassemble_dna",
    "segment_into_oligos",
    "trits_to_dna",
    "trits_to_int",
    "write_dnac",
]
