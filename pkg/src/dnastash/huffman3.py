"""Fixed ternary Huffman code over the 256 byte values.

The code is built once from equal byte weights plus one zero-weight dummy
leaf (a ternary tree needs an odd leaf count). That puts every byte at
depth 5 or 6. Codewords are then reassigned canonically: shorter first,
ties by symbol value, and the dummy's codeword (the last one, ``222222``)
is dropped, so it is the only 6-trit path that decodes to nothing.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

import numpy as np

from .errors import InvalidPrefix
from .trit_dna import array_to_trits, trits_to_array

N_SYMBOLS = 256
_DUMMY = N_SYMBOLS


def _code_lengths(weights: list[int]) -> list[int]:
    """Depth of every leaf in a ternary Huffman tree.

    Heap entries are ``(weight, lowest symbol in subtree, leaves)`` so ties
    always merge the subtree holding the lowest symbol first.
    """
    heap = [(w, s, [s]) for s, w in enumerate(weights)]
    heapq.heapify(heap)
    depth = [0] * len(weights)
    while len(heap) > 1:
        merged_w, merged_leaves = 0, []
        for _ in range(3):
            w, _, leaves = heapq.heappop(heap)
            merged_w += w
            merged_leaves += leaves
        for leaf in merged_leaves:
            depth[leaf] += 1
        heapq.heappush(heap, (merged_w, min(merged_leaves), merged_leaves))
    return depth


def _canonical(lengths: list[int]) -> dict[int, str]:
    order = sorted(range(len(lengths)), key=lambda s: (lengths[s], s))
    codes = {}
    code = 0
    prev_len = lengths[order[0]]
    for sym in order:
        code *= 3 ** (lengths[sym] - prev_len)
        prev_len = lengths[sym]
        codes[sym] = np.base_repr(code, 3).rjust(prev_len, "0")
        code += 1
    return codes


@dataclass(frozen=True, eq=False)
class Huffman3Table:
    codeword_of: Mapping[int, str]
    decode_trie: Mapping
    avg_codeword_length: Fraction

    def __post_init__(self):
        max_len = max(len(c) for c in self.codeword_of.values())
        codes = np.zeros((N_SYMBOLS, max_len), dtype=np.uint8)
        lens = np.zeros(N_SYMBOLS, dtype=np.int64)
        for sym, word in self.codeword_of.items():
            codes[sym, : len(word)] = trits_to_array(word)
            lens[sym] = len(word)
        # every max_len-trit window -> (symbol, codeword length); 0 = no match
        n_windows = 3**max_len
        win_sym = np.zeros(n_windows, dtype=np.int64)
        win_len = np.zeros(n_windows, dtype=np.int64)
        for w in range(n_windows):
            path = np.base_repr(w, 3).rjust(max_len, "0")
            node = self.decode_trie
            for depth, t in enumerate(path, 1):
                node = node.get(t)
                if node is None:
                    break
                if isinstance(node, int):
                    win_sym[w], win_len[w] = node, depth
                    break
        object.__setattr__(self, "max_len", max_len)
        object.__setattr__(self, "_codes", codes)
        object.__setattr__(self, "_lens", lens)
        object.__setattr__(self, "_win_sym", win_sym)
        object.__setattr__(self, "_win_len", win_len)
        object.__setattr__(self, "_powers", 3 ** np.arange(max_len - 1, -1, -1))

    def __eq__(self, other):
        if not isinstance(other, Huffman3Table):
            return NotImplemented
        return dict(self.codeword_of) == dict(other.codeword_of)

    def __hash__(self):
        return hash(tuple(sorted(self.codeword_of.items())))

    def lengths(self) -> np.ndarray:
        """Codeword length per byte value, as an int array of 256."""
        return self._lens.copy()

    def payload_trits(self, data: bytes) -> int:
        """Exact trit count of ``encode_bytes(data)`` without building it."""
        if not data:
            return 0
        return int(self._lens[np.frombuffer(data, dtype=np.uint8)].sum())

    # -- array paths used by the streaming codec --

    def encode_array(self, data: bytes) -> np.ndarray:
        if not data:
            return np.empty(0, dtype=np.uint8)
        sym = np.frombuffer(data, dtype=np.uint8)
        mask = np.arange(self.max_len) < self._lens[sym][:, None]
        return self._codes[sym][mask]

    def decode_array(self, trits: np.ndarray) -> tuple[bytes, int]:
        """Greedy decode; returns the bytes and how many trits they used."""
        n = trits.size
        if n == 0:
            return b"", 0
        padded = np.zeros(n + self.max_len - 1, dtype=np.int64)
        padded[:n] = trits
        windows = np.lib.stride_tricks.sliding_window_view(padded, self.max_len)
        idx = windows @ self._powers
        syms = self._win_sym[idx].tolist()
        lens = self._win_len[idx].tolist()
        out = bytearray()
        i = 0
        while i < n:
            step = lens[i]
            if i + step > n:
                break
            if step == 0:
                # a window reaching past the end is zero-padded, which never
                # lands on the unassigned path, so this is a real full window
                raise InvalidPrefix(i)
            out.append(syms[i])
            i += step
        return bytes(out), i


@lru_cache(maxsize=None)
def build_table() -> Huffman3Table:
    """The canonical table; built once and shared."""
    lengths = _code_lengths([1] * N_SYMBOLS + [0])
    codes = _canonical(lengths)
    del codes[_DUMMY]
    trie: dict = {}
    for sym, word in codes.items():
        node = trie
        for t in word[:-1]:
            node = node.setdefault(t, {})
        node[word[-1]] = sym
    avg = Fraction(sum(len(w) for w in codes.values()), N_SYMBOLS)
    return Huffman3Table(codes, trie, avg)


def encode_bytes(data: bytes, table: Huffman3Table | None = None) -> str:
    table = table or build_table()
    return array_to_trits(table.encode_array(bytes(data)))


def decode_trits(trits: str, table: Huffman3Table | None = None) -> tuple[bytes, int, str]:
    """Decode complete codewords from the front of ``trits``.

    Returns ``(data, consumed, leftover)`` where ``leftover`` is the tail
    that does not yet form a complete codeword. Feeding ``leftover`` back in
    front of the next piece gives the same result as a one-shot decode.
    """
    table = table or build_table()
    data, used = table.decode_array(trits_to_array(trits))
    return data, used, trits[used:]
