"""Bits <-> (antenna index, code index) mapping.

The first log2(Nt) bits select the transmit antenna, the remaining log2(L)
bits select the codeword. Both fields are natural binary, MSB first, and the
resulting indices are 1-based.
"""

from typing import NamedTuple, Sequence

import numpy as np

from .errors import DimensionError, require_power_of_two


class IndexPair(NamedTuple):
    l: int
    m: int


def _log2(name: str, value: int) -> int:
    require_power_of_two(name, value)
    return value.bit_length() - 1


def split_bits(Nt: int, L: int) -> tuple[int, int]:
    """Return (p1, p2): antenna bits and code bits."""
    return _log2("Nt", Nt), _log2("L", L)


def bits_per_symbol(Nt: int, L: int) -> int:
    p1, p2 = split_bits(Nt, L)
    return p1 + p2


def _to_int(bits) -> int:
    value = 0
    for b in bits:
        value = (value << 1) | int(b)
    return value


def _to_bits(value: int, width: int) -> list[int]:
    return [(value >> k) & 1 for k in range(width - 1, -1, -1)]


def map_bits(block: Sequence[int], Nt: int, L: int) -> IndexPair:
    p1, p2 = split_bits(Nt, L)
    if len(block) != p1 + p2:
        raise DimensionError(f"bit block has length {len(block)}, expected {p1 + p2} for Nt={Nt}, L={L}")
    if any(int(b) not in (0, 1) for b in block):
        raise ValueError("bit block entries must be 0 or 1")
    return IndexPair(_to_int(block[:p1]) + 1, _to_int(block[p1:]) + 1)


def unmap_indices(pair: IndexPair, Nt: int, L: int) -> list[int]:
    p1, p2 = split_bits(Nt, L)
    l, m = pair
    if not 1 <= l <= Nt:
        raise IndexError(f"antenna index l={l} out of range 1..{Nt}")
    if not 1 <= m <= L:
        raise IndexError(f"code index m={m} out of range 1..{L}")
    return _to_bits(l - 1, p1) + _to_bits(m - 1, p2)


# Vectorized forms used by the Monte Carlo kernel. Indices here are 0-based.

def bits_to_indices(bits: np.ndarray, Nt: int, L: int) -> tuple[np.ndarray, np.ndarray]:
    """Map a (B, p) bit array to 0-based antenna and code index arrays."""
    p1, p2 = split_bits(Nt, L)
    l0 = bits[:, :p1] @ (1 << np.arange(p1)[::-1])
    m0 = bits[:, p1:] @ (1 << np.arange(p2)[::-1])
    return l0, m0


def indices_to_bits(l0: np.ndarray, m0: np.ndarray, Nt: int, L: int) -> np.ndarray:
    p1, p2 = split_bits(Nt, L)
    lb = (l0[:, None] >> np.arange(p1)[::-1]) & 1
    mb = (m0[:, None] >> np.arange(p2)[::-1]) & 1
    return np.concatenate([lb, mb], axis=1)
