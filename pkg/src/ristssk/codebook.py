"""Normalized Hadamard spreading codebook."""

from dataclasses import dataclass

import numpy as np

from .errors import require_power_of_two


@dataclass(frozen=True)
class Codebook:
    """L orthonormal real codewords of length F = L, stored as matrix columns.

    ``matrix[:, m - 1]`` is codeword ``m``. The array is marked read-only so the
    codebook can be shared between workers.
    """

    matrix: np.ndarray

    @property
    def L(self) -> int:
        return self.matrix.shape[1]

    @property
    def F(self) -> int:
        return self.matrix.shape[0]

    def codeword(self, m: int) -> np.ndarray:
        return codeword(self, m)


def sylvester_hadamard(order: int) -> np.ndarray:
    """Return the +/-1 Sylvester Hadamard matrix H_order (H_1 = [1], H_2k = H_2 (x) H_k)."""
    require_power_of_two("L", order)
    h = np.ones((1, 1))
    base = np.array([[1.0, 1.0], [1.0, -1.0]])
    while h.shape[0] < order:
        h = np.kron(base, h)
    return h


def build_codebook(L: int) -> Codebook:
    matrix = sylvester_hadamard(L) / np.sqrt(L)
    matrix.setflags(write=False)
    return Codebook(matrix)


def codeword(cb: Codebook, m: int) -> np.ndarray:
    """Codeword ``m`` (1-based) as a read-only length-F view."""
    if not 1 <= m <= cb.L:
        raise IndexError(f"code index m={m} out of range 1..{cb.L}")
    return cb.matrix[:, m - 1]
