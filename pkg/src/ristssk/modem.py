"""Block synthesis, AWGN and detection.

Detection runs in two flavours: the two-step low-complexity receiver
(codeword correlation, then nearest antenna signature) and an exhaustive
joint ML search over all (antenna, codeword) hypotheses. Ties always go to
the smallest index.
"""

from dataclasses import dataclass

import numpy as np

from .channel import ChannelRealization, PhaseVector, complex_normal, signatures
from .codebook import Codebook
from .errors import DimensionError, InvalidParameterError
from .mapping import IndexPair


@dataclass(frozen=True)
class Detection:
    pair: IndexPair
    metric_code: float
    metric_antenna: float


def synthesize_block(signature: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Noiseless Nr x L block s c^T."""
    signature = np.asarray(signature)
    c = np.asarray(c)
    if signature.ndim != 1 or c.ndim != 1:
        raise DimensionError("signature and codeword must be 1-D")
    return np.outer(signature, c)


def add_awgn(block: np.ndarray, n0: float, rng: np.random.Generator) -> np.ndarray:
    """Add CN(0, n0) noise to every entry. ``n0 == 0`` returns ``block`` untouched
    and draws nothing from ``rng``."""
    if not n0 >= 0:
        raise InvalidParameterError(f"noise variance n0={n0} must be >= 0")
    if n0 == 0:
        return block
    return block + np.sqrt(n0) * complex_normal(rng, block.shape)


def _check_block(Y: np.ndarray, cb: Codebook) -> None:
    if Y.ndim != 2 or Y.shape[1] != cb.F:
        raise DimensionError(f"received block shape {Y.shape} does not have {cb.F} chip columns")


def code_metrics(Y: np.ndarray, cb: Codebook) -> np.ndarray:
    """||Y c_m||^2 for every codeword, length L."""
    _check_block(Y, cb)
    Z = Y @ cb.matrix
    return np.sum(Z.real**2 + Z.imag**2, axis=0)


def detect_code_lc(Y: np.ndarray, cb: Codebook) -> tuple[int, float]:
    """Return (m_hat, metric) with m_hat 1-based."""
    metrics = code_metrics(Y, cb)
    k = int(np.argmax(metrics))
    return k + 1, float(metrics[k])


def detect_antenna_lc(
    Y: np.ndarray, m_hat: int, realization: ChannelRealization, phases: PhaseVector, cb: Codebook
) -> tuple[int, float]:
    """Return (l_hat, distance) for the nearest signature to Y c_{m_hat}.

    Every hypothesis uses the phase vector that was applied during transmission.
    """
    _check_block(Y, cb)
    z = Y @ cb.codeword(m_hat)
    S = signatures(realization, phases)
    if S.shape[1] != Y.shape[0]:
        raise DimensionError(f"block has {Y.shape[0]} receive rows but channel has Nr={S.shape[1]}")
    d = z[None, :] - S
    dist = np.sum(d.real**2 + d.imag**2, axis=1)
    k = int(np.argmin(dist))
    return k + 1, float(dist[k])


def detect_lc(Y: np.ndarray, cb: Codebook, realization: ChannelRealization, phases: PhaseVector) -> Detection:
    m_hat, mc = detect_code_lc(Y, cb)
    l_hat, ma = detect_antenna_lc(Y, m_hat, realization, phases, cb)
    return Detection(IndexPair(l_hat, m_hat), mc, ma)


def ml_metrics(Y: np.ndarray, cb: Codebook, realization: ChannelRealization, phases: PhaseVector) -> np.ndarray:
    """Nt x L table of ||Y - s_l c_m^T||_F^2."""
    _check_block(Y, cb)
    S = signatures(realization, phases)
    if S.shape[1] != Y.shape[0]:
        raise DimensionError(f"block has {Y.shape[0]} receive rows but channel has Nr={S.shape[1]}")
    Z = Y @ cb.matrix  # Nr x L
    # ||Y||^2 - 2 Re(s_l^H Y c_m) + ||s_l||^2 (codewords are unit norm)
    cross = (S.conj() @ Z).real
    energy = np.sum(S.real**2 + S.imag**2, axis=1)
    y_energy = np.sum(Y.real**2 + Y.imag**2)
    return y_energy - 2.0 * cross + energy[:, None]


def detect_ml_joint(Y: np.ndarray, cb: Codebook, realization: ChannelRealization, phases: PhaseVector) -> Detection:
    table = ml_metrics(Y, cb, realization, phases)
    k = int(np.argmin(table))
    l0, m0 = divmod(k, cb.L)
    return Detection(IndexPair(l0 + 1, m0 + 1), float(code_metrics(Y, cb)[m0]), float(table[l0, m0]))
