"""Rayleigh channels for the Tx->RIS and RIS->Rx hops and RIS phase control."""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DimensionError, InvalidParameterError

TWO_PI = 2.0 * np.pi


class PhaseMode(str, Enum):
    OPTIMAL = "optimal"
    BLIND = "blind"


@dataclass(frozen=True)
class PhasePolicy:
    mode: PhaseMode = PhaseMode.OPTIMAL
    target_rx_antenna: int = 1  # 1-based, only used in optimal mode

    def __post_init__(self):
        object.__setattr__(self, "mode", PhaseMode(self.mode))
        if isinstance(self.target_rx_antenna, bool) or not isinstance(self.target_rx_antenna, int):
            raise InvalidParameterError(f"target_rx_antenna must be an integer, got {self.target_rx_antenna!r}")
        if self.target_rx_antenna < 1:
            raise InvalidParameterError(f"target_rx_antenna={self.target_rx_antenna} must be >= 1")


@dataclass(frozen=True)
class ChannelRealization:
    """One quasi-static draw: ``G`` is Nt x N (Tx->RIS), ``H`` is N x Nr (RIS->Rx)."""

    G: np.ndarray
    H: np.ndarray

    def __post_init__(self):
        if self.G.ndim != 2 or self.H.ndim != 2 or self.G.shape[1] != self.H.shape[0]:
            raise DimensionError(f"G {self.G.shape} and H {self.H.shape} do not share the RIS dimension")

    @property
    def Nt(self) -> int:
        return self.G.shape[0]

    @property
    def N(self) -> int:
        return self.G.shape[1]

    @property
    def Nr(self) -> int:
        return self.H.shape[1]


@dataclass(frozen=True)
class PhaseVector:
    phi: np.ndarray

    @property
    def coefficients(self) -> np.ndarray:
        return np.exp(1j * self.phi)


def complex_normal(rng: np.random.Generator, shape) -> np.ndarray:
    """i.i.d. CN(0, 1) samples. Real/imag pairs are drawn interleaved along a trailing axis."""
    x = rng.standard_normal((*shape, 2))
    return (x[..., 0] + 1j * x[..., 1]) * np.sqrt(0.5)


def draw_channels(Nt: int, N: int, Nr: int, rng: np.random.Generator) -> ChannelRealization:
    for name, value in (("Nt", Nt), ("N", N), ("Nr", Nr)):
        if value < 1:
            raise InvalidParameterError(f"{name}={value} must be >= 1")
    G = complex_normal(rng, (Nt, N))
    H = complex_normal(rng, (N, Nr))
    return ChannelRealization(G, H)


def _check_antenna(l: int, Nt: int) -> None:
    if not 1 <= l <= Nt:
        raise IndexError(f"antenna index l={l} out of range 1..{Nt}")


def compute_ris_phases(realization: ChannelRealization, l: int, policy: PhasePolicy) -> PhaseVector:
    """RIS phases for active antenna ``l`` (1-based).

    Optimal mode cancels both hop phases towards ``policy.target_rx_antenna``.
    Entries are stored as beta * exp(-j theta), so theta = -angle(g).
    """
    _check_antenna(l, realization.Nt)
    if policy.mode is PhaseMode.BLIND:
        return PhaseVector(np.zeros(realization.N))
    n = policy.target_rx_antenna
    if not 1 <= n <= realization.Nr:
        raise IndexError(f"target receive antenna {n} out of range 1..{realization.Nr}")
    theta = -np.angle(realization.G[l - 1, :])
    psi = -np.angle(realization.H[:, n - 1])
    return PhaseVector(np.mod(theta + psi, TWO_PI))


def cascade(realization: ChannelRealization, phases: PhaseVector, l: int) -> np.ndarray:
    """Effective signature s_l = H^T diag(e^{j phi}) g_l^T, length Nr."""
    _check_antenna(l, realization.Nt)
    if phases.phi.shape != (realization.N,):
        raise DimensionError(f"phase vector has shape {phases.phi.shape}, expected ({realization.N},)")
    return realization.H.T @ (phases.coefficients * realization.G[l - 1, :])


def signatures(realization: ChannelRealization, phases: PhaseVector) -> np.ndarray:
    """All Nt signatures under one phase vector, shape (Nt, Nr)."""
    if phases.phi.shape != (realization.N,):
        raise DimensionError(f"phase vector has shape {phases.phi.shape}, expected ({realization.N},)")
    return (realization.G * phases.coefficients) @ realization.H
