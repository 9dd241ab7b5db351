"""Monte Carlo BER/BLER engine.

Trials are grouped into fixed-size chunks. Chunk ``k`` of grid point ``i``
draws from a Philox stream seeded by ``SeedSequence(master_seed,
spawn_key=(i, k))``; chunk sizes depend only on the config. Chunks are merged
in index order, so a sweep gives the same counts for any worker count.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, NamedTuple, Optional

import numpy as np

from .channel import PhaseMode, cascade, compute_ris_phases, complex_normal, draw_channels
from .codebook import Codebook, build_codebook
from .config import Detector, FixedTrials, MinBlockErrors, SystemConfig
from .errors import InvalidParameterError
from .mapping import IndexPair, bits_to_indices, indices_to_bits, map_bits, unmap_indices
from .modem import add_awgn, detect_lc, detect_ml_joint, synthesize_block

log = logging.getLogger(__name__)

CHUNK_ELEMENTS = 1 << 19
MAX_CHUNK = 8192
MIN_CHUNK = 16


class TrialOutcome(NamedTuple):
    bit_errors: int
    block_error: int


@dataclass(frozen=True)
class BerPoint:
    snr_db: float
    trials: int
    bit_errors: int
    bits_sent: int
    block_errors: int

    @property
    def ber(self) -> float:
        return self.bit_errors / self.bits_sent if self.bits_sent else 0.0

    @property
    def bler(self) -> float:
        return self.block_errors / self.trials if self.trials else 0.0

    @property
    def ber_stderr(self) -> float:
        """Binomial standard error of the BER estimate."""
        if not self.bits_sent:
            return 0.0
        return math.sqrt(self.ber * (1.0 - self.ber) / self.bits_sent)


@dataclass(frozen=True)
class SweepResult:
    config: SystemConfig
    points: tuple[BerPoint, ...]
    throughput: tuple[float, ...]
    label: str = ""

    @property
    def snr_db(self) -> np.ndarray:
        return np.array([p.snr_db for p in self.points])

    @property
    def ber(self) -> np.ndarray:
        return np.array([p.ber for p in self.points])

    @property
    def bler(self) -> np.ndarray:
        return np.array([p.bler for p in self.points])


def noise_variance(snr_db: float) -> float:
    """Per-complex-sample noise variance for unit codeword energy; +inf dB gives 0."""
    if snr_db == math.inf:
        return 0.0
    return 10.0 ** (-snr_db / 10.0)


def effective_throughput(p: float, bler: float) -> float:
    """Correctly delivered bits per channel use, p * (1 - BLER)."""
    if not 0.0 <= bler <= 1.0:
        raise InvalidParameterError(f"bler={bler} must lie in [0, 1]")
    return p * (1.0 - bler)


def chunk_size(config: SystemConfig) -> int:
    """Trials per chunk: a power of two sized to bound per-chunk array memory."""
    per_trial = (
        config.Nt * config.N + config.N * config.Nr + 2 * config.Nr * config.L + config.Nt * config.Nr * config.L
    )
    size = max(1, CHUNK_ELEMENTS // per_trial)
    return int(min(MAX_CHUNK, max(MIN_CHUNK, 1 << (size.bit_length() - 1))))


def chunk_rng(master_seed: int, point_index: int, chunk_index: int) -> np.random.Generator:
    seq = np.random.SeedSequence(master_seed, spawn_key=(point_index, chunk_index))
    return np.random.Generator(np.random.Philox(seq))


def run_trial(
    config: SystemConfig, snr_db: float, rng: np.random.Generator, codebook: Optional[Codebook] = None
) -> TrialOutcome:
    """One symbol through the full chain, built from the per-symbol components.

    Consumes ``rng`` in the same order as :func:`simulate_batch` with ``count=1``.
    """
    cb = codebook if codebook is not None else build_codebook(config.L)
    bits = [int(b) for b in rng.integers(0, 2, size=config.bits_per_symbol)]
    l, m = map_bits(bits, config.Nt, config.L)
    real = draw_channels(config.Nt, config.N, config.Nr, rng)
    phases = compute_ris_phases(real, l, config.phase_policy)
    Y = synthesize_block(cascade(real, phases, l), cb.codeword(m))
    Y = add_awgn(Y, noise_variance(snr_db), rng)
    detect = detect_ml_joint if config.detector is Detector.ML else detect_lc
    pair: IndexPair = detect(Y, cb, real, phases).pair
    decoded = unmap_indices(pair, config.Nt, config.L)
    errors = sum(a != b for a, b in zip(bits, decoded))
    return TrialOutcome(errors, int(errors > 0))


def simulate_batch(
    config: SystemConfig, snr_db: float, rng: np.random.Generator, count: int, codebook: Optional[Codebook] = None
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized trials. Returns per-trial bit-error counts and block-error flags."""
    cb = codebook if codebook is not None else build_codebook(config.L)
    C = cb.matrix
    Nt, Nr, N, L = config.Nt, config.Nr, config.N, config.L
    rows = np.arange(count)

    bits = rng.integers(0, 2, size=(count, config.bits_per_symbol))
    l0, m0 = bits_to_indices(bits, Nt, L)
    G = complex_normal(rng, (count, Nt, N))
    H = complex_normal(rng, (count, N, Nr))

    if config.phase_policy.mode is PhaseMode.BLIND:
        GP = G
    else:
        n0 = config.phase_policy.target_rx_antenna - 1
        phi = np.mod(-np.angle(G[rows, l0, :]) - np.angle(H[:, :, n0]), 2.0 * np.pi)
        GP = G * np.exp(1j * phi)[:, None, :]
    S = GP @ H  # (B, Nt, Nr) signatures under the transmitted phase vector

    Y = S[rows, l0][:, :, None] * C[:, m0].T[:, None, :]  # (B, Nr, L)
    n0_var = noise_variance(snr_db)
    if n0_var > 0:
        Y = Y + np.sqrt(n0_var) * complex_normal(rng, Y.shape)

    Z = Y @ C  # column m holds Y c_m
    if config.detector is Detector.ML:
        cross = (S.conj() @ Z).real  # (B, Nt, L)
        energy = np.sum(S.real**2 + S.imag**2, axis=2)
        y_energy = np.sum(Y.real**2 + Y.imag**2, axis=(1, 2))
        table = y_energy[:, None, None] - 2.0 * cross + energy[:, :, None]
        flat = np.argmin(table.reshape(count, Nt * L), axis=1)
        l_hat, m_hat = np.divmod(flat, L)
    else:
        m_hat = np.argmax(np.sum(Z.real**2 + Z.imag**2, axis=1), axis=1)
        d = Z[rows, :, m_hat][:, None, :] - S
        l_hat = np.argmin(np.sum(d.real**2 + d.imag**2, axis=2), axis=1)

    decoded = indices_to_bits(l_hat, m_hat, Nt, L)
    bit_errors = np.count_nonzero(decoded != bits, axis=1)
    return bit_errors, bit_errors > 0


def _chunk_task(args) -> tuple[np.ndarray, np.ndarray]:
    config, snr_db, point_index, chunk_index, count = args
    rng = chunk_rng(config.master_seed, point_index, chunk_index)
    return simulate_batch(config, snr_db, rng, count)


def _chunk_counts(config: SystemConfig) -> Iterator[int]:
    size = chunk_size(config)
    total = config.trial_policy.max_trials
    for start in range(0, total, size):
        yield min(size, total - start)


class _Accumulator:
    def __init__(self, config: SystemConfig, snr_db: float):
        self.config = config
        self.snr_db = snr_db
        self.trials = 0
        self.bit_errors = 0
        self.block_errors = 0
        self.done = False

    def add(self, bit_errors: np.ndarray, block_errors: np.ndarray) -> None:
        if self.done:
            return
        policy = self.config.trial_policy
        take = min(len(bit_errors), policy.max_trials - self.trials)
        if isinstance(policy, MinBlockErrors):
            need = policy.min_block_errors - self.block_errors
            cum = np.cumsum(block_errors[:take])
            if cum.size and cum[-1] >= need:
                take = int(np.searchsorted(cum, need)) + 1
                self.done = True
        self.trials += take
        self.bit_errors += int(bit_errors[:take].sum())
        self.block_errors += int(block_errors[:take].sum())
        if self.trials >= policy.max_trials:
            self.done = True

    def point(self) -> BerPoint:
        p = self.config.bits_per_symbol
        return BerPoint(self.snr_db, self.trials, self.bit_errors, self.trials * p, self.block_errors)


class _Runner:
    def __init__(self, workers: int):
        if workers < 1:
            raise InvalidParameterError(f"workers={workers} must be >= 1")
        self.workers = workers
        self.pool = ProcessPoolExecutor(workers) if workers > 1 else None

    def map(self, tasks: Iterable) -> Iterator:
        if self.pool is None:
            return map(_chunk_task, tasks)
        return self.pool.map(_chunk_task, tasks)

    def close(self) -> None:
        if self.pool is not None:
            self.pool.shutdown()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def _run_point(runner: _Runner, config: SystemConfig, snr_db: float, point_index: int) -> BerPoint:
    acc = _Accumulator(config, snr_db)
    counts = list(_chunk_counts(config))
    if isinstance(config.trial_policy, FixedTrials):
        tasks = [(config, snr_db, point_index, k, n) for k, n in enumerate(counts)]
        for be, ble in runner.map(tasks):
            acc.add(be, ble)
        return acc.point()
    wave = runner.workers
    for start in range(0, len(counts), wave):
        tasks = [(config, snr_db, point_index, k, counts[k]) for k in range(start, min(start + wave, len(counts)))]
        for be, ble in runner.map(tasks):
            acc.add(be, ble)
        if acc.done:
            break
    return acc.point()


def _finish(config: SystemConfig, points: list[BerPoint], label: str) -> SweepResult:
    p = config.bits_per_symbol
    return SweepResult(config, tuple(points), tuple(effective_throughput(p, pt.bler) for pt in points), label)


def run_snr_point(config: SystemConfig, snr_db: float, point_index: int = 0, workers: int = 1) -> BerPoint:
    """Simulate one SNR value. ``point_index`` selects the seed family."""
    with _Runner(workers) as runner:
        return _run_point(runner, config, snr_db, point_index)


def run_sweep(
    config: SystemConfig,
    workers: int = 1,
    label: str = "",
    progress: Optional[Callable[[BerPoint], None]] = None,
) -> SweepResult:
    points = []
    with _Runner(workers) as runner:
        for i, snr in enumerate(config.snr_grid_db):
            pt = _run_point(runner, config, snr, i)
            log.info("snr=%g dB trials=%d ber=%.4g bler=%.4g", snr, pt.trials, pt.ber, pt.bler)
            if progress is not None:
                progress(pt)
            points.append(pt)
    return _finish(config, points, label)
