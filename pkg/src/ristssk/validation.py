"""Self-checks behind ``ristssk validate``.

Each check returns a :class:`CheckResult`. The default sizes finish in well
under a minute; ``full=True`` uses the acceptance-level sample counts.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import reference
from .channel import PhaseMode, PhasePolicy, cascade, compute_ris_phases, draw_channels
from .codebook import build_codebook
from .config import Detector, FixedTrials, SystemConfig
from .engine import chunk_rng, noise_variance, simulate_batch
from .mapping import IndexPair, map_bits, unmap_indices
from .modem import add_awgn, detect_antenna_lc, detect_code_lc, synthesize_block


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.detail}"


def check_codebook_gram(max_L: int = 256) -> CheckResult:
    worst = 0.0
    L = 1
    while L <= max_L:
        C = build_codebook(L).matrix
        worst = max(worst, float(np.max(np.abs(C.T @ C - np.eye(L)))))
        L *= 2
    return CheckResult("codebook Gram identity", worst < 1e-12, f"max |C^T C - I| = {worst:.2e} for L <= {max_L}")


def check_mapping_bijection(max_bits: int = 12) -> CheckResult:
    cases = 0
    for p1 in range(max_bits + 1):
        for p2 in range(max_bits + 1 - p1):
            Nt, L = 1 << p1, 1 << p2
            seen = set()
            for bits in itertools.product((0, 1), repeat=p1 + p2):
                pair = map_bits(bits, Nt, L)
                if tuple(unmap_indices(pair, Nt, L)) != bits:
                    return CheckResult("bit mapping bijection", False, f"round trip failed for {bits}")
                seen.add(pair)
            if len(seen) != 2 ** (p1 + p2):
                return CheckResult("bit mapping bijection", False, f"collision for Nt={Nt}, L={L}")
            cases += 1
    return CheckResult("bit mapping bijection", True, f"{cases} (Nt, L) shapes enumerated exhaustively")


def check_noiseless_recovery(trials: int, seed: int = 2024) -> CheckResult:
    failures = 0
    for det, mode in itertools.product(Detector, PhaseMode):
        cfg = SystemConfig(4, 2, 16, 8, (math.inf,), PhasePolicy(mode), FixedTrials(trials), det, seed)
        be, _ = simulate_batch(cfg, math.inf, chunk_rng(seed, 0, 0), trials)
        failures += int(np.count_nonzero(be))
    return CheckResult(
        "noiseless end-to-end recovery", failures == 0, f"{failures} bit errors over {trials} trials x 4 detector/policy combos"
    )


def check_lc_against_loops(instances: int, seed: int = 7) -> CheckResult:
    rng = np.random.default_rng(seed)
    Nt, Nr, N, L = 4, 2, 8, 8
    cb = build_codebook(L)
    codewords = [cb.codeword(m) for m in range(1, L + 1)]
    mismatches = 0
    for k in range(instances):
        mode = PhaseMode.OPTIMAL if k % 2 else PhaseMode.BLIND
        real = draw_channels(Nt, N, Nr, rng)
        l = int(rng.integers(1, Nt + 1))
        m = int(rng.integers(1, L + 1))
        phases = compute_ris_phases(real, l, PhasePolicy(mode, 1))
        Y = add_awgn(synthesize_block(cascade(real, phases, l), cb.codeword(m)), noise_variance(0.0), rng)
        m_hat, _ = detect_code_lc(Y, cb)
        l_hat, _ = detect_antenna_lc(Y, m_hat, real, phases, cb)
        ref_m = reference.detect_code_loop(Y, codewords)
        ref_l = reference.detect_antenna_loop(Y, codewords[ref_m - 1], real.G, real.H, phases.phi)
        mismatches += (m_hat, l_hat) != (ref_m, ref_l)
    return CheckResult("LC detector vs loop reference", mismatches == 0, f"{mismatches} mismatches on {instances} noisy instances")


def check_phase_alignment(realizations: int, seed: int = 11) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(realizations):
        Nt, N, Nr = 2, 32, 3
        real = draw_channels(Nt, N, Nr, rng)
        l = int(rng.integers(1, Nt + 1))
        target = int(rng.integers(1, Nr + 1))
        s = cascade(real, compute_ris_phases(real, l, PhasePolicy(PhaseMode.OPTIMAL, target)), l)[target - 1]
        expected = float(np.sum(np.abs(real.G[l - 1]) * np.abs(real.H[:, target - 1])))
        worst = max(worst, abs(s.imag), abs(s.real - expected))
    return CheckResult("optimal phase alignment", worst < 1e-9, f"max deviation {worst:.2e} over {realizations} realizations")


def check_ml_not_worse(trials: int, seed: int = 5) -> CheckResult:
    ser = {}
    for det in Detector:
        cfg = SystemConfig(2, 2, 8, 4, (0.0,), PhasePolicy(), FixedTrials(trials), det, seed)
        _, blk = simulate_batch(cfg, 0.0, chunk_rng(seed, 0, 0), trials)
        ser[det] = blk.mean()
    ok = ser[Detector.ML] <= ser[Detector.LC]
    return CheckResult("ML SER <= LC SER at 0 dB", ok, f"ML {ser[Detector.ML]:.4f} vs LC {ser[Detector.LC]:.4f} over {trials} trials")


def run_checks(full: bool = False, report: Callable[[CheckResult], None] | None = None) -> list[CheckResult]:
    scale = 10 if full else 1
    checks = [
        lambda: check_codebook_gram(),
        lambda: check_mapping_bijection(),
        lambda: check_noiseless_recovery(1000 * scale),
        lambda: check_lc_against_loops(100 * scale),
        lambda: check_phase_alignment(1000 * scale),
        lambda: check_ml_not_worse(10000 * scale),
    ]
    results = []
    for check in checks:
        res = check()
        if report is not None:
            report(res)
        results.append(res)
    return results
