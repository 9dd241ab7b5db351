import math

import numpy as np
import pytest

from ristssk.channel import PhaseMode, PhasePolicy
from ristssk.config import Detector, FixedTrials, MinBlockErrors, SystemConfig
from ristssk.engine import (
    BerPoint,
    chunk_rng,
    chunk_size,
    effective_throughput,
    noise_variance,
    run_snr_point,
    run_sweep,
    run_trial,
    simulate_batch,
)
from ristssk.errors import InvalidParameterError


def make(**kw):
    base = dict(Nt=2, Nr=2, N=8, L=4, snr_grid_db=(0.0,), trial_policy=FixedTrials(1000), master_seed=7)
    base.update(kw)
    return SystemConfig(**base)


def test_noise_variance():
    assert noise_variance(0.0) == 1.0
    assert noise_variance(10.0) == pytest.approx(0.1)
    assert noise_variance(-20.0) == pytest.approx(100.0)
    assert noise_variance(math.inf) == 0.0


@pytest.mark.parametrize("p, bler, expected", [(8, 0.0, 8.0), (8, 1.0, 0.0), (8, 0.25, 6.0)])
def test_effective_throughput(p, bler, expected):
    assert effective_throughput(p, bler) == expected


@pytest.mark.parametrize("bler", [-0.1, 1.5])
def test_effective_throughput_range(bler):
    with pytest.raises(InvalidParameterError):
        effective_throughput(8, bler)


@pytest.mark.parametrize("detector", list(Detector))
@pytest.mark.parametrize("mode", list(PhaseMode))
def test_noiseless_trials_are_error_free(detector, mode):
    cfg = make(Nt=4, L=8, detector=detector, phase_policy=PhasePolicy(mode))
    rng = np.random.default_rng(1)
    for _ in range(200):
        assert run_trial(cfg, math.inf, rng) == (0, 0)


def test_run_trial_deterministic():
    cfg = make()
    outcomes = [run_trial(cfg, -5.0, np.random.default_rng(s)) for s in range(30)]
    again = [run_trial(cfg, -5.0, np.random.default_rng(s)) for s in range(30)]
    assert outcomes == again


@pytest.mark.parametrize("detector", list(Detector))
@pytest.mark.parametrize("mode", list(PhaseMode))
def test_batch_of_one_matches_component_pipeline(detector, mode):
    # The vectorized kernel and the per-symbol pipeline consume the stream identically.
    cfg = make(Nt=4, Nr=3, N=16, L=8, detector=detector, phase_policy=PhasePolicy(mode, 2))
    for seed in range(300):
        scalar = run_trial(cfg, -8.0, np.random.default_rng(seed))
        be, blk = simulate_batch(cfg, -8.0, np.random.default_rng(seed), 1)
        assert scalar == (int(be[0]), int(blk[0]))


def test_block_error_consistency():
    cfg = make()
    be, blk = simulate_batch(cfg, -10.0, chunk_rng(1, 0, 0), 5000)
    assert np.all(be <= cfg.bits_per_symbol)
    np.testing.assert_array_equal(blk, be > 0)


def test_pure_noise_gives_half_ber():
    cfg = make(Nt=4, Nr=1, N=1, L=64, trial_policy=FixedTrials(100_000))
    pt = run_snr_point(cfg, -100.0)
    assert pt.ber == pytest.approx(0.5, abs=0.01)


def test_fixed_trials_bookkeeping():
    cfg = make(trial_policy=FixedTrials(1000))
    pt = run_snr_point(cfg, 0.0)
    assert pt.trials == 1000 and pt.bits_sent == 1000 * cfg.bits_per_symbol
    assert pt.ber == pt.bit_errors / pt.bits_sent and pt.bler == pt.block_errors / pt.trials


def test_min_block_errors_stops_at_target():
    cfg = make(snr_grid_db=(-10.0,), trial_policy=MinBlockErrors(100, 50_000))
    pt = run_snr_point(cfg, -10.0)
    assert pt.block_errors == 100
    # Oracle: replay the chunks and find the first trial whose running count hits 100.
    flags = np.concatenate(
        [simulate_batch(cfg, -10.0, chunk_rng(7, 0, k), chunk_size(cfg))[1] for k in range(pt.trials // chunk_size(cfg) + 1)]
    )
    assert pt.trials == int(np.argmax(np.cumsum(flags) >= 100)) + 1


def test_min_block_errors_respects_max_trials():
    cfg = make(trial_policy=MinBlockErrors(10**6, 3000))
    pt = run_snr_point(cfg, 5.0)
    assert pt.trials == 3000 and pt.block_errors < 10**6


def test_fixed_and_adaptive_agree_on_prefix():
    a = run_snr_point(make(trial_policy=FixedTrials(2000)), -5.0)
    b = run_snr_point(make(trial_policy=MinBlockErrors(10**6, 2000)), -5.0)
    assert a == b


def test_sweep_order_and_length():
    grid = tuple(float(x) for x in range(-9, 1))
    res = run_sweep(make(snr_grid_db=grid, trial_policy=FixedTrials(200)))
    assert [p.snr_db for p in res.points] == list(grid)
    assert len(res.throughput) == 10
    for p, tp in zip(res.points, res.throughput):
        assert tp == effective_throughput(3, p.bler)


def test_sweep_repeatable_and_worker_invariant():
    cfg = make(snr_grid_db=(-6.0, -3.0), trial_policy=MinBlockErrors(50, 20_000))
    assert run_sweep(cfg) == run_sweep(cfg, workers=3)


def test_master_seed_changes_outcome():
    a = run_snr_point(make(master_seed=1, trial_policy=FixedTrials(3000)), -5.0)
    b = run_snr_point(make(master_seed=2, trial_policy=FixedTrials(3000)), -5.0)
    assert a != b


def test_ber_point_properties():
    pt = BerPoint(0.0, 10, 3, 30, 2)
    assert pt.ber == 0.1 and pt.bler == 0.2
    assert pt.ber_stderr == pytest.approx(math.sqrt(0.1 * 0.9 / 30))


def test_ssk_degenerate():
    cfg = make(Nt=4, L=1)
    assert cfg.bits_per_symbol == 2
    be, _ = simulate_batch(cfg, math.inf, chunk_rng(0, 0, 0), 2000)
    assert not be.any()


def test_cim_degenerate():
    cfg = make(Nt=1, L=16)
    assert cfg.bits_per_symbol == 4
    be, _ = simulate_batch(cfg, math.inf, chunk_rng(0, 0, 0), 2000)
    assert not be.any()


def test_ml_block_errors_not_above_lc():
    cfg_lc = make(trial_policy=FixedTrials(20_000))
    cfg_ml = make(trial_policy=FixedTrials(20_000), detector=Detector.ML)
    assert run_snr_point(cfg_ml, 0.0).block_errors <= run_snr_point(cfg_lc, 0.0).block_errors


def _worse_or_equal(a: BerPoint, b: BerPoint) -> bool:
    """a.ber >= b.ber within 2x the combined binomial standard error."""
    return a.ber + 2 * math.hypot(a.ber_stderr, b.ber_stderr) >= b.ber


def test_optimal_beats_blind_mid_snr():
    grid = (-15.0, -10.0, -5.0)
    blind = run_sweep(make(N=32, L=16, snr_grid_db=grid, phase_policy=PhasePolicy(PhaseMode.BLIND), trial_policy=FixedTrials(5000)))
    opt = run_sweep(make(N=32, L=16, snr_grid_db=grid, trial_policy=FixedTrials(5000)))
    for b, o in zip(blind.points, opt.points):
        assert _worse_or_equal(b, o)
        assert o.ber < b.ber


def test_diversity_trends_above_minus_10_db():
    grid = (-5.0, 0.0, 5.0)
    blind = PhasePolicy(PhaseMode.BLIND)
    r2 = run_sweep(make(N=32, Nr=2, L=4, snr_grid_db=grid, phase_policy=blind, trial_policy=FixedTrials(10_000)))
    r8 = run_sweep(make(N=32, Nr=8, L=4, snr_grid_db=grid, phase_policy=blind, trial_policy=FixedTrials(10_000)))
    for a, b in zip(r2.points, r8.points):
        assert _worse_or_equal(a, b)


def test_chunk_size_bounds():
    for cfg in (make(), make(Nt=4, Nr=8, N=256, L=256)):
        size = chunk_size(cfg)
        assert size & (size - 1) == 0 and 16 <= size <= 8192
