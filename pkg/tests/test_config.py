import math

import pytest
from hypothesis import given, strategies as st

from ristssk.channel import PhaseMode, PhasePolicy
from ristssk.config import (
    ConfigError,
    Detector,
    FixedTrials,
    MinBlockErrors,
    SystemConfig,
    config_from_dict,
    dump_config,
    parse_config,
)

MINIMAL = """
Nt: 2
Nr: 2
N: 128
L: 128
snr_grid_db: [-20, -15, -10, -5, 0, 5, 10]
seed: 42
"""


def test_minimal_document_gets_defaults():
    cfg = parse_config(MINIMAL)
    assert (cfg.Nt, cfg.Nr, cfg.N, cfg.L) == (2, 2, 128, 128)
    assert cfg.snr_grid_db == (-20, -15, -10, -5, 0, 5, 10)
    assert cfg.master_seed == 42
    assert cfg.phase_policy == PhasePolicy(PhaseMode.OPTIMAL, 1)
    assert cfg.detector is Detector.LC
    assert cfg.trial_policy == MinBlockErrors(200, 10**7)


def test_json_document():
    cfg = parse_config('{"Nt": 4, "Nr": 1, "N": 3, "L": 8, "snr_grid_db": [0], "detector": "ml"}')
    assert cfg.detector is Detector.ML and cfg.master_seed == 0


def test_grid_range_form():
    cfg = parse_config(MINIMAL.replace("[-20, -15, -10, -5, 0, 5, 10]", "{start: -20, stop: 10, step: 5}"))
    assert cfg.snr_grid_db == (-20, -15, -10, -5, 0, 5, 10)


def test_infinite_snr_allowed():
    cfg = parse_config(MINIMAL.replace("10]", "10, .inf]"))
    assert cfg.snr_grid_db[-1] == math.inf


def test_non_power_of_two_names_key():
    with pytest.raises(ConfigError, match=r"Nt.*power of two"):
        parse_config(MINIMAL.replace("Nt: 2", "Nt: 3"))


def test_grid_must_increase():
    with pytest.raises(ConfigError, match="strictly increasing"):
        parse_config(MINIMAL.replace("[-20, -15, -10, -5, 0, 5, 10]", "[0, -5]"))


def test_empty_grid_rejected():
    with pytest.raises(ConfigError, match="empty"):
        parse_config(MINIMAL.replace("[-20, -15, -10, -5, 0, 5, 10]", "[]"))


def test_unknown_key_named():
    with pytest.raises(ConfigError, match="bogus"):
        parse_config(MINIMAL + "bogus: 1\n")


def test_missing_key_named():
    with pytest.raises(ConfigError, match="Nr"):
        parse_config(MINIMAL.replace("Nr: 2\n", ""))


@pytest.mark.parametrize(
    "line, key",
    [("N: 12.5", "N"), ("N: '128'", "N"), ("seed: -1", "seed"), ("seed: 18446744073709551616", "seed")],
)
def test_type_and_range_errors(line, key):
    text = MINIMAL.replace("N: 128", line) if line.startswith("N:") else MINIMAL.replace("seed: 42", line)
    with pytest.raises(ConfigError, match=key):
        parse_config(text)


def test_target_antenna_checked_against_nr():
    with pytest.raises(ConfigError, match="target_rx_antenna"):
        parse_config(MINIMAL + "phase_policy: {mode: optimal, target_rx_antenna: 3}\n")


@pytest.mark.parametrize(
    "text, expected",
    [
        ("trial_policy: {fixed_trials: 500}", FixedTrials(500)),
        ("trial_policy: {min_block_errors: 50}", MinBlockErrors(50, 10**7)),
        ("trial_policy: {min_block_errors: 50, max_trials: 1.0e+5}", MinBlockErrors(50, 100_000)),
    ],
)
def test_trial_policies(text, expected):
    assert parse_config(MINIMAL + text + "\n").trial_policy == expected


@pytest.mark.parametrize(
    "text",
    [
        "trial_policy: {fixed_trials: 0}",
        "trial_policy: {fixed_trials: 5, min_block_errors: 3}",
        "trial_policy: 100",
        "detector: zf",
        "phase_policy: random",
        "phase_policy: {mode: blind, extra: 1}",
    ],
)
def test_bad_optional_sections(text):
    with pytest.raises(ConfigError):
        parse_config(MINIMAL + text + "\n")


def test_seed_aliases_conflict():
    with pytest.raises(ConfigError, match="seed"):
        parse_config(MINIMAL + "master_seed: 1\n")


def test_top_level_must_be_mapping():
    with pytest.raises(ConfigError):
        parse_config("- 1\n- 2\n")
    with pytest.raises(ConfigError):
        parse_config("")


def test_no_information_bits_rejected():
    with pytest.raises(ConfigError):
        parse_config(MINIMAL.replace("Nt: 2", "Nt: 1").replace("L: 128", "L: 1"))


configs = st.builds(
    SystemConfig,
    Nt=st.sampled_from([1, 2, 4, 8]),
    Nr=st.integers(4, 8),
    N=st.integers(1, 256),
    L=st.sampled_from([2, 4, 64]),
    snr_grid_db=st.lists(st.floats(-60, 60, allow_nan=False), min_size=1, max_size=8, unique=True).map(sorted).map(tuple),
    phase_policy=st.builds(PhasePolicy, st.sampled_from(list(PhaseMode)), st.integers(1, 4)),
    trial_policy=st.one_of(
        st.builds(FixedTrials, st.integers(1, 10**6)), st.builds(MinBlockErrors, st.integers(1, 10**4), st.integers(1, 10**8))
    ),
    detector=st.sampled_from(list(Detector)),
    master_seed=st.integers(0, 2**64 - 1),
)


@given(configs)
def test_round_trip(cfg):
    assert parse_config(dump_config(cfg)) == cfg


def test_overrides():
    cfg = parse_config(MINIMAL)
    new = cfg.with_overrides(master_seed=9, detector=None)
    assert new.master_seed == 9 and new.detector is cfg.detector


def test_config_from_dict_rejects_bool_ints():
    with pytest.raises(ConfigError, match="Nt"):
        config_from_dict({"Nt": True, "Nr": 1, "N": 1, "L": 2, "snr_grid_db": [0]})
