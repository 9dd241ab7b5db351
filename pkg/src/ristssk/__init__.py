"""Link-level Monte Carlo simulator for RIS-assisted transmit space shift keying
combined with Hadamard code index modulation (RIS-CIM-TSSK)."""

from .channel import ChannelRealization, PhaseMode, PhasePolicy, PhaseVector, cascade, compute_ris_phases, draw_channels
from .codebook import Codebook, build_codebook, codeword
from .config import ConfigError, Detector, FixedTrials, MinBlockErrors, SystemConfig, parse_config
from .engine import BerPoint, SweepResult, effective_throughput, run_snr_point, run_sweep, run_trial
from .errors import DimensionError, InvalidParameterError
from .mapping import IndexPair, bits_per_symbol, map_bits, unmap_indices
from .modem import Detection, add_awgn, detect_antenna_lc, detect_code_lc, detect_ml_joint, synthesize_block
from .results_io import emit_plot_data, write_results

__all__ = [
    "BerPoint", "ChannelRealization", "Codebook", "ConfigError", "Detection", "Detector", "DimensionError",
    "FixedTrials", "IndexPair", "InvalidParameterError", "MinBlockErrors", "PhaseMode", "PhasePolicy",
    "PhaseVector", "SweepResult", "SystemConfig", "add_awgn", "bits_per_symbol", "build_codebook", "cascade",
    "codeword", "compute_ris_phases", "detect_antenna_lc", "detect_code_lc", "detect_ml_joint", "draw_channels",
    "effective_throughput", "emit_plot_data", "map_bits", "parse_config", "run_snr_point", "run_sweep",
    "run_trial", "synthesize_block", "unmap_indices", "write_results",
]
