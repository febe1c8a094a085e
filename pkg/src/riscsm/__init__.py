"""Simulation and analysis of channel signature modulation over a reconfigurable intelligent surface."""
from .analysis import BoundInputs, asymptotic_ser, ber_approx, ser_union_bound
from .baselines import BaselineConfig, run_baseline_trials, spectral_efficiency
from .capacity import ergodic_capacity, mutual_information_fixed_channel
from .channel import CorrelationSpec, correlation_matrix, draw_iid
from .errors import ConfigError, RISCSMError
from .estimation import TrainingConfig, mmse_estimate, theoretical_mse
from .hadamard import pattern_set, sylvester
from .harness import SweepSpec, diversity_slope, emit, load_config, read_results, run_sweep
from .modem import SystemConfig, ml_detect, run_error_trials, simulate_batch
from .numerics import RngStream, psd_sqrt

__version__ = "0.1.0"
