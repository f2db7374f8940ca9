"""
Sparsity-aware alternating-optimization LMS (SA-ALT-LMS) toolkit.

Adaptive filters for sparse system identification, their mean-square
error analysis, and a seeded Monte-Carlo harness for learning curves and
step-size sweeps.
"""
__version__ = "0.1.0"

from .analysis import (AnalysisInput, SteadyState, Transient, lms_stability_bound,
                       stability_bounds, steady_state, trace_mse, transient_k)
from .exceptions import ConfigError, InvalidArgument, NumericFault, UnstableConfiguration
from .filters import (LMS, SALMS, SAALTLMS, OracleLMS, algorithm_cost, make_filter,
                      predict, prediction_forms)
from .harness import (AlgorithmEntry, PRESETS, Scenario, preset_fig2, preset_fig3,
                      run_experiment, run_trial, sweep_step_size)
from .shrinkage import (OpCount, ShrinkageSpec, csign, l_matrix, penalty_value,
                        shrinkage_cost, subgradient)
from .signal_model import (InputProcess, SparseSystem, generate_sparse_system, measure)
from .config import format_config, load_scenario, parse_config
