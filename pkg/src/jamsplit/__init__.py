"""Device-edge split inference under jamming: models, solvers, experiments.

The package jointly optimizes three coupled decisions per inference task --
where to split the DNN between device and edge server, each device's transmit
power on a jammed uplink, and how to share the edge server's compute -- to
maximize a weighted delay-plus-accuracy revenue across all devices.
"""
from ._version import __version__
from .accuracy import (AccuracyModel, AccuracySample, FitResult, accuracy,
                       default_accuracy_model, fit, load_samples_csv,
                       min_sinr_for_accuracy)
from .ao import Solution, SolveOptions, solve
from .baselines import (SCHEMES, solve_esc, solve_ftp, solve_ga, solve_lc,
                        solve_scheme)
from .configs import default_config, default_config_path
from .experiments import (SweepResult, SweepRow, SweepSpec, aggregate,
                          read_csv, render_plots, replicate_seed, run_sweep,
                          scenario_for_cell, write_csv, write_manifest)
from .metrics import (DeviceDecision, DeviceMetrics, SystemEvaluation,
                      evaluate_device, sinr, split_workload, system_rda,
                      transmission_rate)
from .qga import QgaConfig, QgaResult, QgaState
from .scenario import (Channel, ConfigError, Device, Jammer, ModelProfile,
                       Scenario, SystemConstants, channel_gain,
                       default_constants, default_profile, generate_scenario,
                       load_scenario, save_scenario, scenario_from_config,
                       scenario_to_config)
from .subsolvers import (PowerSolveReport, allocate_capacity,
                         allocate_edge_compute, kkt_residual, solve_power)

__all__ = [
    "__version__",
    "AccuracyModel", "AccuracySample", "FitResult", "accuracy",
    "default_accuracy_model", "fit", "load_samples_csv", "min_sinr_for_accuracy",
    "Solution", "SolveOptions", "solve",
    "SCHEMES", "solve_esc", "solve_ftp", "solve_ga", "solve_lc", "solve_scheme",
    "default_config", "default_config_path",
    "SweepResult", "SweepRow", "SweepSpec", "aggregate", "read_csv",
    "render_plots", "replicate_seed", "run_sweep", "scenario_for_cell",
    "write_csv", "write_manifest",
    "DeviceDecision", "DeviceMetrics", "SystemEvaluation", "evaluate_device",
    "sinr", "split_workload", "system_rda", "transmission_rate",
    "QgaConfig", "QgaResult", "QgaState",
    "Channel", "ConfigError", "Device", "Jammer", "ModelProfile", "Scenario",
    "SystemConstants", "channel_gain", "default_constants", "default_profile",
    "generate_scenario", "load_scenario", "save_scenario",
    "scenario_from_config", "scenario_to_config",
    "PowerSolveReport", "allocate_capacity", "allocate_edge_compute",
    "kkt_residual", "solve_power",
]
