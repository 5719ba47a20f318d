"""Trapped-ion DFS memory toolkit: Lindblad noise model over the F7/2
manifold, detection-sequence interpretation, lifetime fitting, logical-qubit
storage protocols and entangling-gate pulse optimization."""

__version__ = "0.1.0"

from .levels import Manifold, ZeemanLevel, LevelSpace, CompositeSpace
from .master_eq import (NoiseParams, JumpOperator, DensityMatrix,
                        build_jump_operators, evolve, leakage_probability,
                        fit_gamma_to_leakage, single_ion_space,
                        two_ion_space, EvolveError)
from .detection import (DetectionOutcome, ConfusionMatrix, interpret,
                        all_patterns, default_confusion, simulate_many)
from .fitting import (DecayModel, DecayDataset, FitResult, fit_mle,
                      fit_with_bootstrap, tau_interval, curve_band,
                      model_fidelity)
from .dfs_protocol import (TwoQubitState, GradientModel, EchoSchedule,
                           StorageScenario, StorageRow, prepare_logical,
                           solve_entangler_chi, entanglement_fidelity,
                           frequency_difference, calibrate_deltaB,
                           echo_phase, run_storage)
from .gate_opt import (ModeSet, PhaseSequence, DriveProfile, OptimizeResult,
                       default_modes, reference_sequence, displacement,
                       closure_residual, geometric_phase, optimize_sequence)

__all__ = [
    "Manifold", "ZeemanLevel", "LevelSpace", "CompositeSpace",
    "NoiseParams", "JumpOperator", "DensityMatrix", "build_jump_operators",
    "evolve", "leakage_probability", "fit_gamma_to_leakage",
    "single_ion_space", "two_ion_space", "EvolveError",
    "DetectionOutcome", "ConfusionMatrix", "interpret", "all_patterns",
    "default_confusion", "simulate_many",
    "DecayModel", "DecayDataset", "FitResult", "fit_mle",
    "fit_with_bootstrap", "tau_interval", "curve_band", "model_fidelity",
    "TwoQubitState", "GradientModel", "EchoSchedule", "StorageScenario",
    "StorageRow", "prepare_logical", "solve_entangler_chi",
    "entanglement_fidelity", "frequency_difference", "calibrate_deltaB",
    "echo_phase", "run_storage",
    "ModeSet", "PhaseSequence", "DriveProfile", "OptimizeResult",
    "default_modes", "reference_sequence", "displacement",
    "closure_residual", "geometric_phase", "optimize_sequence",
]
