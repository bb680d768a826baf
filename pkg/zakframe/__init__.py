# zakframe/__init__.py
from .config import DEFAULT_CONFIG, NumericsConfig, active_config, load_config, use_config
from .constants import (PeriodizationProfile, WindowConstants, assemble_constants, constants_from_values,
                        estimate_C, estimate_K, estimate_Kprime, estimate_qR, periodization_sq)
from .errors import (AccuracyError, AssumptionViolation, ConfigError, DegenerateRangeError, GrammarError,
                     HypothesisViolation, ReconstructionRefused, ResolutionInfeasibleError, ShapeError,
                     SpecValidationError, UncertifiableError, ZakFrameError)
from .frame import (FrameCertificate, GaborCoefficients, PointSet, certify_frame, coefficient_direct,
                    dual_windows, dual_windows_zak, frame_operator_apply, gabor_coefficients, reconstruct,
                    zak_sum_grid, zak_sum_point)
from .grammar import parse_window
from .montecarlo import (MonteCarloConfig, MonteCarloReport, TrialRecord, doubling_scan,
                         empirical_expectation_check, run_trials, sample_points)
from .report import RunReport
from .rng import derived_seed
from .theory import (ComplexityQuery, ComplexityResult, failure_probability_bounds, hoeffding_bound,
                     mesh_surrogate, mesh_width, sample_complexity, upper_event_attainable)
from .windows import DecayEnvelope, WindowSpec, eval_derivative, eval_freq, eval_time, tail_bound
from .zak import (SignalGrid, ZakGrid, covariance_defect, inverse_zak, zak_grid, zak_of_signal, zak_point,
                  zak_switch_defect, zak_unitarity_defect)

__all__ = [
    "DEFAULT_CONFIG", "NumericsConfig", "active_config", "load_config", "use_config",
    "PeriodizationProfile", "WindowConstants", "assemble_constants", "constants_from_values",
    "estimate_C", "estimate_K", "estimate_Kprime", "estimate_qR", "periodization_sq",
    "AccuracyError", "AssumptionViolation", "ConfigError", "DegenerateRangeError", "GrammarError",
    "HypothesisViolation", "ReconstructionRefused", "ResolutionInfeasibleError", "ShapeError",
    "SpecValidationError", "UncertifiableError", "ZakFrameError",
    "FrameCertificate", "GaborCoefficients", "PointSet", "certify_frame", "coefficient_direct",
    "dual_windows", "dual_windows_zak", "frame_operator_apply", "gabor_coefficients", "reconstruct",
    "zak_sum_grid", "zak_sum_point",
    "parse_window",
    "MonteCarloConfig", "MonteCarloReport", "TrialRecord", "doubling_scan",
    "empirical_expectation_check", "run_trials", "sample_points",
    "RunReport",
    "derived_seed",
    "ComplexityQuery", "ComplexityResult", "failure_probability_bounds", "hoeffding_bound",
    "mesh_surrogate", "mesh_width", "sample_complexity", "upper_event_attainable",
    "DecayEnvelope", "WindowSpec", "eval_derivative", "eval_freq", "eval_time", "tail_bound",
    "SignalGrid", "ZakGrid", "covariance_defect", "inverse_zak", "zak_grid", "zak_of_signal", "zak_point",
    "zak_switch_defect", "zak_unitarity_defect",
]
