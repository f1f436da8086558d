"""Numerical companion for binary and quaternary prime-power inequalities.

The library splits into exact and floating-point halves.  Exact (Fraction
arithmetic throughout): exponent-pair calculus, theorem-parameter audits,
and Rosser weight tables with their sandwich and sum identities.
Floating point: linear-sieve constants, smoothing kernels, exponential
sums with their integral predictions, and desk-scale solution searches.
"""

from .errors import (
    DegenerateSieveError,
    DiocheckError,
    InadmissiblePairError,
    OscillationBudgetError,
    ParameterRangeError,
    ResourceBudgetError,
)
from .expsums import (
    MajorArcReport,
    MeanValueReport,
    SmoothingKernel,
    SumContext,
    SupScanReport,
    eval_I,
    eval_L,
    eval_L_many,
    eval_Lpm,
    eval_T,
    kernel_breakpoints,
    major_arc_check,
    mean_value_check,
    mobius_weights,
    phi,
    sup_scan,
    theta,
    theta_bound,
    theta_quadrature,
)
from .pairs import (
    HUXLEY_PAIR,
    TRIVIAL_PAIR,
    ExponentPair,
    a_process,
    b_process,
    enumerate_pairs,
    eval_word,
    expand_word,
    optimize_word,
    vdc_bound,
)
from .params import (
    BOUNDARY_PASS,
    C_SUP,
    FAIL,
    PASS,
    AuditReport,
    AuditRow,
    Params,
    almost_prime_order,
    audit_lemma27,
    audit_lemma210,
    audit_lemma211,
    derive_params,
    sweep_audits,
)
from .primes import (
    PrimeTable,
    big_omega,
    build_tables,
    cache_dir,
    default_cache_path,
    is_z_rough,
    load_tables,
    primes_in,
    save_tables,
    z_rough_mask,
)
from .reports import emit_report
from .rosser import (
    RosserWeights,
    SieveSums,
    SwitchVerdict,
    build_weights,
    compute_sums,
    sandwich_arrays,
    sandwich_check,
    switch_check,
)
from .sieve_functions import (
    E_GAMMA,
    EULER_GAMMA,
    binary_margin,
    lower_f,
    quaternary_margin,
    upper_F,
)
from .solver import (
    Constraint,
    ScanReport,
    ScanRow,
    SearchConfig,
    SolutionReport,
    predict_binary_main,
    predict_quaternary_main,
    scan_exceptional,
    search_binary,
    search_quaternary,
)

__version__ = "0.1.0"

__all__ = [
    "AuditReport",
    "AuditRow",
    "BOUNDARY_PASS",
    "C_SUP",
    "Constraint",
    "DegenerateSieveError",
    "DiocheckError",
    "EULER_GAMMA",
    "E_GAMMA",
    "ExponentPair",
    "FAIL",
    "HUXLEY_PAIR",
    "InadmissiblePairError",
    "MajorArcReport",
    "MeanValueReport",
    "OscillationBudgetError",
    "PASS",
    "ParameterRangeError",
    "Params",
    "PrimeTable",
    "ResourceBudgetError",
    "RosserWeights",
    "ScanReport",
    "ScanRow",
    "SearchConfig",
    "SieveSums",
    "SmoothingKernel",
    "SolutionReport",
    "SumContext",
    "SupScanReport",
    "SwitchVerdict",
    "TRIVIAL_PAIR",
    "a_process",
    "almost_prime_order",
    "audit_lemma27",
    "audit_lemma210",
    "audit_lemma211",
    "b_process",
    "big_omega",
    "binary_margin",
    "build_tables",
    "build_weights",
    "cache_dir",
    "compute_sums",
    "default_cache_path",
    "derive_params",
    "emit_report",
    "enumerate_pairs",
    "eval_I",
    "eval_L",
    "eval_L_many",
    "eval_Lpm",
    "eval_T",
    "eval_word",
    "expand_word",
    "is_z_rough",
    "kernel_breakpoints",
    "load_tables",
    "lower_f",
    "major_arc_check",
    "mean_value_check",
    "mobius_weights",
    "optimize_word",
    "phi",
    "predict_binary_main",
    "predict_quaternary_main",
    "primes_in",
    "quaternary_margin",
    "sandwich_arrays",
    "sandwich_check",
    "save_tables",
    "scan_exceptional",
    "search_binary",
    "search_quaternary",
    "sup_scan",
    "sweep_audits",
    "switch_check",
    "theta",
    "theta_bound",
    "theta_quadrature",
    "upper_F",
    "vdc_bound",
    "z_rough_mask",
]
