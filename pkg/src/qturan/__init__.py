"""Certified evaluation of q-Kummer and basic hypergeometric series, their classical
limits, and numerical verification of Turán-type inequalities for them."""

from .backend import Enclosure, NumericBackend, parse_number, to_fraction
from .classical import (
    ClassicalRatioParams,
    ExpSplit,
    classical_ratio_h,
    exp_split,
    f_ratio,
    g_ratio,
    generalized_pfq,
    kummer_1f1,
    ramanujan_theta,
    ramanujan_theta_enclosure,
)
from .errors import (
    BackendError,
    DomainError,
    HypothesisViolation,
    NonTerminating,
    NoGeometricBound,
    OutOfConvergenceDomain,
    PoleParameter,
    PrecisionExhausted,
    QTuranError,
    SeriesOverflow,
)
from .qfunctions import (
    ConvergenceClass,
    PhiParams,
    QContext,
    QKummerParams,
    QRatioParams,
    RatioValue,
    Variant,
    basic_hypergeometric,
    classify_convergence,
    q_kummer_phi,
    q_pochhammer,
    q_pochhammer_infinite,
    q_ratio,
    q_ratio_h,
    q_ratio_hr,
    theorem_hypotheses,
)
from .series import SeriesValue, TermStream, partial_sums, sum_with_tail_bound
from .verifier import (
    GridSpec,
    Outcome,
    ParameterPoint,
    Status,
    SweepSpec,
    Target,
    TolPolicy,
    VerificationReport,
    build_coefficient_table,
    check_inner_ratio,
    check_lemma_cesaro,
    check_lemma_series_quotient,
    check_proof_chain,
    sweep,
    verify_classical_bounds,
    verify_coefficients,
    verify_monotone,
    verify_turan,
)

__version__ = "0.1.0"
