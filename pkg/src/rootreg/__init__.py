"""Continuous root parameterizations of monic complex polynomial families
and certification of their Sobolev/Hoelder regularity."""

__version__ = "0.1.0"

from .covers import GrowthBudget, IntervalCoverRecord, extract_subcover, grow_interval
from .function_spaces import (
    NormReport,
    SampledFunction,
    lp_norm,
    norm_report,
    weak_lp_quasinorm,
    whitney_extend,
)
from .glaeser import glaeser_check, interpolation_bound, radical_envelope, taylor_bound_check
from .kernels import BACKEND as solver_backend
from .pipeline import PipelineConstants, run_induction_trace, verify_lemma_estimates
from .polynomials import (
    MonicPolynomial,
    TschirnhausenPolynomial,
    cauchy_bound,
    evaluate,
    from_roots,
    solve_roots,
    split_clusters,
    tschirnhausen,
)
from .tracking import (
    CurveFamily,
    RegularityReport,
    RootSystem,
    an_distance,
    intrinsic_w1p_energy,
    monodromy_loop,
    regularity_report,
    track_box,
    track_curve,
)

__all__ = [
    "__version__",
    "solver_backend",
    "MonicPolynomial",
    "TschirnhausenPolynomial",
    "evaluate",
    "solve_roots",
    "from_roots",
    "cauchy_bound",
    "tschirnhausen",
    "split_clusters",
    "SampledFunction",
    "NormReport",
    "lp_norm",
    "weak_lp_quasinorm",
    "norm_report",
    "whitney_extend",
    "interpolation_bound",
    "taylor_bound_check",
    "glaeser_check",
    "radical_envelope",
    "GrowthBudget",
    "IntervalCoverRecord",
    "grow_interval",
    "extract_subcover",
    "CurveFamily",
    "RootSystem",
    "RegularityReport",
    "track_curve",
    "monodromy_loop",
    "regularity_report",
    "track_box",
    "an_distance",
    "intrinsic_w1p_energy",
    "PipelineConstants",
    "run_induction_trace",
    "verify_lemma_estimates",
]
