"""MVDR 波束形成模块"""

from internal.beamformer.covariance import (
    CovarianceEstimate,
    estimate_covariance,
    covariance_from_sources,
    analytic_covariance,
    reduce_covariance,
    diagonal_load,
    DEFAULT_LOADING_FACTOR,
)
from internal.beamformer.mvdr import (
    Correlator,
    LiftedCorrelator,
    mvdr_weights,
    condition_number,
    mvdr_output,
    reduced_mvdr,
    lift,
    output_sinr,
    ELEMENT,
    BEAMSPACE,
)
from internal.beamformer.pattern import (
    PatternGrid,
    beam_pattern,
    response_at,
    pattern_frame,
    null_depth_db,
    mainlobe_width,
)

__all__ = [
    "CovarianceEstimate", "estimate_covariance", "covariance_from_sources", "analytic_covariance",
    "reduce_covariance", "diagonal_load", "DEFAULT_LOADING_FACTOR",
    "Correlator", "LiftedCorrelator", "mvdr_weights", "condition_number", "mvdr_output", "reduced_mvdr", "lift",
    "output_sinr", "ELEMENT", "BEAMSPACE",
    "PatternGrid", "beam_pattern", "response_at", "pattern_frame", "null_depth_db", "mainlobe_width",
]
