"""Unique output prediction for unknown LTI systems, straight from data."""
from ._kernels import BACKEND
from .hankel import HankelBlock, hankel, is_persistently_exciting, mosaic, stack_partition
from .lti import (
    DimensionError,
    LagReport,
    StateSpace,
    Trajectory,
    is_trajectory,
    lag,
    numerical_rank,
    observability_matrix,
    simulate,
    toeplitz_matrix,
    unique_continuation,
)
from .predictor import (
    InformativityReport,
    PredictionOutcome,
    PredictionProblem,
    check_informativity_conditions,
    predict,
    predict_and_weave,
    weave,
)
from .verification import (
    IoRecursion,
    example1_family,
    family_agreement_check,
    kernel_uniqueness_oracle,
    simulate_recursion,
)

__version__ = "0.1.0"
