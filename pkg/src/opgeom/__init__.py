"""Birkhoff-James orthogonality, norm attainment and extreme contractions
for operators between small finite-dimensional normed spaces."""

from .attain import (
    AttainmentSet,
    AttainmentConditions,
    OperatorSpec,
    check_attainment_conditions,
    check_theorem21,
    norm_attainment_set,
    operator,
    operator_norm,
    preserves_orthogonality_at,
)
from .basis import BasisResult, compare_with_svd, greedy_orthogonal_basis, verify_orthogonality_on_basis
from .bjorth import BJVerdict, bj_orthogonal, bj_orthogonal_exact_hilbert, min_over_lambda
from .errors import (
    DimensionMismatch,
    HypothesisViolation,
    InvalidSpace,
    IsometryHasNoWitness,
    NumericalFailure,
    OpGeomError,
    ValidationError,
)
from .experiment import plane_experiment, theorem27_experiment
from .extreme import (
    ExtremeCertificate,
    ExtremenessVerdict,
    WitnessPair,
    classify,
    hilbert_extreme_classify,
    flat_segment_extreme,
    is_isometry,
    lemma21_construct,
    nonextreme_witness,
    search_extreme_nonisometry,
    sufficient_extreme_check,
)
from .space import (
    ALL_OF_SPHERE,
    SegmentDescriptor,
    SpaceSpec,
    euclidean,
    find_flat_segment,
    is_extreme_point,
    is_strictly_convex,
    lp,
    norm,
    polyhedral2d,
    sphere_sample,
    unit_ball_extreme_points,
)

__version__ = "0.1.0"
