"""Regular simplices and the scatter-matrix test for equidistant point sets."""

__version__ = "0.1.0"

from .characterize import (
    DiagnosticsReport,
    ProjectionReport,
    ToleranceConfig,
    Verdict,
    analyze,
    backward_distance_recovery,
    classify,
    is_equidistant,
    projection_checks,
    sphericity,
)
from .linalg import (
    RigidMotion,
    apply_motion,
    center,
    covariance,
    distance_matrix,
    gram_schmidt,
    mean,
    random_rotation,
    scatter,
)
from .simplex import (
    LemmaQuantities,
    SimplexSpec,
    construct,
    construct_incremental,
    construct_projection,
    lemma_quantities,
)
