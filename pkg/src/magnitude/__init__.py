"""Magnitude of metric spaces.

Exact magnitude of finite (possibly generalized) metric spaces by linear
algebra and closed forms; magnitude functions with singularity detection
and growth-exponent estimation; monotone finite-subset approximation of
compact subsets of the line, l1^N and l2^N, with intrinsic-volume reference
values.
"""

__version__ = "0.1.0"

from .spaces import (  # noqa: F401
    FiniteMetricSpace,
    ProjectionCheck,
    TAU_METRIC,
    check_fibration,
    check_projection,
    constant_distance_glue,
    distant_union,
    from_distance_matrix,
    from_graph,
    from_points,
    from_poset,
    is_homogeneous,
    is_scattered,
    is_ultrametric,
    scale,
    tensor_product,
)
from .engine import (  # noqa: F401
    CodeMagnitude,
    MagnitudeResult,
    MobiusMatrix,
    PDCertificate,
    SimilaritySystem,
    UltrametricReport,
    cauchy_schwarz_ratio,
    fibration_magnitude,
    glued_magnitude,
    is_positive_definite,
    magnitude,
    magnitude_code,
    magnitude_homogeneous,
    magnitude_scattered_series,
    mobius,
    product_magnitude,
    similarity,
    ultrametric_magnitude_bound,
    union_magnitude,
)
from .function import (  # noqa: F401
    GrowthFit,
    MagnitudeFunctionProfile,
    SingularityScan,
    asymptote_check,
    dimension_estimate,
    find_singularities,
    make_grid,
    sample_function,
    stability_scan,
)
from .compact import (  # noqa: F401
    ApproximationReport,
    IntrinsicVolumeVector,
    compact_union_magnitude,
    conjecture_rhs,
    cuboid_magnitude,
    grid_approximate,
    interval_magnitude,
    intrinsic_volumes,
    real_subset_magnitude,
    volume_lower_bound,
)
from .regions import RegionSpec, ball, cuboid, interval, interval_union, polygon  # noqa: F401
from . import errors  # noqa: F401
