"""tc-atlas: certified mod-2 cup-length bounds for topological complexity
(plain, symmetric, and fixed-midpoint symmetric) over a catalog of spaces,
plus executable time-reversal-symmetric motion planners with a property-test
harness that checks them against the defining identities.
"""

from .f2_algebra import (
    CupLengthCertificate,
    F2Element,
    F2Subspace,
    GradedF2Algebra,
    cup_length,
    diagonal_kernel,
    norm_subspace,
    positive_part,
    rref,
    tensor_product,
    tensor_square,
    verify_certificate,
)
from .spaces import (
    DEFAULT_SUITE,
    BoundPair,
    BoundReport,
    SpaceDescriptor,
    SpaceSpecError,
    bound_table,
    build_cohomology,
    compute_report,
    parse_space,
    reports_to_csv,
    reports_to_json,
    tc_bounds,
    tcs_bounds,
    tcs_sigma_bounds,
)
from .planners import (
    MetricTree,
    Path,
    PlannerOutput,
    constant_path,
    convex_plan,
    midpoint_circle_degree,
    midpoint_constant,
    tree_plan,
    wrap_angle,
)
from .sphere import SphereConfig, SpherePlanner, sphere_distance, sphere_point
from .torus import (
    TorusMidpointConfig,
    TorusMidpointPlanner,
    TorusSymmetricPlanner,
    empirical_region_count,
    torus_distance,
    torus_point,
)
from .covers import (
    PartitionValues,
    UnorderedPathClass,
    diagonal_section,
    disjointify_index,
    lift_section,
    sphere_retraction,
    torus_retraction,
)
from .harness import CheckConfig, PlannerCheckReport, check_planner, standard_case

__version__ = "0.1.0"
