"""Local fractal functions, Read-Bajraktarević operators and local IFS attractors."""

from .analysis import (
    ConditionReport,
    check_Cn,
    check_holder,
    check_Lp,
    check_sobolev,
    estimate_norm,
    holder_bound,
)
from .geometry import (
    AffineMap1D,
    AffineMap2D,
    EmptySetError,
    GridSet,
    Interval,
    Rect,
    hausdorff_distance,
    intersect_grid_set,
    map_grid_set,
)
from .local_ifs import (
    LocalIFS,
    apply_local_operator,
    check_local_subset_global,
    code_metric,
    code_point,
    corner_contraction_ifs,
    graph_ifs_from_rb,
    iterate_global_attractor,
    iterate_local_attractor,
)
from .piecewise import PiecewisePoly, bspline, holder_seminorm_estimate, sup_norm_bracket
from .rb import (
    InterpolationData,
    PartitionSpec,
    RBSystem,
    SampledFunction,
    apply_rb,
    build_affine_fif,
    build_property_S_system,
    check_Cn_conditions,
    check_property_J,
    eval_recursive,
    make_binary_partition,
    make_partition,
    recover_lambda,
    solve_fixed_point,
    verify_self_referential,
)
from .tensor import TensorSurface, tensor_apply, tensor_fixed_point

__version__ = "0.1.0"
