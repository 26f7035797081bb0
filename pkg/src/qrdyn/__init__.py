"""Numerical dynamics of planar stretch-and-power quasiregular maps."""

from .blaschke import (
    BlaschkeParams,
    Classification,
    MapKind,
    blaschke_derivative,
    blaschke_for_params,
    circle_fixed_points,
    classify_H,
    denjoy_wolff,
    eval_B,
    julia_circle_H,
    julia_on_circle,
    k_theta_threshold,
)
from .boettcher import (
    BoettcherApprox,
    ExternalRayReport,
    LocalMap,
    bottcher_iterate,
    dilatation_probe,
    external_ray,
    fixed_external_rays,
    local_map_from_json,
    local_map_to_json,
    log_transform,
)
from .circle_dynamics import (
    CircleLift,
    RayFixedPoint,
    RayKind,
    Stability,
    apply_T,
    build_lift,
    circle_map_arg,
    fixed_and_switched_points,
    interval_wrap_counts,
)
from .core_maps import (
    MapParams,
    Ray,
    eval_h,
    eval_H,
    fixed_ray_radius,
    mu_from_params,
    radial_factor,
)
from .dilatation import (
    DilatationState,
    DistortionProfile,
    compose_dilatation,
    distortion_profile,
    iterate_dilatation,
    r_H,
)
from .moebius import (
    DiskMoebius,
    MoebiusKind,
    compose_sequence,
    moebius_power,
    normalize,
    ray_branch_index,
    ray_moebius,
    tau_fixed_ray,
    trace_squared,
)
from .plane import (
    Certificate,
    PlaneCell,
    RenderConfig,
    Verdict,
    boundary_polyline,
    boundary_radii,
    boundary_radius_on_ray,
    classify_grid,
    classify_point,
    inner_radius,
    outer_radius,
    render,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
