"""Rips and degree-Rips complexes, cluster hierarchies and branch points of
finite point clouds, with checked interleaving certificates for inclusions."""

from .complexes import SimplicialComplex, complexes_equal, inclusion_check, is_simplex, lesnick_complex, rips_complex
from .errors import (
    AboveCapError,
    ConstructionError,
    DensityError,
    EmptyHierarchyError,
    InputError,
    NoUpperBoundError,
    RipsHierarchyError,
    SubcloudError,
)
from .hierarchy import (
    BranchPoset,
    GammaTree,
    GammaVertex,
    branch_points,
    build_gamma,
    gamma_distance,
    glb_many,
    layer_ultrametric,
    lub,
    lub_many,
    max_branch_below,
    ultrametric,
)
from .homology import ComponentPartition, betti_numbers, connected_components, induced_component_map
from .interleaving import (
    BranchMaps,
    EquivalenceReport,
    InterleavingCertificate,
    ThetaMap,
    br_map_inclusion,
    br_map_shift,
    br_map_theta,
    branch_maps,
    build_theta_lesnick,
    build_theta_vr,
    certify_equivalence,
    certify_equivalence_range,
    certify_interleaving,
    verify_eq1xx,
    verify_gamma_homotopy,
    verify_homotopy_inequalities,
    verify_shift_sharpness,
    verify_simplicial_image,
    verify_upper_triangle,
)
from .metric import (
    DensityReport,
    DistanceMatrix,
    Inclusion,
    PointCloud,
    config_density_radius,
    core_distance,
    pairwise_distances,
    phase_change_values,
    point_density_radius,
)

__version__ = "0.1.0"
