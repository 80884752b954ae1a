"""Exact tools for nodal hypersurfaces in P^4: normality of node sets,
factoriality verdicts, incidence checks and explicit separating forms."""

from .config import (
    ConfigurationProfile,
    bese_condition,
    bese_separator,
    bese_thresholds,
    configuration_profile,
    conjecture15_fuzz,
    eisenbud_koh_check,
    max_on_plane_curve,
    node_position_bounds,
)
from .construct import (
    SeparatorCertificate,
    pair_lines,
    separator_certificates,
    separator_pipeline,
    sweep,
    two_point_cone,
)
from .geom import (
    LinearFlat,
    PointSet,
    ProjectivePoint,
    Projection,
    max_points_in_flat,
    project,
    random_projection,
    span_rank,
)
from .nodes import NodalInstance, example11, is_node, load_nodes, verify_instance
from .normality import (
    FactorialityVerdict,
    NormalityReport,
    h4_rank,
    independent_conditions,
    separating_form,
)
from .poly import HomogeneousForm, cone_pullback, evaluation_matrix, monomial_basis
from .scalar import GF, QQ, ExactScalar, field_from_spec, make_rng

__version__ = "0.1.0"

__all__ = [
    "ConfigurationProfile",
    "ExactScalar",
    "FactorialityVerdict",
    "GF",
    "HomogeneousForm",
    "LinearFlat",
    "NodalInstance",
    "NormalityReport",
    "PointSet",
    "Projection",
    "ProjectivePoint",
    "QQ",
    "SeparatorCertificate",
    "bese_condition",
    "bese_separator",
    "bese_thresholds",
    "cone_pullback",
    "configuration_profile",
    "conjecture15_fuzz",
    "eisenbud_koh_check",
    "evaluation_matrix",
    "example11",
    "field_from_spec",
    "h4_rank",
    "independent_conditions",
    "is_node",
    "load_nodes",
    "make_rng",
    "max_on_plane_curve",
    "max_points_in_flat",
    "monomial_basis",
    "node_position_bounds",
    "pair_lines",
    "project",
    "random_projection",
    "separating_form",
    "separator_certificates",
    "separator_pipeline",
    "span_rank",
    "sweep",
    "two_point_cone",
    "verify_instance",
]
