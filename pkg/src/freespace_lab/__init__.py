"""Exact Kantorovich-Rubinstein norms and extremal structure of
Lipschitz-free spaces over finite metric spaces."""

from __future__ import annotations

__version__ = "0.1.0"

from .attainment import AttainmentReport, strongly_attains, verify_na_equals_sna
from .certificates import CheckResult, check_report, check_row, check_verdict
from .elements import FreeElement, LipFunction, Molecule, all_molecules
from .errors import (
    ConsistencyError,
    DegenerateInput,
    EmptySpace,
    FreespaceError,
    InvalidGallery,
    InvalidPair,
    InvalidParameter,
    MalformedInput,
    SpaceMismatch,
    TooLarge,
)
from .extremal import (
    ClassificationRow,
    Status,
    Verdict,
    classify_all,
    classify_pair,
    has_property_Z,
    is_denting,
    is_exposed_by_fxy,
    is_extreme,
    is_strongly_exposed,
    oracle_extreme_points,
)
from .free_space import (
    kr_norm,
    kr_norm_dual,
    kr_norm_primal,
    molecule_distance,
    molecule_distance_bound,
    slice_diameter,
)
from .gallery import TailCertificate, gallery, tail_certificate
from .lipschitz import (
    PartialFunction,
    build_f_xy,
    build_fdent,
    build_g,
    lip_norm,
    mcshane_extend,
    pair,
    slice_molecules,
)
from .metric import (
    MetricSpace,
    metric_segment,
    random_space,
    snowflake,
    space_from_json,
    space_to_json,
    square_space,
    validate,
)

__all__ = [
    "AttainmentReport",
    "CheckResult",
    "ClassificationRow",
    "ConsistencyError",
    "DegenerateInput",
    "EmptySpace",
    "FreeElement",
    "FreespaceError",
    "InvalidGallery",
    "InvalidPair",
    "InvalidParameter",
    "LipFunction",
    "MalformedInput",
    "MetricSpace",
    "Molecule",
    "PartialFunction",
    "SpaceMismatch",
    "Status",
    "TailCertificate",
    "TooLarge",
    "Verdict",
    "__version__",
    "all_molecules",
    "build_f_xy",
    "build_fdent",
    "build_g",
    "check_report",
    "check_row",
    "check_verdict",
    "classify_all",
    "classify_pair",
    "gallery",
    "has_property_Z",
    "is_denting",
    "is_exposed_by_fxy",
    "is_extreme",
    "is_strongly_exposed",
    "kr_norm",
    "kr_norm_dual",
    "kr_norm_primal",
    "lip_norm",
    "mcshane_extend",
    "metric_segment",
    "molecule_distance",
    "molecule_distance_bound",
    "oracle_extreme_points",
    "pair",
    "random_space",
    "slice_diameter",
    "slice_molecules",
    "snowflake",
    "space_from_json",
    "space_to_json",
    "square_space",
    "strongly_attains",
    "tail_certificate",
    "validate",
    "verify_na_equals_sna",
]
