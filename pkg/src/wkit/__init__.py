"""Exact arithmetic for Welschinger-type invariants of real del Pezzo surfaces."""

from .errors import *  # noqa: F401,F403
from .invariants import (
    InvariantDescriptor,
    InvariantValue,
    Phi,
    Provenance,
    ValidationReport,
    closed_form_equal_genus,
    closed_form_pencil,
    cubic_elliptic_example,
    descriptor,
    gw_bound_check,
    validate_hypotheses,
)
from .lattice import (
    DivisorClass,
    NodalPairLattice,
    SurfaceLattice,
    arithmetic_genus,
    intersect,
    is_big,
    is_effective,
    is_nef,
    minus_one_curves,
    parse_class,
)
from .real import (
    ComponentSelection,
    PointDistribution,
    RealComponent,
    RealSurfaceModel,
    TopoType,
    catalog,
    catalog_model,
    enumerate_distributions,
    load_model,
)
from .reductions import (
    AsymptoticSeries,
    RulesetBackend,
    TableBackend,
    asymptotic_probe,
    combo_e14,
    genus1_degeneration_sums,
    genus2_e15,
    genus3_e16,
    normalize_to_degree2,
    table1_pipeline,
    transfer_to_pair,
)
from .store import BundledData, CacheFile, InvariantLedger, RunReport
from .wnumbers import (
    Memo,
    RuleSet,
    TangencyVector,
    WPhi,
    WState,
    evaluate,
    load_bundled_rules,
    load_rule_spec,
    positivity_probe,
)

__version__ = "0.1.0"

__all__ = [
    "AsymptoticSeries",
    "BundledData",
    "CacheFile",
    "ComponentSelection",
    "DivisorClass",
    "InvariantDescriptor",
    "InvariantLedger",
    "InvariantValue",
    "Memo",
    "NodalPairLattice",
    "Phi",
    "PointDistribution",
    "Provenance",
    "RealComponent",
    "RealSurfaceModel",
    "RuleSet",
    "RulesetBackend",
    "RunReport",
    "SurfaceLattice",
    "TableBackend",
    "TangencyVector",
    "TopoType",
    "ValidationReport",
    "WPhi",
    "WState",
    "arithmetic_genus",
    "asymptotic_probe",
    "catalog",
    "catalog_model",
    "closed_form_equal_genus",
    "closed_form_pencil",
    "combo_e14",
    "cubic_elliptic_example",
    "descriptor",
    "enumerate_distributions",
    "evaluate",
    "genus1_degeneration_sums",
    "genus2_e15",
    "genus3_e16",
    "gw_bound_check",
    "intersect",
    "is_big",
    "is_effective",
    "is_nef",
    "load_bundled_rules",
    "load_model",
    "load_rule_spec",
    "minus_one_curves",
    "normalize_to_degree2",
    "parse_class",
    "positivity_probe",
    "table1_pipeline",
    "transfer_to_pair",
    "validate_hypotheses",
    "__version__",
]
