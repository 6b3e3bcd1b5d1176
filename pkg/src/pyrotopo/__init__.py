"""Market-layout topology analysis.

Egress distance fields and closed-form expectations, a contact-process
fire-spread model with ballistic spark dispersal, site-plan compliance
rules, and batch experiment sweeps — all driven from plain-text site plans
or built-in layout families.
"""

from .compliance import ComplianceReport, RuleConfig, check_egress_rule, check_fold_spacing, compliance_report
from .egress import (
    DistanceField,
    EgressStats,
    MortalityParams,
    analytic_expected,
    analytic_tail,
    distance_field,
    expected_egress,
    mortality_mean,
    mortality_ratio,
    mortality_weight,
)
from .experiment import ComparisonRecord, SweepRow, SweepSpec, compare_layouts, run_sweep
from .layout import (
    BlockSite,
    CellKind,
    Checkerboard,
    Comb,
    DoubleRow,
    HollowRect,
    Layout,
    LayoutError,
    Linear,
    SitePlanParseError,
    Zigzag,
    build_checkerboard,
    build_linear,
    build_variant,
    parse_site_plan,
    serialize_site_plan,
)
from .propagation import (
    BlockStatus,
    CriticalGammaEstimate,
    FireOutcome,
    FireParams,
    FireState,
    FireStream,
    SpreadEstimate,
    block_distance,
    burn_map_text,
    central_ignition,
    estimate_critical_gamma,
    initial_fire_state,
    receptive_neighbors,
    simulate_fire,
    spread_probability,
    step_fire,
)

__version__ = "0.1.0"

__all__ = [
    "BlockSite",
    "BlockStatus",
    "CellKind",
    "Checkerboard",
    "Comb",
    "ComparisonRecord",
    "ComplianceReport",
    "CriticalGammaEstimate",
    "DistanceField",
    "DoubleRow",
    "EgressStats",
    "FireOutcome",
    "FireParams",
    "FireState",
    "FireStream",
    "HollowRect",
    "Layout",
    "LayoutError",
    "Linear",
    "MortalityParams",
    "RuleConfig",
    "SitePlanParseError",
    "SpreadEstimate",
    "SweepRow",
    "SweepSpec",
    "Zigzag",
    "analytic_expected",
    "analytic_tail",
    "block_distance",
    "build_checkerboard",
    "build_linear",
    "build_variant",
    "burn_map_text",
    "central_ignition",
    "check_egress_rule",
    "check_fold_spacing",
    "compare_layouts",
    "compliance_report",
    "distance_field",
    "estimate_critical_gamma",
    "expected_egress",
    "initial_fire_state",
    "mortality_mean",
    "mortality_ratio",
    "mortality_weight",
    "parse_site_plan",
    "receptive_neighbors",
    "run_sweep",
    "serialize_site_plan",
    "simulate_fire",
    "spread_probability",
    "step_fire",
]
