"""Linear-optical fusion of GHZ-like photonic states.

Exact dual-rail Fock simulation of standard and modified fusion gates,
symbolic Schmidt-angle calculus, protocol planners, and resource estimators,
with every analytic formula cross-validated against the Fock-space oracle.
"""

from .fock import (
    NotGHZLikeError,
    OccupationVector,
    PauliFrame,
    PhotonicState,
    QubitEncoding,
    SchmidtState,
    extract_ghz_form,
    make_ghz_like,
    standard_encoding,
    tensor,
)
from .optics import (
    DetectionPattern,
    MeasurementOutcome,
    ModeUnitary,
    apply,
    embed,
    measure,
    qubit_x,
    qubit_z,
    vbs,
)
from .fusion import (
    FusionKind,
    FusionOutcome,
    FusionSpec,
    OutcomeLabel,
    SeparableBranch,
    fuse_oracle,
    fuse_similar,
    fuse_similar_oracle,
    fuse_symbolic,
    similar_success_probability,
    standard_success_probability,
    total_success,
)
from .protocols import (
    FockExecution,
    FusionNode,
    PlanMetrics,
    ProtocolPlan,
    ResourceLeaf,
    TrialStats,
    enumerate_fusion_trees,
    evaluate_plan,
    plan_efficient,
    plan_from_json,
    plan_general,
    plan_to_json,
    run_plan_fock,
    simulate_plan,
)
from .analysis import (
    MultiplexPreset,
    PhotonBudget,
    RateQuery,
    SourceModel,
    DEFAULT_SOURCES,
    MULTIPLEX_PRESETS,
    entropy,
    entropy_gap,
    fusion_entropy,
    multiplex_budget,
    required_resource_rate,
    resource_rate_query,
)

__version__ = "0.1.0"
