"""linflow: exact classification of linear flows with numerical witnesses.

A linear flow is described by a generator spec: a finite multiset of real
Jordan blocks with rational growth and rotation rates.  The package
decides, with certificates, which equivalence and conjugacy relations hold
between two such flows, produces canonical forms and invariants, builds
the explicit homeomorphisms realizing selected verdicts, and validates
everything numerically through closed-form flow evaluation.
"""

from .blocks import (
    ApproxSpec,
    GeneratorSpec,
    JordanBlock,
    RationalMatrix,
    materialize,
    parse_matrix,
    parse_rational,
    parse_spec,
    realify,
    scale_spec,
    serialize_matrix,
    serialize_spec,
    spec_from_matrix,
    time_reverse,
)
from .classifier import (
    IMPLICATION_EDGES,
    AuditReport,
    CatalogEntry,
    CoincidenceReport,
    Decision,
    Relation,
    TraceEntry,
    Verdict,
    catalog2d,
    class_coincidence,
    classify,
    implication_audit,
)
from .errors import (
    ClusterAmbiguity,
    DefinitenessCheckFailed,
    DimMismatch,
    InternalCheckError,
    LinFlowError,
    LyapunovSolveFailed,
    MonotonicityNotAchieved,
    NotBounded,
    NotStable,
    PreconditionViolated,
    RangeGuard,
    SnapFailure,
    SpecParseError,
)
from .flows import FLOW_TIME_GUARD, FlowEvaluator, flow_apply
from .homeos import (
    HomeoMap,
    build_parabola_shear,
    build_pw_conj_hyperbolic,
    build_rotation_unwind_map,
    build_spiral_map,
    build_uniform_exponent_map,
)
from .invariants import (
    DistortionSubspace,
    GrowthProfile,
    PartitionDims,
    distortion_subspace,
    growth_profile,
    is_bounded,
    is_generic,
    lyapunov_spectrum,
    max_block_size_at,
    minimal_period,
    partition_dims,
    refined_dim,
    rotation_decouple,
    semisimple_collapse,
    subspec,
    top_rate,
    top_size,
)
from .probes import (
    ConjugacyReport,
    DecayReport,
    DistortionReport,
    LipschitzReport,
    PeriodReport,
    decay_rate_probe,
    distortion_probe,
    lipschitz_probe,
    period_probe,
    verify_conjugacy,
)
from .similarity import (
    ScalingCertificate,
    find_scaling,
    kinematic_similar,
    lipschitz_similar,
    lipschitz_similar_by_parts,
    lyapunov_similar,
    scaling_candidates,
    similar,
)

__version__ = "1.0.0"

__all__ = [
    "ApproxSpec",
    "GeneratorSpec",
    "JordanBlock",
    "RationalMatrix",
    "materialize",
    "parse_matrix",
    "parse_rational",
    "parse_spec",
    "realify",
    "scale_spec",
    "serialize_matrix",
    "serialize_spec",
    "spec_from_matrix",
    "time_reverse",
    "IMPLICATION_EDGES",
    "AuditReport",
    "CatalogEntry",
    "CoincidenceReport",
    "Decision",
    "Relation",
    "TraceEntry",
    "Verdict",
    "catalog2d",
    "class_coincidence",
    "classify",
    "implication_audit",
    "ClusterAmbiguity",
    "DefinitenessCheckFailed",
    "DimMismatch",
    "InternalCheckError",
    "LinFlowError",
    "LyapunovSolveFailed",
    "MonotonicityNotAchieved",
    "NotBounded",
    "NotStable",
    "PreconditionViolated",
    "RangeGuard",
    "SnapFailure",
    "SpecParseError",
    "FLOW_TIME_GUARD",
    "FlowEvaluator",
    "flow_apply",
    "HomeoMap",
    "build_parabola_shear",
    "build_pw_conj_hyperbolic",
    "build_rotation_unwind_map",
    "build_spiral_map",
    "build_uniform_exponent_map",
    "DistortionSubspace",
    "GrowthProfile",
    "PartitionDims",
    "distortion_subspace",
    "growth_profile",
    "is_bounded",
    "is_generic",
    "lyapunov_spectrum",
    "max_block_size_at",
    "minimal_period",
    "partition_dims",
    "refined_dim",
    "rotation_decouple",
    "semisimple_collapse",
    "subspec",
    "top_rate",
    "top_size",
    "ConjugacyReport",
    "DecayReport",
    "DistortionReport",
    "LipschitzReport",
    "PeriodReport",
    "decay_rate_probe",
    "distortion_probe",
    "lipschitz_probe",
    "period_probe",
    "verify_conjugacy",
    "ScalingCertificate",
    "find_scaling",
    "kinematic_similar",
    "lipschitz_similar",
    "lipschitz_similar_by_parts",
    "lyapunov_similar",
    "scaling_candidates",
    "similar",
]
