"""Decision procedures for equivalence and conjugacy of linear flows.

Every decision is exact: block data is rational, candidate time scalings
come from a finite spectrum-derived set, and each Yes carries a scaling
certificate.  Undecided is a first-class outcome reserved for the regimes
where no finite criterion is available; it is never collapsed into No.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .blocks import GeneratorSpec, JordanBlock, scale_spec, serialize_spec
from .errors import DimMismatch, InternalCheckError
from .invariants import (
    is_generic,
    lyapunov_spectrum,
    partition_dims,
    rotation_decouple,
    semisimple_collapse,
    subspec,
)
from .similarity import (
    ScalingCertificate,
    lipschitz_similar,
    lipschitz_similar_by_parts,
    lyapunov_similar,
    kinematic_similar,
    scaling_candidates,
    similar,
)

__all__ = [
    "Relation",
    "Decision",
    "TraceEntry",
    "Verdict",
    "classify",
    "CatalogEntry",
    "catalog2d",
    "CoincidenceReport",
    "class_coincidence",
    "AuditReport",
    "implication_audit",
    "IMPLICATION_EDGES",
]


class Relation(enum.Enum):
    LIN_EQUIV = "LinEquiv"
    DIFF_EQUIV = "DiffEquiv"
    LIP_EQUIV = "LipEquiv"
    HOELDER_EQUIV = "HoelderEquiv"
    PW_LIP_EQUIV = "PwLipEquiv"
    TOP_EQUIV = "TopEquiv"
    LIN_CONJ = "LinConj"
    DIFF_CONJ = "DiffConj"
    LIP_CONJ = "LipConj"
    HOELDER_CONJ = "HoelderConj"
    PW_LIP_CONJ = "PwLipConj"

    @classmethod
    def from_string(cls, text):
        for rel in cls:
            if rel.value.lower() == text.strip().lower():
                return rel
        names = ", ".join(r.value for r in cls)
        raise ValueError(f"unknown relation {text!r}; expected one of {names}")


class Decision(enum.Enum):
    YES = "Yes"
    NO = "No"
    UNDECIDED = "Undecided"


@dataclass(frozen=True)
class TraceEntry:
    step: str
    outcome: str
    detail: str

    def to_json(self):
        return {"step": self.step, "outcome": self.outcome, "detail": self.detail}


@dataclass(frozen=True)
class Verdict:
    relation: Relation
    decision: Decision
    left: GeneratorSpec
    right: GeneratorSpec
    scaling: Optional[ScalingCertificate] = None
    trace: tuple = ()

    def to_json(self):
        return {
            "relation": self.relation.value,
            "decision": self.decision.value,
            "left": serialize_spec(self.left),
            "right": serialize_spec(self.right),
            "scaling": None if self.scaling is None else self.scaling.to_json(),
            "trace": [e.to_json() for e in self.trace],
        }


def _central(spec):
    return subspec(spec, "central")


def _defective(spec):
    return subspec(spec, "defective")


def _is_hyperbolic(spec):
    return partition_dims(spec).central == 0


def _fmt_alpha(alpha):
    return str(alpha)


# Per-candidate predicates.  Each takes (left, scaled_right) and returns a
# bool; the matching relation holds iff some candidate scaling passes.

def _pred_linear(a, sb):
    return similar(a, sb)


def _pred_hoelder(a, sb):
    return lyapunov_similar(a, sb) and similar(_central(a), _central(sb))


def _pred_lip_routes(a, sb):
    """Both independent Lipschitz criteria; they must agree."""
    central_ok = similar(_central(a), _central(sb))
    via_collapse = lipschitz_similar(a, sb) and central_ok
    via_parts = lipschitz_similar_by_parts(a, sb) and central_ok
    return via_collapse, via_parts


def _pred_kinematic(a, sb):
    return kinematic_similar(a, sb) and similar(_central(a), _central(sb))


def _scan_candidates(a, b, pred, name, trace):
    cands = scaling_candidates(a, b)
    trace.append(
        TraceEntry(
            "candidates",
            "generated",
            "alpha in {" + ", ".join(_fmt_alpha(c) for c in cands) + "}",
        )
    )
    for alpha in cands:
        sb = scale_spec(b, alpha)
        if pred(a, sb):
            trace.append(TraceEntry(name, "pass", f"alpha = {_fmt_alpha(alpha)}"))
            return ScalingCertificate(
                alpha,
                name,
                {
                    "left_generator": serialize_spec(a),
                    "scaled_right_generator": serialize_spec(sb),
                },
            )
        trace.append(TraceEntry(name, "fail", f"alpha = {_fmt_alpha(alpha)}"))
    trace.append(TraceEntry(name, "exhausted", f"{len(cands)} candidates"))
    return None


def _scan_lipschitz(a, b, trace):
    cands = scaling_candidates(a, b)
    trace.append(
        TraceEntry(
            "candidates",
            "generated",
            "alpha in {" + ", ".join(_fmt_alpha(c) for c in cands) + "}",
        )
    )
    for alpha in cands:
        sb = scale_spec(b, alpha)
        via_collapse, via_parts = _pred_lip_routes(a, sb)
        if via_collapse != via_parts:
            raise InternalCheckError(
                "lipschitz criteria disagree at "
                f"alpha = {_fmt_alpha(alpha)}: collapse route says "
                f"{via_collapse}, spectrum-plus-defective route says {via_parts}"
            )
        if via_collapse:
            trace.append(
                TraceEntry("lipschitz", "pass", f"alpha = {_fmt_alpha(alpha)}, both routes")
            )
            return ScalingCertificate(
                alpha,
                "lipschitz",
                {
                    "left_generator": serialize_spec(a),
                    "scaled_right_generator": serialize_spec(sb),
                },
            )
        trace.append(TraceEntry("lipschitz", "fail", f"alpha = {_fmt_alpha(alpha)}"))
    trace.append(TraceEntry("lipschitz", "exhausted", f"{len(cands)} candidates"))
    return None


def _fixed_scaling_check(a, b, pred, name, trace):
    """Conjugacy variant: the only admissible scaling is alpha = 1."""
    ok = pred(a, b)
    trace.append(TraceEntry(name, "pass" if ok else "fail", "alpha = 1"))
    if not ok:
        return None
    return ScalingCertificate(
        Fraction(1),
        name,
        {
            "left_generator": serialize_spec(a),
            "scaled_right_generator": serialize_spec(b),
        },
    )


def _fixed_lipschitz_check(a, b, trace):
    via_collapse, via_parts = _pred_lip_routes(a, b)
    if via_collapse != via_parts:
        raise InternalCheckError(
            "lipschitz criteria disagree at alpha = 1: collapse route says "
            f"{via_collapse}, spectrum-plus-defective route says {via_parts}"
        )
    trace.append(
        TraceEntry("lipschitz", "pass" if via_collapse else "fail", "alpha = 1, both routes")
    )
    if not via_collapse:
        return None
    return ScalingCertificate(
        Fraction(1),
        "lipschitz",
        {
            "left_generator": serialize_spec(a),
            "scaled_right_generator": serialize_spec(b),
        },
    )


def _stable_unstable_dims(spec):
    parts = partition_dims(spec)
    return parts.stable, parts.unstable


TOP_LABELS = ("zero", "shear", "center", "saddle", "degenerate-line", "node")


def _topological_label_2d(spec):
    """Orbit-structure class of a planar flow.  Total: every dim-2 spec
    lands in exactly one of the six labels."""
    if spec.dim != 2:
        raise DimMismatch("topological labels are defined for dimension 2")
    blocks = spec.blocks
    if len(blocks) == 1:
        (blk,) = blocks
        if blk.im != 0:
            return "node" if blk.re != 0 else "center"
        # single real block of size 2
        return "node" if blk.re != 0 else "shear"
    a1, a2 = blocks[0].re, blocks[1].re
    if a1 == 0 and a2 == 0:
        return "zero"
    if a1 == 0 or a2 == 0:
        return "degenerate-line"
    return "saddle" if a1 * a2 < 0 else "node"


def _decide_topological(a, b, trace):
    if _is_hyperbolic(a) and _is_hyperbolic(b):
        da = _stable_unstable_dims(a)
        db = _stable_unstable_dims(b)
        ok = sorted(da) == sorted(db)
        trace.append(
            TraceEntry(
                "hyperbolic index",
                "pass" if ok else "fail",
                f"stable/unstable dims {da} vs {db}, unordered",
            )
        )
        return (Decision.YES if ok else Decision.NO), None
    if a.dim == 1:
        za = a.blocks[0].re == 0
        zb = b.blocks[0].re == 0
        ok = za == zb
        trace.append(
            TraceEntry(
                "line catalog",
                "pass" if ok else "fail",
                "flows on a line match iff both or neither are rest points",
            )
        )
        return (Decision.YES if ok else Decision.NO), None
    if a.dim == 2:
        la, lb = _topological_label_2d(a), _topological_label_2d(b)
        trace.append(
            TraceEntry(
                "planar catalog",
                "pass" if la == lb else "fail",
                f"labels {la} vs {lb}",
            )
        )
        return (Decision.YES if la == lb else Decision.NO), None
    # Dimension >= 3 with a central part: no complete criterion is known,
    # but a Hoelder match is still sufficient (never necessary) here.
    cert = _scan_candidates(a, b, _pred_hoelder, "hoelder sufficient", trace)
    if cert is not None:
        return Decision.YES, cert
    trace.append(
        TraceEntry(
            "scope",
            "undecided",
            "dimension >= 3 with a central part present and the"
            " sufficient criterion does not apply",
        )
    )
    return Decision.UNDECIDED, None


def classify(relation, a, b):
    """Decide one relation between two generators.  Returns a Verdict.

    A dimension mismatch is a definite No (the flows live on different
    spaces), not an error.
    """
    if not isinstance(relation, Relation):
        relation = Relation.from_string(str(relation))
    trace = []
    if a.dim != b.dim:
        trace.append(
            TraceEntry("dimension", "fail", f"{a.dim} != {b.dim}")
        )
        return Verdict(relation, Decision.NO, a, b, None, tuple(trace))
    trace.append(TraceEntry("dimension", "ok", f"{a.dim} == {b.dim}"))

    cert = None
    if relation in (Relation.LIN_EQUIV, Relation.DIFF_EQUIV):
        cert = _scan_candidates(a, b, _pred_linear, "linear", trace)
        decision = Decision.YES if cert else Decision.NO
    elif relation in (Relation.LIN_CONJ, Relation.DIFF_CONJ):
        cert = _fixed_scaling_check(a, b, _pred_linear, "linear", trace)
        decision = Decision.YES if cert else Decision.NO
    elif relation is Relation.HOELDER_EQUIV:
        cert = _scan_candidates(a, b, _pred_hoelder, "hoelder", trace)
        decision = Decision.YES if cert else Decision.NO
    elif relation is Relation.HOELDER_CONJ:
        cert = _fixed_scaling_check(a, b, _pred_hoelder, "hoelder", trace)
        decision = Decision.YES if cert else Decision.NO
    elif relation is Relation.LIP_EQUIV:
        cert = _scan_lipschitz(a, b, trace)
        decision = Decision.YES if cert else Decision.NO
    elif relation is Relation.LIP_CONJ:
        cert = _fixed_lipschitz_check(a, b, trace)
        decision = Decision.YES if cert else Decision.NO
    elif relation is Relation.PW_LIP_CONJ:
        ok = kinematic_similar(a, b) and similar(_central(a), _central(b))
        trace.append(
            TraceEntry(
                "kinematic",
                "pass" if ok else "fail",
                "rotation-decoupled forms and central parts compared at alpha = 1",
            )
        )
        if ok:
            cert = ScalingCertificate(
                Fraction(1),
                "piecewise-lipschitz-conjugacy",
                {
                    "left_generator": serialize_spec(a),
                    "scaled_right_generator": serialize_spec(b),
                },
            )
        decision = Decision.YES if ok else Decision.NO
    elif relation is Relation.PW_LIP_EQUIV:
        if _is_hyperbolic(a) and _is_hyperbolic(b):
            da, db = _stable_unstable_dims(a), _stable_unstable_dims(b)
            ok = sorted(da) == sorted(db)
            trace.append(
                TraceEntry(
                    "hyperbolic index",
                    "pass" if ok else "fail",
                    f"stable/unstable dims {da} vs {db}, unordered",
                )
            )
            decision = Decision.YES if ok else Decision.NO
        else:
            # Outside the hyperbolic case a scaled kinematic match is still
            # sufficient (a time-rescaled conjugacy is an equivalence).
            cert = _scan_candidates(a, b, _pred_kinematic, "kinematic sufficient", trace)
            if cert is not None:
                decision = Decision.YES
            else:
                trace.append(
                    TraceEntry(
                        "scope",
                        "undecided",
                        "no complete criterion outside the hyperbolic case"
                        " and the sufficient criterion does not apply",
                    )
                )
                decision = Decision.UNDECIDED
    elif relation is Relation.TOP_EQUIV:
        decision, cert = _decide_topological(a, b, trace)
    else:  # pragma: no cover
        raise ValueError(f"unhandled relation {relation}")
    return Verdict(relation, decision, a, b, cert, tuple(trace))


# ---------------------------------------------------------------------------
# Planar catalog


@dataclass(frozen=True)
class CatalogEntry:
    row: str
    representative: GeneratorSpec
    scaling: Optional[Fraction]
    label: Optional[str] = None

    def to_json(self):
        return {
            "row": self.row,
            "representative": serialize_spec(self.representative),
            "scaling": None if self.scaling is None else str(self.scaling),
            "label": self.label,
        }


def _similar_rep_2d(spec):
    """Canonical representative of the scaling-plus-similarity class and
    the scaling alpha with scale_spec(spec, alpha) == representative."""
    blocks = spec.blocks
    if len(blocks) == 1:
        (blk,) = blocks
        if blk.im == 0:
            # single real block of size 2
            alpha = Fraction(1) if blk.re == 0 else 1 / Fraction(blk.re)
        else:
            if blk.re == 0:
                alpha = 1 / Fraction(blk.im)
            else:
                alpha = 1 / Fraction(blk.re)
        return scale_spec(spec, alpha), alpha
    a1, a2 = Fraction(blocks[0].re), Fraction(blocks[1].re)
    if a1 == 0 and a2 == 0:
        return spec, Fraction(1)
    # pick the exponent of larger modulus; break the {-x, x} tie toward the
    # positive one so the representative keeps its sign pattern
    e = a1 if abs(a1) > abs(a2) else a2
    alpha = 1 / e
    return scale_spec(spec, alpha), alpha


def _spectrum_spec(spec):
    return GeneratorSpec(
        [JordanBlock(1, lam, 0) for lam in lyapunov_spectrum(spec)]
    )


def catalog2d(spec):
    """Four coarsening normal forms of a planar generator, finest first."""
    if spec.dim != 2:
        raise DimMismatch(f"catalog requires dimension 2, got {spec.dim}")
    sim_rep, sim_alpha = _similar_rep_2d(spec)
    lip_rep, lip_alpha = _similar_rep_2d(semisimple_collapse(spec))
    lyap_rep, lyap_alpha = _similar_rep_2d(_spectrum_spec(spec))
    label = _topological_label_2d(spec)
    return {
        "similar": CatalogEntry("similar", sim_rep, sim_alpha),
        "lipschitz": CatalogEntry("lipschitz", lip_rep, lip_alpha),
        "lyapunov": CatalogEntry("lyapunov", lyap_rep, lyap_alpha),
        "topological": CatalogEntry(
            "topological", _TOP_REPS[label], None, label=label
        ),
    }


_TOP_REPS = {
    "zero": GeneratorSpec([JordanBlock(1, 0, 0), JordanBlock(1, 0, 0)]),
    "shear": GeneratorSpec([JordanBlock(2, 0, 0)]),
    "center": GeneratorSpec([JordanBlock(1, 0, 1)]),
    "saddle": GeneratorSpec([JordanBlock(1, -1, 0), JordanBlock(1, 1, 0)]),
    "degenerate-line": GeneratorSpec([JordanBlock(1, 0, 0), JordanBlock(1, 1, 0)]),
    "node": GeneratorSpec([JordanBlock(1, 1, 0), JordanBlock(1, 1, 0)]),
}


# ---------------------------------------------------------------------------
# Class coincidence for generic generators


@dataclass(frozen=True)
class CoincidenceReport:
    generic: bool
    real_spectrum: Optional[bool]
    smooth_class_equals_lipschitz: Optional[bool]
    lipschitz_class_equals_hoelder: Optional[bool]

    def to_json(self):
        return {
            "generic": self.generic,
            "real_spectrum": self.real_spectrum,
            "smooth_class_equals_lipschitz": self.smooth_class_equals_lipschitz,
            "lipschitz_class_equals_hoelder": self.lipschitz_class_equals_hoelder,
        }


def class_coincidence(spec):
    """For a generic generator the smooth, Lipschitz and Hoelder classes
    collapse together exactly when the spectrum is real; rotation splits
    them.  Outside the generic case the comparison is not determined by
    this criterion, so the fields stay None."""
    if not is_generic(spec):
        return CoincidenceReport(False, None, None, None)
    real = all(blk.im == 0 for blk in spec.blocks)
    return CoincidenceReport(True, real, real, real)


# ---------------------------------------------------------------------------
# Implication audit

# (premise, conclusion) pairs that must never see Yes -> No
IMPLICATION_EDGES = (
    (Relation.LIN_EQUIV, Relation.LIP_EQUIV),
    (Relation.LIP_EQUIV, Relation.HOELDER_EQUIV),
    (Relation.HOELDER_EQUIV, Relation.TOP_EQUIV),
    (Relation.LIN_EQUIV, Relation.DIFF_EQUIV),
    (Relation.DIFF_EQUIV, Relation.LIN_EQUIV),
    (Relation.DIFF_EQUIV, Relation.PW_LIP_EQUIV),
    (Relation.LIP_EQUIV, Relation.PW_LIP_EQUIV),
    (Relation.PW_LIP_EQUIV, Relation.TOP_EQUIV),
    (Relation.LIN_CONJ, Relation.LIP_CONJ),
    (Relation.LIP_CONJ, Relation.HOELDER_CONJ),
    (Relation.LIN_CONJ, Relation.DIFF_CONJ),
    (Relation.DIFF_CONJ, Relation.LIN_CONJ),
    (Relation.DIFF_CONJ, Relation.PW_LIP_CONJ),
    (Relation.LIP_CONJ, Relation.PW_LIP_CONJ),
    (Relation.LIN_CONJ, Relation.LIN_EQUIV),
    (Relation.DIFF_CONJ, Relation.DIFF_EQUIV),
    (Relation.LIP_CONJ, Relation.LIP_EQUIV),
    (Relation.HOELDER_CONJ, Relation.HOELDER_EQUIV),
    (Relation.PW_LIP_CONJ, Relation.PW_LIP_EQUIV),
    (Relation.HOELDER_CONJ, Relation.TOP_EQUIV),
)


@dataclass(frozen=True)
class AuditReport:
    verdicts: dict
    violations: tuple

    @property
    def clean(self):
        return not self.violations

    def to_json(self):
        return {
            "verdicts": {
                rel.value: v.decision.value for rel, v in self.verdicts.items()
            },
            "violations": [
                {"premise": p.value, "conclusion": c.value} for (p, c) in self.violations
            ],
            "clean": self.clean,
        }


def implication_audit(a, b):
    """Decide every relation for the pair and check the implication lattice.

    Edges with an Undecided endpoint are skipped; a violation is a premise
    decided Yes whose conclusion is decided No.
    """
    verdicts = {rel: classify(rel, a, b) for rel in Relation}
    violations = []
    for prem, conc in IMPLICATION_EDGES:
        dp = verdicts[prem].decision
        dc = verdicts[conc].decision
        if dp is Decision.YES and dc is Decision.NO:
            violations.append((prem, conc))
    return AuditReport(verdicts, tuple(violations))
