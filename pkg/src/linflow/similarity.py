"""Similarity predicates on generators and the finite scaling search.

Similarity of block-diagonal generators is multiset equality, so all four
predicates reduce to comparisons of (transformed) block multisets.  The
existential "does some nonzero rescaling of B relate to A" questions are
resolved by a finite candidate list: any usable alpha must match either a
ratio of nonzero growth rates (the spectra must align) or a ratio of
nonzero rotation rates (the central parts must align); when neither side
has such data, scaling acts trivially and alpha = 1 stands in for all.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .blocks import GeneratorSpec, scale_spec, serialize_spec
from .errors import DimMismatch
from .invariants import (
    lyapunov_spectrum,
    rotation_decouple,
    semisimple_collapse,
    subspec,
)

__all__ = [
    "ScalingCertificate",
    "similar",
    "lyapunov_similar",
    "lipschitz_similar",
    "lipschitz_similar_by_parts",
    "kinematic_similar",
    "scaling_candidates",
    "find_scaling",
]


def similar(a, b):
    """Linear similarity: equal block multisets."""
    return a.blocks == b.blocks


def lyapunov_similar(a, b):
    """Equal Lyapunov spectra (equal dims included, since lengths match)."""
    return lyapunov_spectrum(a) == lyapunov_spectrum(b)


def lipschitz_similar(a, b):
    """Similarity after forgetting rotation rates on size-1 blocks."""
    return similar(semisimple_collapse(a), semisimple_collapse(b))


def lipschitz_similar_by_parts(a, b):
    """Equivalent formulation: same spectrum and same defective part.

    Kept as an independent route; the classifier cross-checks it against
    lipschitz_similar on every decision.
    """
    return lyapunov_similar(a, b) and similar(
        subspec(a, "defective"), subspec(b, "defective")
    )


def kinematic_similar(a, b):
    """Similarity after forgetting rotation rates on every block."""
    return similar(rotation_decouple(a), rotation_decouple(b))


def scaling_candidates(a, b):
    """Finite list of alphas that could make a relate to alpha * b.

    Ordered by ascending |alpha| with positive before negative, and
    deduplicated.  See the module docstring for the completeness argument;
    it is additionally fuzzed in the test suite.
    """
    if a.dim != b.dim:
        raise DimMismatch(f"dims differ: {a.dim} vs {b.dim}")
    res_a = {blk.re for blk in a.blocks if blk.re != 0}
    res_b = {blk.re for blk in b.blocks if blk.re != 0}
    ims_a = {blk.im for blk in a.blocks if blk.im != 0}
    ims_b = {blk.im for blk in b.blocks if blk.im != 0}
    if res_a and res_b:
        ratios = {r / s for r in res_a for s in res_b}
    elif ims_a and ims_b:
        ratios = {p / q for p in ims_a for q in ims_b}
    else:
        ratios = {Fraction(1)}
    cands = {x for r in ratios for x in (abs(r), -abs(r))}
    return tuple(sorted(cands, key=lambda f: (abs(f), f < 0)))


@dataclass(frozen=True)
class ScalingCertificate:
    """A verified alpha: predicate(a, scale_spec(b, alpha)) held."""

    alpha: Fraction
    predicate: str
    witness: dict

    def to_json(self):
        num, den = self.alpha.numerator, self.alpha.denominator
        return {
            "alpha": num if den == 1 else f"{num}/{den}",
            "predicate": self.predicate,
            "witness": self.witness,
        }


def find_scaling(a, b, predicate, name="predicate"):
    """First scaling candidate (by the documented order) passing predicate.

    predicate is called as predicate(a, scaled_b).  Returns None when no
    candidate passes; by the completeness argument this means no nonzero
    alpha passes at all, for every predicate the classifier uses.
    """
    for alpha in scaling_candidates(a, b):
        scaled = scale_spec(b, alpha)
        if predicate(a, scaled):
            return ScalingCertificate(
                alpha=alpha,
                predicate=name,
                witness={
                    "scaled_right_generator": serialize_spec(scaled),
                    "left_generator": serialize_spec(a),
                },
            )
    return None
