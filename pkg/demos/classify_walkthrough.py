# classify_walkthrough.py - deciding equivalence grades between linear flows
#
# Walks a handful of generator pairs through the classifier and prints the
# verdict for each relation grade, together with the scaling certificate and
# the decision trace.  Everything here is exact rational arithmetic; the
# verdicts are certificates, not numerics.

from fractions import Fraction

from linflow import (
    Decision,
    GeneratorSpec,
    JordanBlock,
    Relation,
    classify,
    implication_audit,
)


def S(*blocks):
    return GeneratorSpec(tuple(JordanBlock(m, re, im) for m, re, im in blocks))


def show(relation, a, b):
    v = classify(relation, a, b)
    alpha = "" if v.scaling is None else f"  [alpha = {v.scaling.alpha}]"
    print(f"  {relation.value:<14} {v.decision.value}{alpha}")
    return v


#
# Pair 1: a one-cell shear against the scalar contraction.
#
# Both contract at rate 1, but the shear mixes a polynomial factor into the
# decay.  That polynomial is invisible to Hoelder-grade changes of variables
# and fatal to Lipschitz-grade ones.

shear = S((2, -1, 0))
scalar = S((1, -1, 0), (1, -1, 0))
print("shear (one 2-cell at rate -1)  vs  scalar contraction")
show(Relation.HOELDER_EQUIV, shear, scalar)
show(Relation.LIP_EQUIV, shear, scalar)
show(Relation.DIFF_EQUIV, shear, scalar)
print()

#
# Pair 2: the identity flow against the expanding shear.
#
# Pointwise-Lipschitz equivalence holds (both are expansions of the plane),
# yet no uniform Lipschitz equivalence and no pointwise conjugacy exists at
# any time rescaling.

ident = S((1, 1, 0), (1, 1, 0))
expshear = S((2, 1, 0))
print("identity flow  vs  expanding shear")
show(Relation.PW_LIP_EQUIV, ident, expshear)
show(Relation.LIP_EQUIV, ident, expshear)
show(Relation.PW_LIP_CONJ, ident, expshear)
print()

#
# Pair 3: rotation pins the time scale.
#
# Two flows that each pair a contraction with the same rational rotation are
# pointwise-Lipschitz conjugate only when the contraction rates agree exactly:
# conjugacy cannot rescale time without detuning the rotation.

rot = (1, 0, Fraction(355, 113))
target = S((1, -1, 0), rot)
for a in (Fraction(1), Fraction(2), Fraction(1, 2)):
    print(f"contraction rate {a} with rotation  vs  rate 1 with the same rotation")
    show(Relation.PW_LIP_CONJ, S((1, -a, 0), rot), target)
print()

#
# Pair 4: a pair with a genuinely undecided verdict.
#
# For three dimensions and up with a central part, no complete topological
# criterion is known.  The classifier reports Undecided rather than guessing;
# the trace says which scope condition was left.

a3 = S((1, 0, 1), (1, -1, 0), (1, 1, 0))
b3 = S((1, 0, 2), (1, -1, 0), (1, 1, 0))
print("center + saddle  vs  faster center + saddle")
v = show(Relation.TOP_EQUIV, a3, b3)
for entry in v.trace:
    print(f"    trace: {entry.step}: {entry.outcome} ({entry.detail})")
print()

#
# Full audit: decide all eleven relations at once and cross-check that the
# verdict table respects every implication between grades.

print("full audit of pair 1:")
report = implication_audit(shear, scalar)
for rel, verdict in sorted(report.verdicts.items(), key=lambda kv: kv[0].value):
    print(f"  {rel.value:<14} {verdict.decision.value}")
print(f"  lattice clean: {report.clean}")
