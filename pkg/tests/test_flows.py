"""Closed-form flow evaluation against the matrix exponential."""

import numpy as np
import pytest
from fractions import Fraction

from scipy.linalg import expm

from linflow import (
    FLOW_TIME_GUARD,
    FlowEvaluator,
    GeneratorSpec,
    JordanBlock,
    PreconditionViolated,
    RangeGuard,
    flow_apply,
    materialize,
)

from conftest import expm_flow, random_spec


def S(*blks):
    return GeneratorSpec(tuple(JordanBlock(m, re, im) for m, re, im in blks))


def rel_err(got, want):
    return np.linalg.norm(got - want) / (1 + np.linalg.norm(want))


def test_flow_matches_expm_on_random_specs(rng):
    for _ in range(40):
        spec = random_spec(rng, max_dim=8)
        x = rng.standard_normal(spec.dim)
        t = float(rng.uniform(-20, 20))
        assert rel_err(flow_apply(spec, t, x), expm_flow(spec, t, x)) < 1e-9


def test_flow_matches_expm_on_a_defective_rotation():
    spec = S((4, Fraction(-1, 3), Fraction(7, 2)))
    x = np.arange(1.0, 9.0)
    for t in (-15.0, -1.0, 0.0, 2.5, 18.0):
        assert rel_err(flow_apply(spec, t, x), expm_flow(spec, t, x)) < 1e-9


def test_rotation_block_is_a_scaled_rotation():
    a, b = -0.5, 3.0
    ev = FlowEvaluator([(1, a, b)])
    for t in (-2.0, 0.7):
        got = ev.matrix(t)
        want = np.exp(a * t) * np.array(
            [[np.cos(b * t), -np.sin(b * t)], [np.sin(b * t), np.cos(b * t)]]
        )
        assert np.allclose(got, want, atol=1e-14)


def test_signed_rotation_reverses_orientation():
    fwd = FlowEvaluator([(1, 0.0, 2.0)]).apply(0.4, [1.0, 0.0])
    bwd = FlowEvaluator([(1, 0.0, -2.0)]).apply(0.4, [1.0, 0.0])
    assert np.allclose(fwd, [np.cos(0.8), np.sin(0.8)])
    assert np.allclose(bwd, [np.cos(0.8), -np.sin(0.8)])


def test_apply_batch_agrees_with_apply(rng):
    spec = S((2, -1, 1), (1, 2, 0))
    ev = FlowEvaluator.from_spec(spec)
    ts = rng.uniform(-5, 5, size=16)
    X = rng.standard_normal((16, ev.dim))
    batch = ev.apply_batch(ts, X)
    for i in range(16):
        assert np.array_equal(batch[i], ev.apply(ts[i], X[i]))


def test_group_law():
    ev = FlowEvaluator.from_spec(S((3, Fraction(-1, 2), 1)))
    s, t = 1.3, -2.1
    left = ev.matrix(s + t)
    right = ev.matrix(s) @ ev.matrix(t)
    assert np.allclose(left, right, rtol=1e-12, atol=1e-12)
    assert np.allclose(ev.matrix(0.0), np.eye(ev.dim))


def test_generator_matrix_matches_materialize(rng):
    for _ in range(20):
        spec = random_spec(rng, max_dim=7)
        ev = FlowEvaluator.from_spec(spec)
        assert np.array_equal(ev.generator_matrix(), materialize(spec).to_float())


def test_time_guard():
    spec = S((1, -1, 0))
    with pytest.raises(RangeGuard):
        flow_apply(spec, FLOW_TIME_GUARD * 1.01, [1.0])
    ev = FlowEvaluator.from_spec(spec, guard=10.0)
    with pytest.raises(RangeGuard):
        ev.apply(11.0, [1.0])
    assert ev.apply(9.0, [1.0]) is not None


def test_shape_validation():
    ev = FlowEvaluator.from_spec(S((1, -1, 0), (1, 2, 0)))
    with pytest.raises(PreconditionViolated):
        ev.apply(1.0, [1.0])
    with pytest.raises(PreconditionViolated):
        ev.apply_batch(np.zeros(3), np.zeros((2, 2)))
    with pytest.raises(PreconditionViolated):
        FlowEvaluator([(0, 1.0, 0.0)])


def test_expm_free_layout_cross_check():
    # the flow of the materialized matrix and the closed form agree on the
    # whole matrix, so the block layout conventions match
    spec = S((2, Fraction(1, 2), Fraction(3, 2)), (2, -1, 0))
    ev = FlowEvaluator.from_spec(spec)
    t = 0.9
    assert np.allclose(
        ev.matrix(t), expm(t * materialize(spec).to_float()), rtol=1e-12, atol=1e-12
    )
