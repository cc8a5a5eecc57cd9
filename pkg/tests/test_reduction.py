import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hodgespec.errors import ConstructionError, DomainError
from hodgespec.metric import eval_profile, hyperbolic_profile, perturbed_profile
from hodgespec.reduction import (
    AS_PRINTED,
    DUAL_CONSISTENT,
    Channel,
    build_radial_operator,
    coupling_v3,
    l2_weight,
    potential_w1,
    potential_w2,
    transform_h_to_w,
    transform_w_to_h,
)

from helpers import flat_profile

HP = hyperbolic_profile()
ASINH1 = math.log(1 + math.sqrt(2))  # sinh t = 1


@pytest.mark.parametrize("t", [0.5, 1.0, 5.0])
def test_w1_collapses_to_one(t):
    assert potential_w1(HP, 3, 0, 0.0, t) == pytest.approx(1.0, abs=1e-13)


def test_w1_limits_at_thirty():
    for N in range(2, 7):
        for p in range(N):
            assert abs(potential_w1(HP, N, p, 0.0, 30.0) - ((N - 2 * p - 1) / 2) ** 2) <= 1e-10


def test_lambda_adds_over_g():
    diff = potential_w1(HP, 4, 1, 2.0, ASINH1) - potential_w1(HP, 4, 1, 0.0, ASINH1)
    assert diff == pytest.approx(2.0, abs=1e-13)


def test_w2_limits():
    assert abs(potential_w2(HP, 3, 1, 0.0, 30.0) - 1.0) <= 1e-10
    assert abs(potential_w2(HP, 4, 2, 0.0, 30.0) - 0.25) <= 1e-10


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 7), st.data(), st.floats(0.05, 25.0), st.floats(0.0, 30.0))
def test_w2_is_w1_at_dual_degree_when_f_is_one(N, data, t, lam):
    p = data.draw(st.integers(1, N))
    a = potential_w2(HP, N, p, lam, t)
    b = potential_w1(HP, N, N - p, lam, t)
    assert a == pytest.approx(b, rel=1e-12, abs=1e-12)


def test_w2_variants_differ_only_when_f_varies():
    t = np.linspace(0.5, 10, 7)
    assert np.array_equal(potential_w2(HP, 5, 2, 3.0, t, AS_PRINTED), potential_w2(HP, 5, 2, 3.0, t, DUAL_CONSISTENT))
    pp = perturbed_profile(1.0, 0.0)
    assert not np.allclose(potential_w2(pp, 5, 2, 3.0, t, AS_PRINTED), potential_w2(pp, 5, 2, 3.0, t, DUAL_CONSISTENT))


def test_dual_consistent_variant_restores_duality_for_varying_f():
    pp = perturbed_profile(1.0, 0.5)
    t = np.linspace(0.5, 10, 11)
    for N, p in [(4, 1), (5, 2), (6, 2)]:
        a = potential_w2(pp, N, p, 2.0, t, DUAL_CONSISTENT)
        b = potential_w1(pp, N, N - p, 2.0, t)
        assert np.allclose(a, b, rtol=1e-12, atol=1e-12)


def test_coupling_at_unit_sinh():
    assert coupling_v3(HP, 1.0, ASINH1) == pytest.approx(2 * math.sqrt(2), abs=1e-12)


def test_coupling_vanishes_at_infinity():
    assert coupling_v3(HP, 1.0, 30.0) < 1e-11


def test_coupling_scales_with_root_lambda():
    t = np.linspace(0.3, 12, 9)
    assert np.allclose(coupling_v3(HP, 12.0, t), 2 * coupling_v3(HP, 3.0, t), rtol=1e-14)


def test_channel_one_operator_is_shifted_laplacian():
    op = build_radial_operator(HP, Channel("I", 3, 0, 0.0))
    t = np.linspace(0.2, 20, 50)
    assert np.all(op.a(t) == 1.0)
    assert np.allclose(op.q1(t), 1.0, atol=1e-12)


def test_channel_three_limits():
    op = build_radial_operator(HP, Channel("III", 5, 2, 4.0))
    assert abs(op.q1(30.0)) <= 1e-9
    assert abs(op.q2(30.0) - 1.0) <= 1e-9
    assert abs(op.coupling(30.0)) <= 1e-9


def test_perturbed_channel_one_tends_to_one():
    op = build_radial_operator(perturbed_profile(1.0, 1.0), Channel("I", 3, 0, 0.0))
    assert abs(op.q1(50.0) - 1.0) <= 1e-1


def test_potential_matrix_min_is_smallest_eigenvalue():
    op = build_radial_operator(HP, Channel("III", 5, 2, 4.0))
    for t in (0.7, 2.0, 9.0):
        M = np.array([[op.q1(t), op.coupling(t)], [op.coupling(t), op.q2(t)]])
        assert op.potential_matrix_min(t) == pytest.approx(np.linalg.eigvalsh(M)[0], abs=1e-12)


def test_transform_flat_space():
    # exponent (N-2p-1)/4 = 1/2 on g = t^2 gives w = t; consistent with the weight t^2
    w = transform_h_to_w(flat_profile(), 3, 0, "I", 4.0, 1.0)
    assert w == pytest.approx(4.0, rel=1e-15)
    assert w**2 == pytest.approx(l2_weight(flat_profile(), 3, 0, "I", 4.0), rel=1e-15)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.1, 20.0), st.floats(-5, 5), st.sampled_from([("I", 1), ("II", 1), ("III", 1), ("III", 2)]))
def test_transform_round_trip(t, h, tagc):
    tag, comp = tagc
    N, p = 5, 2
    prof = perturbed_profile(0.5, 0.25)
    w = transform_h_to_w(prof, N, p, tag, t, h, comp)
    assert transform_w_to_h(prof, N, p, tag, t, w, comp) == pytest.approx(h, rel=1e-14, abs=1e-14)


def test_channel_two_middle_degree_exponent():
    t = 1.7
    g = eval_profile(HP, t)[3]
    assert transform_h_to_w(HP, 4, 2, "II", t, 1.0) == pytest.approx(g**0.25, rel=1e-15)


def test_l2_weights():
    assert l2_weight(HP, 3, 0, "I", 1.0) == pytest.approx(math.sinh(1.0) ** 2, rel=1e-14)
    t = 0.3
    assert l2_weight(flat_profile(), 3, 0, "I", t) == pytest.approx(t * t, rel=1e-14)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.1, 15.0), st.sampled_from(["I", "II"]))
def test_weight_equals_squared_transform_factor(t, tag):
    # |h|^2 weight = |w|^2 when w = h * factor, so weight = factor^2
    prof = perturbed_profile(0.7, 0.2)
    N, p = 5, 2
    factor = transform_h_to_w(prof, N, p, tag, t, 1.0)
    assert l2_weight(prof, N, p, tag, t) == pytest.approx(factor**2, rel=1e-13)


def test_channel_validation():
    with pytest.raises(ConstructionError):
        Channel("III", 4, 2, 0.0)
    with pytest.raises(ConstructionError):
        Channel("I", 4, 4, 1.0)
    with pytest.raises(ConstructionError):
        Channel("IV", 4, 1, 1.0)
    with pytest.raises(DomainError):
        potential_w2(HP, 4, 2, 1.0, 1.0, "other")
