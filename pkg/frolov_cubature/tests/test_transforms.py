import json
import warnings

import numpy as np
import pytest

from frolov_cubature.harness.integrands import exponential, periodic_cosine
from frolov_cubature.kernels import CInfKernel, KernelPsiK
from frolov_cubature.rules import CubatureRule, build_frolov_generator, frolov_rule, tensor_gauss_rule
from frolov_cubature.transforms import (
    PeriodizerKernel,
    apply_multiplier,
    build_periodizer,
    change_of_variable_point,
    partition_check,
    periodize_rule,
    transform_rule,
)
from frolov_cubature.utils import enlarged_box


def _ones(x):
    return np.ones(len(x))


def test_change_of_variable_point():
    kernel = KernelPsiK(3)
    mapped, factor = change_of_variable_point(kernel, [0.5, 0.5, 0.5])
    np.testing.assert_allclose(mapped, 0.5)
    assert factor == pytest.approx(kernel.density(0.5) ** 3)

    _, factor = change_of_variable_point(kernel, [0.0, 0.4])
    assert factor == 0.0
    _, factor = change_of_variable_point(kernel, [1.3, 0.4])
    assert factor == 0.0

    mapped, factor = change_of_variable_point(KernelPsiK(1), [0.25])
    assert mapped[0] == pytest.approx(0.15625, abs=1e-15)
    assert factor == pytest.approx(1.125, abs=1e-15)


@pytest.mark.parametrize("k", range(1, 7))
@pytest.mark.parametrize("d", [1, 2, 3])
def test_transformed_gauss_integrates_constants(k, d):
    rule = transform_rule(tensor_gauss_rule(d, k + 1), KernelPsiK(k))
    assert rule(_ones) == pytest.approx(1.0, abs=1e-13)
    assert rule.kind == "change_of_variable"
    assert rule.n == (k + 1) ** d


def test_boundary_nodes_are_dropped():
    base = CubatureRule(nodes=[(0, 0), (1, 0), (0, 1), (1, 1), (0.5, 1.2)], weights=np.full(5, 0.2))
    rule = transform_rule(base, KernelPsiK(2))
    assert rule.n == 0
    assert rule.dropped_nodes == 5
    assert rule(_ones) == 0.0


def test_substitution_identity():
    rng = np.random.default_rng(7)
    kernel = KernelPsiK(4)
    base = frolov_rule(build_frolov_generator(2), 15.0, [(0, 1), (0, 1)])
    rule = transform_rule(base, kernel)
    assert rule.n + rule.dropped_nodes == base.n

    for _ in range(20):
        freq = rng.uniform(-4, 4, size=2)
        phase = rng.uniform(0, 2 * np.pi)

        def f(x):
            return np.cos(x @ freq + phase) * np.exp(x[:, 0])

        def g(x):
            return np.prod(kernel.density(x), axis=-1) * f(kernel.value(x))

        assert abs(rule(f) - base(g)) <= 1e-13 * base.abs_weight_sum


def test_change_of_variable_matches_integral():
    f = exponential(2)
    rule = transform_rule(tensor_gauss_rule(2, 16), KernelPsiK(2))
    assert rule(f) == pytest.approx(f.exact_integral, abs=1e-8)


def test_cinf_kernel_as_change_of_variable():
    rule = transform_rule(tensor_gauss_rule(1, 64), CInfKernel())
    assert rule(_ones) == pytest.approx(1.0, abs=1e-3)
    assert rule.provenance()["kernel"]["type"] == "cinf"


def test_periodizer_values():
    delta = 0.25
    for k in (1, 2, 5):
        kernel = build_periodizer(k, delta, 1)
        assert kernel.univariate(0.5) == 1.0
        assert kernel.univariate(-delta - 1e-9) == 0.0
        assert kernel.univariate(1 + delta + 1e-9) == 0.0

    kernel = build_periodizer(2, delta, 1)
    t = -delta / 2
    assert kernel.univariate(t) + kernel.univariate(t + 1) == pytest.approx(1.0, abs=1e-14)

    with pytest.raises(ValueError):
        build_periodizer(2, 0.0, 1)
    with pytest.raises(ValueError):
        build_periodizer(2, 0.5, 1)
    with pytest.raises(ValueError):
        build_periodizer(0, 0.25, 1)


@pytest.mark.parametrize("k", [2, 3, 5])
@pytest.mark.parametrize("delta", [0.1, 0.25])
def test_partition_of_unity(k, delta):
    assert partition_check(build_periodizer(k, delta, 1), 10_000) <= 1e-12
    assert partition_check(build_periodizer(k, delta, 2), 100) <= 1e-12

    with pytest.raises(ValueError):
        partition_check(build_periodizer(k, delta, 1), 1)


@pytest.mark.parametrize("k", [1, 2, 4])
def test_periodizer_derivatives_vanish_at_knots(k):
    delta = 0.2
    kernel = build_periodizer(k, delta, 1)
    knots = np.array([-delta, delta, 1 - delta, 1 + delta])

    np.testing.assert_allclose(kernel.univariate(knots), [0, 1, 1, 0], atol=1e-15)
    for r in range(1, k + 1):
        np.testing.assert_allclose(kernel.univariate(knots, r), 0.0, atol=1e-9)

    # one-sided derivatives agree across each knot up to the grid scale
    h = 1e-6
    for r in range(0, k):
        jumps = kernel.univariate(knots + h, r) - kernel.univariate(knots - h, r)
        assert np.abs(jumps).max() < 1e-4


def test_periodize_rule_example():
    kernel = build_periodizer(3, 0.25, 2)
    base = CubatureRule(nodes=[(1.2, 0.3)], weights=[0.5])
    rule = periodize_rule(base, kernel)

    np.testing.assert_allclose(rule.nodes, [(0.2, 0.3)], atol=1e-15)
    expected = 0.5 * kernel.univariate(1.2) * kernel.univariate(0.3)
    assert rule.weights[0] == pytest.approx(expected)
    assert kernel.univariate(0.3) == 1.0


def test_periodize_rule_counts_nodes_outside_support():
    kernel = build_periodizer(2, 0.25, 1)
    base = CubatureRule(nodes=[(-0.5,), (0.5,), (1.1,)], weights=[1.0, 1.0, 1.0])
    with pytest.warns(UserWarning):
        rule = periodize_rule(base, kernel)
    assert rule.outside_support == 1
    assert rule.dropped_nodes == 1
    assert rule.n == 2
    assert np.all((rule.nodes >= 0) & (rule.nodes < 1))


@pytest.mark.parametrize("a", [8, 16, 33])
def test_periodized_integer_lattice_is_exact_on_constants(a):
    kernel = build_periodizer(3, 0.25, 1)
    base = frolov_rule(build_frolov_generator(1), a, enlarged_box(1, 0.25))
    rule = periodize_rule(base, kernel)
    assert rule(_ones) == pytest.approx(1.0, abs=1e-12)


def test_periodized_rule_equals_base_on_weighted_periodic_functions():
    kernel = build_periodizer(3, 0.25, 2)
    base = frolov_rule(build_frolov_generator(2), 20.0, enlarged_box(2, 0.25))
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        rule = periodize_rule(base, kernel)

    assert np.all((rule.nodes >= 0) & (rule.nodes < 1))
    assert rule(_ones) == pytest.approx(base(kernel.value), abs=1e-14)

    for m in [(1, 0), (2, -1), (0, 3)]:
        m = np.array(m)
        f = lambda x: np.cos(2 * np.pi * x @ m) + np.sin(2 * np.pi * x @ m)
        weighted = lambda x: kernel.value(x) * f(x)
        assert rule(f) == pytest.approx(base(weighted), abs=1e-13)


def test_periodized_rule_is_consistent_under_shifts():
    f = periodic_cosine(2)
    kernel = build_periodizer(2, 0.25, 2)
    rule = periodize_rule(frolov_rule(build_frolov_generator(2), 12.0, enlarged_box(2, 0.25)), kernel)

    for v in [(0.1, 0.7), (0.5, 0.25)]:
        shifted = f.shifted(v)
        direct = rule(lambda x: f(x + np.array(v)))
        assert rule(shifted) == pytest.approx(direct, abs=1e-13)


def test_apply_multiplier():
    kernel = build_periodizer(2, 0.25, 2)
    x = np.array([[0.5, 0.5], [-0.1, 0.4], [1.3, 0.5]])

    np.testing.assert_allclose(apply_multiplier(kernel, _ones, x), kernel.value(x))
    assert apply_multiplier(kernel, _ones, x[2]) == 0.0

    value = apply_multiplier(kernel, lambda y: np.sin(2 * np.pi * y[:, 0]), np.array([0.5, 0.5]))
    assert abs(value) <= 1e-15


def test_transformed_rule_provenance():
    kernel = PeriodizerKernel(k=2, delta=0.25, dim=1)
    base = frolov_rule(build_frolov_generator(1), 10, enlarged_box(1, 0.25))
    rule = periodize_rule(base, kernel)
    provenance = rule.provenance()
    assert provenance["kind"] == "periodized"
    assert provenance["kernel"] == {"type": "periodizer", "k": 2, "delta": 0.25, "dim": 1}
    assert provenance["base_label"] == base.label
    assert provenance["dropped_nodes"] == base.n - rule.n
    assert json.loads(rule.provenance_json()) == provenance
