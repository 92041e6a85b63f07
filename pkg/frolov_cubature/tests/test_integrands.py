from math import e

import numpy as np
import pytest

from frolov_cubature.harness import TestFunction, get_test_function, registry, spline_family
from frolov_cubature.harness.integrands import REGISTRY, composite_gauss_integral, kink, kink_bump


@pytest.mark.parametrize("d", [1, 2, 3])
def test_registry_integrals(d):
    functions = registry(d)
    assert [f.name for f in functions] == list(REGISTRY)
    for f in functions:
        assert f.dim == d
        x = np.random.default_rng(d).uniform(size=(50, d))
        assert f(x).shape == (50,)
        assert np.all(np.isfinite(f(x)))


def test_registry_examples():
    assert get_test_function("periodic_cos", 2).exact_integral == 1.0
    assert get_test_function("exp", 1).exact_integral == pytest.approx(1.7182818, abs=1e-7)
    assert get_test_function("kink", 1).exact_integral == 0.125
    assert get_test_function("poly", 3).exact_integral == 1.0

    with pytest.raises(ValueError):
        get_test_function("gaussian", 1)
    with pytest.raises(ValueError):
        registry(0)


def test_kink_variants():
    f = kink(2, strike=0.3)
    assert f.exact_integral == pytest.approx(0.245)
    assert f.verify_integral() == pytest.approx(0.245, abs=1e-10)
    assert f(np.array([[0.2, 0.9]]))[0] == 0.0

    g = kink_bump(1)
    # vanishes on the cube boundary and keeps the kink
    np.testing.assert_allclose(g(np.array([[0.0], [1.0], [0.5]])), 0.0, atol=1e-15)
    assert g.verify_integral() == pytest.approx(g.exact_integral, abs=1e-8)


def test_bump_is_compactly_supported():
    f = get_test_function("bspline_bump", 2)
    lo, hi = f.support
    np.testing.assert_allclose(lo, 0.2)
    np.testing.assert_allclose(hi, 0.8)
    outside = np.array([[0.1, 0.5], [0.5, 0.9], [0.0, 0.0]])
    np.testing.assert_equal(f(outside), 0.0)
    assert f(np.array([[0.5, 0.5]]))[0] > 0


def test_failed_registration_raises():
    wrong = TestFunction(name="wrong", dim=1, fn=lambda x: np.exp(x[:, 0]), exact_integral=e)
    with pytest.raises(ValueError):
        wrong.verify_integral(total_points=10_000)


def test_composite_gauss_integral():
    assert composite_gauss_integral(lambda x: x[:, 0] ** 9, 1, total_points=100) == pytest.approx(0.1, abs=1e-14)
    value = composite_gauss_integral(lambda x: np.abs(x[:, 0] - 0.37) * x[:, 1], 2, (0.37,), total_points=10_000)
    assert value == pytest.approx((0.37**2 + 0.63**2) / 4, abs=1e-14)


def test_shifted_periodic_function():
    f = get_test_function("periodic_cos", 2)
    shifted = f.shifted([0.25, 0.5])
    x = np.array([[0.1, 0.2]])
    assert shifted(x)[0] == pytest.approx(f(x + np.array([0.25, 0.5]))[0])
    assert shifted.exact_integral == f.exact_integral

    with pytest.raises(ValueError):
        get_test_function("exp", 2).shifted([0.1, 0.1])
    with pytest.raises(ValueError):
        f(np.array([[0.1, 0.2, 0.3]]))


def test_sup_norm_bound():
    assert get_test_function("poly", 1).sup_norm_bound() == pytest.approx(3.0)
    assert get_test_function("periodic_cos", 2).sup_norm_bound() == pytest.approx(2.25)


def test_spline_family():
    family = spline_family(1, 10)
    assert len(family) == 10
    assert family[0](np.array([[0.0]]))[0] > 0
    for f in family:
        assert f.verify_integral(total_points=100_000) == pytest.approx(f.exact_integral, abs=1e-10)

    family_2d = spline_family(2, 3)
    f = family_2d[1]
    x = np.array([[0.5, 0.5]])
    assert f(x)[0] == pytest.approx(spline_family(1, 3)[1](np.array([[0.5]]))[0] ** 2)
    assert f.exact_integral == pytest.approx(spline_family(1, 3)[1].exact_integral ** 2)

    with pytest.raises(ValueError):
        spline_family(1, 0)
