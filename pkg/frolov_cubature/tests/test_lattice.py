import numpy as np
import pytest

from frolov_cubature.rules.lattice import (
    ADMISSIBILITY_TOLERANCE,
    MAX_DIM,
    LatticeGenerator,
    _product_form,
    admissibility_check,
    build_frolov_generator,
    defining_polynomial,
    is_admissible,
    vandermonde_det,
)


def test_one_dimensional_generator_is_integers():
    gen = build_frolov_generator(1)
    assert defining_polynomial(1) == (-2, 1)
    np.testing.assert_equal(gen.basis, [[1.0]])
    assert gen.det_abs == 1.0
    assert admissibility_check(gen, 7) == 1.0


def test_two_dimensional_generator():
    gen = build_frolov_generator(2)
    assert gen.poly_coeffs == (2, -4, 1)
    np.testing.assert_allclose(sorted(gen.roots), [2 - np.sqrt(2), 2 + np.sqrt(2)], rtol=1e-14)
    assert gen.det_abs == pytest.approx(2 * np.sqrt(2), rel=1e-12)


@pytest.mark.parametrize("d", range(1, MAX_DIM + 1))
def test_root_refinement(d):
    gen = build_frolov_generator(d)
    assert len(gen.roots) == d
    assert np.diff(sorted(gen.roots)).min(initial=np.inf) > 1e-9

    for root in gen.roots:
        value, derivative = _product_form(root, d)
        assert abs(value) <= 1e-12 * max(1.0, abs(derivative))


@pytest.mark.parametrize("d", [1, 2, 3, 4, 5])
def test_determinant_matches_vandermonde(d):
    gen = build_frolov_generator(d)
    assert gen.det_abs == pytest.approx(vandermonde_det(gen.roots), rel=1e-9)


@pytest.mark.parametrize("d,radius", [(2, 50), (3, 20), (3, 50)])
def test_admissibility(d, radius):
    gen = build_frolov_generator(d)
    min_product = admissibility_check(gen, radius)
    print(d, radius, min_product)
    assert min_product >= 1 - ADMISSIBILITY_TOLERANCE
    assert is_admissible(gen, radius)


def test_identity_lattice_is_not_admissible():
    gen = LatticeGenerator(dim=2, basis=np.eye(2), det_abs=1.0)
    assert admissibility_check(gen, 1) == 0.0
    assert not is_admissible(gen, 1)


def test_admissibility_float_path_agrees_with_norms():
    gen = build_frolov_generator(2)
    without_poly = LatticeGenerator(dim=2, basis=gen.basis, det_abs=gen.det_abs)
    # the smallest norm of a nonzero element of Z[sqrt(2)] is 1
    assert admissibility_check(without_poly, 5) == pytest.approx(1.0, abs=1e-9)


def test_invalid_inputs():
    with pytest.raises(ValueError):
        build_frolov_generator(0)
    with pytest.raises(ValueError):
        build_frolov_generator(MAX_DIM + 1)
    with pytest.raises(ValueError):
        admissibility_check(build_frolov_generator(2), 0)
    with pytest.raises(ValueError):
        LatticeGenerator(dim=2, basis=np.eye(3), det_abs=1.0)


def test_generator_json():
    gen = build_frolov_generator(3)
    restored = LatticeGenerator.from_json(gen.to_json())
    np.testing.assert_equal(restored.basis, gen.basis)
    assert restored.poly_coeffs == gen.poly_coeffs
    assert restored.roots == gen.roots
    assert restored.det_abs == gen.det_abs
