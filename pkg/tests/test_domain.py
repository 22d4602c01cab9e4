"""Eigenbasis, quadrature, and transform checks for the box sine basis."""

import numpy as np
import pytest

from sinesolve import (
    BoxDomain,
    QuadratureGrid,
    ScalarField,
    SineBasis,
    eigenvalue,
    h1_inner,
    integrate,
    synthesize,
    unit_mode,
)
from sinesolve.domain import mode_mass_matrix
from sinesolve.errors import BasisMismatchError


@pytest.fixture(scope="module")
def basis_1d():
    return SineBasis(BoxDomain((1.0,)), (16,))


@pytest.fixture(scope="module")
def grid_1d(basis_1d):
    return QuadratureGrid.for_basis(basis_1d)


def test_eigenvalue_analytic_1d(basis_1d):
    assert eigenvalue(basis_1d, 0) == pytest.approx(np.pi**2, rel=1e-14)


def test_eigenvalue_analytic_2d():
    b = SineBasis(BoxDomain((1.0, 1.0)), (4, 4))
    # lowest mode of the unit square
    assert b.modes[0].tolist() == [1, 1]
    assert eigenvalue(b, 0) == pytest.approx(2 * np.pi**2, rel=1e-14)


def test_eigenvalue_anisotropic_box():
    b = SineBasis(BoxDomain((1.0, 2.0)), (4, 4))
    assert eigenvalue(b, 0) == pytest.approx(np.pi**2 * (1.0 + 0.25), rel=1e-14)


def test_eigenvalue_range_check(basis_1d):
    with pytest.raises(IndexError):
        eigenvalue(basis_1d, basis_1d.size)


def test_mode_ordering_nondecreasing():
    b = SineBasis(BoxDomain((1.0, 2.0, 0.7)), (3, 4, 2))
    assert np.all(np.diff(b.eigenvalues) >= -1e-14)


def test_mode_ordering_ties_lexicographic():
    b = SineBasis(BoxDomain((1.0, 1.0)), (3, 3))
    # (1,2) and (2,1) tie; lexicographic order puts (1,2) first
    gamma = b.eigenvalues
    tied = np.flatnonzero(np.abs(gamma - 5 * np.pi**2) < 1e-9)
    assert [b.modes[t].tolist() for t in tied] == [[1, 2], [2, 1]]


def test_synthesize_zero(basis_1d, grid_1d):
    f = ScalarField(basis_1d, np.zeros(basis_1d.size))
    assert np.all(synthesize(f, grid_1d) == 0.0)


def test_synthesize_single_mode(basis_1d, grid_1d):
    vals = synthesize(unit_mode(basis_1d, 2), grid_1d)
    x = grid_1d.axis_nodes[0]
    k = basis_1d.modes[2][0]
    np.testing.assert_allclose(vals, np.sqrt(2) * np.sin(k * np.pi * x), atol=1e-14)


def test_synthesize_linearity(basis_1d, grid_1d):
    f = unit_mode(basis_1d, 0)
    g = unit_mode(basis_1d, 1)
    both = synthesize(f + g, grid_1d)
    np.testing.assert_allclose(both, synthesize(f, grid_1d) + synthesize(g, grid_1d), atol=1e-14)


def test_synthesize_domain_mismatch(basis_1d):
    other = QuadratureGrid.for_domain(BoxDomain((2.0,)), 32)
    with pytest.raises(BasisMismatchError):
        synthesize(unit_mode(basis_1d, 0), other)


def test_integrate_constant_unit_square():
    dom = BoxDomain((1.0, 1.0))
    grid = QuadratureGrid.for_domain(dom, 24)
    assert integrate(np.ones(grid.shape), grid) == pytest.approx(1.0, abs=1e-12)


def test_integrate_mode_square(basis_1d, grid_1d):
    vals = synthesize(unit_mode(basis_1d, 0), grid_1d)
    assert integrate(vals**2, grid_1d) == pytest.approx(1.0, abs=1e-10)


def test_integrate_mode_quartic(basis_1d, grid_1d):
    # oracle: high-resolution trapezoid of (sqrt(2) sin(pi x))^4
    x = np.linspace(0.0, 1.0, 200001)
    oracle = np.trapezoid((np.sqrt(2.0) * np.sin(np.pi * x)) ** 4, x)
    assert oracle == pytest.approx(1.5, abs=1e-9)
    vals = synthesize(unit_mode(basis_1d, 0), grid_1d)
    assert integrate(vals**4, grid_1d) == pytest.approx(1.5, abs=1e-10)


def test_integrate_shape_mismatch(grid_1d):
    with pytest.raises(ValueError):
        integrate(np.ones(3), grid_1d)


def test_h1_inner_first_mode(basis_1d):
    e1 = unit_mode(basis_1d, 0)
    assert h1_inner(e1, e1) == pytest.approx(np.pi**2, rel=1e-14)


def test_h1_inner_orthogonal(basis_1d):
    assert h1_inner(unit_mode(basis_1d, 0), unit_mode(basis_1d, 3)) == 0.0


def test_h1_inner_two_modes(basis_1d):
    c = np.zeros(basis_1d.size)
    c[:2] = 1.0
    f = ScalarField(basis_1d, c)
    assert h1_inner(f, f) == pytest.approx(np.pi**2 + 4 * np.pi**2, rel=1e-14)


def test_h1_inner_basis_mismatch(basis_1d):
    other = SineBasis(BoxDomain((1.0,)), (8,))
    with pytest.raises(BasisMismatchError):
        h1_inner(unit_mode(basis_1d, 0), unit_mode(other, 0))


def test_gram_identity(basis_1d, grid_1d):
    gram = mode_mass_matrix(np.ones(grid_1d.shape), basis_1d, grid_1d)
    assert np.abs(gram - np.eye(basis_1d.size)).max() < 1e-10


def test_quadrature_weights_positive_and_sum(grid_1d):
    for w, L in zip(grid_1d.axis_weights, grid_1d.lengths):
        assert np.all(w > 0)
        assert np.sum(w) == pytest.approx(L, rel=1e-12)


def test_parseval_property():
    # quadrature of the squared synthesis equals sum of squared coefficients
    rng = np.random.default_rng(3)
    for K in (8, 24, 50):
        basis = SineBasis(BoxDomain((1.0,)), (K,))
        grid = QuadratureGrid.for_domain(basis.domain, 2 * K + 8)
        c = rng.standard_normal(K)
        f = ScalarField(basis, c)
        quad = integrate(synthesize(f, grid) ** 2, grid)
        assert quad == pytest.approx(np.sum(c**2), rel=1e-8)


def test_poincare_in_coefficients():
    rng = np.random.default_rng(4)
    basis = SineBasis(BoxDomain((1.3,)), (12,))
    for _ in range(20):
        c = rng.standard_normal(basis.size)
        f = ScalarField(basis, c)
        assert h1_inner(f, f) >= basis.eigenvalues[0] * np.sum(c**2) - 1e-12


def test_eigenvalue_order_invariant():
    b = SineBasis(BoxDomain((1.0, 0.6)), (5, 7))
    for i in range(b.size - 1):
        assert eigenvalue(b, i) <= eigenvalue(b, i + 1) + 1e-14


def test_fields_immutable(basis_1d):
    f = unit_mode(basis_1d, 0)
    with pytest.raises(ValueError):
        f.coeffs[0] = 2.0
