import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wanderlab.errors import DomainError, QuadratureError
from wanderlab.numerics import (DEFAULT_LADDER, BeltramiField, ComplexGridField, PolarAnnulus,
                                contour_integral, polar_quadrature, richardson_verdict, square_window,
                                wirtinger_fd)


@given(st.floats(0, 2), st.floats(0.01, 2), st.sampled_from(DEFAULT_LADDER),
       st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False))
@settings(max_examples=30, deadline=None)
def test_constant_integrates_to_area(r_in, width, rung, c):
    ann = PolarAnnulus(r_in, r_in + width, *rung)
    got = polar_quadrature(lambda z: np.full(z.shape, c), ann)
    assert abs(got - c * ann.area) <= 1e-12 * max(1.0, abs(c) * ann.area)


def test_quadrature_of_rotating_modes_vanishes():
    ann = PolarAnnulus(0.5, 1.5, 64, 128)
    for k in (1, 2, 5):
        assert abs(polar_quadrature(lambda z: z ** k, ann)) < 1e-12


def test_quadrature_of_radial_function():
    ann = PolarAnnulus(1.0, 2.0, 512, 64)
    # iint |z|^2 = 2 pi (2^4 - 1) / 4
    got = polar_quadrature(lambda z: np.abs(z) ** 2, ann)
    assert abs(got - 2 * math.pi * 15 / 4) < 1e-4


def test_quadrature_reports_bad_node():
    ann = PolarAnnulus(0.0, 1.0, 4, 8)
    with pytest.raises(QuadratureError, match="radial 0"):
        polar_quadrature(lambda z: np.where(np.abs(z) < 0.2, np.nan, 1.0), ann)


@pytest.mark.parametrize("bad", [(1.0, 0.5), (-0.1, 1.0), (0.5, 0.5)])
def test_annulus_validation(bad):
    with pytest.raises(DomainError):
        PolarAnnulus(*bad)


@pytest.mark.parametrize("k", [0, 1, 2, 3, -2, -3, 7])
@pytest.mark.parametrize("radius", [0.5, 1.0, 2.0])
def test_contour_monomials(k, radius):
    n = abs(k) + 4
    got = contour_integral(lambda z: z ** k, radius, 1, n)
    assert abs(got) < 1e-10


@pytest.mark.parametrize("radius", [0.3, 1.0, 5.0])
def test_contour_one_over_z(radius):
    assert abs(contour_integral(lambda z: 1 / z, radius) - 2j * math.pi) < 1e-12
    assert abs(contour_integral(lambda z: 1 / z, radius, -1) + 2j * math.pi) < 1e-12


def test_contour_rejects_nonfinite():
    with pytest.raises(QuadratureError), np.errstate(divide="ignore", invalid="ignore"):
        contour_integral(lambda z: 1 / (z - 1), 1.0, 1, 4)


def test_contour_orientation_checked():
    with pytest.raises(DomainError):
        contour_integral(lambda z: z, 1.0, 0)


def test_wirtinger_on_polynomials():
    d, dbar = wirtinger_fd(lambda z: 3 * z ** 3 - z + 2j, 0.3 + 0.4j, 1e-4)
    assert abs(dbar) < 1e-9
    assert abs(d - (9 * (0.3 + 0.4j) ** 2 - 1)) < 1e-7


def test_wirtinger_on_conjugate():
    d, dbar = wirtinger_fd(lambda z: z * np.conj(z), 0.5 - 0.2j)
    assert abs(d - (0.5 + 0.2j)) < 1e-9
    assert abs(dbar - (0.5 - 0.2j)) < 1e-9


def test_richardson_examples():
    v = (1.01, 1.001, 1.0001)
    assert richardson_verdict(v, 1, 1e-2).status == "converged-match"
    r = richardson_verdict(v, 2, 1e-2)
    assert r.status == "converged-mismatch" and abs(r.gap - 1) < 1e-3
    assert richardson_verdict((1, 2, 4), 0, 1e-2).status == "not-converged"
    with pytest.raises(DomainError):
        richardson_verdict((1, 2), 1, 1)


def test_richardson_extrapolates_geometric_ladder():
    v = [1 + 0.5 ** k for k in (10, 11, 12)]
    r = richardson_verdict(v, 1, 1e-3)
    assert abs(r.limit - 1) < 1e-12


def test_grid_field_validation():
    w = square_window(1.0)
    with pytest.raises(DomainError):
        ComplexGridField(w, np.zeros((6, 8)))
    with pytest.raises(DomainError):
        ComplexGridField(w, np.full((8, 8), np.nan))
    with pytest.raises(DomainError):
        ComplexGridField((0, 0, 0, 1), np.zeros((8, 8)))
    with pytest.raises(DomainError, match="outside"):
        ComplexGridField(w, np.ones((8, 8)), support=((0.0, 0.2),))


def test_beltrami_field_masks_to_support():
    f = BeltramiField(lambda z: np.ones(z.shape), ((0.5, 1.0),))
    z = np.array([0.2, 0.7, 0.7j, 1.5])
    assert np.array_equal(f(z), [0, 1, 1, 0])
    assert f.outer_radius == 1.0
    assert f.sup_norm() == 1.0


def test_to_grid_antialiases_edges():
    f = BeltramiField(lambda z: np.ones(z.shape), ((0.0, 1.0),))
    g = f.to_grid(square_window(2.0), 128)
    assert g.values.shape == (128, 128)
    frac = np.unique(np.round(g.values.real, 6))
    assert frac.size > 2           # partial cells on the circle
    # area of the disk recovered from cell averages
    assert abs(g.values.real.sum() * g.dx * g.dy - math.pi) < 5e-3
