import numpy as np
import pytest

from wanderlab.ahlfors_bers import (P_op, SolverConfig, T_op, constant_annulus, disk_derivative,
                                    frechet_check, principal_solution, radial_stretch, solve_theta,
                                    theta_iterates)
from wanderlab.errors import ConvergenceError, DomainError
from wanderlab.numerics import BeltramiField, square_window
from wanderlab.surgery import InterpolationParams, interpolation_field, symmetrize


def disk(r0):
    return constant_annulus(1.0, 0.0, r0)


@pytest.mark.parametrize("r0,s", [(1, 2), (1, -3), (0.5, 1 + 1j), (0.5, 0.3j + 2)])
def test_P_disk_oracle(r0, s):
    assert abs(P_op(disk(r0), s) - r0 ** 2 / s) < 1e-6


def test_P_inside_support():
    # P chi_disk(s) = conj(s) inside the unit disk
    for s in (0.5, 0.3 + 0.4j, -0.9j):
        assert abs(P_op(disk(1.0), s) - np.conj(s)) < 1e-6


def test_P_at_zero_and_undeclared_support():
    assert P_op(disk(1.0), 0) == 0
    with pytest.raises(DomainError):
        P_op(BeltramiField(lambda z: z, ()), 1.0)


def test_T_exterior_identity():
    # window side 4.25 leaves 1 < |s| <= 1.125 trustworthy outside the disk
    f = disk(1.0).to_grid(square_window(2.125), 512)
    t = T_op(f)
    for s in (1.1, -1.1j, 0.78 + 0.78j):
        assert abs(t.interpolate(np.array([s]))[0] - (-1 / s ** 2)) < 5e-3 * abs(1 / s ** 2)
    assert t.valid_radius == pytest.approx(1.125)


def test_T_linear_and_zero(rng):
    w = square_window(2.0)
    a = disk(0.5).to_grid(w, 64)
    b = constant_annulus(0.3j, 0.2, 0.4).to_grid(w, 64)
    lhs = T_op(a.replace(2 * a.values - 3j * b.values, support=((0.0, 0.5),))).values
    rhs = 2 * T_op(a).values - 3j * T_op(b).values
    assert np.max(np.abs(lhs - rhs)) < 1e-10
    z = a.replace(np.zeros_like(a.values))
    assert np.all(T_op(z).values == 0)


def test_T_rejects_tight_window():
    f = disk(1.0).to_grid(square_window(1.5), 64)
    with pytest.raises(DomainError, match="padding"):
        T_op(f)


def test_theta_first_iterate_is_T_mu(coarse):
    mu = radial_stretch(2.0)
    g = mu.to_grid(coarse.window_for(1.0), coarse.n)
    first = next(theta_iterates(g))
    assert np.array_equal(first.theta, T_op(g).values)


def test_theta_contraction(coarse):
    mu = radial_stretch(2.0)             # k = 1/3
    g = mu.to_grid(coarse.window_for(1.0), coarse.n)
    it = theta_iterates(g)
    prev = None
    for j in range(12):
        step = next(it)
        if prev is not None and j >= 2:
            assert step.l2_change / prev <= 1 / 3 + 0.1
        prev = step.l2_change


def test_solve_theta_zero(coarse):
    th = solve_theta(constant_annulus(0.0, 0.2, 0.5), coarse)
    assert np.all(th.values == 0)


def test_solve_theta_errors():
    with pytest.raises(DomainError, match="< 1"):
        solve_theta(constant_annulus(1.0, 0.2, 0.5), SolverConfig(n=64))
    with pytest.raises(ConvergenceError, match="contraction ratio"):
        solve_theta(constant_annulus(0.5, 0.2, 0.5), SolverConfig(n=64, max_iters=3))


def test_solver_config_validation():
    with pytest.raises(DomainError):
        SolverConfig(n=100)
    with pytest.raises(DomainError):
        SolverConfig(padding=3.0)


def test_identity_for_zero_mu(coarse):
    F = principal_solution(constant_annulus(0.0, 0.2, 0.5), coarse)
    pts = np.array([0.1, 0.3 + 0.3j, 1.0, -2j])
    assert np.max(np.abs(F(pts) - pts)) < 1e-12
    E = principal_solution(BeltramiField(lambda z: z, ()), coarse)
    assert E(0.4j) == 0.4j


def test_radial_stretch_coarse(coarse):
    F = principal_solution(radial_stretch(2.0), coarse)
    assert F(0) == 0
    assert abs(F(0.5) - 0.25) < 5e-3
    assert abs(F(1.0) - 1.0) < 5e-3
    assert abs(F(2.0) - 2.0) < 5e-3


def test_frechet_zero_field(coarse):
    rep = frechet_check(constant_annulus(0.0, 0.25, 0.5), (0.2, 0.1, 0.05), coarse)
    assert rep.errors == (0.0, 0.0, 0.0)


def test_frechet_slope_coarse(coarse):
    rep = frechet_check(constant_annulus(1.0, 0.25, 0.5), (0.2, 0.1, 0.05), coarse)
    assert abs(rep.p_nu - 0.1875) < 1e-6
    assert abs(rep.slope - 2) < 0.3
    assert rep.errors[0] > rep.errors[1] > rep.errors[2]


def test_frechet_preconditions():
    nu = constant_annulus(1.0, 0.25, 0.5)
    with pytest.raises(DomainError):
        frechet_check(nu, (0.2, 0.1))
    with pytest.raises(DomainError):
        frechet_check(nu, (1.5, 0.1, 0.05))


def test_disk_derivative_trivial(coarse):
    mu = symmetrize(interpolation_field(InterpolationParams(0.5, 0.5)))
    assert disk_derivative(mu, coarse) == 1


def test_disk_derivative_model_case(coarse):
    # in linear coordinates the map phi/alpha integrates mu exactly, so
    # h'(0) = alpha_tilde / alpha
    p = InterpolationParams(0.5, 0.5, 0.2 + 0.1j)
    h0 = disk_derivative(symmetrize(interpolation_field(p)), coarse)
    assert abs(h0 - p.alpha_tilde / p.alpha) < 1e-4


def test_disk_derivative_rejects_asymmetric(coarse):
    nu = interpolation_field(InterpolationParams(0.5, 0.5, 0.3))
    with pytest.raises(DomainError, match="symmetric"):
        disk_derivative(nu, coarse)
    with pytest.raises(DomainError, match="unit circle"):
        disk_derivative(constant_annulus(0.1, 0.5, 2.0), coarse)
