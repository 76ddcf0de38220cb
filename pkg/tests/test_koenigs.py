import numpy as np
import pytest

from wanderlab.errors import ConvergenceError, DomainError
from wanderlab.koenigs import linearizer, linearizer_inverse


def g(z):
    return 0.5 * z + z * z


@pytest.fixture(scope="module")
def model():
    return linearizer(g, 0.5)


def test_normalisation(model):
    assert model.coeffs[0] == 0 and model.coeffs[1] == 1


def test_second_coefficient(model):
    # psi(g) = alpha psi at order z^2: c2 (alpha^2 - alpha) + 1 = 0
    assert abs(model.coeffs[2] - 4) < 1e-9


def test_functional_equation_on_disk(model):
    r = np.linspace(0, model.radius, 20)[:, None]
    z = (r * np.exp(1j * np.linspace(0, 2 * np.pi, 40))[None, :]).ravel()
    res = np.abs(model(g(z)) - 0.5 * model(z))
    assert res.max() < 1e-9
    assert model.residual < 1e-9


def test_linear_map_gives_identity():
    m = linearizer(lambda z: 0.3j * z, 0.3j)
    assert np.allclose(m.coeffs[2:], 0, atol=1e-14)


def test_inverse_roundtrip(model):
    for w in (0.2 * model.L, 0.5j * model.L, -0.9 * model.L):
        z = linearizer_inverse(model, w)
        assert abs(model(z) - w) < 1e-13


def test_inverse_outside_validated_disk(model):
    with pytest.raises(DomainError):
        linearizer_inverse(model, 2 * model.L)


def test_rejects_neutral_multiplier():
    with pytest.raises(DomainError):
        linearizer(lambda z: z, 1.0)
    with pytest.raises(DomainError):
        linearizer(lambda z: 0 * z, 0.0)


def test_escaping_radius_reported():
    with pytest.raises(ConvergenceError):
        linearizer(g, 0.5, radius=2.0)


def test_derivative_matches_difference(model):
    z, h = 0.01 + 0.02j, 1e-6
    fd = (model(z + h) - model(z - h)) / (2 * h)
    assert abs(model.derivative(z) - fd) < 1e-8
