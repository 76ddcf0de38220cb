"""Koenigs linearisation at an attracting fixed point 0.

The linearising coordinate psi (psi o g = alpha psi, psi'(0) = 1) is the limit
of ``alpha**-n g^n``.  The iterates are sampled on a circle and converted to
power-series coefficients with an FFT.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError

DEFAULT_DEGREE = 32
RESIDUAL_NODES = 256


@dataclass(frozen=True)
class LinearizerModel:
    alpha: complex
    coeffs: np.ndarray      # coeffs[k] multiplies z**k; coeffs[0] = 0, coeffs[1] = 1
    radius: float
    L: float
    residual: float
    tol: float

    def __call__(self, z):
        return np.polynomial.polynomial.polyval(z, self.coeffs)

    def derivative(self, z):
        k = np.arange(1, self.coeffs.size)
        return np.polynomial.polynomial.polyval(z, self.coeffs[1:] * k)


def _circle(radius, n):
    return radius * np.exp(2j * np.pi * np.arange(n) / n)


def linearizer(g, alpha: complex, radius: float = 0.05, tol: float = 1e-13,
               degree: int = DEFAULT_DEGREE, n_nodes: int = RESIDUAL_NODES,
               max_iter: int = 10_000, residual_tol: float = 1e-10) -> LinearizerModel:
    """Build psi for ``g`` (vectorised, ``g(0) = 0``, ``g'(0) = alpha``).

    Iteration stops once successive iterates of ``alpha**-n g^n`` differ by less
    than ``tol`` in sup norm on ``|z| = radius``.  The truncated series is then
    accepted only if ``sup |psi(g(z)) - alpha psi(z)|`` over the same circle is
    below ``residual_tol``; by the maximum principle this bounds the whole disk.
    """
    alpha = complex(alpha)
    if not 0.0 < abs(alpha) < 1.0:
        raise DomainError(f"Koenigs linearisation needs 0 < |alpha| < 1, got {alpha}")
    if degree < 1 or n_nodes <= 2 * degree:
        raise DomainError("need degree >= 1 and n_nodes > 2 * degree")
    z = _circle(radius, n_nodes)
    w = z.copy()
    psi = z.copy()
    scale = 1.0 + 0j
    delta = np.inf
    settled = False
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(max_iter):
            w = np.asarray(g(w), dtype=np.complex128)
            scale /= alpha
            nxt = w * scale
            if not np.isfinite(nxt).all():
                psi = nxt
                break
            delta = np.max(np.abs(nxt - psi))
            psi = nxt
            if delta < tol:
                settled = True
                break
    if not settled and np.isfinite(psi).all():
        raise ConvergenceError(
            f"alpha^-n g^n did not settle within {max_iter} steps on |z| = {radius}; try a smaller radius")
    if not np.isfinite(psi).all() or delta >= tol:
        raise ConvergenceError(f"orbit of |z| = {radius} escaped; try a smaller radius")

    raw = np.fft.fft(psi) / n_nodes
    # below this level the samples carry only rounding noise
    raw[np.abs(raw) < 1e-15 * np.max(np.abs(raw))] = 0.0
    coeffs = raw[: degree + 1] / radius ** np.arange(degree + 1)
    coeffs[0] = 0.0
    coeffs[1] = 1.0

    def series(u):
        return np.polynomial.polynomial.polyval(u, coeffs)

    residual = float(np.max(np.abs(series(np.asarray(g(z))) - alpha * series(z))))
    if not residual < residual_tol:
        raise ConvergenceError(
            f"functional-equation residual {residual:.3e} exceeds {residual_tol:.1e} on |z| = {radius}; "
            "try a smaller radius")
    L = float(np.min(np.abs(series(z))))
    return LinearizerModel(alpha, coeffs, float(radius), L, residual, tol)


def linearizer_inverse(model: LinearizerModel, w: complex, tol: float = 1e-14, max_iter: int = 60) -> complex:
    """Solve ``psi(z) = w`` by Newton's method from ``z = w``."""
    w = complex(w)
    if not abs(w) < model.L:
        raise DomainError(f"|w| = {abs(w)} is outside the validated image disk of radius {model.L}")
    z = w
    for _ in range(max_iter):
        f = complex(model(z)) - w
        if abs(f) < tol:
            return z
        z -= f / complex(model.derivative(z))
    if abs(complex(model(z)) - w) < tol:
        return z
    raise ConvergenceError(f"Newton iteration for psi^-1({w}) did not converge")
