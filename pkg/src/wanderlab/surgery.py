"""Radial interpolation between two linear maps and its Beltrami coefficient.

On the annulus ``r <= |z| <= R`` (``r = |alpha| R``) the map

    phi(z) = A(|z|) z,   A(t) = ((R - t) alpha_t + (t - r) alpha) / (R - r)

joins ``z -> alpha_t z`` on the inner circle to ``z -> alpha z`` on the outer
one, where ``alpha_t = alpha + rho * lam`` and
``rho = |alpha| / 2 * min(|alpha|, 1 - |alpha|)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .numerics import BeltramiField, PolarAnnulus

_EDGE = 1e-12


def rho_of(alpha: complex) -> float:
    a = abs(alpha)
    return a / 2.0 * min(a, 1.0 - a)


@dataclass(frozen=True)
class InterpolationParams:
    alpha: complex
    R: float
    lam: complex = 0j
    r: float = field(init=False)
    rho: float = field(init=False)
    alpha_tilde: complex = field(init=False)

    def __post_init__(self):
        alpha = complex(self.alpha)
        if not 0.0 < abs(alpha) < 1.0:
            raise DomainError(f"need 0 < |alpha| < 1, got alpha = {self.alpha}")
        if not 0.0 < self.R < 1.0:
            raise DomainError(f"need 0 < R < 1, got R = {self.R}")
        lam = complex(self.lam)
        if not abs(lam) < 1.0:
            raise DomainError(f"need |lambda| < 1, got lambda = {self.lam}")
        rho = rho_of(alpha)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "R", float(self.R))
        object.__setattr__(self, "r", abs(alpha) * self.R)
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "alpha_tilde", alpha + rho * lam)

    def with_lambda(self, lam: complex) -> "InterpolationParams":
        return InterpolationParams(self.alpha, self.R, lam)

    @property
    def slope(self) -> complex:
        """A'(t), constant in t."""
        return (self.alpha - self.alpha_tilde) / (self.R - self.r)


def _radii(p: InterpolationParams, z, closed: bool):
    z = np.asarray(z, dtype=np.complex128)
    t = np.abs(z)
    lo, hi = p.r * (1 - _EDGE), p.R * (1 + _EDGE)
    ok = (t >= lo) & (t <= hi) if closed else (t > lo) & (t < hi)
    if not np.all(ok):
        raise DomainError(f"|z| must lie in [{p.r}, {p.R}]")
    return z, t


def interpolate(p: InterpolationParams, z):
    z, t = _radii(p, z, closed=True)
    A = ((p.R - t) * p.alpha_tilde + (t - p.r) * p.alpha) / (p.R - p.r)
    out = A * z
    return out if out.ndim else complex(out)


def beltrami_of_interpolation(p: InterpolationParams, z):
    """``phi_zbar / phi_z`` with ``phi_z = A + t A'/2`` and
    ``phi_zbar = (t A'/2) e^{2 i theta}``."""
    z, t = _radii(p, z, closed=True)
    A = ((p.R - t) * p.alpha_tilde + (t - p.r) * p.alpha) / (p.R - p.r)
    half = 0.5 * t * p.slope
    dz = A + half
    if np.any(np.abs(dz) < 1e-14):
        raise DomainError("degenerate interpolation: |d phi / dz| < 1e-14")
    phase = z * z / np.where(t > 0, t * t, 1.0)
    out = half * phase / dz
    return out if out.ndim else complex(out)


def interpolation_field(p: InterpolationParams) -> BeltramiField:
    return BeltramiField(lambda z: beltrami_of_interpolation(p, z), ((p.r, p.R),),
                         label=f"nu[alpha={p.alpha}, R={p.R}, lambda={p.lam}]")


# -- lambda-derivative at lambda = 0 -------------------------------------------

def dnu_symbolic(alpha: complex, R: float, z):
    """d nu / d lambda at lambda = 0: ``-rho t e^{2 i theta} / (2 alpha (R - r))``."""
    z = np.asarray(z, dtype=np.complex128)
    t = np.abs(z)
    rho = rho_of(alpha)
    r = abs(alpha) * R
    out = -rho * z * z / np.where(t > 0, t, 1.0) / (2.0 * alpha * (R - r))
    return out if out.ndim else complex(out)


@dataclass(frozen=True)
class DnuReport:
    value: complex
    symbolic: complex
    finite_difference: complex
    dbar: complex
    printed_2theta: complex
    printed_1theta: complex
    flags: dict


def dnu_dlambda(p: InterpolationParams, z: complex, h: float = 1e-4) -> DnuReport:
    """d nu / d lambda at lambda = 0 by two routes, set against the two
    printed closed forms ``rho t e^{2i theta}/(2 alpha R (1-alpha))`` and
    ``rho t e^{i theta}/(2 alpha R (1-alpha))``."""
    if p.lam != 0:
        raise DomainError("dnu_dlambda is evaluated at lambda = 0")
    z = complex(z)
    _radii(p, z, closed=False)
    symbolic = dnu_symbolic(p.alpha, p.R, z)

    def nu(lam):
        return beltrami_of_interpolation(p.with_lambda(lam), z)

    dx = (nu(h) - nu(-h)) / (4 * h)
    dy = (nu(1j * h) - nu(-1j * h)) / (4j * h)
    fd, dbar = dx + dy, dx - dy
    gap = abs(fd - symbolic)
    if gap > 1e-5:
        raise DomainError(f"symbolic and finite-difference d nu/d lambda disagree by {gap:.2e}")

    t = abs(z)
    e1 = z / t
    denom = 2.0 * p.alpha * p.R * (1.0 - abs(p.alpha))
    printed2 = p.rho * t * e1 * e1 / denom
    printed1 = p.rho * t * e1 / denom
    scale = max(abs(symbolic), 1e-300)

    def close(a, b):
        return bool(abs(a - b) <= 1e-9 * scale)

    flags = {
        "matches_2theta": close(symbolic, printed2),
        "matches_2theta_negated": close(symbolic, -printed2),
        "matches_1theta": close(symbolic, printed1),
        "matches_1theta_negated": close(symbolic, -printed1),
    }
    return DnuReport(symbolic, symbolic, complex(fd), complex(dbar), complex(printed2), complex(printed1), flags)


def dnu_field(alpha: complex, R: float) -> BeltramiField:
    r = abs(alpha) * R
    return BeltramiField(lambda z: dnu_symbolic(alpha, R, z), ((r, R),), label="dnu/dlambda")


# -- reflection across the unit circle ------------------------------------------

def reflect(func):
    """tau-pullback of a coefficient, tau(z) = 1/conj(z):
    ``conj(nu(1/conj z)) z^2 / conj(z)^2``."""
    def reflected(z):
        z = np.asarray(z, dtype=np.complex128)
        zc = np.conj(z)
        return np.conj(func(1.0 / zc)) * (z / zc) ** 2
    return reflected


def symmetrize(nu: BeltramiField, window=None) -> BeltramiField:
    """Extend the part of ``nu`` inside the unit disk by its reflection.

    Only support annuli lying inside the unit disk are kept, so applying
    ``symmetrize`` twice changes nothing.
    """
    inner = tuple((a, b) for a, b in nu.support if b <= 1.0)
    if not inner:
        raise DomainError("field has no support inside the unit disk")
    for a, b in inner:
        if a <= 0 or b >= 1.0:
            raise DomainError(f"support annulus ({a}, {b}) must avoid 0 and the unit circle")
    outer = tuple(sorted((1.0 / b, 1.0 / a) for a, b in inner))
    if window is not None:
        reach = min(abs(c) for c in window)
        if max(b for _, b in outer) >= reach:
            raise DomainError("reflected support reaches the grid boundary")
    inner_field = BeltramiField(nu.func, inner)
    back = reflect(inner_field)

    def func(z):
        z = np.asarray(z, dtype=np.complex128)
        out = np.zeros(z.shape, dtype=np.complex128)
        ins = np.abs(z) < 1.0
        if ins.any():
            out[ins] = inner_field(z[ins])
        if (~ins).any():
            out[~ins] = back(z[~ins])
        return out

    return BeltramiField(func, inner + outer, label=f"sym({nu.label})", meta={"inner": inner})


def symmetry_defect(mu_hat: BeltramiField, n_r: int = 16, n_theta: int = 64) -> float:
    """max |mu(1/conj z) - conj(mu(z)) z^2 / conj(z)^2| over sample nodes."""
    worst = 0.0
    for a, b in mu_hat.support:
        z, _ = PolarAnnulus(a, b, n_r, n_theta).nodes()
        z = z[np.abs(z) != 1.0]
        zc = np.conj(z)
        lhs = mu_hat(1.0 / zc)
        rhs = np.conj(mu_hat(z)) * (z / zc) ** 2
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst


def beltrami_pullback(mu, f, df, z):
    """``mu(f(z)) conj(f'(z)) / f'(z)``."""
    z = np.asarray(z, dtype=np.complex128)
    d = np.asarray(df(z), dtype=np.complex128)
    if np.any(np.abs(d) < 1e-300):
        raise DomainError("pullback through a critical point (f'(z) = 0)")
    out = np.asarray(mu(f(z)), dtype=np.complex128) * np.conj(d) / d
    return out if out.ndim else complex(out)


def radial_image_profile(p: InterpolationParams, n: int = 2001) -> np.ndarray:
    """Image radius ``|A(t)| t`` on a uniform t-grid over ``[r, R]``."""
    t = np.linspace(p.r, p.R, n)
    return np.abs(interpolate(p, t.astype(np.complex128)))


def max_modulus(p: InterpolationParams, n_samples: int = 10_000, seed: int = 0) -> float:
    """Largest |mu| over random annulus samples."""
    rng = np.random.default_rng(seed)
    t = np.sqrt(rng.uniform(p.r ** 2, p.R ** 2, n_samples))
    theta = rng.uniform(0.0, 2.0 * math.pi, n_samples)
    return float(np.max(np.abs(beltrami_of_interpolation(p, t * np.exp(1j * theta)))))
