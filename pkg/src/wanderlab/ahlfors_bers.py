"""Principal solution of the Beltrami equation for compactly supported mu.

    P h(s) = -1/pi  iint h(z) (1/(z - s) - 1/z) dA(z)
    T h(s) = -1/pi  p.v. iint h(z) / (z - s)^2 dA(z)
    F(z)   = z + P[mu (theta + 1)](z),   theta = T(mu theta) + T mu

T is applied spectrally on a periodic window.  Its kernel is truncated at
radius ``R_k = L/2``; the truncated kernel has the exact symbol

    m(xi) = conj(xi)/xi * (1 - 2 J1(k)/k),   k = 2 pi |xi| R_k,

so the periodic convolution equals the free-space one at every point within
``R_k - a`` of the origin when the support has radius ``a`` and ``L >= 4a``.
P is evaluated by polar quadrature directly on the support annuli.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np
from scipy.special import j1

from .errors import ConvergenceError, DomainError
from .kernels import pairwise_sum
from .numerics import FINEST_RUNG, BeltramiField, ComplexGridField, PolarAnnulus, square_window
from .surgery import symmetry_defect

_SYMMETRY_TOL = 1e-8


@dataclass(frozen=True)
class SolverConfig:
    n: int = 1024
    padding: float = 4.25       # window side / outer support radius
    max_iters: int = 200
    fix_tol: float = 1e-12
    supersample: int = 4
    quad: tuple[int, int] = FINEST_RUNG

    def __post_init__(self):
        if self.n < 8 or self.n & (self.n - 1):
            raise DomainError(f"grid size must be a power of two >= 8, got {self.n}")
        if self.padding < 4.0:
            raise DomainError(f"padding factor must be >= 4, got {self.padding}")

    def window_for(self, support_radius: float):
        return square_window(0.5 * self.padding * support_radius)


# -- P -------------------------------------------------------------------------

@lru_cache(maxsize=32)
def _nodes(a: float, b: float, n_r: int, n_theta: int):
    z, w = PolarAnnulus(a, b, n_r, n_theta).nodes()
    z.flags.writeable = False
    w.flags.writeable = False
    return z, w


def P_op(theta: BeltramiField, s: complex, rung: tuple[int, int] = FINEST_RUNG) -> complex:
    """Cauchy-type operator P at one point ``s``.

    When ``s`` falls inside a support annulus the singular part is removed
    analytically: ``h(s)`` times the closed-form integral of ``1/(z - s)``
    over the annulus, leaving a bounded integrand for the midpoint rule.
    """
    support = getattr(theta, "support", None)
    if not support:
        raise DomainError("P_op needs a field with declared support annuli")
    s = complex(s)
    if s == 0:
        return 0j
    abs_s = abs(s)
    total = 0j
    for a, b in support:
        z, w = _nodes(a, b, *rung)
        hv = theta(z)
        if a <= abs_s <= b:
            clipped = min(max(abs_s, a * (1 + 1e-12)), b * (1 - 1e-12))
            hs = complex(theta(np.array([s * (clipped / abs_s)]))[0])
            diff = z - s
            safe = np.where(diff == 0, 1.0, diff)
            regular = np.where(diff == 0, 0.0, (hv - hs) / safe) - hv / z
            closed = -math.pi * (min(b, abs_s) ** 2 - min(a, abs_s) ** 2) / s
            total += pairwise_sum(regular * w) + hs * closed
        else:
            total += pairwise_sum(hv * (s / (z * (z - s))) * w)
    return -total / math.pi


# -- T ---------------------------------------------------------------------------

@lru_cache(maxsize=8)
def _beurling_symbol(nx: int, ny: int, Lx: float, Ly: float, Rk: float) -> np.ndarray:
    kx = np.fft.fftfreq(nx, d=Lx / nx)
    ky = np.fft.fftfreq(ny, d=Ly / ny)
    xi = kx[None, :] + 1j * ky[:, None]
    mag = np.abs(xi)
    k = 2.0 * math.pi * mag * Rk
    zero = mag == 0
    safe_k = np.where(zero, 1.0, k)
    safe_xi = np.where(zero, 1.0, xi)
    sym = np.conj(safe_xi) / safe_xi * (1.0 - 2.0 * j1(safe_k) / safe_k)
    sym[zero] = 0.0
    sym.flags.writeable = False
    return sym


def _support_radius(field: ComplexGridField) -> float:
    if field.support:
        return max(b for _, b in field.support)
    nz = field.values != 0
    if not nz.any():
        return 0.0
    return float(np.max(np.abs(field.centers()[nz]))) + 0.5 * math.hypot(field.dx, field.dy)


def _symbol_for(field: ComplexGridField, a: float):
    x0, x1, y0, y1 = field.window
    Lx, Ly = x1 - x0, y1 - y0
    if abs(x0 + x1) > 1e-9 * Lx or abs(y0 + y1) > 1e-9 * Ly:
        raise DomainError("T_op expects a window centred at the origin")
    L = min(Lx, Ly)
    if a > 0 and L < 4.0 * a * (1 - 1e-12):
        raise DomainError(
            f"support radius {a:g} reaches within the padding margin of a window of side {L:g} (need side >= 4a)")
    Rk = 0.5 * L
    return _beurling_symbol(field.nx, field.ny, float(Lx), float(Ly), float(Rk)), Rk


def _apply(values, sym):
    return np.fft.ifft2(np.fft.fft2(values) * sym)


def T_op(theta: ComplexGridField) -> ComplexGridField:
    """Beurling transform of a compactly supported grid field.

    The result is trustworthy within ``valid_radius`` of the origin.
    """
    a = _support_radius(theta)
    sym, Rk = _symbol_for(theta, a)
    return ComplexGridField(theta.window, _apply(theta.values, sym), valid_radius=Rk - a)


# -- Neumann series for theta -----------------------------------------------------------

@dataclass(frozen=True)
class ThetaStep:
    theta: np.ndarray
    sup_change: float
    l2_change: float


def theta_iterates(mu_grid: ComplexGridField) -> Iterator[ThetaStep]:
    """theta_1 = T mu, theta_{j+1} = T(mu theta_j) + T mu (theta_0 = 0)."""
    a = _support_radius(mu_grid)
    sym, _ = _symbol_for(mu_grid, a)
    mu = mu_grid.values
    t_mu = _apply(mu, sym)
    prev = np.zeros_like(t_mu)
    cur = t_mu
    while True:
        d = cur - prev
        yield ThetaStep(cur, float(np.max(np.abs(d))), float(np.sqrt(np.mean(np.abs(d) ** 2))))
        prev, cur = cur, _apply(mu * cur, sym) + t_mu


@dataclass(frozen=True)
class ThetaSolution:
    theta: ComplexGridField
    mu_grid: ComplexGridField
    ratios: list
    iterations: int


def _solve(mu: BeltramiField, cfg: SolverConfig) -> ThetaSolution:
    a = mu.outer_radius
    window = cfg.window_for(a if a > 0 else 1.0)
    mu_grid = mu.to_grid(window, cfg.n, supersample=cfg.supersample)
    k_bound = float(np.max(np.abs(mu_grid.values)))
    if not k_bound < 1.0:
        raise DomainError(f"sup |mu| = {k_bound} must be < 1")
    ratios = []
    last_l2 = None
    it = theta_iterates(mu_grid)
    for j in range(1, cfg.max_iters + 1):
        step = next(it)
        if last_l2 is not None and last_l2 > 0:
            ratios.append(step.l2_change / last_l2)
        last_l2 = step.l2_change
        if step.sup_change < cfg.fix_tol:
            _, Rk = _symbol_for(mu_grid, a)
            theta = ComplexGridField(window, step.theta, valid_radius=Rk - a)
            return ThetaSolution(theta, mu_grid, ratios, j)
    last = ratios[-1] if ratios else float("nan")
    raise ConvergenceError(
        f"theta iteration did not reach {cfg.fix_tol:g} in {cfg.max_iters} steps (last contraction ratio {last:.3f})")


def solve_theta(mu: BeltramiField, cfg: SolverConfig = SolverConfig()) -> ComplexGridField:
    return _solve(mu, cfg).theta


# -- principal solution ----------------------------------------------------------------

@dataclass(frozen=True)
class PrincipalMap:
    """F(z) = z + P[mu (theta + 1)](z), asymptotic to the identity."""

    mu: BeltramiField
    theta: ComplexGridField
    quad: tuple[int, int] = FINEST_RUNG
    ratios: list = field(default_factory=list, compare=False)

    @property
    def density(self) -> BeltramiField:
        mu, theta = self.mu, self.theta

        def h(z):
            return mu(z) * (theta.interpolate(z) + 1.0)

        return BeltramiField(h, mu.support, label="mu*(theta+1)")

    def __call__(self, z):
        zs = np.asarray(z, dtype=np.complex128)
        if not self.mu.support:
            return zs if zs.ndim else complex(zs)
        dens = self.density
        flat = [complex(p) + P_op(dens, p, self.quad) for p in zs.ravel()]
        out = np.array(flat, dtype=np.complex128).reshape(zs.shape)
        return out if out.ndim else complex(out)


def principal_solution(mu: BeltramiField, cfg: SolverConfig = SolverConfig()) -> PrincipalMap:
    if not mu.support:
        window = cfg.window_for(1.0)
        zero = ComplexGridField(window, np.zeros((cfg.n, cfg.n), dtype=np.complex128))
        return PrincipalMap(mu, zero, cfg.quad)
    sol = _solve(mu, cfg)
    return PrincipalMap(mu, sol.theta, cfg.quad, sol.ratios)


# -- Frechet differential at mu = 0 -------------------------------------------------------

@dataclass(frozen=True)
class FrechetReport:
    scales: tuple
    errors: tuple
    slope: float
    p_nu: complex


def frechet_check(nu: BeltramiField, scales: Sequence[float], cfg: SolverConfig = SolverConfig()) -> FrechetReport:
    """Remainder ``e(t) = |F^{t nu}(1) - 1 - t P nu(1)|`` and its log-log slope."""
    scales = tuple(float(t) for t in scales)
    if len(scales) < 3:
        raise DomainError("frechet_check needs at least 3 scales")
    k = nu.sup_norm()
    if any(not (t > 0 and t * k < 1) for t in scales):
        raise DomainError("every scale must satisfy 0 < t sup|nu| < 1")
    p_nu = P_op(nu, 1.0, cfg.quad)
    errors = []
    for t in scales:
        mu_t = BeltramiField(lambda z, t=t: t * nu.func(z), nu.support)
        F = principal_solution(mu_t, cfg)
        errors.append(abs(F(1.0) - 1.0 - t * p_nu))
    e = np.array(errors)
    if np.all(e > 0):
        slope = float(np.polyfit(np.log(scales), np.log(e), 1)[0])
    else:
        slope = float("nan")
    return FrechetReport(scales, tuple(errors), slope, p_nu)


# -- normalised disk map ----------------------------------------------------------------------

def disk_derivative(mu_hat: BeltramiField, cfg: SolverConfig = SolverConfig()) -> complex:
    """h'(0) = conj(F(1)) for the disk-preserving map integrating a
    reflection-symmetric ``mu_hat``."""
    for a, b in mu_hat.support:
        if a <= 0 or a <= 1.0 <= b:
            raise DomainError(f"support annulus ({a}, {b}) must avoid 0 and the unit circle")
    defect = symmetry_defect(mu_hat)
    if defect > _SYMMETRY_TOL:
        raise DomainError(f"mu_hat is not reflection symmetric (defect {defect:.2e})")
    F = principal_solution(mu_hat, cfg)
    return complex(np.conj(F(1.0)))


# -- reference coefficients ---------------------------------------------------------------------

def radial_stretch(K: float = 2.0) -> BeltramiField:
    """mu = (K-1)/(K+1) z/conj(z) on the unit disk; integrated by z |z|^(K-1)."""
    k = (K - 1.0) / (K + 1.0)

    def func(z):
        zc = np.conj(z)
        return k * z / np.where(zc == 0, 1.0, zc) * (z != 0)

    return BeltramiField(func, ((0.0, 1.0),), label=f"radial-stretch K={K}")


def constant_annulus(c: complex, r_in: float, r_out: float) -> BeltramiField:
    return BeltramiField(lambda z: np.full(z.shape, complex(c)), ((r_in, r_out),), label=f"{c} on annulus")
