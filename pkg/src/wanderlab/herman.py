"""A Herman-type wandering domain from an explicit lift.

    f(z) = z + 2 pi i + a (e^z - 1)        (entire)
    h(w) = w e^{a (w - 1)}                  (self-map of C*)

satisfy ``exp o f = h o exp``.  ``w0 = 1`` is a fixed point of ``h`` with
multiplier ``1 + a``; when it attracts, each lift of its basin is a wandering
domain of ``f`` and ``f`` maps the lattice point ``2 pi i k`` to ``2 pi i (k+1)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .errors import DomainError
from .inner_dynamics import DistortionSequence
from .kernels import escape_counts
from .koenigs import linearizer

TWO_PI_I = 2j * math.pi
# exp overflows just past Re z = 709.78
_EXP_LIMIT = 700.0


@dataclass(frozen=True)
class HermanMap:
    a: complex

    def __post_init__(self):
        a = complex(self.a)
        if not abs(1 + a) < 1.0:
            raise DomainError(f"need |1 + a| < 1 for an attracting fixed point, got |1 + a| = {abs(1 + a)}")
        object.__setattr__(self, "a", a)

    @property
    def multiplier(self) -> complex:
        return 1 + self.a

    @property
    def superattracting(self) -> bool:
        return self.multiplier == 0

    w0 = 1.0 + 0j

    def f(self, z):
        return z + TWO_PI_I + self.a * (np.exp(z) - 1.0)

    def h(self, w):
        return w * np.exp(self.a * (w - 1.0))


def build_herman(a: complex) -> HermanMap:
    return HermanMap(a)


class Residual(NamedTuple):
    value: float
    skipped: int


def semiconjugacy_residual(m: HermanMap, samples) -> Residual:
    """max |exp(f(z)) - h(exp z)| / max(1, |h(exp z)|) over the samples.

    Samples with ``Re z`` or ``Re f(z)`` beyond the overflow threshold are
    skipped and counted.
    """
    z = np.asarray(samples, dtype=np.complex128).ravel()
    ok = np.abs(z.real) < _EXP_LIMIT
    with np.errstate(over="ignore", invalid="ignore"):
        fz = np.where(ok, m.f(np.where(ok, z, 0)), 0)
        ok &= np.isfinite(fz) & (np.abs(fz.real) < _EXP_LIMIT)
        zs, fs = z[ok], fz[ok]
        lhs = np.exp(fs)
        rhs = m.h(np.exp(zs))
    good = np.isfinite(rhs)
    lhs, rhs = lhs[good], rhs[good]
    skipped = z.size - lhs.size
    if lhs.size == 0:
        return Residual(float("nan"), skipped)
    rel = np.abs(lhs - rhs) / np.maximum(1.0, np.abs(rhs))
    return Residual(float(rel.max()), skipped)


class Orbit(NamedTuple):
    points: np.ndarray
    truncated: bool


def orbit(m: HermanMap, z0: complex, N: int) -> Orbit:
    """``(f(z0), ..., f^N(z0))``; stops early if ``Re`` overflows."""
    if N < 1:
        raise DomainError("orbit length must be >= 1")
    pts = []
    z = complex(z0)
    for _ in range(N):
        if abs(z.real) >= _EXP_LIMIT:
            return Orbit(np.array(pts, dtype=np.complex128), True)
        z = complex(m.f(z))
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            return Orbit(np.array(pts, dtype=np.complex128), True)
        pts.append(z)
    return Orbit(np.array(pts, dtype=np.complex128), False)


def lattice_point(k: int) -> complex:
    return complex(0.0, 2.0 * math.pi * k)


def herman_distortion(m: HermanMap, N: int) -> DistortionSequence:
    """Constant sequence ``(1 + a, ..., 1 + a)``.

    The multiplier is cross-checked against the Koenigs coordinate of
    ``u -> h(1 + u) - 1`` at 0.
    """
    if N < 1:
        raise DomainError("horizon must be >= 1")
    if m.superattracting:
        raise DomainError("a = -1 is superattracting; Koenigs linearisation does not apply")
    alpha = m.multiplier

    def g(u):
        # h(1 + u) - 1 without cancellation near u = 0
        return (1.0 + u) * np.expm1(m.a * u) + u

    model = linearizer(g, alpha, radius=min(0.05, 0.25 * (1 - abs(alpha))))
    u = 0.5 * model.radius
    # psi o g = alpha psi at a point of the validated disk
    gap = abs(complex(model(g(u))) - alpha * complex(model(u)))
    if gap > 1e-9:
        raise DomainError(f"Koenigs cross-check failed for a = {m.a} (residual {gap:.2e})")
    return DistortionSequence(np.full(N, alpha, dtype=np.complex128))


def render_escape(m: HermanMap, window, resolution, max_iter: int = 100,
                  escape_radius: float = 50.0) -> np.ndarray:
    """8-bit grayscale escape-time image, rows from the top of ``window``.

    Pixel value ``255 * n / max_iter`` where ``n`` is the first step with
    ``|Re f^n(z)| > escape_radius`` (``max_iter`` if it never escapes).
    """
    x0, x1, y0, y1 = (float(v) for v in window)
    width, height = (int(v) for v in resolution)
    if width <= 0 or height <= 0:
        raise DomainError("resolution must be positive")
    if not (x1 > x0 and y1 > y0):
        raise DomainError("window has zero area")
    if not escape_radius > 10:
        raise DomainError("escape radius must exceed 10")
    if max_iter < 0:
        raise DomainError("max_iter must be >= 0")
    if max_iter == 0:
        return np.zeros((height, width), dtype=np.uint8)
    counts = escape_counts(x0, x1, y0, y1, width, height, m.a, int(max_iter), float(escape_radius))
    return ((counts * 255) // max_iter).astype(np.uint8)


def write_ppm(path, image: np.ndarray) -> Path:
    """Binary PPM (P6) from a grayscale array."""
    img = np.asarray(image, dtype=np.uint8)
    if img.ndim != 2:
        raise DomainError("expected a 2-d grayscale image")
    h, w = img.shape
    rgb = np.repeat(img[:, :, None], 3, axis=2)
    path = Path(path)
    with open(path, "wb") as fh:
        fh.write(f"P6\n{w} {h}\n255\n".encode("ascii"))
        fh.write(rgb.tobytes())
    return path
