"""Hot inner loops, each with a numba and a pure-numpy implementation.

The public names (``pairwise_sum``, ``bilinear``, ``escape_counts``) are
bound to the numba variants unless numba is missing or disabled through
``WANDERLAB_DISABLE_NUMBA``.  Both variants of ``pairwise_sum`` and
``bilinear`` perform the same floating-point operations in the same order,
so they agree bit for bit.
"""
import cmath
import math

import numpy as np

from ._accel import HAS_NUMBA, njit

TWO_PI_I = 2j * math.pi


# -- deterministic summation ------------------------------------------------

def pairwise_sum_numpy(values):
    x = np.ascontiguousarray(values, dtype=np.complex128).ravel()
    if x.size == 0:
        return 0j
    while x.size > 1:
        half = x.size // 2
        pairs = x[0:2 * half:2] + x[1:2 * half:2]
        if x.size % 2:
            pairs = np.concatenate((pairs, x[-1:]))
        x = pairs
    return complex(x[0])


@njit
def _pairwise_sum_jit(x):
    n = x.size
    if n == 0:
        return 0j
    buf = x.copy()
    while n > 1:
        half = n // 2
        for i in range(half):
            buf[i] = buf[2 * i] + buf[2 * i + 1]
        if n % 2:
            buf[half] = buf[n - 1]
            n = half + 1
        else:
            n = half
    return buf[0]


def pairwise_sum_jit(values):
    x = np.ascontiguousarray(values, dtype=np.complex128).ravel()
    return complex(_pairwise_sum_jit(x))


# -- bilinear interpolation on a cell-centred grid ---------------------------

def bilinear_numpy(grid, x0, y0, dx, dy, pts):
    pts = np.asarray(pts, dtype=np.complex128)
    ny, nx = grid.shape
    fx = (pts.real - x0) / dx - 0.5
    fy = (pts.imag - y0) / dy - 0.5
    i = np.clip(np.floor(fx).astype(np.int64), 0, nx - 2)
    j = np.clip(np.floor(fy).astype(np.int64), 0, ny - 2)
    tx = np.clip(fx - i, 0.0, 1.0)
    ty = np.clip(fy - j, 0.0, 1.0)
    v00 = grid[j, i]
    v01 = grid[j, i + 1]
    v10 = grid[j + 1, i]
    v11 = grid[j + 1, i + 1]
    re = ((1.0 - ty) * ((1.0 - tx) * v00.real + tx * v01.real)
          + ty * ((1.0 - tx) * v10.real + tx * v11.real))
    im = ((1.0 - ty) * ((1.0 - tx) * v00.imag + tx * v01.imag)
          + ty * ((1.0 - tx) * v10.imag + tx * v11.imag))
    return re + 1j * im


@njit
def _bilinear_jit(grid, x0, y0, dx, dy, flat):
    ny, nx = grid.shape
    out = np.empty(flat.size, dtype=np.complex128)
    for k in range(flat.size):
        fx = (flat[k].real - x0) / dx - 0.5
        fy = (flat[k].imag - y0) / dy - 0.5
        i = min(max(int(math.floor(fx)), 0), nx - 2)
        j = min(max(int(math.floor(fy)), 0), ny - 2)
        tx = min(max(fx - i, 0.0), 1.0)
        ty = min(max(fy - j, 0.0), 1.0)
        v00 = grid[j, i]
        v01 = grid[j, i + 1]
        v10 = grid[j + 1, i]
        v11 = grid[j + 1, i + 1]
        re = ((1.0 - ty) * ((1.0 - tx) * v00.real + tx * v01.real)
              + ty * ((1.0 - tx) * v10.real + tx * v11.real))
        im = ((1.0 - ty) * ((1.0 - tx) * v00.imag + tx * v01.imag)
              + ty * ((1.0 - tx) * v10.imag + tx * v11.imag))
        out[k] = complex(re, im)
    return out


def bilinear_jit(grid, x0, y0, dx, dy, pts):
    pts = np.asarray(pts, dtype=np.complex128)
    flat = np.ascontiguousarray(pts).ravel()
    grid = np.ascontiguousarray(grid, dtype=np.complex128)
    return _bilinear_jit(grid, float(x0), float(y0), float(dx), float(dy), flat).reshape(pts.shape)


# -- escape-time iteration of z -> z + 2 pi i + a (e^z - 1) ------------------

def escape_counts_numpy(x0, x1, y0, y1, width, height, a, max_iter, radius):
    dx = (x1 - x0) / width
    dy = (y1 - y0) / height
    xs = x0 + (np.arange(width) + 0.5) * dx
    ys = y1 - (np.arange(height) + 0.5) * dy
    z = xs[None, :] + 1j * ys[:, None]
    counts = np.zeros((height, width), dtype=np.int64)
    alive = np.abs(z.real) <= radius
    for _ in range(max_iter):
        if not alive.any():
            break
        za = z[alive]
        z[alive] = za + TWO_PI_I + a * (np.exp(za) - 1.0)
        counts[alive] += 1
        alive &= np.abs(z.real) <= radius
    return counts


@njit
def _escape_counts_jit(x0, x1, y0, y1, width, height, a, max_iter, radius):
    out = np.empty((height, width), dtype=np.int64)
    dx = (x1 - x0) / width
    dy = (y1 - y0) / height
    shift = complex(0.0, 2.0 * math.pi)
    for j in range(height):
        y = y1 - (j + 0.5) * dy
        for i in range(width):
            z = complex(x0 + (i + 0.5) * dx, y)
            k = 0
            while k < max_iter and abs(z.real) <= radius:
                z = z + shift + a * (cmath.exp(z) - 1.0)
                k += 1
            out[j, i] = k
    return out


def escape_counts_jit(x0, x1, y0, y1, width, height, a, max_iter, radius):
    return _escape_counts_jit(float(x0), float(x1), float(y0), float(y1),
                              int(width), int(height), complex(a), int(max_iter), float(radius))


if HAS_NUMBA:
    pairwise_sum = pairwise_sum_jit
    bilinear = bilinear_jit
    escape_counts = escape_counts_jit
    BACKEND = "numba"
else:
    pairwise_sum = pairwise_sum_numpy
    bilinear = bilinear_numpy
    escape_counts = escape_counts_numpy
    BACKEND = "numpy"
