"""Hyperbolic geometry of the unit disk.

Density convention: ``2 / (1 - |z|^2)`` (curvature -1).  The hyperbolic
distortion is a ratio of densities and does not depend on the convention.
"""
import math

from .errors import DomainError


def _check_disk(z, name="z"):
    if not abs(z) < 1.0:
        raise DomainError(f"{name} = {z!r} is not in the unit disk")


def hyp_density(z: complex) -> float:
    _check_disk(z)
    return 2.0 / (1.0 - abs(z) ** 2)


def hyp_dist(z: complex, w: complex) -> float:
    _check_disk(z)
    _check_disk(w, "w")
    delta = abs(z - w) / abs(1.0 - z.conjugate() * w)
    return 2.0 * math.atanh(min(delta, 1.0))


def hyp_distortion(g, dg, z: complex) -> float:
    """``|g'(z)| (1 - |z|^2) / (1 - |g(z)|^2)`` for a disk self-map ``g``
    with derivative ``dg``."""
    _check_disk(z)
    gz = complex(g(z))
    if not abs(gz) < 1.0:
        raise DomainError(f"g({z!r}) = {gz!r} leaves the unit disk")
    return abs(complex(dg(z))) * (1.0 - abs(z) ** 2) / (1.0 - abs(gz) ** 2)
