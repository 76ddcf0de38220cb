"""Forward compositions of disk self-maps fixing 0 and their distortion sequences.

Three closed-form families are supported:

* ``linear``      z -> c_n z
* ``blaschke``    z -> z (z + c_n) / (1 + conj(c_n) z)
* ``polynomial``  z -> c_n z + b_n z^2 on the invariant subdisk ``|z| < radius``

Whether a system is contracting depends on the tail of
``sum(1 - |g_n'(0)|)``, which no finite computation can see; each system
therefore carries an analytic :class:`Tail` descriptor.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError
from .hyperbolic import hyp_dist

_UNIT_TOL = 1e-12


class Tail(str, enum.Enum):
    SUM_DIVERGES = "sum-diverges"
    SUM_CONVERGES = "sum-converges"
    EVENTUALLY_ONE = "eventually-one"
    UNKNOWN = "unknown"


class Label(str, enum.Enum):
    CONTRACTING = "contracting"
    EVENTUALLY_ISOMETRIC = "eventually-isometric"
    SEMI_CONTRACTING = "semi-contracting"
    INCONCLUSIVE = "inconclusive"


def _as_rule(c) -> Callable[[int], complex]:
    if callable(c):
        return c
    value = complex(c)
    return lambda n: value


@dataclass(frozen=True)
class InnerSystem:
    family: str
    coeff: Callable[[int], complex]
    quad: Callable[[int], complex] | None = None
    radius: float = 1.0
    tail: Tail = Tail.UNKNOWN

    def __post_init__(self):
        if self.family not in ("linear", "blaschke", "polynomial"):
            raise DomainError(f"unknown family {self.family!r}")
        if not 0.0 < self.radius <= 1.0:
            raise DomainError(f"invariant radius must lie in (0, 1], got {self.radius}")
        if self.family != "polynomial" and self.radius != 1.0:
            raise DomainError("only polynomial systems use an invariant subdisk")
        object.__setattr__(self, "tail", Tail(self.tail))

    @classmethod
    def linear(cls, c, tail=Tail.UNKNOWN):
        return cls("linear", _as_rule(c), tail=tail)

    @classmethod
    def blaschke(cls, c, tail=Tail.UNKNOWN):
        return cls("blaschke", _as_rule(c), tail=tail)

    @classmethod
    def polynomial(cls, c, b, radius, tail=Tail.UNKNOWN):
        return cls("polynomial", _as_rule(c), _as_rule(b), float(radius), tail)

    def map(self, n: int) -> Callable[[complex], complex]:
        """The n-th map g_n (n >= 1), validated against its domain."""
        c = complex(self.coeff(n))
        if self.family == "linear":
            if abs(c) > 1.0 + _UNIT_TOL:
                raise DomainError(f"g_{n}(z) = {c}z leaves the unit disk")
            return lambda z: c * z
        if self.family == "blaschke":
            if not abs(c) < 1.0:
                raise DomainError(f"Blaschke parameter c_{n} = {c} must lie in the unit disk")
            cc = c.conjugate()
            return lambda z: z * (z + c) / (1.0 + cc * z)
        b = complex(self.quad(n))
        r = self.radius
        # |c z + b z^2| <= (|c| + |b| r) r on |z| = r
        if abs(c) + abs(b) * r > 1.0 + _UNIT_TOL:
            raise DomainError(
                f"g_{n}(z) = {c}z + {b}z^2 does not map |z| < {r} into itself")
        return lambda z: c * z + b * z * z

    def derivative_at_zero(self, n: int) -> complex:
        self.map(n)
        return complex(self.coeff(n))


@dataclass(frozen=True)
class DistortionSequence:
    entries: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=np.complex128).ravel()
        if np.any(np.abs(e) > 1.0 + _UNIT_TOL):
            raise DomainError("distortion sequence entries must satisfy |alpha_n| <= 1")
        object.__setattr__(self, "entries", e)

    @property
    def N(self) -> int:
        return self.entries.size

    def __len__(self):
        return self.entries.size

    def __getitem__(self, i):
        return self.entries[i]


def distortion_sequence(system: InnerSystem, N: int) -> DistortionSequence:
    """``(g_1'(0), ..., g_N'(0))``."""
    if N < 1:
        raise DomainError("horizon must be >= 1")
    return DistortionSequence(np.array([system.derivative_at_zero(n) for n in range(1, N + 1)]))


def classify(seq: DistortionSequence, tail: Tail) -> Label:
    """Contracting / eventually isometric / semi-contracting, on the moduli.

    The computed entries are only used as a consistency check on the
    descriptor: an ``eventually-one`` tail needs a unimodular final entry and a
    ``sum-converges`` tail needs at least one entry of modulus below one.
    """
    tail = Tail(tail)
    mods = np.abs(seq.entries)
    if tail is Tail.SUM_DIVERGES:
        return Label.CONTRACTING
    if tail is Tail.EVENTUALLY_ONE:
        if mods.size and abs(mods[-1] - 1.0) <= _UNIT_TOL:
            return Label.EVENTUALLY_ISOMETRIC
        return Label.INCONCLUSIVE
    if tail is Tail.SUM_CONVERGES:
        if np.any(mods < 1.0 - _UNIT_TOL):
            return Label.SEMI_CONTRACTING
        return Label.INCONCLUSIVE
    return Label.INCONCLUSIVE


def track_pair(system: InnerSystem, z: complex, w: complex, N: int) -> np.ndarray:
    """``d_n = dist(G_n z, G_n w)`` for n = 1..N with ``G_n = g_n o ... o g_1``.

    Distances are measured in the hyperbolic metric of the system's domain
    (the unit disk, or ``|z| < radius`` for polynomial systems), where
    Schwarz-Pick makes the sequence nonincreasing.
    """
    if z == w:
        raise DomainError("track_pair needs distinct points")
    r = system.radius
    for name, p in (("z", z), ("w", w)):
        if not abs(p) < r:
            raise DomainError(f"{name} = {p!r} is outside the domain |z| < {r}")
    out = np.empty(N)
    zn, wn = complex(z), complex(w)
    for n in range(1, N + 1):
        g = system.map(n)
        zn, wn = complex(g(zn)), complex(g(wn))
        if not (abs(zn) < r and abs(wn) < r):
            raise DomainError(f"orbit left the domain |z| < {r} at step {n}")
        out[n - 1] = hyp_dist(zn / r, wn / r)
    return out
