"""Numerics for distortion sequences of wandering domains and the
quasiconformal surgery that perturbs them."""

__version__ = "0.1.0"

from .errors import ConvergenceError, DomainError, QuadratureError, WanderlabError  # noqa: E402
from .kernels import BACKEND  # noqa: E402

__all__ = ["BACKEND", "ConvergenceError", "DomainError", "QuadratureError", "WanderlabError", "__version__"]
