"""Self-contained dense kernels and special functions.

Everything downstream (Lie-algebra audits, matrix flows, reduction
geometry, angular eigenproblems) is built on this layer: a symmetric
eigensolver with a deterministic convention, Gauss-Legendre quadrature,
a fixed-step RK4 integrator, a truncated-series matrix exponential, and
the special functions needed by the closed-form spectra (Bessel,
digamma, Legendre P/Q, Hermite, Laguerre, spherical harmonics).
"""

from .eigen import EigenDecomposition, EigenSolveError, herm_eig, jacobi_eig, sym_eig
from .matfunc import expm
from .odes import rk4
from .quadrature import QuadratureRule, gauss_legendre
from .specfun import (
    bessel_j,
    digamma,
    hermite,
    laguerre,
    legendre,
    spherical_harmonic,
    spherical_j,
)

__all__ = [
    "EigenDecomposition",
    "EigenSolveError",
    "QuadratureRule",
    "bessel_j",
    "digamma",
    "expm",
    "gauss_legendre",
    "herm_eig",
    "hermite",
    "jacobi_eig",
    "laguerre",
    "legendre",
    "rk4",
    "spherical_harmonic",
    "spherical_j",
    "sym_eig",
]
