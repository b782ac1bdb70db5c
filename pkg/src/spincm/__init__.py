"""spincm: a numerical laboratory for the spin Calogero-Moser reduction.

The package simulates the free Hermitian/symmetric matrix flow and its
reduction to interacting inverse-square particles with internal pair
charges, verifies the geometric identities of the corresponding quantum
reduction chart, and reproduces the closed-form and truncated-basis
spectra for two and three particles in the orthogonal (alpha=1) and
unitary (alpha=2) symmetry classes.

Subpackages and modules
-----------------------
numerics    dense kernels and special functions (self-contained)
liealg      generator bases, structure constants, defining representation
matrixflow  classical flow, reduction, cross-checks
geometry    chart Jacobian, metric, determinant and divergence identities
spectra2    two-particle projections against Bessel/Legendre closed forms
angular3    three-particle angular sector matrices and reference tables
separation  Jacobi chart, radial/center-of-mass factors, assembled residuals
cli         reproducible reports (CSV/JSON) for all of the above
"""

from .liealg import ORTHOGONAL, UNITARY, SymmetryClass

__version__ = "0.1.0"

__all__ = ["ORTHOGONAL", "UNITARY", "SymmetryClass", "__version__"]
