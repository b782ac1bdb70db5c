"""Dense symmetric/Hermitian eigensolvers with a fixed convention.

``sym_eig`` is the production path (LAPACK via numpy behind the module
contract: ascending eigenvalues, sign-fixed orthonormal eigenvectors,
validated residuals).  ``jacobi_eig`` is an independent cyclic
Jacobi-rotation implementation kept as a cross-checking oracle for
small matrices, and ``herm_eig`` handles complex Hermitian input
through the standard real-symmetric doubling.
"""

from dataclasses import dataclass

import numpy as np


class EigenSolveError(RuntimeError):
    """Raised when input violates symmetry or residuals fail validation."""


@dataclass(frozen=True)
class EigenDecomposition:
    """Ascending eigenvalues and orthonormal eigenvector columns."""

    values: np.ndarray
    vectors: np.ndarray


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    """Make the largest-magnitude component of each column positive."""
    out = vectors.copy()
    for k in range(out.shape[1]):
        i = np.argmax(np.abs(out[:, k]))
        if out[i, k] < 0:
            out[:, k] = -out[:, k]
    return out


def sym_eig(m: np.ndarray, tol: float = 1e-10) -> EigenDecomposition:
    """Diagonalize a real symmetric matrix.

    Parameters
    ----------
    m : ndarray
        Real square matrix, symmetric to within ``tol`` (relative to
        its norm).
    tol : float
        Symmetry tolerance and residual validation threshold.

    Returns
    -------
    EigenDecomposition
        Values ascending; the sign of each eigenvector is fixed by
        making its largest-magnitude component positive, so the
        decomposition is deterministic.

    Raises
    ------
    EigenSolveError
        If the input is not symmetric within ``tol`` or the residual
        ``|M v - w v|`` exceeds ``tol * |M|``.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise EigenSolveError(f"expected a square matrix, got shape {m.shape}")
    scale = max(np.linalg.norm(m), 1.0)
    asym = np.max(np.abs(m - m.T))
    if asym > tol * scale:
        raise EigenSolveError(f"matrix not symmetric: asymmetry {asym:.3e}")
    sym = 0.5 * (m + m.T)
    values, vectors = np.linalg.eigh(sym)
    vectors = _fix_signs(vectors)
    resid = np.max(np.abs(sym @ vectors - vectors * values))
    if resid > tol * scale:
        raise EigenSolveError(f"eigen residual {resid:.3e} above {tol * scale:.3e}")
    return EigenDecomposition(values, vectors)


def jacobi_eig(m: np.ndarray, tol: float = 1e-13, max_sweeps: int = 60) -> EigenDecomposition:
    """Cyclic Jacobi-rotation eigensolver (independent oracle).

    Rotations are applied in row-cyclic order until every off-diagonal
    entry is below ``tol`` times the matrix norm.  Orthogonality of the
    accumulated rotations holds unconditionally; use this to cross-check
    ``sym_eig`` on small matrices.
    """
    a = np.array(m, dtype=float)
    n = a.shape[0]
    if not np.allclose(a, a.T, atol=1e-12 * max(np.linalg.norm(a), 1.0)):
        raise EigenSolveError("matrix not symmetric")
    v = np.eye(n)
    scale = max(np.linalg.norm(a), 1.0)
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.tril(a, -1) ** 2))
        if off < tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) < 1e-300:
                    continue
                theta = 0.5 * (a[q, q] - a[p, p]) / a[p, q]
                t = np.sign(theta) / (abs(theta) + np.hypot(1.0, theta)) if theta != 0 else 1.0
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                rp, rq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                cp, cq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * cp - s * cq
                a[:, q] = s * cp + c * cq
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    else:
        off = np.sqrt(np.sum(np.tril(a, -1) ** 2))
        raise EigenSolveError(f"Jacobi sweep cap reached, off-norm {off:.3e}")
    values = np.diag(a).copy()
    order = np.argsort(values)
    return EigenDecomposition(values[order], _fix_signs(v[:, order]))


def herm_eig(h: np.ndarray, tol: float = 1e-10):
    """Diagonalize a complex Hermitian matrix via real doubling.

    H = A + iB embeds as the real symmetric [[A, -B], [B, A]]; each
    eigenvalue appears twice with eigenvectors (x, y) and (-y, x), both
    encoding v = x + iy.  One representative per pair is kept and its
    phase fixed (largest-magnitude component real positive).

    Returns (values, vectors) with vectors as complex columns.
    """
    h = np.asarray(h, dtype=complex)
    n = h.shape[0]
    scale = max(np.linalg.norm(h), 1.0)
    if np.max(np.abs(h - h.conj().T)) > tol * scale:
        raise EigenSolveError("matrix not Hermitian")
    a, b = h.real, h.imag
    big = np.block([[a, -b], [b, a]])
    dec = sym_eig(big, tol=tol)
    values = dec.values[0::2]
    vectors = np.zeros((n, n), dtype=complex)
    for k in range(n):
        col = dec.vectors[:, 2 * k]
        v = col[:n] + 1j * col[n:]
        v /= np.linalg.norm(v)
        i = np.argmax(np.abs(v))
        v *= np.exp(-1j * np.angle(v[i]))
        vectors[:, k] = v
    resid = np.max(np.abs(h @ vectors - vectors * values))
    if resid > tol * scale:
        raise EigenSolveError(f"Hermitian eigen residual {resid:.3e}")
    return values, vectors
