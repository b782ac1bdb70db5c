"""Matrix exponential by scaling-and-squaring of the truncated series."""

import numpy as np


def expm(m: np.ndarray, tol: float = 1e-14) -> np.ndarray:
    """exp(M) for a small dense matrix.

    The argument is scaled by 2**-s so its norm is below 1/2, the
    exponential series is summed until the term norm drops below
    ``tol``, and the result is squared s times.  Adequate for the
    desk-scale matrices used here; no Pade machinery.
    """
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    n = m.shape[0]
    norm = np.linalg.norm(m, np.inf)
    s = max(0, int(np.ceil(np.log2(norm / 0.5))) if norm > 0.5 else 0)
    a = m / (2.0 ** s)
    out = np.eye(n, dtype=a.dtype)
    term = np.eye(n, dtype=a.dtype)
    for k in range(1, 60):
        term = term @ a / k
        out = out + term
        if np.linalg.norm(term, np.inf) < tol:
            break
    for _ in range(s):
        out = out @ out
    return out
