"""Classical sanity layer: the free Hermitian matrix flow and the
reduced (x, p, L) dynamics obtained by diagonalizing it.

The free flow X(t) = X0 + t*Y0 is exact; diagonalizing X(t) and
reading off eigenvalues x, diagonal momenta p = diag(U Y U+), and the
pair charges L = [D, U Y U+] gives the interacting inverse-square
system.  Integrating the closed (x, p, L) equations with RK4 and
comparing positions against the exact flow is the module's core
cross-check; H, total momentum, and Tr L^2 are monitored for drift.

Units are hbar = m = 1 throughout.
"""

from dataclasses import dataclass, field

import numpy as np

from .liealg import ORTHOGONAL, SymmetryClass
from .numerics import herm_eig, rk4, sym_eig


class CollisionError(RuntimeError):
    """Raised when eigenvalues approach within the configured guard."""


@dataclass(frozen=True)
class FreeState:
    """A point (X, Y) of the free matrix phase space."""

    sym: SymmetryClass
    x_mat: np.ndarray = field(repr=False)
    y_mat: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class ReducedState:
    """Reduced variables: positions x (ascending), momenta p, charges L.

    L is anti-Hermitian with zero diagonal; in the orthogonal class it
    is kept exactly real antisymmetric by representation.
    """

    sym: SymmetryClass
    x: np.ndarray
    p: np.ndarray
    l_mat: np.ndarray = field(repr=False)


def _hermitize(m, kind):
    if kind == ORTHOGONAL:
        return 0.5 * (m + m.T)
    return 0.5 * (m + m.conj().T)


def _spectrum_gap(x_mat):
    vals = np.linalg.eigvalsh(x_mat)
    return float(np.min(np.diff(np.sort(vals)))) if len(vals) > 1 else np.inf


def sample_free_state(sym: SymmetryClass, seed: int, gap: float = 0.1,
                      max_tries: int = 1000) -> FreeState:
    """Draw a seeded Gaussian free state whose X-spectrum gap exceeds ``gap``.

    Deterministic per seed; resamples until the gap condition holds and
    raises if the cap is exceeded.
    """
    if gap <= 0:
        raise ValueError("gap must be positive")
    rng = np.random.default_rng(seed)
    n = sym.n
    for _ in range(max_tries):
        if sym.kind == ORTHOGONAL:
            x = _hermitize(rng.normal(size=(n, n)), sym.kind)
            y = _hermitize(rng.normal(size=(n, n)), sym.kind)
        else:
            x = _hermitize(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)), sym.kind)
            y = _hermitize(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)), sym.kind)
        if _spectrum_gap(x) >= gap:
            return FreeState(sym, x, y)
    raise RuntimeError(f"no sample with spectral gap >= {gap} after {max_tries} tries")


def free_evolve(state: FreeState, t: float) -> FreeState:
    """Exact free flow: (X, Y) -> (X + tY, Y)."""
    return FreeState(state.sym, state.x_mat + t * state.y_mat, state.y_mat)


def free_energy(state: FreeState, harmonic: bool = False) -> float:
    """Tr(Y^2)/2, plus Tr(X^2)/2 with the harmonic term switched on."""
    e = 0.5 * float(np.trace(state.y_mat @ state.y_mat).real)
    if harmonic:
        e += 0.5 * float(np.trace(state.x_mat @ state.x_mat).real)
    return e


def reduce_state(state: FreeState, eps: float = 1e-8) -> ReducedState:
    """Diagonalize X and read off the reduced (x, p, L) variables.

    x are the ascending eigenvalues, V = U Y U+ the momentum matrix in
    the diagonalizing frame, p = diag(V), and L = [D, V].  Fails when
    the spectrum gap is below ``eps`` (the reduction is defined away
    from eigenvalue coincidence).
    """
    kind = state.sym.kind
    if kind == ORTHOGONAL:
        dec = sym_eig(state.x_mat)
        vals, vecs = dec.values, dec.vectors
    else:
        vals, vecs = herm_eig(state.x_mat)
    if np.min(np.diff(vals)) < eps:
        raise CollisionError(f"spectrum gap {np.min(np.diff(vals)):.3e} below guard {eps:.1e}")
    u = vecs.conj().T           # U X U+ = D
    v = u @ state.y_mat @ u.conj().T
    p = v.diagonal().real.copy()
    l = vals[:, None] * v - v * vals[None, :]
    if kind == ORTHOGONAL:
        l = l.real.copy()
    return ReducedState(state.sym, vals.copy(), p, l)


def hamiltonian(state: ReducedState, harmonic: bool = False) -> float:
    """H = p^2/2 - sum_{i!=j} L_ij L_ji / (2 (x_i - x_j)^2) (+ x^2/2)."""
    x, p, l = state.x, state.p, state.l_mat
    dx = x[:, None] - x[None, :]
    np.fill_diagonal(dx, np.inf)
    inter = -0.5 * float(np.sum((l * l.T).real / dx ** 2))
    h = 0.5 * float(np.sum(p ** 2)) + inter
    if harmonic:
        h += 0.5 * float(np.sum(x ** 2))
    return h


def charge_norm(state: ReducedState) -> float:
    """Tr(L^2), conserved by the isospectral flow (negative for L != 0)."""
    return float(np.trace(state.l_mat @ state.l_mat).real)


def reduced_rhs(state: ReducedState, harmonic: bool = False) -> ReducedState:
    """Time derivative of the reduced variables.

    xdot_i = p_i
    pdot_i = sum_{k != i} -2 L_ik L_ki / (x_i - x_k)^3   (- x_i if harmonic)
    Ldot_ij = sum_{k != i,j} L_ik L_kj ((x_i-x_k)^-2 - (x_j-x_k)^-2)
    """
    x, p, l = state.x, state.p, state.l_mat
    n = len(x)
    dx = x[:, None] - x[None, :]
    np.fill_diagonal(dx, np.inf)
    if np.min(np.abs(dx[np.isfinite(dx)])) == 0.0:
        raise CollisionError("coincident positions in reduced_rhs")
    inv2 = dx ** -2.0
    pdot = -2.0 * np.sum((l * l.T).real * dx ** -3.0, axis=1)
    if harmonic:
        pdot = pdot - x
    # Ldot_ij = sum_k L_ik inv2_ik L_kj - L_ik inv2_kj L_kj, k != i, j;
    # the k = i and k = j terms cancel between the two sums since diag L = 0.
    ldot = (l * inv2) @ l - l @ (inv2 * l)
    np.fill_diagonal(ldot, 0.0)
    if state.sym.kind == ORTHOGONAL:
        ldot = ldot.real
    return ReducedState(state.sym, p.copy(), pdot, ldot)


def _pack(state: ReducedState) -> np.ndarray:
    n = state.sym.n
    iu = np.triu_indices(n, 1)
    if state.sym.kind == ORTHOGONAL:
        return np.concatenate([state.x, state.p, state.l_mat[iu]])
    return np.concatenate([state.x, state.p, state.l_mat[iu].real, state.l_mat[iu].imag])


def _unpack(sym: SymmetryClass, y: np.ndarray) -> ReducedState:
    n = sym.n
    iu = np.triu_indices(n, 1)
    x, p = y[:n], y[n:2 * n]
    d = n * (n - 1) // 2
    if sym.kind == ORTHOGONAL:
        l = np.zeros((n, n))
        l[iu] = y[2 * n:2 * n + d]
        l = l - l.T
    else:
        upper = y[2 * n:2 * n + d] + 1j * y[2 * n + d:2 * n + 2 * d]
        l = np.zeros((n, n), dtype=complex)
        l[iu] = upper
        l = l - l.conj().T
    return ReducedState(sym, x, p, l)


@dataclass(frozen=True)
class IntegrationReport:
    """Final state plus conservation drift over the trajectory."""

    state: ReducedState
    h_drift: float
    momentum_drift: float
    charge_drift: float


def integrate_reduced(state: ReducedState, t: float, steps: int,
                      harmonic: bool = False, collision_gap: float = 1e-6) -> IntegrationReport:
    """RK4 trajectory of the reduced equations with conservation monitoring.

    Aborts with a time-stamped :class:`CollisionError` if the minimum
    position gap falls below ``collision_gap`` along the way.
    """
    sym = state.sym
    h0 = hamiltonian(state, harmonic)
    p0 = float(np.sum(state.p))
    c0 = charge_norm(state)

    def rhs(_t, yv):
        s = _unpack(sym, yv)
        if np.min(np.diff(np.sort(s.x))) < collision_gap:
            raise CollisionError(f"position gap below {collision_gap:.1e} at t={_t:.6f}")
        return _pack(reduced_rhs(s, harmonic))

    out = _unpack(sym, rk4(rhs, _pack(state), 0.0, t, steps))
    return IntegrationReport(
        out,
        abs(hamiltonian(out, harmonic) - h0),
        abs(float(np.sum(out.p)) - p0),
        abs(charge_norm(out) - c0),
    )


@dataclass(frozen=True)
class CrossCheckReport:
    """Agreement between the exact flow and the integrated reduced ODEs."""

    max_position_error: float
    h_drift: float
    charge_drift: float
    times: np.ndarray
    passed: bool


def cross_check(state0: FreeState, t: float, steps: int, samples: int = 8,
                tol: float = 1e-6) -> CrossCheckReport:
    """Compare eigenvalues of the exact flow with the RK4-reduced positions.

    The exact route evolves (X, Y) linearly and diagonalizes at sample
    times; the reduced route integrates (x, p, L).  PASS iff the max
    position discrepancy over the samples is below ``tol``.
    """
    red = reduce_state(state0)
    h0 = hamiltonian(red)
    c0 = charge_norm(red)
    times = np.linspace(0.0, t, samples + 1)[1:]
    err = 0.0
    cur = red
    cur_t = 0.0
    h_drift = 0.0
    c_drift = 0.0
    for tk in times:
        nsub = max(1, int(round(steps * (tk - cur_t) / t)))
        rep = integrate_reduced(cur, tk - cur_t, nsub)
        cur = rep.state
        cur_t = tk
        exact = reduce_state(free_evolve(state0, tk))
        err = max(err, float(np.max(np.abs(cur.x - exact.x))))
        h_drift = max(h_drift, abs(hamiltonian(cur) - h0))
        c_drift = max(c_drift, abs(charge_norm(cur) - c0))
    return CrossCheckReport(err, h_drift, c_drift, times, err < tol)


def trajectory_rows(state: ReducedState, t: float, steps: int, samples: int,
                    harmonic: bool = False) -> list:
    """Sampled trajectory rows (t, x_1..x_N, p_1..p_N, H, TrL2) for reports."""
    rows = []
    cur = state
    cur_t = 0.0

    def row(tt, s):
        return [tt, *s.x.tolist(), *s.p.tolist(), hamiltonian(s, harmonic), charge_norm(s)]

    rows.append(row(0.0, cur))
    for k in range(1, samples + 1):
        tk = t * k / samples
        nsub = max(1, int(round(steps * (tk - cur_t) / t)))
        cur = integrate_reduced(cur, tk - cur_t, nsub, harmonic).state
        cur_t = tk
        rows.append(row(tk, cur))
    return rows
