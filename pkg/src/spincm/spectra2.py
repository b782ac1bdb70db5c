"""Two-particle end-to-end reduction: project free plane waves onto
angular modes by quadrature and compare with the closed forms.

In the orthogonal class the relative wavefunction of the mode with
angular index nu is proportional to sqrt(r) J_nu(kappa r) and the
inverse-square coupling is nu^2 - 1/4; in the unitary class the
spherical-harmonic projection gives P_l^m(kappa_1/kappa) j_l(kappa r)
with coupling l(l+1).  ``kappa`` is the effective relative wavenumber
sqrt(Tr(k^2)/2) of the traceless part k of the wave matrix: with that
normalization the energy split E_CM + E_rel = Tr(K^2)/2 is exact and
the quadrature projections match the Bessel forms with no stray
factors.
"""

from dataclasses import dataclass, field

import numpy as np

from .liealg import ORTHOGONAL, UNITARY, SymmetryClass
from .numerics import bessel_j, gauss_legendre, legendre, spherical_harmonic, spherical_j


@dataclass(frozen=True)
class PlaneWaveParams:
    """Derived invariants of a 2x2 Hermitian wave matrix K.

    kappa = sqrt(Tr(k^2)/2) with k = K - Tr(K)/2 the traceless part;
    phase is the angle phi_k with cos(phi_k) = (K_11 - K_22)/(2 kappa).
    """

    sym: SymmetryClass
    k_mat: np.ndarray = field(repr=False)
    trace: float
    kappa: float
    phase: float

    @property
    def kappa1(self) -> float:
        """Half the diagonal gap (polar component of the wave vector)."""
        return 0.5 * float((self.k_mat[0, 0] - self.k_mat[1, 1]).real)


def plane_wave_params(sym: SymmetryClass, k_mat) -> PlaneWaveParams:
    """Validate a 2x2 Hermitian wave matrix and derive its invariants."""
    if sym.n != 2:
        raise ValueError("plane-wave projections are defined for two particles")
    k = np.asarray(k_mat, dtype=complex)
    if k.shape != (2, 2) or np.max(np.abs(k - k.conj().T)) > 1e-12:
        raise ValueError("K must be 2x2 Hermitian")
    if sym.kind == ORTHOGONAL and np.max(np.abs(k.imag)) > 1e-12:
        raise ValueError("orthogonal-class K must be real symmetric")
    tr = float(np.trace(k).real)
    tl = k - 0.5 * tr * np.eye(2)
    kappa = float(np.sqrt(max(np.trace(tl @ tl).real, 0.0) / 2.0))
    diag_gap = 0.5 * float((k[0, 0] - k[1, 1]).real)
    if kappa == 0.0:
        phase = 0.0
    elif sym.kind == ORTHOGONAL:
        phase = float(np.arctan2(float(k[0, 1].real), diag_gap))
    else:
        phase = float(np.angle(k[0, 1])) if abs(k[0, 1]) > 0 else 0.0
    return PlaneWaveParams(sym, k, tr, kappa, phase)


def so2_coupling(nu: int) -> float:
    """Inverse-square coupling of the orthogonal-class mode: nu^2 - 1/4."""
    return float(nu) ** 2 - 0.25


def su2_coupling(l: int) -> float:
    """Inverse-square coupling of the unitary-class mode: l(l+1)."""
    return float(l) * (l + 1.0)


def _so2_gap(params: PlaneWaveParams, big_phi):
    """(K'_11 - K'_22)/2 in the rotated frame at doubled angle Phi.

    Equals kappa cos(Phi + phi_k); evaluated directly from the matrix so
    the phase convention is fixed by the frame, not by bookkeeping.
    """
    k = params.k_mat
    diag_gap = float((k[0, 0] - k[1, 1]).real)
    off = float(k[0, 1].real)
    return 0.5 * diag_gap * np.cos(big_phi) - off * np.sin(big_phi)


def so2_project(params: PlaneWaveParams, nu: int, r_grid, n_quad: int = 256) -> np.ndarray:
    """Angular Fourier projection of the orthogonal-class plane wave.

    psi_nu(r) = int_0^{2pi} e^{-i nu Phi} exp(i Tr(K U^T D U)) dPhi with
    D = diag(r/2, -r/2); the integrand equals
    e^{-i nu Phi} e^{i kappa cos(Phi + phi_k) r} and is integrated with
    the trapezoid rule (spectrally accurate since it is periodic).
    Only integer nu is admitted: for fractional indices the integration
    by parts that diagonalizes the angular operator leaves uncancelled
    boundary terms.
    """
    if not float(nu).is_integer():
        raise ValueError("angular index must be an integer")
    if n_quad < 64:
        raise ValueError("need at least 64 quadrature nodes")
    nu = int(nu)
    r_grid = np.asarray(r_grid, dtype=float)
    phis = np.linspace(0.0, 2.0 * np.pi, n_quad, endpoint=False)
    ang = np.exp(-1j * nu * phis)
    gap = _so2_gap(params, phis)
    out = np.empty(len(r_grid), dtype=complex)
    for i, r in enumerate(r_grid):
        out[i] = np.sum(ang * np.exp(1j * gap * r)) * (2.0 * np.pi / n_quad)
    return out


def so2_reference(params: PlaneWaveParams, nu: int, r_grid) -> np.ndarray:
    """Closed form 2 pi i^nu e^{i nu phi_k} J_nu(kappa r)."""
    r_grid = np.asarray(r_grid, dtype=float)
    pref = 2.0 * np.pi * (1j ** nu) * np.exp(1j * nu * params.phase)
    vals = np.array([bessel_j(abs(nu), params.kappa * r) for r in r_grid])
    if nu < 0 and nu % 2:
        vals = -vals
    return pref * vals


def _su2_gap(params: PlaneWaveParams, theta, phi):
    """(K'_11 - K'_22)/2 in the frame at doubled polar angle theta.

    The frame is U = [[c, -s e^{-i phi}], [s e^{i phi}, c]] with
    c = cos(theta/2), s = sin(theta/2); broadcasts over array angles.
    """
    k = params.k_mat
    diag_gap = float((k[0, 0] - k[1, 1]).real)
    off = k[0, 1]
    return 0.5 * (np.cos(theta) * diag_gap
                  - 2.0 * np.sin(theta) * (off * np.exp(1j * np.asarray(phi))).real)


def su2_project(params: PlaneWaveParams, l: int, m: int, r_grid,
                n_quad: int = 128) -> np.ndarray:
    """Spherical-harmonic projection of the unitary-class plane wave.

    psi_{l,m}(r) = int Y*_{l,m}(theta, phi) exp(i Tr(K U+ D U))
    sin(theta) dtheta dphi with D = diag(r/2, -r/2), Gauss-Legendre in
    cos(theta) and the trapezoid rule in phi.  Requires kappa > 0 (a
    nondegenerate relative direction).
    """
    if abs(m) > l:
        raise ValueError("need |m| <= l")
    if params.sym.kind != UNITARY:
        raise ValueError("spherical projection belongs to the unitary class")
    if params.kappa == 0.0:
        raise ValueError("kappa = 0: no relative direction to project")
    if n_quad < 64:
        raise ValueError("need at least 64 quadrature nodes")
    rule = gauss_legendre(n_quad)
    thetas = np.arccos(rule.nodes)[:, None]
    phis = np.linspace(0.0, 2.0 * np.pi, n_quad, endpoint=False)[None, :]
    dphi = 2.0 * np.pi / n_quad
    ylm_conj = np.array([[spherical_harmonic(l, m, float(th), float(ph)).conjugate()
                          for ph in phis[0]] for th in thetas[:, 0]])
    gap = _su2_gap(params, thetas, phis)
    r_grid = np.asarray(r_grid, dtype=float)
    out = np.empty(len(r_grid), dtype=complex)
    for i, r in enumerate(r_grid):
        out[i] = np.sum(rule.weights[:, None] * ylm_conj * np.exp(1j * gap * r)) * dphi
    return out


def su2_reference_shape(params: PlaneWaveParams, l: int, m: int, r_grid) -> np.ndarray:
    """Reference radial shape P_l^|m|(kappa_1/kappa) j_l(kappa r).

    Proportionality constants are convention-laden, so downstream tests
    assert only that the projection over this shape is r-independent.
    """
    arg = params.kappa1 / params.kappa
    weight = legendre(l, abs(m), arg, kind="P")
    return weight * np.array([spherical_j(l, params.kappa * r)
                              for r in np.asarray(r_grid, float)])


def energy_split(params: PlaneWaveParams) -> tuple:
    """(E_CM, E_rel) = (Tr(K)^2 / 4, kappa^2); their sum is Tr(K^2)/2."""
    return 0.25 * params.trace ** 2, params.kappa ** 2


def radial_ode_residual(values, r_grid, coupling: float, e_rel: float,
                        weight_power: float = 0.5) -> float:
    """Finite-difference residual of the reduced radial equation.

    Checks (-d^2/dr^2 + coupling/r^2) u = E_rel u on interior nodes for
    u = r^weight_power psi(r); the weight is the square root of the
    repulsion density, r^(alpha/2): 1/2 for the orthogonal class and 1
    for the unitary one.  The grid must be uniform.
    """
    r = np.asarray(r_grid, dtype=float)
    h = r[1] - r[0]
    if np.max(np.abs(np.diff(r) - h)) > 1e-12 * h:
        raise ValueError("radial grid must be uniform")
    u = r ** weight_power * np.asarray(values)
    d2 = (u[:-2] - 2.0 * u[1:-1] + u[2:]) / h ** 2
    resid = -d2 + (coupling / r[1:-1] ** 2) * u[1:-1] - e_rel * u[1:-1]
    return float(np.max(np.abs(resid)) / np.max(np.abs(e_rel * u[1:-1])))
