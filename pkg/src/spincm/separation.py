"""Separation of variables for the component Hamiltonians.

The orthogonal change to Jacobi coordinates splits the eigenvalue
space into center of mass R, hyperradius r, and angles; each component
Hamiltonian

    H_I = sum_i (-1/2 d^2/dD_i^2 + w^2 D_i^2 / 2)
          + (alpha/4) [sum_{k != I} (D_I - D_k)^-2
                       + (alpha - 2) sum_{i<j} (D_i - D_j)^-2]

then separates into a free/harmonic center-of-mass factor, a radial
Bessel/Laguerre factor of order a = sqrt(b^2 + ((N-3)/2)^2), and the
angular eigenproblem with potential (alpha/2) f_{alpha,I} on the
(N-2)-sphere.  For N = 3 the angle is a circle coordinate and the
angular problems are the sector matrices of :mod:`spincm.angular3`;
the repulsive-wall strength produced by this separation is twice the
published sector normalization (coupling=2.0 in that module), which is
what the assembled-eigenfunction residuals verify.

``assemble_and_residual`` builds psi_I = com * radial * angular on a
small Cartesian patch of eigenvalue space away from collisions,
applies H_I with a central-difference Laplacian, and reports the
relative residual; the angular factor is evaluated by locally
integrating the angular equation at the mode's eigenvalue (truncated
Fourier sums converge pointwise but their second derivatives pick up
non-decaying tails from the inverse-square walls, so they cannot pass
a pointwise operator test).
"""

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .angular3 import AngularMode, mode_profile, mode_profile_derivative, sector_potential
from .liealg import SymmetryClass
from .numerics import bessel_j, hermite, laguerre


@dataclass(frozen=True)
class JacobiChart:
    """Orthogonal map D = M (r c_1, r s_1 c_2, ..., sqrt(N) R)."""

    n: int
    m: np.ndarray = field(repr=False)


def jacobi_chart(n: int) -> JacobiChart:
    """Jacobi-coordinate matrix: column j weights 1/sqrt(j(j+1)) on the
    first j rows and -j/sqrt(j(j+1)) on row j+1; last column 1/sqrt(N)."""
    if n < 2:
        raise ValueError("need at least two particles")
    m = np.zeros((n, n))
    for j in range(1, n):
        norm = 1.0 / math.sqrt(j * (j + 1))
        m[:j, j - 1] = norm
        m[j, j - 1] = -j * norm
    m[:, n - 1] = 1.0 / math.sqrt(n)
    return JacobiChart(n, m)


def to_internal(d_vals) -> tuple:
    """Split positions into (R, r, angles).

    R is the mean, r the hyperradius sqrt(sum_i<j (D_i - D_j)^2 / N)
    = sqrt(sum D^2 - N R^2), and the angles are the hyperspherical
    coordinates of the Jacobi vector.  Raises for r = 0 (angles
    undefined at total coincidence).
    """
    d_vals = np.asarray(d_vals, dtype=float)
    n = len(d_vals)
    chart = jacobi_chart(n)
    x = chart.m.T @ d_vals
    r_mean = x[-1] / math.sqrt(n)
    rel = x[:-1]
    r = float(np.linalg.norm(rel))
    if r == 0.0:
        raise ZeroDivisionError("hyperradius vanishes: angles undefined")
    # polar angles on [0, pi] except the last, which covers the circle
    angles = np.zeros(max(n - 2, 0))
    for k in range(n - 3):
        angles[k] = math.atan2(float(np.linalg.norm(rel[k + 1:])), float(rel[k]))
    if n >= 3:
        angles[n - 3] = math.atan2(float(rel[n - 2]), float(rel[n - 3]))
    return float(r_mean), r, angles


def from_internal(n: int, r_mean: float, r: float, angles) -> np.ndarray:
    """Inverse of :func:`to_internal`."""
    angles = np.asarray(angles, dtype=float)
    if len(angles) != max(n - 2, 0):
        raise ValueError(f"need {n - 2} angles for {n} particles")
    rel = np.zeros(n - 1)
    sin_prod = 1.0
    for k in range(n - 2):
        rel[k] = r * sin_prod * math.cos(angles[k])
        sin_prod *= math.sin(angles[k])
    rel[n - 2] = r * sin_prod
    chart = jacobi_chart(n)
    vec = np.concatenate([rel, [math.sqrt(n) * r_mean]])
    return chart.m @ vec


def angular_potential(sym: SymmetryClass, repulsive: int, angles) -> float:
    """The angle function f_{alpha,I} of the component Hamiltonian.

    f = sum_{k != I} (r/(D_I - D_k))^2 + (alpha - 2) sum_{i<j} (r/(D_i - D_j))^2,
    evaluated on the unit hyperradius; the component potential is
    (alpha/2) f / (2 r^2) + harmonic terms.  Scale-invariant in D.
    """
    n = sym.n
    if not 0 <= repulsive < n:
        raise ValueError("repulsive index out of range")
    d_vals = from_internal(n, 0.0, 1.0, angles)
    total = 0.0
    for k in range(n):
        if k == repulsive:
            continue
        gap = d_vals[repulsive] - d_vals[k]
        if gap == 0.0:
            raise ZeroDivisionError("collision angle")
        total += gap ** -2.0
    if sym.alpha != 2:
        for i in range(n):
            for j in range(i + 1, n):
                gap = d_vals[i] - d_vals[j]
                if gap == 0.0:
                    raise ZeroDivisionError("collision angle")
                total += (sym.alpha - 2) * gap ** -2.0
    return total


@lru_cache(maxsize=None)
def chart_shift(kind: str, repulsive: int) -> tuple:
    """Affine map psi = sign*(phi - shift) aligning the three-particle
    chart angle with the frame in which the angular potential takes its
    reference form (orthogonal: -1/(4 sin^2 psi); unitary: the
    coupling-2 double wall singular at 0, 2pi/3, pi, 5pi/3).

    Determined numerically once per (class, repulsive particle) by
    locating the potential's singular angles and checking the candidate
    maps pointwise.
    """
    sym = SymmetryClass(kind, 3)
    alpha = sym.alpha
    target_coupling = 1.0 if kind == "orthogonal" else 2.0
    target = sector_potential(kind, coupling=target_coupling)

    def chart_value(phi):
        return 0.5 * alpha * angular_potential(sym, repulsive, [phi])

    # pair gap (D_i - D_j)/r = v0 cos(phi) + v1 sin(phi) vanishes at
    # atan2(-v0, v1) mod pi: singular angles come out in closed form
    if kind == "orthogonal":
        others = [k for k in range(3) if k != repulsive]
        pairs = [tuple(others)]
    else:
        pairs = [(repulsive, k) for k in range(3) if k != repulsive]
    m = jacobi_chart(3).m
    sing = []
    for (i, j) in pairs:
        v = m[i, :2] - m[j, :2]
        root = math.atan2(-v[0], v[1])
        sing.extend([root % (2.0 * math.pi), (root + math.pi) % (2.0 * math.pi)])
    test = np.array([0.31, 0.97, 1.83, 2.51, 4.03, 5.11])
    for shift in sing:
        for sign in (1.0, -1.0):
            psi = sign * (test - shift)
            ok = True
            for phi_val, psi_val in zip(test, psi):
                if abs(math.sin(psi_val)) < 1e-3 or abs(math.sin(psi_val - 2 * math.pi / 3)) < 1e-3:
                    continue
                try:
                    ref = chart_value(phi_val)
                    diff = ref - float(target(psi_val))
                except ZeroDivisionError:
                    ok = False
                    break
                if abs(diff) > 1e-8 * max(1.0, abs(ref)):
                    ok = False
                    break
            if ok:
                return (sign, float(shift))
    raise ArithmeticError(f"no chart alignment found for {kind}, I={repulsive}")


@dataclass(frozen=True)
class RadialFactor:
    """Radial factor of the separated eigenfunction.

    order = sqrt(b^2 + ((N-3)/2)^2); the free regime carries wavenumber
    k with energy k^2/2, the harmonic regime the node count nu and
    frequency omega with energy omega (2 nu + order + 1).
    """

    n: int
    b: float
    order: float
    regime: str
    energy: float
    k: float = 0.0
    nu: int = 0
    omega: float = 0.0

    def profile(self, r):
        r = np.atleast_1d(np.asarray(r, dtype=float))
        if self.regime == "free":
            pre = r ** (0.5 * (3.0 - self.n))
            bess = np.array([bessel_j(self.order, self.k * ri)
                             for ri in r.ravel()]).reshape(r.shape)
            return pre * bess
        osc_len2 = 1.0 / self.omega
        lag = np.array([laguerre(self.nu, self.order, ri ** 2 / osc_len2)
                        for ri in r.ravel()]).reshape(r.shape)
        return (r ** (self.order - 0.5 * (self.n - 3.0))
                * np.exp(-0.5 * r ** 2 / osc_len2) * lag)


def radial_factor(n: int, b: float, regime: str, k: float = 1.0, nu: int = 0,
                  omega: float = 1.0) -> RadialFactor:
    """Build the radial factor for angular root b (>= 0)."""
    if b < 0:
        raise ValueError("angular root must be >= 0")
    order = math.sqrt(b * b + (0.5 * (n - 3.0)) ** 2)
    if regime == "free":
        return RadialFactor(n, b, order, "free", 0.5 * k * k, k=k)
    if regime == "harmonic":
        if omega <= 0:
            raise ValueError("omega must be positive")
        return RadialFactor(n, b, order, "harmonic",
                            omega * (2.0 * nu + order + 1.0), nu=nu, omega=omega)
    raise ValueError(f"regime must be 'free' or 'harmonic', got {regime!r}")


@dataclass(frozen=True)
class ComFactor:
    """Center-of-mass factor: plane wave or oscillator eigenstate."""

    n: int
    regime: str
    energy: float
    k: float = 0.0
    level: int = 0
    omega: float = 0.0

    def profile(self, r_mean):
        r_mean = np.atleast_1d(np.asarray(r_mean, dtype=float))
        if self.regime == "free":
            return np.exp(1j * self.k * r_mean)
        osc_len = 1.0 / math.sqrt(self.omega)
        xi = math.sqrt(self.n) * r_mean / osc_len
        herm = np.array([hermite(self.level, x) for x in xi.ravel()]).reshape(xi.shape)
        return np.exp(-0.5 * xi ** 2) * herm


def com_factor(n: int, regime: str, k: float = 0.0, level: int = 0,
               omega: float = 1.0) -> ComFactor:
    """Center-of-mass factor; free energy K^2/(2N), harmonic omega(n + 1/2)."""
    if regime == "free":
        return ComFactor(n, "free", 0.5 * k * k / n, k=k)
    if regime == "harmonic":
        if omega <= 0:
            raise ValueError("omega must be positive")
        return ComFactor(n, "harmonic", omega * (level + 0.5), level=level, omega=omega)
    raise ValueError(f"regime must be 'free' or 'harmonic', got {regime!r}")


def component_potential(sym: SymmetryClass, repulsive: int, d_grid: np.ndarray,
                        omega: float = 0.0) -> np.ndarray:
    """Potential of the component Hamiltonian on a grid of D-triples.

    (alpha/4)[sum_{k != I} (D_I - D_k)^-2 + (alpha-2) sum_{i<j} (D_i - D_j)^-2]
    plus omega^2 D^2 / 2 when the harmonic term is on.
    """
    alpha = sym.alpha
    n = sym.n
    total = np.zeros(d_grid.shape[:-1])
    for k in range(n):
        if k == repulsive:
            continue
        total += (d_grid[..., repulsive] - d_grid[..., k]) ** -2.0
    if alpha != 2:
        for i in range(n):
            for j in range(i + 1, n):
                total += (alpha - 2) * (d_grid[..., i] - d_grid[..., j]) ** -2.0
    total *= 0.25 * alpha
    if omega > 0.0:
        total += 0.5 * omega ** 2 * np.sum(d_grid ** 2, axis=-1)
    return total


def _angular_ode_values(kind: str, coupling: float, b: float, psi0: float,
                        f0: float, df0: float, targets: np.ndarray,
                        max_step: float = 2e-5) -> np.ndarray:
    """Integrate Phi'' = (V - b^2) Phi through the sorted target angles.

    RK4 marching from psi0 in both directions, carrying the state
    between consecutive targets; the patch spans a tiny angular range,
    so the cost is negligible and the local error is far below the
    stencil error of the consumers.
    """
    pot = sector_potential(kind, coupling=coupling)
    b2 = b * b

    def accel(psi, val):
        return (float(pot(psi)) - b2) * val

    out = np.empty(len(targets))
    order = np.argsort(targets)
    sorted_t = targets[order]
    split = np.searchsorted(sorted_t, psi0)

    for direction, idxs in ((1, range(split, len(sorted_t))), (-1, range(split - 1, -1, -1))):
        y, dy = f0, df0
        cur = psi0
        for i in idxs:
            tgt = sorted_t[i]
            span = tgt - cur
            nstep = max(1, int(abs(span) / max_step) + 1)
            hh = span / nstep
            for _ in range(nstep):
                k1v, k1d = dy, accel(cur, y)
                k2v, k2d = dy + 0.5 * hh * k1d, accel(cur + 0.5 * hh, y + 0.5 * hh * k1v)
                k3v, k3d = dy + 0.5 * hh * k2d, accel(cur + 0.5 * hh, y + 0.5 * hh * k2v)
                k4v, k4d = dy + hh * k3d, accel(cur + hh, y + hh * k3v)
                y += hh / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v)
                dy += hh / 6.0 * (k1d + 2 * k2d + 2 * k3d + k4d)
                cur += hh
            out[order[i]] = y
    return out


@dataclass(frozen=True)
class GridSpec:
    """Cartesian patch of eigenvalue space around an internal base point."""

    r_mean: float = 0.3
    r: float = 1.3
    psi_center: float | None = None
    points: int = 14


@dataclass(frozen=True)
class ResidualReport:
    residual: float
    energy: float
    min_gap: float
    kind: str
    repulsive: int
    regime: str
    l: int
    points: int
    h: float


def _default_center(kind: str, sector: str) -> float:
    # off the segment midpoints: the low-segment midpoint is the exact
    # (harmless) coincidence of the two non-interacting particles, which
    # the all-pairs collision margin would reject
    if kind == "orthogonal":
        return 0.5 * math.pi + 0.2
    return math.pi / 3.0 + 0.25 if sector == "low" else 5.0 * math.pi / 6.0 + 0.1


def assemble_and_residual(sym: SymmetryClass, repulsive: int, mode: AngularMode,
                          radial: RadialFactor, com: ComFactor, grid: GridSpec,
                          h: float = 1e-3, margin_factor: float = 0.2) -> ResidualReport:
    """Assemble psi_I = com * radial * angular and test it against H_I.

    The patch is a points^3 cube of spacing ``h`` centered on the
    internal base point; H_I is applied with a central-difference
    Laplacian plus the exact potential, and the report carries
    max |(H - E) psi| / max |E psi| over interior nodes.  The grid must
    keep every pair gap above ``margin_factor`` times the hyperradius.
    """
    if sym.n != 3:
        raise ValueError("the assembled residual test is a three-particle check")
    sign, shift = chart_shift(sym.kind, repulsive)
    psi_c = grid.psi_center if grid.psi_center is not None else _default_center(sym.kind, mode.sector)
    phi_c = sign * psi_c + shift

    chart = jacobi_chart(3)
    base = chart.m @ np.array([grid.r * math.cos(phi_c), grid.r * math.sin(phi_c),
                               math.sqrt(3.0) * grid.r_mean])
    offs = (np.arange(grid.points) - grid.points // 2) * h
    d_grid = (base[None, None, None, :]
              + np.stack(np.meshgrid(offs, offs, offs, indexing="ij"), axis=-1))

    gaps = [np.abs(d_grid[..., i] - d_grid[..., j])
            for i in range(3) for j in range(i + 1, 3)]
    min_gap = float(min(np.min(g) for g in gaps))
    x = np.einsum("ji,abcj->abci", chart.m, d_grid)
    r_mean_g = x[..., 2] / math.sqrt(3.0)
    r_g = np.hypot(x[..., 0], x[..., 1])
    if min_gap < margin_factor * float(np.min(r_g)):
        raise ValueError(f"grid touches the collision margin (min gap {min_gap:.3f})")
    phi_g = np.mod(np.arctan2(x[..., 1], x[..., 0]), 2.0 * math.pi)
    # keep the branch cut away from the patch
    if np.max(phi_g) - np.min(phi_g) > math.pi:
        phi_g = np.mod(phi_g + math.pi, 2.0 * math.pi) - math.pi
    psi_g = sign * (phi_g - shift)
    # re-center onto the requested frame angle (branch choice)
    psi_g += 2.0 * math.pi * np.round((psi_c - float(np.mean(psi_g))) / (2.0 * math.pi))

    targets, inverse = np.unique(np.round(psi_g.ravel(), 13), return_inverse=True)
    f0 = float(mode_profile(mode, psi_c))
    df0 = float(mode_profile_derivative(mode, psi_c))
    vals = _angular_ode_values(sym.kind, mode.coupling, mode.b, psi_c, f0, df0, targets)
    ang = vals[inverse].reshape(psi_g.shape)

    psi = com.profile(r_mean_g) * radial.profile(r_g) * ang
    omega = radial.omega if radial.regime == "harmonic" else 0.0
    pot = component_potential(sym, repulsive, d_grid, omega=omega)
    lap = (-6.0 * psi
           + np.roll(psi, 1, 0) + np.roll(psi, -1, 0)
           + np.roll(psi, 1, 1) + np.roll(psi, -1, 1)
           + np.roll(psi, 1, 2) + np.roll(psi, -1, 2)) / h ** 2
    energy = com.energy + radial.energy
    resid = -0.5 * lap + pot * psi - energy * psi
    core = (slice(1, -1),) * 3
    rel = float(np.max(np.abs(resid[core])) / np.max(np.abs(energy * psi[core])))
    return ResidualReport(rel, energy, min_gap, sym.kind, repulsive,
                          radial.regime, mode.l, grid.points, h)


def control_residual(points: int = 14, h: float = 1e-3, kvec=(0.3, 0.7, -0.2)) -> float:
    """FD stencil control: plane wave against the zero-potential operator."""
    base = np.array([0.0, 0.8, 1.9])
    offs = (np.arange(points) - points // 2) * h
    d_grid = (base[None, None, None, :]
              + np.stack(np.meshgrid(offs, offs, offs, indexing="ij"), axis=-1))
    kv = np.asarray(kvec, dtype=float)
    psi = np.exp(1j * d_grid @ kv)
    energy = 0.5 * float(kv @ kv)
    lap = (-6.0 * psi
           + np.roll(psi, 1, 0) + np.roll(psi, -1, 0)
           + np.roll(psi, 1, 1) + np.roll(psi, -1, 1)
           + np.roll(psi, 1, 2) + np.roll(psi, -1, 2)) / h ** 2
    core = (slice(1, -1),) * 3
    resid = -0.5 * lap - energy * psi
    return float(np.max(np.abs(resid[core])) / np.max(np.abs(energy * psi[core])))
