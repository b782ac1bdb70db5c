"""Three-particle angular eigenproblems on the relative-angle circle.

After separating the center of mass and the hyperradius, the
three-particle component Hamiltonians reduce to one angular equation

    (-d^2/dphi^2 + V(phi)) Phi = b^2 Phi,

with V = -1/(4 sin^2 phi) in the orthogonal class (attraction from the
pair not containing the repulsive particle) and, in the unitary class,
a repulsive pair of inverse-square walls singular at
phi = 0, 2pi/3, pi, 5pi/3 that splits the circle into long ("low") and
short ("high") segments.  Truncated sine-series matrices turn each
sector into a finite symmetric eigenproblem; the published reference
values for dim=100 are frozen in REFERENCE_TABLE_* for comparison.

The unitary matrices carry a ``coupling`` knob multiplying the wall
strength: coupling=1.0 is the published eigenproblem behind the
reference table, while coupling=2.0 is the strength actually produced
by the separation of the component Hamiltonians (see
:mod:`spincm.separation`, which consumes those modes for the assembled
eigenfunction residuals).
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .numerics import digamma, gauss_legendre, legendre, sym_eig

SQRT3 = math.sqrt(3.0)

#: Published dim=100 reference rows: p -> (db_odd, dpsi_odd, db_even, dpsi_even).
REFERENCE_TABLE_ORTHOGONAL = {
    1: (-0.39, 0.12, -0.38, 0.15),
    2: (-0.38, 0.20, -0.37, 0.22),
    3: (-0.37, 0.24, -0.36, 0.25),
    4: (-0.36, 0.25, -0.36, 0.26),
    5: (-0.36, 0.26, -0.35, 0.26),
    6: (-0.35, 0.27, -0.35, 0.27),
    7: (-0.35, 0.27, -0.35, 0.27),
    8: (-0.34, 0.27, -0.34, 0.27),
    9: (-0.34, 0.27, -0.34, 0.27),
    10: (-0.34, 0.27, -0.34, 0.27),
}

#: Published dim=100 reference rows: l -> (db_low, db_high, dpsi).
REFERENCE_TABLE_UNITARY = {
    1: (0.35, 0.58, 0.05),
    2: (0.33, 0.60, 0.07),
    3: (0.33, 0.61, 0.10),
    4: (0.32, 0.61, 0.11),
    5: (0.32, 0.61, 0.12),
    6: (0.32, 0.61, 0.13),
    7: (0.32, 0.62, 0.14),
    8: (0.32, 0.62, 0.14),
    9: (0.32, 0.62, 0.14),
    10: (0.32, 0.62, 0.15),
}


@dataclass(frozen=True)
class SectorProblem:
    """A truncated sector eigenproblem M a = b^2 a.

    sector is "odd"/"even" (orthogonal) or "low"/"high" (unitary);
    ``exact`` marks unitary matrices built from the full wall integrals
    rather than the large-index approximation, and ``coupling`` scales
    the unitary wall strength (1.0 = published).
    """

    kind: str
    sector: str
    dim: int
    matrix: np.ndarray = field(repr=False)
    exact: bool = False
    coupling: float = 1.0


@dataclass(frozen=True)
class AngularMode:
    """One angular eigenpair of a sector problem.

    b is the positive root of the eigenvalue, coeffs the unit Fourier
    coefficient vector (dominant component positive), delta_b the
    offset from the sector baseline, and delta_psi_norm the
    non-dominant weight sqrt(1 - a_dom^2).
    """

    kind: str
    sector: str
    l: int
    b: float
    coeffs: np.ndarray = field(repr=False)
    delta_b: float
    delta_psi_norm: float
    coupling: float = 1.0

    @property
    def baseline(self) -> float:
        return _baseline(self.sector, self.l)


def _baseline(sector: str, l: int) -> float:
    if sector in ("odd", "even"):
        return float(l)
    if sector == "low":
        return 1.5 * l
    if sector == "high":
        return 3.0 * l
    raise ValueError(f"unknown sector {sector!r}")


def _fourier_index(sector: str, position: int) -> int:
    """Mode label carried by basis slot ``position`` (1-based slot)."""
    if sector == "odd":
        return 2 * position - 1
    if sector == "even":
        return 2 * position
    return position


def orthogonal_sector_matrix(sector: str, dim: int) -> SectorProblem:
    """Sine-series matrices of the attractive orthogonal problem.

    odd:  diag (2p-1)^2 - p + 1/2, off-diagonal -(min(p,q) - 1/2)
    even: diag (2p)^2 - p,         off-diagonal -min(p,q)
    """
    if sector not in ("odd", "even"):
        raise ValueError(f"orthogonal sectors are 'odd'/'even', got {sector!r}")
    if dim < 4:
        raise ValueError("need dim >= 4")
    p = np.arange(1, dim + 1, dtype=float)
    mins = np.minimum(p[:, None], p[None, :])
    if sector == "odd":
        mat = -(mins - 0.5)
        np.fill_diagonal(mat, (2 * p - 1) ** 2 - p + 0.5)
    else:
        mat = -mins
        np.fill_diagonal(mat, (2 * p) ** 2 - p)
    return SectorProblem("orthogonal", sector, dim, mat)


def il_delta(n: int) -> float:
    """Deficit |delta_n| = 3 pi n/2 + sqrt(3)/3 - I^L_n of the diagonal wall integral.

    Decays like 8 sqrt(3) / (81 n^2); delta_0 = sqrt(3)/3 by the
    convention I^L_0 = 0.
    """
    if n == 0:
        return SQRT3 / 3.0
    return 1.5 * math.pi * n + SQRT3 / 3.0 - il_integral(n, n, mode="digamma", segment="low")


def il_integral(n: int, m: int, mode: str = "digamma", segment: str = "low",
                n_quad: int = 512) -> float:
    """Wall overlap integrals of the unitary sectors.

    quadrature mode evaluates
        (1 + (-1)^{n+m}) int sin sin / sin^2 phi dphi
    over [0, 2pi/3] (low, frequencies 3n/2) or [0, pi/3] (high,
    frequencies 3n) with Gauss-Legendre nodes (the integrand's endpoint
    singularities are removable).  digamma mode uses the closed form

        I^L_n = 3 pi n/2 + (sqrt(3) n/2)(psi0(n/2 + 2/3) - psi0(n/2 + 1/3))

    with the combination rules I_{n,m} = I_{(n+m)/2} - I_{|n-m|/2} and
    I^H_n = 6 pi n - I^L_{2n}; the two modes agree to better than 1e-8.
    """
    if n < 1 or m < 1:
        raise ValueError("indices must be >= 1")
    if segment not in ("low", "high"):
        raise ValueError(f"segment must be 'low' or 'high', got {segment!r}")
    if (n + m) % 2:
        return 0.0
    if mode == "quadrature":
        rule = gauss_legendre(n_quad)
        if segment == "low":
            upper, freq = 2.0 * math.pi / 3.0, 1.5
        else:
            upper, freq = math.pi / 3.0, 3.0
        x = 0.5 * upper * (rule.nodes + 1.0)
        w = 0.5 * upper * rule.weights
        vals = np.sin(freq * n * x) * np.sin(freq * m * x) / np.sin(x) ** 2
        return 2.0 * float(np.sum(w * vals))
    if mode == "digamma":
        def _low(k: int) -> float:
            if k == 0:
                return 0.0
            return 1.5 * math.pi * k + 0.5 * SQRT3 * k * (
                digamma(0.5 * k + 2.0 / 3.0) - digamma(0.5 * k + 1.0 / 3.0))

        def _high(k: int) -> float:
            if k == 0:
                return 0.0
            return 6.0 * math.pi * k - _low(2 * k)

        diag = _low if segment == "low" else _high
        return diag((n + m) // 2) - diag(abs(n - m) // 2)
    raise ValueError(f"mode must be 'quadrature' or 'digamma', got {mode!r}")


def unitary_sector_matrix(sector: str, dim: int, exact: bool = False,
                          coupling: float = 1.0) -> SectorProblem:
    """Sine-series matrices of the repulsive unitary problem.

    Approximate form (exact=False):
        low:  diag (3n/2)^2 + (9/8) n + sqrt(3)/(4 pi), off-diag (9/8) min(n,m)
        high: diag (3n)^2  + (9/2) n - sqrt(3)/(2 pi),  off-diag (9/2) min(n,m)
    restricted to equal parity; exact=True substitutes the full wall
    integrals including their digamma deficits.  ``coupling`` scales
    the wall strength (the published problem is coupling=1).
    """
    if sector not in ("low", "high"):
        raise ValueError(f"unitary sectors are 'low'/'high', got {sector!r}")
    if dim < 4:
        raise ValueError("need dim >= 4")
    n = np.arange(1, dim + 1, dtype=float)
    parity = (n[:, None] - n[None, :]) % 2 == 0
    if exact:
        pref = 3.0 / (4.0 * math.pi) if sector == "low" else 3.0 / (2.0 * math.pi)
        walls = np.zeros((dim, dim))
        for i in range(dim):
            for j in range(i, dim):
                if (i + j) % 2 == 0:
                    val = pref * il_integral(i + 1, j + 1, mode="digamma", segment=sector)
                    walls[i, j] = val
                    walls[j, i] = val
    else:
        mins = np.minimum(n[:, None], n[None, :])
        if sector == "low":
            walls = np.where(parity, 9.0 / 8.0 * mins, 0.0)
            walls += np.diag(np.full(dim, SQRT3 / (4.0 * math.pi)))
        else:
            walls = np.where(parity, 4.5 * mins, 0.0)
            walls += np.diag(np.full(dim, -SQRT3 / (2.0 * math.pi)))
    base = (1.5 * n) ** 2 if sector == "low" else (3.0 * n) ** 2
    mat = coupling * walls + np.diag(base)
    return SectorProblem("unitary", sector, dim, mat, exact=exact, coupling=coupling)


def solve_modes(problem: SectorProblem, margin: int | None = None) -> list:
    """Diagonalize a sector problem into labeled angular modes.

    b = sqrt(eigenvalue); each mode is labeled by its dominant Fourier
    coefficient (ties broken toward the smaller index), the coefficient
    vector is normalized with the dominant component positive, and
    modes whose dominant slot falls within ``margin`` of the truncation
    edge (default dim/5) are suppressed.  A negative orthogonal
    eigenvalue beyond roundoff indicates a build bug and raises.
    """
    if margin is None:
        margin = problem.dim // 5
    dec = sym_eig(problem.matrix, tol=1e-9)
    modes = []
    for idx in range(problem.dim):
        lam = dec.values[idx]
        if lam < 0:
            if lam < -1e-9 * max(1.0, abs(dec.values[-1])):
                raise ArithmeticError(
                    f"negative eigenvalue {lam:.3e} in {problem.kind}/{problem.sector}")
            lam = 0.0
        vec = dec.vectors[:, idx].copy()
        dom = int(np.argmax(np.abs(vec)))
        best = np.abs(vec[dom])
        for j in range(dom):
            if np.abs(vec[j]) >= best - 1e-12:
                dom = j
                break
        if vec[dom] < 0:
            vec = -vec
        if dom + 1 > problem.dim - margin:
            continue
        label = _fourier_index(problem.sector, dom + 1)
        b = float(np.sqrt(lam))
        modes.append(AngularMode(
            kind=problem.kind,
            sector=problem.sector,
            l=label,
            b=b,
            coeffs=vec,
            delta_b=b - _baseline(problem.sector, label),
            delta_psi_norm=float(np.sqrt(max(0.0, 1.0 - vec[dom] ** 2))),
            coupling=problem.coupling,
        ))
    return modes


def mode_by_label(modes: list, l: int) -> AngularMode:
    for m in modes:
        if m.l == l:
            return m
    raise KeyError(f"no mode with label {l}")


def mode_profile(mode: AngularMode, phi) -> np.ndarray:
    """Evaluate the truncated sine series of a mode at angles ``phi``.

    Pointwise values converge with the truncation; derivatives near the
    wall singularities do not, which is why the assembled residual
    tests integrate the angular equation locally instead.
    """
    phi = np.asarray(phi, dtype=float)
    out = np.zeros_like(phi)
    for slot, coeff in enumerate(mode.coeffs):
        n = _fourier_index(mode.sector, slot + 1)
        freq = {"odd": 1.0, "even": 1.0, "low": 1.5, "high": 3.0}[mode.sector]
        out += coeff * np.sin(freq * n * phi)
    return out


def mode_profile_derivative(mode: AngularMode, phi) -> np.ndarray:
    phi = np.asarray(phi, dtype=float)
    out = np.zeros_like(phi)
    for slot, coeff in enumerate(mode.coeffs):
        n = _fourier_index(mode.sector, slot + 1)
        freq = {"odd": 1.0, "even": 1.0, "low": 1.5, "high": 3.0}[mode.sector]
        out += coeff * freq * n * np.cos(freq * n * phi)
    return out


def sector_potential(kind: str, coupling: float = 1.0):
    """The angular potential V(phi) of a class, as a callable.

    Orthogonal: -1/(4 sin^2 phi).  Unitary: coupling times the two
    inverse-square walls 1/(4 sin^2 phi) + 1/(4 sin^2(phi - 2pi/3)).
    """
    if kind == "orthogonal":
        return lambda phi: -0.25 / np.sin(phi) ** 2
    if kind == "unitary":
        return lambda phi: coupling * (0.25 / np.sin(phi) ** 2
                                       + 0.25 / np.sin(phi - 2.0 * math.pi / 3.0) ** 2)
    raise ValueError(f"unknown kind {kind!r}")


def reference_tables(kind: str, dim: int, exact: bool = False) -> list:
    """Mode tables in the published layout, rounded to 2 decimals.

    Orthogonal rows: (p, db_{2p-1}, |dpsi_{2p-1}|, db_{2p}, |dpsi_{2p}|)
    for p = 1..10; unitary rows: (l, db_low, db_high, |dpsi_low|).
    """
    if kind == "orthogonal":
        odd = solve_modes(orthogonal_sector_matrix("odd", dim))
        even = solve_modes(orthogonal_sector_matrix("even", dim))
        rows = []
        for p in range(1, 11):
            mo = mode_by_label(odd, 2 * p - 1)
            me = mode_by_label(even, 2 * p)
            rows.append((p, round(mo.delta_b, 2), round(mo.delta_psi_norm, 2),
                         round(me.delta_b, 2), round(me.delta_psi_norm, 2)))
        return rows
    if kind == "unitary":
        low = solve_modes(unitary_sector_matrix("low", dim, exact=exact))
        high = solve_modes(unitary_sector_matrix("high", dim, exact=exact))
        rows = []
        for l in range(1, 11):
            ml = mode_by_label(low, l)
            mh = mode_by_label(high, l)
            rows.append((l, round(ml.delta_b, 2), round(mh.delta_b, 2),
                         round(ml.delta_psi_norm, 2)))
        return rows
    raise ValueError(f"unknown kind {kind!r}")


def half_integer_branch(l: int, a_coeff: complex, b_coeff: complex, grid) -> dict:
    """The b = l + 1/2 family sqrt(|sin phi|)(A P_l + B Q_l)(cos phi).

    Returns the values, the probability current Im(psi* psi') from
    one-sided finite differences, and the current jumps across the
    potential singularities at phi = 0 and pi.  The jump is generically
    nonzero, which is what excludes this family from the mode tables.
    """
    grid = np.asarray(grid, dtype=float)
    if np.any(np.abs(np.sin(grid)) < 1e-12):
        raise ValueError("grid must exclude the singular points")

    def psi(phi):
        phi = np.asarray(phi, dtype=float)
        x = np.cos(phi)
        pv = np.array([legendre(l, 0, xi, kind="P") for xi in np.atleast_1d(x)])
        qv = np.array([legendre(l, 0, xi, kind="Q") for xi in np.atleast_1d(x)])
        out = np.sqrt(np.abs(np.sin(phi))) * (a_coeff * pv + b_coeff * qv)
        return out if out.shape else complex(out)

    values = psi(grid)
    h = 1e-6

    def current_at(phi):
        f0, f1, f2 = psi(np.array([phi, phi + h, phi + 2 * h]))
        deriv = (-1.5 * f0 + 2.0 * f1 - 0.5 * f2) / h
        return float(np.imag(np.conj(f0) * deriv))

    delta = 1e-3
    jumps = {}
    for name, point in (("0", 0.0), ("pi", math.pi)):
        right = current_at(point + delta)
        left = current_at(point - delta - 2 * h)
        jumps[name] = right - left
    current = np.array([current_at(p) for p in grid])
    return {
        "b": l + 0.5,
        "values": values,
        "current": current,
        "jump_at_0": jumps["0"],
        "jump_at_pi": jumps["pi"],
    }
