"""Generator bases, structure constants, and the defining representation
of so(N) / su(N) in the normalization Tr(tau_a tau_b) = -1/2 delta_ab.

The pair-indexed generators are

    tau_(ij) = (|i><j| - |j><i|)/2          for i < j,
    tau_(ij) = i(|i><j| + |j><i|)/2         for i > j (unitary class only).

For the orthogonal class these close under commutation.  For the
unitary class the off-diagonal pairs alone do not: brackets of opposite
pairs, [tau_(ij), tau_(ji)], land in the traceless diagonal subspace.
A ``GeneratorBasis`` therefore also carries diagonal completion
generators, so structure constants close exactly and the Jacobi
identity holds; the pair-indexed slice of the tensor is what the
adjoint contraction and the reduction geometry consume.
"""

from dataclasses import dataclass, field

import numpy as np

from .numerics import expm

ORTHOGONAL = "orthogonal"
UNITARY = "unitary"


@dataclass(frozen=True)
class SymmetryClass:
    """Symmetry class of the matrix configuration space.

    kind "orthogonal" (real symmetric matrices, repulsion exponent
    alpha=1) or "unitary" (complex Hermitian, alpha=2); n is the
    particle count.
    """

    kind: str
    n: int

    def __post_init__(self):
        if self.kind not in (ORTHOGONAL, UNITARY):
            raise ValueError(f"unknown symmetry class kind {self.kind!r}")
        if self.n < 2:
            raise ValueError("particle count must be >= 2")

    @property
    def alpha(self) -> int:
        return 1 if self.kind == ORTHOGONAL else 2

    @property
    def pairs(self) -> tuple:
        """Ordered pair-index set: i<j (orthogonal) or i!=j (unitary)."""
        if self.kind == ORTHOGONAL:
            return tuple((i, j) for i in range(self.n) for j in range(i + 1, self.n))
        return tuple((i, j) for i in range(self.n) for j in range(self.n) if i != j)

    @property
    def dim(self) -> int:
        return len(self.pairs)


def _pair_generator(kind: str, n: int, i: int, j: int) -> np.ndarray:
    t = np.zeros((n, n), dtype=complex)
    if i < j:
        t[i, j] = 0.5
        t[j, i] = -0.5
    else:
        if kind == ORTHOGONAL:
            raise ValueError("orthogonal class has no i > j generators")
        t[i, j] = 0.5j
        t[j, i] = 0.5j
    return t


def _diagonal_completion(n: int) -> list:
    """Traceless anti-Hermitian diagonal generators h_k with Tr(h_a h_b) = -1/2 delta_ab."""
    out = []
    for k in range(1, n):
        v = np.zeros(n)
        v[:k] = 1.0
        v[k] = -k
        v /= np.linalg.norm(v) * np.sqrt(2.0)
        out.append(1j * np.diag(v))
    return out


@dataclass(frozen=True)
class GeneratorBasis:
    """Anti-Hermitian generator basis for a symmetry class.

    ``matrices[:sym.dim]`` are the pair generators in ``sym.pairs``
    order; for the unitary class ``matrices[sym.dim:]`` are the
    diagonal completion generators needed for commutator closure.
    """

    sym: SymmetryClass
    matrices: tuple = field(repr=False)

    @property
    def pairs(self) -> tuple:
        return self.sym.pairs

    @property
    def dim(self) -> int:
        return self.sym.dim

    @property
    def closed_dim(self) -> int:
        return len(self.matrices)

    def tau(self, i: int, j: int) -> np.ndarray:
        return self.matrices[self.pairs.index((i, j))]

    def combine(self, a) -> np.ndarray:
        """Algebra element sum_k a_k tau_k over the pair generators."""
        a = np.asarray(a, dtype=float)
        if a.shape != (self.dim,):
            raise ValueError(f"coefficient vector must have length {self.dim}")
        out = np.zeros((self.sym.n, self.sym.n), dtype=complex)
        for ak, t in zip(a, self.matrices[: self.dim]):
            out += ak * t
        return out


def build_generator_basis(sym: SymmetryClass) -> GeneratorBasis:
    """Construct the normalized generator basis for a symmetry class."""
    mats = [_pair_generator(sym.kind, sym.n, i, j) for (i, j) in sym.pairs]
    if sym.kind == UNITARY:
        mats.extend(_diagonal_completion(sym.n))
    return GeneratorBasis(sym, tuple(mats))


@dataclass(frozen=True)
class StructureConstants:
    """Real structure constants over the closed generator basis.

    ``f[a][b]`` lists ``(c, coeff)`` with [tau_a, tau_b] = sum coeff tau_c;
    indices run over the closed basis (pair generators first, diagonal
    completions after).  The pair-target block c < dim is the tensor
    consumed by the adjoint contraction and the reduction geometry.
    """

    basis: GeneratorBasis
    f: tuple = field(repr=False)

    @property
    def dim(self) -> int:
        return self.basis.dim

    @property
    def closed_dim(self) -> int:
        return self.basis.closed_dim

    def coeff(self, a: int, b: int, c: int) -> float:
        for cc, val in self.f[a][b]:
            if cc == c:
                return val
        return 0.0

    def dense(self) -> np.ndarray:
        """Dense pair-indexed tensor f[a, b, c] with all slots < dim."""
        d = self.dim
        out = np.zeros((d, d, d))
        for a in range(d):
            for b in range(d):
                for c, val in self.f[a][b]:
                    if c < d:
                        out[a, b, c] = val
        return out

    def dense_closed(self) -> np.ndarray:
        """Dense tensor over the full closed basis in all three slots."""
        nd = self.closed_dim
        out = np.zeros((nd, nd, nd))
        for a in range(nd):
            for b in range(nd):
                for c, val in self.f[a][b]:
                    out[a, b, c] = val
        return out


def structure_constants(basis: GeneratorBasis) -> StructureConstants:
    """Extract f^c_ab = -2 Tr([tau_a, tau_b] tau_c) over the closed basis."""
    mats = basis.matrices
    nd = len(mats)
    rows = []
    for a in range(nd):
        row = []
        for b in range(nd):
            comm = mats[a] @ mats[b] - mats[b] @ mats[a]
            entries = []
            for c in range(nd):
                val = float((-2.0 * np.trace(comm @ mats[c])).real)
                if abs(val) > 1e-14:
                    entries.append((c, val))
            row.append(tuple(entries))
        rows.append(tuple(row))
    return StructureConstants(basis, tuple(rows))


def adjoint_matrix(f: StructureConstants, a) -> np.ndarray:
    """Adjoint contraction A_lm = sum_k a_k f^m_kl over the pair indices."""
    a = np.asarray(a, dtype=float)
    d = f.dim
    if a.shape != (d,):
        raise ValueError(f"coefficient vector must have length {d}")
    out = np.zeros((d, d))
    for k in range(d):
        ak = a[k]
        if ak == 0.0:
            continue
        for l in range(d):
            for c, val in f.f[k][l]:
                if c < d:
                    out[l, c] += ak * val
    return out


def dexp_series(adj: np.ndarray, tol: float = 1e-14) -> np.ndarray:
    """Truncated series sum_n A^n / (n+1)! of the exponential-derivative kernel.

    For a closed algebra this is the matrix relating chart derivatives
    of the group element to the generator basis; the series is summed
    until the term norm drops below ``tol``.
    """
    adj = np.asarray(adj, dtype=float)
    if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {adj.shape}")
    if tol <= 0:
        raise ValueError("tol must be positive")
    d = adj.shape[0]
    out = np.eye(d)
    term = np.eye(d)
    fact = 1.0
    for n in range(1, 80):
        term = term @ adj
        fact *= n + 1
        piece = term / fact
        out = out + piece
        if np.linalg.norm(piece) < tol:
            break
    return out


def group_element(basis: GeneratorBasis, a) -> np.ndarray:
    """Group element exp(sum a_k tau_k); real orthogonal in the orthogonal class."""
    u = expm(basis.combine(a))
    if basis.sym.kind == ORTHOGONAL:
        return u.real.copy()
    return u


@dataclass(frozen=True)
class DefiningRep:
    """Defining (N-dimensional) representation of the Hermitian charge operators.

    L_(ij) = i hbar/2 (|i><j| - |j><i|) for i < j and
    hbar/2 (|i><j| + |j><i|) for i > j.  The squares are diagonal,
    which is what makes the component Hamiltonians separable.  For the
    unitary class ``diagonal`` holds the Hermitian partners of the
    diagonal completion generators so commutators close.
    """

    basis: GeneratorBasis
    hbar: float
    operators: tuple = field(repr=False)
    diagonal: tuple = field(repr=False)

    def op(self, i: int, j: int) -> np.ndarray:
        return self.operators[self.basis.pairs.index((i, j))]

    def closed(self) -> tuple:
        return self.operators + self.diagonal


def defining_rep(sym: SymmetryClass, hbar: float = 1.0) -> DefiningRep:
    """Build the defining representation for a symmetry class."""
    if hbar <= 0:
        raise ValueError("hbar must be positive")
    basis = build_generator_basis(sym)
    ops = []
    for (i, j) in sym.pairs:
        l = np.zeros((sym.n, sym.n), dtype=complex)
        if i < j:
            l[i, j] = 0.5j * hbar
            l[j, i] = -0.5j * hbar
        else:
            l[i, j] = 0.5 * hbar
            l[j, i] = 0.5 * hbar
        ops.append(l)
    # Hermitian diagonal partners -i*hbar*h_k.  The map tau -> conj(tau)
    # is an automorphism of the real algebra, so with these signs
    # [L_a, L_b] = i hbar sum_c f^c_ab L_c holds with the same tensor
    # extracted from the anti-Hermitian basis.
    diag = tuple(-1j * hbar * h for h in basis.matrices[sym.dim:])
    return DefiningRep(basis, hbar, tuple(ops), diag)


def rep_structure_constants(rep: DefiningRep) -> np.ndarray:
    """Recover f from the defining-rep commutators.

    The closed operator set satisfies Tr(L_a L_b) = (hbar^2/2) delta_ab,
    so f^c_ab = -2i/hbar^3 Tr([L_a, L_b] L_c).  Must agree entrywise
    with :func:`structure_constants`; this is the Dirac-correspondence
    route (commutators standing in for the canonical brackets).
    """
    ops = rep.closed()
    nd = len(ops)
    hbar = rep.hbar
    out = np.zeros((nd, nd, nd))
    for a in range(nd):
        for b in range(nd):
            comm = ops[a] @ ops[b] - ops[b] @ ops[a]
            for c in range(nd):
                out[a, b, c] = float((-2j / hbar ** 3 * np.trace(comm @ ops[c])).real)
    return out


def poisson_bracket_constants(sym: SymmetryClass) -> np.ndarray:
    """Literal coefficient tensor of the canonical bracket forms.

    Orthogonal: {L_ij, L_kl} = (d_kj L_il - d_il L_kj - d_jl L_ik + d_ik L_lj)/2
    Unitary:    {L_ij, L_kl} =  d_kj L_il - d_il L_kj

    Targets are pair indices only; L_(ji) with j > i in the orthogonal
    class is normalized to -L_(ij).  In the orthogonal class this tensor
    equals the trace-extracted constants entrywise (the bracket form is
    written in the same Hermitian basis).  The unitary form is written
    in the non-Hermitian ladder basis i hbar |j><i|, a complex change of
    basis away from the pair operators, so its unitary output is *not*
    comparable entrywise to :func:`structure_constants`; use
    :func:`rep_structure_constants` for that comparison.
    """
    pairs = sym.pairs
    d = len(pairs)
    out = np.zeros((d, d, d))

    def add(a, b, coeff, p, q):
        if p == q:
            return
        if sym.kind == ORTHOGONAL and p > q:
            out[a, b, pairs.index((q, p))] -= coeff
        else:
            out[a, b, pairs.index((p, q))] += coeff

    for a, (i, j) in enumerate(pairs):
        for b, (k, l) in enumerate(pairs):
            if sym.kind == ORTHOGONAL:
                if k == j:
                    add(a, b, 0.5, i, l)
                if i == l:
                    add(a, b, -0.5, k, j)
                if j == l:
                    add(a, b, -0.5, i, k)
                if i == k:
                    add(a, b, 0.5, l, j)
            else:
                if k == j:
                    add(a, b, 1.0, i, l)
                if i == l:
                    add(a, b, -1.0, k, j)
    return out
