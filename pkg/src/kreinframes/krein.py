"""Finite-dimensional Krein-space substrate.

The indefinite inner product is fixed once for the whole package:

    [x, y] = y^H J x

i.e. linear in the first slot, conjugate-linear in the second, where J is
the fundamental symmetry (a Hermitian involution).  Because J*J = I, the
Hilbert product associated with J is the plain coordinate product, so all
norms below are ordinary 2-norms.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np
import scipy.linalg as sla

from .errors import (
    ContractViolationError,
    DegenerateSubspaceError,
    NotComplementaryError,
    NotDefiniteError,
    NotGraphError,
    NotMaximalDefiniteError,
)

#: relative singular-value cutoff for basis rank checks
TAU_RANK = 1e-10
#: relative eigenvalue margin for uniform definiteness
EPS_PD = 1e-10
#: angular operators must satisfy ||K|| < 1 - EPS_CONTRACT
EPS_CONTRACT = 1e-10
#: largest principal angle below which two subspaces count as equal
ANGLE_TOL = 1e-8


def _as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim == 1:
        m = m[:, None]
    if m.ndim != 2:
        raise ValueError(f"expected a matrix, got array of ndim {m.ndim}")
    return m


def _as_vector(x, n: int) -> np.ndarray:
    v = np.asarray(x, dtype=complex).ravel()
    if v.shape != (n,):
        raise ValueError(f"expected a vector of length {n}, got shape {np.shape(x)}")
    return v


@dataclass(frozen=True)
class KreinSpace:
    """C^n with fundamental symmetry J of signature (p, q)."""

    dim: int
    p: int
    q: int
    J: np.ndarray

    def __post_init__(self):
        J = _as_matrix(self.J)
        if J.shape != (self.dim, self.dim):
            raise ValueError("J must be square of size dim")
        if self.p + self.q != self.dim or self.p < 0 or self.q < 0:
            raise ValueError("signature must satisfy p + q = dim")
        if np.linalg.norm(J - J.conj().T, 2) > 1e-12 * max(1.0, np.linalg.norm(J, 2)):
            raise ValueError("J must be Hermitian")
        if np.linalg.norm(J @ J - np.eye(self.dim), 2) > 1e-12:
            raise ValueError("J must be an involution (J @ J = I)")
        if abs(np.trace(J).real - (self.p - self.q)) > 1e-8:
            raise ValueError("trace(J) must equal p - q")
        object.__setattr__(self, "J", J)

    @classmethod
    def canonical(cls, p: int, q: int) -> "KreinSpace":
        """Space with J = diag(+1 x p, -1 x q)."""
        J = np.diag(np.concatenate([np.ones(p), -np.ones(q)])).astype(complex)
        return cls(dim=p + q, p=p, q=q, J=J)

    @classmethod
    def from_symmetry(cls, J) -> "KreinSpace":
        """Build a space from an arbitrary Hermitian involution."""
        J = _as_matrix(J)
        ev = np.linalg.eigvalsh((J + J.conj().T) / 2)
        p = int(np.sum(ev > 0))
        return cls(dim=J.shape[0], p=p, q=J.shape[0] - p, J=J)

    @property
    def is_canonical(self) -> bool:
        d = np.concatenate([np.ones(self.p), -np.ones(self.q)])
        return bool(np.array_equal(self.J, np.diag(d).astype(complex)))

    def canonical_axes(self) -> tuple[np.ndarray, np.ndarray]:
        """Orthonormal eigenbases of J for the +1 and -1 eigenspaces.

        For a canonical J these are coordinate axes; otherwise they come
        from one Hermitian eigendecomposition of J.
        """
        if self.is_canonical:
            E = np.eye(self.dim, dtype=complex)
            return E[:, : self.p], E[:, self.p :]
        ev, V = np.linalg.eigh((self.J + self.J.conj().T) / 2)
        # eigh sorts ascending, so the -1 eigenspace comes first
        return V[:, self.q :], V[:, : self.q]


def indefinite_inner(x, y, space: KreinSpace) -> complex:
    """[x, y] = y^H J x."""
    xv = _as_vector(x, space.dim)
    yv = _as_vector(y, space.dim)
    return complex(yv.conj() @ (space.J @ xv))


def krein_adjoint(T, source: KreinSpace, target: KreinSpace) -> np.ndarray:
    """Adjoint T+ with [Tx, y]_target = [x, T+ y]_source.

    T maps source -> target; in coordinates T+ = J_source T^H J_target.
    """
    M = _as_matrix(T)
    if M.shape != (target.dim, source.dim):
        raise ValueError(
            f"operator shape {M.shape} does not map dim {source.dim} into dim {target.dim}"
        )
    return source.J @ M.conj().T @ target.J


@dataclass(frozen=True)
class Subspace:
    """Span of the columns of ``basis`` inside a Krein space.

    ``gram`` is the matrix of indefinite products [b_i, b_j]; with the
    product convention above, gram = basis^H J basis.
    """

    space: KreinSpace
    basis: np.ndarray
    gram: np.ndarray = field(repr=False)

    @classmethod
    def from_basis(cls, space: KreinSpace, basis) -> "Subspace":
        B = _as_matrix(basis)
        if B.shape[0] != space.dim:
            raise ValueError("basis rows must match the ambient dimension")
        if B.shape[1] > 0:
            s = np.linalg.svd(B, compute_uv=False)
            if s[-1] <= TAU_RANK * s[0]:
                raise ValueError("basis is numerically rank-deficient")
        gram = B.conj().T @ space.J @ B
        gram = (gram + gram.conj().T) / 2
        return cls(space=space, basis=B, gram=gram)

    @classmethod
    def zero(cls, space: KreinSpace) -> "Subspace":
        """The zero-dimensional marker subspace."""
        return cls(space=space, basis=np.zeros((space.dim, 0), dtype=complex),
                   gram=np.zeros((0, 0), dtype=complex))

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @property
    def is_zero(self) -> bool:
        return self.dim == 0


class SubspaceKind(str, Enum):
    UNIFORMLY_POSITIVE = "UniformlyPositive"
    UNIFORMLY_NEGATIVE = "UniformlyNegative"
    NON_NEGATIVE = "NonNegative"
    NON_POSITIVE = "NonPositive"
    NEUTRAL = "Neutral"
    INDEFINITE = "Indefinite"
    DEGENERATE = "Degenerate"


@dataclass(frozen=True)
class SubspaceClass:
    tag: SubspaceKind
    maximal: bool
    #: gram singular up to tolerance (a Neutral line is also degenerate)
    degenerate: bool


def classify_subspace(M: Subspace, eps_pd: float = EPS_PD) -> SubspaceClass:
    """Classify by the eigenvalues of the Gram matrix.

    The definiteness margin is relative: an eigenvalue counts as positive
    when it exceeds eps_pd * ||gram||.  Maximality compares dim M with the
    signature of the ambient space.
    """
    if M.is_zero:
        return SubspaceClass(tag=SubspaceKind.NEUTRAL, maximal=False, degenerate=False)
    ev = np.linalg.eigvalsh(M.gram)
    tol = eps_pd * max(np.abs(ev).max(), 1e-300)
    pos = ev > tol
    neg = ev < -tol
    zer = ~(pos | neg)
    k = M.dim
    if pos.all():
        return SubspaceClass(SubspaceKind.UNIFORMLY_POSITIVE, maximal=(k == M.space.p),
                             degenerate=False)
    if neg.all():
        return SubspaceClass(SubspaceKind.UNIFORMLY_NEGATIVE, maximal=(k == M.space.q),
                             degenerate=False)
    if zer.all():
        return SubspaceClass(SubspaceKind.NEUTRAL, maximal=False, degenerate=True)
    if not neg.any():
        return SubspaceClass(SubspaceKind.NON_NEGATIVE, maximal=False, degenerate=True)
    if not pos.any():
        return SubspaceClass(SubspaceKind.NON_POSITIVE, maximal=False, degenerate=True)
    if zer.any():
        return SubspaceClass(SubspaceKind.DEGENERATE, maximal=False, degenerate=True)
    return SubspaceClass(SubspaceKind.INDEFINITE, maximal=False, degenerate=False)


def orthogonal_companion(M: Subspace) -> Subspace:
    """M^[perp]: all x with [x, m] = 0 for every m in M.

    Computed as the null space of basis^H J; returns the zero marker when
    M spans the whole space.
    """
    if M.is_zero:
        return Subspace.from_basis(M.space, np.eye(M.space.dim, dtype=complex))
    A = M.basis.conj().T @ M.space.J
    N = sla.null_space(A, rcond=TAU_RANK)
    if N.shape[1] == 0:
        return Subspace.zero(M.space)
    return Subspace.from_basis(M.space, N)


def orthonormalize_definite(M: Subspace, sign: int) -> np.ndarray:
    """Columns b with [b_i, b_j] = sign * delta_ij.

    Uses a Cholesky factor of sign * gram (positive definite for uniformly
    definite M) rather than sequential Gram-Schmidt.
    """
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    if M.is_zero:
        return M.basis
    G = sign * M.gram
    try:
        Lc = np.linalg.cholesky(G)
    except np.linalg.LinAlgError as exc:
        raise NotDefiniteError(
            f"subspace is not uniformly {'positive' if sign > 0 else 'negative'}"
        ) from exc
    # B X with X = (Lc^H)^{-1} gives (B X)^H J (B X) = sign * I
    return sla.solve_triangular(Lc.conj(), M.basis.T, lower=True).T


@dataclass(frozen=True)
class FundamentalDecomposition:
    """H = plus [+] minus with [.,.]-orthonormal column bases.

    onb_plus has [b_i, b_j] = delta_ij, onb_minus has [b_i, b_j] = -delta_ij,
    and the two blocks are mutually [.,.]-orthogonal.  induced_symmetry is
    J' = E_+ - E_- for the self-adjoint projections onto the two halves.
    """

    space: KreinSpace
    plus: Subspace
    minus: Subspace
    onb_plus: np.ndarray
    onb_minus: np.ndarray
    induced_symmetry: np.ndarray

    @property
    def onb(self) -> np.ndarray:
        """All n columns, plus block first."""
        return np.hstack([self.onb_plus, self.onb_minus])

    def coordinate_symmetry(self) -> np.ndarray:
        return np.diag(np.concatenate([np.ones(self.plus.dim),
                                       -np.ones(self.minus.dim)])).astype(complex)


def fundamental_decomposition_from(M: Subspace) -> FundamentalDecomposition:
    """Decomposition (M^[perp], M) from a maximal uniformly negative M,
    or (M, M^[perp]) from a maximal uniformly positive M."""
    cls = classify_subspace(M)
    if M.is_zero and M.space.q == 0:
        # the zero subspace is the maximal negative one of a Hilbert space
        minus, plus = M, orthogonal_companion(M)
    elif M.is_zero and M.space.p == 0:
        plus, minus = M, orthogonal_companion(M)
    elif cls.tag is SubspaceKind.UNIFORMLY_NEGATIVE and cls.maximal:
        minus, plus = M, orthogonal_companion(M)
    elif cls.tag is SubspaceKind.UNIFORMLY_POSITIVE and cls.maximal:
        plus, minus = M, orthogonal_companion(M)
    else:
        raise NotMaximalDefiniteError(
            f"need a maximal uniformly definite subspace, got {cls.tag.value} "
            f"(maximal={cls.maximal})"
        )
    pcls = classify_subspace(plus)
    mcls = classify_subspace(minus)
    if plus.dim != M.space.p or not plus.is_zero and not (
            pcls.tag is SubspaceKind.UNIFORMLY_POSITIVE and pcls.maximal):
        raise NotMaximalDefiniteError("companion is not maximal uniformly positive")
    if minus.dim != M.space.q or not minus.is_zero and not (
            mcls.tag is SubspaceKind.UNIFORMLY_NEGATIVE and mcls.maximal):
        raise NotMaximalDefiniteError("companion is not maximal uniformly negative")
    Bp = orthonormalize_definite(plus, +1)
    Bm = orthonormalize_definite(minus, -1)
    Jp = (Bp @ Bp.conj().T + Bm @ Bm.conj().T) @ M.space.J
    return FundamentalDecomposition(space=M.space, plus=plus, minus=minus,
                                    onb_plus=Bp, onb_minus=Bm, induced_symmetry=Jp)


@dataclass(frozen=True)
class AngularOperator:
    """Contraction whose graph over one half of a decomposition is L."""

    matrix: np.ndarray
    norm: float
    source_decomp: FundamentalDecomposition


def coordinates_in(decomp: FundamentalDecomposition, vectors) -> np.ndarray:
    """Coordinates w.r.t. the decomposition's onb columns.

    Row blocks (xi_+, xi_-) with xi_+ = B_+^H J x and xi_- = -B_-^H J x,
    so that x = B_+ xi_+ + B_- xi_-.
    """
    V = _as_matrix(vectors)
    J = decomp.space.J
    return np.vstack([decomp.onb_plus.conj().T @ J @ V,
                      -decomp.onb_minus.conj().T @ J @ V])


def angular_operator(L: Subspace, decomp: FundamentalDecomposition,
                     eps_contract: float = EPS_CONTRACT) -> AngularOperator:
    """Angular operator of a maximal uniformly definite L.

    Negative L is a graph {K x_- + x_-} over decomp.minus (K maps minus
    coordinates to plus coordinates); positive L the mirror image.
    """
    cls = classify_subspace(L)
    if cls.tag is SubspaceKind.UNIFORMLY_NEGATIVE and cls.maximal:
        over_minus = True
    elif cls.tag is SubspaceKind.UNIFORMLY_POSITIVE and cls.maximal:
        over_minus = False
    else:
        raise NotMaximalDefiniteError(
            f"L must be maximal uniformly definite, got {cls.tag.value}")
    p, q = decomp.plus.dim, decomp.minus.dim
    coords = coordinates_in(decomp, L.basis)
    xi_p, xi_m = coords[:p], coords[p:]
    dominant, other = (xi_m, xi_p) if over_minus else (xi_p, xi_m)
    sd = np.linalg.svd(dominant, compute_uv=False)
    if sd.size == 0 or sd[-1] <= TAU_RANK * max(sd[0], 1e-300):
        raise NotGraphError("subspace is not a graph over the dominant half")
    K = other @ np.linalg.inv(dominant)
    nrm = float(np.linalg.norm(K, 2)) if K.size else 0.0
    if nrm >= 1 - eps_contract:
        raise ContractViolationError(f"angular operator has norm {nrm} >= 1")
    return AngularOperator(matrix=K, norm=nrm, source_decomp=decomp)


def oblique_projection(range_: Subspace, kernel: Subspace) -> np.ndarray:
    """The projection Q with R(Q) = range_ and N(Q) = kernel.

    Requires range_ (+) kernel = H; checked by the rank of the stacked
    bases.
    """
    n = range_.space.dim
    if range_.dim + kernel.dim != n:
        raise NotComplementaryError(
            f"dimensions {range_.dim} + {kernel.dim} do not add up to {n}")
    C = np.hstack([range_.basis, kernel.basis])
    s = np.linalg.svd(C, compute_uv=False)
    if s[-1] <= TAU_RANK * s[0]:
        raise NotComplementaryError("stacked basis is rank-deficient")
    coeff = np.linalg.solve(C, np.eye(n, dtype=complex))
    return range_.basis @ coeff[: range_.dim]


def selfadjoint_projection(M: Subspace) -> np.ndarray:
    """Self-adjoint projection onto a regular subspace: E = B G^{-1} B^H J."""
    if M.is_zero:
        return np.zeros((M.space.dim, M.space.dim), dtype=complex)
    s = np.linalg.svd(M.gram, compute_uv=False)
    if s[-1] <= TAU_RANK * s[0]:
        raise DegenerateSubspaceError("subspace is degenerate, no self-adjoint projection")
    return M.basis @ np.linalg.solve(M.gram, M.basis.conj().T @ M.space.J)


def principal_angle_max(A: Subspace | np.ndarray, B: Subspace | np.ndarray) -> float:
    """Largest principal angle between two column spans (radians)."""
    Ba = A.basis if isinstance(A, Subspace) else _as_matrix(A)
    Bb = B.basis if isinstance(B, Subspace) else _as_matrix(B)
    if Ba.shape[1] != Bb.shape[1]:
        return np.pi / 2
    if Ba.shape[1] == 0:
        return 0.0
    ang = sla.subspace_angles(Ba, Bb)
    return float(ang.max()) if ang.size else 0.0


def same_subspace(A, B, tol: float = ANGLE_TOL) -> bool:
    return principal_angle_max(A, B) <= tol
