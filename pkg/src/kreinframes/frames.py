"""Vector families over a Krein space and the J-frame validity test.

A family splits into the non-negative part (indices with [f_i, f_i] >= 0,
the sign is taken exactly, no tolerance band) and the negative part.  The
family is a J-frame when the two spans are maximal uniformly positive /
negative and decompose the space directly.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np
import scipy.linalg as sla

from .errors import NotJFrameError
from .krein import (
    EPS_PD,
    TAU_RANK,
    KreinSpace,
    Subspace,
    SubspaceClass,
    SubspaceKind,
    classify_subspace,
    orthonormalize_definite,
)


@dataclass(frozen=True)
class Frame:
    """Ordered family of vectors with its sign partition.

    ``vectors`` keeps the user order (one column per vector); ``synthesis``
    is the sign-sorted synthesis operator with the I+ columns first, and
    ``permutation`` maps sorted column j to the user index permutation[j].
    ``ell2`` is the coefficient Krein space diag(+1 x |I+|, -1 x |I-|).
    """

    space: KreinSpace
    vectors: np.ndarray
    i_plus: tuple[int, ...]
    i_minus: tuple[int, ...]
    permutation: tuple[int, ...]
    synthesis: np.ndarray
    ell2: KreinSpace

    @property
    def size(self) -> int:
        return self.vectors.shape[1]

    @property
    def n_plus(self) -> int:
        return len(self.i_plus)

    @property
    def n_minus(self) -> int:
        return len(self.i_minus)

    @property
    def t_plus(self) -> np.ndarray:
        return self.synthesis[:, : self.n_plus]

    @property
    def t_minus(self) -> np.ndarray:
        return self.synthesis[:, self.n_plus :]

    def span_plus(self) -> Subspace:
        return _column_span(self.space, self.t_plus)

    def span_minus(self) -> Subspace:
        return _column_span(self.space, self.t_minus)

    def self_products(self) -> np.ndarray:
        """[f_i, f_i] per vector, user order (real values)."""
        G = self.vectors.conj().T @ self.space.J @ self.vectors
        return np.diag(G).real.copy()


def _column_span(space: KreinSpace, M: np.ndarray) -> Subspace:
    if M.shape[1] == 0:
        return Subspace.zero(space)
    B = sla.orth(M, rcond=TAU_RANK)
    if B.shape[1] == 0:
        return Subspace.zero(space)
    return Subspace.from_basis(space, B)


def build_frame(space: KreinSpace, vectors: Sequence) -> Frame:
    """Assemble a Frame from a sequence of n-vectors.

    Neutral vectors go to I+ (the "[f,f] >= 0" rule); the sign is the exact
    sign of the computed product, no tolerance band.
    """
    A = np.asarray(vectors, dtype=complex)
    if A.ndim == 1:
        A = A[None, :]
    if A.ndim != 2:
        raise ValueError("vectors must form a 2-d array")
    if A.shape[1] == space.dim:
        V = A.T  # rows are vectors (takes precedence for square input)
    elif A.shape[0] == space.dim:
        V = A
    else:
        raise ValueError(
            f"vectors must have length {space.dim}, got shape {A.shape}")
    if V.shape[1] == 0:
        raise ValueError("empty family")
    norms = np.linalg.norm(V, axis=0)
    if np.any(norms == 0):
        raise ValueError(f"zero vector at index {int(np.argmin(norms))}")
    sq = np.real(np.einsum("ij,ij->j", V.conj(), space.J @ V))
    i_plus = tuple(int(i) for i in range(V.shape[1]) if sq[i] >= 0)
    i_minus = tuple(int(i) for i in range(V.shape[1]) if sq[i] < 0)
    perm = i_plus + i_minus
    return Frame(
        space=space,
        vectors=V,
        i_plus=i_plus,
        i_minus=i_minus,
        permutation=perm,
        synthesis=V[:, list(perm)],
        ell2=KreinSpace.canonical(len(i_plus), len(i_minus)),
    )


REASON_PLUS = "R(T₊) not maximal uniformly positive"
REASON_MINUS = "R(T₋) not maximal uniformly negative"
REASON_SUM = "M₊ ∔ M₋ ≠ H"


@dataclass(frozen=True)
class JFrameReport:
    is_jframe: bool
    class_plus: SubspaceClass
    class_minus: SubspaceClass
    m_plus: Subspace
    m_minus: Subspace
    direct_sum_ok: bool
    failure_reason: Optional[str]


def is_jframe(F: Frame, eps_pd: float = EPS_PD) -> JFrameReport:
    """Definition-level test: classify R(T+) and R(T-), check the direct sum.

    Failures are report content, never exceptions.
    """
    m_plus = F.span_plus()
    m_minus = F.span_minus()
    cp = classify_subspace(m_plus, eps_pd)
    cm = classify_subspace(m_minus, eps_pd)
    ok_plus = (m_plus.dim == F.space.p) and (
        m_plus.is_zero or (cp.tag is SubspaceKind.UNIFORMLY_POSITIVE and cp.maximal))
    ok_minus = (m_minus.dim == F.space.q) and (
        m_minus.is_zero or (cm.tag is SubspaceKind.UNIFORMLY_NEGATIVE and cm.maximal))
    if m_plus.dim + m_minus.dim == F.space.dim and not (m_plus.is_zero and m_minus.is_zero):
        C = np.hstack([m_plus.basis, m_minus.basis])
        s = np.linalg.svd(C, compute_uv=False)
        direct_sum_ok = bool(s[-1] > TAU_RANK * s[0])
    else:
        direct_sum_ok = False
    reasons = []
    if not ok_plus:
        reasons.append(REASON_PLUS)
    if not ok_minus:
        reasons.append(REASON_MINUS)
    if ok_plus and ok_minus and not direct_sum_ok:
        reasons.append(REASON_SUM)
    return JFrameReport(
        is_jframe=ok_plus and ok_minus and direct_sum_ok,
        class_plus=cp,
        class_minus=cm,
        m_plus=m_plus,
        m_minus=m_minus,
        direct_sum_ok=direct_sum_ok,
        failure_reason="; ".join(reasons) if reasons else None,
    )


class HilbertBounds(NamedTuple):
    alpha: float
    beta: float
    spans: bool


def hilbert_frame_bounds(vectors, dim: int) -> HilbertBounds:
    """Optimal Hilbert frame bounds: extreme eigenvalues of T T^H.

    alpha is reported as 0.0 (spans=False) when the family does not span.
    """
    A = np.asarray(vectors, dtype=complex)
    if A.ndim == 1:
        A = A[None, :]
    if A.shape[1] == dim:
        V = A.T
    elif A.shape[0] == dim:
        V = A
    else:
        raise ValueError(f"vectors must have length {dim}, got shape {A.shape}")
    ev = np.linalg.eigvalsh(V @ V.conj().T)
    beta = float(ev[-1])
    spans = bool(ev[0] > EPS_PD * max(beta, 1e-300))
    return HilbertBounds(alpha=float(ev[0]) if spans else 0.0, beta=beta, spans=spans)


def frame_bounds_on_definite_subspace(F: Frame, side: int) -> tuple[float, float]:
    """Brute-force frame bounds of F_side as a frame for (M_side, ±[.,.]).

    Restricts to a [.,.]-orthonormal basis B of M_side; in those
    coordinates sum_{i in I_side} |[f, f_i]|^2 is the quadratic form of
    G G^H with G = B^H J T_side, while ±[f, f] is the plain squared norm.
    This route never touches the block representations, so it serves as
    the independent oracle for the spectral bound formulas.
    """
    if side not in (+1, -1):
        raise ValueError("side must be +1 or -1")
    rep = is_jframe(F)
    if not rep.is_jframe:
        raise NotJFrameError(rep.failure_reason or "family is not a J-frame")
    M = rep.m_plus if side > 0 else rep.m_minus
    T_side = F.t_plus if side > 0 else F.t_minus
    B = orthonormalize_definite(M, side)
    if B.shape[1] == 0:
        return (0.0, 0.0)
    G = B.conj().T @ F.space.J @ T_side
    ev = np.linalg.eigvalsh(G @ G.conj().T)
    return float(ev[0]), float(ev[-1])
