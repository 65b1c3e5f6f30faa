"""Principal square root and the Krein polar machinery.

The square root is pinned to the sector |arg z| < pi/4 of the open right
half-plane, with the principal branch Re z^(1/2) > 0.  Two independent
constructions ship: a Schur-triangularization recurrence (primary) and a
contour-quadrature evaluation of the resolvent integral (oracle).  They
must agree; disagreement is an alarm, not a tolerance question.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg as sla
from scipy.optimize import minimize_scalar

from .errors import (
    CannotEncloseError,
    ContourTooCloseError,
    InvariantViolationError,
    NonRegularKernelError,
    OperatorMismatchError,
    RecurrenceBreakdownError,
    SingularSError,
    SpectrumNotInRHPError,
)
from .frames import Frame, build_frame, is_jframe
from .jframe import JFrameOperatorBundle, _norm
from .krein import (
    TAU_RANK,
    KreinSpace,
    Subspace,
    krein_adjoint,
    orthogonal_companion,
    selfadjoint_projection,
)
from .spectral import SpectrumData, spectrum

#: required relative residual ||P^2 - S|| / ||S|| of the triangular root
TOL_SQRT_RESID = 1e-9
#: required Krein self-adjointness ||JP - (JP)^H|| / ||P||
TOL_SQRT_SELFADJ = 1e-9
#: co-isometry and polar reassembly tolerance
TOL_POLAR = 1e-10
#: contour nodes may not come closer to sigma(S) than this fraction of r
CONTOUR_MIN_DIST = 1e-3


@dataclass(frozen=True)
class SqrtResult:
    P: np.ndarray
    method: str  # "Triangular" | "Contour"
    residual: float
    sector_ok: bool
    krein_selfadjoint_residual: float


def _sector_ok(eigs: np.ndarray) -> bool:
    return bool(np.all(np.abs(np.angle(eigs)) < np.pi / 4))


def _sqrt_result(P: np.ndarray, S: np.ndarray, J: Optional[np.ndarray],
                 method: str) -> SqrtResult:
    resid = _norm(P @ P - S) / max(_norm(S), 1e-300)
    if J is not None:
        JP = J @ P
        selfadj = _norm(JP - JP.conj().T) / max(_norm(P), 1e-300)
    else:
        selfadj = np.inf
    return SqrtResult(P=P, method=method, residual=resid,
                      sector_ok=_sector_ok(np.linalg.eigvals(P)),
                      krein_selfadjoint_residual=selfadj)


def principal_sqrt_triangular(S, space: Optional[KreinSpace] = None) -> SqrtResult:
    """Square root via complex Schur form and the triangular recurrence.

    Requires Re lambda > 0 for every eigenvalue (guaranteed for J-frame
    operators).  The result's invariants are enforced: failing them means
    the input was outside the admissible class or conditioning collapsed.
    """
    S = np.asarray(S, dtype=complex)
    n = S.shape[0]
    T, Zu = sla.schur(S, output="complex")
    diag = np.diag(T)
    if np.any(diag.real <= 0):
        raise SpectrumNotInRHPError(
            f"eigenvalue with Re lambda = {diag.real.min():.3e} <= 0")
    U = np.zeros_like(T)
    np.fill_diagonal(U, np.sqrt(diag))
    scale = max(np.abs(np.diag(U)).max(), 1e-300)
    for j in range(n):
        for i in range(j - 1, -1, -1):
            denom = U[i, i] + U[j, j]
            if abs(denom) <= 1e-14 * scale:
                raise RecurrenceBreakdownError(
                    f"sqrt recurrence breakdown at block ({i}, {j})")
            U[i, j] = (T[i, j] - U[i, i + 1 : j] @ U[i + 1 : j, j]) / denom
    P = Zu @ U @ Zu.conj().T
    result = _sqrt_result(P, S, space.J if space is not None else None, "Triangular")
    if result.residual > TOL_SQRT_RESID:
        raise InvariantViolationError(
            f"triangular sqrt residual {result.residual:.3e} > {TOL_SQRT_RESID:.0e}")
    if not result.sector_ok:
        raise InvariantViolationError("sqrt spectrum left the sector |arg| < pi/4")
    if space is not None and result.krein_selfadjoint_residual > TOL_SQRT_SELFADJ:
        raise InvariantViolationError(
            f"sqrt lost Krein self-adjointness: "
            f"{result.krein_selfadjoint_residual:.3e}")
    return result


@dataclass(frozen=True)
class ContourSpec:
    """Circular Jordan curve |z - center| = radius in the right half-plane."""

    center: float
    radius: float
    nodes: int = 64

    def __post_init__(self):
        if self.center - self.radius <= 0:
            raise ValueError("contour must stay in the open right half-plane")
        if self.radius <= 0:
            raise ValueError("radius must be positive")
        if self.nodes < 16:
            raise ValueError("need at least 16 quadrature nodes")


def default_contour(spec_data: SpectrumData, nodes: int = 64) -> ContourSpec:
    """Circle enclosing the spectrum, balanced for quadrature accuracy.

    Targets a 25% relative interior margin together with
    center - radius >= 0.5 * min Re lambda; when those two conflict the
    circle is re-centered at the minimizer of the enclosing radius and the
    margin relaxes down to the hard 10% floor (with center - radius > 0).
    """
    eigs = spec_data.eigenvalues
    m = float(eigs.real.min())
    if m <= 0:
        raise SpectrumNotInRHPError("spectrum not in the open right half-plane")
    big = float(np.abs(eigs).max())

    def radius_about(c: float) -> float:
        return float(np.abs(eigs - c).max())

    c = (m + 1.1 * big) / 2
    r0 = radius_about(c)
    lo, hi = r0 / 0.75, c - 0.5 * m
    if lo <= hi:
        r = float(np.clip(np.sqrt(c * r0), lo, hi))
        return ContourSpec(center=c, radius=r, nodes=nodes)
    # re-center to minimize the enclosing radius, then retry
    res = minimize_scalar(radius_about, bounds=(m, 1.1 * big + m), method="bounded")
    c = float(res.x)
    r0 = radius_about(c)
    lo, hi = r0 / 0.75, c - 0.5 * m
    if lo <= hi:
        r = float(np.clip(np.sqrt(c * r0), lo, hi))
        return ContourSpec(center=c, radius=r, nodes=nodes)
    if r0 / 0.9 < c:
        return ContourSpec(center=c, radius=r0 / 0.9, nodes=nodes)
    raise CannotEncloseError(
        f"spectrum too wide: need radius {r0 / 0.9:.3e} at center {c:.3e}")


def riesz_dunford_sqrt(S, contour: ContourSpec,
                       space: Optional[KreinSpace] = None) -> SqrtResult:
    """Trapezoidal quadrature of (1/2 pi i) \\oint z^(1/2) (z - S)^(-1) dz.

    The branch is the principal one (Re z^(1/2) > 0 on the right
    half-plane).  Accuracy is geometric in the node count; residuals are
    reported, not enforced, because coarse node counts are legitimate
    inputs for convergence measurements.
    """
    S = np.asarray(S, dtype=complex)
    eigs = np.linalg.eigvals(S)
    c, r, N = contour.center, contour.radius, contour.nodes
    dist = np.abs(np.abs(eigs - c) - r)
    if np.any(np.abs(eigs - c) >= r) or dist.min() < CONTOUR_MIN_DIST * r:
        raise ContourTooCloseError(
            f"contour (c={c:.4g}, r={r:.4g}) too close to the spectrum "
            f"(min distance {dist.min():.3e})")
    if np.abs(eigs - c).max() > 0.9 * r:
        raise ContourTooCloseError(
            f"interior margin below 10% of the radius for (c={c:.4g}, r={r:.4g})")
    n = S.shape[0]
    theta = 2 * np.pi * np.arange(N) / N
    P = np.zeros((n, n), dtype=complex)
    I = np.eye(n, dtype=complex)
    for t in theta:
        z = c + r * np.exp(1j * t)
        P += np.sqrt(z) * (r * np.exp(1j * t)) * np.linalg.solve(z * I - S, I)
    P /= N
    return _sqrt_result(P, S, space.J if space is not None else None, "Contour")


@dataclass(frozen=True)
class PolarResult:
    P: np.ndarray
    U: np.ndarray
    coisometry_residual: float
    initial_space: Subspace
    reassembly_residual: float
    initial_projection_residual: float


def kernel_companion(F: Frame) -> Subspace:
    """N(T)^[perp] inside the coefficient Krein space of F."""
    K = sla.null_space(F.synthesis, rcond=TAU_RANK)
    kernel = (Subspace.from_basis(F.ell2, K) if K.shape[1]
              else Subspace.zero(F.ell2))
    return orthogonal_companion(kernel)


def polar_decompose(F: Frame, bundle: JFrameOperatorBundle) -> PolarResult:
    """T = S^(1/2) U with a Krein co-isometry U, initial space N(T)^[perp]."""
    P = principal_sqrt_triangular(bundle.S, F.space).P
    T = F.synthesis
    U = np.linalg.solve(P, T)
    Uplus = krein_adjoint(U, F.ell2, F.space)
    coiso = _norm(U @ Uplus - np.eye(F.space.dim))
    reass = _norm(T - P @ U) / max(_norm(T), 1e-300)
    initial = kernel_companion(F)
    s = (np.linalg.svd(initial.gram, compute_uv=False)
         if initial.dim else np.array([1.0]))
    if initial.dim and s[-1] <= TAU_RANK * s[0]:
        raise NonRegularKernelError(
            "N(T)^[perp] is degenerate in the coefficient space")
    E = selfadjoint_projection(initial)
    proj_resid = _norm(Uplus @ U - E)
    if coiso > TOL_POLAR:
        raise InvariantViolationError(f"UU+ - I residual {coiso:.3e}")
    if reass > TOL_POLAR:
        raise InvariantViolationError(f"T - PU residual {reass:.3e}")
    return PolarResult(P=P, U=U, coisometry_residual=coiso,
                       initial_space=initial, reassembly_residual=reass,
                       initial_projection_residual=proj_resid)


@dataclass(frozen=True)
class ConnectResult:
    W: np.ndarray
    t2_residual: float
    partial_isometry_residual: float
    initial_projection_residual: float
    final_projection_residual: float


def connect_two_frames(F1: Frame, F2: Frame,
                       bundle1: Optional[JFrameOperatorBundle] = None,
                       bundle2: Optional[JFrameOperatorBundle] = None) -> ConnectResult:
    """Partial isometry W with T2 = T1 W for frames sharing one operator.

    W = U1+ U2 from the two polar decompositions; its initial/final spaces
    are N(T2)^[perp] and N(T1)^[perp].
    """
    from .jframe import jframe_operator

    if bundle1 is None:
        bundle1 = jframe_operator(F1)
    if bundle2 is None:
        bundle2 = jframe_operator(F2)
    nS = max(_norm(bundle1.S), 1e-300)
    if _norm(bundle1.S - bundle2.S) > 1e-10 * nS:
        raise OperatorMismatchError(
            f"frame operators differ by {_norm(bundle1.S - bundle2.S):.3e}")
    p1 = polar_decompose(F1, bundle1)
    p2 = polar_decompose(F2, bundle2)
    W = krein_adjoint(p1.U, F1.ell2, F1.space) @ p2.U
    Wplus = krein_adjoint(W, F2.ell2, F1.ell2)
    E1 = selfadjoint_projection(p1.initial_space)
    E2 = selfadjoint_projection(p2.initial_space)
    return ConnectResult(
        W=W,
        t2_residual=_norm(F2.synthesis - F1.synthesis @ W)
        / max(_norm(F2.synthesis), 1e-300),
        partial_isometry_residual=_norm(W @ Wplus @ W - W),
        final_projection_residual=_norm(W @ Wplus - E1),
        initial_projection_residual=_norm(Wplus @ W - E2),
    )


def random_j_unitary(signature: KreinSpace, seed, scale: float = 0.5) -> np.ndarray:
    """exp(G) for a random J-skew-Hermitian G ((JG)^H = -JG).

    Entries of the raw generator are centered complex Gaussians of the
    given scale (default 0.5), which keeps the hyperbolic growth of the
    factors moderate.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    n, J = signature.dim, signature.J
    M = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) * (scale / np.sqrt(2))
    G = (M - J @ M.conj().T @ J) / 2
    V = sla.expm(G)
    resid = _norm(krein_adjoint(V, signature, signature) @ V - np.eye(n))
    if resid > 1e-10:
        raise InvariantViolationError(f"random J-unitary failed V+V = I ({resid:.3e})")
    return V


@dataclass(frozen=True)
class SynthesisResult:
    frame: Frame
    operator_residual: float
    partition_ok: bool
    sign_flips: tuple[int, ...]
    jframe_ok: bool


def synthesize_from_operator(S, space: KreinSpace, n_plus: int, n_minus: int,
                             seed, unitaries=None) -> SynthesisResult:
    """A J-frame with operator S and prescribed sign-partition sizes.

    T = S^(1/2) U for the co-isometry U = W_H V+ W_l, where V is the
    isometric embedding of a fundamental decomposition into the matching
    coefficient coordinates and W_H, W_l are random J-unitaries drawn from
    ``seed`` (pass ``unitaries=(W_H, W_l)`` to pin them).  Whether every
    synthesized vector individually lands on its prescribed sign is not
    guaranteed; mismatches are returned in ``sign_flips``, never hidden.
    """
    S = np.asarray(S, dtype=complex)
    if n_plus < space.p or n_minus < space.q:
        raise ValueError(
            f"need n_plus >= {space.p} and n_minus >= {space.q}")
    J = space.J
    if _norm(J @ S - (J @ S).conj().T) > 1e-10 * max(_norm(S), 1e-300):
        raise ValueError("S must be self-adjoint in the Krein space (JS Hermitian)")
    sv = np.linalg.svd(S, compute_uv=False)
    if sv[-1] <= 1e-12 * sv[0]:
        raise SingularSError("S is numerically singular")
    P = principal_sqrt_triangular(S, space).P

    ell2 = KreinSpace.canonical(n_plus, n_minus)
    N = n_plus + n_minus
    Bp, Bm = space.canonical_axes()
    V = np.zeros((N, space.dim), dtype=complex)
    V[: space.p] = Bp.conj().T @ J
    V[n_plus : n_plus + space.q] = -Bm.conj().T @ J
    U0 = J @ V.conj().T @ ell2.J  # V+
    if unitaries is None:
        rng = np.random.default_rng(seed)
        W_h = random_j_unitary(space, rng)
        W_l = random_j_unitary(ell2, rng)
    else:
        W_h, W_l = unitaries
    U = W_h @ U0 @ W_l
    T = P @ U

    resid = _norm(T @ ell2.J @ T.conj().T @ J - S) / max(_norm(S), 1e-300)
    frame = build_frame(space, T.T)
    prescribed_plus = set(range(n_plus))
    flips = tuple(sorted(set(frame.i_plus).symmetric_difference(prescribed_plus)))
    partition_ok = not flips
    return SynthesisResult(
        frame=frame,
        operator_residual=resid,
        partition_ok=partition_ok,
        sign_flips=flips,
        jframe_ok=is_jframe(frame).is_jframe,
    )
