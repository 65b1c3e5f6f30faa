"""The J-frame operator S = T T+ and its block machinery.

Block entries are always expressed in [.,.]-orthonormal coordinates of the
two definite halves of a fundamental decomposition, with the minus half
carrying the flipped product -[.,.].  In those coordinates "self-adjoint in
(H_-, -[.,.])" is literally "Hermitian matrix", contraction norms are plain
2-norms, and Krein self-adjointness of a block matrix reads C = -B^H.

Coordinates: for the onb matrix E = [B_+  B_-] and J_c = diag(I_p, -I_q),
the extraction matrix is C = J_c E^H J (so C E = I), and an operator maps
back and forth via  S_hat = C S E,  S = E S_hat C.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    InvariantViolationError,
    NotJFrameError,
    NotMaximalDefiniteError,
    OracleMismatchError,
    RepresentationInconsistentError,
    SingularSError,
)
from .frames import (
    Frame,
    JFrameReport,
    build_frame,
    frame_bounds_on_definite_subspace,
    is_jframe,
)
from .krein import (
    EPS_PD,
    FundamentalDecomposition,
    KreinSpace,
    Subspace,
    SubspaceKind,
    angular_operator,
    classify_subspace,
    fundamental_decomposition_from,
    krein_adjoint,
    oblique_projection,
    orthogonal_companion,
    principal_angle_max,
    same_subspace,
)

#: relative tolerance for bundle identities (S = S+ - S-, QS = S+, JS Hermitian)
TOL_BUNDLE = 1e-12
#: relative tolerance for block reassembly against the ambient S
TOL_REASSEMBLY = 1e-10
#: relative tolerance for the two inverse representations
TOL_INVERSE = 1e-9
#: agreement of the block K with the independently computed angular operator
TOL_ANGULAR_XCHECK = 1e-8
#: relative agreement between spectral bounds and the brute-force oracle
TOL_BOUNDS_ORACLE = 1e-8
#: dual-frame operator must equal S^{-1} to this relative tolerance
TOL_DUAL = 1e-10


def _norm(M) -> float:
    return float(np.linalg.norm(M, 2)) if np.size(M) else 0.0


def _hermitize(M: np.ndarray) -> np.ndarray:
    return (M + M.conj().T) / 2


@dataclass(frozen=True)
class JFrameOperatorBundle:
    """S together with its positive parts and the geometry projection Q."""

    S: np.ndarray
    S_plus: np.ndarray
    S_minus: np.ndarray
    Q: np.ndarray
    frame: Frame
    report: JFrameReport

    @property
    def space(self) -> KreinSpace:
        return self.frame.space

    @property
    def m_plus(self) -> Subspace:
        return self.report.m_plus

    @property
    def m_minus(self) -> Subspace:
        return self.report.m_minus


def jframe_operator(F: Frame, rng_seed: int = 2025) -> JFrameOperatorBundle:
    """S = T T+, S± from the defining sums, Q = P_{M+ || M-}.

    All bundle identities are verified at construction; a violation raises
    InvariantViolationError (it would contradict the definitions, so it
    signals an implementation or conditioning problem, not bad input).
    """
    rep = is_jframe(F)
    if not rep.is_jframe:
        raise NotJFrameError(rep.failure_reason or "family is not a J-frame")
    J = F.space.J
    T = F.synthesis
    S = T @ krein_adjoint(T, F.ell2, F.space)
    S_plus = F.t_plus @ F.t_plus.conj().T @ J
    S_minus = F.t_minus @ F.t_minus.conj().T @ J
    Q = oblique_projection(rep.m_plus, rep.m_minus)

    nS = _norm(S)
    checks = {
        "S = S+ - S-": _norm(S - (S_plus - S_minus)),
        "QS = S+": _norm(Q @ S - S_plus),
        "SQ+ = S+": _norm(S @ krein_adjoint(Q, F.space, F.space) - S_plus),
        "(I-Q)S = -S-": _norm((np.eye(F.space.dim) - Q) @ S + S_minus),
        "JS Hermitian": _norm(J @ S - (J @ S).conj().T),
    }
    for name, resid in checks.items():
        if resid > TOL_BUNDLE * max(nS, 1e-300):
            raise InvariantViolationError(
                f"bundle identity '{name}' fails: residual {resid:.3e} vs "
                f"{TOL_BUNDLE * nS:.3e}")
    rng = np.random.default_rng(rng_seed)
    for _ in range(16):
        f = rng.normal(size=F.space.dim) + 1j * rng.normal(size=F.space.dim)
        for Spm in (S_plus, S_minus):
            val = np.real(f.conj() @ J @ (Spm @ f))
            if val < -1e-10 * np.real(f.conj() @ f) * max(nS, 1.0):
                raise InvariantViolationError(
                    f"positivity of S± fails: [S±f, f] = {val:.3e}")
    return JFrameOperatorBundle(S=S, S_plus=S_plus, S_minus=S_minus, Q=Q,
                                frame=F, report=rep)


def to_coordinates(decomp: FundamentalDecomposition, S: np.ndarray) -> np.ndarray:
    E = decomp.onb
    C = decomp.coordinate_symmetry() @ E.conj().T @ decomp.space.J
    return C @ S @ E


def to_ambient(decomp: FundamentalDecomposition, S_hat: np.ndarray) -> np.ndarray:
    E = decomp.onb
    C = decomp.coordinate_symmetry() @ E.conj().T @ decomp.space.J
    return E @ S_hat @ C


@dataclass(frozen=True)
class BlockRepCork:
    """S = [[A, -AK], [K^H A, D]] w.r.t. (M-^[perp], M-).

    A > 0 on the plus half, ||K|| < 1, and D + K^H A K > 0 on the minus
    half (with its flipped product).
    """

    decomp: FundamentalDecomposition
    A: np.ndarray
    K: np.ndarray
    D: np.ndarray
    DplusKAK: np.ndarray

    @property
    def norm_K(self) -> float:
        return _norm(self.K)

    def reassemble_coordinates(self) -> np.ndarray:
        top = np.hstack([self.A, -self.A @ self.K])
        bot = np.hstack([self.K.conj().T @ self.A, self.D])
        return np.vstack([top, bot])

    def reassemble(self) -> np.ndarray:
        return to_ambient(self.decomp, self.reassemble_coordinates())


@dataclass(frozen=True)
class BlockRepEdinburgh:
    """S = [[A', L D'], [-D' L^H, D']] w.r.t. (M+, M+^[perp])."""

    decomp: FundamentalDecomposition
    Aprime: np.ndarray
    L: np.ndarray
    Dprime: np.ndarray
    AplusLDL: np.ndarray

    @property
    def norm_L(self) -> float:
        return _norm(self.L)

    def reassemble_coordinates(self) -> np.ndarray:
        top = np.hstack([self.Aprime, self.L @ self.Dprime])
        bot = np.hstack([-self.Dprime @ self.L.conj().T, self.Dprime])
        return np.vstack([top, bot])

    def reassemble(self) -> np.ndarray:
        return to_ambient(self.decomp, self.reassemble_coordinates())


def _check_reassembly(name: str, reassembled: np.ndarray, S: np.ndarray) -> float:
    resid = _norm(reassembled - S)
    if resid > TOL_REASSEMBLY * max(_norm(S), 1e-300):
        raise RepresentationInconsistentError(
            f"{name} reassembly off by {resid:.3e} (||S|| = {_norm(S):.3e})")
    return resid


def _check_positive(name: str, M: np.ndarray) -> None:
    if M.size == 0:
        return
    ev = np.linalg.eigvalsh(_hermitize(M))
    if ev[0] <= EPS_PD * max(abs(ev[-1]), 1e-300):
        raise RepresentationInconsistentError(
            f"{name} is not uniformly positive (min eig {ev[0]:.3e})")


def block_rep_cork(bundle: JFrameOperatorBundle) -> BlockRepCork:
    """Representation over the decomposition (M-^[perp], M-)."""
    decomp = fundamental_decomposition_from(bundle.m_minus)
    p = decomp.plus.dim
    S_hat = to_coordinates(decomp, bundle.S)
    A = _hermitize(S_hat[:p, :p])
    B = S_hat[:p, p:]
    D = _hermitize(S_hat[p:, p:])
    K = -np.linalg.solve(A, B) if p else np.zeros((0, decomp.minus.dim), complex)
    # cross-check against the angular operator of M+^[perp]
    m_plus_perp = orthogonal_companion(bundle.m_plus)
    if m_plus_perp.dim:
        ang = angular_operator(m_plus_perp, decomp)
        mismatch = _norm(K - ang.matrix)
        if mismatch > TOL_ANGULAR_XCHECK * max(1.0, _norm(K)):
            raise RepresentationInconsistentError(
                f"Cork K disagrees with the angular operator of M+^[perp] "
                f"by {mismatch:.3e}")
    DplusKAK = _hermitize(D + K.conj().T @ A @ K)
    rep = BlockRepCork(decomp=decomp, A=A, K=K, D=D, DplusKAK=DplusKAK)
    _check_positive("A", A)
    _check_positive("D + K^H A K", DplusKAK)
    if rep.norm_K >= 1:
        raise RepresentationInconsistentError(f"||K|| = {rep.norm_K} >= 1")
    _check_reassembly("Cork", rep.reassemble(), bundle.S)
    return rep


def block_rep_edinburgh(bundle: JFrameOperatorBundle) -> BlockRepEdinburgh:
    """Representation over the decomposition (M+, M+^[perp])."""
    decomp = fundamental_decomposition_from(bundle.m_plus)
    p = decomp.plus.dim
    S_hat = to_coordinates(decomp, bundle.S)
    Aprime = _hermitize(S_hat[:p, :p])
    B = S_hat[:p, p:]
    Dprime = _hermitize(S_hat[p:, p:])
    L = (np.linalg.solve(Dprime.conj().T, B.conj().T).conj().T
         if Dprime.size else np.zeros((p, 0), complex))
    if not bundle.m_minus.is_zero:
        ang = angular_operator(bundle.m_minus, decomp)
        mismatch = _norm(L - ang.matrix)
        if mismatch > TOL_ANGULAR_XCHECK * max(1.0, _norm(L)):
            raise RepresentationInconsistentError(
                f"Edinburgh L disagrees with the angular operator of M- "
                f"by {mismatch:.3e}")
    AplusLDL = _hermitize(Aprime + L @ Dprime @ L.conj().T)
    rep = BlockRepEdinburgh(decomp=decomp, Aprime=Aprime, L=L, Dprime=Dprime,
                            AplusLDL=AplusLDL)
    _check_positive("D'", Dprime)
    _check_positive("A' + L D' L^H", AplusLDL)
    if rep.norm_L >= 1:
        raise RepresentationInconsistentError(f"||L|| = {rep.norm_L} >= 1")
    _check_reassembly("Edinburgh", rep.reassemble(), bundle.S)
    return rep


@dataclass(frozen=True)
class SpmBlockReport:
    """Residuals of the four block forms of S± against the bundle."""

    cork_plus: float
    cork_minus: float
    edinburgh_plus: float
    edinburgh_minus: float

    @property
    def worst(self) -> float:
        return max(self.cork_plus, self.cork_minus,
                   self.edinburgh_plus, self.edinburgh_minus)


def s_pm_block_reps(rep_c: BlockRepCork, rep_e: BlockRepEdinburgh,
                    bundle: JFrameOperatorBundle) -> SpmBlockReport:
    """Verify the block forms of the positive parts S+ and S-."""
    A, K = rep_c.A, rep_c.K
    p, q = A.shape[0], rep_c.D.shape[0]
    KAK = K.conj().T @ A @ K
    cp = np.block([[A, -A @ K], [K.conj().T @ A, -KAK]])
    cm = np.block([[np.zeros((p, p), complex), np.zeros((p, q), complex)],
                   [np.zeros((q, p), complex), -rep_c.DplusKAK]])
    Ap, L, Dp = rep_e.Aprime, rep_e.L, rep_e.Dprime
    pe, qe = Ap.shape[0], Dp.shape[0]
    LDL = L @ Dp @ L.conj().T
    ep = np.block([[rep_e.AplusLDL, np.zeros((pe, qe), complex)],
                   [np.zeros((qe, pe), complex), np.zeros((qe, qe), complex)]])
    em = np.block([[LDL, -L @ Dp], [Dp @ L.conj().T, -Dp]])

    nS = max(_norm(bundle.S), 1e-300)
    report = SpmBlockReport(
        cork_plus=_norm(to_ambient(rep_c.decomp, cp) - bundle.S_plus),
        cork_minus=_norm(to_ambient(rep_c.decomp, cm) - bundle.S_minus),
        edinburgh_plus=_norm(to_ambient(rep_e.decomp, ep) - bundle.S_plus),
        edinburgh_minus=_norm(to_ambient(rep_e.decomp, em) - bundle.S_minus),
    )
    if report.worst > TOL_REASSEMBLY * nS:
        raise RepresentationInconsistentError(
            f"S± block forms off by {report.worst:.3e} (||S|| = {nS:.3e})")
    return report


@dataclass(frozen=True)
class InverseRepResult:
    Sinv_from_cork: np.ndarray
    Sinv_from_edinburgh: np.ndarray
    Z: np.ndarray
    Y: np.ndarray
    residual_cork: float
    residual_edinburgh: float
    duality_residual: float


def inverse_block_reps(rep_c: BlockRepCork, rep_e: BlockRepEdinburgh,
                       bundle: JFrameOperatorBundle) -> InverseRepResult:
    """Assemble both block forms of S^{-1} and verify them.

    Also checks the duality remark: in Cork coordinates the inverse is an
    Edinburgh-form matrix whose entries are D' = Z, L = K and
    A' + L D' L^H = A^{-1}.
    """
    A, K = rep_c.A, rep_c.K
    Z = np.linalg.inv(rep_c.DplusKAK)
    Ainv = np.linalg.inv(A)
    KZ = K @ Z
    inv_c = np.block([[Ainv - KZ @ K.conj().T, KZ],
                      [-Z @ K.conj().T, Z]])
    L, Dp = rep_e.L, rep_e.Dprime
    Y = np.linalg.inv(rep_e.AplusLDL)
    inv_e = np.block([[Y, -Y @ L],
                      [L.conj().T @ Y, np.linalg.inv(Dp) - L.conj().T @ Y @ L]])

    Sinv = np.linalg.inv(bundle.S)
    amb_c = to_ambient(rep_c.decomp, inv_c)
    amb_e = to_ambient(rep_e.decomp, inv_e)
    nI = max(_norm(Sinv), 1e-300)
    res_c = _norm(amb_c - Sinv)
    res_e = _norm(amb_e - Sinv)
    if max(res_c, res_e) > TOL_INVERSE * nI:
        raise RepresentationInconsistentError(
            f"inverse block forms off by {max(res_c, res_e):.3e} "
            f"(||S^-1|| = {nI:.3e})")

    # duality: read the Cork-coordinate inverse as an Edinburgh-form matrix
    p = A.shape[0]
    Shat_inv = np.linalg.inv(to_coordinates(rep_c.decomp, bundle.S))
    Dp_dual = Shat_inv[p:, p:]
    L_dual = (np.linalg.solve(Dp_dual.conj().T, Shat_inv[:p, p:].conj().T).conj().T
              if Dp_dual.size else np.zeros((p, 0), complex))
    dual_res = max(
        _norm(Dp_dual - Z),
        _norm(L_dual - K),
        _norm(_hermitize(Shat_inv[:p, :p] + L_dual @ Dp_dual @ L_dual.conj().T) - Ainv),
    )
    if dual_res > TOL_INVERSE * max(1.0, nI):
        raise RepresentationInconsistentError(
            f"inverse duality (D'=Z, L=K, A'+LD'L^H=A^-1) off by {dual_res:.3e}")
    return InverseRepResult(Sinv_from_cork=amb_c, Sinv_from_edinburgh=amb_e,
                            Z=Z, Y=Y, residual_cork=res_c, residual_edinburgh=res_e,
                            duality_residual=dual_res)


@dataclass(frozen=True)
class JFrameBounds:
    """Optimal J-frame bounds and dual J-frame bounds."""

    alpha_plus: float
    beta_plus: float
    alpha_minus: float
    beta_minus: float
    gamma_plus: float
    delta_plus: float
    gamma_minus: float
    delta_minus: float

    def as_dict(self) -> dict:
        return {
            "alpha_plus": self.alpha_plus, "beta_plus": self.beta_plus,
            "alpha_minus": self.alpha_minus, "beta_minus": self.beta_minus,
            "gamma_plus": self.gamma_plus, "delta_plus": self.delta_plus,
            "gamma_minus": self.gamma_minus, "delta_minus": self.delta_minus,
        }


def _extremes(M: np.ndarray) -> tuple[float, float]:
    if M.size == 0:
        return (0.0, 0.0)
    ev = np.linalg.eigvalsh(_hermitize(M))
    return float(ev[0]), float(ev[-1])


def jframe_bounds(rep_c: BlockRepCork, rep_e: BlockRepEdinburgh,
                  F: Frame) -> JFrameBounds:
    """Bounds as numerical-range extremes of the uniformly positive entries.

    alpha-/beta- from W(D + K^H A K), alpha+/beta+ from W(A' + L D' L^H),
    gamma+/delta+ from W(A^{-1}), gamma-/delta- from W(D'^{-1}); the primal
    pairs are cross-checked against the brute-force subspace oracle.
    """
    am, bm = _extremes(rep_c.DplusKAK)
    ap, bp = _extremes(rep_e.AplusLDL)
    gp, dp = _extremes(np.linalg.inv(rep_c.A)) if rep_c.A.size else (0.0, 0.0)
    gm, dm = _extremes(np.linalg.inv(rep_e.Dprime)) if rep_e.Dprime.size else (0.0, 0.0)
    bounds = JFrameBounds(alpha_plus=ap, beta_plus=bp, alpha_minus=am,
                          beta_minus=bm, gamma_plus=gp, delta_plus=dp,
                          gamma_minus=gm, delta_minus=dm)
    for side, spectral in ((+1, (ap, bp)), (-1, (am, bm))):
        oracle = frame_bounds_on_definite_subspace(F, side)
        scale = max(abs(oracle[0]), abs(oracle[1]), 1e-300)
        err = max(abs(spectral[0] - oracle[0]), abs(spectral[1] - oracle[1])) / scale
        if err > TOL_BOUNDS_ORACLE:
            raise OracleMismatchError(
                f"side {side:+d}: spectral bounds {spectral} vs oracle {oracle} "
                f"(relative error {err:.3e})", spectral=spectral, oracle=oracle)
    return bounds


def dual_frame(F: Frame, bundle: JFrameOperatorBundle) -> Frame:
    """Canonical dual {S^{-1} f_i}; verifies the duality theorem.

    Any verification failure raises (it would contradict the theorem).
    """
    Sinv = np.linalg.inv(bundle.S)
    dual_vectors = (Sinv @ F.vectors).T
    Fd = build_frame(F.space, dual_vectors)
    if Fd.i_plus != F.i_plus or Fd.i_minus != F.i_minus:
        raise InvariantViolationError(
            "dual frame does not preserve the sign partition")
    bundle_d = jframe_operator(Fd)
    nI = max(_norm(Sinv), 1e-300)
    resid = _norm(bundle_d.S - Sinv)
    if resid > TOL_DUAL * nI:
        raise InvariantViolationError(
            f"dual J-frame operator differs from S^-1 by {resid:.3e}")
    span_p = bundle_d.m_plus
    span_m = bundle_d.m_minus
    if not same_subspace(span_p, orthogonal_companion(bundle.m_minus)):
        raise InvariantViolationError("span{S^-1 f_i : i in I+} != M-^[perp]")
    if not same_subspace(span_m, orthogonal_companion(bundle.m_plus)):
        raise InvariantViolationError("span{S^-1 f_i : i in I-} != M+^[perp]")
    return Fd


@dataclass(frozen=True)
class OperatorConditionsReport:
    image_maximal_positive: bool
    nonneg_on_l_plus: bool
    nonpos_on_companion: bool
    details: dict

    @property
    def all_ok(self) -> bool:
        return (self.image_maximal_positive and self.nonneg_on_l_plus
                and self.nonpos_on_companion)


def verify_operator_conditions(S, L_plus: Subspace,
                               space: KreinSpace) -> OperatorConditionsReport:
    """Check the three J-frame-operator conditions for a candidate L+.

    (i) S(L+) is maximal uniformly positive; (ii) [Sf, f] >= 0 on L+;
    (iii) [Sg, g] <= 0 on (S(L+))^[perp].  For the M-^[perp] of a genuine
    J-frame all three must come out true.
    """
    S = np.asarray(S, dtype=complex)
    J = space.J
    if np.linalg.norm(J @ S - (J @ S).conj().T, 2) > 1e-10 * max(_norm(S), 1e-300):
        raise ValueError("S must be self-adjoint in the Krein space (JS Hermitian)")
    sv = np.linalg.svd(S, compute_uv=False)
    if sv[-1] <= 1e-12 * sv[0]:
        raise SingularSError("S is numerically singular")
    cls = classify_subspace(L_plus)
    if not (cls.tag is SubspaceKind.UNIFORMLY_POSITIVE and cls.maximal):
        raise NotMaximalDefiniteError(
            f"L+ must be maximal uniformly positive, got {cls.tag.value} "
            f"(maximal={cls.maximal})")
    image = Subspace.from_basis(space, S @ L_plus.basis)
    icls = classify_subspace(image)
    cond_i = bool(icls.tag is SubspaceKind.UNIFORMLY_POSITIVE and icls.maximal)

    B = L_plus.basis
    comp = _hermitize(B.conj().T @ J @ S @ B)
    ev = np.linalg.eigvalsh(comp) if comp.size else np.array([0.0])
    scale = max(np.abs(ev).max(), 1e-300)
    cond_ii = bool(ev[0] >= -EPS_PD * scale)

    comp_space = orthogonal_companion(image)
    if comp_space.is_zero:
        cond_iii = True
        ev2 = np.array([])
    else:
        C = comp_space.basis
        comp2 = _hermitize(C.conj().T @ J @ S @ C)
        ev2 = np.linalg.eigvalsh(comp2)
        cond_iii = bool(ev2[-1] <= EPS_PD * max(np.abs(ev2).max(), 1e-300))
    return OperatorConditionsReport(
        image_maximal_positive=cond_i,
        nonneg_on_l_plus=cond_ii,
        nonpos_on_companion=cond_iii,
        details={"image_class": icls, "min_eig_on_l_plus": float(ev[0]),
                 "max_eig_on_companion": float(ev2[-1]) if ev2.size else 0.0},
    )


def factorization_residual(rep_c: BlockRepCork, bundle: JFrameOperatorBundle) -> float:
    """||S_hat - [[I,0],[K^H,I]] diag(A, D+K^H A K) [[I,-K],[0,I]]|| / ||S||."""
    A, K = rep_c.A, rep_c.K
    p, q = A.shape[0], rep_c.D.shape[0]
    lower = np.block([[np.eye(p, dtype=complex), np.zeros((p, q), complex)],
                      [K.conj().T, np.eye(q, dtype=complex)]])
    diag = np.block([[A, np.zeros((p, q), complex)],
                     [np.zeros((q, p), complex), rep_c.DplusKAK]])
    upper = np.block([[np.eye(p, dtype=complex), -K],
                      [np.zeros((q, p), complex), np.eye(q, dtype=complex)]])
    S_hat = to_coordinates(rep_c.decomp, bundle.S)
    return _norm(S_hat - lower @ diag @ upper) / max(_norm(bundle.S), 1e-300)


def q_block_residual(rep_c: BlockRepCork, bundle: JFrameOperatorBundle) -> float:
    """||Q - [[I,0],[K^H,0]]|| in Cork coordinates, relative to ||Q||."""
    p, q = rep_c.A.shape[0], rep_c.D.shape[0]
    Q_hat = to_coordinates(rep_c.decomp, bundle.Q)
    block = np.block([[np.eye(p, dtype=complex), np.zeros((p, q), complex)],
                      [rep_c.K.conj().T, np.zeros((q, q), complex)]])
    return _norm(Q_hat - block) / max(_norm(bundle.Q), 1e-300)
