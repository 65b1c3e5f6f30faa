"""Spectrum, Schur complements, and the spectral enclosure regions.

Eigenvalues are reported as cluster means: computed eigenvalues closer
than TAU_CLUSTER are grouped and each group is replaced by its arithmetic
mean, repeated with the group size.  The mean of a defective cluster is
well-conditioned (it is a trace of an invariant block) even though the
individual eigenvalues carry O(eps^(1/m)) noise, so this is what makes
algebraic multiplicities reportable at all.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import KreinFrameError
from .jframe import BlockRepCork, BlockRepEdinburgh, JFrameBounds, _norm

#: eigenvalues within TAU_CLUSTER * (1 + |lambda|) form one cluster
TAU_CLUSTER = 2e-7
#: |Im lambda| <= TAU_REAL * (1 + |lambda|) counts as real
TAU_REAL = 1e-9
#: boundary slack for region membership
TAU_ENCL = 1e-9
#: conjugate-pairing tolerance for the symmetry of the spectrum
TAU_CONJ = 1e-8


class LambdaInSpectrumError(KreinFrameError):
    """Schur complement evaluated at a point of sigma(A) (resp. sigma(D'))."""


@dataclass(frozen=True)
class SpectrumData:
    """Eigenvalues with algebraic multiplicities (cluster means, repeated)."""

    eigenvalues: np.ndarray
    is_real: np.ndarray
    real_part_min: float

    @property
    def real_values(self) -> np.ndarray:
        return self.eigenvalues[self.is_real]

    @property
    def nonreal_values(self) -> np.ndarray:
        return self.eigenvalues[~self.is_real]


def _cluster_means(raw: np.ndarray) -> np.ndarray:
    """Union-find clustering at TAU_CLUSTER, each cluster -> its mean."""
    n = raw.size
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            tol = TAU_CLUSTER * (1 + max(abs(raw[i]), abs(raw[j])))
            if abs(raw[i] - raw[j]) <= tol:
                parent[find(i)] = find(j)
    out = np.empty(n, dtype=complex)
    roots: dict[int, list[int]] = {}
    for i in range(n):
        roots.setdefault(find(i), []).append(i)
    for members in roots.values():
        mean = raw[members].mean()
        for i in members:
            out[i] = mean
    return out


def spectrum(S, J: Optional[np.ndarray] = None) -> SpectrumData:
    """All eigenvalues of S (with multiplicity, as cluster means).

    When J is given and JS is Hermitian, conjugate symmetry of the
    spectrum is validated (such spectra are symmetric w.r.t. the real
    axis).
    """
    S = np.asarray(S, dtype=complex)
    try:
        raw = np.linalg.eigvals(S)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise KreinFrameError(f"eigensolver failed: {exc}") from exc
    vals = _cluster_means(raw)
    order = np.lexsort((vals.imag, vals.real))
    vals = vals[order]
    is_real = np.abs(vals.imag) <= TAU_REAL * (1 + np.abs(vals))
    if J is not None:
        JS = np.asarray(J, dtype=complex) @ S
        if np.linalg.norm(JS - JS.conj().T, 2) <= 1e-10 * max(_norm(S), 1e-300):
            _check_conjugate_symmetry(vals)
    return SpectrumData(eigenvalues=vals, is_real=is_real,
                        real_part_min=float(vals.real.min()))


def _check_conjugate_symmetry(vals: np.ndarray) -> None:
    remaining = list(vals)
    for lam in vals:
        best, best_d = None, np.inf
        for i, mu in enumerate(remaining):
            d = abs(np.conj(lam) - mu)
            if d < best_d:
                best, best_d = i, d
        if best is None or best_d > TAU_CONJ * (1 + abs(lam)):
            raise KreinFrameError(
                f"spectrum is not conjugate-symmetric: no partner for {lam}")
        remaining.pop(best)


def schur_complement_2(rep_c: BlockRepCork, lam: complex) -> np.ndarray:
    """S2(lambda) = D - lambda + K^H A (A - lambda)^{-1} A K, lambda not in sigma(A)."""
    A, K, D = rep_c.A, rep_c.K, rep_c.D
    evA = np.linalg.eigvalsh(A)
    if evA.size and np.min(np.abs(evA - lam)) <= 1e-12 * max(np.abs(evA).max(), 1.0):
        raise LambdaInSpectrumError(f"lambda = {lam} lies in sigma(A)")
    q = D.shape[0]
    shift = np.linalg.solve(A - lam * np.eye(A.shape[0]), A @ K) if A.size else K
    return D - lam * np.eye(q) + K.conj().T @ A @ shift


def schur_complement_1(rep_e: BlockRepEdinburgh, lam: complex) -> np.ndarray:
    """S1(lambda) = A' - lambda + L D' (D' - lambda)^{-1} D' L^H, lambda not in sigma(D')."""
    Ap, L, Dp = rep_e.Aprime, rep_e.L, rep_e.Dprime
    evD = np.linalg.eigvalsh(Dp)
    if evD.size and np.min(np.abs(evD - lam)) <= 1e-12 * max(np.abs(evD).max(), 1.0):
        raise LambdaInSpectrumError(f"lambda = {lam} lies in sigma(D')")
    p = Ap.shape[0]
    shift = np.linalg.solve(Dp - lam * np.eye(Dp.shape[0]), Dp @ L.conj().T) if Dp.size else L.conj().T
    return Ap - lam * np.eye(p) + L @ Dp @ shift


def schur_detects(rep, lam: complex, which: int) -> float:
    """Relative smallest singular value of the Schur complement at lambda.

    Near zero exactly when lambda is in sigma(S); the companion predicate
    for the spectral equivalence of S and its Schur complements.  The
    normalization is a characteristic scale of the pencil (not sigma_max of
    the evaluated complement, which is useless for 1x1 complements).
    """
    M = schur_complement_2(rep, lam) if which == 2 else schur_complement_1(rep, lam)
    if M.size == 0:
        return np.inf
    diag = rep.DplusKAK if which == 2 else rep.AplusLDL
    scale = float(np.linalg.norm(diag, 2)) + abs(lam)
    sv = np.linalg.svd(M, compute_uv=False)
    return float(sv[-1] / max(sv[0], scale, 1e-300))


@dataclass(frozen=True)
class EnclosureRegion:
    """Conjunction of primitive sets enclosing parts of sigma(S).

    Non-real eigenvalues must lie in every disk, right of the half-plane
    threshold, and inside the horizontal strip (when present); real
    eigenvalues must lie in real_interval.  Open/closed only matters at
    the boundary, where membership reports contact instead of failure.
    """

    source: str
    disks: tuple[tuple[float, float, bool], ...]
    halfplane_re_gt: Optional[float]
    real_interval: tuple[float, float]
    imag_abs_max: Optional[float]
    parameters: dict = field(default_factory=dict)


def enclosure_cork(rep_c: BlockRepCork) -> EnclosureRegion:
    """Region from the first block representation.

    Non-real spectrum: open disk of center/radius a+ intersected with
    Re > b-/2; real spectrum: [min(a-, b-), max(a+, d+)].  The horizontal
    strip |Im z| <= ||AK|| is attached.
    """
    a_m, a_p = _w_interval(rep_c.A)
    d_m, d_p = _w_interval(rep_c.D)
    b_m, b_p = _w_interval(rep_c.DplusKAK)
    nAK = _norm(rep_c.A @ rep_c.K)
    return EnclosureRegion(
        source="CorkThm51i",
        disks=((a_p, a_p, True),),
        halfplane_re_gt=b_m / 2,
        real_interval=(min(a_m, b_m), max(a_p, d_p)),
        imag_abs_max=nAK,
        parameters={"a_minus": a_m, "a_plus": a_p, "d_minus": d_m, "d_plus": d_p,
                    "b_minus": b_m, "b_plus": b_p, "norm_AK": nAK},
    )


def enclosure_edinburgh(rep_e: BlockRepEdinburgh) -> EnclosureRegion:
    a_m, a_p = _w_interval(rep_e.Aprime)
    d_m, d_p = _w_interval(rep_e.Dprime)
    b_m, b_p = _w_interval(rep_e.AplusLDL)
    nLD = _norm(rep_e.L @ rep_e.Dprime)
    return EnclosureRegion(
        source="EdinburghThm51ii",
        disks=((d_p, d_p, True),),
        halfplane_re_gt=b_m / 2,
        real_interval=(min(d_m, b_m), max(a_p, d_p)),
        imag_abs_max=nLD,
        parameters={"a_prime_minus": a_m, "a_prime_plus": a_p,
                    "d_prime_minus": d_m, "d_prime_plus": d_p,
                    "b_prime_minus": b_m, "b_prime_plus": b_p, "norm_LD": nLD},
    )


def enclosure_imag_strip(rep_c: BlockRepCork) -> EnclosureRegion:
    """The remark's strip |Im z| <= ||AK|| alone (no real-part constraint)."""
    nAK = _norm(rep_c.A @ rep_c.K)
    return EnclosureRegion(
        source="ImagBoundRemark",
        disks=(),
        halfplane_re_gt=None,
        real_interval=(-np.inf, np.inf),
        imag_abs_max=nAK,
        parameters={"norm_AK": nAK},
    )


def enclosure_from_bounds(bounds: JFrameBounds) -> EnclosureRegion:
    """Region expressed through the J-frame bounds and their duals."""
    eps_minus = max(min(1 / bounds.delta_plus, bounds.alpha_minus),
                    min(1 / bounds.delta_minus, bounds.alpha_plus))
    eps_plus = min(max(1 / bounds.gamma_plus, bounds.beta_minus),
                   max(1 / bounds.gamma_minus, bounds.beta_plus))
    alpha = max(bounds.alpha_plus, bounds.alpha_minus)
    gamma = max(bounds.gamma_plus, bounds.gamma_minus)
    return EnclosureRegion(
        source="BoundsCor52",
        disks=((1 / gamma, 1 / gamma, True),),
        halfplane_re_gt=alpha / 2,
        real_interval=(eps_minus, eps_plus),
        imag_abs_max=None,
        parameters={"eps_minus": eps_minus, "eps_plus": eps_plus,
                    "alpha": alpha, "gamma": gamma},
    )


def _w_interval(M: np.ndarray) -> tuple[float, float]:
    if M.size == 0:
        return (np.inf, -np.inf)
    ev = np.linalg.eigvalsh((M + M.conj().T) / 2)
    return float(ev[0]), float(ev[-1])


@dataclass(frozen=True)
class MembershipReport:
    region_source: str
    statuses: tuple[str, ...]  # per eigenvalue: "inside" | "boundary" | "violation"
    all_contained: bool
    tol: float
    #: how far the worst eigenvalue sits outside the region (0 when contained)
    worst_violation: float


def check_membership(spec: SpectrumData, region: EnclosureRegion,
                     tol: float = TAU_ENCL) -> MembershipReport:
    """Containment of every eigenvalue, with boundary slack tol*(1+|lambda|)."""
    statuses = []
    depth = 0.0
    for lam, real in zip(spec.eigenvalues, spec.is_real):
        slack = tol * (1 + abs(lam))
        margins = []
        if real:
            lo, hi = region.real_interval
            x = lam.real
            if np.isfinite(lo):
                margins.append(x - lo)
            if np.isfinite(hi):
                margins.append(hi - x)
        else:
            for c, r, _open in region.disks:
                margins.append(r - abs(lam - c))
            if region.halfplane_re_gt is not None:
                margins.append(lam.real - region.halfplane_re_gt)
            if region.imag_abs_max is not None:
                margins.append(region.imag_abs_max - abs(lam.imag))
        worst = min(margins) if margins else np.inf
        if worst > slack:
            statuses.append("inside")
        elif worst >= -slack:
            statuses.append("boundary")
        else:
            statuses.append("violation")
            depth = max(depth, -(worst + slack))
    return MembershipReport(
        region_source=region.source,
        statuses=tuple(statuses),
        all_contained=all(s != "violation" for s in statuses),
        tol=tol,
        worst_violation=depth,
    )
