"""Randomized property suite: every module invariant, one table.

``measure_instance`` runs the whole pipeline on one generated J-frame and
returns named residuals; ``run_suite`` aggregates them over seeds and
sizes (max for residual properties, mean for rate properties) and judges
each against its pinned tolerance.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import jframe as jf
from . import spectral as sp
from . import sqrtpolar as sq
from .errors import KreinFrameError
from .frames import build_frame, frame_bounds_on_definite_subspace
from .generate import GenConfig, random_jframe, reconstruction_residual
from .krein import (
    EPS_CONTRACT,
    KreinSpace,
    krein_adjoint,
    orthogonal_companion,
    principal_angle_max,
)

#: tolerance per property; names are stable CLI output
PROPERTY_TOLS = {
    "spectrum_rhp": 0.0,
    "conjugate_symmetry": 0.0,
    "enclosure_cork": 0.0,
    "enclosure_edinburgh": 0.0,
    "enclosure_strip": 0.0,
    "enclosure_corollary": 0.0,
    "bounds_oracle": 1e-8,
    "block_reassembly": 1e-10,
    "inverse_reassembly": 1e-10,
    "factorization_identity": 1e-12,
    "q_block_form": 1e-10,
    "contraction_norms": 0.0,
    "positivity_certificates": 0.0,
    "mapping_identities": 1e-8,
    "generator_honesty": 0.05,
    "determinism": 0.0,
    "schur_equivalence": 0.0,
    "adjoint_involution": 1e-14,
    "sqrt_residual": 1e-9,
    "sqrt_sector": 0.0,
    "sqrt_agreement": 1e-8,
    "sqrt_commutes_with_s": 1e-12,
    "sqrt_inverse_consistency": 1e-9,
    "quadrature_convergence_rate": 0.05,
    "coisometry": 1e-10,
    "polar_reassembly": 1e-10,
    "initial_projection": 1e-10,
    "connect_partial_isometry": 1e-10,
    "connect_t2": 1e-10,
    "connect_projections": 1e-10,
    "synthesize_roundtrip": 1e-9,
    "sign_mismatch_rate": 1.0,  # informational: documented, never hidden
    "reconstruction": 1e-8,
    "dual_operator": 1e-10,
    "dual_of_dual": 1e-8,
    "dual_spans": 1e-8,
    "sign_preservation": 0.0,
}

#: aggregated as a mean over instances instead of a max
RATE_PROPERTIES = {"quadrature_convergence_rate", "sign_mismatch_rate"}


@dataclass(frozen=True)
class PropertyResult:
    name: str
    worst: float
    tol: float
    passed: bool
    instances: int


def _rel(delta, scale) -> float:
    return float(np.linalg.norm(delta, 2)) / max(float(np.linalg.norm(scale, 2)), 1e-300)


def measure_instance(cfg: GenConfig) -> dict[str, float]:
    """All per-instance property residuals for one generated J-frame."""
    out: dict[str, float] = {}
    F = random_jframe(cfg)
    F2 = random_jframe(cfg)
    out["determinism"] = 0.0 if np.array_equal(F.vectors, F2.vectors) else 1.0

    space = F.space
    J = space.J
    rng = np.random.default_rng(cfg.seed + 0x9E3779B9)

    T = F.synthesis
    Tpp = krein_adjoint(krein_adjoint(T, F.ell2, space), space, F.ell2)
    out["adjoint_involution"] = _rel(Tpp - T, T)

    bundle = jf.jframe_operator(F)
    rep_c = jf.block_rep_cork(bundle)
    rep_e = jf.block_rep_edinburgh(bundle)
    spm = jf.s_pm_block_reps(rep_c, rep_e, bundle)
    inv = jf.inverse_block_reps(rep_c, rep_e, bundle)
    bounds = jf.jframe_bounds(rep_c, rep_e, F)
    S = bundle.S
    nS = max(float(np.linalg.norm(S, 2)), 1e-300)
    Sinv = np.linalg.inv(S)
    nI = max(float(np.linalg.norm(Sinv, 2)), 1e-300)

    out["block_reassembly"] = max(
        _rel(rep_c.reassemble() - S, S),
        _rel(rep_e.reassemble() - S, S),
        spm.worst / nS,
    )
    out["inverse_reassembly"] = max(inv.residual_cork, inv.residual_edinburgh) / nI
    out["factorization_identity"] = jf.factorization_residual(rep_c, bundle)
    out["q_block_form"] = jf.q_block_residual(rep_c, bundle)
    out["contraction_norms"] = max(
        0.0, max(rep_c.norm_K, rep_e.norm_L) - (1 - EPS_CONTRACT))
    margins = []
    for M in (rep_c.A, rep_c.DplusKAK, rep_e.Dprime, rep_e.AplusLDL):
        if M.size:
            ev = np.linalg.eigvalsh((M + M.conj().T) / 2)
            margins.append(float(ev[0]))
    out["positivity_certificates"] = max(0.0, -min(margins)) if margins else 0.0
    out["generator_honesty"] = max(0.0, rep_c.norm_K - cfg.angular_norm_cap)

    mp, mm = bundle.m_plus, bundle.m_minus
    out["mapping_identities"] = max(
        principal_angle_max(S @ orthogonal_companion(mm).basis, mp.basis),
        principal_angle_max(S @ orthogonal_companion(mp).basis, mm.basis),
    )

    oracle_err = 0.0
    for side, pair in ((+1, (bounds.alpha_plus, bounds.beta_plus)),
                       (-1, (bounds.alpha_minus, bounds.beta_minus))):
        lo, hi = frame_bounds_on_definite_subspace(F, side)
        scale = max(abs(lo), abs(hi), 1e-300)
        oracle_err = max(oracle_err, abs(pair[0] - lo) / scale,
                         abs(pair[1] - hi) / scale)
    out["bounds_oracle"] = oracle_err

    spec = sp.spectrum(S, J)
    out["spectrum_rhp"] = max(0.0, -spec.real_part_min)
    try:
        sp._check_conjugate_symmetry(spec.eigenvalues)
        out["conjugate_symmetry"] = 0.0
    except KreinFrameError:
        out["conjugate_symmetry"] = 1.0
    for key, region in (
        ("enclosure_cork", sp.enclosure_cork(rep_c)),
        ("enclosure_edinburgh", sp.enclosure_edinburgh(rep_e)),
        ("enclosure_strip", sp.enclosure_imag_strip(rep_c)),
        ("enclosure_corollary", sp.enclosure_from_bounds(bounds)),
    ):
        out[key] = sp.check_membership(spec, region, sp.TAU_ENCL).worst_violation

    out["schur_equivalence"] = _schur_equivalence_flag(rep_c, rep_e, spec, rng)

    tri = sq.principal_sqrt_triangular(S, space)
    P = tri.P
    nP = max(float(np.linalg.norm(P, 2)), 1e-300)
    out["sqrt_residual"] = tri.residual
    out["sqrt_sector"] = 0.0 if tri.sector_ok else 1.0
    contour = sq.default_contour(spec)
    rd = sq.riesz_dunford_sqrt(S, contour, space)
    out["sqrt_agreement"] = _rel(P - rd.P, P)
    out["sqrt_commutes_with_s"] = float(np.linalg.norm(S @ P - P @ S, 2)) / (nS * nP)
    inv_sqrt = sq.principal_sqrt_triangular(Sinv, space).P
    out["sqrt_inverse_consistency"] = _rel(np.linalg.inv(P) - inv_sqrt, inv_sqrt)
    out["quadrature_convergence_rate"] = _quadrature_decline_flag(S, P, spec, space)

    polar = sq.polar_decompose(F, bundle)
    out["coisometry"] = polar.coisometry_residual
    out["polar_reassembly"] = polar.reassembly_residual
    out["initial_projection"] = polar.initial_projection_residual

    connect = _connect_props(F, bundle, rng)
    if connect is not None:
        out.update(connect)

    synth = sq.synthesize_from_operator(S, space, F.n_plus, F.n_minus,
                                        seed=cfg.seed + 17)
    out["synthesize_roundtrip"] = synth.operator_residual
    out["sign_mismatch_rate"] = 0.0 if synth.partition_ok else 1.0

    out["reconstruction"] = reconstruction_residual(F, bundle, trials=50,
                                                    seed=cfg.seed + 3)
    dual = jf.dual_frame(F, bundle)
    dual_bundle = jf.jframe_operator(dual)
    out["dual_operator"] = _rel(dual_bundle.S - Sinv, Sinv)
    out["sign_preservation"] = 0.0 if dual.i_plus == F.i_plus else 1.0
    dual2 = jf.dual_frame(dual, dual_bundle)
    out["dual_of_dual"] = _rel(dual2.vectors - F.vectors, F.vectors)
    out["dual_spans"] = max(
        principal_angle_max(dual.span_plus(), orthogonal_companion(mm)),
        principal_angle_max(dual.span_minus(), orthogonal_companion(mp)),
    )
    return out


def _schur_equivalence_flag(rep_c, rep_e, spec, rng) -> float:
    """1.0 when the Schur complements mis-detect membership in sigma(S)."""
    eigs = spec.eigenvalues
    scale = 1 + float(np.abs(eigs).max())
    evA = np.linalg.eigvalsh(rep_c.A) if rep_c.A.size else np.array([])
    evD = np.linalg.eigvalsh(rep_e.Dprime) if rep_e.Dprime.size else np.array([])

    def clear_of(lam, sigma):
        return sigma.size == 0 or np.min(np.abs(sigma - lam)) > 1e-6 * scale

    for lam in eigs:
        if rep_c.D.size and clear_of(lam, evA):
            if sp.schur_detects(rep_c, lam, which=2) > 1e-6:
                return 1.0
        if rep_e.Aprime.size and clear_of(lam, evD):
            if sp.schur_detects(rep_e, lam, which=1) > 1e-6:
                return 1.0
    for _ in range(20):
        lam = complex(rng.uniform(-1, 2) * scale, rng.uniform(-1, 1) * scale)
        if np.min(np.abs(eigs - lam)) < 0.05 * scale:
            continue
        if rep_c.D.size and clear_of(lam, evA):
            if sp.schur_detects(rep_c, lam, which=2) <= 1e-9:
                return 1.0
        if rep_e.Aprime.size and clear_of(lam, evD):
            if sp.schur_detects(rep_e, lam, which=1) <= 1e-9:
                return 1.0
    return 0.0


def _quadrature_decline_flag(S, P_ref, spec, space) -> float:
    """1.0 unless the quadrature error strictly decreases over N = 16, 32, 64.

    Uses a deliberately branch-point-limited contour so the three errors
    stay above the rounding floor and the geometric decline is measurable.
    """
    base = sq.default_contour(spec)
    r0 = float(np.abs(spec.eigenvalues - base.center).max())
    r = max(0.72 * base.center, r0 / 0.75)
    if r >= base.center:  # cannot stay in the right half-plane; fall back
        r = base.radius
    errors = []
    for nodes in (16, 32, 64):
        rd = sq.riesz_dunford_sqrt(S, sq.ContourSpec(base.center, r, nodes), space)
        errors.append(_rel(rd.P - P_ref, P_ref))
    return 0.0 if errors[0] > errors[1] > errors[2] else 1.0


def _connect_props(F, bundle, rng) -> dict[str, float] | None:
    """Connect F to a longer frame with the same operator via T2 = T1 W0.

    W0 is a sign-block-preserving co-isometry diag(A+, A-) with Haar
    blocks A± A±^H = I: each new ± column stays inside M±, so the second
    family is again a J-frame with the same operator (a fully random
    co-isometry offers no such guarantee; see the synthesize rate).
    """
    from .frames import is_jframe
    from .generate import _haar_columns

    n1p, n1m = F.n_plus, F.n_minus
    n2p, n2m = n1p + 1, n1m + 1
    A_plus = _haar_columns(rng, n2p, n2p)[:n1p, :]
    A_minus = _haar_columns(rng, n2m, n2m)[:n1m, :]
    W0 = np.zeros((n1p + n1m, n2p + n2m), dtype=complex)
    W0[:n1p, :n2p] = A_plus
    W0[n1p:, n2p:] = A_minus
    T2 = F.synthesis @ W0
    F2 = build_frame(F.space, T2.T)
    if F2.i_plus != tuple(range(n2p)) or not is_jframe(F2).is_jframe:
        return None  # a Haar column landed on a null vector; vanishing odds
    res = sq.connect_two_frames(F, F2, bundle1=bundle)
    return {
        "connect_partial_isometry": res.partial_isometry_residual,
        "connect_t2": res.t2_residual,
        "connect_projections": max(res.initial_projection_residual,
                                   res.final_projection_residual),
    }


def instance_configs(seeds: int, sizes, cap: float | None = None,
                     conditioning_cap: float = 1.25, base_seed: int = 0):
    """Deterministic batch of GenConfigs, round-robin over sizes.

    Default caps keep instances "desk-scale": non-normal enough that most
    operators have complex conjugate pairs, compact enough that the
    64-node contour oracle resolves the square root to well below 1e-8.
    Heavier non-normality stress belongs to enclosure-only tests.
    """
    caps = (0.15, 0.25, 0.35, 0.45)
    cfgs = []
    for k in range(seeds):
        p, q = sizes[k % len(sizes)]
        pick = np.random.default_rng(base_seed + 1000003 * k)
        n_plus = int(pick.integers(p, max(p, min(3 * (p + q) - q, 2 * p + q)) + 1))
        n_minus = int(pick.integers(q, 3 * (p + q) - n_plus + 1))
        cfgs.append(GenConfig(
            p=p, q=q, n_plus=n_plus, n_minus=n_minus,
            angular_norm_cap=cap if cap is not None else caps[k % len(caps)],
            conditioning_cap=conditioning_cap,
            seed=base_seed + k,
        ))
    return cfgs


def run_suite(seeds: int, sizes, cap: float | None = None,
              conditioning_cap: float = 1.25, base_seed: int = 0,
              corrupt: str | None = None) -> list[PropertyResult]:
    """Aggregate measure_instance over a deterministic instance batch.

    ``corrupt`` renders the named property unpassable (tolerance -1); it
    exists so the harness can prove it actually fails on regressions.
    """
    if corrupt is not None and corrupt not in PROPERTY_TOLS:
        raise ValueError(f"unknown property: {corrupt}")
    worst: dict[str, float] = {name: 0.0 for name in PROPERTY_TOLS}
    total: dict[str, float] = {name: 0.0 for name in PROPERTY_TOLS}
    counts: dict[str, int] = {name: 0 for name in PROPERTY_TOLS}
    for cfg in instance_configs(seeds, sizes, cap, conditioning_cap, base_seed):
        vals = measure_instance(cfg)
        for name, v in vals.items():
            worst[name] = max(worst[name], v)
            total[name] += v
            counts[name] += 1
    results = []
    for name, tol in PROPERTY_TOLS.items():
        n = counts[name]
        agg = (total[name] / max(n, 1)) if name in RATE_PROPERTIES else worst[name]
        if corrupt == name:
            tol = -1.0
        results.append(PropertyResult(name=name, worst=agg, tol=tol,
                                      passed=agg <= tol, instances=n))
    return results
