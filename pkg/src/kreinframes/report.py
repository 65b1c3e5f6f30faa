"""Full-analysis pipeline: one frame in, one JSON-ready report out.

Every numerical check lands in ``report["verdicts"]`` as
``{"value": ..., "tol": ..., "pass": ...}`` so the caller can re-judge
against overridden tolerances without recomputing anything.
"""
from __future__ import annotations

import numpy as np

from . import jframe as jf
from . import spectral as sp
from . import sqrtpolar as sq
from .errors import KreinFrameError
from .fileio import complex_to_pair, matrix_to_json
from .frames import (
    Frame,
    frame_bounds_on_definite_subspace,
    hilbert_frame_bounds,
    is_jframe,
)
from .generate import reconstruction_residual

#: names accepted by --tol overrides, with their defaults
DEFAULT_TOLERANCES = {
    "bundle_identities": jf.TOL_BUNDLE,
    "block_reassembly": jf.TOL_REASSEMBLY,
    "inverse_reassembly": jf.TOL_INVERSE,
    "bounds_oracle": jf.TOL_BOUNDS_ORACLE,
    "membership": sp.TAU_ENCL,
    "sqrt_residual": sq.TOL_SQRT_RESID,
    "sqrt_agreement": 1e-8,
    "coisometry": sq.TOL_POLAR,
    "dual_operator": jf.TOL_DUAL,
    "reconstruction": 1e-8,
}

STATUS_OK = "ok"
STATUS_NOT_JFRAME = "not_jframe"
STATUS_VIOLATION = "violation"


def _verdict(value: float, tol: float) -> dict:
    return {"value": float(value), "tol": float(tol), "pass": bool(value <= tol)}


def _interval_json(interval) -> list:
    return [None if not np.isfinite(x) else float(x) for x in interval]


def region_to_json(region: sp.EnclosureRegion, membership: sp.MembershipReport) -> dict:
    return {
        "source": region.source,
        "disks": [{"center": float(c), "radius": float(r), "open": bool(o)}
                  for c, r, o in region.disks],
        "halfplane_re_gt": None if region.halfplane_re_gt is None
        else float(region.halfplane_re_gt),
        "real_interval": _interval_json(region.real_interval),
        "imag_abs_max": None if region.imag_abs_max is None
        else float(region.imag_abs_max),
        "parameters": {k: float(v) for k, v in region.parameters.items()},
        "membership": {
            "statuses": list(membership.statuses),
            "all_contained": bool(membership.all_contained),
            "worst_violation": float(membership.worst_violation),
            "tol": float(membership.tol),
        },
    }


def analyze_frame(frame: Frame, tolerances: dict | None = None) -> tuple[dict, str]:
    """Produce the analysis report and a status in {ok, not_jframe, violation}."""
    tol = dict(DEFAULT_TOLERANCES)
    if tolerances:
        unknown = set(tolerances) - set(tol)
        if unknown:
            raise ValueError(f"unknown tolerance names: {sorted(unknown)}")
        tol.update(tolerances)

    sq_products = frame.self_products()
    hb = hilbert_frame_bounds(frame.vectors, frame.space.dim)
    jreport = is_jframe(frame)
    report: dict = {
        "space": {"p": frame.space.p, "q": frame.space.q},
        "partition": {
            "i_plus": [i + 1 for i in frame.i_plus],
            "i_minus": [i + 1 for i in frame.i_minus],
            "self_products": [float(v) for v in sq_products],
            "permutation": [i + 1 for i in frame.permutation],
        },
        "hilbert_bounds": {"alpha": hb.alpha, "beta": hb.beta, "spans": hb.spans},
        "is_jframe": bool(jreport.is_jframe),
        "failure_reason": jreport.failure_reason,
        "classes": {
            "plus": {"tag": jreport.class_plus.tag.value,
                     "maximal": jreport.class_plus.maximal},
            "minus": {"tag": jreport.class_minus.tag.value,
                      "maximal": jreport.class_minus.maximal},
        },
        "direct_sum_ok": bool(jreport.direct_sum_ok),
        "tolerances": {k: float(v) for k, v in tol.items()},
        "verdicts": {},
    }
    if not jreport.is_jframe:
        return report, STATUS_NOT_JFRAME

    verdicts = report["verdicts"]
    try:
        bundle = jf.jframe_operator(frame)
        rep_c = jf.block_rep_cork(bundle)
        rep_e = jf.block_rep_edinburgh(bundle)
        spm = jf.s_pm_block_reps(rep_c, rep_e, bundle)
        inv = jf.inverse_block_reps(rep_c, rep_e, bundle)
        bounds = jf.jframe_bounds(rep_c, rep_e, frame)

        nS = max(float(np.linalg.norm(bundle.S, 2)), 1e-300)
        report["matrices"] = {
            "S": matrix_to_json(bundle.S),
            "S_plus": matrix_to_json(bundle.S_plus),
            "S_minus": matrix_to_json(bundle.S_minus),
            "Q": matrix_to_json(bundle.Q),
            "S_inv": matrix_to_json(np.linalg.inv(bundle.S)),
        }
        report["cork"] = {
            "A": matrix_to_json(rep_c.A),
            "K": matrix_to_json(rep_c.K),
            "D": matrix_to_json(rep_c.D),
            "D_plus_KAK": matrix_to_json(rep_c.DplusKAK),
            "norm_K": float(rep_c.norm_K),
            "Z": matrix_to_json(inv.Z),
        }
        report["edinburgh"] = {
            "A_prime": matrix_to_json(rep_e.Aprime),
            "L": matrix_to_json(rep_e.L),
            "D_prime": matrix_to_json(rep_e.Dprime),
            "A_plus_LDL": matrix_to_json(rep_e.AplusLDL),
            "norm_L": float(rep_e.norm_L),
            "Y": matrix_to_json(inv.Y),
        }
        report["bounds"] = {k: float(v) for k, v in bounds.as_dict().items()}

        reassembly_worst = max(
            float(np.linalg.norm(rep_c.reassemble() - bundle.S, 2)) / nS,
            float(np.linalg.norm(rep_e.reassemble() - bundle.S, 2)) / nS,
            spm.worst / nS,
        )
        verdicts["block_reassembly"] = _verdict(reassembly_worst,
                                                tol["block_reassembly"])
        nI = max(float(np.linalg.norm(np.linalg.inv(bundle.S), 2)), 1e-300)
        verdicts["inverse_reassembly"] = _verdict(
            max(inv.residual_cork, inv.residual_edinburgh) / nI,
            tol["inverse_reassembly"])
        oracle_err = 0.0
        for side, pair in ((+1, (bounds.alpha_plus, bounds.beta_plus)),
                           (-1, (bounds.alpha_minus, bounds.beta_minus))):
            lo, hi = frame_bounds_on_definite_subspace(frame, side)
            scale = max(abs(lo), abs(hi), 1e-300)
            oracle_err = max(oracle_err, abs(pair[0] - lo) / scale,
                             abs(pair[1] - hi) / scale)
        verdicts["bounds_oracle"] = _verdict(oracle_err, tol["bounds_oracle"])

        spec = sp.spectrum(bundle.S, frame.space.J)
        report["spectrum"] = {
            "eigenvalues": [complex_to_pair(z) for z in spec.eigenvalues],
            "is_real": [bool(b) for b in spec.is_real],
            "real_part_min": float(spec.real_part_min),
        }
        regions = [
            sp.enclosure_cork(rep_c),
            sp.enclosure_edinburgh(rep_e),
            sp.enclosure_imag_strip(rep_c),
            sp.enclosure_from_bounds(bounds),
        ]
        memberships = [sp.check_membership(spec, r, tol["membership"])
                       for r in regions]
        report["enclosures"] = [region_to_json(r, m)
                                for r, m in zip(regions, memberships)]
        verdicts["membership"] = _verdict(
            max(m.worst_violation for m in memberships), 0.0)

        tri = sq.principal_sqrt_triangular(bundle.S, frame.space)
        contour = sq.default_contour(spec)
        rd = sq.riesz_dunford_sqrt(bundle.S, contour, frame.space)
        nP = max(float(np.linalg.norm(tri.P, 2)), 1e-300)
        agreement = float(np.linalg.norm(tri.P - rd.P, 2)) / nP
        report["sqrt"] = {
            "P": matrix_to_json(tri.P),
            "sector_ok": bool(tri.sector_ok),
            "contour": {"center": contour.center, "radius": contour.radius,
                        "nodes": contour.nodes},
        }
        verdicts["sqrt_residual"] = _verdict(tri.residual, tol["sqrt_residual"])
        verdicts["sqrt_selfadjointness"] = _verdict(
            tri.krein_selfadjoint_residual, tol["sqrt_residual"])
        verdicts["sqrt_contour_residual"] = _verdict(rd.residual,
                                                     tol["sqrt_agreement"])
        verdicts["sqrt_agreement"] = _verdict(agreement, tol["sqrt_agreement"])

        polar = sq.polar_decompose(frame, bundle)
        report["polar"] = {"U": matrix_to_json(polar.U)}
        verdicts["coisometry"] = _verdict(polar.coisometry_residual,
                                          tol["coisometry"])
        verdicts["polar_reassembly"] = _verdict(polar.reassembly_residual,
                                                tol["coisometry"])

        dual = jf.dual_frame(frame, bundle)
        dual_bundle = jf.jframe_operator(dual)
        dual_resid = float(np.linalg.norm(
            dual_bundle.S - np.linalg.inv(bundle.S), 2)) / nI
        report["dual"] = {
            "vectors": [[complex_to_pair(z) for z in dual.vectors[:, i]]
                        for i in range(dual.size)],
        }
        verdicts["dual_operator"] = _verdict(dual_resid, tol["dual_operator"])
        verdicts["reconstruction"] = _verdict(
            reconstruction_residual(frame, bundle, trials=50, seed=7),
            tol["reconstruction"])
    except KreinFrameError as exc:
        report["violation"] = f"{type(exc).__name__}: {exc}"
        return report, STATUS_VIOLATION

    all_pass = all(v["pass"] for v in verdicts.values())
    report["all_pass"] = bool(all_pass)
    return report, STATUS_OK if all_pass else STATUS_VIOLATION
