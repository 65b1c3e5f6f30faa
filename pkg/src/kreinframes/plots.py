"""Enclosure figure: the non-real spectral region drawn from the bounds.

Rendered with matplotlib's SVG backend into a self-contained file (inline
styles, no scripts) with a fixed 800x600 viewport, auto-scaled to the
bounding box of the drawn region plus a 10% margin.  Dashed circles mark
the two dual-bound disks, dashed vertical lines the half-plane thresholds,
and the shaded lens is their admissible intersection; a bar on the real
axis marks the real-spectrum interval.
"""
from __future__ import annotations

import numpy as np
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
from matplotlib.patches import Circle

from .jframe import JFrameBounds
from .spectral import SpectrumData, enclosure_from_bounds

_ORANGE = (1.0, 0.6, 0.2)


def render_enclosure(path, bounds: JFrameBounds, spec: SpectrumData) -> None:
    region = enclosure_from_bounds(bounds)
    gamma = region.parameters["gamma"]
    alpha = region.parameters["alpha"]
    eps_minus = region.parameters["eps_minus"]
    eps_plus = region.parameters["eps_plus"]
    inv_gp = 1 / bounds.gamma_plus
    inv_gm = 1 / bounds.gamma_minus
    gamma_from_minus = bounds.gamma_minus >= bounds.gamma_plus
    alpha_from_plus = bounds.alpha_plus >= bounds.alpha_minus

    fig, ax = plt.subplots(figsize=(800 / 72, 600 / 72))

    # the two dual-bound circles (the smaller one is the corollary disk)
    for center, label, dy in (
        (1 / gamma,
         r"$\gamma^{-1}=\gamma_-^{-1}$" if gamma_from_minus
         else r"$\gamma^{-1}=\gamma_+^{-1}$", 0.05),
        (inv_gp if gamma_from_minus else inv_gm,
         r"$\gamma_+^{-1}$" if gamma_from_minus else r"$\gamma_-^{-1}$", -0.12),
    ):
        ax.add_patch(Circle((center, 0), center, fill=False, linestyle="--",
                            edgecolor="black", linewidth=1.0))
        ax.plot([center], [0], marker="o", markersize=4,
                color="tab:blue" if center == 1 / gamma else "tab:red")
        ax.annotate(label, (center, 0), textcoords="offset points",
                    xytext=(8, 8 if dy > 0 else -16), fontsize=12)

    # half-plane thresholds
    for x, label in (
        (alpha / 2,
         r"$\alpha/2=\alpha_+/2$" if alpha_from_plus else r"$\alpha/2=\alpha_-/2$"),
        ((bounds.alpha_minus if alpha_from_plus else bounds.alpha_plus) / 2,
         r"$\alpha_-/2$" if alpha_from_plus else r"$\alpha_+/2$"),
    ):
        ax.axvline(x, linestyle="--", color="black", linewidth=1.0)
        ax.plot([x], [0], marker="o", markersize=4, color="tab:red")
        ax.annotate(label, (x, 0), textcoords="offset points",
                    xytext=(4, 10), fontsize=12)

    # shaded admissible lens: disk(1/gamma) cut by Re > alpha/2
    c, r = 1 / gamma, 1 / gamma
    h = alpha / 2
    if h <= c + r:
        t0 = np.arccos(np.clip((h - c) / r, -1.0, 1.0))
        t = np.linspace(-t0, t0, 256)
        xs = c + r * np.cos(t)
        ys = r * np.sin(t)
        ax.fill(xs, ys, color=_ORANGE, alpha=0.25, linewidth=0)

    # real-axis spectrum bar and the axes through the origin
    ax.plot([eps_minus, eps_plus], [0, 0], color="tab:blue", linewidth=3.0,
            solid_capstyle="butt", zorder=3)
    ax.axhline(0.0, color="black", linewidth=0.8)
    ax.axvline(0.0, color="black", linewidth=0.8)

    reals = spec.eigenvalues[spec.is_real]
    if reals.size:
        ax.plot(reals.real, np.zeros(reals.size), "o", color="black",
                markersize=6, zorder=4)
    others = spec.eigenvalues[~spec.is_real]
    if others.size:
        ax.plot(others.real, others.imag, "o", color="tab:purple",
                markersize=6, zorder=4)

    big_c = max(inv_gp, inv_gm)
    xs = [0.0, 2 * big_c, eps_minus, eps_plus, alpha / 2]
    ys = [big_c, -big_c]
    if others.size:
        xs += list(others.real)
        ys += list(others.imag)
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    mx, my = 0.1 * (x1 - x0), 0.1 * (y1 - y0)
    ax.set_xlim(x0 - mx, x1 + mx)
    ax.set_ylim(y0 - my, y1 + my)
    ax.set_aspect("equal")
    ax.set_xlabel(r"$\mathrm{Re}\,\lambda$")
    ax.set_ylabel(r"$\mathrm{Im}\,\lambda$")
    fig.savefig(path, format="svg")
    plt.close(fig)
