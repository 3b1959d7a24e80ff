"""Figure rendering: profile scatters over reference curves, contour maps,
and convergence reports."""

from __future__ import annotations

import os
import sys

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from pifweno_viz.snapshots import FormatError, read_table

# Strip the Software tag so identical inputs give identical PNG bytes.
SAVE_KW = {"dpi": 130, "metadata": {"Software": None}}

QUANTITY_LABELS = {
    "rho": "density",
    "pressure": "pressure",
    "velocity_x": "velocity",
    "velocity_y": "transverse velocity",
    "energy": "total energy",
}

# Contour level specs for the diffraction figures (min, max, count).
DEFAULT_CONTOUR_LEVELS = {
    "rho": (0.0662, 7.07, 20),
    "pressure": (0.091, 37.0, 40),
}


def _slice_2d(snap, quantity, slice_y):
    y = snap.column("y")
    target = y[np.argmin(np.abs(y - slice_y))]
    keep = y == target
    order = np.argsort(snap.column("x")[keep])
    return snap.column("x")[keep][order], snap.quantity(quantity)[keep][order], target


def plot_profiles(snap, quantities, out_dir, reference=None, slice_y=None, stem="profile"):
    """One scatter panel per quantity, optionally over a reference curve.
    2D snapshots need a slice ordinate.  Returns the written paths."""
    if snap.dim == 2 and slice_y is None:
        raise FormatError("2D snapshot: profile plots need --slice-y")
    paths = []
    for quantity in quantities:
        fig, ax = plt.subplots(figsize=(5.0, 3.6))
        if snap.dim == 1:
            x = snap.column("x")
            v = snap.quantity(quantity)
            label_extra = ""
        else:
            x, v, actual = _slice_2d(snap, quantity, slice_y)
            label_extra = f" (slice y={actual:.4g})"
        if reference is not None:
            if reference.dim == 1:
                xr, vr = reference.column("x"), reference.quantity(quantity)
            else:
                xr, vr, _ = _slice_2d(reference, quantity, slice_y)
            ax.plot(xr, vr, "-", color="black", lw=1.0, label="reference")
        ax.plot(x, v, "o", ms=2.5, mfc="none", color="tab:blue", label="computed")
        ax.set_xlabel("x")
        ax.set_ylabel(QUANTITY_LABELS.get(quantity, quantity))
        ax.set_title(f"{snap.problem}, t = {snap.t:g}{label_extra}")
        ax.legend(loc="best", fontsize=8)
        fig.tight_layout()
        path = os.path.join(out_dir, f"{stem}_{quantity}.png")
        fig.savefig(path, **SAVE_KW)
        plt.close(fig)
        paths.append(path)
    return paths


def plot_contours(snap, quantity, out_dir, levels=None, stem="contour"):
    """Filled-line contour rendering of one quantity on a 2D snapshot.
    ``levels`` is (min, max, count); defaults per quantity where known."""
    if snap.dim != 2:
        raise FormatError("contour plots need a 2D snapshot")
    if levels is None:
        levels = DEFAULT_CONTOUR_LEVELS.get(quantity)
    if levels is None:
        raise FormatError(f"no default levels for {quantity!r}; pass --levels")
    lo, hi, count = levels
    xs, ys, vals = snap.grid_values(quantity)
    fig, ax = plt.subplots(figsize=(6.5, 6.5 * (ys[-1] - ys[0]) / (xs[-1] - xs[0]) + 0.6))
    finite = vals[np.isfinite(vals)]
    path = os.path.join(out_dir, f"{stem}_{quantity}.png")
    if finite.max() == finite.min():
        print(f"warning: constant field, no contours to draw for {quantity}", file=sys.stderr)
        ax.set_title(f"{snap.problem} {quantity}: constant field {finite.max():g}")
    else:
        ax.contour(
            xs, ys, vals.T, levels=np.linspace(lo, hi, int(count)),
            linewidths=0.7, colors="black",
        )
        ax.set_title(
            f"{snap.problem}: {QUANTITY_LABELS.get(quantity, quantity)}, t = {snap.t:g}\n"
            f"{int(count)} levels from {lo:g} to {hi:g}"
        )
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_aspect("equal")
    fig.tight_layout()
    fig.savefig(path, **SAVE_KW)
    plt.close(fig)
    return path


def report_convergence(table_path, out_dir, stem="convergence"):
    """Formatted text table plus a log-log error plot with fitted slopes."""
    columns, rows = read_table(table_path)
    for needed in ("mesh", "l1_error", "linf_error"):
        if needed not in columns:
            raise FormatError(f"convergence table missing column {needed!r}")

    lines = [f"{'Mesh':>12} {'L1-Error':>12} {'Order':>8} {'Linf-Error':>12} {'Order':>8}"]
    for r in rows:
        l1o = "-" if np.isnan(r.get("l1_order", np.nan)) else f"{r['l1_order']:.3f}"
        lio = "-" if np.isnan(r.get("linf_order", np.nan)) else f"{r['linf_order']:.3f}"
        lines.append(
            f"{r['mesh']:>12} {r['l1_error']:>12.3e} {l1o:>8} {r['linf_error']:>12.3e} {lio:>8}"
        )
    text = "\n".join(lines) + "\n"
    txt_path = os.path.join(out_dir, f"{stem}.txt")
    with open(txt_path, "w") as fh:
        fh.write(text)

    cells = np.array([float(str(r["mesh"]).split("x")[0]) for r in rows])
    h = 1.0 / cells
    l1 = np.array([r["l1_error"] for r in rows])
    linf = np.array([r["linf_error"] for r in rows])
    fig, ax = plt.subplots(figsize=(5.0, 3.8))
    slopes = {}
    for label, err in (("L1", l1), ("Linf", linf)):
        ax.loglog(h, err, "o-", label=label)
        if len(h) > 1:
            slope = float(np.polyfit(np.log(h), np.log(err), 1)[0])
            slopes[label] = slope
    if slopes:
        note = ", ".join(f"{k}: slope {v:.2f}" for k, v in slopes.items())
        ax.set_title(f"grid convergence ({note})")
    else:
        ax.set_title("grid convergence (single mesh: errors only)")
    ax.set_xlabel("cell size h")
    ax.set_ylabel("density error")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    png_path = os.path.join(out_dir, f"{stem}.png")
    fig.savefig(png_path, **SAVE_KW)
    plt.close(fig)
    return txt_path, png_path, slopes
