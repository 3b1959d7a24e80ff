"""Delimited text formats for snapshots, per-step diagnostics, run
summaries, and convergence tables.

All floats are written with repr-exact precision ('%.17g') so that
reader(writer(field)) round-trips bit-exactly; the formats are the process
boundary consumed by the plotting tools.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from pifweno import euler

FLOAT_FMT = "%.17g"


def _fmt(x):
    return FLOAT_FMT % float(x)


class FormatError(ValueError):
    """Malformed snapshot/diagnostics/table file."""


@dataclass
class Snapshot:
    """Parsed snapshot: header metadata plus per-cell columns."""

    problem: str
    dim: int
    t: float
    mesh: tuple
    gamma: float
    masked: bool
    columns: list
    data: np.ndarray  # (n_rows, n_cols)

    def column(self, name):
        try:
            return self.data[:, self.columns.index(name)]
        except ValueError:
            raise FormatError(f"snapshot has no column {name!r}") from None


def snapshot_columns(dim):
    coords = ["x"] if dim == 1 else ["x", "y"]
    moms = ["mom_x"] if dim == 1 else ["mom_x", "mom_y"]
    return coords + ["rho"] + moms + ["energy", "pressure"]


def write_snapshot(path, problem_name, t, grid, gas, q_interior, active=None):
    """Write one delimited snapshot; only active cells emit rows."""
    dim = grid.dim
    cols = snapshot_columns(dim)
    mesh = grid.mesh()
    p = euler.pressure(q_interior, gas)
    fields = list(mesh) + [q_interior[0]] + list(q_interior[1:-1]) + [q_interior[-1], p]
    if active is None:
        rows = [f.ravel() for f in fields]
    else:
        rows = [f[active] for f in fields]
    n_rows = rows[0].size
    with open(path, "w") as fh:
        fh.write("# pifweno snapshot\n")
        fh.write(f"# problem = {problem_name}\n")
        fh.write(f"# dimension = {dim}\n")
        fh.write(f"# t = {_fmt(t)}\n")
        fh.write(f"# mesh = {'x'.join(str(m) for m in grid.cells)}\n")
        fh.write(f"# gamma = {_fmt(gas.gamma)}\n")
        fh.write(f"# masked = {1 if active is not None else 0}\n")
        fh.write(f"# cells = {n_rows}\n")
        fh.write(f"# columns = {','.join(cols)}\n")
        for i in range(n_rows):
            fh.write(",".join(_fmt(r[i]) for r in rows) + "\n")


def read_snapshot(path):
    meta = {}
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if "=" in body:
                    key, _, value = body.partition("=")
                    meta[key.strip()] = value.strip()
                continue
            rows.append([float(tok) for tok in line.split(",")])
    required = ("problem", "dimension", "t", "mesh", "gamma", "masked", "cells", "columns")
    for key in required:
        if key not in meta:
            raise FormatError(f"snapshot missing header key {key!r}")
    mesh = tuple(int(tok) for tok in meta["mesh"].split("x"))
    columns = [c.strip() for c in meta["columns"].split(",")]
    data = np.asarray(rows, dtype=float)
    if data.ndim != 2 or data.shape[1] != len(columns):
        raise FormatError("snapshot row width disagrees with columns header")
    n_cells = int(meta["cells"])
    if data.shape[0] != n_cells:
        raise FormatError(
            f"snapshot has {data.shape[0]} rows but header says {n_cells}"
        )
    masked = bool(int(meta["masked"]))
    if not masked and n_cells != int(np.prod(mesh)):
        raise FormatError("unmasked snapshot row count disagrees with mesh")
    return Snapshot(
        problem=meta["problem"],
        dim=int(meta["dimension"]),
        t=float(meta["t"]),
        mesh=mesh,
        gamma=float(meta["gamma"]),
        masked=masked,
        columns=columns,
        data=data,
    )


DIAG_BASE_COLS = ["step", "t", "dt", "min_rho", "min_p", "min_theta", "limited_interfaces"]


def diagnostics_columns(dim):
    totals = ["total_mass", "total_mom_x"] + (["total_mom_y"] if dim == 2 else [])
    return DIAG_BASE_COLS + totals + ["total_energy"]


def write_diagnostics(path, dim, diagnostics):
    cols = diagnostics_columns(dim)
    with open(path, "w") as fh:
        fh.write("# pifweno diagnostics\n")
        fh.write(f"# columns = {','.join(cols)}\n")
        for d in diagnostics:
            row = [
                str(d.step),
                _fmt(d.t),
                _fmt(d.dt),
                _fmt(d.min_rho),
                _fmt(d.min_p),
                _fmt(d.min_theta),
                str(d.n_limited),
            ]
            row += [_fmt(v) for v in d.totals]
            fh.write(",".join(row) + "\n")


def read_delimited(path):
    """Generic reader for the diagnostics/convergence formats: returns
    (columns, list of row dicts with float values where possible)."""
    columns = None
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if body.startswith("columns"):
                    columns = [c.strip() for c in body.partition("=")[2].split(",")]
                continue
            rows.append(line.split(","))
    if columns is None:
        raise FormatError(f"{path}: no columns header")
    out = []
    for raw in rows:
        if len(raw) != len(columns):
            raise FormatError(f"{path}: row width mismatch")
        rec = {}
        for key, tok in zip(columns, raw):
            try:
                rec[key] = float(tok)
            except ValueError:
                rec[key] = tok
        out.append(rec)
    return columns, out


CONVERGENCE_COLS = ["mesh", "l1_error", "l1_order", "linf_error", "linf_order"]


def write_convergence(path, rows):
    """rows: list of dicts with mesh (str) and the four numeric fields
    (orders may be None for the first row, written as '-')."""
    with open(path, "w") as fh:
        fh.write("# pifweno convergence table (volume-averaged density errors)\n")
        fh.write(f"# columns = {','.join(CONVERGENCE_COLS)}\n")
        for r in rows:
            fh.write(
                ",".join(
                    [
                        str(r["mesh"]),
                        _fmt(r["l1_error"]),
                        "-" if r["l1_order"] is None else _fmt(r["l1_order"]),
                        _fmt(r["linf_error"]),
                        "-" if r["linf_order"] is None else _fmt(r["linf_order"]),
                    ]
                )
                + "\n"
            )


def write_summary(path, summary):
    with open(path, "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
