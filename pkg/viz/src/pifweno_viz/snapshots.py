"""Readers for the solver's delimited output files.

These parse the documented text formats only; the solver package is never
imported.  Input files are opened read-only and never modified.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class FormatError(ValueError):
    """Malformed input file."""


@dataclass
class SnapshotView:
    """One parsed snapshot: header metadata plus per-cell columns."""

    problem: str
    dim: int
    t: float
    mesh: tuple
    gamma: float
    masked: bool
    columns: list
    data: np.ndarray

    def column(self, name):
        try:
            return self.data[:, self.columns.index(name)]
        except ValueError:
            raise FormatError(f"snapshot has no column {name!r}") from None

    def quantity(self, name):
        """Named plot quantity; velocity components are derived."""
        if name in self.columns:
            return self.column(name)
        if name == "velocity_x":
            return self.column("mom_x") / self.column("rho")
        if name == "velocity_y":
            return self.column("mom_y") / self.column("rho")
        raise FormatError(f"unknown quantity {name!r}")

    def grid_values(self, name):
        """Quantity on the full rectangular mesh with NaN in inactive cells
        (2D only); returns (x_axis, y_axis, values)."""
        if self.dim != 2:
            raise FormatError("grid_values needs a 2D snapshot")
        x = self.column("x")
        y = self.column("y")
        xs = np.unique(x)
        ys = np.unique(y)
        vals = np.full((xs.size, ys.size), np.nan)
        ix = np.searchsorted(xs, x)
        iy = np.searchsorted(ys, y)
        vals[ix, iy] = self.quantity(name)
        return xs, ys, vals


def _parse_header(lines):
    meta = {}
    for line in lines:
        body = line[1:].strip()
        if "=" in body:
            key, _, value = body.partition("=")
            meta[key.strip()] = value.strip()
    return meta


def read_snapshot(path):
    header = []
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                header.append(line)
            else:
                try:
                    rows.append([float(tok) for tok in line.split(",")])
                except ValueError:
                    raise FormatError(f"{path}: non-numeric data row") from None
    meta = _parse_header(header)
    for key in ("problem", "dimension", "t", "mesh", "gamma", "masked", "cells", "columns"):
        if key not in meta:
            raise FormatError(f"{path}: missing header key {key!r}")
    if not rows:
        raise FormatError(f"{path}: snapshot has no data rows")
    columns = [c.strip() for c in meta["columns"].split(",")]
    data = np.asarray(rows, dtype=float)
    if data.shape[1] != len(columns):
        raise FormatError(f"{path}: row width disagrees with columns header")
    mesh = tuple(int(tok) for tok in meta["mesh"].split("x"))
    n_cells = int(meta["cells"])
    if data.shape[0] != n_cells:
        raise FormatError(f"{path}: {data.shape[0]} rows but header says {n_cells}")
    masked = bool(int(meta["masked"]))
    if not masked and n_cells != int(np.prod(mesh)):
        raise FormatError(f"{path}: row count disagrees with mesh {meta['mesh']}")
    return SnapshotView(
        problem=meta["problem"],
        dim=int(meta["dimension"]),
        t=float(meta["t"]),
        mesh=mesh,
        gamma=float(meta["gamma"]),
        masked=masked,
        columns=columns,
        data=data,
    )


def read_table(path):
    """Delimited table with a '# columns = ...' header; '-' marks missing
    numeric entries (returned as nan)."""
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
            if tok == "-":
                rec[key] = float("nan")
            else:
                try:
                    rec[key] = float(tok)
                except ValueError:
                    rec[key] = tok
        out.append(rec)
    return columns, out
