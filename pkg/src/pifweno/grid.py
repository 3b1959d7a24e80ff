"""Structured grids, boundary conditions, and ghost-cell filling.

Node convention: cell centers x_i = a + (i + 1/2) * dx for i = 0..m-1, with
``ng`` ghost layers on every side of the padded arrays.  Conserved fields are
shaped (m_comp,) + padded cell shape; all boundary handling happens by
filling ghost layers so interior stencils never branch.

The L-shaped diffraction domain is realized as a bounding rectangle with an
inactive cell block in the low-x/low-y corner; the block's exposed faces act
as solid walls via mirror filling (the re-entrant corner block uses the
double reflection).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class ConfigurationError(ValueError):
    """Inconsistent grid or boundary configuration."""


@dataclass(frozen=True)
class BoundaryCondition:
    """One side's boundary treatment."""

    kind: str  # periodic | outflow | wall | inflow
    state: np.ndarray | None = None  # prescribed conserved state for inflow

    KINDS = ("periodic", "outflow", "wall", "inflow")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ConfigurationError(f"unknown boundary kind {self.kind!r}")
        if self.kind == "inflow" and self.state is None:
            raise ConfigurationError("inflow boundary requires a state")


def periodic():
    return BoundaryCondition("periodic")


def outflow():
    return BoundaryCondition("outflow")


def wall():
    return BoundaryCondition("wall")


def inflow(state):
    return BoundaryCondition("inflow", np.asarray(state, dtype=float))


@dataclass(frozen=True)
class GridSpec:
    """Uniform structured grid with ghost padding and per-side BC tags."""

    extents: tuple  # ((a, b),) or ((ax, bx), (ay, by))
    cells: tuple  # (mx,) or (mx, my)
    bcs: tuple  # per axis: (low BoundaryCondition, high BoundaryCondition)
    ng: int = 6

    def __post_init__(self):
        if len(self.extents) != len(self.cells) or len(self.cells) != len(self.bcs):
            raise ConfigurationError("extents/cells/bcs dimension mismatch")
        if self.ng < 5:
            raise ConfigurationError("ghost width must be at least 5")
        for (a, b), m, (lo, hi) in zip(self.extents, self.cells, self.bcs):
            if not b > a:
                raise ConfigurationError(f"empty extent [{a}, {b}]")
            if m < self.ng:
                raise ConfigurationError("need at least ng cells per axis")
            if (lo.kind == "periodic") != (hi.kind == "periodic"):
                raise ConfigurationError("periodic sides must come in matched pairs")

    @property
    def dim(self):
        return len(self.cells)

    @property
    def spacings(self):
        return tuple((b - a) / m for (a, b), m in zip(self.extents, self.cells))

    @property
    def padded_shape(self):
        return tuple(m + 2 * self.ng for m in self.cells)

    def coords(self, axis):
        """Interior cell-center coordinates along one axis."""
        a, _ = self.extents[axis]
        d = self.spacings[axis]
        return a + (np.arange(self.cells[axis]) + 0.5) * d

    def padded_coords(self, axis):
        a, _ = self.extents[axis]
        d = self.spacings[axis]
        n = self.cells[axis] + 2 * self.ng
        return a + (np.arange(n) - self.ng + 0.5) * d

    def mesh(self):
        """Interior coordinate arrays, meshgrid'ed in 2D (indexing 'ij')."""
        if self.dim == 1:
            return (self.coords(0),)
        return np.meshgrid(self.coords(0), self.coords(1), indexing="ij")

    @property
    def interior(self):
        """Index tuple selecting interior cells of a padded component-first
        field array."""
        return (slice(None),) + tuple(slice(self.ng, self.ng + m) for m in self.cells)

    def allocate(self, n_comp):
        return np.empty((n_comp,) + self.padded_shape, dtype=float)

    def pad(self, q_interior):
        out = self.allocate(q_interior.shape[0])
        out.fill(np.nan)
        out[self.interior] = q_interior
        return out


@dataclass(frozen=True)
class MaskedDomain:
    """Active-cell mask for an L-shaped domain: the cell block
    [0, notch_cells_x) x [0, notch_cells_y) is solid."""

    notch_cells: tuple  # (nx, ny) extent of the inactive corner block

    def active(self, grid):
        mask = np.ones(grid.cells, dtype=bool)
        nx, ny = self.notch_cells
        mask[:nx, :ny] = False
        return mask

    def validate(self, grid):
        nx, ny = self.notch_cells
        if not (0 < nx < grid.cells[0] and 0 < ny < grid.cells[1]):
            raise ConfigurationError("mask notch must lie strictly inside the grid")
        if nx < grid.ng or ny < grid.ng:
            raise ConfigurationError("mask notch must be at least ng cells deep")
        if nx + grid.ng > grid.cells[0] or ny + grid.ng > grid.cells[1]:
            raise ConfigurationError("mask walls need ng active donor cells")


def _axis_slices(q, axis, lo, hi):
    idx = [slice(None)] * q.ndim
    idx[1 + axis] = slice(lo, hi)
    return tuple(idx)


def _fill_side(q, grid, axis, side, bc):
    ng = grid.ng
    m = grid.cells[axis]
    n_tot = m + 2 * ng
    ax = 1 + axis
    if side == "low":
        target = _axis_slices(q, axis, 0, ng)
        if bc.kind == "periodic":
            q[target] = q[_axis_slices(q, axis, m, m + ng)]
        elif bc.kind == "outflow":
            q[target] = q[_axis_slices(q, axis, ng, ng + 1)]
        elif bc.kind == "inflow":
            shape = [1] * q.ndim
            shape[0] = q.shape[0]
            q[target] = bc.state.reshape(shape)
        else:  # wall: mirror cells, negate the normal momentum
            src = [slice(None)] * q.ndim
            src[ax] = slice(2 * ng - 1, ng - 1, -1)
            q[target] = q[tuple(src)]
            q[(1 + axis,) + target[1:]] *= -1.0
    else:
        target = _axis_slices(q, axis, n_tot - ng, n_tot)
        if bc.kind == "periodic":
            q[target] = q[_axis_slices(q, axis, ng, 2 * ng)]
        elif bc.kind == "outflow":
            q[target] = q[_axis_slices(q, axis, n_tot - ng - 1, n_tot - ng)]
        elif bc.kind == "inflow":
            shape = [1] * q.ndim
            shape[0] = q.shape[0]
            q[target] = bc.state.reshape(shape)
        else:
            src = [slice(None)] * q.ndim
            src[ax] = slice(n_tot - ng - 1, n_tot - 2 * ng - 1, -1)
            q[target] = q[tuple(src)]
            q[(1 + axis,) + target[1:]] *= -1.0


def _fill_mask_walls(q, grid, mask):
    """Mirror active data into the inactive corner block so its exposed
    faces behave as solid walls."""
    ng = grid.ng
    nx, ny = mask.notch_cells
    wall_i = ng + nx  # first active padded column right of the vertical wall
    wall_j = ng + ny  # first active padded row above the horizontal wall

    # Vertical wall face (x = notch): mirror in x, all rows below wall_j.
    rows = slice(0, wall_j)
    q[:, wall_i - ng : wall_i, rows] = q[:, wall_i + ng - 1 : wall_i - 1 : -1, rows]
    q[1, wall_i - ng : wall_i, rows] *= -1.0

    # Horizontal wall face (y = notch): mirror in y, all columns left of wall_i.
    cols = slice(0, wall_i)
    q[:, cols, wall_j - ng : wall_j] = q[:, cols, wall_j + ng - 1 : wall_j - 1 : -1]
    q[2, cols, wall_j - ng : wall_j] *= -1.0

    # Re-entrant corner block: double reflection (both momenta negated).
    q[:, wall_i - ng : wall_i, wall_j - ng : wall_j] = q[
        :, wall_i + ng - 1 : wall_i - 1 : -1, wall_j + ng - 1 : wall_j - 1 : -1
    ]
    q[1:3, wall_i - ng : wall_i, wall_j - ng : wall_j] *= -1.0


def fill_ghosts(q, grid, mask=None):
    """Populate all ghost layers of a padded field in place.

    Axis passes run low-to-high dimension; the second pass reads columns that
    already include first-pass ghost data, which makes the corner blocks
    consistent for every BC combination.
    """
    for axis in range(grid.dim):
        lo, hi = grid.bcs[axis]
        _fill_side(q, grid, axis, "low", lo)
        _fill_side(q, grid, axis, "high", hi)
    if mask is not None:
        _fill_mask_walls(q, grid, mask)
    return q
