"""Benchmark problem definitions: initial conditions, boundary setups, final
times, and reference-solution recipes.

Energy deposits in the blast problems are *total* amounts placed into one
cell, i.e. the stored energy density is the deposit divided by the cell
volume.  That keeps the physical problem fixed under mesh refinement, which
the self-run reference comparisons rely on.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from pifweno import euler
from pifweno.grid import (
    ConfigurationError,
    GridSpec,
    MaskedDomain,
    inflow,
    outflow,
    periodic,
    wall,
)

# Smooth vortex constants.
VORTEX_STRENGTH = 10.0828
# Blast deposits (total energy placed into one cell).
SEDOV_1D_ENERGY = 3200000.0
SEDOV_2D_QUADRANT_ENERGY = 0.244816
# Shock diffraction.
DIFFRACTION_MACH = 5.09
DIFFRACTION_AHEAD = (1.4, 0.0, 0.0, 1.0)  # rho, u, v, p


@dataclass(frozen=True)
class ProblemDef:
    """One benchmark: geometry, boundary factory, initializer, final time,
    and how to obtain a reference solution."""

    name: str
    dim: int
    extents: tuple
    default_cells: tuple
    t_final: float
    bc_factory: Callable  # gas -> per-axis ((lo, hi), ...)
    initializer: Callable  # (grid, gas) -> interior conserved field
    default_cfl: float = 0.35
    exact: Callable | None = None  # (t, grid, gas) -> interior field
    mask_factory: Callable | None = None  # grid -> MaskedDomain
    reference: dict = field(default_factory=dict)

    def grid(self, cells=None, ng=6, gas=None):
        gas = gas or euler.GasModel(1.4)
        cells = tuple(cells) if cells is not None else self.default_cells
        if len(cells) != self.dim:
            raise ConfigurationError(
                f"problem {self.name} is {self.dim}D, got mesh {cells}"
            )
        return GridSpec(self.extents, cells, self.bc_factory(gas), ng=ng)

    def mask(self, grid):
        if self.mask_factory is None:
            return None
        m = self.mask_factory(grid)
        m.validate(grid)
        return m


# ---------------------------------------------------------------------------
# Smooth low-density/low-pressure vortex (periodic advection; exact solution).
# ---------------------------------------------------------------------------


def vortex_primitive(t, x, y, gas, strength=VORTEX_STRENGTH):
    """Primitive vortex fields at any time: the initial profile advected by
    the (1, 1) mean flow with periodic wrapping on [-5, 5]^2."""
    xr = np.mod(x - t + 5.0, 10.0) - 5.0
    yr = np.mod(y - t + 5.0, 10.0) - 5.0
    r2 = xr * xr + yr * yr
    du = (strength / (2.0 * np.pi)) * np.exp(0.5 * (1.0 - r2))
    d_temp = (
        -(gas.gamma - 1.0)
        * strength**2
        / (8.0 * gas.gamma * np.pi**2)
        * np.exp(1.0 - r2)
    )
    temp = 1.0 + d_temp
    if np.any(temp <= 0.0):
        raise euler.InvalidStateError("vortex strength drives temperature negative")
    # Constant entropy p/rho^gamma fixes rho = T^(1/(gamma-1)), p = T^(gamma/(gamma-1)).
    rho = temp ** (1.0 / (gas.gamma - 1.0))
    p = temp ** (gas.gamma / (gas.gamma - 1.0))
    u = 1.0 - du * yr
    v = 1.0 + du * xr
    return rho, u, v, p


def vortex_state(t, x, y, gas, strength=VORTEX_STRENGTH):
    rho, u, v, p = vortex_primitive(t, x, y, gas, strength)
    return euler.conserved_from_primitive(rho, np.stack([u, v]), p, gas)


def init_vortex(grid, gas, strength=VORTEX_STRENGTH):
    xx, yy = grid.mesh()
    return vortex_state(0.0, xx, yy, gas, strength)


def exact_vortex(t, grid, gas, strength=VORTEX_STRENGTH):
    xx, yy = grid.mesh()
    return vortex_state(t, xx, yy, gas, strength)


# ---------------------------------------------------------------------------
# Sedov blast waves (energy deposited into single cells).
# ---------------------------------------------------------------------------


def init_sedov_1d(grid, gas, total_energy=SEDOV_1D_ENERGY):
    (m,) = grid.cells
    dx = grid.spacings[0]
    rho = np.ones(m)
    mom = np.zeros((1, m))
    energy = np.full(m, 1e-12)
    energy[m // 2] = total_energy / dx
    q = np.empty((3, m))
    q[0] = rho
    q[1] = mom[0]
    q[2] = energy
    return q


def init_sedov_2d(grid, gas, corner_energy=SEDOV_2D_QUADRANT_ENERGY, full_domain=False):
    mx, my = grid.cells
    dx, dy = grid.spacings
    q = np.zeros((4, mx, my))
    q[0] = 1.0
    q[3] = 1e-12
    e_cell = corner_energy / (dx * dy)
    if full_domain:
        # Four cells around the origin, each carrying one quadrant's deposit.
        q[3, mx // 2 - 1 : mx // 2 + 1, my // 2 - 1 : my // 2 + 1] = e_cell
    else:
        q[3, 0, 0] = e_cell
    return q


# ---------------------------------------------------------------------------
# Double rarefaction (Riemann problem approaching vacuum).
# ---------------------------------------------------------------------------


def init_double_rarefaction(grid, gas):
    x = grid.coords(0)
    rho = np.full_like(x, 7.0)
    vel = np.where(x < 0.0, -1.0, 1.0)[None, :]
    p = np.full_like(x, 0.2)
    return euler.conserved_from_primitive(rho, vel, p, gas)


# ---------------------------------------------------------------------------
# Shock diffraction over a backward-facing corner (L-shaped domain).
# ---------------------------------------------------------------------------


def moving_shock_state(mach, q_ahead, gas):
    """Post-shock conserved state for a normal shock of the given Mach number
    moving into ``q_ahead`` (at rest or not) along +x."""
    if mach <= 1.0:
        raise ConfigurationError("shock Mach number must exceed 1")
    q_ahead = np.asarray(q_ahead, dtype=float)
    rho1 = q_ahead[0]
    u1 = q_ahead[1] / rho1
    p1 = euler.pressure(q_ahead, gas)
    c1 = np.sqrt(gas.gamma * p1 / rho1)
    g = gas.gamma
    m2 = mach * mach
    rho2 = rho1 * (g + 1.0) * m2 / ((g - 1.0) * m2 + 2.0)
    p2 = p1 * (2.0 * g * m2 - (g - 1.0)) / (g + 1.0)
    u2 = u1 + 2.0 * c1 * (m2 - 1.0) / ((g + 1.0) * mach)
    out = q_ahead.copy()
    out[0] = rho2
    out[1] = rho2 * u2
    tang_ke = 0.0
    if len(q_ahead) == 4:
        v1 = q_ahead[2] / rho1  # tangential velocity passes through the shock
        out[2] = rho2 * v1
        tang_ke = 0.5 * rho2 * v1 * v1
    out[-1] = p2 / (g - 1.0) + 0.5 * rho2 * u2 * u2 + tang_ke
    return out


def diffraction_states(gas):
    rho, u, v, p = DIFFRACTION_AHEAD
    energy = p / (gas.gamma - 1.0) + 0.5 * rho * (u * u + v * v)
    ahead = np.array([rho, rho * u, rho * v, energy])
    behind = moving_shock_state(DIFFRACTION_MACH, ahead, gas)
    return ahead, behind


def init_shock_diffraction(grid, gas, shock_x=0.5):
    ahead, behind = diffraction_states(gas)
    mx, my = grid.cells
    q = np.empty((4, mx, my))
    x = grid.coords(0)
    is_behind = x < shock_x
    q[:] = ahead[:, None, None]
    q[:, is_behind, :] = behind[:, None, None]
    return q


def _diffraction_mask(grid):
    # Solid block below/left of the corner (1, 6) in an [0,13] x [0,11] box.
    mx, my = grid.cells
    nx = round(mx * 1.0 / 13.0)
    ny = round(my * 6.0 / 11.0)
    return MaskedDomain((nx, ny))


# ---------------------------------------------------------------------------
# Registry.
# ---------------------------------------------------------------------------


def _build_registry():
    problems = {}

    problems["vortex"] = ProblemDef(
        name="vortex",
        dim=2,
        extents=((-5.0, 5.0), (-5.0, 5.0)),
        default_cells=(80, 80),
        t_final=0.01,
        bc_factory=lambda gas: ((periodic(), periodic()), (periodic(), periodic())),
        initializer=init_vortex,
        exact=exact_vortex,
        reference={"kind": "exact"},
    )

    problems["sedov1d"] = ProblemDef(
        name="sedov1d",
        dim=1,
        extents=((-2.0, 2.0),),
        default_cells=(800,),
        t_final=0.001,
        bc_factory=lambda gas: ((outflow(), outflow()),),
        initializer=init_sedov_1d,
        reference={"kind": "self", "cells": (8000,)},
    )

    problems["sedov2d"] = ProblemDef(
        name="sedov2d",
        dim=2,
        extents=((0.0, 1.1), (0.0, 1.1)),
        default_cells=(160, 160),
        t_final=1.0,
        bc_factory=lambda gas: ((wall(), outflow()), (wall(), outflow())),
        initializer=init_sedov_2d,
        reference={"kind": "self-slice", "note": "full-domain equivalent run"},
    )

    problems["sedov2d_full"] = ProblemDef(
        name="sedov2d_full",
        dim=2,
        extents=((-1.1, 1.1), (-1.1, 1.1)),
        default_cells=(320, 320),
        t_final=1.0,
        bc_factory=lambda gas: ((outflow(), outflow()), (outflow(), outflow())),
        initializer=lambda grid, gas: init_sedov_2d(grid, gas, full_domain=True),
        reference={"kind": "none"},
    )

    problems["double_rarefaction"] = ProblemDef(
        name="double_rarefaction",
        dim=1,
        extents=((-1.0, 1.0),),
        default_cells=(400,),
        t_final=0.6,
        default_cfl=0.15,
        bc_factory=lambda gas: ((outflow(), outflow()),),
        initializer=init_double_rarefaction,
        reference={"kind": "self", "cells": (2000,)},
    )

    problems["shock_diffraction"] = ProblemDef(
        name="shock_diffraction",
        dim=2,
        extents=((0.0, 13.0), (0.0, 11.0)),
        default_cells=(390, 330),
        t_final=2.3,
        bc_factory=lambda gas: (
            (inflow(diffraction_states(gas)[1]), outflow()),
            (outflow(), outflow()),
        ),
        initializer=init_shock_diffraction,
        mask_factory=_diffraction_mask,
        reference={"kind": "none"},
    )

    return problems


REGISTRY = _build_registry()


def get_problem(name):
    try:
        return REGISTRY[name]
    except KeyError:
        raise ConfigurationError(
            f"unknown problem {name!r}; available: {sorted(REGISTRY)}"
        ) from None
