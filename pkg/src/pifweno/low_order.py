"""First-order Lax-Friedrichs interface fluxes and the low-order update that
anchors the positivity limiter.

The low-order update is evaluated on the interior cells plus a one-cell ring
of ghost cells, so that boundary-adjacent interfaces later get two-sided
limiter bounds.  The density/pressure floors are the grid minima of that
update, capped at EPS0; by the positivity of the LF scheme (CFL <= 0.5 with
the shared global splitting speed) both floors are strictly positive.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from pifweno import euler

# Smallest admitted floor; keeps wave speeds finite as rho, p -> 0.
EPS0 = 1e-13


class PositivityError(RuntimeError):
    """Low-order update produced a non-positive density or pressure,
    i.e. the CFL <= 0.5 precondition was violated."""


def lf_flux(q_left, q_right, direction, alpha, gas):
    """Lax-Friedrichs flux: 0.5*(f(qL) + f(qR)) - (alpha/2)*(qR - qL)."""
    f_l = euler.flux(q_left, direction, gas)
    f_r = euler.flux(q_right, direction, gas)
    return 0.5 * (f_l + f_r) - 0.5 * alpha * (q_right - q_left)


def _window(arr, axis, lo, hi):
    idx = [slice(None)] * arr.ndim
    idx[axis] = slice(lo, hi)
    return arr[tuple(idx)]


def lf_interface_fluxes(q, direction, alpha, gas, left_lo, left_hi, cross=slice(None)):
    """LF fluxes at the interfaces between nodes (k, k+1), k in
    [left_lo, left_hi), optionally restricted transversally."""
    axis = 1 + direction
    if q.ndim == 3:
        cross_axis = 2 if direction == 0 else 1
        sel = [slice(None)] * 3
        sel[cross_axis] = cross
        q = q[tuple(sel)]
    q_l = _window(q, axis, left_lo, left_hi)
    q_r = _window(q, axis, left_lo + 1, left_hi + 1)
    return lf_flux(q_l, q_r, direction, alpha, gas)


@dataclass
class LowOrderResult:
    """Low-order update on the ring rectangle plus the per-step floors and
    the interface fluxes it was built from (reused by the limiter)."""

    q_hat: np.ndarray  # (m, mx+2[, my+2])
    eps_rho: float
    eps_p: float
    flux_x: np.ndarray  # (m, mx+3[, my+2])
    flux_y: np.ndarray | None  # (m, mx+2, my+3) in 2D


def low_order_update(q, dt, spacings, alpha, gas, ng, interior_cells):
    """Full LF update on interior cells plus one ghost ring.

    ``q`` is the ghost-complete padded field, ``interior_cells`` the per-axis
    interior cell counts.  Returns the updated states, the global floors
    eps_rho/eps_p, and the interface fluxes.
    """
    dim = q.shape[0] - 2
    if dim == 1:
        (mx,) = interior_cells
        lam = dt / spacings[0]
        fx = lf_interface_fluxes(q, 0, alpha, gas, ng - 2, ng + mx + 1)
        ring = _window(q, 1, ng - 1, ng + mx + 1)
        q_hat = ring - lam * (fx[:, 1:] - fx[:, :-1])
        fy = None
    else:
        mx, my = interior_cells
        lam_x = dt / spacings[0]
        lam_y = dt / spacings[1]
        ring_rows = slice(ng - 1, ng + my + 1)
        ring_cols = slice(ng - 1, ng + mx + 1)
        fx = lf_interface_fluxes(q, 0, alpha, gas, ng - 2, ng + mx + 1, cross=ring_rows)
        fy = lf_interface_fluxes(q, 1, alpha, gas, ng - 2, ng + my + 1, cross=ring_cols)
        ring = q[:, ring_cols, ring_rows]
        q_hat = (
            ring
            - lam_x * (fx[:, 1:, :] - fx[:, :-1, :])
            - lam_y * (fy[:, :, 1:] - fy[:, :, :-1])
        )

    rho_hat = q_hat[0]
    p_hat = euler.pressure(q_hat, gas)
    if np.any(rho_hat <= 0.0) or np.any(p_hat <= 0.0):
        raise PositivityError(
            "low-order update lost positivity; CFL precondition violated "
            f"(min rho {rho_hat.min():.3e}, min p {p_hat.min():.3e})"
        )
    eps_rho = min(float(rho_hat.min()), EPS0)
    eps_p = min(float(p_hat.min()), EPS0)
    return LowOrderResult(q_hat, eps_rho, eps_p, fx, fy)
