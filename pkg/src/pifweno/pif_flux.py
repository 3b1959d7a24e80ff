"""Pointwise time-averaged fluxes via a third-order Taylor expansion in time,
with temporal derivatives exchanged for spatial ones through the PDE
(the Lax-Wendroff / Cauchy-Kowalewski procedure).

Given node values q at time level n, the construction is, per node,

    F = f + (dt/2) df/dt + (dt^2/6) d2f/dt2,
    df/dt   = -f_q (f_x + g_y),
    d2f/dt2 = f_qq(D, D) + f_q [ f_qq(q_x, D) + f_q (f_xx + g_xy)
                               + g_qq(q_y, D) + g_q (f_xy + g_yy) ],

with D = f_x + g_y, and the same bracket reused for G (it is the time
derivative of -D, independent of which flux is being expanded).  All spatial
derivatives act on the pointwise flux/state arrays: 4th-order central
stencils for the straight derivatives, the compact 2nd-order one for the
cross terms.

Results are valid wherever the 5-point stencil has support, i.e. two cells
in from every padded-array edge.
"""

from __future__ import annotations

import numpy as np

from pifweno import accel, euler, stencils


def _jac_dot(jac, v):
    return np.einsum("ab...,b...->a...", jac, v)


def time_averaged_flux_1d(q, dt, dx, gas):
    """Third-order time-averaged flux at every padded node (1D)."""
    if not np.all(euler.is_admissible(q, gas)):
        raise euler.InvalidStateError("inadmissible state in time-averaged flux")
    f = euler.flux(q, 0, gas)
    jac = euler.flux_jacobian(q, 0, gas)
    f_x = stencils.d1_field(f, dx, axis=1)
    f_xx = stencils.d2_field(f, dx, axis=1)
    q_x = stencils.d1_field(q, dx, axis=1)

    dfdt = -_jac_dot(jac, f_x)
    bracket = euler.flux_hessian_contract(q, 0, gas, q_x, f_x) + _jac_dot(jac, f_xx)
    d2fdt2 = euler.flux_hessian_contract(q, 0, gas, f_x, f_x) + _jac_dot(jac, bracket)
    return f + (0.5 * dt) * dfdt + (dt * dt / 6.0) * d2fdt2


def time_averaged_flux_2d(q, dt, dx, dy, gas):
    """Third-order time-averaged fluxes (F, G) at every padded node (2D)."""
    if not np.all(euler.is_admissible(q, gas)):
        raise euler.InvalidStateError("inadmissible state in time-averaged flux")
    f = euler.flux(q, 0, gas)
    g = euler.flux(q, 1, gas)
    if accel.AVAILABLE:
        return accel.time_avg_flux_2d(np.ascontiguousarray(q), f, g, dt, dx, dy, gas)
    jac_f = euler.flux_jacobian(q, 0, gas)
    jac_g = euler.flux_jacobian(q, 1, gas)

    f_x = stencils.d1_field(f, dx, axis=1)
    f_xx = stencils.d2_field(f, dx, axis=1)
    g_y = stencils.d1_field(g, dy, axis=2)
    g_yy = stencils.d2_field(g, dy, axis=2)
    f_xy = stencils.dxy_field(f, dx, dy, axis_x=1, axis_y=2)
    g_xy = stencils.dxy_field(g, dx, dy, axis_x=1, axis_y=2)
    q_x = stencils.d1_field(q, dx, axis=1)
    q_y = stencils.d1_field(q, dy, axis=2)

    div = f_x + g_y
    # Time derivative of -div; shared between the F and G expansions.
    bracket = (
        euler.flux_hessian_contract(q, 0, gas, q_x, div)
        + _jac_dot(jac_f, f_xx + g_xy)
        + euler.flux_hessian_contract(q, 1, gas, q_y, div)
        + _jac_dot(jac_g, f_xy + g_yy)
    )

    dfdt = -_jac_dot(jac_f, div)
    d2fdt2 = euler.flux_hessian_contract(q, 0, gas, div, div) + _jac_dot(jac_f, bracket)
    flux_x = f + (0.5 * dt) * dfdt + (dt * dt / 6.0) * d2fdt2

    dgdt = -_jac_dot(jac_g, div)
    d2gdt2 = euler.flux_hessian_contract(q, 1, gas, div, div) + _jac_dot(jac_g, bracket)
    flux_y = g + (0.5 * dt) * dgdt + (dt * dt / 6.0) * d2gdt2
    return flux_x, flux_y
