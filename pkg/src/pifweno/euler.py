"""Compressible Euler equations: ideal-gas EOS, fluxes, Jacobians and eigensystems.

Conserved fields are numpy arrays with the component axis first:
``q[0]`` is density, ``q[1:1+dim]`` the momentum components, ``q[-1]`` the
total energy density.  All operations broadcast over any trailing grid axes,
so a single state is simply an array of shape ``(dim + 2,)``.

No clamping or flooring happens anywhere in this module.  Positivity is the
flux limiter's job; silently fixing up states here would mask limiter bugs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class InvalidStateError(ValueError):
    """Raised when an operation receives a non-admissible state."""


@dataclass(frozen=True)
class GasModel:
    """Ideal gas with constant ratio of specific heats."""

    gamma: float = 1.4

    def __post_init__(self):
        if not self.gamma > 1.0:
            raise ValueError(f"gamma must exceed 1, got {self.gamma}")


def dim_of(q):
    """Spatial dimension encoded in the component count (m = dim + 2)."""
    m = q.shape[0]
    if m not in (3, 4):
        raise ValueError(f"expected 3 or 4 conserved components, got {m}")
    return m - 2


def pressure(q, gas):
    """Ideal-gas pressure (gamma-1)*(E - |mom|^2/(2 rho)).

    Negative results are returned as-is so that callers (the limiter, the
    admissibility audit) can detect them.
    """
    rho = q[0]
    if np.any(rho == 0.0):
        raise InvalidStateError("zero density in pressure()")
    ke = 0.5 * np.sum(q[1:-1] ** 2, axis=0) / rho
    return (gas.gamma - 1.0) * (q[-1] - ke)


def velocity(q):
    """Velocity components mom/rho, shape (dim,) + grid shape."""
    return q[1:-1] / q[0]


def sound_speed(q, gas):
    """c = sqrt(gamma p / rho).  Requires an admissible state: no absolute
    values are taken, so negative rho or p raises an error instead of
    silently producing an artificial speed."""
    p = pressure(q, gas)
    ratio = gas.gamma * p / q[0]
    if np.any(ratio <= 0.0):
        raise InvalidStateError("non-admissible state in sound_speed()")
    return np.sqrt(ratio)


def is_admissible(q, gas, eps=0.0):
    """True where rho > eps and p > eps (exact comparisons, no slop)."""
    rho = q[0]
    ok = rho > eps
    # Guard the division where rho is unusable; those cells are already bad.
    safe_rho = np.where(rho > 0.0, rho, 1.0)
    ke = 0.5 * np.sum(q[1:-1] ** 2, axis=0) / safe_rho
    p = (gas.gamma - 1.0) * (q[-1] - ke)
    return ok & (p > eps)


def primitive_from_conserved(q, gas):
    """(rho, velocity components..., pressure) as a tuple of arrays."""
    return (q[0], *velocity(q), pressure(q, gas))


def conserved_from_primitive(rho, vel, p, gas):
    """Assemble a conserved field from rho, velocity tuple/array and p."""
    vel = np.asarray(vel, dtype=float)
    rho = np.asarray(rho, dtype=float)
    p = np.asarray(p, dtype=float)
    mom = rho * vel
    energy = p / (gas.gamma - 1.0) + 0.5 * rho * np.sum(vel**2, axis=0)
    return np.concatenate([rho[np.newaxis], mom, energy[np.newaxis]], axis=0)


def flux(q, direction, gas):
    """Euler flux vector in the given coordinate direction (0=x, 1=y)."""
    d = dim_of(q)
    if not 0 <= direction < d:
        raise ValueError(f"direction {direction} invalid for dim {d}")
    p = pressure(q, gas)
    un = q[1 + direction] / q[0]
    out = np.empty_like(q)
    out[0] = q[1 + direction]
    for a in range(d):
        out[1 + a] = q[1 + a] * un
    out[1 + direction] += p
    out[-1] = (q[-1] + p) * un
    return out


def flux_jacobian(q, direction, gas):
    """Analytic Jacobian of flux() w.r.t. the conserved variables.

    Returns shape (m, m) + grid shape.
    """
    d = dim_of(q)
    m = d + 2
    k = gas.gamma - 1.0
    rho = q[0]
    u = velocity(q)
    un = u[direction]
    vsq = np.sum(u**2, axis=0)
    phi = 0.5 * k * vsq
    p = pressure(q, gas)
    enthalpy = (q[-1] + p) / rho

    jac = np.zeros((m, m) + q.shape[1:], dtype=q.dtype)
    # Mass row: flux is the normal momentum itself.
    jac[0, 1 + direction] = 1.0
    # Momentum rows.
    for a in range(d):
        jac[1 + a, 0] = -u[a] * un
        for b in range(d):
            jac[1 + a, 1 + b] = (
                (1.0 if a == b else 0.0) * un + (1.0 if b == direction else 0.0) * u[a]
            )
        if a == direction:
            jac[1 + a, 0] += phi
            for b in range(d):
                jac[1 + a, 1 + b] -= k * u[b]
            jac[1 + a, -1] = k
    # Energy row.
    jac[-1, 0] = un * (phi - enthalpy)
    for b in range(d):
        jac[-1, 1 + b] = -k * u[b] * un
    jac[-1, 1 + direction] += enthalpy
    jac[-1, -1] = gas.gamma * un
    return jac


def _pair_second_derivative(a, b, rho, va, vb, vr, wa, wb, wr):
    """Bilinear second derivative of a*b/rho contracted with two state
    increments; (a, b) are the two numerator factors, (va, vb, vr) the
    matching components of the first increment, (wa, wb, wr) the second."""
    inv = 1.0 / rho
    inv2 = inv * inv
    return (
        (va * wb + wa * vb) * inv
        - ((va * b + a * vb) * wr + (wa * b + a * wb) * vr) * inv2
        + 2.0 * a * b * vr * wr * inv2 * inv
    )


def flux_hessian_contract(q, direction, gas, v, w):
    """Contraction of the flux Hessian with two increment vectors: the
    m-vector (d^2 f / dq^2) . (v, w).  Symmetric in (v, w)."""
    d = dim_of(q)
    k = gas.gamma - 1.0
    rho = q[0]
    mom = q[1:-1]
    energy = q[-1]
    md = mom[direction]
    vr, wr = v[0], w[0]
    vm, wm = v[1:-1], w[1:-1]
    ve, we = v[-1], w[-1]

    out = np.zeros(np.broadcast(q, v, w).shape, dtype=np.result_type(q, v, w))
    # Mass flux is linear: second derivative vanishes.

    # d2 of |mom|^2 / rho.
    msq = np.sum(mom**2, axis=0)
    m_dot_v = np.sum(mom * vm, axis=0)
    m_dot_w = np.sum(mom * wm, axis=0)
    v_dot_w = np.sum(vm * wm, axis=0)
    inv = 1.0 / rho
    inv2 = inv * inv
    d2_ke = (
        2.0 * v_dot_w * inv
        - 2.0 * (m_dot_v * wr + m_dot_w * vr) * inv2
        + 2.0 * msq * vr * wr * inv2 * inv
    )

    for a in range(d):
        out[1 + a] = _pair_second_derivative(
            mom[a], md, rho, vm[a], vm[direction], vr, wm[a], wm[direction], wr
        )
    out[1 + direction] -= 0.5 * k * d2_ke

    # Energy flux gamma*E*md/rho - (k/2)*|mom|^2*md/rho^2.
    d2_em = _pair_second_derivative(
        energy, md, rho, ve, vm[direction], vr, we, wm[direction], wr
    )
    d2_s = (
        2.0 * (v_dot_w * md + m_dot_v * wm[direction] + m_dot_w * vm[direction]) * inv2
        - 2.0 * ((2.0 * m_dot_v * md + msq * vm[direction]) * wr
                 + (2.0 * m_dot_w * md + msq * wm[direction]) * vr) * inv2 * inv
        + 6.0 * msq * md * vr * wr * inv2 * inv2
    )
    out[-1] = gas.gamma * d2_em - 0.5 * k * d2_s
    return out


def _swap_momentum(q):
    """Return a copy with the two momentum components exchanged (2D only)."""
    out = q.copy()
    out[1], out[2] = q[2].copy(), q[1].copy()
    return out


def eigensystem(q, direction, gas):
    """Eigen-decomposition of the flux Jacobian for one state or a field.

    Returns (eigenvalues, right, left) with shapes (m,)+grid, (m,m)+grid,
    (m,m)+grid.  Eigenvalues are ascending: (un-c, un [multiplicity d],
    un+c).  left @ right = identity; right @ diag(lam) @ left reproduces
    flux_jacobian.
    """
    d = dim_of(q)
    if d == 2 and direction == 1:
        lam, right, left = _eigensystem_normal(_swap_momentum(q), gas, tangential=True)
        # Undo the component swap: permute rows/cols of the matrices back.
        perm = np.array([0, 2, 1, 3])
        return lam, right[perm][:, perm], left[perm][:, perm]
    return _eigensystem_normal(q, gas, tangential=(d == 2))


def _eigensystem_normal(q, gas, tangential):
    """Eigensystem for the x-direction flux; q already oriented so that
    component 1 is the normal momentum."""
    k = gas.gamma - 1.0
    rho = q[0]
    p = pressure(q, gas)
    if np.any(rho <= 0.0) or np.any(p <= 0.0):
        raise InvalidStateError("non-admissible state in eigensystem()")
    u = q[1] / rho
    v = q[2] / rho if tangential else np.zeros_like(u)
    c = np.sqrt(gas.gamma * p / rho)
    vsq = u * u + v * v
    phi = 0.5 * k * vsq
    enthalpy = (q[-1] + p) / rho
    m = q.shape[0]
    grid = q.shape[1:]

    lam = np.empty((m,) + grid, dtype=q.dtype)
    lam[0] = u - c
    lam[1] = u
    if tangential:
        lam[2] = u
    lam[-1] = u + c

    right = np.zeros((m, m) + grid, dtype=q.dtype)
    left = np.zeros((m, m) + grid, dtype=q.dtype)
    one = np.ones_like(u)

    # Right eigenvectors (columns): acoustic-, entropy, [shear,] acoustic+.
    right[0, 0] = one
    right[1, 0] = u - c
    right[-1, 0] = enthalpy - u * c
    right[0, 1] = one
    right[1, 1] = u
    right[-1, 1] = 0.5 * vsq
    if tangential:
        right[2, 0] = v
        right[2, 1] = v
        right[2, 2] = one
        right[-1, 2] = v
    right[0, -1] = one
    right[1, -1] = u + c
    right[-1, -1] = enthalpy + u * c
    if tangential:
        right[2, -1] = v

    inv_2c2 = 0.5 / (c * c)
    left[0, 0] = (phi + u * c) * inv_2c2
    left[0, 1] = -(k * u + c) * inv_2c2
    left[0, -1] = k * inv_2c2
    left[1, 0] = 1.0 - phi / (c * c)
    left[1, 1] = k * u / (c * c)
    left[1, -1] = -k / (c * c)
    left[-1, 0] = (phi - u * c) * inv_2c2
    left[-1, 1] = -(k * u - c) * inv_2c2
    left[-1, -1] = k * inv_2c2
    if tangential:
        left[0, 2] = -k * v * inv_2c2
        left[1, 2] = k * v / (c * c)
        left[-1, 2] = -k * v * inv_2c2
        left[2, 0] = -v
        left[2, 2] = one

    return lam, right, left


def max_signal_speed(q, gas):
    """max over directions and points of |u_d| + c (the LF splitting speed)."""
    c = sound_speed(q, gas)
    u = velocity(q)
    speed = np.abs(u) + c
    val = float(np.max(speed))
    if val <= 0.0:
        raise InvalidStateError("degenerate field: zero signal speed")
    return val
