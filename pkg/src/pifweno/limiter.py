"""Parametrized positivity limiter: per-cell density caps, per-cell pressure
rescaling of the cap-box vertices, per-interface blending parameter, and the
blended flux.

Geometry/notation used throughout: for each cell there are 2*dim signed
"contribution" scalars describing how the density responds to opening each of
its interfaces toward the high-order flux,

    1D: (dev_minus, -dev_plus)            2D: (dev_L, -dev_R, dev_D, -dev_U)

where dev is lambda * (high_flux - low_flux) of the mass component at the
named interface.  The updated density is rho_hat + sum_k theta_k * c_k, a
linear function of the per-interface blending parameters theta_k in [0,1].
The full conserved update has the same form with m-vector corrections.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from pifweno import euler, instrumentation

# One-sided safety shrink applied to binding density caps so the guaranteed
# floor survives the final update's round-off (the exact-arithmetic bound is
# an equality at binding cells).
CAP_SAFETY = 1.0 - 1e-12


def density_caps(rho_hat, eps_rho, contributions):
    """Upper bounds on the per-interface blending parameters that keep the
    updated density >= eps_rho on the whole cap box.

    ``contributions`` has shape (2*dim,) + cell shape.  Directions whose
    contribution is negative share the cap min(1, (eps - rho_hat)/S) with S
    the sum of the negative contributions; the rest get 1.  This closed form
    reproduces the sign-by-sign case table (a nonnegative ratio >= 1 is the
    "inequality already holds at ones" case).
    """
    neg = np.minimum(contributions, 0.0)
    total_neg = neg.sum(axis=0)
    deficit = eps_rho - rho_hat  # <= 0 by construction of eps_rho
    # Flooring the denominator magnitude only ever shrinks the cap (safe
    # side); scaling the floor with the deficit keeps the quotient finite
    # without changing any cap that is actually below one.
    floor = 1e-30 * (np.abs(deficit) + np.finfo(float).tiny)
    den = np.minimum(total_neg, -floor)
    capped = np.minimum(1.0, (deficit / den) * CAP_SAFETY)
    return np.where(contributions < 0.0, capped[np.newaxis], 1.0)


def density_bounds_1d(rho_hat, eps_rho, dev_minus, dev_plus):
    """1D caps (cap_minus, cap_plus) from the two interface deviations."""
    contributions = np.stack([np.asarray(dev_minus, dtype=float), -np.asarray(dev_plus, dtype=float)])
    caps = density_caps(np.asarray(rho_hat, dtype=float), eps_rho, contributions)
    return caps[0], caps[1]


def density_bounds_2d(rho_hat, eps_rho, dev_xm, dev_xp, dev_ym, dev_yp):
    """2D caps (cap_L, cap_R, cap_D, cap_U)."""
    contributions = np.stack(
        [
            np.asarray(dev_xm, dtype=float),
            -np.asarray(dev_xp, dtype=float),
            np.asarray(dev_ym, dtype=float),
            -np.asarray(dev_yp, dtype=float),
        ]
    )
    caps = density_caps(np.asarray(rho_hat, dtype=float), eps_rho, contributions)
    return caps[0], caps[1], caps[2], caps[3]


def _pressure_on_segment(q_hat, delta, r, gas):
    return euler.pressure(q_hat + r[np.newaxis] * delta, gas)


def pressure_rescale_vertex(q_hat, corrections, vertex, eps_p, gas):
    """Scale factor r in [0,1] pulling one cap-box vertex back inside the
    admissible pressure region.

    ``corrections`` has shape (2*dim, m) + cells, ``vertex`` the matching
    theta tuple (2*dim,) + cells.  States along the segment are
    q(r) = q_hat + r * (q(vertex) - q_hat); where p(q(vertex)) >= eps_p the
    vertex is kept (r = 1), otherwise r solves the scalar quadratic obtained
    from p(q(r)) = eps_p by clearing the density denominator.
    """
    q_hat = np.asarray(q_hat, dtype=float)
    delta = np.einsum("k...,km...->m...", np.asarray(vertex, dtype=float), np.asarray(corrections, dtype=float))
    return _rescale_from_delta(q_hat, delta, eps_p, gas)


def _rescale_from_delta(q_hat, delta, eps_p, gas):
    p_vertex = euler.pressure(q_hat + delta, gas)
    need = p_vertex < eps_p
    r = np.ones(p_vertex.shape, dtype=float)
    if not np.any(need):
        return r

    k = gas.gamma - 1.0
    d_rho, d_mom, d_en = delta[0], delta[1:-1], delta[-1]
    rho, mom, en = q_hat[0], q_hat[1:-1], q_hat[-1]
    a = k * (2.0 * d_rho * d_en - np.sum(d_mom**2, axis=0))
    b = 2.0 * k * (rho * d_en + d_rho * en - np.sum(mom * d_mom, axis=0)) - 2.0 * eps_p * d_rho
    c = k * (2.0 * rho * en - np.sum(mom**2, axis=0)) - 2.0 * eps_p * rho

    root = _smallest_nonnegative_root(a, b, c)
    r = np.where(need, np.clip(root, 0.0, 1.0), r)

    # Round-off safeguard: nudge r down until the pressure floor holds, then
    # fall back to bisection for any stragglers (tangency cases).
    for _ in range(10):
        bad = need & (_pressure_on_segment(q_hat, delta, r, gas) < eps_p)
        if not np.any(bad):
            return r
        r = np.where(bad, r * (1.0 - 1e-10), r)
    bad = need & (_pressure_on_segment(q_hat, delta, r, gas) < eps_p)
    if np.any(bad):
        r = np.where(bad, _bisect_pressure(q_hat, delta, r, eps_p, gas), r)
        if np.any(_pressure_on_segment(q_hat, delta, r, gas) < eps_p - 1e-12):
            raise RuntimeError("vertex rescale failed to restore the pressure floor")
    return r


def _smallest_nonnegative_root(a, b, c):
    """Smallest root >= 0 of a*r^2 + b*r + c, assuming a sign change exists
    on [0, 1] (c >= 0 >= a+b+c up to round-off)."""
    scale = np.maximum.reduce([np.abs(a), np.abs(b), np.abs(c)])
    scale = np.where(scale == 0.0, 1.0, scale)
    linear = np.abs(a) < 1e-14 * scale
    with np.errstate(divide="ignore", invalid="ignore"):
        r_lin = np.where(b != 0.0, -c / np.where(b != 0.0, b, 1.0), 0.0)
        disc = np.maximum(b * b - 4.0 * a * c, 0.0)
        sq = np.sqrt(disc)
        qq = -0.5 * (b + np.where(b >= 0.0, 1.0, -1.0) * sq)
        r1 = np.where(a != 0.0, qq / np.where(a != 0.0, a, 1.0), np.inf)
        r2 = np.where(qq != 0.0, c / np.where(qq != 0.0, qq, 1.0), np.inf)
    lo = np.minimum(r1, r2)
    hi = np.maximum(r1, r2)
    tol = 1e-12
    root = np.where(lo >= -tol, lo, hi)
    return np.where(linear, np.clip(r_lin, 0.0, None), np.maximum(root, 0.0))


def _bisect_pressure(q_hat, delta, r_hi, eps_p, gas):
    """Bisect p(q(r)) = eps_p on [0, r_hi]; p(q(0)) >= eps_p by construction."""
    lo = np.zeros_like(r_hi)
    hi = np.asarray(r_hi, dtype=float).copy()
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        ok = _pressure_on_segment(q_hat, delta, mid, gas) >= eps_p
        lo = np.where(ok, mid, lo)
        hi = np.where(ok, hi, mid)
    return lo


def rescaled_caps(q_hat, corrections, caps_rho, eps_p, gas):
    """Vertex-checked caps: for every vertex of the density cap box, compute
    the pressure rescale factor; each direction's final cap is its density
    cap times the smallest factor among vertices where that direction is
    fully open.

    Vertices are visited in Gray-code order so each vertex state differs
    from the previous one by a single scaled correction.
    """
    n_dir = caps_rho.shape[0]
    scaled = caps_rho[:, np.newaxis] * corrections  # (2*dim, m) + cells
    r_min = np.ones((n_dir,) + caps_rho.shape[1:], dtype=float)
    delta = np.zeros_like(scaled[0])
    prev_code = 0
    for idx in range(1, 2**n_dir):
        code = idx ^ (idx >> 1)
        bit = (code ^ prev_code).bit_length() - 1
        if code & (1 << bit):
            delta = delta + scaled[bit]
        else:
            delta = delta - scaled[bit]
        prev_code = code
        r = _rescale_from_delta(q_hat, delta, eps_p, gas)
        for k in range(n_dir):
            if code & (1 << k):
                r_min[k] = np.minimum(r_min[k], r)
    return caps_rho * r_min


def assemble_theta(caps_toward_plus, caps_toward_minus):
    """Per-interface blending parameter: the smaller of the two adjacent
    cells' caps for that interface (left cell's plus-side cap vs right
    cell's minus-side cap), elementwise along the first axis."""
    return np.minimum(caps_toward_plus, caps_toward_minus)


def limited_flux(high, low, theta):
    """Blend theta*(high - low) + low; theta broadcasts over components."""
    return low + theta * (high - low)


@dataclass
class LimiterResult:
    """Interface blending parameters plus diagnostics."""

    theta_x: np.ndarray  # (mx+1[, my])
    theta_y: np.ndarray | None  # (mx, my+1) in 2D
    min_theta: float
    n_limited: int


def limiter_pass(low_res, high_x, high_y, dt, spacings, gas):
    """Full two-step limiter: density caps on the ring rectangle, vertex
    pressure rescale, and the interface minima.  Returns blending parameters
    for the interfaces adjacent to interior cells."""
    instrumentation.bump("limiter_solve")
    q_hat = low_res.q_hat
    dim = q_hat.shape[0] - 2
    dev_x = (dt / spacings[0]) * (high_x - low_res.flux_x)
    if dim == 1:
        contributions = np.stack([dev_x[0, :-1], -dev_x[0, 1:]])
        corrections = np.stack([dev_x[:, :-1], -dev_x[:, 1:]])
        caps_rho = density_caps(q_hat[0], low_res.eps_rho, contributions)
        caps = rescaled_caps(q_hat, corrections, caps_rho, low_res.eps_p, gas)
        theta_x = assemble_theta(caps[1, :-1], caps[0, 1:])
        theta_y = None
        all_theta = theta_x
    else:
        dev_y = (dt / spacings[1]) * (high_y - low_res.flux_y)
        contributions = np.stack(
            [dev_x[0, :-1, :], -dev_x[0, 1:, :], dev_y[0, :, :-1], -dev_y[0, :, 1:]]
        )
        corrections = np.stack(
            [dev_x[:, :-1, :], -dev_x[:, 1:, :], dev_y[:, :, :-1], -dev_y[:, :, 1:]]
        )
        caps_rho = density_caps(q_hat[0], low_res.eps_rho, contributions)
        caps = rescaled_caps(q_hat, corrections, caps_rho, low_res.eps_p, gas)
        # Interior interfaces only: strip the ring rows/columns.
        theta_x = assemble_theta(caps[1, :-1, 1:-1], caps[0, 1:, 1:-1])
        theta_y = assemble_theta(caps[3, 1:-1, :-1], caps[2, 1:-1, 1:])
        all_theta = np.concatenate([theta_x.ravel(), theta_y.ravel()])
    min_theta = float(all_theta.min()) if all_theta.size else 1.0
    n_limited = int(np.count_nonzero(all_theta < 1.0))
    return LimiterResult(theta_x, theta_y, min_theta, n_limited)
