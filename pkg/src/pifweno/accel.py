"""Fused numba kernels for the two per-step hot paths in 2D: the
characteristic WENO interface sweep and the pointwise time-averaged flux
construction.

These reproduce the numpy reference implementations in weno.py/pif_flux.py
to round-off (no fastmath, no reassociation); equivalence is pinned by
tests.  The 1D paths stay on numpy (they are cheap).  If numba is missing
the dispatchers fall back silently.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import config as _numba_config
    from numba import njit, prange

    # workqueue is always present; avoids the noisy TBB-version fallback.
    _numba_config.THREADING_LAYER = "workqueue"

    AVAILABLE = True
except ImportError:  # pragma: no cover - numba is a hard dep of the env
    AVAILABLE = False

    def njit(*args, **kwargs):
        def deco(fn):
            return fn

        return deco if not (len(args) == 1 and callable(args[0])) else args[0]

    prange = range


@njit(cache=True, inline="always")
def _weno5(v0, v1, v2, v3, v4, eps, power):
    b0 = (13.0 / 12.0) * (v0 - 2.0 * v1 + v2) ** 2 + 0.25 * (v0 - 4.0 * v1 + 3.0 * v2) ** 2
    b1 = (13.0 / 12.0) * (v1 - 2.0 * v2 + v3) ** 2 + 0.25 * (v1 - v3) ** 2
    b2 = (13.0 / 12.0) * (v2 - 2.0 * v3 + v4) ** 2 + 0.25 * (3.0 * v2 - 4.0 * v3 + v4) ** 2
    a0 = 0.1 / (eps + b0) ** power
    a1 = 0.6 / (eps + b1) ** power
    a2 = 0.3 / (eps + b2) ** power
    s = a0 + a1 + a2
    d0 = (2.0 * (v0 - v1) + 5.0 * (v2 - v1)) / 6.0
    d1 = ((v3 - v1) + (v3 - v2)) / 6.0
    d2 = (5.0 * (v3 - v2) - (v4 - v2)) / 6.0
    return v2 + (a0 * d0 + a1 * d1 + a2 * d2) / s


@njit(cache=True, parallel=True)
def _char_sweep_2d(flux_field, q, alpha, gamma, eps, power, direction,
                   left_lo, n_int, cross_lo, n_cross, out):
    k = gamma - 1.0
    n_idx = 1 + direction
    t_idx = 2 - direction
    for a in prange(n_int):
        cp = np.empty((6, 4))
        cm = np.empty((6, 4))
        rec = np.empty(4)
        for c in range(n_cross):
            if direction == 0:
                i_l, j_l = left_lo + a, cross_lo + c
                i_r, j_r = i_l + 1, j_l
            else:
                i_l, j_l = cross_lo + c, left_lo + a
                i_r, j_r = i_l, j_l + 1

            rho = 0.5 * (q[0, i_l, j_l] + q[0, i_r, j_r])
            mn = 0.5 * (q[n_idx, i_l, j_l] + q[n_idx, i_r, j_r])
            mt = 0.5 * (q[t_idx, i_l, j_l] + q[t_idx, i_r, j_r])
            en = 0.5 * (q[3, i_l, j_l] + q[3, i_r, j_r])
            un = mn / rho
            ut = mt / rho
            vsq = un * un + ut * ut
            p = k * (en - 0.5 * rho * vsq)
            c2 = gamma * p / rho
            cs = np.sqrt(c2)
            phi = 0.5 * k * vsq
            enth = (en + p) / rho
            inv_c2 = 1.0 / c2
            inv_2c2 = 0.5 * inv_c2

            # Project the six stencil nodes of the split flux onto the left
            # eigenvectors (normal-first component convention).
            for s in range(6):
                if direction == 0:
                    ii, jj = left_lo + a - 2 + s, cross_lo + c
                else:
                    ii, jj = cross_lo + c, left_lo + a - 2 + s
                f0 = flux_field[0, ii, jj]
                fn = flux_field[n_idx, ii, jj]
                ft = flux_field[t_idx, ii, jj]
                f3 = flux_field[3, ii, jj]
                q0 = q[0, ii, jj]
                qn = q[n_idx, ii, jj]
                qt = q[t_idx, ii, jj]
                q3 = q[3, ii, jj]
                for sign in range(2):
                    if sign == 0:
                        w0 = 0.5 * f0 + 0.5 * alpha * q0
                        w1 = 0.5 * fn + 0.5 * alpha * qn
                        w2 = 0.5 * ft + 0.5 * alpha * qt
                        w3 = 0.5 * f3 + 0.5 * alpha * q3
                        dst = cp
                    else:
                        w0 = 0.5 * f0 - 0.5 * alpha * q0
                        w1 = 0.5 * fn - 0.5 * alpha * qn
                        w2 = 0.5 * ft - 0.5 * alpha * qt
                        w3 = 0.5 * f3 - 0.5 * alpha * q3
                        dst = cm
                    dst[s, 0] = (
                        (phi + un * cs) * inv_2c2 * w0
                        - (k * un + cs) * inv_2c2 * w1
                        - k * ut * inv_2c2 * w2
                        + k * inv_2c2 * w3
                    )
                    dst[s, 1] = (
                        (1.0 - phi * inv_c2) * w0
                        + k * un * inv_c2 * w1
                        + k * ut * inv_c2 * w2
                        - k * inv_c2 * w3
                    )
                    dst[s, 2] = -ut * w0 + w2
                    dst[s, 3] = (
                        (phi - un * cs) * inv_2c2 * w0
                        - (k * un - cs) * inv_2c2 * w1
                        - k * ut * inv_2c2 * w2
                        + k * inv_2c2 * w3
                    )

            for field in range(4):
                wp = _weno5(cp[0, field], cp[1, field], cp[2, field], cp[3, field], cp[4, field], eps, power)
                wm = _weno5(cm[5, field], cm[4, field], cm[3, field], cm[2, field], cm[1, field], eps, power)
                rec[field] = wp + wm

            # Back-project with the right eigenvectors and scatter the
            # momentum components back into grid order.
            r0 = rec[0] + rec[1] + rec[3]
            rn = (un - cs) * rec[0] + un * rec[1] + (un + cs) * rec[3]
            rt = ut * rec[0] + ut * rec[1] + rec[2] + ut * rec[3]
            r3 = (
                (enth - un * cs) * rec[0]
                + 0.5 * vsq * rec[1]
                + ut * rec[2]
                + (enth + un * cs) * rec[3]
            )
            out[0, a, c] = r0
            out[n_idx, a, c] = rn
            out[t_idx, a, c] = rt
            out[3, a, c] = r3


def char_sweep_2d(flux_field, q, direction, alpha, params, gas, left_lo, left_hi, cross_lo, cross_hi):
    n_int = left_hi - left_lo
    n_cross = cross_hi - cross_lo
    out = np.empty((4, n_int, n_cross))
    _char_sweep_2d(
        flux_field, q, alpha, gas.gamma, params.eps, params.power,
        direction, left_lo, n_int, cross_lo, n_cross, out,
    )
    if direction == 1:
        return np.transpose(out, (0, 2, 1)).copy()
    return out


@njit(cache=True, inline="always")
def _jac_dot(rho, u, v, en, p, enth, phi, gamma, d, v0, v1, v2, v3):
    """Flux Jacobian (direction d) applied to (v0..v3); returns 4 scalars.
    Component order is grid order (rho, mx, my, E)."""
    k = gamma - 1.0
    if d == 0:
        un, ut, mv, tv = u, v, v1, v2
    else:
        un, ut, mv, tv = v, u, v2, v1
    out0 = mv
    outn = (
        (-un * un + phi) * v0
        + (2.0 * un - k * un) * mv
        + (-k * ut) * tv
        + k * v3
    )
    outt = (-un * ut) * v0 + ut * mv + un * tv
    out3 = (
        un * (phi - enth) * v0
        + (-k * un * un + enth) * mv
        + (-k * ut * un) * tv
        + gamma * un * v3
    )
    if d == 0:
        return out0, outn, outt, out3
    return out0, outt, outn, out3


@njit(cache=True, inline="always")
def _hess_contract(rho, mx, my, en, gamma, d, a0, a1, a2, a3, b0, b1, b2, b3):
    """Flux Hessian (direction d) bilinear contraction with increments a, b
    in grid component order."""
    k = gamma - 1.0
    inv = 1.0 / rho
    inv2 = inv * inv
    md = mx if d == 0 else my
    ad = a1 if d == 0 else a2
    bd = b1 if d == 0 else b2
    msq = mx * mx + my * my
    m_dot_a = mx * a1 + my * a2
    m_dot_b = mx * b1 + my * b2
    a_dot_b = a1 * b1 + a2 * b2

    # d2 of m_i * m_d / rho for both momentum rows.
    def pair(m_a, aa, ba):
        return (
            (aa * bd + ba * ad) * inv
            - ((aa * md + m_a * ad) * b0 + (ba * md + m_a * bd) * a0) * inv2
            + 2.0 * m_a * md * a0 * b0 * inv2 * inv
        )

    h_mx = pair(mx, a1, b1)
    h_my = pair(my, a2, b2)
    d2_ke = (
        2.0 * a_dot_b * inv
        - 2.0 * (m_dot_a * b0 + m_dot_b * a0) * inv2
        + 2.0 * msq * a0 * b0 * inv2 * inv
    )
    if d == 0:
        h_mx -= 0.5 * k * d2_ke
    else:
        h_my -= 0.5 * k * d2_ke

    d2_em = (
        (a3 * bd + b3 * ad) * inv
        - ((a3 * md + en * ad) * b0 + (b3 * md + en * bd) * a0) * inv2
        + 2.0 * en * md * a0 * b0 * inv2 * inv
    )
    d2_s = (
        2.0 * (a_dot_b * md + m_dot_a * bd + m_dot_b * ad) * inv2
        - 2.0 * ((2.0 * m_dot_a * md + msq * ad) * b0 + (2.0 * m_dot_b * md + msq * bd) * a0) * inv2 * inv
        + 6.0 * msq * md * a0 * b0 * inv2 * inv2
    )
    h_e = gamma * d2_em - 0.5 * k * d2_s
    return 0.0, h_mx, h_my, h_e


@njit(cache=True, parallel=True)
def _time_avg_2d(q, f, g, dt, dx, dy, gamma, out_x, out_y):
    k = gamma - 1.0
    nx = q.shape[1]
    ny = q.shape[2]
    c12x = 1.0 / (12.0 * dx)
    c12xx = 1.0 / (12.0 * dx * dx)
    c12y = 1.0 / (12.0 * dy)
    c12yy = 1.0 / (12.0 * dy * dy)
    cxy = 1.0 / (4.0 * dx * dy)
    half_dt = 0.5 * dt
    sixth_dt2 = dt * dt / 6.0
    for i in prange(2, nx - 2):
        fx = np.empty(4)
        fxx = np.empty(4)
        gy = np.empty(4)
        gyy = np.empty(4)
        fxy = np.empty(4)
        gxy = np.empty(4)
        qx = np.empty(4)
        qy = np.empty(4)
        div = np.empty(4)
        for j in range(2, ny - 2):
            for m in range(4):
                fx[m] = ((f[m, i - 2, j] - f[m, i + 2, j])
                         + 8.0 * (f[m, i + 1, j] - f[m, i - 1, j])) * c12x
                fxx[m] = (16.0 * (f[m, i - 1, j] + f[m, i + 1, j])
                          - (f[m, i - 2, j] + f[m, i + 2, j]) - 30.0 * f[m, i, j]) * c12xx
                gy[m] = ((g[m, i, j - 2] - g[m, i, j + 2])
                         + 8.0 * (g[m, i, j + 1] - g[m, i, j - 1])) * c12y
                gyy[m] = (16.0 * (g[m, i, j - 1] + g[m, i, j + 1])
                          - (g[m, i, j - 2] + g[m, i, j + 2]) - 30.0 * g[m, i, j]) * c12yy
                fxy[m] = (f[m, i + 1, j + 1] - f[m, i - 1, j + 1]
                          - f[m, i + 1, j - 1] + f[m, i - 1, j - 1]) * cxy
                gxy[m] = (g[m, i + 1, j + 1] - g[m, i - 1, j + 1]
                          - g[m, i + 1, j - 1] + g[m, i - 1, j - 1]) * cxy
                qx[m] = ((q[m, i - 2, j] - q[m, i + 2, j])
                         + 8.0 * (q[m, i + 1, j] - q[m, i - 1, j])) * c12x
                qy[m] = ((q[m, i, j - 2] - q[m, i, j + 2])
                         + 8.0 * (q[m, i, j + 1] - q[m, i, j - 1])) * c12y
                div[m] = fx[m] + gy[m]

            rho = q[0, i, j]
            mx_ = q[1, i, j]
            my_ = q[2, i, j]
            en = q[3, i, j]
            u = mx_ / rho
            v = my_ / rho
            vsq = u * u + v * v
            p = k * (en - 0.5 * rho * vsq)
            enth = (en + p) / rho
            phi = 0.5 * k * vsq

            # bracket = d/dt of -(f_x + g_y), shared by both expansions
            hq_x = _hess_contract(rho, mx_, my_, en, gamma, 0,
                                  qx[0], qx[1], qx[2], qx[3],
                                  div[0], div[1], div[2], div[3])
            hq_y = _hess_contract(rho, mx_, my_, en, gamma, 1,
                                  qy[0], qy[1], qy[2], qy[3],
                                  div[0], div[1], div[2], div[3])
            jf0, jf1, jf2, jf3 = _jac_dot(rho, u, v, en, p, enth, phi, gamma, 0,
                                          fxx[0] + gxy[0], fxx[1] + gxy[1],
                                          fxx[2] + gxy[2], fxx[3] + gxy[3])
            jg0, jg1, jg2, jg3 = _jac_dot(rho, u, v, en, p, enth, phi, gamma, 1,
                                          fxy[0] + gyy[0], fxy[1] + gyy[1],
                                          fxy[2] + gyy[2], fxy[3] + gyy[3])
            br0 = hq_x[0] + jf0 + hq_y[0] + jg0
            br1 = hq_x[1] + jf1 + hq_y[1] + jg1
            br2 = hq_x[2] + jf2 + hq_y[2] + jg2
            br3 = hq_x[3] + jf3 + hq_y[3] + jg3

            hd_f = _hess_contract(rho, mx_, my_, en, gamma, 0,
                                  div[0], div[1], div[2], div[3],
                                  div[0], div[1], div[2], div[3])
            hd_g = _hess_contract(rho, mx_, my_, en, gamma, 1,
                                  div[0], div[1], div[2], div[3],
                                  div[0], div[1], div[2], div[3])
            df0, df1, df2, df3 = _jac_dot(rho, u, v, en, p, enth, phi, gamma, 0,
                                          div[0], div[1], div[2], div[3])
            ab0, ab1, ab2, ab3 = _jac_dot(rho, u, v, en, p, enth, phi, gamma, 0,
                                          br0, br1, br2, br3)
            out_x[0, i, j] = f[0, i, j] + half_dt * (-df0) + sixth_dt2 * (hd_f[0] + ab0)
            out_x[1, i, j] = f[1, i, j] + half_dt * (-df1) + sixth_dt2 * (hd_f[1] + ab1)
            out_x[2, i, j] = f[2, i, j] + half_dt * (-df2) + sixth_dt2 * (hd_f[2] + ab2)
            out_x[3, i, j] = f[3, i, j] + half_dt * (-df3) + sixth_dt2 * (hd_f[3] + ab3)

            dg0, dg1, dg2, dg3 = _jac_dot(rho, u, v, en, p, enth, phi, gamma, 1,
                                          div[0], div[1], div[2], div[3])
            bg0, bg1, bg2, bg3 = _jac_dot(rho, u, v, en, p, enth, phi, gamma, 1,
                                          br0, br1, br2, br3)
            out_y[0, i, j] = g[0, i, j] + half_dt * (-dg0) + sixth_dt2 * (hd_g[0] + bg0)
            out_y[1, i, j] = g[1, i, j] + half_dt * (-dg1) + sixth_dt2 * (hd_g[1] + bg1)
            out_y[2, i, j] = g[2, i, j] + half_dt * (-dg2) + sixth_dt2 * (hd_g[2] + bg2)
            out_y[3, i, j] = g[3, i, j] + half_dt * (-dg3) + sixth_dt2 * (hd_g[3] + bg3)


def time_avg_flux_2d(q, f, g, dt, dx, dy, gas):
    out_x = f.copy()
    out_y = g.copy()
    _time_avg_2d(q, f, g, dt, dx, dy, gas.gamma, out_x, out_y)
    return out_x, out_y
