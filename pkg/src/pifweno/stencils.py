"""Fixed central finite-difference stencils used by the time-averaged flux
construction: 4th-order first/second derivatives and the compact 2nd-order
cross derivative.

Field variants operate on ghost-padded arrays along a chosen axis using
``np.roll``; results are only meaningful at points with full stencil support
(two cells in from every array edge), which callers guarantee by consuming
the interior region only.
"""

from __future__ import annotations

import numpy as np


def d1_central4(values, dx):
    """First derivative at the middle of 5 samples; exact for degree <= 4.

    Terms are paired so that constant fields difference away exactly.
    """
    u = np.asarray(values, dtype=float)
    return ((u[0] - u[4]) + 8.0 * (u[3] - u[1])) / (12.0 * dx)


def d2_central4(values, dx):
    """Second derivative at the middle of 5 samples; exact for degree <= 5."""
    u = np.asarray(values, dtype=float)
    return (16.0 * (u[1] + u[3]) - (u[0] + u[4]) - 30.0 * u[2]) / (12.0 * dx * dx)


def dxy_central2(corners, dx, dy):
    """Cross derivative from the four corner samples (u[pm x, pm y] given as
    ((u_mm, u_mp), (u_pm, u_pp))); exact for bilinear functions."""
    u = np.asarray(corners, dtype=float)
    return (u[1, 1] - u[0, 1] - u[1, 0] + u[0, 0]) / (4.0 * dx * dy)


def _shift(u, k, axis):
    # roll(-k) puts u[i+k] at position i; wrapped edge values are consumed by
    # nobody (callers stay >= 2 cells inside the padded array).
    return np.roll(u, -k, axis=axis)


def d1_field(u, dx, axis):
    """4th-order first derivative of a padded field along one axis."""
    return (
        (_shift(u, -2, axis) - _shift(u, 2, axis))
        + 8.0 * (_shift(u, 1, axis) - _shift(u, -1, axis))
    ) / (12.0 * dx)


def d2_field(u, dx, axis):
    """4th-order second derivative of a padded field along one axis."""
    return (
        16.0 * (_shift(u, -1, axis) + _shift(u, 1, axis))
        - (_shift(u, -2, axis) + _shift(u, 2, axis))
        - 30.0 * u
    ) / (12.0 * dx * dx)


def dxy_field(u, dx, dy, axis_x, axis_y):
    """2nd-order compact cross derivative of a padded field."""
    upp = _shift(_shift(u, 1, axis_x), 1, axis_y)
    upm = _shift(_shift(u, 1, axis_x), -1, axis_y)
    ump = _shift(_shift(u, -1, axis_x), 1, axis_y)
    umm = _shift(_shift(u, -1, axis_x), -1, axis_y)
    return (upp - ump - upm + umm) / (4.0 * dx * dy)
