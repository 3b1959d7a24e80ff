"""Single-stage time-stepping driver: CFL step selection, ghost fill, the
full flux pipeline (time-averaged fluxes -> WENO interface fluxes ->
low-order fluxes and floors -> limiter -> conservative update), and per-step
admissibility/conservation audits.

With the limiter enabled a post-update floor violation is an internal error
(the positivity guarantee is unconditional); with it disabled the violation
is converted into a structured failure outcome, which the benchmark problems
are expected to produce.
"""

from __future__ import annotations

import time as _time
from dataclasses import dataclass, field

import numpy as np

from pifweno import instrumentation, low_order, pif_flux, weno
from pifweno.grid import ConfigurationError, fill_ghosts
from pifweno.limiter import limited_flux, limiter_pass
from pifweno.weno import WenoParams, global_alpha


class SolverError(RuntimeError):
    """Internal invariant violated (a bug, not a flow feature)."""


@dataclass(frozen=True)
class FailureRecord:
    """Structured description of a lost-admissibility outcome."""

    step: int
    t: float
    kind: str  # negative_density | negative_pressure
    cell: tuple
    value: float

    def as_dict(self):
        return {
            "step": self.step,
            "t": self.t,
            "kind": self.kind,
            "cell": list(self.cell),
            "value": self.value,
        }


class StepFailure(RuntimeError):
    def __init__(self, record):
        super().__init__(f"{record.kind} at cell {record.cell}, step {record.step}")
        self.record = record


@dataclass(frozen=True)
class StepDiagnostics:
    step: int
    t: float  # time after the step
    dt: float
    min_rho: float
    min_p: float
    min_theta: float
    n_limited: int
    totals: tuple
    weno_sweeps: int
    limiter_solves: int
    eps_rho: float = 0.0  # per-step floors the audit enforced
    eps_p: float = 0.0


@dataclass
class RunResult:
    status: str  # complete | failed | aborted
    q: np.ndarray  # interior field at the end (or at failure)
    t: float
    diagnostics: list
    snapshots: dict = field(default_factory=dict)
    failure: FailureRecord | None = None
    wall_time: float = 0.0


def compute_dt(q_interior, grid, cfl, gas, active=None):
    """CFL time step from the global signal speed: cfl*dx/alpha in 1D,
    cfl / (alpha/dx + alpha/dy) in 2D."""
    if not 0.0 < cfl <= 0.5:
        raise ConfigurationError("cfl must lie in (0, 0.5] for positivity")
    states = q_interior[:, active] if active is not None else q_interior
    alpha = global_alpha(states, gas)
    if grid.dim == 1:
        return cfl * grid.spacings[0] / alpha
    dx, dy = grid.spacings
    return cfl / (alpha / dx + alpha / dy)


def _audit_update(q_new, gas, active, eps_rho, eps_p, limiter_enabled, step_index, t_after):
    rho = q_new[0]
    # Pressure needs care where rho <= 0 (limiter-off runs): guard the
    # division and report such cells as arbitrarily bad.
    safe_rho = np.where(rho > 0.0, rho, 1.0)
    ke = 0.5 * np.sum(q_new[1:-1] ** 2, axis=0) / safe_rho
    p = (gas.gamma - 1.0) * (q_new[-1] - ke)
    p = np.where(rho > 0.0, p, -np.inf)

    if active is not None:
        rho_view = np.where(active, rho, np.inf)
        p_view = np.where(active, p, np.inf)
    else:
        rho_view, p_view = rho, p
    min_rho = float(rho_view.min())
    min_p = float(p_view.min())

    if limiter_enabled:
        if min_rho < eps_rho or min_p < eps_p - 1e-12:
            raise SolverError(
                "positivity floor violated with the limiter enabled "
                f"(min rho {min_rho:.3e} vs {eps_rho:.3e}, "
                f"min p {min_p:.3e} vs {eps_p:.3e}); this is a bug"
            )
    else:
        if min_rho <= 0.0 or min_p <= 0.0:
            if min_rho <= 0.0:
                kind = "negative_density"
                flat = int(np.argmin(rho_view))
                value = min_rho
            else:
                kind = "negative_pressure"
                flat = int(np.argmin(p_view))
                value = min_p
            cell = np.unravel_index(flat, rho.shape)
            raise StepFailure(
                FailureRecord(step_index, t_after, kind, tuple(int(c) for c in cell), value)
            )
    return min_rho, min_p


def step(q_pad, grid, gas, params, dt, limiter_enabled=True, mask=None,
         step_index=0, t_before=0.0):
    """Advance the padded field one step in place; returns StepDiagnostics."""
    if grid.ng < 6:
        raise ConfigurationError("solver pipeline needs ghost width >= 6")
    before = instrumentation.snapshot()
    ng = grid.ng
    dim = grid.dim
    active = mask.active(grid) if mask is not None else None

    fill_ghosts(q_pad, grid, mask)
    q_int = q_pad[grid.interior].copy()

    interior_states = q_int[:, active] if active is not None else q_int
    alpha = global_alpha(interior_states, gas)

    low = low_order.low_order_update(q_pad, dt, grid.spacings, alpha, gas, ng, grid.cells)

    if dim == 1:
        (mx,) = grid.cells
        dx = grid.spacings[0]
        lam = dt / dx
        flux_avg = pif_flux.time_averaged_flux_1d(q_pad, dt, dx, gas)
        high_x = weno.interface_flux(
            flux_avg, q_pad, 0, alpha, params, gas, ng - 2, ng + mx + 1
        )
        if limiter_enabled:
            lim = limiter_pass(low, high_x, None, dt, grid.spacings, gas)
            theta_x = lim.theta_x
            min_theta, n_limited = lim.min_theta, lim.n_limited
        else:
            theta_x = np.ones(mx + 1)
            min_theta, n_limited = 1.0, 0
        blended = limited_flux(high_x[:, 1:-1], low.flux_x[:, 1:-1], theta_x)
        q_new = q_int - lam * (blended[:, 1:] - blended[:, :-1])
    else:
        mx, my = grid.cells
        dx, dy = grid.spacings
        lam_x, lam_y = dt / dx, dt / dy
        flux_avg_x, flux_avg_y = pif_flux.time_averaged_flux_2d(q_pad, dt, dx, dy, gas)
        high_x = weno.interface_flux(
            flux_avg_x, q_pad, 0, alpha, params, gas, ng - 2, ng + mx + 1,
            cross=slice(ng - 1, ng + my + 1),
        )
        high_y = weno.interface_flux(
            flux_avg_y, q_pad, 1, alpha, params, gas, ng - 2, ng + my + 1,
            cross=slice(ng - 1, ng + mx + 1),
        )
        if limiter_enabled:
            lim = limiter_pass(low, high_x, high_y, dt, grid.spacings, gas)
            theta_x, theta_y = lim.theta_x, lim.theta_y
            min_theta, n_limited = lim.min_theta, lim.n_limited
        else:
            theta_x = np.ones((mx + 1, my))
            theta_y = np.ones((mx, my + 1))
            min_theta, n_limited = 1.0, 0
        bx = limited_flux(high_x[:, 1:-1, 1:-1], low.flux_x[:, 1:-1, 1:-1], theta_x)
        by = limited_flux(high_y[:, 1:-1, 1:-1], low.flux_y[:, 1:-1, 1:-1], theta_y)
        q_new = (
            q_int
            - lam_x * (bx[:, 1:, :] - bx[:, :-1, :])
            - lam_y * (by[:, :, 1:] - by[:, :, :-1])
        )

    if active is not None:
        q_new = np.where(active, q_new, q_int)

    t_after = t_before + dt
    min_rho, min_p = _audit_update(
        q_new, gas, active, low.eps_rho, low.eps_p, limiter_enabled, step_index, t_after
    )

    cell_volume = float(np.prod(grid.spacings))
    if active is not None:
        totals = tuple(float(v) for v in (q_new[:, active].sum(axis=1) * cell_volume))
    else:
        totals = tuple(float(v) for v in q_new.reshape(q_new.shape[0], -1).sum(axis=1) * cell_volume)

    q_pad[grid.interior] = q_new
    counts = instrumentation.delta(before)
    sweeps = sum(v for k, v in counts.items() if k.startswith("weno_sweep"))
    solves = counts.get("limiter_solve", 0)
    return StepDiagnostics(
        step=step_index,
        t=t_after,
        dt=dt,
        min_rho=min_rho,
        min_p=min_p,
        min_theta=min_theta,
        n_limited=n_limited,
        totals=totals,
        weno_sweeps=sweeps,
        limiter_solves=solves,
        eps_rho=low.eps_rho,
        eps_p=low.eps_p,
    )


def advance(problem, grid, gas, params=None, cfl=None, t_final=None,
            limiter_enabled=True, snapshot_times=(), max_wall_seconds=None,
            q0=None):
    """Run a problem to its final time, recording per-step diagnostics and
    snapshots at the requested times (reached exactly via step clipping)."""
    params = params or WenoParams()
    cfl = cfl if cfl is not None else problem.default_cfl
    t_end = t_final if t_final is not None else problem.t_final
    mask = problem.mask(grid)
    active = mask.active(grid) if mask is not None else None

    q_int = q0.copy() if q0 is not None else problem.initializer(grid, gas)
    q_pad = grid.pad(q_int)
    fill_ghosts(q_pad, grid, mask)

    events = sorted({float(ts) for ts in snapshot_times if 0.0 < ts <= t_end})
    snapshots = {}
    diagnostics = []
    t = 0.0
    step_index = 0
    start = _time.perf_counter()
    tiny = 1e-14 * max(t_end, 1.0)

    while t < t_end - tiny:
        dt = compute_dt(q_pad[grid.interior], grid, cfl, gas, active)
        next_event = next((e for e in events if e > t + tiny), t_end)
        dt = min(dt, next_event - t, t_end - t)
        step_index += 1
        try:
            diag = step(
                q_pad, grid, gas, params, dt,
                limiter_enabled=limiter_enabled, mask=mask,
                step_index=step_index, t_before=t,
            )
        except StepFailure as fail:
            return RunResult(
                status="failed",
                q=q_pad[grid.interior].copy(),
                t=t,
                diagnostics=diagnostics,
                snapshots=snapshots,
                failure=fail.record,
                wall_time=_time.perf_counter() - start,
            )
        diagnostics.append(diag)
        t += dt
        for e in events:
            if abs(t - e) <= tiny and e not in snapshots:
                snapshots[e] = q_pad[grid.interior].copy()
        if max_wall_seconds is not None and _time.perf_counter() - start > max_wall_seconds:
            return RunResult(
                status="aborted",
                q=q_pad[grid.interior].copy(),
                t=t,
                diagnostics=diagnostics,
                snapshots=snapshots,
                wall_time=_time.perf_counter() - start,
            )

    return RunResult(
        status="complete",
        q=q_pad[grid.interior].copy(),
        t=t,
        diagnostics=diagnostics,
        snapshots=snapshots,
        wall_time=_time.perf_counter() - start,
    )
