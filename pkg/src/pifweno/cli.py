"""Command-line front end.

    pifweno run <config> [--output-dir DIR] [--mesh NxM] [--cfl C] [--no-limiter]
    pifweno convergence <config> [--output-dir DIR]

``run`` writes per-step diagnostics, snapshots at the requested times plus
the final time, and a JSON run summary; a lost-admissibility outcome (e.g. a
limiter-off benchmark) exits with status 3 and a machine-readable failure
record.  ``convergence`` runs the configured mesh list against the problem's
exact solution and writes the error/order table.

Exit codes: 0 success, 2 configuration error, 3 solver failure.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from pifweno import io as pif_io
from pifweno.config import ConfigError, load_config, parse_mesh
from pifweno.euler import GasModel
from pifweno.grid import ConfigurationError
from pifweno.problems import get_problem
from pifweno.solver import advance
from pifweno.weno import WenoParams


def _build_parser():
    parser = argparse.ArgumentParser(prog="pifweno", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("run", "convergence"):
        p = sub.add_parser(name)
        p.add_argument("config", help="flat key=value configuration file")
        p.add_argument("--output-dir", help="override output_dir")
        p.add_argument("--mesh", help="override mesh, e.g. 80x80")
        p.add_argument("--cfl", type=float, help="override CFL number")
        p.add_argument("--no-limiter", action="store_true", help="disable the positivity limiter")
    return parser


def _prepare(cfg, args):
    if args.output_dir:
        cfg.output_dir = args.output_dir
    if args.mesh:
        cfg.mesh = parse_mesh(args.mesh)
    if args.cfl is not None:
        if not 0.0 < args.cfl <= 0.5:
            raise ConfigError("cfl must lie in (0, 0.5]")
        cfg.cfl = args.cfl
    if args.no_limiter:
        cfg.limiter = False
    os.makedirs(cfg.output_dir, exist_ok=True)
    gas = GasModel(cfg.gamma)
    params = WenoParams(power=cfg.weno_power, eps=cfg.weno_eps)
    problem = get_problem(cfg.problem)
    return problem, gas, params


def _snapshot_name(t):
    return f"snapshot_t{t:.9f}.csv"


def cmd_run(cfg, args):
    problem, gas, params = _prepare(cfg, args)
    grid = problem.grid(cells=cfg.mesh, gas=gas)
    t_final = cfg.t_final if cfg.t_final is not None else problem.t_final
    wanted = tuple(cfg.snapshot_times) + (t_final,)
    result = advance(
        problem,
        grid,
        gas,
        params=params,
        cfl=cfg.cfl,
        t_final=t_final,
        limiter_enabled=cfg.limiter,
        snapshot_times=wanted,
    )

    out = cfg.output_dir
    pif_io.write_diagnostics(os.path.join(out, "diagnostics.csv"), grid.dim, result.diagnostics)
    mask = problem.mask(grid)
    active = mask.active(grid) if mask is not None else None
    for t_snap, field in sorted(result.snapshots.items()):
        pif_io.write_snapshot(
            os.path.join(out, _snapshot_name(t_snap)),
            problem.name, t_snap, grid, gas, field, active=active,
        )

    summary = {
        "problem": problem.name,
        "mesh": "x".join(str(m) for m in grid.cells),
        "cfl": cfg.cfl if cfg.cfl is not None else problem.default_cfl,
        "limiter": cfg.limiter,
        "status": result.status,
        "t_end": result.t,
        "steps": len(result.diagnostics),
        "min_rho": min((d.min_rho for d in result.diagnostics), default=None),
        "min_p": min((d.min_p for d in result.diagnostics), default=None),
        "min_theta": min((d.min_theta for d in result.diagnostics), default=None),
        "wall_time_seconds": result.wall_time,
    }
    if result.failure is not None:
        summary["failure"] = result.failure.as_dict()
        pif_io.write_summary(os.path.join(out, "failure.json"), result.failure.as_dict())
    pif_io.write_summary(os.path.join(out, "summary.json"), summary)

    if result.status == "failed":
        rec = result.failure
        print(
            f"run failed: {rec.kind} at cell {rec.cell} (step {rec.step}, t={rec.t:.6g})",
            file=sys.stderr,
        )
        return 3
    if result.status == "aborted":
        print("run aborted: wall-clock budget exceeded", file=sys.stderr)
        return 3
    print(
        f"{problem.name}: {len(result.diagnostics)} steps to t={result.t:.6g}, "
        f"min rho {summary['min_rho']:.3e}, min p {summary['min_p']:.3e}"
    )
    return 0


def cmd_convergence(cfg, args):
    problem, gas, params = _prepare(cfg, args)
    if problem.exact is None:
        raise ConfigError(f"problem {problem.name!r} has no exact solution")
    meshes = cfg.meshes
    if not meshes and cfg.mesh:
        meshes = (cfg.mesh,)
    if not meshes:
        raise ConfigError("convergence needs a 'meshes' list")
    t_final = cfg.t_final if cfg.t_final is not None else problem.t_final

    rows = []
    prev = None
    for cells in meshes:
        grid = problem.grid(cells=cells, gas=gas)
        result = advance(
            problem, grid, gas, params=params, cfl=cfg.cfl,
            t_final=t_final, limiter_enabled=cfg.limiter,
        )
        if result.status != "complete":
            raise RuntimeError(f"convergence case {cells} did not complete")
        ref = problem.exact(t_final, grid, gas)
        err = np.abs(result.q[0] - ref[0])
        volume = float(np.prod([b - a for a, b in grid.extents]))
        l1 = float(err.sum() * np.prod(grid.spacings) / volume)
        linf = float(err.max())
        if prev is not None and prev["cells"] != cells:
            ratio = prev["cells"][0] / cells[0]
            # order from the spacing ratio; identical meshes get no order
            l1_order = float(np.log(prev["l1"] / l1) / np.log(1.0 / ratio))
            linf_order = float(np.log(prev["linf"] / linf) / np.log(1.0 / ratio))
        else:
            l1_order = None
            linf_order = None
        rows.append(
            {
                "mesh": "x".join(str(m) for m in cells),
                "l1_error": l1,
                "l1_order": l1_order,
                "linf_error": linf,
                "linf_order": linf_order,
            }
        )
        prev = {"cells": cells, "l1": l1, "linf": linf}

    path = os.path.join(cfg.output_dir, "convergence.csv")
    pif_io.write_convergence(path, rows)
    for r in rows:
        l1o = "-" if r["l1_order"] is None else f"{r['l1_order']:.3f}"
        lio = "-" if r["linf_order"] is None else f"{r['linf_order']:.3f}"
        print(f"{r['mesh']:>10}  L1 {r['l1_error']:.4e} ({l1o})  Linf {r['linf_error']:.4e} ({lio})")
    return 0


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.command == "run":
            return cmd_run(cfg, args)
        return cmd_convergence(cfg, args)
    except (ConfigError, ConfigurationError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
