import json
import os

import numpy as np
import pytest

from pifweno.cli import main
from pifweno.config import ConfigError, load_config, parse_mesh
from pifweno.euler import GasModel
from pifweno.grid import GridSpec, periodic
from pifweno.io import read_delimited, read_snapshot, write_snapshot
from pifweno.problems import get_problem


def write_cfg(tmp_path, text, name="case.cfg"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_parse_mesh():
    assert parse_mesh("400") == (400,)
    assert parse_mesh("80x80") == (80, 80)
    with pytest.raises(ConfigError):
        parse_mesh("80x-2")
    with pytest.raises(ConfigError):
        parse_mesh("abc")


def test_load_config_defaults_and_validation(tmp_path):
    cfg = load_config(write_cfg(tmp_path, "problem = vortex\nmesh = 20x20\n# comment\n"))
    assert cfg.problem == "vortex"
    assert cfg.mesh == (20, 20)
    assert cfg.limiter and cfg.gamma == 1.4
    with pytest.raises(ConfigError):
        load_config(write_cfg(tmp_path, "mesh = 20x20\n", "missing.cfg"))
    with pytest.raises(ConfigError):
        load_config(write_cfg(tmp_path, "problem = vortex\nbogus_key = 3\n", "bad.cfg"))
    with pytest.raises(ConfigError):
        load_config(write_cfg(tmp_path, "problem = vortex\ncfl = 0.9\n", "cfl.cfg"))


def test_snapshot_round_trip(tmp_path):
    grid = GridSpec(
        ((0.0, 1.0), (0.0, 2.0)), (6, 8),
        ((periodic(), periodic()), (periodic(), periodic())),
    )
    gas = GasModel(1.4)
    rng = np.random.default_rng(5)
    q = np.abs(rng.standard_normal((4, 6, 8))) + 0.5
    q[3] += 5.0
    path = tmp_path / "snap.csv"
    write_snapshot(str(path), "demo", 0.125, grid, gas, q)
    snap = read_snapshot(str(path))
    assert snap.problem == "demo"
    assert snap.mesh == (6, 8)
    assert snap.t == 0.125
    # Bit-exact round trip of every field column.
    assert np.array_equal(snap.column("rho"), q[0].ravel())
    assert np.array_equal(snap.column("energy"), q[3].ravel())
    xs, ys = grid.mesh()
    assert np.array_equal(snap.column("x"), xs.ravel())
    assert np.array_equal(snap.column("y"), ys.ravel())


def test_run_command_writes_artifacts(tmp_path):
    cfg = write_cfg(
        tmp_path,
        "problem = vortex\nmesh = 20x20\nt_final = 0.004\n"
        f"output_dir = {tmp_path}/out\nsnapshot_times = 0.002\n",
    )
    rc = main(["run", cfg])
    assert rc == 0
    out = tmp_path / "out"
    assert (out / "diagnostics.csv").exists()
    assert (out / "snapshot_t0.002000000.csv").exists()
    assert (out / "snapshot_t0.004000000.csv").exists()
    summary = json.loads((out / "summary.json").read_text())
    assert summary["status"] == "complete"
    assert summary["min_rho"] > 0
    cols, rows = read_delimited(str(out / "diagnostics.csv"))
    assert cols[:3] == ["step", "t", "dt"]
    assert len(rows) == summary["steps"]


def test_run_determinism_bit_identical(tmp_path):
    base = "problem = vortex\nmesh = 16x16\nt_final = 0.003\n"
    cfg1 = write_cfg(tmp_path, base + f"output_dir = {tmp_path}/a\n", "a.cfg")
    cfg2 = write_cfg(tmp_path, base + f"output_dir = {tmp_path}/b\n", "b.cfg")
    assert main(["run", cfg1]) == 0
    assert main(["run", cfg2]) == 0
    name = "snapshot_t0.003000000.csv"
    assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    assert (tmp_path / "a" / "diagnostics.csv").read_bytes() == (
        tmp_path / "b" / "diagnostics.csv"
    ).read_bytes()


def test_run_no_limiter_failure_exit_code(tmp_path):
    cfg = write_cfg(
        tmp_path,
        f"problem = double_rarefaction\nmesh = 200\noutput_dir = {tmp_path}/fail\n",
    )
    rc = main(["run", cfg, "--no-limiter"])
    assert rc == 3
    record = json.loads((tmp_path / "fail" / "failure.json").read_text())
    assert record["kind"] in ("negative_density", "negative_pressure")
    assert record["step"] >= 1
    assert isinstance(record["cell"], list)


def test_config_error_exit_code(tmp_path):
    cfg = write_cfg(tmp_path, "problem = not_a_problem\n")
    assert main(["run", cfg]) == 2
    assert main(["run", str(tmp_path / "missing.cfg")]) == 2


def test_cli_flag_overrides(tmp_path):
    cfg = write_cfg(
        tmp_path,
        f"problem = vortex\nmesh = 32x32\nt_final = 0.002\noutput_dir = {tmp_path}/x\n",
    )
    rc = main(["run", cfg, "--mesh", "16x16", "--cfl", "0.2", "--output-dir", str(tmp_path / "y")])
    assert rc == 0
    summary = json.loads((tmp_path / "y" / "summary.json").read_text())
    assert summary["mesh"] == "16x16"
    assert summary["cfl"] == 0.2


def test_convergence_command(tmp_path):
    cfg = write_cfg(
        tmp_path,
        "problem = vortex\nmeshes = 16x16,32x32\nt_final = 0.002\n"
        f"output_dir = {tmp_path}/conv\n",
    )
    assert main(["convergence", cfg]) == 0
    cols, rows = read_delimited(str(tmp_path / "conv" / "convergence.csv"))
    assert cols == ["mesh", "l1_error", "l1_order", "linf_error", "linf_order"]
    assert rows[0]["mesh"] == "16x16"
    assert rows[0]["l1_order"] == "-"
    assert isinstance(rows[1]["l1_order"], float)
    assert rows[1]["l1_error"] < rows[0]["l1_error"]


def test_convergence_identical_meshes_flagged(tmp_path):
    cfg = write_cfg(
        tmp_path,
        "problem = vortex\nmeshes = 16x16,16x16\nt_final = 0.002\n"
        f"output_dir = {tmp_path}/conv2\n",
    )
    assert main(["convergence", cfg]) == 0
    _, rows = read_delimited(str(tmp_path / "conv2" / "convergence.csv"))
    assert rows[1]["l1_order"] == "-"


def test_convergence_requires_exact_solution(tmp_path):
    cfg = write_cfg(tmp_path, "problem = sedov1d\nmeshes = 100\n")
    assert main(["convergence", cfg]) == 2
