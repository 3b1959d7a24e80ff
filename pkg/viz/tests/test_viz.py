import numpy as np
import pytest

from pifweno_viz.cli import main
from pifweno_viz.plots import plot_contours, plot_profiles, report_convergence
from pifweno_viz.snapshots import FormatError, read_snapshot, read_table


def fake_snapshot_1d(path, n=32, problem="demo"):
    x = (np.arange(n) + 0.5) / n
    rho = 1.0 + 0.5 * np.sin(2 * np.pi * x)
    mom = 0.3 * rho
    energy = 2.5 + 0.1 * x
    pressure = 0.4 * (energy - 0.5 * mom**2 / rho)
    with open(path, "w") as fh:
        fh.write("# pifweno snapshot\n")
        fh.write(f"# problem = {problem}\n# dimension = 1\n# t = 0.25\n")
        fh.write(f"# mesh = {n}\n# gamma = 1.4\n# masked = 0\n# cells = {n}\n")
        fh.write("# columns = x,rho,mom_x,energy,pressure\n")
        for i in range(n):
            fh.write(",".join("%.17g" % v for v in (x[i], rho[i], mom[i], energy[i], pressure[i])) + "\n")
    return path


def fake_snapshot_2d(path, nx=12, ny=10, constant=False, masked_cells=None):
    xs = (np.arange(nx) + 0.5) / nx
    ys = (np.arange(ny) + 0.5) / ny
    rows = []
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            if masked_cells and (i, j) in masked_cells:
                continue
            rho = 1.0 if constant else 1.0 + np.sin(3 * x) * np.cos(2 * y)
            mom_x, mom_y = 0.2 * rho, -0.1 * rho
            energy = 3.0 + 0.2 * x * y
            p = 0.4 * (energy - 0.5 * (mom_x**2 + mom_y**2) / rho)
            rows.append((x, y, rho, mom_x, mom_y, energy, p))
    with open(path, "w") as fh:
        fh.write("# pifweno snapshot\n")
        fh.write("# problem = demo2d\n# dimension = 2\n# t = 0.5\n")
        fh.write(f"# mesh = {nx}x{ny}\n# gamma = 1.4\n")
        fh.write(f"# masked = {1 if masked_cells else 0}\n# cells = {len(rows)}\n")
        fh.write("# columns = x,y,rho,mom_x,mom_y,energy,pressure\n")
        for row in rows:
            fh.write(",".join("%.17g" % v for v in row) + "\n")
    return path


def test_snapshot_reader_round_trip(tmp_path):
    path = fake_snapshot_1d(tmp_path / "s.csv")
    snap = read_snapshot(path)
    assert snap.problem == "demo"
    assert snap.dim == 1
    assert snap.mesh == (32,)
    assert snap.quantity("velocity_x") == pytest.approx(np.full(32, 0.3), rel=1e-14)


def test_snapshot_reader_rejects_mesh_mismatch(tmp_path):
    path = fake_snapshot_1d(tmp_path / "s.csv")
    text = path.read_text().replace("# cells = 32", "# cells = 31")
    bad = tmp_path / "bad.csv"
    bad.write_text(text)
    with pytest.raises(FormatError):
        read_snapshot(bad)


def test_snapshot_reader_rejects_empty(tmp_path):
    path = tmp_path / "empty.csv"
    path.write_text("# problem = x\n")
    with pytest.raises(FormatError):
        read_snapshot(path)


def test_profiles_1d(tmp_path):
    snap = read_snapshot(fake_snapshot_1d(tmp_path / "s.csv"))
    ref = read_snapshot(fake_snapshot_1d(tmp_path / "r.csv", n=64))
    paths = plot_profiles(snap, ["rho", "pressure", "velocity_x"], str(tmp_path), reference=ref)
    assert len(paths) == 3
    for p in paths:
        assert (tmp_path / p.split("/")[-1]).stat().st_size > 0


def test_profiles_2d_requires_slice(tmp_path):
    snap = read_snapshot(fake_snapshot_2d(tmp_path / "s2.csv"))
    with pytest.raises(FormatError):
        plot_profiles(snap, ["rho"], str(tmp_path))
    paths = plot_profiles(snap, ["rho"], str(tmp_path), slice_y=0.0)
    assert len(paths) == 1


def test_profiles_unknown_quantity_is_usage_error(tmp_path):
    path = fake_snapshot_1d(tmp_path / "s.csv")
    rc = main(["profiles", str(path), "--quantities", "vorticity", "--out", str(tmp_path)])
    assert rc == 2


def test_contours_with_default_and_custom_levels(tmp_path):
    snap = read_snapshot(fake_snapshot_2d(tmp_path / "s2.csv"))
    out = plot_contours(snap, "rho", str(tmp_path), levels=(0.2, 1.9, 10))
    assert out.endswith("contour_rho.png")
    rc = main(["contours", str(tmp_path / "s2.csv"), "--quantity", "pressure",
               "--levels", "0.5:2.0:12", "--out", str(tmp_path)])
    assert rc == 0


def test_contours_constant_field_warns_but_succeeds(tmp_path, capsys):
    path = fake_snapshot_2d(tmp_path / "c.csv", constant=True)
    rc = main(["contours", str(path), "--quantity", "rho",
               "--levels", "0:1:5", "--out", str(tmp_path)])
    captured = capsys.readouterr()
    assert rc == 0
    assert "constant field" in captured.err


def test_contours_masked_snapshot(tmp_path):
    masked = {(i, j) for i in range(4) for j in range(4)}
    snap = read_snapshot(fake_snapshot_2d(tmp_path / "m.csv", masked_cells=masked))
    assert snap.masked
    out = plot_contours(snap, "rho", str(tmp_path), levels=(0.2, 1.9, 8))
    assert out


def write_convergence_table(path, rows):
    with open(path, "w") as fh:
        fh.write("# columns = mesh,l1_error,l1_order,linf_error,linf_order\n")
        for r in rows:
            fh.write(",".join(r) + "\n")
    return path


def test_convergence_report(tmp_path):
    table = write_convergence_table(
        tmp_path / "conv.csv",
        [
            ["80x80", "2.970e-06", "-", "2.494e-04", "-"],
            ["160x160", "1.627e-07", "4.190", "2.442e-05", "3.353"],
            ["320x320", "7.384e-09", "4.462", "1.390e-06", "4.135"],
        ],
    )
    txt, png, slopes = report_convergence(str(table), str(tmp_path))
    body = open(txt).read()
    assert "4.190" in body and "80x80" in body
    # Log-log slope recovers the observed order from the table's own data.
    assert slopes["L1"] == pytest.approx(4.33, abs=0.2)
    assert (tmp_path / "convergence.png").stat().st_size > 0


def test_convergence_single_row(tmp_path):
    table = write_convergence_table(
        tmp_path / "one.csv", [["100", "1.0e-03", "-", "2.0e-03", "-"]]
    )
    txt, png, slopes = report_convergence(str(table), str(tmp_path))
    assert slopes == {}
    assert "1.000e-03" in open(txt).read()


def test_deterministic_rendering(tmp_path):
    snap = read_snapshot(fake_snapshot_1d(tmp_path / "s.csv"))
    (tmp_path / "a").mkdir()
    (tmp_path / "b").mkdir()
    a = plot_profiles(snap, ["rho"], str(tmp_path / "a"), stem="p")
    b = plot_profiles(snap, ["rho"], str(tmp_path / "b"), stem="p")
    assert open(a[0], "rb").read() == open(b[0], "rb").read()


def test_reader_never_mutates_input(tmp_path):
    path = fake_snapshot_1d(tmp_path / "s.csv")
    before = path.read_bytes()
    read_snapshot(path)
    main(["profiles", str(path), "--out", str(tmp_path)])
    assert path.read_bytes() == before


def test_missing_file_is_error(tmp_path):
    assert main(["profiles", str(tmp_path / "nope.csv"), "--out", str(tmp_path)]) == 2
    assert main(["convergence", str(tmp_path / "nope.csv"), "--out", str(tmp_path)]) == 2
