"""Command-line interface tests.

Most tests drive ``main(argv)`` in process and read the captured
streams; one subprocess test exercises the installed module entry.
"""

import json
import subprocess
import sys

import numpy as np
import pytest

from chartsplines import NumericalError
from chartsplines import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def square_polygon(tmp_path, closed=True, m=8):
    ang = np.linspace(0.0, 2 * np.pi, m + 1)[:-1]
    verts = [[float(np.cos(a)), float(np.sin(a)), 0.0] for a in ang]
    path = tmp_path / "poly.json"
    path.write_text(json.dumps({"closed": closed, "vertices": verts}))
    return str(path)


# ------------------------------------------------------------------ check

CHECK_TABLE = [
    # construction, smoothness, breaks/element, reproducing, count, rank
    ("hat", 0, 0, True, 28, 25),
    ("smooth", 2, 0, True, 36, 27),
    ("rational", 2, 1, False, 28, 28),
    ("masked3", 2, 2, False, 28, 28),
    ("masked4", 2, 3, False, 28, 28),
    ("matched", 2, 0, True, 9, 9),
]


@pytest.mark.parametrize("name, order, breaks, repro, count, rank", CHECK_TABLE)
def test_check_reports(capsys, name, order, breaks, repro, count, rank):
    code, out, err = run(capsys, "check", "--construction", name, "--n", "5")
    assert code == 0
    assert err == ""
    report = json.loads(out)
    assert list(report) == [
        "partition_of_unity",
        "smoothness_order",
        "breaking_points_per_element",
        "bspline_reproducing",
        "bspline_residual",
        "span_rank",
    ]
    assert report["partition_of_unity"] < 1e-12
    assert report["smoothness_order"] == order
    assert report["breaking_points_per_element"] == breaks
    assert report["bspline_reproducing"] is repro
    assert report["span_rank"] == {"count": count, "rank": rank}
    if repro:
        assert report["bspline_residual"] < 1e-9
    else:
        assert report["bspline_residual"] > 1e-5


def test_check_writes_to_file(capsys, tmp_path):
    out_file = tmp_path / "report.json"
    code, out, _ = run(capsys, "check", "--construction", "hat", "--n", "3",
                       "--out", str(out_file))
    assert code == 0
    assert out == ""
    report = json.loads(out_file.read_text())
    assert report["bspline_reproducing"] is True


# ------------------------------------------------------------------ basis


def test_basis_table_shape_and_activity(capsys):
    code, out, err = run(capsys, "basis", "--construction", "hat",
                         "--n", "5", "--samples", "10")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "xi,index,value"
    n_points, count = 10 * 6 + 1, 28
    assert len(lines) == 1 + n_points * count
    # at any point strictly inside an element exactly 8 functions are live
    by_x = {}
    for line in lines[1:]:
        xi, idx, val = line.split(",")
        by_x.setdefault(xi, []).append(float(val))
    for xi, vals in by_x.items():
        x = float(xi)
        if abs(x - round(x)) > 1e-9:
            assert sum(1 for v in vals if v != 0.0) == 8
        assert sum(vals) == pytest.approx(1.0, abs=1e-12)


def test_basis_matched_function_count(capsys):
    code, out, _ = run(capsys, "basis", "--construction", "matched",
                       "--n", "4", "--samples", "3")
    assert code == 0
    lines = out.strip().split("\n")
    indices = {line.split(",")[1] for line in lines[1:]}
    assert len(indices) == 8  # n + 4 matched functions


def test_basis_deterministic(capsys):
    args = ("basis", "--construction", "rational", "--n", "3", "--samples", "7")
    _, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args)
    assert first == second


def test_basis_out_file_matches_stdout(capsys, tmp_path):
    out_file = tmp_path / "basis.csv"
    _, streamed, _ = run(capsys, "basis", "--construction", "masked3",
                         "--n", "3", "--samples", "5")
    code, out, _ = run(capsys, "basis", "--construction", "masked3",
                       "--n", "3", "--samples", "5", "--out", str(out_file))
    assert code == 0
    assert out == ""
    assert out_file.read_text() == streamed


def test_basis_rejects_bad_samples(capsys):
    code, _, err = run(capsys, "basis", "--construction", "hat",
                       "--samples", "0")
    assert code == 2
    assert err.startswith("error:")


# ------------------------------------------------------------- convergence


def test_convergence_csv_and_summary(capsys):
    code, out, err = run(capsys, "convergence", "--construction", "hat",
                         "--levels", "1,2")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "level,h,error,rate"
    first = lines[1].split(",")
    second = lines[2].split(",")
    assert first[0] == "1" and second[0] == "2"
    assert float(first[1]) == pytest.approx(0.125)
    assert float(second[1]) == pytest.approx(0.0625)
    assert first[3] == ""  # no rate on the first row
    rate = float(second[3])
    assert rate > 3.0
    assert lines[3] == f"final rate: {rate:.3f}"


def test_convergence_out_file_keeps_summary_on_stdout(capsys, tmp_path):
    out_file = tmp_path / "conv.csv"
    code, out, _ = run(capsys, "convergence", "--construction", "matched",
                       "--levels", "1,2", "--out", str(out_file))
    assert code == 0
    assert out.startswith("final rate:")
    content = out_file.read_text().strip().split("\n")
    assert content[0] == "level,h,error,rate"
    assert len(content) == 3


def test_convergence_polynomial_target_is_exact_for_cubics(capsys):
    code, out, _ = run(capsys, "convergence", "--construction", "rational",
                       "--levels", "1,2", "--target", "poly:3")
    assert code == 0
    lines = out.strip().split("\n")
    errs = [float(line.split(",")[2]) for line in lines[1:3]]
    assert max(errs) < 1e-10


def test_convergence_rejects_bad_inputs(capsys):
    code, _, err = run(capsys, "convergence", "--construction", "hat",
                       "--levels", "2,1")
    assert code == 2
    code, _, err = run(capsys, "convergence", "--construction", "hat",
                       "--target", "cos")
    assert code == 2
    assert err.startswith("error:")
    code, _, _ = run(capsys, "convergence", "--construction", "hat",
                     "--target", "poly:x")
    assert code == 2


def test_numerical_failure_exit_code(capsys, monkeypatch):
    def boom(*a, **k):
        raise NumericalError("synthetic failure")

    monkeypatch.setattr(cli.fitting, "convergence_study", boom)
    code, _, err = run(capsys, "convergence", "--construction", "hat",
                       "--levels", "1")
    assert code == 3
    assert err.startswith("numerical failure:")


# ------------------------------------------------------------------ curve


def test_curve_csv_closes(capsys, tmp_path):
    poly = square_polygon(tmp_path, m=8)
    code, out, _ = run(capsys, "curve", "--construction", "rational",
                       "--polygon", poly, "--samples", "5")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "s,eta,x,y,z"
    assert len(lines) == 1 + 8 * 5
    rows = [line.split(",") for line in lines[1:]]
    # shared join: end of element s equals start of element s+1
    end_of_3 = [r for r in rows if r[0] == "3" and float(r[1]) == 1.0][0]
    start_of_4 = [r for r in rows if r[0] == "4" and float(r[1]) == 0.0][0]
    assert end_of_3[2:] == start_of_4[2:]
    # and the curve closes around the seam
    end_last = [r for r in rows if r[0] == "7" and float(r[1]) == 1.0][0]
    start_first = [r for r in rows if r[0] == "0" and float(r[1]) == 0.0][0]
    for a, b in zip(end_last[2:], start_first[2:]):
        assert float(a) == pytest.approx(float(b), abs=1e-12)


def test_curve_rejects_bad_polygons(capsys, tmp_path):
    open_poly = square_polygon(tmp_path, closed=False)
    code, _, err = run(capsys, "curve", "--construction", "hat",
                       "--polygon", open_poly)
    assert code == 2
    assert err.startswith("error:")

    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, _ = run(capsys, "curve", "--construction", "hat",
                     "--polygon", str(bad))
    assert code == 2

    code, _, _ = run(capsys, "curve", "--construction", "hat",
                     "--polygon", str(tmp_path / "missing.json"))
    assert code == 2


def test_curve_rejects_matched(capsys, tmp_path):
    poly = square_polygon(tmp_path)
    code, _, err = run(capsys, "curve", "--construction", "matched",
                       "--polygon", poly)
    assert code == 2
    assert "curve" in err


# ------------------------------------------------------------------ misc


def test_interval_needs_one_inner_node(capsys):
    code, _, err = run(capsys, "check", "--construction", "hat", "--n", "0")
    assert code == 2
    assert err.startswith("error:")


def test_matched_requires_cubic_local(capsys):
    code, _, err = run(capsys, "check", "--construction", "matched",
                       "--qp", "2")
    assert code == 2
    assert "--qp 3" in err


def test_unknown_construction_is_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["check", "--construction", "fourier"])
    assert info.value.code == 2


def test_subcommand_required(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main([])
    assert info.value.code == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "chartsplines.cli", "check",
         "--construction", "hat", "--n", "3"],
        capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
    report = json.loads(proc.stdout)
    assert report["smoothness_order"] == 0
