"""End-to-end runs of the experiment driver."""

import json
import math
import os

import numpy as np
import pytest

from ifsframes.cli import main


def run(args):
    return main(args)


def read_csv(path):
    with open(path) as handle:
        lines = [l.strip() for l in handle if l.strip() and not l.startswith("#")]
    header = lines[0].split(",")
    rows = [[float(x) for x in line.split(",")] for line in lines[1:]]
    return header, rows


def load(path):
    with open(path) as handle:
        return json.load(handle)


def test_catalog_lists_builtins(tmp_path, capsys):
    assert run(["catalog", "--out", str(tmp_path)]) == 0
    out = load(tmp_path / "catalog.json")
    assert len(out["systems"]) == 4
    names = {s["name"] for s in out["systems"]}
    assert names == {"cantor3", "cantor4", "cantor4c", "lebesgue"}


def test_ft_zero_rows(tmp_path):
    assert run([
        "ft", "--ifs", "cantor4c", "--tgrid=-100:100:201", "--out", str(tmp_path),
    ]) == 0
    header, rows = read_csv(tmp_path / "ft.csv")
    assert header == ["t", "re", "im", "abs"]
    by_t = {int(r[0]): r[3] for r in rows}
    zero_set = []
    m = 1
    while m <= 100:
        k = 0
        while m * (4 * k + 2) <= 100:
            zero_set += [m * (4 * k + 2), -m * (4 * k + 2)]
            k += 1
        m *= 4
    for z in zero_set:
        assert by_t[z] < 1e-8
    assert by_t[0] == 1.0
    assert os.path.exists(tmp_path / "ft.png")


def test_frame_bounds_sweep(tmp_path):
    assert run([
        "frame-bounds", "--ifs", "cantor4", "--measure", "dual:cantor4c",
        "--levels", "1:3", "--lambdas", "256,1024,4096", "--out", str(tmp_path),
    ]) == 0
    header, rows = read_csv(tmp_path / "frame_bounds.csv")
    assert header[:4] == ["level", "lambda", "A", "B"]
    assert len(rows) == 9
    for row in rows:
        assert row[3] <= 1.0 + 1e-8
    report = load(tmp_path / "frame_bounds.json")
    assert report["config"]["command"] == "frame-bounds"
    assert len(report["reports"]) == 9
    n3 = sorted(r for r in rows if r[0] == 3)
    lows = [r[2] for r in n3]
    assert lows == sorted(lows)


def test_dual_search_and_measure(tmp_path):
    assert run(["dual", "--ifs", "cantor4", "--lambda", "64", "--out", str(tmp_path)]) == 0
    out = load(tmp_path / "dual.json")
    assert [0, 1] in out["complements"]
    atoms = {int(a[0]): a[1] for a in out["measure"]["atoms"]}
    assert 2 not in atoms
    assert atoms[0] == 1.0
    assert os.path.exists(tmp_path / "dual_measure.json")


def test_beurling_scan_and_dimension(tmp_path):
    assert run([
        "beurling", "--measure", "dual:cantor4c", "--lambda", "4096",
        "--radii", "4:4096:21-geometric", "--out", str(tmp_path),
    ]) == 0
    header, rows = read_csv(tmp_path / "beurling_scan.csv")
    assert header == ["R", "sup_mass", "ratio"]
    sups = [r[1] for r in rows]
    assert all(b >= a - 1e-12 for a, b in zip(sups, sups[1:]))
    dim = load(tmp_path / "beurling.json")["dimension"]
    assert 0.4 <= dim["slope"] <= 0.6


def test_discretize_and_convolve_round_trip(tmp_path):
    measure_path = tmp_path / "m.json"
    measure_path.write_text(json.dumps({
        "type": "atomic", "atoms": [[0.0, 1.0], [0.5, 2.0], [2.0, 1.0]],
    }))
    assert run([
        "discretize", "--measure", str(measure_path), "--r", "1.0",
        "--rule", "left", "--out", str(tmp_path),
    ]) == 0
    disc = load(tmp_path / "discretized.json")["measure"]
    assert disc["atoms"] == [[0.0, 3.0], [2.0, 1.0]]
    assert run([
        "convolve", "--measure", str(measure_path), "--measure2", str(measure_path),
        "--out", str(tmp_path),
    ]) == 0
    conv = load(tmp_path / "convolved.json")["measure"]
    total = sum(w for _, w in conv["atoms"])
    assert total == pytest.approx(16.0)


def test_reconstruct_cli(tmp_path):
    assert run([
        "reconstruct", "--ifs", "cantor4", "--t", "0.5,0.125",
        "--cutoff", "50", "--out", str(tmp_path),
    ]) == 0
    out = load(tmp_path / "reconstruct.json")
    assert out["split"]["complement"]["B"] == [0, 1]
    for res in out["results"]:
        assert abs(complex(res["value_re"], res["value_im"]) - 1.0) <= 0.05


def test_counterexample_sweep(tmp_path):
    assert run([
        "counterexample", "--T-grid", "100:10000:3-geometric", "--out", str(tmp_path),
    ]) == 0
    header, rows = read_csv(tmp_path / "counterexample.csv")
    probes = [r[1] for r in rows]
    assert probes == sorted(probes, reverse=True)
    assert load(tmp_path / "counterexample.json")["decreasing"] is True


def test_error_exit_code_and_json(tmp_path, capsys):
    code = run(["ft", "--ifs", '{"R":1,"B":[0]}', "--out", str(tmp_path)])
    assert code == 2
    err = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert err["error"]["type"] == "DomainError"


def test_determinism_excluding_meta(tmp_path):
    for sub in ("a", "b"):
        assert run([
            "dual", "--ifs", "cantor4", "--lambda", "128",
            "--out", str(tmp_path / sub), "--no-plot",
        ]) == 0
    first = load(tmp_path / "a" / "dual.json")
    second = load(tmp_path / "b" / "dual.json")
    first.pop("meta")
    second.pop("meta")
    assert json.dumps(first, sort_keys=True) == json.dumps(second, sort_keys=True)
    bytes_a = (tmp_path / "a" / "dual_measure.json").read_bytes()
    bytes_b = (tmp_path / "b" / "dual_measure.json").read_bytes()
    assert bytes_a == bytes_b


def test_no_plot_skips_figures(tmp_path):
    assert run([
        "ft", "--ifs", "lebesgue", "--tgrid=-10:10:21", "--out", str(tmp_path), "--no-plot",
    ]) == 0
    assert not os.path.exists(tmp_path / "ft.png")
    assert os.path.exists(tmp_path / "ft.csv")


def test_csv_numbers_round_trip(tmp_path):
    assert run([
        "ft", "--ifs", "cantor4c", "--tgrid", "1:9:5", "--out", str(tmp_path), "--no-plot",
    ]) == 0
    import ifsframes as F
    sys = F.get_system("cantor4c")
    header, rows = read_csv(tmp_path / "ft.csv")
    grid = np.array([row[0] for row in rows])
    # 17-significant-digit formatting must reproduce the computed doubles
    vectorized = F.ft_invariant(sys, grid)
    for row, val in zip(rows, vectorized):
        assert row[1] == val.real
        assert row[2] == val.imag
        # and the sweep agrees with scalar evaluation within the budget
        scalar = F.ft_invariant(sys, row[0])
        assert abs(complex(row[1], row[2]) - scalar) <= 2e-12
