import csv
import io
import json
import subprocess
import sys
import time

import pytest

from disjoint_spm import __version__, cli, graphs
from disjoint_spm import matrices as mx


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def run_json(argv, capsys):
    code, out, err = run(argv + ["--jobs", "1"], capsys)
    assert code == 0, err
    return json.loads(out)


def test_count_n2_json(capsys):
    report = run_json(["count", "--n", "2"], capsys)
    assert report["result"]["D"] == "144"
    assert report["result"]["d"] == "72"
    assert report["result"]["dual_path_ok"] is True
    assert report["result"]["orbit_D"] == "112"


def test_report_embeds_config_and_version(capsys):
    report = run_json(["count", "--n", "2"], capsys)
    assert report["tool"] == "disjoint-spm"
    assert report["version"] == __version__
    assert report["config"]["subcommand"] == "count"
    assert report["config"]["n"] == 2
    assert report["config"]["jobs"] == 1


def test_theta_n3_row(capsys):
    rows = run_json(["theta", "--n", "3"], capsys)["result"]["theta"]
    assert rows[6] == {"k": 6, "classes": 6, "theta": "8/1"}
    assert rows[9]["theta"] == "1/36"


def test_enumerate_graphs(capsys, tmp_path):
    path = tmp_path / "g36.txt"
    report = run_json(["enumerate-graphs", "--n", "3", "--k", "6", "--class-file", str(path)], capsys)
    assert report["result"]["count"] == 6
    assert sorted(g["omega"] for g in report["result"]["graphs"]) == sorted(
        ["1/1", "1/1", "1/1", "4/1", "1/2", "1/2"])
    with open(path) as fp:
        n, k, reps = graphs.read_class_file(fp)
    assert (n, k) == (3, 6)
    assert [g.to_hex() for g in reps] == [g["mask"] for g in report["result"]["graphs"]]


def test_enumerate_graphs_text_is_class_file(capsys):
    code, out, _ = run(["enumerate-graphs", "--n", "2", "--k", "2", "--format", "text"], capsys)
    assert code == 0
    assert out.startswith("# disjoint-spm ")
    n, k, reps = graphs.read_class_file(io.StringIO(out))
    assert (n, k, len(reps)) == (2, 2, 3)


def test_csv_format(capsys):
    code, out, _ = run(["theta", "--n", "2", "--format", "csv"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("# disjoint-spm ")
    rows = list(csv.reader(lines[1:]))
    assert rows[0] == ["k", "classes", "theta"]
    assert rows[1:] == [["0", "1", "4/1"], ["1", "1", "4/1"], ["2", "3", "3/1"],
                        ["3", "1", "1/1"], ["4", "1", "1/4"]]


def test_output_file(capsys, tmp_path):
    path = tmp_path / "report.json"
    code, out, _ = run(["count", "--n", "3", "-o", str(path)], capsys)
    assert code == 0 and out == ""
    assert json.loads(path.read_text())["result"]["D"] == "1260085248"


def test_sudoku_gen_is_reproducible(capsys, tmp_path):
    outs = []
    path = tmp_path / "grid.json"
    for _ in range(2):
        code, out, _ = run(["sudoku-gen", "--n", "2", "--seed", "7", "-o", str(path)], capsys)
        assert code == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
    grid = json.loads(outs[0])["result"]["grid"]
    assert mx.validate_sudoku(grid)


def test_sudoku_gen_text_and_family_file(capsys, tmp_path):
    fam = tmp_path / "fam.txt"
    code, out, _ = run(["sudoku-gen", "--n", "3", "--seed", "1", "--format", "text",
                        "--family-file", str(fam)], capsys)
    assert code == 0
    sudoku = mx.SudokuMatrix.from_text(out)
    with open(fam) as fp:
        family = mx.read_family(fp)
    assert mx.compose_sudoku(family) == sudoku


def test_cliques(capsys, tmp_path):
    path = tmp_path / "cliques.txt"
    report = run_json(["cliques", "--n", "2", "--clique-file", str(path)], capsys)
    assert report["result"]["z"] == 12
    assert report["result"]["sudoku_count"] == 288
    assert len(path.read_text().splitlines()) == 12


def test_exit_codes(capsys):
    code, _, err = run(["cliques", "--n", "3"], capsys)
    assert code == 3
    assert json.loads(err)["kind"] == "feasibility"
    code, _, err = run(["theta", "--n", "1"], capsys)
    assert code == 2
    assert json.loads(err)["exit_code"] == 2
    code, _, _ = run(["theta", "--n", "5"], capsys)
    assert code == 3
    code, _, _ = run(["enumerate-graphs", "--n", "2", "--k", "9"], capsys)
    assert code == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["theta"])
    assert exc.value.code == 2
    capsys.readouterr()


def test_verify_failure_exit_code(capsys, monkeypatch):
    def failing(n, jobs=1, allow_n5=False, allow_large=False):
        return [{"check": "x", "expected": "1", "observed": "2", "passed": False}]

    monkeypatch.setattr(cli, "verify_checks", failing)
    code, out, err = run(["verify", "--n", "2"], capsys)
    assert code == 4
    assert json.loads(out)["result"]["all_passed"] is False
    assert json.loads(err)["kind"] == "verification"


def test_jobs_from_environment(capsys, monkeypatch):
    monkeypatch.setenv(cli.JOBS_ENV, "3")
    code, out, _ = run(["count", "--n", "2"], capsys)
    assert code == 0
    assert json.loads(out)["config"]["jobs"] == 3


def test_verify_n2_passes_quickly(capsys):
    start = time.perf_counter()
    code, out, _ = run(["verify", "--n", "2", "--format", "text"], capsys)
    assert time.perf_counter() - start < 10
    assert "FAIL" not in out, out
    assert code == 0


def test_verify_n2_orbit_checks_pass():
    checks = {c["check"]: c for c in cli.verify_checks(2)}
    for name in ("dual_path_D", "oracle_D_vs_orbit_formula", "oracle_q_vs_orbit_formula",
                 "binomial_identity_orbit_weight", "z2_clique_count", "composed_sudoku_count",
                 "histogram_total", "bijection_roundtrip"):
        assert checks[name]["passed"], checks[name]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "disjoint_spm", "count", "--n", "2", "-j", "1"],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["result"]["D"] == "144"
