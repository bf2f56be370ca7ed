import csv
import io
import json
import subprocess
import sys

import pytest

from szego_lab import __version__
from szego_lab.cli import dispatch


def run(argv, capsys):
    code = dispatch(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_kernel_report(capsys):
    code, out, _ = run(["kernel", "--domain", "annulus:r=0.5", "--z", "0.7"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["tool"] == "szego-lab" and rep["version"] == __version__
    assert rep["config"]["domain"] == {"kind": "annulus", "r": 0.5, "label": "annulus"}
    assert set(rep["result"]) == {"value", "terms_used", "truncation_bound"}
    assert rep["result"]["value"] == pytest.approx(0.51578735354887, rel=1e-12)


def test_metric_grid_csv(capsys):
    code, out, _ = run(["metric", "--domain", "annulus:r=0.5", "--grid", "20"], capsys)
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["re_z1", "im_z1", "lambda2", "eig1"]
    assert len(rows) == 21


def test_metric_json_for_model(capsys):
    code, out, _ = run(["metric", "--domain", "ball-model:n=2", "--z", "0.9,0"], capsys)
    rep = json.loads(out)
    assert code == 0
    assert rep["result"]["levi"]["calQ"] == pytest.approx(0.81)
    assert rep["result"]["eigenvalues"] == pytest.approx([2 / 0.19, 2 / 0.19**2])


def test_repulsion_scan_from_config(tmp_path, capsys):
    cfg = tmp_path / "scan.yaml"
    cfg.write_text("domain: {kind: ball-model, n: 2}\n"
                   "repulsion-scan:\n  levels: [-0.19]\n  directions: 8\n  points: 2\n")
    code, out, _ = run(["repulsion-scan", "--config", str(cfg)], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["config"]["levels"] == [-0.19]
    assert rep["result"]["levels"][0]["min"] >= 2 - 1e-12
    assert rep["result"]["min_second_derivative"] >= 2 - 1e-12


def test_cli_flags_override_config(tmp_path, capsys):
    cfg = tmp_path / "c.yaml"
    cfg.write_text("seed: 5\nkernel:\n  z: '0.8'\n")
    code, out, _ = run(["kernel", "--config", str(cfg), "--z", "0.6"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["config"]["seed"] == 5
    assert rep["config"]["z"] == [{"re": 0.6, "im": 0.0}]


def test_unknown_config_key(tmp_path, capsys):
    cfg = tmp_path / "c.yaml"
    cfg.write_text("kernel:\n  zz: 1\n")
    assert run(["kernel", "--config", str(cfg)], capsys)[0] == 2


def test_exit_codes(capsys):
    assert run(["bogus"], capsys)[0] == 64
    assert run(["kernel", "--nope"], capsys)[0] == 64
    assert run([], capsys)[0] == 64
    assert run(["kernel", "--z", "0.3"], capsys)[0] == 2
    assert run(["rate-fit", "--delta-min", "0.01", "--delta-max", "0.02"], capsys)[0] == 2
    assert run(["geodesic", "--tol", "0"], capsys)[0] == 2


def test_numerical_failure_exit_code(capsys, monkeypatch):
    from szego_lab import cli
    from szego_lab.errors import NumericalError

    def boom(cfg):
        raise NumericalError("no convergence")

    monkeypatch.setitem(cli.COMMANDS, "kernel", boom)
    code, _, err = run(["kernel"], capsys)
    assert code == 3 and "no convergence" in err


def test_selftest_command(capsys):
    code, out, _ = run(["selftest"], capsys)
    assert code == 0 and json.loads(out)["result"]["passed"]


def test_geodesic_outputs_and_determinism(tmp_path, capsys):
    args = ["geodesic", "--domain", "annulus:r=0.5", "--z", "0.7", "--v", "1j", "--unit-speed",
            "--T", "2", "--samples", "8"]
    outs = []
    for k in range(2):
        d = tmp_path / str(k)
        code, _, _ = run(args + ["--out", str(d / "r.json"), "--csv", str(d / "t.csv"),
                                 "--svg", str(d / "p.svg")], capsys)
        assert code == 0
        outs.append([(d / f).read_bytes() for f in ("r.json", "t.csv", "p.svg")])
    assert outs[0] == outs[1]
    rows = list(csv.reader(io.StringIO(outs[0][1].decode())))
    assert rows[0] == ["t", "re_z1", "im_z1", "speed"] and len(rows) == 10


def test_loop_shorten_threads_do_not_change_report(tmp_path, capsys):
    base = ["loop-shorten", "--count", "2", "--max-refinements", "0"]
    run(base + ["--threads", "1", "--out", str(tmp_path / "a.json")], capsys)
    run(base + ["--threads", "2", "--out", str(tmp_path / "b.json"), "--svg", str(tmp_path / "l.svg")], capsys)
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()
    rep = json.loads((tmp_path / "a.json").read_text())
    assert rep["result"]["all_converged"]
    assert "<polygon" in (tmp_path / "l.svg").read_text()


def test_rate_fit_and_classify(tmp_path, capsys):
    code, out, _ = run(["rate-fit", "--domain", "ball-model:n=2", "--quantity", "deficit",
                        "--direction", "1,0", "--csv", str(tmp_path / "s.csv")], capsys)
    assert code == 0 and json.loads(out)["result"]["fit"]["log_factor"] is False
    code, out, _ = run(["rate-fit", "--samples", str(tmp_path / "s.csv")], capsys)
    assert json.loads(out)["result"]["fit"]["exponent"] == pytest.approx(1, abs=1e-6)
    code, out, _ = run(["classify", "--domain", "annulus:r=0.5", "--s", "0.8", "--angle", "0",
                        "--horizon", "30"], capsys)
    assert code == 0 and json.loads(out)["result"]["verdict"] == "boundary-seeking"


def test_console_script_entry_point():
    res = subprocess.run([sys.executable, "-m", "szego_lab.cli", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and __version__ in res.stdout
