import csv
import json
import os
import stat
import subprocess
import sys
from pathlib import Path

import pytest

from fracckn import cli
from fracckn.errors import ParseError, ValidationError

BASE = ["--n", "3", "--gamma", "0.5"]


def run(args, tmp_path, extra_env=None):
    env = dict(os.environ)
    env.update(extra_env or {})
    return subprocess.run([sys.executable, "-m", "fracckn", *args], cwd=tmp_path, env=env,
                          capture_output=True, text=True, timeout=600)


def point(alpha, beta):
    return BASE + [f"--alpha={alpha}", f"--beta={beta}"]


# -- configuration ------------------------------------------------------------------------

def test_defaults():
    cfg = cli.parse_config({"n": 3, "gamma": 0.5, "alpha": 0.0, "beta": 0.0})
    assert (cfg.T, cfg.N) == (20.0, 2048)
    assert cfg.tolerances == {"newton": 1e-10, "quadrature": 1e-9, "eig": 1e-9}
    assert cfg.blocks["spectrum"] == {"modes": [0, 1], "k": 4}
    assert cfg.blocks["hardy"]["radii"] == [5.0, 10.0, 20.0, 40.0]
    assert cfg.grid.points == 2048


def test_yaml_text_and_ranges():
    text = """
n: 3
gamma: 0.5
alpha: -0.5
beta: -0.3
grid: {T: 30, N: 1024}
sweep:
  alpha: {start: -0.6, stop: -0.4, num: 3}
  beta_offsets: [0.1, 0.2]
"""
    cfg = cli.parse_config(text, "sweep")
    assert cfg.blocks["sweep"]["alpha"] == pytest.approx([-0.6, -0.5, -0.4])
    assert cli.sweep_betas(cfg, -0.6) == pytest.approx([-0.5, -0.4])


def test_parse_error_reports_line_and_column():
    with pytest.raises(ParseError) as ei:
        cli.parse_config("n: 3\ngamma: [0.5\nalpha: 0\n")
    assert ei.value.line is not None and ei.value.line >= 2
    assert ei.value.column is not None
    assert ei.value.report()["error"] == "ParseError"


def test_non_mapping_config():
    with pytest.raises(ParseError):
        cli.parse_config("- 1\n- 2\n")


@pytest.mark.parametrize("data,msg", [
    ({"n": 3, "gamma": 0.5, "alpha": 0, "beta": 0, "colour": 1}, "unknown key"),
    ({"grid": {"T": 20, "M": 5}}, "unknown key"),
    ({"grid": {"N": 1000}}, "power of two"),
    ({"tolerances": {"newton": -1}}, "must be > 0"),
    ({"n": 3, "gamma": 0.5}, "incomplete"),
    ({"n": 3, "gamma": 0.5, "alpha": "x", "beta": 0}, "must be a number"),
    ({"spectrum": {"k": 20}}, "1..10"),
    ({"sweep": {"beta_values": [0.1], "beta_offsets": [0.1]}}, "only one"),
    ({"sweep": {"alpha": {"start": 0, "stop": 1}}}, "start, stop and num"),
])
def test_validation_errors(data, msg):
    with pytest.raises(ValidationError) as ei:
        cli.parse_config(data)
    assert msg in str(ei.value)


def test_endpoint_steered_to_hardy_check():
    data = {"n": 3, "gamma": 0.5, "alpha": 0.1, "beta": 0.6}
    for command in ("solve", "spectrum"):
        with pytest.raises(ValidationError, match="hardy-check"):
            cli.parse_config(data, command)
    cli.parse_config(data, "hardy-check")
    with pytest.raises(ValidationError):
        cli.parse_config({**data, "beta": 0.3}, "hardy-check")


def test_output_dir_from_environment(monkeypatch, tmp_path):
    monkeypatch.setenv("CKN_OUTPUT_DIR", str(tmp_path))
    assert cli.parse_config({}).output_dir == tmp_path
    assert cli.parse_config({"output_dir": "elsewhere"}).output_dir == Path("elsewhere")


# -- emission --------------------------------------------------------------------------------

def test_json_emission_nan_and_floats(tmp_path):
    path = cli.emit_json({"a": float("nan"), "b": 0.1, "c": (1, 2)}, tmp_path / "x.json")
    text = path.read_text()
    assert json.loads(text) == {"a": None, "b": 0.1, "c": [1, 2]}
    assert "\r" not in text and text.endswith("\n")


def test_atomic_write_mode_and_no_temp_left(tmp_path):
    path = cli.emit_csv(["x"], [[1.5]], tmp_path / "y.csv")
    assert path.read_text() == "x\n1.5\n"
    umask = os.umask(0)
    os.umask(umask)
    assert stat.S_IMODE(path.stat().st_mode) == 0o666 & ~umask
    assert sorted(p.name for p in tmp_path.iterdir()) == ["y.csv"]


# -- commands ------------------------------------------------------------------------------------

def test_constants_command(tmp_path):
    r = run(["constants", *point(-0.9, -0.89), "--output-dir", str(tmp_path)], tmp_path)
    assert r.returncode == 0, r.stderr
    d = json.loads((tmp_path / "constants.json").read_text())
    assert d["C_alpha"] == pytest.approx(11.996127877882566, rel=1e-9)
    assert d["sigma0"] == pytest.approx(d["nu"], rel=1e-10)


def test_symbol_and_roots_commands(tmp_path):
    assert cli.main(["symbol", *point(0, 0), "--modes", "0,2", "--points", "5",
                     "--output-dir", str(tmp_path)]) == 0
    rows = list(csv.reader((tmp_path / "symbol.csv").open()))
    assert rows[0] == ["xi", "theta_m0", "theta_m2"] and len(rows) == 6
    assert cli.main(["roots", *point(0, 0), "--count", "2", "--output-dir", str(tmp_path)]) == 0
    rows = list(csv.reader((tmp_path / "roots.csv").open()))
    assert rows[0] == ["j", "tau", "sigma", "residual"]
    assert [r[0] for r in rows[1:]] == ["0", "1"]
    assert float(rows[1][2]) == pytest.approx(1.0, rel=1e-10)


def test_solve_command_bubble_check(tmp_path):
    assert cli.main(["solve", *point(0, 0), "--output-dir", str(tmp_path)]) == 0
    d = json.loads((tmp_path / "solve.json").read_text())
    assert d["bubble_check"]["passed"]
    assert d["energy"] == pytest.approx(53.34654793618508, rel=1e-10)
    assert len((tmp_path / "solve.csv").read_text().splitlines()) == 2049


def test_spectrum_command(tmp_path):
    assert cli.main(["spectrum", *point(0.3, 0.4), "--T", "36", "--output-dir",
                     str(tmp_path)]) == 0
    d = json.loads((tmp_path / "spectrum.json").read_text())
    assert d["verdict"] == "RadialStable"
    assert d["morse_index_modes_0_1"] == 1
    assert d["variational_check_passed"]
    assert list(d["reports"][0])[:6] == ["mode", "eigenvalues",
                                         "ground_eigenfunction_sign_definite", "parity_tags",
                                         "kernel_residual", "morse_index"]


def test_sweep_deterministic_across_jobs(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    args = ["sweep", *point(-0.5, -0.5), "--alphas=-0.6,-0.5", "--beta-offsets", "0.2,0.3",
            "--T", "30", "--N", "1024"]
    assert cli.main(args + ["--output-dir", str(a)]) == 0
    assert cli.main(args + ["--jobs", "2", "--output-dir", str(b)]) == 0
    ta, tb = (a / "sweep.csv").read_bytes(), (b / "sweep.csv").read_bytes()
    assert ta == tb
    rows = list(csv.DictReader(ta.decode().splitlines()))
    assert len(rows) == 4 and all(r["converged"] == "true" for r in rows)


def test_empty_sweep_writes_header(tmp_path):
    assert cli.main(["sweep", *point(0, 0), "--output-dir", str(tmp_path)]) == 0
    assert (tmp_path / "sweep.csv").read_text() == ",".join(cli.SWEEP_HEADER) + "\n"


def test_continuation_command(tmp_path):
    assert cli.main(["continuation", "--steps", "4", "--T", "30", "--N", "1024",
                     "--output-dir", str(tmp_path)]) == 0
    d = json.loads((tmp_path / "continuation.json").read_text())
    assert d["points"] == 5
    assert d["soliton_sup_relative_error"] < 1e-3


def test_hardy_command(tmp_path):
    assert cli.main(["hardy-check", *point(0, 0.5), "--T", "64", "--N", "4096",
                     "--output-dir", str(tmp_path)]) == 0
    d = json.loads((tmp_path / "hardy.json").read_text())
    assert d["monotone_decreasing"] and d["above_limit"]
    assert d["extrapolated"] == pytest.approx(d["two_kappa"], rel=1e-2)


# -- exit codes ----------------------------------------------------------------------------------

def test_exit_code_config_error(tmp_path):
    bad = tmp_path / "bad.yaml"
    bad.write_text("n: 3\ngamma: [0.5\n")
    r = run(["constants", "--config", str(bad)], tmp_path)
    assert r.returncode == 2
    rep = json.loads(r.stderr.strip().splitlines()[-1])
    assert rep["error"] == "ParseError" and rep["line"] >= 2


def test_exit_code_inadmissible(tmp_path):
    r = run(["solve", *point(0.2, 0.1)], tmp_path)
    assert r.returncode == 2
    assert json.loads(r.stderr)["error"] == "ValidationError"


def test_exit_code_computation_error(tmp_path):
    r = run(["solve", *point(0.3, 0.4), "--output-dir", str(tmp_path)], tmp_path)
    assert r.returncode == 1
    assert json.loads(r.stderr)["error"] == "BoundaryLeak"
    assert not (tmp_path / "solve.json").exists()


def test_output_dir_env_in_subprocess(tmp_path):
    r = run(["constants", *point(0, 0)], tmp_path, {"CKN_OUTPUT_DIR": str(tmp_path / "out")})
    assert r.returncode == 0, r.stderr
    assert (tmp_path / "out" / "constants.json").exists()


def test_config_file_with_cli_override(tmp_path):
    cfgf = tmp_path / "run.yaml"
    cfgf.write_text("n: 3\ngamma: 0.5\nalpha: 0.0\nbeta: 0.0\nroots: {count: 1}\n")
    assert cli.main(["roots", "--config", str(cfgf), "--count", "3",
                     "--output-dir", str(tmp_path)]) == 0
    assert len((tmp_path / "roots.csv").read_text().splitlines()) == 4
