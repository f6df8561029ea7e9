import csv
import math
import subprocess
import sys

import pytest

from evodyn.cli import compare_rows, conductance_report, main
from evodyn.config import ConfigError, build_config, dump_config, parse_overrides


def run_cli(*args, env=None):
    cmd = [sys.executable, "-m", "evodyn", *args]
    return subprocess.run(cmd, capture_output=True, text=True, env=env)


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_help():
    cp = run_cli("--help")
    assert cp.returncode == 0
    for cmd in ("classical", "wave", "compare", "conductance", "helmholtz"):
        assert cmd in cp.stdout


def test_bad_usage_exits_1():
    assert run_cli("nonsense").returncode == 1


def test_unknown_key_named(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("T0 = 1\nbogus_key = 3\n")
    cp = run_cli("classical", "--config", str(cfg), "--out", str(tmp_path))
    assert cp.returncode == 1
    assert "bogus_key" in cp.stderr


def test_config_parsing():
    values = parse_overrides("# comment\nT0 = 2.5  # inline\nmax_terms = 80\nsvg = yes\ng_max = auto\n")
    assert values == {"T0": 2.5, "max_terms": 80, "svg": True, "g_max": None}
    with pytest.raises(ConfigError):
        parse_overrides("T0 = hot\n")
    with pytest.raises(ConfigError):
        build_config("Te = -1\n")
    with pytest.raises(ConfigError):
        build_config(preset="fig9")


def test_config_precedence():
    cfg = build_config("Te = 7\n", preset="fig2", out="x")
    assert (cfg.T0, cfg.Te, cfg.out) == (1.0, 7.0, "x")


def test_dump_round_trip():
    cfg = build_config("T0 = 0.3\nrel_tol = 1e-11\ng_min = -7.25\n", preset="fig3-cooling", svg=True)
    assert build_config(dump_config(cfg)) == cfg


def test_classical_csv(tmp_path):
    cp = run_cli("classical", "--out", str(tmp_path))
    assert cp.returncode == 0, cp.stderr
    rows = read_rows(tmp_path / "classical.csv")
    assert rows[0] == ["t", "g", "gdot", "f", "T", "S"]
    at_one = next(r for r in rows[1:] if float(r[0]) == 1.0)
    assert float(at_one[1]) == pytest.approx(5.9506, abs=1e-4)
    # at least 12 significant digits
    assert len(at_one[1].replace(".", "").lstrip("0")) >= 12


def test_classical_equilibrium(tmp_path):
    cfg = tmp_path / "eq.cfg"
    cfg.write_text("T0 = 2\nTe = 2\n")
    assert main(["classical", "--config", str(cfg), "--out", str(tmp_path)]) == 0
    rows = read_rows(tmp_path / "classical.csv")[1:]
    assert all(float(r[5]) == 0.0 for r in rows)
    assert all(float(r[1]) == pytest.approx(math.sqrt(2) * float(r[0]), abs=1e-12) for r in rows)


def test_fig2_svg(tmp_path):
    assert main(["classical", "--preset", "fig2", "--svg", "--out", str(tmp_path)]) == 0
    svg = (tmp_path / "fig2.svg").read_text()
    assert svg.lstrip().startswith("<?xml") and "<svg" in svg


def test_wave_outputs(tmp_path):
    assert main(["wave", "--preset", "fig3-cooling", "--svg", "--out", str(tmp_path)]) == 0
    assert read_rows(tmp_path / "wave.csv")[0] == ["g", "re_psi", "im_psi", "abs2", "T_classical"]
    assert read_rows(tmp_path / "windows.csv")[0] == ["g_lo", "g_hi", "g_mid", "mean_T"]
    assert "<svg" in (tmp_path / "fig3.svg").read_text()


def test_wave_equal_temperatures(tmp_path):
    cfg = tmp_path / "eq.cfg"
    cfg.write_text("T0 = 3\nTe = 3\n")
    assert main(["wave", "--config", str(cfg), "--out", str(tmp_path)]) == 0
    abs2 = [float(r[3]) for r in read_rows(tmp_path / "wave.csv")[1:]]
    assert max(abs2) - min(abs2) < 1e-12


def test_compare(tmp_path):
    cp = run_cli("compare", "--preset", "fig4-heating", "--out", str(tmp_path), "--svg")
    assert cp.returncode == 0, cp.stderr
    assert "excluding first" in cp.stdout
    rows = read_rows(tmp_path / "compare.csv")
    assert rows[0] == ["g_mid", "T_wave", "T_classical", "rel_diff"]
    assert all(float(r[3]) <= 0.05 for r in rows[2:])
    assert (tmp_path / "fig4.svg").exists()


def test_compare_equilibrium():
    cfg = build_config("T0 = 5\nTe = 5\n")
    from evodyn.wave import solve_wave

    rows = compare_rows(solve_wave(cfg.scenario()))
    assert rows and max(r[3] for r in rows) <= 1e-6


def test_conductance(tmp_path):
    cp = run_cli("conductance", "--out", str(tmp_path))
    assert cp.returncode == 0
    assert "0.954930" in cp.stdout
    header, values = read_rows(tmp_path / "conductance.csv")
    rep = dict(zip(header, map(float, values)))
    assert rep["max_over_quantum"] == pytest.approx(3 / math.pi, abs=1e-6)
    assert rep["sigma_over_max"] == pytest.approx(1.0, rel=1e-12)


def test_conductance_scaling():
    rep = conductance_report(build_config("cond_f = 10\n"))
    assert rep["sigma_over_max"] == pytest.approx(0.05, rel=1e-12)


def test_helmholtz(tmp_path):
    cp = run_cli("helmholtz", "--out", str(tmp_path))
    assert cp.returncode == 0, cp.stderr
    assert cp.stdout.count("max rel dev") == 3


def test_helmholtz_coarse_stride_is_violation(tmp_path):
    cfg = tmp_path / "coarse.cfg"
    cfg.write_text("helmholtz_stride = 0.001\n")
    cp = run_cli("helmholtz", "--config", str(cfg), "--out", str(tmp_path))
    assert cp.returncode == 3
    assert "warning" in cp.stderr


def test_helmholtz_equilibrium(tmp_path):
    cfg = tmp_path / "eq.cfg"
    cfg.write_text("T0 = 1\nTe = 1\n")
    assert main(["helmholtz", "--config", str(cfg), "--out", str(tmp_path)]) == 0


def test_series_failure_exit_code(tmp_path):
    cfg = tmp_path / "short.cfg"
    cfg.write_text("T0 = 1\nTe = 5000\nmax_terms = 50\n")
    cp = run_cli("wave", "--config", str(cfg), "--out", str(tmp_path))
    assert cp.returncode == 2
    assert "nu=" in cp.stderr


def test_env_default_out(tmp_path):
    import os

    env = dict(os.environ, EVODYN_OUT=str(tmp_path / "envout"))
    assert run_cli("conductance", env=env).returncode == 0
    assert (tmp_path / "envout" / "conductance.csv").exists()


def test_dump_config_reproduces_run(tmp_path):
    first, second = tmp_path / "a", tmp_path / "b"
    assert main(["classical", "--preset", "fig2", "--out", str(first), "--dump-config"]) == 0
    text = (first / "run.cfg").read_text().replace(f"out = {first}", f"out = {second}")
    (tmp_path / "again.cfg").write_text(text)
    assert main(["classical", "--config", str(tmp_path / "again.cfg")]) == 0
    assert (first / "classical.csv").read_bytes() == (second / "classical.csv").read_bytes()
