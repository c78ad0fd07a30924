import csv
import io
import math
from pathlib import Path

import numpy as np
import pytest

from giantent import cli

CONFIGS = Path(__file__).resolve().parents[1] / "configs"

SHORT = """
[layout]
topology = "{topology}"
theta0 = "{theta0}"
tau0 = {tau0}

[phases]
preset = "{preset}"

[initial]
state = "{state}"

[integrator]
t_end = {t_end}
dt = 0.01
"""


def write_cfg(tmp_path, name="c.toml", extra="", **kw):
    params = dict(topology="separate", theta0="pi/2", tau0=0.8, preset="sb-case-I", state="plus", t_end=6.0)
    params.update(kw)
    path = tmp_path / name
    path.write_text(SHORT.format(**params) + extra)
    return path


def read_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], np.array([[float(x) for x in r] for r in rows[1:]])


def test_simulate_nested_steady(capsys):
    assert cli.main(["simulate", str(CONFIGS / "nested_case_I.toml")]) == 0
    out, err = capsys.readouterr()
    header, data = read_csv(out)
    assert header == ["t", "re_ca", "im_ca", "re_cb", "im_cb", "pop_a", "pop_b", "concurrence"]
    assert len(data) == 50001
    assert data[-1, -1] == pytest.approx(0.30864197530864196, abs=1e-3)
    assert "converged=true" in err


def test_simulate_isolated_atoms(capsys):
    assert cli.main(["simulate", str(CONFIGS / "isolated_atoms.toml")]) == 0
    _, data = read_csv(capsys.readouterr().out)
    np.testing.assert_allclose(data[:, -1], np.exp(-2 * data[:, 0]), atol=1e-8)


def test_simulate_product_state(tmp_path, capsys):
    assert cli.main(["simulate", str(write_cfg(tmp_path, state="eg"))]) == 0
    _, data = read_csv(capsys.readouterr().out)
    assert data[0, -1] == 0
    assert data[0, 5] == 1


def test_simulate_deterministic(tmp_path):
    cfg = write_cfg(tmp_path)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert cli.main(["simulate", str(cfg), "-o", str(a)]) == 0
    assert cli.main(["simulate", str(cfg), "-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_gamma_rescales_time_only(tmp_path, capsys):
    cfg = write_cfg(tmp_path)
    cli.main(["simulate", str(cfg)])
    _, base = read_csv(capsys.readouterr().out)
    cli.main(["simulate", str(cfg), "--gamma", "2"])
    _, scaled = read_csv(capsys.readouterr().out)
    np.testing.assert_allclose(scaled[:, 0], base[:, 0] / 2, rtol=1e-8)
    np.testing.assert_array_equal(scaled[:, 1:], base[:, 1:])


def test_number_format():
    assert cli.fmt(-0.0) == "0"
    assert cli.fmt(1 / 3) == "0.333333333"
    assert cli.fmt(1e-20) == "1e-20"


def test_simulate_rejects_sweep_config(capsys):
    assert cli.main(["simulate", str(CONFIGS / "steady_vs_tau.toml")]) == 1
    assert "sweep" in capsys.readouterr().err


def test_unknown_axis_exits_1(tmp_path, capsys):
    cfg = write_cfg(tmp_path, extra='\n[sweep]\naxes = [{ name = "kappa", start = 0, stop = 1, count = 3 }]\n')
    assert cli.main(["sweep", str(cfg)]) == 1
    assert "kappa" in capsys.readouterr().err


def test_toml_syntax_error_reports_line(tmp_path, capsys):
    path = tmp_path / "bad.toml"
    path.write_text('[layout]\ntopology = "nested"\ntheta0 = = 1\n')
    assert cli.main(["simulate", str(path)]) == 1
    assert "line 3" in capsys.readouterr().err


def test_missing_file_exits_1(tmp_path, capsys):
    assert cli.main(["simulate", str(tmp_path / "nope.toml")]) == 1


def test_sweep_long_format(tmp_path, capsys):
    extra = ('\n[sweep]\noutput = "time"\naxes = [{ name = "theta0", start = 0, stop = "pi", count = 3 }]\n'
             'times = { start = 0.0, stop = 6.0, count = 4 }\n')
    cfg = write_cfg(tmp_path, extra=extra)
    assert cli.main(["sweep", str(cfg), "-j", "1"]) == 0
    header, data = read_csv(capsys.readouterr().out)
    assert header == ["theta0", "t", "value"]
    assert data.shape == (12, 3)
    np.testing.assert_allclose(data[:4, 1], [0, 2, 4, 6])
    assert np.all(data[::4, 2] == 1)


def test_sweep_parallel_matches_serial(tmp_path):
    extra = '\n[sweep]\noutput = "steady"\naxes = [{ name = "tau0", start = 0, stop = 0.5, count = 3 }]\n'
    cfg = write_cfg(tmp_path, extra=extra, t_end=8.0)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert cli.main(["sweep", str(cfg), "-j", "1", "-o", str(a)]) == 0
    assert cli.main(["sweep", str(cfg), "-j", "2", "-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_paths_csv(tmp_path, capsys):
    cfg = write_cfg(tmp_path, topology="nested", preset="nested-case-I")
    assert cli.main(["paths", str(cfg), "--csv", "-"]) == 0
    out, err = capsys.readouterr()
    assert "topology: nested" in err
    header, *rows = list(csv.reader(io.StringIO(out)))
    assert header == ["source", "target", "delay", "re_coeff", "im_coeff", "status"]
    active = [r for r in rows if r[5] == "active"]
    assert {(r[0], r[1]) for r in active} == {("a", "b"), ("b", "a")}
    assert all(float(r[2]) == pytest.approx(0.8) for r in active)


def test_paths_table_to_stdout(tmp_path, capsys):
    cfg = write_cfg(tmp_path, topology="nested", preset="nested-case-I")
    assert cli.main(["paths", str(cfg)]) == 0
    out = capsys.readouterr().out
    assert "active" in out and "suppressed" in out


def test_verify_single_check(capsys):
    assert cli.main(["verify", "--only", "small_atom:theta0=pi"]) == 0
    rows = list(csv.reader(io.StringIO(capsys.readouterr().out)))
    assert len(rows) == 2
    assert rows[1][0] == "small_atom:theta0=pi" and rows[1][-1] == "pass"


def test_verify_zero_tolerance_fails(capsys):
    assert cli.main(["verify", "--only", "reduction", "--tol", "0"]) == 2
    out, err = capsys.readouterr()
    rows = list(csv.reader(io.StringIO(out)))[1:]
    assert rows and all(r[-1] == "fail" for r in rows)
    assert "checks passed" in err


def test_verify_unknown_check(capsys):
    assert cli.main(["verify", "--only", "no-such-check"]) == 1


def test_preset_env_out(tmp_path, monkeypatch):
    # swap the shipped preset for a small grid so the run stays quick
    small = tmp_path / "presets" / "fig3a.toml"
    small.parent.mkdir()
    small.write_text(SHORT.format(topology="nested", theta0="0", tau0=0.0, preset="nested-case-I",
                                  state="plus", t_end=1.0)
                     + '\n[sweep]\naxes = [{ name = "theta0", start = 0, stop = "2pi", count = 3 }]\n'
                       'times = { start = 0.0, stop = 1.0, count = 3 }\n')
    monkeypatch.setattr(cli, "preset_files", lambda name: [small])
    out = tmp_path / "out"
    monkeypatch.setenv(cli.OUT_ENV, str(out))
    assert cli.main(["preset", "fig3a", "-j", "1"]) == 0
    header, data = read_csv((out / "fig3a.csv").read_text())
    assert header == ["theta0", "t", "value"]
    assert data.shape == (9, 3)
    assert (out / "fig3a.gp").exists()


def test_preset_files_cover_every_name():
    for name in cli.PRESETS:
        for path in cli.preset_files(name):
            assert path.exists(), path
