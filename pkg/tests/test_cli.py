import json
import subprocess
import sys

import numpy as np
import pytest

from szilard.cli import RunConfig, fmt, main, parse_config
from szilard.errors import BadFlag, BadValue, UnknownKey
from szilard.information import ideality
from szilard.thermo import EngineParams, emp_stage1, threshold_time


def run(argv, tmp_path, name="out.csv"):
    out = tmp_path / name
    code = main(list(argv) + ["--out", str(out)])
    return code, out


def read_csv(path):
    text = path.read_bytes().decode()
    lines = text.split("\n")
    assert lines[-1] == ""
    return lines[0].split(","), [l.split(",") for l in lines[1:-1]]


def summary_values(line):
    return dict(tok.split("=", 1) for tok in line.split() if "=" in tok)


# parse_config

def test_flags_and_defaults():
    cfg = parse_config(["--alpha", "0.4", "--eta-c", "0.6"])
    assert cfg.alpha == 0.4 and cfg.eta_c == 0.6
    assert cfg.format == "csv" and cfg.samples == RunConfig().samples


def test_flag_overrides_file(tmp_path):
    f = tmp_path / "run.conf"
    f.write_text("# comment\nalpha = 0.2\neta-c = 0.5  # trailing\n\n")
    cfg = parse_config(["--alpha", "0.4"], file=str(f))
    assert cfg.alpha == 0.4 and cfg.eta_c == 0.5
    cfg = parse_config(["--config", str(f)])
    assert cfg.alpha == 0.2


def test_unknown_key(tmp_path):
    f = tmp_path / "run.conf"
    f.write_text("alpha = 0.2\nbogus = 1\n")
    with pytest.raises(UnknownKey, match="bogus"):
        parse_config([], file=str(f))


def test_bad_value_names_flag():
    with pytest.raises(BadValue, match="eta-c"):
        parse_config(["--eta-c", "1.5"])
    with pytest.raises(BadValue, match="alpha"):
        parse_config(["--alpha", "abc"])
    with pytest.raises(BadValue, match="points"):
        parse_config(["--points", "1"])
    with pytest.raises(BadValue, match="t-min"):
        parse_config(["--t-min", "5", "--t-max", "1"])
    with pytest.raises(BadValue, match="alpha-grid"):
        parse_config(["--alpha-grid", "1:0.5:3"])


def test_bad_flag_names_token():
    with pytest.raises(BadFlag, match="--nope"):
        parse_config(["--nope", "1"])
    with pytest.raises(BadFlag):
        parse_config(["--alp", "0.3"])  # no prefix matching


def test_exit_codes(tmp_path, capsys):
    assert main(["ideality", "--eta-c", "2"]) == 2
    assert "eta-c" in capsys.readouterr().err
    assert main(["frobnicate"]) == 2
    # alpha = 0 never records information: threshold search fails numerically
    code, _ = run(["emp", "--alpha", "0"], tmp_path)
    assert code == 3
    assert "NoThreshold" in capsys.readouterr().err


# output format

def test_ideality_csv_and_summary(tmp_path, capsys):
    code, out = run(["ideality", "--alpha", "0.4", "--t-min", "0.1", "--t-max", "100", "--points", "400"], tmp_path)
    assert code == 0
    header, rows = read_csv(out)
    assert header == ["t_tilde", "p", "ideality", "mutual_info_nats"]
    assert len(rows) == 400
    t = np.array([float(r[0]) for r in rows])
    assert t[0] == 0.1 and t[-1] == 100.0
    assert np.allclose(np.diff(np.log(t)), np.log(1000) / 399)
    for r in rows[::50]:
        assert float(r[2]) == pytest.approx(ideality(float(r[0]), 0.4), rel=1e-10)
    s = summary_values(capsys.readouterr().out)
    assert s["ideality"] == rows[-1][2]


def test_twelve_significant_digits():
    assert fmt(1.0 / 3.0) == "0.333333333333"
    assert fmt(2.0) == "2"
    assert fmt(True) == "1"


def test_emp_summary_matches_file(tmp_path, capsys):
    code, out = run(["emp", "--alpha", "0.4", "--eta-c", "0.6"], tmp_path)
    assert code == 0
    header, rows = read_csv(out)
    assert header == ["eta_c", "t_star", "p_max", "eta_mp", "eta_plus"]
    s = summary_values(capsys.readouterr().out)
    assert [s["eta_c"], s["t_star"], s["p_max"], s["eta_mp"]] == rows[0][:4]
    r = emp_stage1(EngineParams(eta_c=0.6, alpha=0.4))
    assert rows[0][1] == fmt(r.arg_times.t_tilde)


def test_threshold_grid(tmp_path):
    code, out = run(["threshold", "--alpha-grid", "0.2:1:5", "--eta-c-grid", "0.1:1:4"], tmp_path)
    assert code == 0
    header, rows = read_csv(out)
    assert header == ["alpha", "eta_c", "t0"]
    assert len(rows) == 20
    vals = {(float(a), float(e)): float(t) for a, e, t in rows}
    assert vals[(0.4, 0.7)] == pytest.approx(threshold_time(EngineParams(eta_c=0.7, alpha=0.4)), abs=1e-9)
    assert vals[(0.2, 1.0)] == 0.0
    grid = np.array([float(r[2]) for r in rows]).reshape(5, 4)
    assert np.all(np.diff(grid, axis=0) <= 0) and np.all(np.diff(grid, axis=1) <= 0)


@pytest.mark.parametrize(
    "argv,header",
    [
        (["wavepacket", "--alpha", "1.5", "--time", "3", "--points", "64"], ["x", "abs_psi_plus", "abs_psi_minus"]),
        (["power", "--points", "50"], ["t_tilde", "work", "efficiency", "power", "output_power", "positive_work"]),
        (["tradeoff", "--points", "50"], ["p_norm", "eta_norm", "t_tilde"]),
        (["tradeoff", "--mode", "cloud", "--samples", "2000"], ["p_norm", "eta_norm", "t_tilde", "t_e"]),
        (["tradeoff", "--mode", "envelope", "--samples", "2000"], ["p_norm", "eta_lo", "eta_hi", "count"]),
        (["twotime", "--mode", "surface", "--points", "10"], ["t_tilde", "t_e", "efficiency", "power"]),
        (["twotime", "--eta-c-grid", "0.1:0.9:10"], ["alpha", "c_e", "exceed_width"]),
        (["carnot", "--eta-c", "0.5"], ["ratio_ce_co", "kappa", "eta_mp", "eta_lower", "eta_upper", "eta_ca"]),
    ],
)
def test_schemas(argv, header, tmp_path):
    code, out = run(argv, tmp_path)
    assert code == 0
    h, rows = read_csv(out)
    assert h == header and rows
    assert b"\r" not in out.read_bytes()


def test_power_rows_consistent(tmp_path):
    _, out = run(["power", "--points", "30"], tmp_path)
    _, rows = read_csv(out)
    for r in rows:
        t, w, eta, p, po, pos = map(float, r)
        assert pos == (1.0 if w > 0 else 0.0)
        assert p == pytest.approx(w / t, rel=1e-10)


def test_json_mirrors_csv(tmp_path):
    _, c = run(["carnot", "--points", "5"], tmp_path, "a.csv")
    _, j = run(["carnot", "--points", "5", "--format", "json"], tmp_path, "a.json")
    _, rows = read_csv(c)
    doc = json.loads(j.read_text())
    assert doc["meta"]["format"] == "json" and doc["meta"]["eta_c"] == 0.6
    assert len(doc["rows"]) == len(rows)
    assert fmt(doc["rows"][3]["eta_mp"]) == rows[3][2]


def test_byte_identical_reruns(tmp_path, monkeypatch):
    argv = ["tradeoff", "--mode", "envelope", "--samples", "5000", "--seed", "9"]
    _, a = run(argv, tmp_path, "a.csv")
    _, b = run(argv, tmp_path, "b.csv")
    assert a.read_bytes() == b.read_bytes()
    _, c = run(argv[:-1] + ["10"], tmp_path, "c.csv")
    assert c.read_bytes() != a.read_bytes()


def test_parallel_equals_serial(tmp_path, monkeypatch):
    argv = ["emp", "--eta-c-grid", "0.3:0.9:6"]
    monkeypatch.setenv("SZILARD_THREADS", "1")
    _, a = run(argv, tmp_path, "a.csv")
    monkeypatch.setenv("SZILARD_THREADS", "3")
    _, b = run(argv, tmp_path, "b.csv")
    assert a.read_bytes() == b.read_bytes()
    monkeypatch.setenv("SZILARD_THREADS", "-2")
    assert main(argv + ["--out", str(tmp_path / "c.csv")]) == 2


def test_bad_mode(tmp_path):
    assert main(["carnot", "--mode", "cloud", "--out", str(tmp_path / "x.csv")]) == 2


def test_default_out_name(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert main(["carnot"]) == 0
    assert (tmp_path / "carnot.csv").exists()


def test_console_entry_point(tmp_path):
    r = subprocess.run(
        [sys.executable, "-m", "szilard", "carnot", "--eta-c", "1.5"], capture_output=True, text=True, cwd=tmp_path
    )
    assert r.returncode == 2 and "eta-c" in r.stderr


def test_verify_subcommand(tmp_path, capsys):
    code, out = run(["verify"], tmp_path)
    s = summary_values(capsys.readouterr().out)
    assert code == 0 and s["failed"] == "0"
    _, rows = read_csv(out)
    assert all(r[-1] == "1" for r in rows)
