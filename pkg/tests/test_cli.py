import csv
import io
import json
import math
import subprocess
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from epd import cli
from epd import verify as V
from epd.cli import ConfigError, RunConfig, main, parse_grid, samples_to_csv
from epd.solver import Method, SolutionSample


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


# -- documented examples -----------------------------------------------------

def test_eval_2f1_binomial(capsys):
    code, out, _ = run(["eval", "2f1", "--a", "-0.5", "--b", "1.5", "--c", "1.5", "--z", "0.36"], capsys)
    assert code == 0 and out.strip() == "0.8"


def test_solve_radial_series_first_closed_form(capsys):
    code, out, _ = run(["solve", "radial-series", "--mu", "0.5", "--nu", "2", "--a", "0", "--b", "0,1",
                        "--grid", "t=0.1:0.9:0.1;x=1"], capsys)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 9
    assert list(rows[0]) == list(cli.CSV_COLUMNS)
    for r in rows:
        t = float(r["t"])
        assert float(r["value"]) == pytest.approx(t * math.sqrt(1 - t * t), abs=1e-12)
        assert r["method"] == "RadialSeries"


def test_verify_examples(capsys):
    code, out, _ = run(["verify", "examples"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["pass"] is True and doc["name"] == "examples"


def test_installed_entry_point():
    proc = subprocess.run([sys.executable, "-m", "epd.cli", "eval", "gamma", "--x", "0.5"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert float(proc.stdout) == pytest.approx(math.sqrt(math.pi), rel=1e-15)


# -- other commands ------------------------------------------------------------

def test_eval_bessel_and_legendre(capsys):
    code, out, _ = run(["eval", "bessel", "--order", "0.5", "--z", "1.0"], capsys)
    assert code == 0 and float(out) == pytest.approx(math.sqrt(2 / math.pi) * math.sin(1.0), rel=1e-14)
    code, out, _ = run(["eval", "legendre", "--kind", "q", "--mu", "0", "--nu", "0", "--z", "2"], capsys)
    # complex results print as "real imag"
    re, im = map(float, out.split())
    assert code == 0 and re == pytest.approx(0.54930614433405484570, rel=1e-13) and im == 0.0


def test_kernel_json(capsys):
    code, out, _ = run(["kernel", "k", "--mu", "0.3", "--nu", "0.4", "--t", "0.5", "--x", "2", "--xp", "0.5"],
                       capsys)
    doc = json.loads(out)
    assert code == 0 and doc["profile"] == 0.0 and doc["region"] == "OutsideCone"


def test_kernel_on_cone_is_a_domain_error(capsys):
    code, _, err = run(["kernel", "w", "--mu", "0.3", "--n", "1", "--t", "1", "--x", "0", "--xp", "1"],
                       capsys)
    assert code == 1 and err.startswith("epd:")


# -- errors and exit codes -------------------------------------------------------

def test_unknown_config_key(tmp_path, capsys):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"command": "eval", "target": "gamma", "x": 0.5, "colour": "red"}))
    code, _, err = run(["--config", str(path)], capsys)
    assert code == 1 and "colour" in err


def test_bad_json_reports_position(tmp_path, capsys):
    path = tmp_path / "c.json"
    path.write_text('{"command": "eval",\n "target": }')
    code, _, err = run(["--config", str(path)], capsys)
    assert code == 1 and "line 2" in err


def test_missing_key(capsys):
    code, _, err = run(["eval", "2f1", "--a", "1", "--b", "1", "--c", "1"], capsys)
    assert code == 1 and "'z'" in err


def test_bad_arguments_exit_1(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["eval", "nosuch"])
    assert exc.value.code == 1


def test_failed_verification_exits_3(monkeypatch, capsys):
    def failing():
        good = V.VerificationReport("fine", [], [0.0], 1.0)
        bad = V.VerificationReport("broken", [0.5], [2.0], 1.0)
        return V.combine("demo", [good, bad])

    monkeypatch.setitem(V.SUITES, "demo", failing)
    code, out, _ = run(["verify", "demo"], capsys)
    doc = json.loads(out)
    assert code == 3 and doc["pass"] is False
    assert doc["notes"]["failures"] == [{"check": "demo/broken", "max_residual": 2.0, "tolerance": 1.0}]


def test_no_convergence_exits_2(monkeypatch, capsys):
    from epd.errors import NoConvergence

    def boom(cfg):
        raise NoConvergence("series stalled")

    monkeypatch.setattr(cli, "_eval", boom)
    code, _, err = run(["eval", "gamma", "--x", "1"], capsys)
    assert code == 2 and "series stalled" in err


# -- configs -------------------------------------------------------------------

finite = st.floats(-10, 10, allow_nan=False)


@settings(max_examples=50)
@given(mu=st.one_of(st.none(), finite), nu=st.one_of(st.none(), finite), t=st.one_of(st.none(), finite),
       grid=st.one_of(st.none(), st.just("t=0.1:0.5:0.1;x=1")), fmt=st.sampled_from(["csv", "json"]),
       workers=st.integers(1, 8), rel=st.one_of(st.none(), st.floats(1e-12, 1e-3)))
def test_config_roundtrip(mu, nu, t, grid, fmt, workers, rel):
    quad = {} if rel is None else {"rel_tol": rel}
    cfg = RunConfig("solve", "radial", mu=mu, nu=nu, t=t, grid=grid, format=fmt, workers=workers,
                    quadrature=quad)
    assert RunConfig.from_json(cfg.to_json()) == cfg


def test_dump_config_then_run(tmp_path, capsys):
    argv = ["solve", "radial-series", "--mu", "0.5", "--nu", "2", "--b", "0,1", "--grid", "t=0.2;x=1"]
    code, dumped, _ = run(argv + ["--dump-config"], capsys)
    assert code == 0
    path = tmp_path / "cfg.json"
    path.write_text(dumped)
    _, direct, _ = run(argv, capsys)
    _, via_config, _ = run(["--config", str(path)], capsys)
    assert via_config == direct


def test_config_rejects_bad_quadrature_field():
    with pytest.raises(ConfigError):
        RunConfig("solve", "radial", quadrature={"tolerance": 1e-6})


# -- output --------------------------------------------------------------------

def test_parse_grid_inclusive_stop():
    g = parse_grid("t=0.1:0.5:0.1;x=1:2:0.5")
    assert g.t == pytest.approx((0.1, 0.2, 0.3, 0.4, 0.5)) and g.x == (1.0, 1.5, 2.0)


def test_csv_header_only_for_no_samples():
    assert samples_to_csv([]) == ",".join(cli.CSV_COLUMNS) + "\n"


def test_csv_single_row_keeps_17_digits():
    s = SolutionSample(0.1, 1.0, 1 / 3, Method.RADIAL_SERIES, 1e-16, region="Shell")
    lines = samples_to_csv([s]).splitlines()
    assert len(lines) == 2
    assert float(lines[1].split(",")[2]) == 1 / 3


def test_csv_is_byte_identical_on_repeat(capsys):
    argv = ["solve", "radial", "--mu", "0.3", "--nu", "0.2", "--f", "bump:1.0,0.5",
            "--grid", "t=0.2:0.6:0.2;x=0.8:1.2:0.2"]
    _, first, _ = run(argv, capsys)
    _, second, _ = run(argv, capsys)
    assert first == second and len(first.splitlines()) == 10


def test_output_file_has_sidecar(tmp_path, capsys):
    out = tmp_path / "v.csv"
    code, stdout, _ = run(["eval", "gamma", "--x", "0.5", "--output", str(out)], capsys)
    assert code == 0 and stdout == ""
    meta = json.loads((tmp_path / "v.csv.meta.json").read_text())
    assert meta["config"]["target"] == "gamma" and meta["epd_version"]
    assert float(out.read_text()) == pytest.approx(math.sqrt(math.pi))


def test_log_level_from_environment():
    env = {"EPD_LOG": "info", "PATH": ""}
    proc = subprocess.run([sys.executable, "-m", "epd.cli", "eval", "gamma", "--x", "2"],
                          capture_output=True, text=True, env=env)
    assert proc.returncode == 0 and "running eval gamma" in proc.stderr


def test_config_output_override(tmp_path, capsys):
    path = tmp_path / "cfg.json"
    path.write_text(RunConfig("eval", "gamma", x=0.5).to_json())
    out = tmp_path / "g.txt"
    code, stdout, _ = run(["--config", str(path), "--output", str(out)], capsys)
    assert code == 0 and stdout == "" and (tmp_path / "g.txt.meta.json").exists()
    assert float(out.read_text()) == pytest.approx(math.sqrt(math.pi))
