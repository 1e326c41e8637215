import io
from pathlib import Path
import subprocess
import sys

import numpy as np
import pytest

from thermoline.cli import (
    EXIT_IO,
    EXIT_OK,
    EXIT_USAGE,
    load_config,
    main,
)
from thermoline.errors import ConfigError
from thermoline.spectrum import counting_spectrum, intensity_spectrum
from thermoline.verification import FIGURE_ALPHAS, figure_csv

GOLDEN = Path(__file__).parent / "golden"


def _run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_config_defaults(tmp_path):
    cfg_file = tmp_path / "empty.cfg"
    cfg_file.write_text("")
    cfg = load_config("spectrum", {"alpha": 10.0}, str(cfg_file))
    assert (cfg.x_min, cfg.x_max, cfg.points, cfg.kind) == (0.5, 2.5, 500, "intensity")


def test_flag_overrides_file(tmp_path):
    cfg_file = tmp_path / "run.cfg"
    cfg_file.write_text("# comment\nalpha = 10\npoints=7  # trailing\n")
    cfg = load_config("spectrum", {"alpha": 20.0}, str(cfg_file))
    assert cfg.alpha == 20.0 and cfg.points == 7


def test_negative_alpha_names_key_and_bound():
    with pytest.raises(ConfigError) as info:
        load_config("spectrum", {"alpha": -1.0})
    assert info.value.key == "alpha"
    assert "> 0" in str(info.value)


def test_unknown_key_named(tmp_path):
    cfg_file = tmp_path / "bad.cfg"
    cfg_file.write_text("alpha=1\nvelocity=3\n")
    with pytest.raises(ConfigError) as info:
        load_config("spectrum", {}, str(cfg_file))
    assert info.value.key == "velocity"


def test_key_not_valid_for_subcommand():
    with pytest.raises(ConfigError) as info:
        load_config("table", {"alpha": 1.0, "order": 1, "x": 1.0})
    assert info.value.key == "alpha"


@pytest.mark.parametrize("flags", [{"alpha": 1.0, "points": 1}, {"alpha": 1.0, "x_min": 2.0, "x_max": 1.0}])
def test_grid_bounds(flags):
    with pytest.raises(ConfigError):
        load_config("spectrum", flags)


def test_unparseable_value(tmp_path):
    cfg_file = tmp_path / "c.cfg"
    cfg_file.write_text("alpha=ten\n")
    with pytest.raises(ConfigError) as info:
        load_config("spectrum", {}, str(cfg_file))
    assert info.value.key == "alpha"


def test_usage_exit_code(capsys):
    code, _, err = _run(["spectrum", "--alpha", "-1"], capsys)
    assert code == EXIT_USAGE
    assert "alpha" in err


def test_missing_config_file_is_usage_error(capsys, tmp_path):
    code, _, _ = _run(["spectrum", "--config", str(tmp_path / "nope.cfg")], capsys)
    assert code == EXIT_USAGE


def test_unwritable_output_is_io_error(capsys, tmp_path):
    target = tmp_path / "missing_dir" / "out.csv"
    code, _, err = _run(["spectrum", "--alpha", "10", "--out", str(target)], capsys)
    assert code == EXIT_IO
    assert "cannot write" in err


@pytest.mark.parametrize("alpha", FIGURE_ALPHAS)
def test_golden_spectrum(alpha, tmp_path, capsys):
    out = tmp_path / "s.csv"
    code, _, _ = _run(["spectrum", "--alpha", str(alpha), "--x-min", "0.5", "--x-max", "2.5",
                       "--points", "500", "--out", str(out)], capsys)
    assert code == EXIT_OK
    golden = (GOLDEN / f"spectrum_alpha{int(alpha)}.csv").read_bytes()
    assert out.read_bytes() == golden
    assert figure_csv(alpha).encode() == golden


@pytest.mark.parametrize("kind,fn", [("intensity", intensity_spectrum), ("counting", counting_spectrum)])
def test_csv_round_trip(kind, fn, capsys):
    code, out, _ = _run(["spectrum", "--alpha", "7.5", "--kind", kind, "--points", "301",
                         "--log-density"], capsys)
    assert code == EXIT_OK
    assert out.splitlines()[0] == "x,density,log_density"
    assert out.endswith("\n") and "\r" not in out
    rows = np.loadtxt(io.StringIO(out), delimiter=",", skiprows=1)
    assert rows.shape == (301, 3)
    assert np.all(np.abs(fn(rows[:, 0], 7.5) / rows[:, 1] - 1) <= 1e-15)


def test_physical_units(capsys):
    _, plain, _ = _run(["spectrum", "--alpha", "10", "--points", "5"], capsys)
    _, scaled, _ = _run(["spectrum", "--alpha", "10", "--points", "5", "--omega0", "2",
                         "--intensity0", "3"], capsys)
    a = np.loadtxt(io.StringIO(plain), delimiter=",", skiprows=1)
    b = np.loadtxt(io.StringIO(scaled), delimiter=",", skiprows=1)
    assert b[:, 0] == pytest.approx(2 * a[:, 0], rel=1e-15)
    assert b[:, 1] == pytest.approx(1.5 * a[:, 1], rel=1e-15)


def test_simulate_is_deterministic(tmp_path, capsys):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in paths:
        code, _, _ = _run(["simulate", "--alpha", "10", "--n", "20000", "--bins", "20",
                           "--seed", "4", "--out", str(p)], capsys)
        assert code == EXIT_OK
    assert paths[0].read_bytes() == paths[1].read_bytes()
    assert paths[0].read_text().splitlines()[0] == "x_lo,x_hi,weight,weight_err"


def test_simulate_independent_of_thread_cap(tmp_path, capsys, monkeypatch):
    outs = []
    for cap in ("1", "8"):
        monkeypatch.setenv("THERMOLINE_THREADS", cap)
        p = tmp_path / f"{cap}.csv"
        _run(["simulate", "--alpha", "3", "--n", "50000", "--chunk-size", "4096", "--out", str(p)], capsys)
        outs.append(p.read_bytes())
    assert outs[0] == outs[1]


def test_sample(capsys):
    code, out, _ = _run(["sample", "--alpha", "2", "--n", "10", "--seed", "1"], capsys)
    assert code == EXIT_OK
    lines = out.splitlines()
    assert len(lines) == 11


def test_scan(capsys):
    code, out, _ = _run(["scan", "--alpha", "100", "--gamma-d", "1e-3", "--v-min", "-0.2",
                         "--v-max", "0.2", "--v-points", "21"], capsys)
    assert code == EXIT_OK
    assert out.splitlines()[0] == "v_over_c,count_rate"
    assert len(out.splitlines()) == 22


def test_moments(capsys):
    code, out, _ = _run(["moments", "--alpha", "10", "--kind", "counting"], capsys)
    assert code == EXIT_OK
    rows = np.loadtxt(io.StringIO(out), delimiter=",", skiprows=1)
    first = rows[rows[:, 0] == 1][0]
    assert first[1] == pytest.approx(0.866988940343609189, rel=1e-13)
    assert first[2] == pytest.approx(first[1], rel=1e-9)


def test_table(capsys):
    code, out, _ = _run(["table", "--order", "0", "--x", "1"], capsys)
    assert code == EXIT_OK
    row = out.splitlines()[1].split(",")
    assert float(row[3]) == pytest.approx(0.421024438240708333, rel=1e-12)


def test_table_order_out_of_range(capsys):
    code, _, err = _run(["table", "--order", "9", "--x", "1"], capsys)
    assert code == EXIT_USAGE and "order" in err


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "thermoline", "table", "--order", "2", "--x", "1"],
                       capture_output=True, text=True, check=False)
    assert r.returncode == EXIT_OK
    assert r.stdout.startswith("order,x,scaled,value")
