import csv
import subprocess
import sys

import numpy as np
import pytest

from zpafdm.cli import main, parse_ebn0
from zpafdm.harness import CSV_COLUMNS, read_csv

CONFIG = """\
n = 128
chi = 4
k_max = 1
l_max = 2
bandwidth_hz = 0.8e6
profile = eva
seed = 5
"""


@pytest.fixture
def cfg_file(tmp_path):
    p = tmp_path / "run.cfg"
    p.write_text(CONFIG)
    return p


def test_parse_ebn0():
    assert parse_ebn0("0:2.5:10") == (0.0, 2.5, 5.0, 7.5, 10.0)
    assert parse_ebn0("3,7") == (3.0, 7.0)
    assert parse_ebn0("inf") == (float("inf"),)


def test_params(capsys):
    assert main(["params", "--chi", "9", "--cpp-len", "5"]) == 0
    out = capsys.readouterr().out
    assert "L_z        = 413" in out
    assert "N_d        = 3683" in out
    assert "efficiency = 0.898074" in out


def test_params_too_short(capsys):
    assert main(["params", "--chi", "9", "--n", "300"]) != 0
    assert "frame too short" in capsys.readouterr().err


def test_efficiency(tmp_path):
    out = tmp_path / "eff.csv"
    assert main(["efficiency", "--chis", "9,13,17", "--cpp-len", "5", "--out", str(out)]) == 0
    rows = list(csv.DictReader(out.open()))
    assert [int(r["L_z"]) for r in rows] == [413, 593, 773]
    eff = [float(r["efficiency"]) for r in rows]
    assert eff[0] > eff[1] > eff[2]


def test_ber(cfg_file, tmp_path):
    out = tmp_path / "ber.csv"
    rc = main(["ber", "--config", str(cfg_file), "--ebn0", "0:5:10", "--schemes", "zp_afdm,ofdm",
               "--chis", "2,4", "--min-errors", "10", "--min-bits", "1000", "--max-frames", "20",
               "--out", str(out)])
    assert rc == 0
    header = [ln for ln in out.read_text().splitlines() if not ln.startswith("#")][0]
    assert header == ",".join(CSV_COLUMNS)
    recs = read_csv(out)
    assert len(recs) == 2 * 2 * 3
    assert {r.seed for r in recs} == {5}


def test_ber_bad_scheme(cfg_file, capsys):
    assert main(["ber", "--config", str(cfg_file), "--schemes", "otfs"]) == 2


def test_ber_bad_config(tmp_path):
    p = tmp_path / "bad.cfg"
    p.write_text(CONFIG + "speed_kmh = 500\n")
    assert main(["ber", "--config", str(p)]) == 2
    assert main(["ber", "--config", str(tmp_path / "missing.cfg")]) == 2


@pytest.mark.parametrize("kind", ["aff", "zp", "recon", "foa", "freq"])
def test_matrix(kind, tmp_path):
    out = tmp_path / f"{kind}.csv"
    assert main(["matrix", "--kind", kind, "--profile", "fig3", "--chi", "2", "--n", "64", "--out", str(out)]) == 0
    rows = list(csv.reader(out.open()))
    assert rows[0] == ["row", "col", "re", "im"]
    for r in rows[1:]:
        assert abs(complex(float(r[2]), float(r[3]))) > 1e-15


def test_matrix_zp_band(tmp_path):
    out = tmp_path / "zp.csv"
    main(["matrix", "--kind", "zp", "--profile", "fig3", "--chi", "2", "--n", "64", "--out", str(out)])
    offsets = {int(r["row"]) - int(r["col"]) for r in csv.DictReader(out.open())}
    assert offsets == {12, 10, 14, 2, 1, 3}


def test_matrix_needs_grid_for_random_profiles(tmp_path):
    assert main(["matrix", "--kind", "foa", "--profile", "eva", "--out", str(tmp_path / "m.csv")]) == 2


def test_demo(cfg_file, tmp_path):
    outdir = tmp_path / "demo"
    assert main(["demo", "--config", str(cfg_file), "--outdir", str(outdir)]) == 0
    names = {"x_d", "x", "s", "s_cpp", "r_cpp", "y", "y_d", "Y_d", "X_hat_d", "x_hat_d"}
    assert {p.stem for p in outdir.glob("*.csv")} == names
    rows = list(csv.DictReader((outdir / "x_hat_d.csv").open()))
    x_hat = np.array([complex(float(r["re"]), float(r["im"])) for r in rows])
    x_d = np.array([complex(float(r["re"]), float(r["im"])) for r in csv.DictReader((outdir / "x_d.csv").open())])
    assert len(x_hat) == 128 - (2 + 12 * 2)
    # noiseless default: decisions agree with the transmitted symbols
    np.testing.assert_array_equal(np.sign(x_hat.real), np.sign(x_d.real))


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "zpafdm.cli", "params", "--chi", "13", "--cpp-len", "5"],
                         capture_output=True, text=True, check=True)
    assert "0.854182" in res.stdout
