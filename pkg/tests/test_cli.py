import csv
import json
import math

import numpy as np
import pytest

from plategap import cli
from plategap.config import PlateConfig, save_config
from plategap.spectrum import SpectrumError

SMALL = PlateConfig(M=12, K=4, N=8, panels_x=48, panels_y=8, x_samples=257, area_nx=256, area_ny=32)


@pytest.fixture
def small_config(tmp_path):
    path = tmp_path / "small.json"
    save_config(SMALL, path)
    return path


def _run(*argv):
    return cli.main([str(a) for a in argv])


def _manifest(out):
    return json.loads((out / "run_manifest.json").read_text())


def _rows(path):
    with open(path) as fh:
        return list(csv.reader(fh))


def _lists_every_file(out):
    assert sorted(_manifest(out)["outputs"]) == sorted(p.name for p in out.iterdir())


def test_spectrum_command(small_config, tmp_path, capsys):
    out = tmp_path / "o"
    assert _run("spectrum", "--config", small_config, "--out", out, "--weight", "midline") == 0
    text = capsys.readouterr().out
    assert "nu_1" in text and "nu_2" in text and "mu_11" in text and "torsional" in text
    doc = json.loads((out / "spectrum_midline.json").read_text())
    assert doc["density"] == "midline" and doc["M"] == SMALL.M
    nu1 = min(m["lambda"] for m in doc["modes"] if m["parity"] == "torsional")
    assert nu1 == pytest.approx(1.75e4, rel=0.03)
    _lists_every_file(out)
    man = _manifest(out)
    assert man["config"] == SMALL.to_dict()
    assert PlateConfig.from_dict(man["config"]) == SMALL


def test_spectrum_neig_limits_modes(small_config, tmp_path):
    out = tmp_path / "o"
    assert _run("spectrum", "--config", small_config, "--out", out, "--neig", 3) == 0
    doc = json.loads((out / "spectrum_homogeneous.json").read_text())
    assert len(doc["modes"]) == 6


def test_table1_command(small_config, tmp_path):
    out = tmp_path / "o"
    assert _run("table1", "--config", small_config, "--out", out, "--check-convergence") == 0
    rows = _rows(out / "table1.csv")
    assert rows[0][1:] == ["homogeneous", "star", "midline", "stripes:10", "edges"]
    assert [r[0] for r in rows[1:]] == ["nu1*1e-4", "nu2*1e-4", "Ginf_f0*1e4", "Ginf_f1*1e4", "Ginf_f2*1e4"]
    assert float(rows[1][1]) == pytest.approx(1.09, rel=0.02)
    man = _manifest(out)
    assert len(man["convergence"]) == 5
    assert set(man["forces"]) == {"f0", "f1", "f2"}
    assert all(k.startswith("weight:") or k for k in man["timings"])
    _lists_every_file(out)


def test_figures_command(small_config, tmp_path):
    out = tmp_path / "o"
    assert _run("figures", "--config", small_config, "--out", out, "--jmax", 6, "--nx", 65, "--ny", 9) == 0
    for name in ("gap_f0.csv", "gap_f1.csv", "ginf_vs_j.csv"):
        assert (out / name).exists()
    g0 = np.array(_rows(out / "gap_f0.csv")[1:], dtype=float)
    assert g0.shape == (SMALL.x_samples, 6)
    assert g0[0, 0] == 0 and g0[-1, 0] == pytest.approx(math.pi)
    np.testing.assert_allclose(g0[[0, -1], 1:], 0, atol=1e-15)
    hom, stp = g0[:, 1], g0[:, 4]
    assert np.abs(stp - hom).max() < 0.015 * np.abs(hom).max()
    gj = np.array(_rows(out / "ginf_vs_j.csv")[1:], dtype=float)
    assert list(gj[:, 0]) == list(range(1, 7))
    assert np.all(np.diff(gj[:, 1]) < 0)
    rasters = sorted(p.name for p in out.glob("weight_*.csv"))
    assert rasters == sorted(["weight_homogeneous.csv", "weight_star.csv", "weight_midline.csv",
                              "weight_stripes10.csv", "weight_edges.csv"])
    _lists_every_file(out)


def test_weights_command(small_config, tmp_path):
    out = tmp_path / "o"
    assert _run("weights", "--config", small_config, "--out", out, "--weight", "stripes:3", "--nx", 31, "--ny", 5) == 0
    rows = _rows(out / "weight_stripes3.csv")
    assert rows[0] == ["x", "y", "p"]
    vals = np.array(rows[1:], dtype=float)
    assert vals.shape == (31 * 5, 3)
    assert set(vals[:, 2]) == {SMALL.alpha, SMALL.beta}


def test_output_directory_from_environment(small_config, tmp_path, monkeypatch):
    out = tmp_path / "from_env"
    monkeypatch.setenv(cli.OUT_ENV, str(out))
    assert _run("weights", "--config", small_config, "--weight", "edges", "--nx", 9, "--ny", 3) == 0
    assert (out / "weight_edges.csv").exists()


def test_reruns_are_byte_identical(small_config, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert _run("figures", "--config", small_config, "--out", a, "--jmax", 3, "--nx", 17, "--ny", 5) == 0
    assert _run("figures", "--config", small_config, "--out", b, "--jmax", 3, "--nx", 17, "--ny", 5, "--threads", 3) == 0
    for f in a.glob("*.csv"):
        assert f.read_bytes() == (b / f.name).read_bytes(), f.name


@pytest.mark.parametrize("argv", [
    ["spectrum", "--weight", "granite"],
    ["weights", "--weight", "stripes:0"],
    ["table1", "--threads", "0"],
    ["figures", "--jmax", "0"],
])
def test_config_errors_exit_1(small_config, tmp_path, argv):
    assert _run(*argv, "--config", small_config, "--out", tmp_path) == 1


@pytest.mark.parametrize("argv", [["nonsense"], ["spectrum", "--neig", "many"], []])
def test_usage_errors_exit_1(argv):
    with pytest.raises(SystemExit) as exc:
        _run(*argv)
    assert exc.value.code == 1


def test_bad_config_files_exit_1(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"M": 6, "N": 9}')
    assert _run("table1", "--config", bad, "--out", tmp_path) == 1
    bad.write_text('{"sigma": 0.7}')
    assert _run("spectrum", "--config", bad, "--out", tmp_path) == 1
    bad.write_text('{"colour": 1}')
    assert _run("spectrum", "--config", bad, "--out", tmp_path) == 1
    bad.write_text("{not json")
    assert _run("spectrum", "--config", bad, "--out", tmp_path) == 1
    assert _run("spectrum", "--config", tmp_path / "missing.json", "--out", tmp_path) == 1


def test_numerical_failure_exit_2(small_config, tmp_path, monkeypatch):
    def boom(*a, **k):
        raise SpectrumError("stiffness matrix is not positive definite")

    monkeypatch.setattr(cli, "compute_spectrum", boom)
    assert _run("spectrum", "--config", small_config, "--out", tmp_path) == 2


def test_warnings_do_not_fail_the_run(small_config, tmp_path):
    # the star weight carries a loose mass tolerance, everything else is exact
    out = tmp_path / "o"
    assert _run("spectrum", "--config", small_config, "--out", out, "--weight", "star") == 0
    assert isinstance(_manifest(out)["warnings"], list)
