import json
import math
import os
import subprocess

import numpy as np
import pytest

import selfaccel as sa

CONFIG_DIR = os.environ.get("SELFACCEL_CONFIG_DIR", "")
CLI = os.environ.get("SELFACCEL_CLI")


def test_closed_forms_on_arrays():
    fam = sa.SolutionFamily.gaussian_localized(1.0, 1.0)
    q = np.linspace(-3, 3, 61)
    np.testing.assert_allclose(fam.psi(q), np.exp(-0.5 * q**2 - q), rtol=1e-14)
    np.testing.assert_allclose(fam.v_imag(q), -q**2 - q + 0.5, atol=1e-12)
    assert fam.frame.mu == 0.0


def test_frozen_constants():
    assert sa.DARK_SOLITON_MU_SIGN == 1.0
    assert sa.NONLINEAR_MU_SHIFT_COEFFICIENT == 1.0
    assert sa.nonlinear_mu_shift(0.25, 0.1, 2.0) == sa.nonlinear_mu_shift(0.25, 0.1, 4.0)


def test_gaussian_propagation_matches_analytic():
    fam = sa.SolutionFamily.gaussian_localized(1.0, 1.0)
    grid = sa.Grid1D(-16.0, 16.0, 2048)
    init = sa.assemble_lab_frame(fam, grid, 0.0)
    out = sa.propagate(init, grid, sa.Potential.comoving(fam), dt=1e-3, n_steps=1000, record_stride=100)
    exact = sa.assemble_lab_frame(fam, grid, 1.0)
    assert out["fields"].shape == (11, 2048)
    assert np.max(np.abs(out["fields"][-1] - exact)) < 1e-4


def test_uniform_gain_norm_law():
    grid = sa.Grid1D(-20.0, 20.0, 1024)
    x = np.asarray(grid.positions())
    init = np.exp(-0.5 * x**2).astype(complex)
    for scheme in ("split-step", "crank-nicolson"):
        out = sa.propagate(init, grid, sa.Potential.uniform(0.0, 0.3), dt=1e-3, n_steps=1000,
                           scheme=scheme, record_stride=1000)
        norms = out["norms"]
        assert abs(norms[-1] / norms[0] - math.exp(0.6)) < 1e-6


def test_parabola_fit():
    t = np.linspace(0, 2, 21)
    fit = sa.fit_parabola(t, 0.5 * t**2 + 3.0)
    assert abs(fit["acc"] - 1.0) < 1e-12
    assert abs(fit["x0"] - 3.0) < 1e-12


def test_adjudication_records():
    dark = sa.adjudicate_dark_soliton_mu()
    assert dark["status"] == "selected"
    assert dark["selected"] == 1.0
    shift = sa.adjudicate_nonlinear_shift()
    assert shift["selected"] == 1.0


def test_describe_and_presets():
    assert "fig1" in sa.preset_names()
    desc = sa.describe_family("dark-soliton")
    assert desc["mu"] == "+sigma^2"
    text = sa.preset_config("fig1")
    assert sa.normalize_config(text) == text


def test_config_errors_raise():
    with pytest.raises(sa.Error, match="ValidationError"):
        sa.normalize_config("[family]\nkind = const-intensity-inv-harm\nv0 = 1\na = 1\nmu = 0.1\n")
    with pytest.raises(sa.Error, match="ParseError"):
        sa.normalize_config("")


def test_run_config_small(tmp_path):
    text = "\n".join([
        "[scenario]", "name = tiny",
        "[family]", "kind = gaussian-localized", "omega = 1", "a = 1",
        "[grid]", "x_min = -10", "x_max = 12", "n = 512",
        "[propagator]", "dt = 0.01", "t_end = 1", "record_stride = 10", "field_stride = 5",
        "[diagnostics]", "track = peak",
    ]) + "\n"
    manifest = sa.run_config(text, tmp_path / "tiny")
    assert manifest["status"] == "ok"
    assert abs(manifest["fit"]["acc"] - 1.0) < 0.02
    assert (tmp_path / "tiny" / "density.pgm").read_bytes().startswith(b"P5")


@pytest.mark.skipif(not CLI, reason="command-line tool not built")
class TestCli:
    def run(self, *args, cwd=None):
        return subprocess.run([CLI, *args], capture_output=True, text=True, cwd=cwd)

    def test_exit_codes(self, tmp_path):
        assert self.run("preset", "--list").returncode == 0
        bad = tmp_path / "bad.cfg"
        bad.write_text("[family]\nkind = const-intensity-inv-harm\nv0 = 1\na = 1\nmu = 0.1\n")
        assert self.run("run", str(bad)).returncode == 2
        empty = tmp_path / "empty.cfg"
        empty.write_text("")
        assert self.run("run", str(empty)).returncode == 2
        assert self.run("frobnicate").returncode == 2
        missing_table = tmp_path / "syn.cfg"
        missing_table.write_text("[scenario]\nkind = synthesize\n[family]\nkind = gaussian-localized\n"
                                 "[synthesize]\ntable = nowhere.csv\n")
        assert self.run("run", str(missing_table), "--out", str(tmp_path / "o")).returncode == 3

    def test_describe_and_adjudicate(self, tmp_path):
        r = self.run("describe", "gaussian-localized")
        assert r.returncode == 0
        assert json.loads(r.stdout)["family"] == "gaussian-localized"
        r = self.run("adjudicate", "--out", str(tmp_path / "adj"))
        assert r.returncode == 0
        assert (tmp_path / "adj" / "decisions.json").exists()

    def test_synthesize_table(self, tmp_path):
        table = os.path.join(CONFIG_DIR, "gaussian_envelope.csv")
        r = self.run("synthesize", table, "--a", "1", "--mu", "0", "--out", str(tmp_path / "syn"))
        assert r.returncode == 0, r.stderr
        rows = np.genfromtxt(tmp_path / "syn" / "synthesis.csv", delimiter=",", names=True)
        inner = (np.abs(rows["q"]) < 5) & (rows["valid"] == 1)
        assert np.max(np.abs(rows["v_imag"][inner] - (-rows["q"][inner] ** 2 - rows["q"][inner] + 0.5))) < 1e-6
