import json
import math

import numpy as np
import pytest

from nanospin import cli


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr().out
    return code, out


class TestFormFactor:
    def test_prolate_sign(self, capsys):
        code, out = run_cli(capsys, "formfactor", "--a", "20", "--b", "10", "--alpha", "0")
        doc = json.loads(out)
        assert code == 0
        assert doc["shape_integral"] > 0.0
        assert doc["schema_version"] == "1"
        assert doc["config"]["subcommand"] == "formfactor"

    def test_sphere_note(self, capsys):
        code, out = run_cli(capsys, "formfactor", "--a", "10", "--b", "10")
        doc = json.loads(out)
        assert doc["coupling_g_rad_per_s"] == 0.0
        assert any("spherical" in note for note in doc["notes"])

    def test_magic_angle_flagged(self, capsys):
        code, out = run_cli(capsys, "formfactor", "--a", "20", "--b", "10",
                            "--alpha", "0.9553")
        doc = json.loads(out)
        assert abs(doc["form_factor"]) < 1e-3
        assert any("magic angle" in note for note in doc["notes"])


class TestPolarize:
    def test_csv_columns_and_determinism(self, tmp_path, capsys):
        out_a = tmp_path / "a.csv"
        out_b = tmp_path / "b.csv"
        for path in (out_a, out_b):
            code, _ = run_cli(capsys, "polarize", "--n", "9", "--g", "2.0",
                              "--points", "64", "--out", str(path))
            assert code == 0
        assert out_a.read_bytes() == out_b.read_bytes()
        lines = out_a.read_text().splitlines()
        assert lines[0] == "# format_version = 1"
        header_idx = next(i for i, l in enumerate(lines) if not l.startswith("#"))
        assert lines[header_idx] == "t,tau,p1,p_other"
        first = lines[header_idx + 1].split(",")
        assert float(first[2]) == pytest.approx(1.0, abs=1e-12)

    def test_analytic_two_spin(self, tmp_path, capsys):
        path = tmp_path / "n2.csv"
        run_cli(capsys, "polarize", "--n", "2", "--points", "5",
                "--tau-max", str(math.pi), "--out", str(path))
        rows = [l for l in path.read_text().splitlines() if not l.startswith("#")][1:]
        p1 = [float(r.split(",")[2]) for r in rows]
        assert p1 == pytest.approx([1.0, 0.5, 0.0, 0.5, 1.0], abs=1e-12)

    def test_plot_svg(self, tmp_path, capsys):
        svg = tmp_path / "fig.svg"
        code, _ = run_cli(capsys, "polarize", "--n", "21", "--points", "128",
                          "--plot", str(svg))
        assert code == 0
        text = svg.read_text()
        assert text.startswith("<?xml") and "<svg" in text

    def test_even_odd_series(self, tmp_path, capsys):
        for n in (8, 9, 20, 21, 134, 135):
            path = tmp_path / f"n{n}.csv"
            code, _ = run_cli(capsys, "polarize", "--n", str(n), "--points", "32",
                              "--out", str(path))
            assert code == 0


class TestNoiseCommand:
    def test_csv_with_monte_carlo(self, tmp_path, capsys):
        path = tmp_path / "noise.csv"
        code, _ = run_cli(capsys, "noise", "--n", "34", "--rel-variance", "1e-4",
                          "--tc", "1.0", "--t-max", "6.0", "--points", "80",
                          "--realizations", "16", "--seed", "5",
                          "--out", str(path))
        assert code == 0
        lines = [l for l in path.read_text().splitlines() if not l.startswith("#")]
        assert lines[0] == "t,analytic,approx,mc_mean,mc_stderr"

    def test_zero_variance_mc_equals_analytic(self, tmp_path, capsys):
        path = tmp_path / "noise0.csv"
        run_cli(capsys, "noise", "--n", "9", "--rel-variance", "0", "--tc", "1.0",
                "--t-max", "6.0", "--points", "80", "--realizations", "8",
                "--seed", "1", "--out", str(path))
        rows = [l.split(",") for l in path.read_text().splitlines()
                if not l.startswith("#")][1:]
        analytic = np.array([float(r[1]) for r in rows])
        mc = np.array([float(r[3]) for r in rows])
        assert np.max(np.abs(analytic - mc)) < 1e-12

    def test_seed_stability(self, tmp_path, capsys):
        paths = [tmp_path / "s1.csv", tmp_path / "s2.csv"]
        for p in paths:
            run_cli(capsys, "noise", "--n", "34", "--tc", "1.0", "--t-max", "6.0",
                    "--points", "80", "--realizations", "16", "--seed", "7",
                    "--out", str(p))
        assert paths[0].read_bytes() == paths[1].read_bytes()


class TestLineshapeCommand:
    def test_moments_json_and_csv(self, tmp_path, capsys):
        path = tmp_path / "spec.csv"
        code, out = run_cli(capsys, "lineshape", "--n", "3", "--g", "1.0",
                            "--t2", "20.0", "--out", str(path))
        assert code == 0
        doc = json.loads(out.split("wrote")[0])
        assert doc["m2"] == pytest.approx(2.0 * 2.25)
        assert doc["normalization"] == pytest.approx(1.0, abs=1e-6)
        lines = [l for l in path.read_text().splitlines() if not l.startswith("#")]
        assert lines[0] == "omega,spectrum"
        # triplet: central line is the strongest
        rows = np.array([[float(x) for x in l.split(",")] for l in lines[1:]])
        center = rows[np.argmin(np.abs(rows[:, 0]))]
        assert center[1] == pytest.approx(rows[:, 1].max(), rel=1e-6)


class TestInvertCommand:
    def test_round_trip(self, capsys):
        # forward model computed with the library in-process
        from nanospin import geometry
        geom = geometry.CavityGeometry(a=24.0, b=12.0, alpha=0.0)
        n_spins = 400
        conc = n_spins / geom.volume
        g = geometry.coupling_g(geom, geometry.GasSpec(concentration=conc))
        period = 2.0 * math.pi / g
        width = 4.0 * math.pi / (g * math.sqrt(n_spins))
        code, out = run_cli(capsys, "invert", "--period", repr(period),
                            "--width", repr(width),
                            "--concentration", repr(conc), "--alpha", "0")
        doc = json.loads(out)
        assert code == 0
        assert doc["volume_nm3"] == pytest.approx(geom.volume, rel=1e-9)
        assert doc["aspect"] == pytest.approx(2.0, abs=1e-6)

    def test_magic_angle_error(self, capsys):
        code = cli.main(["invert", "--period", "1.0", "--width", "0.01",
                         "--concentration", "1e-3",
                         "--alpha", str(math.acos(1.0 / math.sqrt(3.0)))])
        assert code == 2

    def test_out_of_range_error(self, capsys):
        code = cli.main(["invert", "--period", "1.0", "--width", "1e-9",
                         "--concentration", "1e-3", "--alpha", "0"])
        assert code == 2


class TestValidateCommand:
    def test_default_run_passes(self, capsys):
        code, out = run_cli(capsys, "validate", "--max-n", "6")
        assert code == 0
        assert "all checks passed" in out
        assert "[PASS]" in out

    def test_negative_control(self, capsys):
        code, out = run_cli(capsys, "validate", "--max-n", "4", "--perturb", "1e-6")
        assert code == 1
        assert "FAIL" in out

    def test_n_cap_enforced(self, capsys):
        code = cli.main(["validate", "--max-n", "13"])
        assert code == 2


class TestConfigAndEnv:
    def test_config_file_with_flag_override(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("a = 20\nb = 10\nalpha = 0.0  # comment\n")
        code, out = run_cli(capsys, "formfactor", "--config", str(cfg),
                            "--alpha", "1.5707963267948966")
        doc = json.loads(out)
        assert doc["config"]["a"] == 20.0
        assert doc["config"]["alpha"] == pytest.approx(math.pi / 2.0)  # flag wins
        assert doc["p2_cos_alpha"] == pytest.approx(-0.5)

    def test_unknown_config_key(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("bogus = 1\n")
        with pytest.raises(SystemExit):
            cli.main(["formfactor", "--config", str(cfg), "--a", "1", "--b", "1"])

    def test_outdir_env(self, tmp_path, monkeypatch, capsys):
        monkeypatch.setenv("NANOSPIN_OUTDIR", str(tmp_path))
        code, _ = run_cli(capsys, "polarize", "--n", "3", "--points", "8",
                          "--out", "sub/trace.csv")
        assert code == 0
        assert (tmp_path / "sub" / "trace.csv").exists()

    def test_missing_required(self):
        with pytest.raises(SystemExit):
            cli.main(["polarize"])
