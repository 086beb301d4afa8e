import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from qwalk.cli import fmt, run


def invoke(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def read_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


class TestExamples:
    def test_walk1d_chi0_tail_mean(self, capsys):
        code, out, _ = invoke(capsys, "walk1d", "--alpha", "0.7854", "--beta", "1.5708", "--steps", "400")
        assert code == 0
        assert out.startswith("t,entropy\n")
        rows = read_csv(out)
        assert len(rows) == 401
        s = np.array([float(r["entropy"]) for r in rows])
        assert s[-100:].mean() == pytest.approx(0.872, abs=0.01)

    def test_sweep_extremes(self, capsys):
        code, out, _ = invoke(capsys, "sweep-nonlocal", "--grid", "101")
        assert code == 0
        assert out.startswith("theta,phi,entropy\n")
        rows = read_csv(out)
        assert len(rows) == 101 * 101
        s = np.array([float(r["entropy"]) for r in rows])
        assert s.max() == pytest.approx(0.979, abs=0.001)
        assert s.min() == pytest.approx(0.661, abs=0.001)

    def test_walk2d_fit(self, capsys):
        code, out, _ = invoke(capsys, "walk2d", "--coin", "grover", "--init", "chi2", "--steps", "100", "--fit")
        assert code == 0
        obj = json.loads(out)
        assert set(obj) == {"c", "intercept", "residual_rms", "t_min", "points"}
        assert obj["c"] == pytest.approx(0.89, abs=0.05)
        assert obj["t_min"] == 10
        assert all(t >= 10 for t, _ in obj["points"])


class TestFormats:
    def test_fmt(self):
        assert fmt(3) == "3"
        assert fmt(np.int64(7)) == "7"
        assert fmt(1 / 3) == "0.333333333333"
        assert fmt(0.0) == "0"

    def test_walk1d_distribution(self, capsys):
        code, out, _ = invoke(capsys, "walk1d", "--coin", "chi0", "--steps", "10", "--distribution")
        assert code == 0
        rows = read_csv(out)
        assert list(rows[0]) == ["x", "p"]
        assert sum(float(r["p"]) for r in rows) == pytest.approx(1, abs=1e-10)

    def test_walk1d_json(self, capsys):
        code, out, _ = invoke(capsys, "walk1d", "--coin", "chi0", "--steps", "20", "--format", "json")
        obj = json.loads(out)
        assert obj["t"] == list(range(21))
        assert "tail_mean" in obj

    def test_walk2d_distribution_threshold(self, capsys):
        code, out, _ = invoke(capsys, "walk2d", "--coin", "grover", "--steps", "8", "--distribution")
        rows = read_csv(out)
        assert list(rows[0]) == ["x", "y", "p"]
        p = np.array([float(r["p"]) for r in rows])
        assert np.all(p > 1e-15)
        assert p.sum() == pytest.approx(1, abs=1e-10)

    def test_walk2d_series_every_step(self, capsys):
        code, out, _ = invoke(capsys, "walk2d", "--coin", "h2", "--init", "chi2", "--steps", "12", "--schedule", "every")
        rows = read_csv(out)
        assert [int(r["t"]) for r in rows] == list(range(13))
        assert max(abs(float(r["entropy"])) for r in rows) < 1e-9

    def test_asymptotic_local(self, capsys):
        code, out, _ = invoke(capsys, "asymptotic-local", "--alpha", str(-np.pi / 8), "--beta", "0", "--quadrature")
        obj = json.loads(out)
        assert obj["entropy"] == pytest.approx(1.0, abs=1e-9)
        assert obj["quadrature_entropy"] == pytest.approx(obj["entropy"], abs=1e-6)

    def test_asymptotic_local_grid(self, capsys):
        code, out, _ = invoke(capsys, "asymptotic-local", "--grid", "9", "--format", "csv")
        rows = read_csv(out)
        assert list(rows[0]) == ["alpha", "beta", "delta", "entropy"]
        assert len(rows) == 27

    def test_asymptotic_nonlocal(self, capsys):
        code, out, _ = invoke(capsys, "asymptotic-nonlocal", "--theta", str(-np.pi / 4), "--phi", "0", "--quadrature")
        obj = json.loads(out)
        assert obj["entropy"] == pytest.approx(0.661, abs=0.001)
        assert obj["r1"] + obj["r2"] == pytest.approx(1)
        assert obj["quadrature_entropy"] == pytest.approx(obj["entropy"], abs=1e-5)

    def test_sweep_fixed_phi(self, capsys):
        code, out, _ = invoke(capsys, "sweep-nonlocal", "--grid", "5", "--phi", "0")
        rows = read_csv(out)
        assert len(rows) == 5
        assert {float(r["phi"]) for r in rows} == {0.0}
        assert float(rows[3]["entropy"]) == pytest.approx(0.979, abs=0.001)

    def test_sweep_simulated(self, capsys, monkeypatch):
        monkeypatch.setenv("QWALK_THREADS", "2")
        code, out, _ = invoke(capsys, "sweep-nonlocal", "--grid", "3", "--simulate", "--steps", "200")
        rows = read_csv(out)
        assert len(rows) == 9
        assert all(0 <= float(r["entropy"]) <= 1 for r in rows)

    def test_fit_roundtrip(self, capsys, tmp_path):
        series = tmp_path / "s.csv"
        code, _, _ = invoke(capsys, "walk2d", "--coin", "rp", "--init", "chi1", "-o", str(series))
        assert code == 0
        code, out, _ = invoke(capsys, "fit", "--input", str(series))
        direct = json.loads(invoke(capsys, "walk2d", "--coin", "rp", "--init", "chi1", "--fit")[1])
        got = json.loads(out)
        # the CSV carries 12 significant digits, so the refit agrees to ~1e-11
        for key in ("c", "intercept", "residual_rms"):
            assert got[key] == pytest.approx(direct[key], abs=1e-10)
        assert got["t_min"] == direct["t_min"]


class TestDeterminism:
    @pytest.mark.parametrize(
        "argv",
        [
            ("walk1d", "--theta", "0.3", "--phi", "1.1", "--steps", "100"),
            ("walk2d", "--coin", "rp", "--init", "chi2", "--steps", "30", "--fit"),
            ("sweep-nonlocal", "--grid", "4", "--simulate", "--steps", "50"),
        ],
    )
    def test_byte_identical(self, tmp_path, argv):
        outs = []
        for i in range(2):
            path = tmp_path / f"out{i}"
            assert run([*argv, "-o", str(path)]) == 0
            outs.append(path.read_bytes())
        assert outs[0] == outs[1]
        assert b"\r" not in outs[0]


class TestErrors:
    @pytest.mark.parametrize(
        "argv",
        [
            ("asymptotic-local", "--quadrature", "--n-k", "300"),
            ("walk1d", "--alpha", "2.0"),
            ("walk1d", "--theta", "0.1", "--phi", "4"),
            ("walk1d", "--sigma", "-1"),
            ("walk1d", "--sigma", "10", "--cutoff", "20"),
            ("walk1d", "--steps", "-3"),
            ("sweep-nonlocal", "--grid", "1"),
            ("sweep-nonlocal", "--phi", "5"),
            ("walk2d", "--coin", "nope"),
            ("walk2d", "--steps", "30", "--fit", "--t-min", "40"),
        ],
    )
    def test_usage_exit_2(self, capsys, argv):
        with pytest.raises(SystemExit) as exc:
            code = run(list(argv))
            raise SystemExit(code)
        assert exc.value.code == 2

    def test_unwritable_output(self, capsys, tmp_path):
        code, _, err = invoke(capsys, "walk1d", "--steps", "2", "-o", str(tmp_path / "missing" / "x.csv"))
        assert code == 1
        assert "cannot write" in err

    def test_missing_input(self, capsys, tmp_path):
        code, _, _ = invoke(capsys, "fit", "--input", str(tmp_path / "nope.csv"))
        assert code == 1

    def test_malformed_input(self, capsys, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("a,b\n1,2\n")
        code, _, _ = invoke(capsys, "fit", "--input", str(bad))
        assert code == 2

    def test_bad_thread_env(self, capsys, monkeypatch):
        monkeypatch.setenv("QWALK_THREADS", "zero")
        code, _, _ = invoke(capsys, "sweep-nonlocal", "--grid", "2", "--simulate", "--steps", "4")
        assert code == 2


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "qwalk", "asymptotic-local", "--alpha", "0", "--beta", "0"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["entropy"] == pytest.approx(0.872, abs=0.001)
    bad = subprocess.run([sys.executable, "-m", "qwalk", "walk1d", "--alpha", "9"], capture_output=True)
    assert bad.returncode == 2
