"""Command-line interface: exit codes, CSV/JSON output, end-to-end flows."""

import csv
import json
import math

import numpy as np
import pytest

from bigramlab.cli import (
    ExperimentConfig,
    fit_power_law,
    main,
    measure_gd_time_to_eps,
    measure_sd_time_to_eps,
)
from bigramlab.corpus import BOUNDARY_ID, write_token_stream
from bigramlab.errors import ConfigError
from bigramlab.gd import gd_relative_loss, gd_time_scaling
from bigramlab.powerlaw import PowerLawSpec
from bigramlab.sd import sd_grid_search_phi


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


class TestConfig:
    def test_validation(self):
        with pytest.raises(ConfigError):
            ExperimentConfig(alpha=1.0, d_list=())
        with pytest.raises(ConfigError):
            ExperimentConfig(alpha=0.0, d_list=(10,))
        with pytest.raises(ConfigError):
            ExperimentConfig(alpha=1.0, d_list=(10,), algorithm="bogus")
        with pytest.raises(ConfigError):
            ExperimentConfig(alpha=1.0, d_list=(10,), threads=0)


class TestFit:
    def test_exact_power_law_recovered(self):
        d = np.array([10, 100, 1000, 10**4])
        t = 3.0 * d**0.5
        fit = fit_power_law(d, t)
        assert fit.exponent_beta == pytest.approx(0.5, abs=1e-12)
        assert fit.coefficient_c == pytest.approx(3.0, rel=1e-12)
        assert fit.residual_rms == pytest.approx(0.0, abs=1e-12)

    def test_too_few_points(self):
        with pytest.raises(ConfigError):
            fit_power_law([10], [5])


class TestMeasuredTimes:
    def test_gd_bisection_hits_target(self):
        spec = PowerLawSpec(d=1000, alpha=1.0)
        for eps in [0.5, 0.1, 0.01]:
            t = measure_gd_time_to_eps(spec, eps)
            assert abs(gd_relative_loss(spec, t) - eps) <= 1e-3

    def test_sd_minimal_even_budget(self):
        spec = PowerLawSpec(d=500, alpha=1.0)
        eps = 0.2
        T = measure_sd_time_to_eps(spec, eps)
        assert T % 2 == 0
        assert sd_grid_search_phi(spec, T)[1] <= eps
        if T > 2:
            assert sd_grid_search_phi(spec, T - 2)[1] > eps


class TestExitCodes:
    def test_config_error_is_2(self, capsys):
        assert main(["gd-curve", "--alpha", "1.0", "--tau-grid", "0.5"]) == 2
        assert "error:" in capsys.readouterr().err

    def test_format_error_is_3(self, capsys, tmp_path):
        missing = str(tmp_path / "nope.bin")
        out = str(tmp_path / "c.bin")
        code = main(["bigram-count", "--tokens", missing, "--vocab", "10", "--counts", out])
        assert code == 3

    def test_domain_error_is_4(self, capsys):
        # Plateau regime: eps below the floor is fine, above it impossible.
        code = main([
            "time-to-eps", "--alpha", "0.25", "--d", "100",
            "--eps-grid", "0.5", "--algo", "sd",
        ])
        assert code == 4

    def test_success_is_0(self, capsys):
        assert main(["gd-curve", "--alpha", "1.0", "--d", "100", "--tau-grid", "0.5"]) == 0
        out = capsys.readouterr().out
        assert out.splitlines()[0] == "alpha,d,t,tau,r_finite,r_asymptotic"


class TestGdCurveCommand:
    def test_csv_values(self, tmp_path):
        out = tmp_path / "gd.csv"
        code = main([
            "gd-curve", "--alpha", "1.0", "--d", "100", "--d", "1000",
            "--tau-grid", "0.0", "0.5", "--out", str(out),
        ])
        assert code == 0
        rows = read_csv(out)
        assert len(rows) == 4
        for row in rows:
            d, tau = int(row["d"]), float(row["tau"])
            t = math.floor(gd_time_scaling(1.0, d, tau))
            assert int(row["t"]) == t
            expected = gd_relative_loss(PowerLawSpec(d=d, alpha=1.0), t)
            assert float(row["r_finite"]) == pytest.approx(expected, rel=1e-12)
        # tau = 0 rows are exactly at the initial loss.
        assert all(float(r["r_finite"]) == 1.0 for r in rows if r["tau"] == "0.0")

    def test_deterministic(self, tmp_path):
        args = ["gd-curve", "--alpha", "0.5", "--d", "50", "--tau-grid", "1.0", "2.0"]
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(args + ["--out", str(a)]) == 0
        assert main(args + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_threads_preserve_order(self, tmp_path):
        args = ["sd-curve", "--alpha", "1.0", "--d", "100", "--d", "400",
                "--tau-grid", "1.0", "2.0", "3.0"]
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(args + ["--out", str(a)]) == 0
        assert main(args + ["--threads", "4", "--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()


class TestJsonMirror:
    def test_json_envelope(self, tmp_path):
        out = tmp_path / "gd.csv"
        code = main([
            "gd-curve", "--alpha", "1.0", "--d", "100",
            "--tau-grid", "0.5", "--out", str(out), "--json",
        ])
        assert code == 0
        payload = json.loads((tmp_path / "gd.json").read_text())
        assert payload["columns"] == ["alpha", "d", "t", "tau", "r_finite", "r_asymptotic"]
        assert payload["config"]["alpha"] == 1.0
        assert "bigramlab" in payload["versions"]
        assert len(payload["rows"]) == 1


class TestTimeToEpsCommand:
    def test_fits_attached(self, tmp_path):
        out = tmp_path / "tte.csv"
        code = main([
            "time-to-eps", "--alpha", "1.0",
            "--d", "100", "--d", "1000", "--d", "10000",
            "--eps-grid", "0.5", "--out", str(out), "--json",
        ])
        assert code == 0
        payload = json.loads((tmp_path / "tte.json").read_text())
        fits = payload["fits"]
        assert len(fits) == 1
        # t(eps) = d^(1 - eps) at alpha = 1.
        assert fits[0]["exponent_beta"] == pytest.approx(0.5, abs=0.05)

    def test_fit_command_round_trip(self, tmp_path):
        out = tmp_path / "tte.csv"
        assert main([
            "time-to-eps", "--alpha", "1.0",
            "--d", "100", "--d", "1000", "--d", "10000",
            "--eps-grid", "0.5", "--out", str(out),
        ]) == 0
        fit_out = tmp_path / "fit.csv"
        assert main(["fit", str(out), "--out", str(fit_out)]) == 0
        rows = read_csv(fit_out)
        assert len(rows) == 1
        assert float(rows[0]["exponent_beta"]) == pytest.approx(0.5, abs=0.05)

    def test_fit_missing_column(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("a,b\n1,2\n")
        assert main(["fit", str(bad)]) == 3


class TestRealDataFlow:
    def test_count_stats_curve_pipeline(self, tmp_path, capsys):
        rng = np.random.default_rng(0)
        p = (np.arange(1, 51) ** -1.0)
        p /= p.sum()
        toks = rng.choice(50, size=5000, p=p).astype(np.uint32)
        toks[1000] = BOUNDARY_ID
        stream = tmp_path / "toks.bin"
        write_token_stream(stream, toks)
        counts_path = tmp_path / "counts.bin"

        assert main([
            "bigram-count", "--tokens", str(stream), "--vocab", "50",
            "--counts", str(counts_path),
        ]) == 0
        summary = capsys.readouterr().out.splitlines()
        assert summary[0] == "vocab_size,total_tokens,distinct_tokens,distinct_bigrams"
        assert summary[1].split(",")[1] == "4999"

        stats_out = tmp_path / "stats.csv"
        assert main([
            "bigram-stats", "--counts", str(counts_path), "--out", str(stats_out),
        ]) == 0
        stats_rows = read_csv(stats_out)
        freqs = [float(r["freq"]) for r in stats_rows]
        assert freqs == sorted(freqs, reverse=True)
        assert sum(freqs) == pytest.approx(1.0, abs=1e-12)

        curve_out = tmp_path / "curve.csv"
        assert main([
            "real-curve", "--counts", str(counts_path), "--algo", "gd",
            "--tau-grid", "0.0", "0.5", "1.0", "--out", str(curve_out),
        ]) == 0
        rows = read_csv(curve_out)
        rs = [float(r["r"]) for r in rows]
        assert rs[0] == 1.0
        assert rs[0] > rs[1] > rs[2]

        sd_out = tmp_path / "sd.csv"
        assert main([
            "real-curve", "--counts", str(counts_path), "--algo", "sd",
            "--tau-grid", "1.0", "--out", str(sd_out),
        ]) == 0
        sd_rows = read_csv(sd_out)
        assert int(sd_rows[0]["t"]) % 2 == 0
        assert 0.0 < float(sd_rows[0]["r"]) < 1.0


class TestBaselinesCommand:
    def test_alpha_restriction(self):
        assert main([
            "baselines", "--alpha", "0.5", "--d", "100", "--tau-grid", "0.5",
        ]) == 2

    def test_rows(self, tmp_path):
        out = tmp_path / "b.csv"
        assert main([
            "baselines", "--alpha", "1.0", "--d", "10000",
            "--tau-grid", "0.5", "--out", str(out),
        ]) == 0
        row = read_csv(out)[0]
        assert float(row["r_lin"]) >= 0.99
        assert float(row["r_sub"]) >= 1.0
        assert 0.0 < float(row["r_true"]) < 1.0
