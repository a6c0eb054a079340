"""Rendering smoke tests on hand-written CSVs matching the CLI contract."""

import pytest

from bigramplots import (
    baseline_compare,
    loss_vs_tau,
    stepsize_ratio,
    time_to_eps_loglog,
    zipf_fit,
)

GD_CURVE = """alpha,d,t,tau,r_finite,r_asymptotic
1.0,100,5,0.5,0.3428,0.5
1.0,100,7,0.7,0.25,0.3
1.0,1000,15,0.5,0.3932,0.5
1.0,1000,44,0.7,0.28,0.3
"""

STEPSIZE = """alpha,d,tau,phi_grid_best,phi_predicted,ratio
1.0,100,2.0,1.3,1.25,1.04
1.0,1000,2.0,1.28,1.25,1.024
1.0,100,3.0,1.15,1.111,1.035
1.0,1000,3.0,1.12,1.111,1.008
"""

TIME_TO_EPS = """algo,alpha,d,eps,t_measured,t_predicted
gd,1.0,100,0.5,9.0,10.0
gd,1.0,1000,0.5,30.0,31.6
gd,1.0,10000,0.5,98.0,100.0
"""

FIT = """eps,coefficient_c,exponent_beta,residual_rms,n_points
0.5,0.95,0.51,0.01,3
"""

BASELINES = """d,tau,r_true,r_sub,r_lin,r_adagrad
10000,0.25,0.75,20.0,0.999,600.0
10000,0.5,0.41,2.04,0.99,60.0
10000,0.75,0.25,0.2,0.904,6.0
"""

ZIPF = """rank,token,freq
1,17,0.2
2,3,0.1
3,8,0.066
4,11,0.05
"""


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


@pytest.mark.parametrize(
    "module,csv_text",
    [
        (loss_vs_tau, GD_CURVE),
        (stepsize_ratio, STEPSIZE),
        (time_to_eps_loglog, TIME_TO_EPS),
        (baseline_compare, BASELINES),
        (zipf_fit, ZIPF),
    ],
)
def test_renders_svg_and_png(tmp_path, module, csv_text):
    src = write(tmp_path, "in.csv", csv_text)
    for ext in ("svg", "png"):
        out = tmp_path / f"fig.{ext}"
        assert module.main(["--in", src, "--out", str(out)]) == 0
        assert out.stat().st_size > 0


def test_time_to_eps_slope_annotation(tmp_path):
    src = write(tmp_path, "in.csv", TIME_TO_EPS)
    fit = write(tmp_path, "fit.csv", FIT)
    out = tmp_path / "fig.svg"
    assert time_to_eps_loglog.main(["--in", src, "--out", str(out), "--fit", fit]) == 0
    assert "slope = 0.510" in out.read_text()


def test_deterministic_output(tmp_path):
    src = write(tmp_path, "in.csv", GD_CURVE)
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    assert loss_vs_tau.main(["--in", src, "--out", str(a)]) == 0
    assert loss_vs_tau.main(["--in", src, "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.parametrize(
    "module",
    [loss_vs_tau, stepsize_ratio, time_to_eps_loglog, baseline_compare, zipf_fit],
)
def test_empty_csv_rejected(tmp_path, module, capsys):
    src = write(tmp_path, "empty.csv", "")
    out = tmp_path / "fig.svg"
    assert module.main(["--in", src, "--out", str(out)]) == 3
    assert "error:" in capsys.readouterr().err
    assert not out.exists()


def test_missing_column_rejected(tmp_path, capsys):
    src = write(tmp_path, "bad.csv", "a,b\n1,2\n")
    out = tmp_path / "fig.svg"
    assert loss_vs_tau.main(["--in", src, "--out", str(out)]) == 3
    assert "missing columns" in capsys.readouterr().err


def test_missing_file_rejected(tmp_path):
    assert zipf_fit.main(["--in", str(tmp_path / "nope.csv"), "--out", str(tmp_path / "f.svg")]) == 3
