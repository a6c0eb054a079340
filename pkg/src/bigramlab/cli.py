"""Experiment runner: reproduces the scaling-law figures' data as CSV.

Each subcommand evaluates one family of curves over a (d, tau) or
(d, eps) grid and writes comma-separated rows with a header; --json
mirrors the CSV with a metadata envelope. All output is deterministic
given the flags.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import __version__
from .baselines import adagrad_bound, worst_case_rates
from .corpus import (
    count_bigrams,
    optimize_sd_step,
    read_counts,
    read_token_stream,
    real_gd_curve,
    real_sd_loss,
    stats_from_counts,
    write_counts,
    zipf_fit_check,
)
from .errors import ConfigError, DomainError, FormatError
from .gd import gd_asymptotic_rate, gd_relative_loss, gd_time_scaling, gd_time_to_eps
from .powerlaw import PowerLawSpec
from .sd import (
    sd_asymptotic_rate,
    sd_grid_search_phi,
    sd_scaling,
    sd_simplified_relative_loss,
    sd_time_to_eps,
)

__all__ = [
    "ScalingFit",
    "ExperimentConfig",
    "run_gd_curves",
    "run_sd_curves",
    "run_stepsize_convergence",
    "run_time_to_eps",
    "run_real_data",
    "run_baselines",
    "fit_power_law",
    "measure_gd_time_to_eps",
    "measure_sd_time_to_eps",
    "main",
]


@dataclass(frozen=True)
class ScalingFit:
    """Least-squares fit of log t = log c + beta * log d."""

    coefficient_c: float
    exponent_beta: float
    residual_rms: float
    n_points: int


@dataclass(frozen=True)
class ExperimentConfig:
    alpha: float
    d_list: tuple[int, ...]
    tau_grid: tuple[float, ...] = ()
    eps_grid: tuple[float, ...] = ()
    algorithm: str = "gd"
    seed: int = 0
    threads: int = 1

    def __post_init__(self):
        if not self.d_list:
            raise ConfigError("at least one --d value is required")
        if any(d < 1 for d in self.d_list):
            raise ConfigError(f"d values must be positive, got {self.d_list}")
        if not self.alpha > 0:
            raise ConfigError(f"alpha must be positive, got {self.alpha}")
        if self.algorithm not in ("gd", "sd"):
            raise ConfigError(f"algorithm must be gd or sd, got {self.algorithm}")
        if self.threads < 1:
            raise ConfigError(f"threads must be >= 1, got {self.threads}")


def _map_grid(fn, items, threads: int):
    """Apply fn over grid items, in order, optionally on a thread pool."""
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def fit_power_law(d_values, t_values) -> ScalingFit:
    """Fit t = c * d^beta by least squares in log-log space."""
    d_values = np.asarray(d_values, dtype=np.float64)
    t_values = np.asarray(t_values, dtype=np.float64)
    if d_values.size < 2:
        raise ConfigError(f"need at least 2 points to fit, got {d_values.size}")
    if np.any(d_values <= 0) or np.any(t_values <= 0):
        raise DomainError("power-law fit requires positive d and t")
    x, y = np.log(d_values), np.log(t_values)
    beta_hat, log_c = np.polyfit(x, y, 1)
    resid = y - (log_c + beta_hat * x)
    return ScalingFit(
        coefficient_c=float(math.exp(log_c)),
        exponent_beta=float(beta_hat),
        residual_rms=float(np.sqrt(np.mean(resid**2))),
        n_points=int(d_values.size),
    )


# --- Measured time-to-eps ---------------------------------------------------


def measure_gd_time_to_eps(spec: PowerLawSpec, eps: float, tol: float = 1e-6) -> float:
    """Steps for the finite-d gradient-descent curve to reach relative loss eps.

    The curve is strictly decreasing in t, so bisection on (real-valued)
    t converges; returns t with |r(t) - eps| <= tol.
    """
    if not 0.0 < eps < 1.0:
        raise DomainError(f"eps must be in (0, 1), got {eps}")
    lo, hi = 0.0, 1.0
    while gd_relative_loss(spec, hi) > eps:
        lo, hi = hi, 2.0 * hi
        if hi > 1e15:
            raise DomainError(f"eps = {eps} unreachable within 1e15 steps at d = {spec.d}")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        r = gd_relative_loss(spec, mid)
        if abs(r - eps) <= tol:
            return mid
        if r > eps:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def measure_sd_time_to_eps(spec: PowerLawSpec, eps: float) -> int:
    """Smallest even step budget T whose best grid-searched phi reaches eps.

    The best achievable simplified loss is nonincreasing in T, so
    bisection over even T applies; each probe re-optimizes phi on the
    standard grid.
    """
    if not 0.0 < eps < 1.0:
        raise DomainError(f"eps must be in (0, 1), got {eps}")

    def best_loss(T: int) -> float:
        return sd_grid_search_phi(spec, T)[1]

    lo, hi = 0, 2
    while best_loss(hi) > eps:
        lo, hi = hi, 2 * hi
        if hi > 10**12:
            raise DomainError(f"eps = {eps} unreachable within 1e12 steps at d = {spec.d}")
    while hi - lo > 2:
        mid = 2 * ((lo + hi) // 4)
        if best_loss(mid) > eps:
            lo = mid
        else:
            hi = mid
    return hi


# --- Subcommand row generators ---------------------------------------------


def run_gd_curves(config: ExperimentConfig) -> tuple[list[str], list[list]]:
    if not config.tau_grid:
        raise ConfigError("gd-curve requires a nonempty --tau-grid")
    grid = [(d, tau) for d in config.d_list for tau in config.tau_grid]

    def one(point):
        d, tau = point
        spec = PowerLawSpec(d=d, alpha=config.alpha)
        t = math.floor(gd_time_scaling(config.alpha, d, tau))
        r_fin = gd_relative_loss(spec, t)
        r_asym = gd_asymptotic_rate(config.alpha, tau)
        return [config.alpha, d, t, tau, r_fin, r_asym]

    rows = _map_grid(one, grid, config.threads)
    return ["alpha", "d", "t", "tau", "r_finite", "r_asymptotic"], rows


def run_sd_curves(config: ExperimentConfig) -> tuple[list[str], list[list]]:
    if not config.tau_grid:
        raise ConfigError("sd-curve requires a nonempty --tau-grid")
    grid = [(d, tau) for d in config.d_list for tau in config.tau_grid]

    def one(point):
        d, tau = point
        spec = PowerLawSpec(d=d, alpha=config.alpha)
        T, phi = sd_scaling(config.alpha, d, tau)
        r_fin = sd_simplified_relative_loss(spec, T, phi)
        r_asym = sd_asymptotic_rate(config.alpha, tau)
        return [config.alpha, d, tau, T, phi, r_fin, r_asym]

    rows = _map_grid(one, grid, config.threads)
    return ["alpha", "d", "tau", "T", "phi", "r_finite", "r_asymptotic"], rows


def run_stepsize_convergence(config: ExperimentConfig) -> tuple[list[str], list[list]]:
    if not config.tau_grid:
        raise ConfigError("sd-stepsize requires a nonempty --tau-grid")
    grid = [(d, tau) for d in config.d_list for tau in config.tau_grid]

    def one(point):
        d, tau = point
        spec = PowerLawSpec(d=d, alpha=config.alpha)
        T, phi_pred = sd_scaling(config.alpha, d, tau)
        phi_best, _ = sd_grid_search_phi(spec, T)
        return [config.alpha, d, tau, phi_best, phi_pred, phi_best / phi_pred]

    rows = _map_grid(one, grid, config.threads)
    return ["alpha", "d", "tau", "phi_grid_best", "phi_predicted", "ratio"], rows


def run_time_to_eps(config: ExperimentConfig) -> tuple[list[str], list[list], list[ScalingFit]]:
    if not config.eps_grid:
        raise ConfigError("time-to-eps requires a nonempty --eps-grid")
    if any(not 0.0 < e < 1.0 for e in config.eps_grid):
        raise ConfigError(f"eps values must be in (0, 1), got {config.eps_grid}")
    grid = [(d, eps) for eps in config.eps_grid for d in config.d_list]

    def one(point):
        d, eps = point
        spec = PowerLawSpec(d=d, alpha=config.alpha)
        if config.algorithm == "gd":
            t_meas = measure_gd_time_to_eps(spec, eps)
            t_pred = gd_time_to_eps(config.alpha, d, eps)
        else:
            t_meas = float(measure_sd_time_to_eps(spec, eps))
            t_pred = sd_time_to_eps(config.alpha, d, eps)
        return [config.algorithm, config.alpha, d, eps, t_meas, t_pred]

    rows = _map_grid(one, grid, config.threads)
    fits = []
    for eps in config.eps_grid:
        sub = [r for r in rows if r[3] == eps]
        fits.append(fit_power_law([r[2] for r in sub], [r[4] for r in sub]))
    return ["algo", "alpha", "d", "eps", "t_measured", "t_predicted"], rows, fits


def run_real_data(stats, algorithm: str, tau_grid) -> tuple[list[str], list[list]]:
    """Loss curve on empirical statistics with the Zipf asymptote attached.

    Time points come from the alpha = 1 rescalings at the empirical
    vocabulary size: t = d^tau / 2 for gradient descent and even
    T near tau * sqrt(d) / 2 for sign descent with a tuned step-size.
    """
    if not tau_grid:
        raise ConfigError("real-curve requires a nonempty --tau-grid")
    d = stats.d
    rows = []
    if algorithm == "gd":
        times = [math.floor(0.5 * d**tau) for tau in tau_grid]
        curve = real_gd_curve(stats, times)
        for tau, (t, r) in zip(tau_grid, curve.points):
            rows.append([d, "gd", t, tau, r, gd_asymptotic_rate(1.0, min(max(tau, 0.0), 1.0))])
    else:
        for tau in tau_grid:
            T = max(2, 2 * round(0.25 * tau * math.sqrt(d)))
            eta, r = optimize_sd_step(stats, T)
            rows.append([d, "sd", T, tau, r, sd_asymptotic_rate(1.0, tau)])
    return ["d", "algorithm", "t", "tau", "r", "r_asymptotic"], rows


def run_baselines(config: ExperimentConfig) -> tuple[list[str], list[list]]:
    if config.alpha != 1.0:
        raise ConfigError(f"baselines are defined at alpha = 1 only, got {config.alpha}")
    if not config.tau_grid:
        raise ConfigError("baselines requires a nonempty --tau-grid")
    rows = []
    for d in config.d_list:
        spec = PowerLawSpec(d=d, alpha=1.0)
        for tau in config.tau_grid:
            t = max(1, round(d**tau))
            r_true = gd_relative_loss(spec, t)
            r_sub, r_lin = worst_case_rates(d, t)
            rows.append([d, tau, r_true, r_sub, r_lin, adagrad_bound(d, t)])
    return ["d", "tau", "r_true", "r_sub", "r_lin", "r_adagrad"], rows


# --- Serialization ----------------------------------------------------------


def _format_cell(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _emit(args, header: list[str], rows: list[list], extra: dict | None = None) -> None:
    """Write CSV to --out (or stdout); --json mirrors it with metadata."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_format_cell(v) for v in row])
    text = buf.getvalue()
    out = getattr(args, "out", None)
    if out:
        try:
            with open(out, "w", encoding="ascii", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            raise FormatError(f"cannot write {out}: {exc}")
    else:
        sys.stdout.write(text)
    if getattr(args, "json", False):
        payload = {
            "config": {k: v for k, v in vars(args).items() if k != "func"},
            "versions": {
                "bigramlab": __version__,
                "numpy": np.__version__,
            },
            "columns": header,
            "rows": rows,
        }
        if extra:
            payload.update(extra)
        blob = json.dumps(payload, indent=2, default=str) + "\n"
        if out:
            json_path = str(out).rsplit(".", 1)[0] + ".json"
            with open(json_path, "w", encoding="ascii") as fh:
                fh.write(blob)
        else:
            sys.stdout.write(blob)


def _config_from_args(args, need: str) -> ExperimentConfig:
    return ExperimentConfig(
        alpha=args.alpha,
        d_list=tuple(args.d or ()),
        tau_grid=tuple(args.tau_grid or ()) if need != "eps" else (),
        eps_grid=tuple(args.eps_grid or ()) if need == "eps" else (),
        algorithm=getattr(args, "algo", "gd"),
        seed=args.seed,
        threads=args.threads,
    )


# --- Subcommand entry points ------------------------------------------------


def _cmd_gd_curve(args):
    header, rows = run_gd_curves(_config_from_args(args, "tau"))
    _emit(args, header, rows)


def _cmd_sd_curve(args):
    header, rows = run_sd_curves(_config_from_args(args, "tau"))
    _emit(args, header, rows)


def _cmd_sd_stepsize(args):
    header, rows = run_stepsize_convergence(_config_from_args(args, "tau"))
    _emit(args, header, rows)


def _cmd_time_to_eps(args):
    header, rows, fits = run_time_to_eps(_config_from_args(args, "eps"))
    fit_rows = [
        {
            "eps": eps,
            "coefficient_c": f.coefficient_c,
            "exponent_beta": f.exponent_beta,
            "residual_rms": f.residual_rms,
            "n_points": f.n_points,
        }
        for eps, f in zip(args.eps_grid, fits)
    ]
    _emit(args, header, rows, extra={"fits": fit_rows})


def _cmd_fit(args):
    try:
        with open(args.csv, "r", encoding="ascii", newline="") as fh:
            reader = csv.DictReader(fh)
            rows = list(reader)
    except OSError as exc:
        raise FormatError(f"cannot read {args.csv}: {exc}")
    if not rows:
        raise FormatError(f"{args.csv}: no data rows")
    for col in ("d", "eps", "t_measured"):
        if col not in rows[0]:
            raise FormatError(f"{args.csv}: missing column {col!r}")
    eps_values = sorted({float(r["eps"]) for r in rows})
    out_rows = []
    for eps in eps_values:
        sub = [r for r in rows if float(r["eps"]) == eps]
        fit = fit_power_law(
            [float(r["d"]) for r in sub], [float(r["t_measured"]) for r in sub]
        )
        out_rows.append(
            [eps, fit.coefficient_c, fit.exponent_beta, fit.residual_rms, fit.n_points]
        )
    _emit(args, ["eps", "coefficient_c", "exponent_beta", "residual_rms", "n_points"], out_rows)


def _cmd_bigram_count(args):
    try:
        tokens = read_token_stream(args.tokens)
    except OSError as exc:
        raise FormatError(f"cannot read {args.tokens}: {exc}")
    counts = count_bigrams(tokens, vocab_size=args.vocab)
    write_counts(args.counts, counts)
    _emit(
        args,
        ["vocab_size", "total_tokens", "distinct_tokens", "distinct_bigrams"],
        [[
            counts.vocab_size,
            counts.total_tokens,
            len(counts.unigram),
            sum(len(r) for r in counts.bigram_rows.values()),
        ]],
    )


def _cmd_bigram_stats(args):
    stats = stats_from_counts(read_counts(args.counts))
    uni_slope, (q25, q50, q75) = zipf_fit_check(stats)
    header = ["rank", "token", "freq"]
    rows = [
        [k + 1, int(stats.token_of_rank[k]), float(stats.pi[k])] for k in range(stats.d)
    ]
    _emit(
        args,
        header,
        rows,
        extra={
            "summary": {
                "d": stats.d,
                "unigram_slope": uni_slope,
                "row_slope_quartiles": [q25, q50, q75],
            }
        },
    )


def _cmd_real_curve(args):
    stats = stats_from_counts(read_counts(args.counts))
    header, rows = run_real_data(stats, args.algo, tuple(args.tau_grid or ()))
    _emit(args, header, rows)


def _cmd_baselines(args):
    header, rows = run_baselines(_config_from_args(args, "tau"))
    _emit(args, header, rows)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bigramlab",
        description="Scaling-law experiments for gradient and sign descent on power-law bigram models.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, tau=False, eps=False, alpha=True, ds=True):
        if alpha:
            p.add_argument("--alpha", type=float, default=1.0, help="power-law exponent")
        if ds:
            p.add_argument("--d", type=int, action="append", help="vocabulary size (repeatable)")
        if tau:
            p.add_argument("--tau-grid", type=float, nargs="+", help="rescaled time grid")
        if eps:
            p.add_argument("--eps-grid", type=float, nargs="+", help="target relative losses")
        p.add_argument("--out", help="output CSV path (default: stdout)")
        p.add_argument("--json", action="store_true", help="also emit a JSON mirror")
        p.add_argument("--threads", type=int, default=1, help="worker threads")
        p.add_argument("--seed", type=int, default=0, help="seed for randomized checks")

    p = sub.add_parser("gd-curve", help="gradient-descent loss curves vs the asymptote")
    common(p, tau=True)
    p.set_defaults(func=_cmd_gd_curve)

    p = sub.add_parser("sd-curve", help="sign-descent loss curves vs the asymptote")
    common(p, tau=True)
    p.set_defaults(func=_cmd_sd_curve)

    p = sub.add_parser("sd-stepsize", help="grid-searched vs predicted step-size shape")
    common(p, tau=True)
    p.set_defaults(func=_cmd_sd_stepsize)

    p = sub.add_parser("time-to-eps", help="measured and predicted steps to reach eps")
    common(p, eps=True)
    p.add_argument("--algo", choices=("gd", "sd"), default="gd")
    p.set_defaults(func=_cmd_time_to_eps)

    p = sub.add_parser("fit", help="fit t = c*d^beta from a time-to-eps CSV")
    p.add_argument("csv", help="CSV with columns d, eps, t_measured")
    p.add_argument("--out", help="output CSV path (default: stdout)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_fit)

    p = sub.add_parser("bigram-count", help="count bigrams from a token-id stream")
    common(p, alpha=False, ds=False)
    p.add_argument("--tokens", required=True, help="token stream (.txt or raw u32)")
    p.add_argument("--vocab", type=int, required=True, help="vocabulary size")
    p.add_argument("--counts", required=True, help="output counts file")
    p.set_defaults(func=_cmd_bigram_count)

    p = sub.add_parser("bigram-stats", help="rank-ordered frequencies from counts")
    common(p, alpha=False, ds=False)
    p.add_argument("--counts", required=True, help="counts file")
    p.set_defaults(func=_cmd_bigram_stats)

    p = sub.add_parser("real-curve", help="loss curves on empirical statistics")
    common(p, tau=True, alpha=False, ds=False)
    p.add_argument("--counts", required=True, help="counts file")
    p.add_argument("--algo", choices=("gd", "sd"), default="gd")
    p.set_defaults(func=_cmd_real_curve)

    p = sub.add_parser("baselines", help="worst-case comparison rates at alpha = 1")
    common(p, tau=True)
    p.set_defaults(func=_cmd_baselines)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (FormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
