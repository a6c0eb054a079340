"""Scaling laws of gradient and sign descent on power-law bigram models.

Closed-form loss dynamics, asymptotic rates, step-size scalings,
time-to-epsilon inversions, worst-case baselines, and a real-corpus
evaluation path, plus a CLI that serializes all of it to CSV.
"""

__version__ = "0.1.0"

from .errors import (
    BigramLabError,
    ConfigError,
    DomainError,
    FormatError,
    SizeError,
)
from .powerlaw import (
    ORACLE_CAP,
    FullEigenSystem,
    PowerLawSpec,
    build_full_problem,
    frequencies,
    harmonic_asymptote,
    harmonic_partial,
)
from .gd import (
    Algorithm,
    RateCurve,
    TimeSemantics,
    gd_approx_error_bound,
    gd_asymptotic_rate,
    gd_full_simulation,
    gd_integral_form,
    gd_relative_loss,
    gd_time_scaling,
    gd_time_to_eps,
)
from .sd import (
    SDConfig,
    SDExactState,
    sd_asymptotic_rate,
    sd_exact_distance,
    sd_full_simulation,
    sd_grid_search_phi,
    sd_scaling,
    sd_simplified_distance,
    sd_simplified_relative_loss,
    sd_time_to_eps,
)
from .corpus import (
    BigramCounts,
    BigramStats,
    count_bigrams,
    optimize_sd_step,
    read_counts,
    real_gd_curve,
    real_sd_loss,
    stats_from_counts,
    stats_from_powerlaw,
    write_counts,
    zipf_fit_check,
)
from .baselines import (
    BaselineCurve,
    BaselineKind,
    adagrad_bound,
    adam_kappa,
    sd_grad_one_norm_ratio,
    worst_case_rates,
)
from .specfun import (
    SpecFunTolerance,
    beta,
    gen_exp_integral,
    gen_exp_integral_inverse,
    lambert_w,
    ln_gamma,
    zeta,
)
