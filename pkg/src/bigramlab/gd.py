"""Gradient-descent dynamics on the power-law bigram quadratic.

Everything here is closed-form: the exact O(d) relative loss after t
steps, its integral relaxation with an approximation-error certificate,
the asymptotic rates in the three exponent regimes, and the inversions
that give the number of steps needed to reach a target relative error.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
import scipy.integrate

from .errors import DomainError
from .powerlaw import FullEigenSystem, PowerLawSpec
from .specfun import beta, gen_exp_integral, gen_exp_integral_inverse, lambert_w, ln_gamma, zeta

__all__ = [
    "Algorithm",
    "TimeSemantics",
    "RateCurve",
    "GDRegime",
    "gd_regime",
    "gd_relative_loss",
    "gd_full_simulation",
    "gd_integral_form",
    "gd_approx_error_bound",
    "gd_asymptotic_rate",
    "gd_time_scaling",
    "gd_time_to_eps",
    "gd_time_bounds_alpha_lt_1",
]


class Algorithm(enum.Enum):
    GD = "gd"
    SD = "sd"


class TimeSemantics(enum.Enum):
    RAW_STEPS = "raw"
    RESCALED_TAU = "tau"


@dataclass(frozen=True)
class RateCurve:
    """A sequence of (time coordinate, relative loss) points.

    alpha is None for curves computed from empirical corpus statistics,
    which have no single power-law exponent.
    """

    algorithm: Algorithm
    d: int
    alpha: float | None
    points: list[tuple[float, float]]
    time_semantics: TimeSemantics


class GDRegime(enum.Enum):
    ALPHA_BELOW_ONE = "alpha<1"
    ALPHA_EQUALS_ONE = "alpha=1"
    ALPHA_ABOVE_ONE = "alpha>1"


def gd_regime(alpha: float) -> GDRegime:
    if alpha < 1:
        return GDRegime.ALPHA_BELOW_ONE
    if alpha == 1:
        return GDRegime.ALPHA_EQUALS_ONE
    return GDRegime.ALPHA_ABOVE_ONE


def _decay_sum(d: int, alpha: float, exponent: float) -> float:
    """Sum over k = 1..d of k^(-alpha) * (1 - k^(-alpha))^exponent.

    Powers go through logs so the sum stays accurate for exponents up to
    1e9; the k = 1 term is identically zero for any positive exponent.
    """
    if exponent == 0:
        k = np.arange(1, d + 1, dtype=np.float64)
        return float(np.sum(k**-alpha))
    k = np.arange(2, d + 1, dtype=np.float64)
    log_freq = -alpha * np.log(k)
    return float(np.sum(np.exp(log_freq + exponent * np.log1p(-np.exp(log_freq)))))


def gd_relative_loss(spec: PowerLawSpec, t: float) -> float:
    """Exact normalized loss after t gradient steps with step-size 1/pi_1.

    The normalized loss collapses to a single d-term sum with per-rank
    decay (1 - k^(-alpha))^(2t); the top-rank component is annihilated
    after the first step. O(d) time, no dense allocation.
    """
    if t < 0:
        raise DomainError(f"t must be nonnegative, got {t}")
    if t == 0:
        return 1.0
    return _decay_sum(spec.d, spec.alpha, 2.0 * t) / spec.z


def gd_full_simulation(
    system: FullEigenSystem, eta: float, t_max: int
) -> RateCurve:
    """Normalized loss trajectory on the dense eigen grid, t = 0..t_max.

    Uses the per-component closed form lambda * (1 - eta*lambda)^(2t)
    * delta0^2 rather than iterative updates.
    """
    if t_max < 0:
        raise DomainError(f"t_max must be nonnegative, got {t_max}")
    weights = system.lambdas * system.deltas0**2
    factors = 1.0 - eta * system.lambdas
    loss0 = float(np.sum(weights))
    points = []
    for t in range(t_max + 1):
        if t == 0:
            points.append((0.0, 1.0))
            continue
        decay = np.where(factors != 0.0, np.abs(factors), 0.0)
        with np.errstate(divide="ignore"):
            log_decay = np.where(decay > 0.0, np.log(decay), -np.inf)
        loss_t = float(np.sum(weights * np.exp(2.0 * t * log_decay)))
        points.append((float(t), loss_t / loss0))
    return RateCurve(
        algorithm=Algorithm.GD,
        d=system.d,
        alpha=system.alpha,
        points=points,
        time_semantics=TimeSemantics.RAW_STEPS,
    )


def gd_integral_form(d: int, alpha: float, t: float) -> float:
    """Quadrature of the integral relaxation of the decay sum.

    Integrates k^(-alpha) * (1 - k^(-alpha))^t over k in [1, d] after
    the substitution k = exp(u), which smooths the integrand; the
    integration is split at the peak of the integrand. Note the
    exponent here is t: callers comparing against the loss after t
    steps must pass 2t.
    """
    if d < 2:
        raise DomainError(f"d must be >= 2, got {d}")
    if t < 0:
        raise DomainError(f"t must be nonnegative, got {t}")

    def integrand(u):
        lf = -alpha * u
        if lf >= 0.0:
            return 0.0
        return math.exp((1.0 - alpha) * u + t * math.log1p(-math.exp(lf)))

    u_max = math.log(d)
    u_peak = math.log1p(t) / alpha
    pieces = [0.0, u_max]
    if 0.0 < u_peak < u_max:
        pieces = [0.0, u_peak, u_max]
    total = 0.0
    for a, b in zip(pieces[:-1], pieces[1:]):
        val, _ = scipy.integrate.quad(integrand, a, b, epsabs=0.0, epsrel=1e-10, limit=500)
        total += val
    return total


def gd_approx_error_bound(d: int, alpha: float, t: float) -> float:
    """Certified bound on |sum - integral| for the decay sum.

    Equals the peak value of the summand: (1/(1+t))*(1-1/(1+t))^t while
    the peak is interior (1 + t <= d^alpha), and the endpoint value
    (1/d^alpha)*(1-1/d^alpha)^t once the summand is increasing on the
    whole range.
    """
    if d < 2:
        raise DomainError(f"d must be >= 2, got {d}")
    if t < 0:
        raise DomainError(f"t must be nonnegative, got {t}")
    da = float(d) ** alpha
    if 1.0 + t <= da:
        x = 1.0 / (1.0 + t)
    else:
        x = 1.0 / da
    if t == 0:
        return x
    return x * math.exp(t * math.log1p(-x))


def gd_asymptotic_rate(alpha: float, tau: float) -> float:
    """Limiting relative loss at rescaled time tau as d grows.

    Below alpha = 1 the limit is (1-alpha)/alpha * E_{1/alpha}(tau); at
    alpha = 1 it is 1 - tau on tau in [0, 1]; above alpha = 1 no time
    rescaling is needed and tau is the raw step count t, with rate
    B(1 - 1/alpha, 1 + 2t) / (alpha * zeta(alpha)).
    """
    if alpha < 1:
        if tau < 0:
            raise DomainError(f"tau must be nonnegative, got {tau}")
        if tau == 0:
            return 1.0
        return (1.0 - alpha) / alpha * gen_exp_integral(1.0 / alpha, tau)
    if alpha == 1:
        if not 0.0 <= tau <= 1.0:
            raise DomainError(f"tau must be in [0, 1] at alpha = 1, got {tau}")
        return 1.0 - tau
    t = tau
    if t < 0:
        raise DomainError(f"t must be nonnegative, got {t}")
    return beta(1.0 - 1.0 / alpha, 1.0 + 2.0 * t) / (alpha * zeta(alpha))


def gd_time_scaling(alpha: float, d: int, tau: float) -> float:
    """Raw step count for rescaled time tau: tau*d^alpha/2, d^tau/2, or tau."""
    if alpha < 1:
        return 0.5 * tau * float(d) ** alpha
    if alpha == 1:
        if not 0.0 <= tau <= 1.0:
            raise DomainError(f"tau must be in [0, 1] at alpha = 1, got {tau}")
        return 0.5 * float(d) ** tau
    return tau


def gd_time_to_eps(alpha: float, d: int, eps: float) -> float:
    """Predicted step count for gradient descent to reach relative loss eps."""
    if not 0.0 < eps < 1.0:
        raise DomainError(f"eps must be in (0, 1), got {eps}")
    if alpha < 1:
        tau = gen_exp_integral_inverse(1.0 / alpha, alpha / (1.0 - alpha) * eps)
        return 0.5 * tau * float(d) ** alpha
    if alpha == 1:
        return float(d) ** (1.0 - eps)
    c = math.exp(ln_gamma(1.0 - 1.0 / alpha)) / (alpha * zeta(alpha))
    return (c / eps) ** (alpha / (alpha - 1.0))


def gd_time_bounds_alpha_lt_1(alpha: float, eps: float) -> tuple[float, float, float]:
    """Log-order bracket for the rescaled time to reach eps when alpha < 1.

    Returns (tau_minus, tau_plus, eps_threshold) with
    tau_plus = log((1-alpha)/(alpha*eps)) and
    tau_minus = tau_plus - log(log((1-alpha)/(alpha*eps))) - ceil(1/alpha).
    The bracket is only guaranteed for eps at or below the returned
    threshold, min(e^(2 - floor(1/alpha)), W(6)/6) * (1-alpha)/alpha.
    """
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must be in (0, 1), got {alpha}")
    if not eps > 0:
        raise DomainError(f"eps must be positive, got {eps}")
    y = (1.0 - alpha) / (alpha * eps)
    tau_plus = math.log(y)
    tau_minus = tau_plus - math.log(math.log(y)) - math.ceil(1.0 / alpha)
    eps_threshold = (
        min(math.exp(2.0 - math.floor(1.0 / alpha)), lambert_w(6.0) / 6.0)
        * (1.0 - alpha)
        / alpha
    )
    return tau_minus, tau_plus, eps_threshold
