"""Special functions used by the asymptotic rate formulas.

Provides log-Gamma, Beta, the Riemann zeta function, the generalized
exponential integral E_p(x) = integral of exp(-x*u) * u^(-p) over u in
[1, inf), its inverse in x, and the principal branch of the Lambert W
function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import scipy.integrate
import scipy.special

from .errors import DomainError

__all__ = [
    "SpecFunTolerance",
    "ln_gamma",
    "beta",
    "zeta",
    "gen_exp_integral",
    "gen_exp_integral_inverse",
    "lambert_w",
]


@dataclass(frozen=True)
class SpecFunTolerance:
    """Accuracy targets for iterative routines.

    abs_tol: absolute error target.
    max_iter: iteration cap for root-finding loops.
    """

    abs_tol: float = 1e-10
    max_iter: int = 200

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise DomainError(f"abs_tol must be positive, got {self.abs_tol}")
        if self.max_iter < 1:
            raise DomainError(f"max_iter must be >= 1, got {self.max_iter}")


DEFAULT_TOL = SpecFunTolerance()


def ln_gamma(x: float) -> float:
    """Natural log of the Gamma function for x > 0."""
    if not x > 0:
        raise DomainError(f"ln_gamma requires x > 0, got {x}")
    return float(scipy.special.gammaln(x))


def beta(a: float, b: float) -> float:
    """Beta function B(a, b) for a, b > 0, via log-Gamma."""
    if not (a > 0 and b > 0):
        raise DomainError(f"beta requires positive arguments, got ({a}, {b})")
    return math.exp(ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b))


def zeta(s: float) -> float:
    """Riemann zeta function, sum of k^(-s), for s > 1."""
    if not s > 1:
        raise DomainError(f"zeta diverges for s <= 1, got {s}")
    return float(scipy.special.zeta(s))


def _quad_low_order(q: float, x: float) -> float:
    """E_q(x) for order q in (0, 1), where the v ~ 1 region dominates."""

    def integrand(v):
        return math.exp(-v) * (1.0 + v / x) ** (-q)

    head, _ = scipy.integrate.quad(
        integrand, 0.0, 1.0, points=[min(x, 1.0)], epsabs=1e-13, epsrel=1e-12, limit=200
    )
    tail, _ = scipy.integrate.quad(
        integrand, 1.0, math.inf, epsabs=1e-13, epsrel=1e-12, limit=200
    )
    return math.exp(-x) / x * (head + tail)


def gen_exp_integral(p: float, x: float, tol: SpecFunTolerance = DEFAULT_TOL) -> float:
    """Generalized exponential integral E_p(x) for p >= 1, x > 0.

    Computed by adaptive quadrature after the substitution u = 1 + v/x,
    which turns the integral into exp(-x)/x * integral of
    exp(-v) * (1 + v/x)^(-p) over v in [0, inf). The substitution keeps
    the integrand well-scaled across x from 1e-3 up to 50.
    """
    if not p >= 1:
        raise DomainError(f"gen_exp_integral requires p >= 1, got {p}")
    if not x > 0:
        raise DomainError(f"gen_exp_integral requires x > 0, got {x}")

    def integrand(v):
        return math.exp(-v) * (1.0 + v / x) ** (-p)

    if p > 1.0 and x < 0.01:
        # The substitution loses the v ~ x structure when x is tiny and the
        # integrand decays like (x/v)^p. Climb the stable forward recurrence
        # E_{q+1}(x) = (e^{-x} - x*E_q(x))/q from an order in (0, 1] where
        # the quadrature is dominated by the well-resolved v ~ 1 region.
        q = p - math.ceil(p - 1.0)
        val = gen_exp_integral(1.0, x, tol) if q == 1.0 else _quad_low_order(q, x)
        while q < p - 0.5:
            val = (math.exp(-x) - x * val) / q
            q += 1.0
        return val

    if x < 1.0:
        # The integrand transitions on the scale v ~ x; give the adaptive
        # routine an explicit breakpoint there so tiny x stays accurate.
        head, _ = scipy.integrate.quad(
            integrand, 0.0, 1.0, points=[x], epsabs=1e-13, epsrel=1e-12, limit=200
        )
        tail, _ = scipy.integrate.quad(
            integrand, 1.0, math.inf, epsabs=1e-13, epsrel=1e-12, limit=200
        )
        val = head + tail
    else:
        val, _ = scipy.integrate.quad(
            integrand, 0.0, math.inf, epsabs=1e-13, epsrel=1e-12, limit=200
        )
    return math.exp(-x) / x * val


def gen_exp_integral_inverse(
    p: float, y: float, tol: SpecFunTolerance = DEFAULT_TOL
) -> float:
    """Solve E_p(x) = y for x > 0 by bisection.

    E_p is strictly decreasing in x, from 1/(p-1) at x -> 0 (infinite for
    p = 1) down to 0, so any y in that range has a unique preimage.
    """
    if not p >= 1:
        raise DomainError(f"gen_exp_integral_inverse requires p >= 1, got {p}")
    if not y > 0:
        raise DomainError(f"target value must be positive, got {y}")
    if p > 1 and y >= 1.0 / (p - 1.0):
        raise DomainError(
            f"target {y} is at or above the supremum 1/(p-1) = {1.0 / (p - 1.0)} of E_p"
        )

    # Expand a bracket [lo, hi] with E_p(lo) > y > E_p(hi).
    lo, hi = 1e-12, 1.0
    for _ in range(tol.max_iter):
        if gen_exp_integral(p, hi) < y:
            break
        hi *= 2.0
    else:
        raise DomainError(f"could not bracket inverse for y={y}")
    if gen_exp_integral(p, lo) <= y:
        raise DomainError(f"target {y} above attainable range of E_{p}")

    x = 0.5 * (lo + hi)
    for _ in range(tol.max_iter):
        x = 0.5 * (lo + hi)
        fx = gen_exp_integral(p, x)
        if abs(fx - y) <= tol.abs_tol and (hi - lo) <= 1e-12 * max(1.0, x):
            break
        if fx > y:
            lo = x
        else:
            hi = x
    return x


def lambert_w(y: float, tol: SpecFunTolerance = DEFAULT_TOL) -> float:
    """Principal branch of the Lambert W function for y >= 0.

    Newton iteration on w*exp(w) = y, started from log(1 + y).
    """
    if y < 0:
        raise DomainError(f"lambert_w requires y >= 0, got {y}")
    if y == 0:
        return 0.0
    w = math.log1p(y)
    for _ in range(tol.max_iter):
        ew = math.exp(w)
        step = (w * ew - y) / (ew * (1.0 + w))
        w -= step
        if abs(step) <= 1e-15 * (1.0 + abs(w)):
            break
    return w
