"""Worst-case and related-work comparison rates at alpha = 1.

Classical convergence guarantees applied to the Zipf bigram quadratic:
the smooth-convex sublinear rate, the strongly-convex linear rate, the
AdaGrad trace bound, the Adam condition-number bound, and the scaling of
the gradient 1-norm along the sign-descent trajectory. Everything is a
closed-form evaluation; none of these iterate.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DomainError
from .powerlaw import harmonic_partial

__all__ = [
    "BaselineKind",
    "BaselineCurve",
    "worst_case_rates",
    "adagrad_bound",
    "adam_kappa",
    "sd_grad_one_norm_ratio",
]


class BaselineKind(enum.Enum):
    SUBLINEAR = "sublinear"
    LINEAR = "linear"
    ADAGRAD_BOUND = "adagrad_bound"
    ADAM_KAPPA = "adam_kappa"
    SD_GRAD_ONE_NORM = "sd_grad_one_norm"


@dataclass(frozen=True)
class BaselineCurve:
    kind: BaselineKind
    d: int
    points: list[tuple[float, float]]


def worst_case_rates(d: int, t: int) -> tuple[float, float]:
    """Sublinear and linear worst-case normalized rates at step t.

    The smooth-convex O(1/t) guarantee gives r_sub = 2d/(H_{d,1}*t) and
    the strongly-convex geometric guarantee gives r_lin = (1-1/d)^t,
    using curvature bounds mu = 1/(d*z), L = 1/z and squared initial
    radius d times the initial excess loss.
    """
    if d < 2:
        raise DomainError(f"d must be >= 2, got {d}")
    if t < 1:
        raise DomainError(f"t must be >= 1, got {t}")
    h1 = harmonic_partial(d, 1.0)
    r_sub = 2.0 * d / (h1 * t)
    r_lin = math.exp(t * math.log1p(-1.0 / d))
    return r_sub, r_lin


def adagrad_bound(d: int, T: int) -> float:
    """AdaGrad trace bound on the normalized loss after T steps.

    Exact finite-d value d*H_{d,1}/(T*H_{d,2}); behaves like
    6*d*log(d)/(pi^2*T) for large d.
    """
    if d < 2:
        raise DomainError(f"d must be >= 2, got {d}")
    if T < 1:
        raise DomainError(f"T must be >= 1, got {T}")
    return d * harmonic_partial(d, 1.0) / (T * harmonic_partial(d, 2.0))


def adam_kappa(d: int) -> int:
    """Condition-number bound for the Adam-style preconditioner.

    min(d^2 + 1, d) = d for every d >= 1: the bound never improves on
    plain gradient descent here.
    """
    if d < 1:
        raise DomainError(f"d must be >= 1, got {d}")
    return min(d * d + 1, d)


def sd_grad_one_norm_ratio(d: int, tau: float, phi: float) -> float:
    """Normalized gradient 1-norm along the sign-descent trajectory.

    At t = tau*sqrt(d)/2 steps with step-size 1/(z*t*phi), coordinates
    up to floor(phi) are still decreasing and contribute pi_k - t*eta
    each, while the rest oscillate and contribute eta/2; the total is
    normalized by the 1-norm at initialization. Scales as
    C*sqrt(d)/(log(d)*tau) with C between 1/2 and 1.
    """
    if d < 2:
        raise DomainError(f"d must be >= 2, got {d}")
    if not tau > 2:
        raise DomainError(f"tau must exceed 2, got {tau}")
    if not 1.0 < phi < 2.0:
        raise DomainError(f"phi must be in (1, 2), got {phi}")
    t = 0.5 * tau * math.sqrt(d)
    h1 = harmonic_partial(d, 1.0)
    kstar = math.floor(phi)
    decreasing = sum(1.0 / k - 1.0 / phi for k in range(1, kstar + 1))
    oscillating = (d - kstar) / (2.0 * t * phi)
    return (decreasing + oscillating) / h1
