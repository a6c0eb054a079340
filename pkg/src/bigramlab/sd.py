"""Sign-descent dynamics on the power-law bigram quadratic.

Sign descent moves every coordinate by a fixed amount eta towards the
solution until the distance drops below eta, after which the coordinate
oscillates. The exact oscillatory trajectory has an O(1) closed form;
the simplified model replaces the oscillation by the constant magnitude
eta/2, which yields an O(d) loss formula. This module provides both,
plus the (T, phi) step-size scalings, the asymptotic rates, the grid
search used to validate them, and the time-to-epsilon inversions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .powerlaw import FullEigenSystem, PowerLawSpec, harmonic_prefix
from .specfun import zeta

__all__ = [
    "SDConfig",
    "SDExactState",
    "SimulationMode",
    "sd_exact_distance",
    "sd_simplified_distance",
    "sd_simplified_relative_loss",
    "sd_full_simulation",
    "sd_scaling",
    "sd_asymptotic_rate",
    "sd_optimal_phi_large_alpha",
    "sd_grid_search_phi",
    "sd_time_to_eps",
    "PHI_GRID_EXPONENTS",
]


def _scaling_constants(alpha: float) -> tuple[float, float]:
    """Constants c1 = 1 - 1/(2*alpha) and c2 = alpha/(1 - alpha)."""
    return 1.0 - 1.0 / (2.0 * alpha), alpha / (1.0 - alpha)


@dataclass(frozen=True)
class SDConfig:
    """A sign-descent run: iteration budget T and step-size shape phi.

    The step-size eta = 1/(z * T * phi^alpha) is derived from the spec;
    phi in [1, d] spans exactly the useful step-size range (all
    coordinates decreasing at phi = d, all but the first oscillating at
    phi = 1).
    """

    spec: PowerLawSpec
    horizon_T: int
    phi: float
    eta: float = field(init=False)

    def __post_init__(self):
        if self.horizon_T < 1:
            raise DomainError(f"horizon_T must be positive, got {self.horizon_T}")
        if not 1.0 <= self.phi <= self.spec.d:
            raise DomainError(
                f"phi must lie in [1, d] = [1, {self.spec.d}], got {self.phi}"
            )
        eta = 1.0 / (self.spec.z * self.horizon_T * self.phi**self.spec.alpha)
        object.__setattr__(self, "eta", eta)


@dataclass(frozen=True)
class SDExactState:
    """Oscillation bookkeeping for one coordinate of exact sign descent."""

    delta0: float
    eta: float
    t_switch: int = field(init=False)
    c: float = field(init=False)

    def __post_init__(self):
        if not self.eta > 0:
            raise DomainError(f"eta must be positive, got {self.eta}")
        mag = abs(self.delta0)
        t_switch = int(math.floor(mag / self.eta))
        object.__setattr__(self, "t_switch", t_switch)
        object.__setattr__(self, "c", mag - t_switch * self.eta)


def sd_exact_distance(delta0: float, eta: float, t: int) -> float:
    """Signed distance after t exact sign-descent steps, in O(1).

    Follows the recurrence delta(t+1) = delta(t) - eta*sign(delta(t)):
    the magnitude shrinks by eta per step until t_switch = floor(
    |delta0|/eta), then alternates between eta - c and c where
    c = |delta0| - t_switch*eta (first post-switch magnitude is
    eta - c, on the opposite side). A coordinate that lands exactly on
    zero stays there.
    """
    if not eta > 0:
        raise DomainError(f"eta must be positive, got {eta}")
    if t < 0:
        raise DomainError(f"t must be nonnegative, got {t}")
    if delta0 == 0.0:
        return 0.0
    sign = 1.0 if delta0 > 0 else -1.0
    state = SDExactState(delta0=delta0, eta=eta)
    if t <= state.t_switch:
        return sign * (abs(delta0) - eta * t)
    if state.c == 0.0:
        return 0.0
    if (t - state.t_switch) % 2 == 1:
        return sign * (state.c - eta)
    return sign * state.c


def _exact_distance_array(delta0: np.ndarray, eta: float, t: int) -> np.ndarray:
    """Vectorized sd_exact_distance over an array of initial distances."""
    mag = np.abs(delta0)
    sign = np.sign(delta0)
    t_switch = np.floor(mag / eta)
    c = mag - t_switch * eta
    decreasing = t <= t_switch
    odd = (t - t_switch) % 2 == 1
    osc = np.where(c == 0.0, 0.0, np.where(odd, c - eta, c))
    return sign * np.where(decreasing, mag - eta * t, osc)


def sd_simplified_distance(delta0: float, eta: float, t: int) -> float:
    """Distance magnitude under the simplified model: linear decrease, then eta/2."""
    if delta0 < 0:
        raise DomainError(f"delta0 must be nonnegative, got {delta0}")
    if not eta > 0:
        raise DomainError(f"eta must be positive, got {eta}")
    if t < 0:
        raise DomainError(f"t must be nonnegative, got {t}")
    if t * eta <= delta0:
        return delta0 - t * eta
    return 0.5 * eta


def _simplified_distance_array(delta0: np.ndarray, eta: float, t: float) -> np.ndarray:
    return np.where(t * eta <= delta0, delta0 - t * eta, 0.5 * eta)


def sd_simplified_relative_loss(spec: PowerLawSpec, T: float, phi: float) -> float:
    """Normalized loss after T simplified sign-descent steps at shape phi.

    With eta = 1/(z*T*phi^alpha), the ranks k <= phi are still
    decreasing at time T with residual (k^-alpha - phi^-alpha)/z and the
    rest oscillate at eta/2, giving

        (H_{m,2a} - 2*H_{m,a}*phi^-a + m*phi^-2a
         + (d - m)/(4T^2)*phi^-2a) / H_{d,2a},   m = floor(phi).

    O(1) per query after an O(d) prefix-sum setup.
    """
    if not T > 0:
        raise DomainError(f"T must be positive, got {T}")
    if not 1.0 <= phi <= spec.d:
        raise DomainError(f"phi must lie in [1, d] = [1, {spec.d}], got {phi}")
    a = spec.alpha
    d = spec.d
    m = int(math.floor(phi))
    h_a = harmonic_prefix(d, a)
    h_2a = harmonic_prefix(d, 2.0 * a)
    phi_a = phi**-a
    phi_2a = phi_a * phi_a
    num = (
        h_2a[m - 1]
        - 2.0 * h_a[m - 1] * phi_a
        + m * phi_2a
        + (d - m) / (4.0 * T * T) * phi_2a
    )
    return num / h_2a[d - 1]


class SimulationMode:
    EXACT = "exact"
    SIMPLIFIED = "simplified"


def sd_full_simulation(
    system: FullEigenSystem, eta: float, T: int, mode: str = SimulationMode.SIMPLIFIED
) -> float:
    """Normalized loss at time T on the dense eigen grid.

    Per-coordinate distances come from the exact oscillation closed form
    or the simplified model depending on mode.
    """
    if T < 0:
        raise DomainError(f"T must be nonnegative, got {T}")
    if mode == SimulationMode.EXACT:
        deltas = _exact_distance_array(system.deltas0, eta, T)
    elif mode == SimulationMode.SIMPLIFIED:
        deltas = _simplified_distance_array(system.deltas0, eta, T)
    else:
        raise DomainError(f"unknown simulation mode {mode!r}")
    loss0 = float(np.sum(system.lambdas * system.deltas0**2))
    loss_t = float(np.sum(system.lambdas * deltas**2))
    return loss_t / loss0


def sd_scaling(alpha: float, d: int, tau: float) -> tuple[float, float]:
    """(T, phi) pair for dimension d and rescaled time tau.

    Below alpha = 1/2 no time rescaling is needed (T = tau) and phi
    stays at d until tau exceeds the plateau threshold; at alpha = 1/2,
    T = d^(tau/2)/2 and phi = d^(1-tau) on tau in [0, 1]; above,
    T = tau*sqrt(d)/2 with phi near 1. The small-tau branch above 1/2
    (for alpha < 1) drops the 1/alpha power as an empirical extension.
    """
    if not tau > 0:
        raise DomainError(f"tau must be positive, got {tau}")
    if alpha < 0.5:
        c1, c2 = _scaling_constants(alpha)
        T = tau
        if tau * tau <= (1.0 - c1) / (4.0 * c2):
            phi = float(d)
        else:
            phi = d / (c1 + 4.0 * c2 * tau * tau)
        return T, phi
    if alpha == 0.5:
        if not tau <= 1.0:
            raise DomainError(f"tau must be in (0, 1] at alpha = 1/2, got {tau}")
        return 0.5 * float(d) ** (0.5 * tau), float(d) ** (1.0 - tau)
    T = 0.5 * tau * math.sqrt(d)
    if alpha < 1.0 and tau * tau < 1.0 / (2.0**alpha - 1.0):
        phi = 1.0 + 1.0 / (tau * tau)
    else:
        phi = (1.0 + 1.0 / (tau * tau)) ** (1.0 / alpha)
    return T, phi


def sd_asymptotic_rate(alpha: float, tau: float) -> float:
    """Limiting relative loss of sign descent at rescaled time tau."""
    if not tau > 0:
        raise DomainError(f"tau must be positive, got {tau}")
    if alpha < 0.5:
        c1, c2 = _scaling_constants(alpha)
        if tau * tau <= (1.0 - c1) / (4.0 * c2):
            return 2.0 * alpha * c2
        return (c1 + 4.0 * c2 * tau * tau) ** (2.0 * alpha) / (4.0 * tau * tau)
    if alpha == 0.5:
        if not tau <= 1.0:
            raise DomainError(f"tau must be in (0, 1] at alpha = 1/2, got {tau}")
        return 1.0 - tau
    # Exact limit of the loss at the optimal step-size shape; equivalent to
    # 1/(1 + zeta(2*alpha)*tau^2) for large tau.
    return 1.0 / ((1.0 + tau * tau) * zeta(2.0 * alpha))


def sd_optimal_phi_large_alpha(alpha: float, d: int, T: float) -> float:
    """Closed-form optimal phi for alpha > 1/2 once only rank 1 oscillates.

    Valid when 4*T^2 >= (d - 1)/(2^alpha - 1); below that threshold more
    than one coordinate oscillates at the optimum and the formula does
    not apply.
    """
    if not alpha > 0.5:
        raise DomainError(f"requires alpha > 1/2, got {alpha}")
    threshold = (d - 1.0) / (2.0**alpha - 1.0)
    if 4.0 * T * T < threshold:
        raise DomainError(
            f"requires 4*T^2 >= (d-1)/(2^alpha - 1) = {threshold}, got 4*T^2 = {4.0 * T * T}"
        )
    return (1.0 + (d - 1.0) / (4.0 * T * T)) ** (1.0 / alpha)


# Exponents x of the grid phi = d^x: 321 logarithmically spaced values of x
# from 1e-10 up to 1, stepping by factors of 10^(1/32).
PHI_GRID_EXPONENTS = tuple(10.0 ** (-10.0 + k / 32.0) for k in range(321))


def sd_grid_search_phi(spec: PowerLawSpec, T: float) -> tuple[float, float]:
    """Best phi over the 321-point grid d^x; ties break toward smaller phi."""
    if spec.d < 2:
        raise DomainError(f"grid search requires d >= 2, got {spec.d}")
    if not T > 0:
        raise DomainError(f"T must be positive, got {T}")
    phi_best, loss_best = None, math.inf
    for x in PHI_GRID_EXPONENTS:
        phi = min(float(spec.d) ** x, float(spec.d))
        loss = sd_simplified_relative_loss(spec, T, phi)
        if loss < loss_best:
            phi_best, loss_best = phi, loss
    return phi_best, loss_best


def sd_time_to_eps(alpha: float, d: int, eps: float) -> float:
    """Predicted step count for sign descent to reach relative loss eps."""
    if not 0.0 < eps < 1.0:
        raise DomainError(f"eps must be in (0, 1), got {eps}")
    if alpha < 0.5:
        c1, c2 = _scaling_constants(alpha)
        plateau = 2.0 * alpha * c2
        if eps >= plateau:
            raise DomainError(
                f"eps = {eps} is at or above the plateau {plateau}; unreachable by longer training"
            )
        return 0.5 * c2 ** (alpha / (1.0 - 2.0 * alpha)) * (1.0 / eps) ** (
            1.0 / (2.0 - 4.0 * alpha)
        )
    if alpha == 0.5:
        return 0.5 * float(d) ** (0.5 * (1.0 - eps))
    return 0.5 * math.sqrt(d * (1.0 / eps - 1.0) / zeta(2.0 * alpha))
