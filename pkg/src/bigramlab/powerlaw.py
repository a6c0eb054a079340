"""Synthetic problem model: power-law token frequencies and the dense eigen oracle.

The quadratic objective of a linear bigram model has a diagonal Hessian
whose eigenvalues are the token frequencies, each with multiplicity d.
With frequencies following a rank power law 1/(z*k^alpha), both the
eigenvalues and the initial distances to the solution are determined by
(d, alpha), which makes O(d) reductions possible. The dense d-by-d grid
built here serves as the brute-force oracle those reductions are checked
against.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import DomainError, SizeError
from .specfun import zeta

__all__ = [
    "ORACLE_CAP",
    "PowerLawSpec",
    "FullEigenSystem",
    "harmonic_partial",
    "harmonic_asymptote",
    "harmonic_prefix",
    "frequencies",
    "build_full_problem",
    "unimodal_peak",
]

# Dense d^2 systems above this size would defeat the point of the O(d) paths.
ORACLE_CAP = 2048


def harmonic_partial(d: int, p: float) -> float:
    """Partial sum of k^(-p) for k = 1..d.

    Accumulates from k = d down to 1 so the small terms are added first,
    which keeps floating-point cancellation negligible up to d = 1e7.
    """
    if d < 1:
        raise DomainError(f"harmonic_partial requires d >= 1, got {d}")
    k = np.arange(d, 0, -1, dtype=np.float64)
    return float(np.sum(k**-p))


@lru_cache(maxsize=32)
def harmonic_prefix(d: int, p: float) -> np.ndarray:
    """Prefix sums H_{1,p}..H_{d,p} of k^(-p), cached and read-only."""
    if d < 1:
        raise DomainError(f"harmonic_prefix requires d >= 1, got {d}")
    k = np.arange(1, d + 1, dtype=np.float64)
    out = np.cumsum(k**-p)
    out.setflags(write=False)
    return out


def harmonic_asymptote(d: int, p: float) -> float:
    """Large-d equivalent of the partial sum of k^(-p).

    d^(1-p)/(1-p) below p = 1, log(d) at p = 1, and the convergent
    limit zeta(p) above.
    """
    if d < 2:
        raise DomainError(f"harmonic_asymptote requires d >= 2, got {d}")
    if p < 1:
        return d ** (1.0 - p) / (1.0 - p)
    if p == 1:
        return float(np.log(d))
    return zeta(p)


@dataclass(frozen=True)
class PowerLawSpec:
    """A synthetic problem instance: vocabulary size d and exponent alpha.

    The normalizer z is the partial harmonic sum of k^(-alpha), so the
    frequencies 1/(z*k^alpha) sum to one.
    """

    d: int
    alpha: float
    z: float = field(init=False)

    def __post_init__(self):
        if self.d < 1:
            raise DomainError(f"d must be >= 1, got {self.d}")
        if not self.alpha > 0:
            raise DomainError(f"alpha must be positive, got {self.alpha}")
        object.__setattr__(self, "z", harmonic_partial(self.d, self.alpha))


def frequencies(spec: PowerLawSpec) -> np.ndarray:
    """Token frequencies 1/(z*k^alpha) for ranks k = 1..d."""
    k = np.arange(1, spec.d + 1, dtype=np.float64)
    return k**-spec.alpha / spec.z


@dataclass(frozen=True)
class FullEigenSystem:
    """Dense d-by-d eigen grid of the bigram quadratic.

    lambdas[i, j] is the eigenvalue of the (i, j)th eigendirection (the
    frequency of context i, independent of j) and deltas0[i, j] the
    initial distance to the solution along it (a permutation of the
    frequencies within each row).
    """

    d: int
    alpha: float
    lambdas: np.ndarray
    deltas0: np.ndarray

    def initial_loss(self) -> float:
        return float(np.sum(self.lambdas * self.deltas0**2))


def build_full_problem(
    spec: PowerLawSpec, row_permutations: list[np.ndarray] | None = None
) -> FullEigenSystem:
    """Construct the dense eigen system for a power-law instance.

    row_permutations, if given, holds one permutation of 0..d-1 per row;
    row i of the initial distances is the frequency vector reordered by
    it. The loss dynamics are invariant to this choice, so the identity
    ordering is the default.
    """
    d = spec.d
    if d > ORACLE_CAP:
        raise SizeError(f"dense oracle capped at d = {ORACLE_CAP}, got {d}")
    pi = frequencies(spec)
    lambdas = np.tile(pi[:, None], (1, d))
    if row_permutations is None:
        deltas0 = np.tile(pi[None, :], (d, 1))
    else:
        if len(row_permutations) != d:
            raise DomainError(
                f"expected {d} row permutations, got {len(row_permutations)}"
            )
        deltas0 = np.empty((d, d))
        for i, perm in enumerate(row_permutations):
            perm = np.asarray(perm)
            if sorted(perm.tolist()) != list(range(d)):
                raise DomainError(f"row {i} is not a permutation of 0..{d - 1}")
            deltas0[i] = pi[perm]
    return FullEigenSystem(d=d, alpha=spec.alpha, lambdas=lambdas, deltas0=deltas0)


def unimodal_peak(alpha: float, t: float) -> float:
    """Location (1 + t)^(1/alpha) of the maximum of k^(-alpha)*(1-k^(-alpha))^t."""
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    if t < 0:
        raise DomainError(f"t must be nonnegative, got {t}")
    return (1.0 + t) ** (1.0 / alpha)
