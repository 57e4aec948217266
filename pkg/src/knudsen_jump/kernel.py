"""Collision kernel q, its roots, and drift-speed regime classification."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

SQRT_3_2 = math.sqrt(1.5)       # sonic threshold of the model
HALF_SQRT_2 = math.sqrt(0.5)    # degenerate (linear-kernel) drift speed
BOUNDARY_TOL = 1e-12
DEGENERATE_TOL = 1e-12


class Regime(enum.Enum):
    """Analytic regime of the drift speed U (Riemann-problem index in parens)."""

    NO_SOLUTION = "no-solution"                          # U > sqrt(3/2), index 3
    UNIQUE_EVAPORATION = "unique-evaporation"            # 0 < U < sqrt(3/2), index 2
    DEGENERATE_HALF_SQRT2 = "degenerate-half-sqrt2"      # U = 1/sqrt(2), index 2
    ONE_PARAM_CONDENSATION = "one-parameter-condensation"    # -sqrt(3/2) < U < 0, index 1
    TWO_PARAM_CONDENSATION = "two-parameter-condensation"    # U < -sqrt(3/2), index 0
    DISCRETE_BOUNDARY = "discrete-boundary"              # U = 0 or U^2 = 3/2


_INDEX = {
    Regime.NO_SOLUTION: 3,
    Regime.UNIQUE_EVAPORATION: 2,
    Regime.DEGENERATE_HALF_SQRT2: 2,
    Regime.ONE_PARAM_CONDENSATION: 1,
    Regime.TWO_PARAM_CONDENSATION: 0,
}


def regime_index(regime: Regime):
    """Riemann-problem index k for a regime, or None at discrete boundaries."""
    return _INDEX.get(regime)


def q_full(mu, mup):
    """Symmetric kernel q(mu, mu') = 1 + 2 mu mu' + 2(mu^2-1/2)(mu'^2-1/2)."""
    return 1.0 + 2.0 * mu * mup + 2.0 * (mu * mu - 0.5) * (mup * mup - 0.5)


def q_minus_u(U, mu):
    """q(-U, mu): quadratic in mu, affine when U^2 = 1/2."""
    return 1.0 - 2.0 * U * mu + 2.0 * (U * U - 0.5) * (mu * mu - 0.5)


def discriminant(U):
    """Quarter-discriminant D(U) = 2(U^2-3/4)^2 + 3/8, strictly positive."""
    t = U * U - 0.75
    return 2.0 * t * t + 0.375


@dataclass(frozen=True)
class KernelRoots:
    """Real roots of mu -> q(-U, mu), sorted ascending.

    ``degenerate`` flags the affine kernel |U^2 - 1/2| < tol, which has a
    single root.
    """

    roots: tuple
    degenerate: bool


def kernel_roots(U: float) -> KernelRoots:
    """Roots of q(-U, mu), in the numerically stable product form.

    The quadratic is 2a mu^2 - 2U mu + (3/2 - U^2) with a = U^2 - 1/2.
    Near a = 0 one root escapes to infinity; the surviving root is taken
    from the product of roots so no cancellation occurs.
    """
    a = U * U - 0.5
    if abs(a) < DEGENERATE_TOL:
        # affine kernel 1 - 2 U mu
        return KernelRoots((float((1.5 - U * U) / (2.0 * U)),), True)
    sd = math.sqrt(discriminant(U))
    big = U + sd if U >= 0.0 else U - sd        # root of larger magnitude numerator
    r1 = big / (2.0 * a)
    r2 = (1.5 - U * U) / (2.0 * a * r1)
    lo, hi = (r1, r2) if r1 <= r2 else (r2, r1)
    return KernelRoots((float(lo), float(hi)), False)


def classify_regime(U: float) -> Regime:
    """Map the drift speed to its analytic regime.

    Boundaries U = 0 and |U| = sqrt(3/2) and the degenerate point
    U = 1/sqrt(2) are detected within 1e-12.
    """
    U = float(U)
    if not np.isfinite(U):
        raise ValueError("drift speed must be finite")
    if abs(U) <= BOUNDARY_TOL or abs(abs(U) - SQRT_3_2) <= BOUNDARY_TOL:
        return Regime.DISCRETE_BOUNDARY
    if abs(U - HALF_SQRT_2) <= DEGENERATE_TOL:
        return Regime.DEGENERATE_HALF_SQRT2
    if U > SQRT_3_2:
        return Regime.NO_SOLUTION
    if U > 0.0:
        return Regime.UNIQUE_EVAPORATION
    if U > -SQRT_3_2:
        return Regime.ONE_PARAM_CONDENSATION
    return Regime.TWO_PARAM_CONDENSATION
