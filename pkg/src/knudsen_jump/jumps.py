"""Temperature and density jumps in every solvable regime.

The auxiliary function N(z) = (h(0,z) + P(z)/X(z)) / q(-U,z), with P a
polynomial of degree 2 - k, solves the nonhomogeneous boundary-value
problem once (a) P kills the growth of the numerator at infinity and
(b) the candidate poles at the kernel roots are destroyed.  Those
conditions fix the jumps (evaporation), or leave one or two of them
free (condensation).  Pole conditions use the coinciding boundary value
of X at each root (``x_at_root``), which on the cut carries the parity
sign (-1)^{m-k}; the choice is pinned independently by the
discrete-ordinates oracle and by the boundary-data reconstruction test.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    MissingFreeParameterError,
    NumericalError,
    RegimeError,
    SingularSystemError,
)
from .factorization import FactorData, build_factor_data, v_func, x_at_root, x_func
from .kernel import HALF_SQRT_2, SQRT_3_2, Regime, classify_regime, kernel_roots, q_minus_u

_POLE_TOL_HARD = 1e-6   # NumericalError above this
_POLE_TOL_SOFT = 1e-8   # expected level for a healthy solve


def boundary_h0(mu, U, eps_rho, eps_t):
    """Wall boundary datum h(0, mu) = eps_rho - 2 U mu + eps_t (mu^2 - 1/2)."""
    mu = np.asarray(mu)
    out = eps_rho - 2.0 * U * mu + eps_t * (mu * mu - 0.5)
    return out[()] if out.ndim == 0 else out


@dataclass
class JumpResult:
    """Jumps, expansion constants, and diagnostics for one drift speed."""

    U: float
    regime: Regime
    eps_t: float
    eps_rho: float
    K: float
    R: float
    c0: float
    c1: float | None = None
    c2: float | None = None
    residuals: tuple = ()
    free_params: dict = field(default_factory=dict)
    v1: float | None = None
    v_at_u: float | None = None
    diagnostics: dict = field(default_factory=dict)
    factor: FactorData | None = field(default=None, repr=False)

    def h0(self, mu):
        """Evaluator of the wall boundary polynomial."""
        return boundary_h0(mu, self.U, self.eps_rho, self.eps_t)

    def constants_poly(self, z):
        """P(z) = c0 + c1 z + c2 z^2 with absent constants treated as zero."""
        p = self.c0
        if self.c1 is not None:
            p = p + self.c1 * z
        if self.c2 is not None:
            p = p + self.c2 * z * z
        return p

    def to_dict(self):
        return {
            "U": self.U,
            "regime": self.regime.value,
            "eps_T": self.eps_t,
            "eps_rho": self.eps_rho,
            "K": self.K,
            "R": self.R,
            "c0": self.c0,
            "c1": self.c1,
            "c2": self.c2,
            "residuals": list(self.residuals),
            "v1": self.v1,
            "v_at_u": self.v_at_u,
        }


def _pole_values(fd: FactorData):
    """Kernel roots paired with the X value entering the pole conditions."""
    return [(r, x_at_root(fd, r)) for r in fd.kernel.roots]


def _check_residuals(residuals, what):
    worst = max(abs(r) for r in residuals) if residuals else 0.0
    if worst > _POLE_TOL_HARD:
        raise NumericalError(
            f"pole-destruction residual {worst:.3e} in {what} exceeds "
            f"{_POLE_TOL_HARD:.0e}; quadrature failure or root/sign mismatch"
        )
    return residuals


def jump_evaporation(U: float) -> JumpResult:
    """Unique solution for 0 < U < sqrt(3/2), away from the degenerate point.

    eps_T from the two pole conditions h(0, r_a) = eps_T / X(r_a);
    eps_rho back-substituted.  The closed forms are invariant under
    swapping the two roots (the same 2x2 linear system).
    """
    U = float(U)
    regime = classify_regime(U)
    if regime is not Regime.UNIQUE_EVAPORATION:
        if regime is Regime.DEGENERATE_HALF_SQRT2:
            raise RegimeError(
                "U = 1/sqrt(2) is the degenerate kernel; use jump_degenerate",
                regime=regime,
            )
        raise RegimeError(
            f"jump_evaporation requires 0 < U < sqrt(3/2); got U={U} ({regime.value})",
            regime=regime,
        )
    if abs(U - HALF_SQRT_2) <= 1e-10:
        raise RegimeError(
            "U within 1e-10 of the degenerate point; use jump_degenerate",
            regime=Regime.DEGENERATE_HALF_SQRT2,
        )
    fd = build_factor_data(U)
    (r1, x1), (r2, x2) = _pole_values(fd)
    den = (r1 * r1 - r2 * r2) * x1 * x2 + x1 - x2
    eps_t = 2.0 * U * (r1 - r2) * x1 * x2 / den
    eps_rho = 2.0 * U * r1 - (r1 * r1 - 0.5 - 1.0 / x1) * eps_t
    c0 = -eps_t
    residuals = tuple(
        float(boundary_h0(r, U, eps_rho, eps_t) + c0 / x) for r, x in ((r1, x1), (r2, x2))
    )
    _check_residuals(residuals, "jump_evaporation")
    return JumpResult(
        U=U,
        regime=regime,
        eps_t=float(eps_t),
        eps_rho=float(eps_rho),
        K=float(eps_t / (2.0 * U)),
        R=float(eps_rho / (2.0 * U)),
        c0=float(c0),
        residuals=residuals,
        factor=fd,
    )


def jump_degenerate() -> JumpResult:
    """Closed-form jumps at the degenerate drift speed U = 1/sqrt(2).

    The kernel is affine with its single root at U itself, which lies on
    the cut with theta(U) = pi, so the coinciding boundary value of X is
    -(2U)^{-2} e^{V(U)}.  Killing the numerator growth at infinity gives
    eps_T = 2U / (V1 - sqrt(2)); the root condition then gives
    eps_rho = 1 - 2 eps_T e^{-V(U)}.

    The sign of the root value flips the eps_rho formula relative to a
    naive (unsigned) reading; both variants are recorded in
    ``diagnostics`` for the discrepancy report, and the adopted one is
    the one confirmed by the oracle and the reconstruction test.
    """
    U = HALF_SQRT_2
    fd = build_factor_data(U)
    v1 = fd.v1
    vu = float(v_func(U, fd))
    two_u = 2.0 * U  # = sqrt(2)
    eps_t = two_u / (v1 - two_u)
    c0 = -eps_t
    eps_rho = 1.0 - 2.0 * eps_t * math.exp(-vu)
    # Cross expression from the root condition, eps_T = (1 - eps_rho)/2 e^{V(U)}
    eps_t_cross = 0.5 * (1.0 - eps_rho) * math.exp(vu)
    if abs(eps_t - eps_t_cross) > 1e-6:
        raise NumericalError(
            f"degenerate eps_T expressions disagree: {eps_t} vs {eps_t_cross}"
        )
    root = fd.kernel.roots[0]
    xr = x_at_root(fd, root)
    residuals = (float(boundary_h0(root, U, eps_rho, eps_t) + c0 / xr),)
    _check_residuals(residuals, "jump_degenerate")
    # unsigned-root variant of the eps_rho formula, for the discrepancy report
    eps_rho_unsigned = 1.0 + 2.0 * eps_t * math.exp(-vu)
    return JumpResult(
        U=U,
        regime=Regime.DEGENERATE_HALF_SQRT2,
        eps_t=float(eps_t),
        eps_rho=float(eps_rho),
        K=float(eps_t / two_u),
        R=float(eps_rho / two_u),
        c0=float(c0),
        residuals=residuals,
        v1=float(v1),
        v_at_u=vu,
        diagnostics={
            "eps_rho_unsigned_root_formula": float(eps_rho_unsigned),
            "eps_rho_published": -2.4907,
        },
        factor=fd,
    )


def jump_condensation_one_param(U: float, eps_rho: float) -> JumpResult:
    """One-parameter condensation family for -sqrt(3/2) < U < 0.

    eps_rho is the caller-supplied free parameter; eps_T and the
    expansion constants follow from the infinity condition C1 = -eps_T
    and the pole conditions X(r_a) h(0, r_a) + C0 + C1 r_a = 0.
    """
    U = float(U)
    regime = classify_regime(U)
    if regime is not Regime.ONE_PARAM_CONDENSATION:
        raise RegimeError(
            f"jump_condensation_one_param requires -sqrt(3/2) < U < 0; got U={U}",
            regime=regime,
        )
    eps_rho = float(eps_rho)
    if not np.isfinite(eps_rho):
        raise ValueError("eps_rho must be finite")
    fd = build_factor_data(U)
    if fd.kernel.degenerate:
        # U = -1/sqrt(2): affine kernel, single (off-cut) root.  The z^1
        # coefficient at infinity supplies the equation the second root
        # normally provides.
        r = fd.kernel.roots[0]
        xr = float(x_func(r, fd))
        v1 = fd.v1
        eps_t = (2.0 * U + xr * (eps_rho - 1.0)) / v1
        c1 = -eps_t
        c0 = 2.0 * U + eps_t * (U - v1)
        residuals = (
            float(xr * boundary_h0(r, U, eps_rho, eps_t) + c0 + c1 * r),
        )
    else:
        (r1, x1), (r2, x2) = _pole_values(fd)
        a = np.array(
            [
                [1.0, x1 * (r1 * r1 - 0.5) - r1],
                [1.0, x2 * (r2 * r2 - 0.5) - r2],
            ]
        )
        b = np.array([x1 * (2.0 * U * r1 - eps_rho), x2 * (2.0 * U * r2 - eps_rho)])
        if np.linalg.cond(a) > 1e12:
            raise SingularSystemError("pole-condition system is ill conditioned")
        c0, eps_t = np.linalg.solve(a, b)
        c1 = -eps_t
        residuals = tuple(
            float(x * boundary_h0(r, U, eps_rho, eps_t) + c0 + c1 * r)
            for r, x in ((r1, x1), (r2, x2))
        )
    _check_residuals(residuals, "jump_condensation_one_param")
    return JumpResult(
        U=U,
        regime=regime,
        eps_t=float(eps_t),
        eps_rho=eps_rho,
        K=float(eps_t / (2.0 * U)),
        R=float(eps_rho / (2.0 * U)),
        c0=float(c0),
        c1=float(c1),
        residuals=residuals,
        free_params={"eps_rho": eps_rho},
        factor=fd,
    )


def jump_condensation_two_param(U: float, eps_t: float, eps_rho: float) -> JumpResult:
    """Two-parameter condensation family for U < -sqrt(3/2).

    Both jumps are data; C2 = -eps_T from infinity, and (C0, C1) solve
    the two pole conditions.
    """
    U = float(U)
    regime = classify_regime(U)
    if regime is not Regime.TWO_PARAM_CONDENSATION:
        raise RegimeError(
            f"jump_condensation_two_param requires U < -sqrt(3/2); got U={U}",
            regime=regime,
        )
    eps_t = float(eps_t)
    eps_rho = float(eps_rho)
    if not (np.isfinite(eps_t) and np.isfinite(eps_rho)):
        raise ValueError("eps_t and eps_rho must be finite")
    fd = build_factor_data(U)
    (r1, x1), (r2, x2) = _pole_values(fd)
    c2 = -eps_t
    a = np.array([[1.0, r1], [1.0, r2]])
    if np.linalg.cond(a) > 1e12:
        raise SingularSystemError("pole-condition system is ill conditioned")
    b = np.array(
        [
            -c2 * r1 * r1 - x1 * boundary_h0(r1, U, eps_rho, eps_t),
            -c2 * r2 * r2 - x2 * boundary_h0(r2, U, eps_rho, eps_t),
        ]
    )
    c0, c1 = np.linalg.solve(a, b)
    residuals = tuple(
        float(c0 + c1 * r + c2 * r * r + x * boundary_h0(r, U, eps_rho, eps_t))
        for r, x in ((r1, x1), (r2, x2))
    )
    _check_residuals(residuals, "jump_condensation_two_param")
    return JumpResult(
        U=U,
        regime=regime,
        eps_t=eps_t,
        eps_rho=eps_rho,
        K=float(eps_t / (2.0 * U)),
        R=float(eps_rho / (2.0 * U)),
        c0=float(c0),
        c1=float(c1),
        c2=float(c2),
        residuals=residuals,
        free_params={"eps_t": eps_t, "eps_rho": eps_rho},
        factor=fd,
    )


def solve_jumps(U: float, eps_t=None, eps_rho=None) -> JumpResult:
    """Regime dispatcher.

    Determined regimes reject supplied free parameters; condensation
    regimes require them (MissingFreeParameterError lists which).
    NO_SOLUTION and discrete boundaries raise RegimeError.
    """
    U = float(U)
    regime = classify_regime(U)
    if regime is Regime.NO_SOLUTION:
        raise RegimeError(
            "the half-space problem has no solution for U > sqrt(3/2): the "
            "bounded candidate for the auxiliary function cannot vanish at "
            "infinity",
            regime=regime,
        )
    if regime is Regime.DISCRETE_BOUNDARY:
        raise RegimeError(
            "U = 0 and U^2 = 3/2 are discrete-spectrum boundaries (fourth-order "
            "zero at infinity) and are not solved here",
            regime=regime,
        )
    if regime in (Regime.UNIQUE_EVAPORATION, Regime.DEGENERATE_HALF_SQRT2):
        if eps_t is not None or eps_rho is not None:
            raise ValueError(
                "evaporation jumps are uniquely determined; do not supply "
                "eps_t/eps_rho"
            )
        if regime is Regime.DEGENERATE_HALF_SQRT2:
            return jump_degenerate()
        return jump_evaporation(U)
    if regime is Regime.ONE_PARAM_CONDENSATION:
        if eps_t is not None:
            raise ValueError("eps_t is determined in the one-parameter family")
        if eps_rho is None:
            raise MissingFreeParameterError(
                "one-parameter condensation needs eps_rho",
                regime=regime,
                required=("eps_rho",),
            )
        return jump_condensation_one_param(U, eps_rho)
    missing = [name for name, v in (("eps_t", eps_t), ("eps_rho", eps_rho)) if v is None]
    if missing:
        raise MissingFreeParameterError(
            "two-parameter condensation needs eps_t and eps_rho",
            regime=regime,
            required=tuple(missing),
        )
    return jump_condensation_two_param(U, eps_t, eps_rho)


def auxiliary_n(z, jr: JumpResult):
    """Auxiliary function N(z) = (h(0,z) + P(z)/X(z)) / q(-U,z).

    Analytic across the kernel roots (poles destroyed) and vanishing at
    infinity.  Real z strictly inside the cut returns the
    principal-value branch, whose root condition carries
    cos(theta - k pi); points within 1e-11 of a kernel root are
    evaluated by a two-sided limit.
    """
    fd = jr.factor
    if fd is None:
        raise RegimeError("JumpResult has no factor context", regime=jr.regime)
    zc = complex(z)
    U, k = fd.U, fd.k

    def _value(zz):
        if zz.imag == 0.0:
            x = zz.real
            for r in fd.kernel.roots:
                if abs(x - r) < 1e-11:
                    return 0.5 * (_value(complex(r - 1e-6)) + _value(complex(r + 1e-6)))
            h = boundary_h0(x, U, jr.eps_rho, jr.eps_t)
            p = jr.constants_poly(x)
            if -U < x < fd.mu_max:
                vv = v_func(x, fd)
                th = float(fd.theta(x))
                inv_x_pv = (x + U) ** k * math.exp(-vv) * math.cos(th - k * math.pi)
                return (h + p * inv_x_pv) / q_minus_u(U, x)
            return (h + p / x_func(x, fd)) / q_minus_u(U, x)
        h = boundary_h0(zz, U, jr.eps_rho, jr.eps_t)
        p = jr.constants_poly(zz)
        return (h + p / x_func(zz, fd)) / q_minus_u(U, zz)

    out = _value(zc)
    if zc.imag == 0.0 and not isinstance(out, complex):
        return float(out)
    return out
