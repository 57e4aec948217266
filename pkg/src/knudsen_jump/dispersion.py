"""Dispersion function, its boundary values, and the phase theta(mu).

The boundary value of the dispersion function on the cut [-U, inf) is
lambda(mu) + i s(mu) with both parts available in closed form, so the
phase theta(mu) = arg(lambda + i s) can be evaluated *pointwise exactly*
once the integer branch offsets are known.  The offsets change only
where s changes sign, i.e. at the kernel roots that lie on the cut, and
their values follow from continuity and the anchoring theta(-U) = 0.
An unwrapped-argument table over an adaptively refined grid provides an
independent verification of the branch bookkeeping and fails loudly on
disagreement.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import dawsn

from .errors import NumericalError
from .kernel import kernel_roots, q_minus_u
from .specfun import SQRT_PI, lambda_c, t_func

TWO_PI = 2.0 * math.pi


def s_func(mu, U):
    """Imaginary part of the upper boundary value:
    s(mu) = sqrt(pi) e^{-mu^2} (mu + U) q(-U, mu)."""
    mu = np.asarray(mu, dtype=float)
    out = SQRT_PI * np.exp(-mu * mu) * (mu + U) * q_minus_u(U, mu)
    return out[()] if out.ndim == 0 else out


def lambda_pv(mu, U):
    """Principal-value branch of the dispersion function on the real axis."""
    mu = np.asarray(mu, dtype=float)
    a2 = 2.0 * (U * U - 0.5)
    daw = dawsn(mu)
    lc = 1.0 - 2.0 * mu * daw
    t = -2.0 * daw
    out = 1.0 + (mu + U) * ((a2 * mu - 2.0 * U) * lc + (1.5 - U * U) * t)
    return out[()] if out.ndim == 0 else out


def lambda_z(z, U):
    """Dispersion function lambda(z) for complex or real z.

    Closed form 1 + (z+U)([2(U^2-1/2)z - 2U] lambda_c(z) + (3/2-U^2) t(z));
    real z returns the principal-value branch.
    """
    if np.iscomplexobj(np.asarray(z)):
        a2 = 2.0 * (U * U - 0.5)
        lc = lambda_c(z)
        t = t_func(z)
        return 1.0 + (z + U) * ((a2 * z - 2.0 * U) * lc + (1.5 - U * U) * t)
    return lambda_pv(z, U)


def lambda_boundary(mu, U):
    """Boundary values (lambda^+, lambda^-) on the cut; complex conjugates."""
    lam = lambda_pv(mu, U)
    s = s_func(mu, U)
    return lam + 1j * s, lam - 1j * s


class ThetaBranch:
    """Continuous branch of theta(mu) = arg lambda^+(mu) with theta(-U) = 0.

    Within each interval between on-cut kernel roots the point
    lambda + i s stays in one half-plane, so theta equals the principal
    argument plus a fixed multiple of 2*pi.  The multiples are fixed by
    continuity at the roots: the offset steps by +-1 when lambda < 0 at
    the root (the curve crosses the negative real axis), and is
    unchanged when lambda > 0.
    """

    def __init__(self, U, mu_max=None):
        self.U = float(U)
        self.mu_max = float(mu_max) if mu_max is not None else max(8.0, self.U + 8.0)
        kr = kernel_roots(self.U)
        self.kernel = kr
        self.cut_roots = tuple(r for r in kr.roots if r > -self.U)
        offsets = [0]
        n = 0
        s_sign = 1  # s > 0 just right of -U: (mu+U) > 0 and q(-U,-U) > 0
        self._root_multiple = {}
        for r in self.cut_roots:
            lam_r = float(lambda_pv(r, self.U))
            if lam_r == 0.0:
                raise NumericalError(
                    "dispersion function vanishes at an on-cut kernel root; "
                    "phase branch undefined"
                )
            if lam_r < 0.0:
                self._root_multiple[r] = 2 * n + (1 if s_sign > 0 else -1)
                n += 1 if s_sign > 0 else -1
            else:
                self._root_multiple[r] = 2 * n
            offsets.append(n)
            s_sign = -s_sign
        self._offsets = np.asarray(offsets)
        self._edges = np.asarray(self.cut_roots)

    def root_theta_multiple(self, r):
        """Integer m with theta(r) = m*pi at an on-cut kernel root r."""
        return self._root_multiple[r]

    def __call__(self, mu):
        mu = np.asarray(mu, dtype=float)
        scalar = mu.ndim == 0
        mu = np.atleast_1d(mu)
        lam = np.atleast_1d(lambda_pv(mu, self.U))
        s = np.atleast_1d(s_func(mu, self.U))
        idx = np.searchsorted(self._edges, mu, side="left")
        theta = np.arctan2(s, lam) + TWO_PI * self._offsets[idx]
        # Exactly at (or within rounding of) a root the computed sign of s is
        # unreliable; snap to the continuity value m*pi.
        for r in self.cut_roots:
            near = np.abs(mu - r) <= 1e-12 * max(1.0, abs(r))
            if np.any(near):
                theta[near] = math.pi * self._root_multiple[r]
        return theta[0] if scalar else theta

    def deriv(self, mu, h=1e-6):
        """Central-difference derivative of theta (theta is smooth on the cut)."""
        lo = max(mu - h, -self.U + 0.25 * h)
        hi = mu + h
        return float((self(hi) - self(lo)) / (hi - lo))


@functools.lru_cache(maxsize=128)
def _branch(U, mu_max=None):
    return ThetaBranch(U, mu_max)


def theta(mu, U, mu_max=None):
    """Continuous phase theta(mu) on [-U, inf), anchored by theta(-U) = 0."""
    return _branch(float(U), mu_max)(mu)


def theta_increment(U, mu_max=None):
    """Total increment theta(mu_max) - theta(-U); equals k*pi for index k."""
    U = float(U)
    if mu_max is None:
        mu_max = max(8.0, U + 8.0)
    if mu_max < U + 8.0:
        raise ValueError("mu_max must be at least U + 8 for a settled tail")
    return float(theta(mu_max, U, mu_max))


@dataclass(frozen=True)
class DispersionSample:
    """One row of a dispersion dump along the cut."""

    mu: float
    lambda_pv: float
    s: float
    theta: float


@dataclass(frozen=True)
class ThetaTable:
    """theta on a refined grid over [-U, mu_max], plus the total increment."""

    U: float
    grid: np.ndarray
    theta: np.ndarray
    increment: float

    def samples(self):
        lam = lambda_pv(self.grid, self.U)
        s = s_func(self.grid, self.U)
        return [
            DispersionSample(float(m), float(l), float(sv), float(th))
            for m, l, sv, th in zip(self.grid, lam, s, self.theta)
        ]


def build_theta_table(U, mu_max=None, points=800, max_jump=0.05, verify_tol=1e-6):
    """Tabulate theta on an adaptively refined grid and verify the branch.

    The grid is refined until adjacent theta values differ by less than
    ``max_jump`` radians; the exact branch values are then checked
    against a plain unwrap of arg(lambda + i s) along the same grid.
    Disagreement beyond ``verify_tol`` raises NumericalError, signalling
    either a zero of lambda^+ on the cut or broken branch bookkeeping.
    """
    U = float(U)
    branch = _branch(U, mu_max)
    lo, hi = -U, branch.mu_max
    knots = [lo] + [r for r in branch.cut_roots if lo < r < hi] + [hi]
    segs = []
    total = hi - lo
    for a, b in zip(knots[:-1], knots[1:]):
        n = max(40, int(points * (b - a) / total))
        segs.append(np.linspace(a, b, n, endpoint=False))
    grid = np.unique(np.concatenate(segs + [np.asarray([hi])]))
    th = branch(grid)
    for _ in range(24):
        jumps = np.abs(np.diff(th))
        bad = np.nonzero(jumps > max_jump)[0]
        if bad.size == 0:
            break
        mids = 0.5 * (grid[bad] + grid[bad + 1])
        grid = np.sort(np.concatenate([grid, mids]))
        th = branch(grid)
    else:
        raise NumericalError("theta grid refinement did not converge")
    raw = np.unwrap(np.arctan2(s_func(grid, U), lambda_pv(grid, U)))
    err = float(np.max(np.abs(raw - th)))
    if err > verify_tol:
        raise NumericalError(
            f"branch-offset theta disagrees with unwrapped argument by {err:.3e}"
        )
    return ThetaTable(U=U, grid=grid, theta=th, increment=float(th[-1]))
