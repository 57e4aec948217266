"""Canonical factor function of the homogeneous Riemann problem.

X(z) = (z + U)^{-k} e^{V(z)} with V the Cauchy integral of the phase
defect theta(mu) - k*pi over the cut.  On the cut the returned X(mu) is
the principal-value (geometric) branch (mu+U)^{-k} e^{V(mu)} with V by
singularity subtraction; the boundary values are then
X^{+-}(mu) = X(mu) exp(+-i (theta(mu) - k pi)).

At an on-cut kernel root r, where theta(r) = m*pi, both boundary values
coincide and equal (-1)^{m-k} X(r); that signed value is the one that
enters pole-destruction conditions, and is exposed as ``x_at_root``.
(The sign is verified independently by ``x_integral_representation``,
which evaluates X from its own jump with a density that vanishes at the
kernel roots.)
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.integrate import quad

from .dispersion import ThetaBranch, ThetaTable, build_theta_table, lambda_boundary
from .errors import NumericalError, QuadratureError, RegimeError
from .kernel import KernelRoots, Regime, classify_regime, kernel_roots, q_minus_u, regime_index

_QUAD_OPTS = dict(epsabs=1e-11, epsrel=1e-11, limit=400)


@dataclass
class FactorData:
    """Factor-function context for one drift speed U."""

    U: float
    k: int
    regime: Regime
    kernel: KernelRoots
    cut_roots: tuple
    mu_max: float
    branch: ThetaBranch
    theta_table: ThetaTable
    mu_tail: float
    _v1: float | None = field(default=None, repr=False)
    _ref: tuple | None = field(default=None, repr=False)
    _v_cache: dict = field(default_factory=dict, repr=False)

    # -- phase ---------------------------------------------------------

    def theta(self, mu):
        return self.branch(mu)

    def theta_defect(self, mu):
        """theta(mu) - k*pi, the jump density of V."""
        return self.branch(mu) - self.k * math.pi

    @property
    def v1(self):
        """First moment of the defect: e^{-V(z)} = 1 - v1/z + O(z^-2)."""
        if self._v1 is None:
            pts = list(self.cut_roots)
            val, err = quad(
                lambda m: float(self.theta_defect(m)),
                -self.U,
                self.mu_max,
                points=pts,
                **_QUAD_OPTS,
            )
            if err > 1e-8:
                raise QuadratureError("v1 quadrature did not converge", estimate=err)
            self._v1 = -val / math.pi
        return self._v1

    # -- reference grid for vectorized V on the cut ---------------------

    def _ref_grid(self):
        """Composite Gauss-Legendre nodes of theta over the cut.

        Panels are aligned to the kernel roots (the only places where
        theta has structure) and kept narrow enough that the divided
        difference (theta(mu)-theta(eta))/(mu-eta) is integrated to
        ~1e-12 by 12-point Gauss per panel.
        """
        if self._ref is None:
            knots = [-self.U] + [r for r in self.cut_roots] + [self.mu_max]
            knots = sorted(set(knots))
            xg, wg = leggauss(12)
            nodes, weights = [], []
            for a, b in zip(knots[:-1], knots[1:]):
                n_panels = max(2, int(math.ceil((b - a) / 0.2)))
                edges = np.linspace(a, b, n_panels + 1)
                for lo, hi in zip(edges[:-1], edges[1:]):
                    half = 0.5 * (hi - lo)
                    nodes.append(0.5 * (hi + lo) + half * xg)
                    weights.append(half * wg)
            nodes = np.concatenate(nodes)
            weights = np.concatenate(weights)
            self._ref = (nodes, weights, self.branch(nodes))
        return self._ref

    def v_many(self, etas):
        """Vectorized principal-value V(eta) for eta strictly inside the cut.

        Singularity subtraction against the fixed reference grid; the
        subtracted integrand is smooth, so fixed composite Gauss
        quadrature reaches the accuracy of the adaptive route (checked
        in the test suite).
        """
        etas = np.atleast_1d(np.asarray(etas, dtype=float))
        if np.any(etas <= -self.U) or np.any(etas >= self.mu_max):
            raise ValueError("v_many expects points strictly inside the cut")
        nodes, weights, th_nodes = self._ref_grid()
        th_e = np.atleast_1d(self.branch(etas))
        diff = nodes[None, :] - etas[:, None]
        num = th_nodes[None, :] - th_e[:, None]
        with np.errstate(divide="ignore", invalid="ignore"):
            integrand = num / diff
        tiny = np.abs(diff) < 1e-9
        if np.any(tiny):
            rows, cols = np.nonzero(tiny)
            for i, j in zip(rows, cols):
                integrand[i, j] = self.branch.deriv(etas[i])
        core = integrand @ weights
        log_term = (th_e - self.k * math.pi) * np.log(
            (self.mu_max - etas) / (etas + self.U)
        )
        return (core + log_term) / math.pi


def build_factor_data(U, mu_max=None) -> FactorData:
    """Construct the factor context: regime, index, verified theta branch."""
    U = float(U)
    regime = classify_regime(U)
    k = regime_index(regime)
    if k is None:
        raise RegimeError(
            "factor function undefined at a discrete-spectrum boundary "
            "(U = 0 or U^2 = 3/2)",
            regime=regime,
        )
    table = build_theta_table(U, mu_max)
    branch = ThetaBranch(U, mu_max)
    kr = kernel_roots(U)
    defect = np.abs(table.theta - k * math.pi)
    settled = defect < 1e-13
    if not settled[-1]:
        raise NumericalError(
            f"theta has not settled to k*pi at mu_max (defect {defect[-1]:.2e}); "
            "increase mu_max"
        )
    live = np.nonzero(~settled)[0]
    mu_tail = float(table.grid[live[-1]]) if live.size else float(table.grid[0])
    incr = table.increment
    if abs(incr - k * math.pi) > 0.05:
        raise NumericalError(
            f"theta increment {incr:.6f} does not match index {k} for U={U}"
        )
    return FactorData(
        U=U,
        k=k,
        regime=regime,
        kernel=kr,
        cut_roots=tuple(r for r in kr.roots if r > -U),
        mu_max=branch.mu_max,
        branch=branch,
        theta_table=table,
        mu_tail=mu_tail,
    )


# ---------------------------------------------------------------------------
# V(z)
# ---------------------------------------------------------------------------


def _v_cut(fd: FactorData, mu0: float) -> float:
    """Principal-value V on the cut by singularity subtraction.

    PV int (theta - k pi)/(mu - mu0) dmu =
        int (theta(mu) - theta(mu0))/(mu - mu0) dmu
        + (theta(mu0) - k pi) * log((mu_max - mu0)/(mu0 + U)),
    the first integrand being continuous (theta is smooth on the cut).
    """
    th0 = float(fd.theta(mu0))

    def integrand(m):
        if abs(m - mu0) < 1e-9:
            return fd.branch.deriv(mu0)
        return (float(fd.theta(m)) - th0) / (m - mu0)

    pts = sorted(set(list(fd.cut_roots) + [mu0]))
    val, err = quad(integrand, -fd.U, fd.mu_max, points=pts, **_QUAD_OPTS)
    if err > 1e-7:
        raise QuadratureError("on-cut V quadrature did not converge", estimate=err)
    log_term = (th0 - fd.k * math.pi) * math.log((fd.mu_max - mu0) / (mu0 + fd.U))
    return (val + log_term) / math.pi


def _v_regular(fd: FactorData, z) -> complex:
    """V(z) away from the cut (or on the real axis beyond the settled tail)."""
    zc = complex(z)
    pts = list(fd.cut_roots)
    hi = fd.mu_max
    if zc.imag == 0.0 and zc.real > fd.mu_tail + 0.5:
        # the defect is below 1e-13 past mu_tail; stop the panel before z
        hi = min(fd.mu_max, zc.real - 0.5)
        pts = [p for p in pts if p < hi]

    def defect(m):
        return float(fd.theta_defect(m))

    if zc.imag == 0.0:
        x = zc.real
        val, err = quad(lambda m: defect(m) / (m - x), -fd.U, hi, points=pts, **_QUAD_OPTS)
        if err > 1e-7:
            raise QuadratureError("V quadrature did not converge", estimate=err)
        return val / math.pi
    x, y = zc.real, zc.imag
    re, re_err = quad(
        lambda m: defect(m) * (m - x) / ((m - x) ** 2 + y * y),
        -fd.U,
        hi,
        points=pts,
        **_QUAD_OPTS,
    )
    im, im_err = quad(
        lambda m: defect(m) * y / ((m - x) ** 2 + y * y),
        -fd.U,
        hi,
        points=pts,
        **_QUAD_OPTS,
    )
    if max(re_err, im_err) > 1e-7:
        raise QuadratureError("V quadrature did not converge", estimate=max(re_err, im_err))
    return complex(re, im) / math.pi


def v_func(z, fd: FactorData):
    """Cauchy integral V(z) of the phase defect.

    Real z strictly inside (-U, mu_max) returns the principal-value
    branch; other z the ordinary (analytic) value.  Results on the real
    axis are returned as floats.
    """
    zc = complex(z)
    if zc.imag != 0.0:
        return _v_regular(fd, zc)
    x = zc.real
    key = x
    if key in fd._v_cache:
        return fd._v_cache[key]
    if x == -fd.U:
        raise ValueError("V is logarithmically singular at the cut endpoint -U")
    if -fd.U < x < fd.mu_max:
        out = float(_v_cut(fd, x))
    else:
        out = float(_v_regular(fd, x).real)
    fd._v_cache[key] = out
    return out


def v1_moment(fd: FactorData) -> float:
    """First moment V1 with e^{-V(z)} = 1 - V1/z + O(z^-2).

    Contracted for the index-2 (evaporation / degenerate) factor data,
    where it feeds the closed-form degenerate jumps.
    """
    if fd.k != 2:
        raise RegimeError("v1_moment is defined for the index-2 factor data")
    return fd.v1


# ---------------------------------------------------------------------------
# X(z)
# ---------------------------------------------------------------------------


def x_func(z, fd: FactorData):
    """Factor function X(z) = (z+U)^{-k} e^{V(z)}.

    For real z on the cut this is the principal-value branch; elsewhere
    the analytic value.  Nonvanishing off the cut and bounded at -U.
    """
    zc = complex(z)
    if zc.imag == 0.0:
        x = zc.real
        return (x + fd.U) ** (-fd.k) * math.exp(v_func(x, fd))
    return (zc + fd.U) ** (-fd.k) * np.exp(_v_regular(fd, zc))


def x_boundary(mu, fd: FactorData):
    """Boundary values (X^+, X^-) on the cut from the closed phase form."""
    mu = float(mu)
    base = x_func(mu, fd)
    phase = np.exp(1j * (float(fd.theta(mu)) - fd.k * math.pi))
    return base * phase, base * np.conj(phase)


def x_at_root(fd: FactorData, r) -> float:
    """The value of X that enters pole conditions at a kernel root.

    Off the cut this is the analytic X(r).  On the cut the boundary
    values coincide and equal (-1)^{m-k} X(r) with theta(r) = m*pi.
    """
    r = float(r)
    if r <= -fd.U:
        return float(x_func(r, fd))
    m = fd.branch.root_theta_multiple(r)
    sign = -1.0 if (m - fd.k) % 2 else 1.0
    return sign * float(x_func(r, fd))


def x_integral_representation(z, fd: FactorData):
    """X(z) reconstructed from its own jump across the cut.

    X(z) = [k == 0] + (1/sqrt(pi)) int e^{-mu^2} (mu+U) q(-U,mu)
           X^+(mu) / (lambda^+(mu) (mu - z)) dmu,
    whose density X^+/lambda^+ = (-1)^k X(mu)/|lambda^+(mu)| is real and
    vanishes at the kernel roots, so boundary values there coincide with
    the principal value.  Serves as an independent cross-evaluation of
    ``x_func`` (and of the root sign convention).
    """
    sign = -1.0 if fd.k % 2 else 1.0
    const = 1.0 if fd.k == 0 else 0.0

    def density(m):
        lam_p, _ = lambda_boundary(m, fd.U)
        xm = float(x_func(m, fd))
        return (
            sign
            * math.exp(-m * m)
            * (m + fd.U)
            * q_minus_u(fd.U, m)
            * xm
            / (math.sqrt(math.pi) * abs(lam_p))
        )

    zc = complex(z)
    pts = list(fd.cut_roots)
    opts = dict(epsabs=1e-10, epsrel=1e-10, limit=400)
    if zc.imag == 0.0:
        x = zc.real
        on_root = any(abs(x - r) < 1e-10 for r in fd.cut_roots)
        if -fd.U < x < fd.mu_max and not on_root:
            raise ValueError(
                "integral representation on the cut is only evaluated at "
                "kernel roots, where the density vanishes"
            )
        val, err = quad(lambda m: density(m) / (m - x), -fd.U, fd.mu_max, points=pts, **opts)
        if err > 1e-6:
            raise QuadratureError("representation quadrature did not converge", estimate=err)
        return const + val
    xr, yi = zc.real, zc.imag
    re, re_err = quad(
        lambda m: density(m) * (m - xr) / ((m - xr) ** 2 + yi * yi),
        -fd.U,
        fd.mu_max,
        points=pts,
        **opts,
    )
    im, im_err = quad(
        lambda m: density(m) * yi / ((m - xr) ** 2 + yi * yi),
        -fd.U,
        fd.mu_max,
        points=pts,
        **opts,
    )
    if max(re_err, im_err) > 1e-6:
        raise QuadratureError(
            "representation quadrature did not converge", estimate=max(re_err, im_err)
        )
    return const + complex(re, im)
