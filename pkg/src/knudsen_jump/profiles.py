"""Continuum-spectrum coefficient, distribution function, and profiles.

The continuous-spectrum weight is taken from the jump of the auxiliary
function across the cut,

    (eta+U) a(eta) = (-1)^{k+1} P(eta) e^{-eta^2} (eta+U) / (X(eta) |lambda^+(eta)|),

an exactly cancellation-free form: the kernel roots (where sin theta and
q vanish together) and the Gaussian growth of the delta-term weight
e^{eta^2} never appear.  The textbook ratio form
sin(theta) / (sqrt(pi) q X) is kept as an independent cross-check.

All three macroscopic fields share a single integral
I(x) = pi^{-1/2} int e^{-x/(eta+U)} (eta+U) a(eta) / (eta+U) d eta,
so the two exact profile identities hold by construction; the left
endpoint is regularized by the substitution eta = -U + e^t.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.integrate import quad

from .dispersion import lambda_pv, s_func
from .errors import QuadratureError, RegimeError
from .jumps import JumpResult, boundary_h0
from .kernel import q_minus_u
from .specfun import SQRT_PI

_ETA_MIN = 1e-11          # left-endpoint offset of the t-substitution
_EXP_UNDERFLOW = 700.0    # e^{-x/(eta+U)} treated as zero beyond this exponent


class _ProfileEngine:
    """Per-JumpResult caches: continuum coefficient on fixed quadrature nodes."""

    def __init__(self, jr: JumpResult):
        if jr.factor is None:
            raise RegimeError("JumpResult has no factor context", regime=jr.regime)
        self.jr = jr
        self.fd = jr.factor
        self.U = self.fd.U
        self.k = self.fd.k
        self.sigma = -1.0 if self.k % 2 == 0 else 1.0  # (-1)^(k+1)
        self._moment_table = None

    # -- continuum coefficient ------------------------------------------

    def c_a(self, eta, eta_plus_u=None):
        """(eta+U) a(eta), vectorized over the open cut.

        ``eta_plus_u`` may be passed exactly (t-substitution) to avoid
        cancellation near the endpoint.
        """
        eta = np.atleast_1d(np.asarray(eta, dtype=float))
        epu = eta + self.U if eta_plus_u is None else np.atleast_1d(eta_plus_u)
        v = self.fd.v_many(eta)
        lam = lambda_pv(eta, self.U)
        s = s_func(eta, self.U)
        mod = np.hypot(lam, s)
        p = self.jr.constants_poly(eta)
        return (
            self.sigma
            * p
            * np.exp(-eta * eta)
            * epu ** (self.k + 1)
            * np.exp(-v)
            / mod
        )

    def c_a_scalar(self, eta):
        return float(self.c_a(np.asarray([eta]))[0])

    # -- shared profile integral ----------------------------------------

    def _table(self):
        """Fixed Gauss nodes of c_a in t = log(eta + U)."""
        if self._moment_table is None:
            t_lo = math.log(_ETA_MIN)
            t_hi = math.log(self.fd.mu_max + self.U)
            n_panels = max(24, int(math.ceil((t_hi - t_lo) / 1.0)))
            edges = np.linspace(t_lo, t_hi, n_panels + 1)
            xg, wg = leggauss(16)
            ts, ws = [], []
            for lo, hi in zip(edges[:-1], edges[1:]):
                half = 0.5 * (hi - lo)
                ts.append(0.5 * (hi + lo) + half * xg)
                ws.append(half * wg)
            t = np.concatenate(ts)
            w = np.concatenate(ws)
            epu = np.exp(t)
            eta = epu - self.U
            vals = self.c_a(eta, eta_plus_u=epu)
            self._moment_table = (epu, w * vals)
        return self._moment_table

    def shared_integral(self, x):
        """I(x) = pi^{-1/2} int e^{-x/(eta+U)} a(eta)(eta+U) d eta / (eta+U)."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if np.any(x < 0.0):
            raise ValueError("profiles are defined for x >= 0")
        epu, wv = self._table()
        expo = -np.outer(x, 1.0 / epu)
        np.clip(expo, -_EXP_UNDERFLOW, 0.0, out=expo)
        kernel = np.exp(expo)
        return kernel @ wv / SQRT_PI

    def shared_integral_adaptive(self, x):
        """Adaptive-quadrature route for I(x); cross-check of the table."""
        x = float(x)

        def f(t):
            epu = math.exp(t)
            return float(self.c_a(np.asarray([epu - self.U]), np.asarray([epu]))[0]) * math.exp(
                -min(x / epu, _EXP_UNDERFLOW)
            )

        t_lo, t_hi = math.log(_ETA_MIN), math.log(self.fd.mu_max + self.U)
        val, err = quad(f, t_lo, t_hi, epsabs=1e-10, epsrel=1e-10, limit=400)
        if err > 1e-7:
            raise QuadratureError("profile integral did not converge", estimate=err)
        return val / SQRT_PI

    # -- local (delta-term) weight ---------------------------------------

    def local_term(self, mu, x):
        """e^{mu^2} lambda(mu) a(mu) e^{-x/(mu+U)} with the Gaussian cancelled."""
        mu = float(mu)
        lam = float(lambda_pv(mu, self.U))
        s = float(s_func(mu, self.U))
        mod = math.hypot(lam, s)
        v = float(self.fd.v_many(np.asarray([mu]))[0])
        p = float(np.real(self.jr.constants_poly(mu)))
        inv_x = (mu + self.U) ** self.k * math.exp(-v)
        expo = x / (mu + self.U)
        damp = 0.0 if expo > _EXP_UNDERFLOW else math.exp(-expo)
        return self.sigma * lam * p * inv_x * damp / mod


def _engine(jr: JumpResult) -> _ProfileEngine:
    eng = getattr(jr, "_profile_engine", None)
    if eng is None:
        eng = _ProfileEngine(jr)
        jr._profile_engine = eng
    return eng


def continuum_coefficient(eta, jr: JumpResult):
    """(eta+U) a(eta) on the open cut; removable zeros handled exactly."""
    eng = _engine(jr)
    eta_arr = np.asarray(eta, dtype=float)
    out = eng.c_a(eta_arr)
    return float(out[0]) if eta_arr.ndim == 0 else out


def continuum_coefficient_ratio_form(eta, jr: JumpResult):
    """The sin(theta)/(sqrt(pi) q X) form of (eta+U) a(eta).

    Independent cross-check of ``continuum_coefficient``; at kernel
    roots the 0/0 is resolved by l'Hopital (sin theta and q vanish
    together linearly).
    """
    eng = _engine(jr)
    fd = eng.fd
    eta = float(eta)
    p = float(np.real(jr.constants_poly(eta)))
    x_geo = (eta + fd.U) ** (-fd.k) * math.exp(float(fd.v_many(np.asarray([eta]))[0]))
    q = q_minus_u(fd.U, eta)
    if abs(q) < 1e-8:
        root = min(fd.cut_roots, key=lambda r: abs(r - eta))
        m = fd.branch.root_theta_multiple(root)
        lam = float(lambda_pv(eta, fd.U))
        sign_m = -1.0 if m % 2 else 1.0
        return eng.sigma * p * sign_m * math.exp(-eta * eta) * (eta + fd.U) / (lam * x_geo)
    th = float(fd.theta(eta))
    return eng.sigma * p * math.sin(th - fd.k * math.pi) / (SQRT_PI * q * x_geo) * (-1.0) ** fd.k


def distribution_h(x, mu, jr: JumpResult):
    """Distribution function h(x, mu) from the eigenfunction expansion.

    Principal-value integral over the continuous spectrum plus the local
    delta term, the latter only for mu + U > 0.  At x = 0, mu > -U this
    reconstructs the wall boundary polynomial (the expansion theorem).
    """
    x = float(x)
    mu = float(mu)
    if x < 0.0:
        raise ValueError("x must be nonnegative")
    eng = _engine(jr)
    fd = eng.fd
    U = fd.U

    def f(e):
        epu = e + U
        expo = x / epu
        damp = 0.0 if expo > _EXP_UNDERFLOW else math.exp(-expo)
        return eng.c_a_scalar(e) * damp

    opts = dict(epsabs=1e-9, epsrel=1e-9, limit=400)
    if -U < mu < fd.mu_max:
        pv, err = quad(f, -U, fd.mu_max, weight="cauchy", wvar=mu, **opts)
    else:
        pts = [r for r in fd.cut_roots if abs(r - mu) > 1e-12]
        pv, err = quad(lambda e: f(e) / (e - mu), -U, fd.mu_max, points=pts, **opts)
    if err > 1e-6:
        raise QuadratureError("distribution quadrature did not converge", estimate=err)
    out = q_minus_u(U, mu) * pv / SQRT_PI
    if mu + U > 0.0:
        out += eng.local_term(mu, x)
    return float(out)


@dataclass(frozen=True)
class ProfileGrid:
    """Macroscopic fields on an x grid, with the two exact-identity residuals."""

    U: float
    x: np.ndarray
    rho_ratio: np.ndarray
    u_of_x: np.ndarray
    t_ratio: np.ndarray
    identity_residuals: tuple

    def rows(self):
        r1, r2 = self.identity_residuals
        for i in range(len(self.x)):
            yield (
                float(self.x[i]),
                float(self.rho_ratio[i]),
                float(self.u_of_x[i]),
                float(self.t_ratio[i]),
                float(r1[i]),
                float(r2[i]),
            )


def default_x_grid(n_points=64, x_min=1e-3, x_max=20.0):
    """Log-spaced grid resolving both the kinetic layer and the bulk limit."""
    return np.geomspace(x_min, x_max, n_points)


def _shared(x, jr):
    return _engine(jr).shared_integral(np.asarray(x, dtype=float))


def density_profile(x, jr: JumpResult):
    """rho(x)/rho_inf = 1 + I(x)."""
    return 1.0 + _shared(x, jr)


def velocity_profile(x, jr: JumpResult):
    """U(x) = U (1 - I(x))."""
    return jr.U * (1.0 - _shared(x, jr))


def temperature_profile(x, jr: JumpResult):
    """T(x)/T_inf = 1 + 2 (U^2 - 1/2) I(x)."""
    return 1.0 + 2.0 * (jr.U * jr.U - 0.5) * _shared(x, jr)


def profile_grid(jr: JumpResult, x=None, n_points=64, x_min=1e-3, x_max=20.0) -> ProfileGrid:
    """Evaluate all three fields from the single shared integral."""
    if x is None:
        x = default_x_grid(n_points, x_min, x_max)
    x = np.asarray(x, dtype=float)
    shared = _shared(x, jr)
    rho = 1.0 + shared
    u = jr.U * (1.0 - shared)
    t = 1.0 + 2.0 * (jr.U * jr.U - 0.5) * shared
    res1 = rho + u / jr.U - 2.0
    res2 = t - 1.0 - 2.0 * (jr.U * jr.U - 0.5) * (rho - 1.0)
    return ProfileGrid(
        U=jr.U,
        x=x,
        rho_ratio=rho,
        u_of_x=u,
        t_ratio=t,
        identity_residuals=(res1, res2),
    )
