"""Gaussian Cauchy-transform special functions.

Everything downstream reduces to three functions of one (possibly
complex) variable: the Dawson integral, the sqrt(pi)-normalised Cauchy
transform of the Gaussian ``t_func``, and the plasma dispersion
function ``lambda_c``.  Real arguments always mean the principal-value
(real-line) branch; complex arguments mean the analytic continuation
off the real axis.  Evaluation is delegated to ``scipy.special.dawsn``
and the Faddeeva function ``scipy.special.wofz``, which carry the
accuracy budget (relative error well below 1e-13 over the domain used
here).
"""

from __future__ import annotations

import numpy as np
from scipy.special import dawsn, wofz

SQRT_PI = float(np.sqrt(np.pi))


def dawson(x):
    """Dawson integral D(x) = exp(-x^2) * int_0^x exp(s^2) ds.

    Odd, total, and bounded; D(x) ~ 1/(2x) for large |x|.
    Accepts scalars or arrays.
    """
    return dawsn(x)


def t_func(z):
    """Cauchy transform t(z) = pi^{-1/2} int exp(-s^2) / (s - z) ds.

    On the real axis this is the principal-value branch
    t(mu) = -2 D(mu); off the axis the analytic continuation in the
    matching half-plane.  Satisfies lambda_c(z) = 1 + z * t_func(z) and
    the Schwarz reflection t(conj z) = conj(t(z)).
    """
    z = np.asarray(z)
    if not np.iscomplexobj(z):
        out = -2.0 * dawsn(z)
        return out[()] if out.ndim == 0 else out
    zc = z.astype(complex)
    upper = 1j * SQRT_PI * wofz(zc)
    lower = np.conj(1j * SQRT_PI * wofz(np.conj(zc)))
    out = np.where(zc.imag > 0.0, upper, lower)
    on_axis = zc.imag == 0.0
    if np.any(on_axis):
        out = np.where(on_axis, -2.0 * dawsn(zc.real) + 0.0j, out)
    return out[()] if out.ndim == 0 else out


def lambda_c(z):
    """Plasma dispersion function 1 + z * t(z).

    lambda_c(0) = 1; boundary values on the real axis satisfy
    lambda_c^{+-}(mu) = lambda_c(mu) +- i sqrt(pi) mu exp(-mu^2).
    """
    z = np.asarray(z)
    out = 1.0 + z * t_func(z)
    return out[()] if np.ndim(out) == 0 else out


def lambda_c_boundary(mu):
    """Upper and lower boundary values of lambda_c on the real axis."""
    mu = np.asarray(mu, dtype=float)
    jump = 1j * SQRT_PI * mu * np.exp(-mu * mu)
    pv = 1.0 - 2.0 * mu * dawsn(mu)
    return pv + jump, pv - jump
