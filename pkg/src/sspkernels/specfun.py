"""Scalar special functions used by the analytic kernels.

Gamma and Bessel J are thin, domain-checked wrappers over :mod:`math` and
:mod:`scipy.special`.  The confluent limit function 0F1 is summed here
directly, with a hand-off to the Bessel identity

    J_nu(x) = (x/2)**nu / Gamma(nu + 1) * 0F1(nu + 1; -x**2 / 4)

once the alternating series would cancel badly.
"""

import math
from dataclasses import dataclass

import mpmath
import numpy as np
from scipy import special

from .exceptions import AccuracyError, DomainError

__all__ = [
    "SeriesControl",
    "gamma",
    "pochhammer",
    "hyp0f1",
    "bessel_j",
    "bessel_lambda",
]

# largest x with a finite double-precision Gamma(x)
GAMMA_MAX = 171.6243769563027

# 0F1 with z < -HYP0F1_BESSEL_Z is evaluated through J_{b-1}; the series
# would lose about 2*sqrt(|z|)*log10(e) digits to cancellation.
HYP0F1_BESSEL_Z = 25.0


@dataclass(frozen=True)
class SeriesControl:
    """Truncation control for power series.

    Parameters
    ----------
    rel_tol : float
        Stop once ``|term| <= rel_tol * |partial sum|``.
    max_terms : int
        Hard cap on the number of terms summed.
    """

    rel_tol: float = 1e-15
    max_terms: int = 500

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise DomainError(f"rel_tol must be positive, got {self.rel_tol!r}")
        if self.max_terms < 1:
            raise DomainError(f"max_terms must be >= 1, got {self.max_terms!r}")


DEFAULT_SERIES = SeriesControl()


def gamma(x):
    """Gamma function for positive real ``x``.

    Raises :class:`DomainError` for ``x <= 0`` or non-finite input and
    :class:`OverflowError` once the result exceeds the double range
    (``x > 171.62``).
    """
    x = float(x)
    if not math.isfinite(x) or x <= 0:
        raise DomainError(f"gamma is defined here for finite x > 0, got {x!r}")
    if x > GAMMA_MAX:
        raise OverflowError(f"gamma({x!r}) exceeds the double-precision range")
    return math.gamma(x)


def pochhammer(x, k):
    """Rising factorial ``(x)_k = x (x+1) ... (x+k-1)``; ``(x)_0 = 1``.

    Overflow saturates to ``inf`` with a :class:`RuntimeWarning`.
    """
    k = int(k)
    if k < 0:
        raise DomainError(f"pochhammer needs k >= 0, got {k}")
    out = 1.0
    for i in range(k):
        out *= x + i
    if math.isinf(out):
        import warnings

        warnings.warn(f"pochhammer({x!r}, {k}) overflowed", RuntimeWarning, stacklevel=2)
    return out


def hyp0f1(b, z, ctl=DEFAULT_SERIES):
    """Confluent hypergeometric limit function ``0F1(; b; z)`` for real b > 0.

    The series ``sum z**k / ((b)_k k!)`` is summed term by term.  For
    ``z < -25`` the value comes from the Bessel identity instead, where
    the series would shed more than ~4 significant digits.
    """
    b = float(b)
    z = float(z)
    if not b > 0:
        raise DomainError(f"hyp0f1 needs b > 0, got {b!r}")
    if not math.isfinite(z):
        raise DomainError(f"hyp0f1 needs finite z, got {z!r}")
    if z < -HYP0F1_BESSEL_Z:
        x = 2.0 * math.sqrt(-z)
        nu = b - 1.0
        log_scale = math.lgamma(b) - nu * math.log(x / 2.0)
        return float(math.exp(log_scale) * special.jv(nu, x))

    term = 1.0
    total = 1.0
    for k in range(ctl.max_terms):
        term *= z / ((b + k) * (k + 1))
        total += term
        if abs(term) <= ctl.rel_tol * abs(total):
            return total
    raise AccuracyError(
        f"hyp0f1({b!r}, {z!r}) did not converge in {ctl.max_terms} terms",
        value=total,
        error=abs(term),
    )


def bessel_j(nu, x):
    """Bessel function of the first kind ``J_nu(x)`` for ``nu, x >= 0``.

    Accepts scalars or arrays (broadcast together).  Backed by
    :func:`scipy.special.jv`.
    """
    nu_arr = np.asarray(nu, dtype=float)
    x_arr = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(nu_arr)) or np.any(nu_arr < 0):
        raise DomainError("bessel_j needs a finite order nu >= 0")
    if np.any(~np.isfinite(x_arr)) or np.any(x_arr < 0):
        raise DomainError("bessel_j needs finite x >= 0")
    out = special.jv(nu_arr, x_arr)
    if out.ndim == 0:
        return float(out)
    return out


# below this argument the normalized Bessel function is summed directly
_LAMBDA_SERIES_T = 2.0
_LAMBDA_SERIES_TERMS = 24


def bessel_lambda(nu, t):
    """Normalized Bessel function ``Gamma(nu+1) (2/t)**nu J_nu(t)``.

    Equals ``0F1(nu + 1; -t**2 / 4)``, so it is 1 at ``t = 0`` and stays
    finite for every ``t``.  This is the radial plane-wave average that
    appears inside the general isotropic kernel integral.  ``nu > -1`` is
    allowed so that the one-dimensional case ``nu = -1/2`` (where the
    function is ``cos t``) goes through the same path.  Vectorized over
    ``t``.
    """
    nu = float(nu)
    if not nu > -1:
        raise DomainError(f"bessel_lambda needs nu > -1, got {nu!r}")
    t = np.abs(np.asarray(t, dtype=float))
    out = np.empty_like(t)

    # the series does not cancel while t**2 / 4 stays below nu + 1
    small = t < max(_LAMBDA_SERIES_T, math.sqrt(nu + 1.0))
    if np.any(small):
        q = -0.25 * t[small] ** 2
        term = np.ones_like(q)
        acc = np.ones_like(q)
        for k in range(_LAMBDA_SERIES_TERMS):
            term = term * q / ((nu + 1 + k) * (k + 1))
            acc += term
        out[small] = acc

    big = ~small
    if np.any(big):
        tb = t[big]
        log_scale = math.lgamma(nu + 1) + nu * np.log(2.0 / tb)
        with np.errstate(over="ignore", invalid="ignore"):
            vals = np.exp(log_scale) * special.jv(nu, tb)
        # large orders overflow the scale factor while J_nu underflows
        bad = ~np.isfinite(vals)
        if np.any(bad):
            vals[bad] = [float(mpmath.hyp0f1(nu + 1, -0.25 * v * v)) for v in tb[bad]]
        out[big] = vals

    if out.ndim == 0:
        return float(out)
    return out
