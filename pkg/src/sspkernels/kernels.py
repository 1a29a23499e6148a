"""Analytic radial kernels and the quadrature oracle for isotropic phases.

For phase vectors with uniformly distributed direction and magnitude
density ``p(r)`` in R^n, the induced shift-invariant kernel is radial:

    K(rho) = int_0^inf p(r) Lambda_nu(r rho) dr,   nu = n/2 - 1,

where ``Lambda_nu(t) = Gamma(nu+1) (2/t)**nu J_nu(t)`` is the average of
``cos(omega . x)`` over the sphere.  :func:`quadrature_kernel` integrates
this directly for any :class:`~sspkernels.sampling.RadialDistribution`;
the closed forms below are the special cases

* uniform ``r`` in 1-D: ``sin(rho) / rho``
* ``r ~ chi(n)``: ``exp(-rho**2 / 2)``
* ``r ~ U(0, 1)`` in n-D: ``sum_k (-rho**2/4)**k / ((2k+1) (n/2)_k k!)``
* ``r`` uniform in the unit n-ball: ``2**(n/2-1) n Gamma(n/2) J_{n/2}(rho) / rho**(n/2)``

All of them take ``rho = |x| / ell``.
"""

import math
from dataclasses import dataclass

import mpmath
import numpy as np

from .exceptions import AccuracyError, DomainError
from .sampling import RadialDistribution
from .specfun import DEFAULT_SERIES, SeriesControl, bessel_lambda

__all__ = [
    "KernelSpec",
    "sinc_kernel",
    "gaussian_kernel",
    "hypergeometric_kernel",
    "jinc_kernel",
    "quadrature_kernel",
    "reference_distribution",
]

KERNEL_KINDS = ("sinc", "gaussian", "hypergeometric", "jinc", "quadrature")

# hypergeometric series is abandoned for quadrature beyond this rho
HYPERGEOMETRIC_SERIES_MAX_RHO = 40.0
# sum of |terms| above which the series is redone in extended precision
_CANCELLATION_LIMIT = 1e3

QUAD_TOL = 1e-12
QUAD_MAX_INTERVALS = 20000
_GL_LOW = np.polynomial.legendre.leggauss(15)
_GL_HIGH = np.polynomial.legendre.leggauss(31)


def _radii(r, ell):
    ell = float(ell)
    if not (math.isfinite(ell) and ell > 0):
        raise DomainError(f"length scale must be positive and finite, got {ell!r}")
    rho = np.abs(np.asarray(r, dtype=float)) / ell
    if np.any(np.isnan(rho)):
        raise DomainError("radius must not be NaN")
    return rho


def _out(values):
    values = np.asarray(values, dtype=float)
    if values.ndim == 0:
        return float(values)
    return values


def _check_n(n):
    if int(n) != n or n < 1:
        raise DomainError(f"feature dimension must be a positive integer, got {n!r}")
    return int(n)


def sinc_kernel(r, ell=1.0):
    """``sin(u) / u`` with ``u = r / ell``."""
    u = _radii(r, ell)
    with np.errstate(invalid="ignore", divide="ignore"):
        direct = np.sin(u) / u
    series = 1.0 - u * u / 6.0 + u**4 / 120.0
    return _out(np.where(u < 1e-4, series, direct))


def gaussian_kernel(r, ell=1.0):
    """``exp(-rho**2 / 2)`` with ``rho = r / ell``."""
    rho = _radii(r, ell)
    return _out(np.exp(-0.5 * rho * rho))


def _hypergeometric_scalar(n, rho, ctl):
    if rho == 0:
        return 1.0
    if rho > HYPERGEOMETRIC_SERIES_MAX_RHO:
        return _quadrature_scalar(RadialDistribution.uniform(1.0), n, rho)
    half_n = n / 2.0
    q = -0.25 * rho * rho
    # t_k = q^k / ((2k+1) (n/2)_k k!)
    term = 1.0
    total = 1.0
    abs_total = 1.0
    for k in range(ctl.max_terms):
        term *= q * (2 * k + 1) / ((2 * k + 3) * (half_n + k) * (k + 1))
        total += term
        abs_total += abs(term)
        if abs(term) <= ctl.rel_tol * abs(total):
            break
    else:
        raise AccuracyError(
            f"hypergeometric series did not converge at rho={rho!r}", value=total, error=abs(term)
        )
    if abs_total < _CANCELLATION_LIMIT:
        return total
    # The alternating terms outgrow the result by abs_total/|K|; sum again
    # with enough extra digits to absorb that loss.
    extra = int(math.ceil(math.log10(abs_total))) + 20
    with mpmath.workdps(extra):
        q_mp = -mpmath.mpf(rho) ** 2 / 4
        half_mp = mpmath.mpf(n) / 2
        term_mp = mpmath.mpf(1)
        total_mp = mpmath.mpf(1)
        tiny = mpmath.mpf(10) ** (-(extra - 2))
        for k in range(ctl.max_terms):
            term_mp *= q_mp * (2 * k + 1) / ((2 * k + 3) * (half_mp + k) * (k + 1))
            total_mp += term_mp
            if abs(term_mp) <= tiny * abs_total:
                return float(total_mp)
    raise AccuracyError(
        f"extended-precision hypergeometric series did not converge at rho={rho!r}",
        value=float(total_mp),
        error=float(abs(term_mp)),
    )


def hypergeometric_kernel(n, r, ell=1.0, ctl=DEFAULT_SERIES):
    """Integrated hypergeometric kernel (magnitudes uniform on [0, 1/ell]).

    Sums the power series in ``rho = r / ell``.  When the alternating
    terms grow large enough to cost double-precision digits the same
    series is re-summed in extended precision; for ``rho > 40`` the value
    comes from :func:`quadrature_kernel` with a uniform magnitude law.
    """
    n = _check_n(n)
    rho = _radii(r, ell)
    flat = np.array([_hypergeometric_scalar(n, float(v), ctl) for v in rho.ravel()])
    return _out(flat.reshape(rho.shape))


def jinc_kernel(n, r, ell=1.0):
    """n-jinc kernel (magnitudes uniform inside the n-ball of radius 1/ell).

    ``2**(n/2-1) n Gamma(n/2) J_{n/2}(rho) / rho**(n/2)``; equal to
    ``2 J_1(rho) / rho`` for ``n = 2`` and ``sin(rho) / rho`` for ``n = 1``.
    """
    n = _check_n(n)
    rho = _radii(r, ell)
    # identical to 0F1(n/2 + 1; -rho**2 / 4)
    return _out(bessel_lambda(n / 2.0, rho))


def _panel_edges(dist, rho):
    lo, hi = dist.support()
    edges = set(float(v) for v in dist.breakpoints())
    edges.update((lo, hi))
    span = hi - lo
    # at least 8 panels, and none wider than half a Bessel oscillation
    width = span / 8.0
    if rho > 0:
        width = min(width, math.pi / rho)
    count = int(math.ceil(span / width))
    edges.update(np.linspace(lo, hi, count + 1).tolist())
    return np.array(sorted(e for e in edges if lo <= e <= hi))


def _quadrature_scalar(dist, n, rho, tol=QUAD_TOL, max_intervals=QUAD_MAX_INTERVALS):
    nu = n / 2.0 - 1.0

    def integrand(s):
        return dist.pdf(s) * bessel_lambda(nu, s * rho)

    edges = _panel_edges(dist, rho)
    a = edges[:-1]
    b = edges[1:]
    total_width = edges[-1] - edges[0]
    value = 0.0
    err = 0.0
    evaluated = 0
    while a.size:
        evaluated += a.size
        if evaluated > max_intervals:
            raise AccuracyError(
                f"quadrature exceeded {max_intervals} intervals at rho={rho!r}",
                value=value,
                error=err,
            )
        mid = 0.5 * (a + b)[:, None]
        half = 0.5 * (b - a)[:, None]
        x_lo, w_lo = _GL_LOW
        x_hi, w_hi = _GL_HIGH
        q_lo = (integrand(mid + half * x_lo) * w_lo).sum(axis=1) * half[:, 0]
        q_hi = (integrand(mid + half * x_hi) * w_hi).sum(axis=1) * half[:, 0]
        diff = np.abs(q_hi - q_lo)
        ok = diff <= tol * np.maximum((b - a) / total_width, 1e-3)
        value += q_hi[ok].sum()
        err += diff[ok].sum()
        m = 0.5 * (a[~ok] + b[~ok])
        a, b = np.concatenate([a[~ok], m]), np.concatenate([m, b[~ok]])
    return float(value)


def quadrature_kernel(dist, n, r, ell=1.0, tol=QUAD_TOL):
    """Isotropic kernel of magnitude law ``dist`` in R^n, by quadrature.

    Integrates ``p(s) Lambda_{n/2-1}(s rho)`` over the support of ``dist``
    with ``rho = r / ell``.  Panels are no wider than ``pi / rho`` and are
    bisected until 15- and 31-point Gauss-Legendre rules agree to ``tol``
    (scaled by panel width).  A chi law is truncated where its tail mass
    drops below 1e-12.
    """
    n = _check_n(n)
    if not isinstance(dist, RadialDistribution):
        raise DomainError("quadrature_kernel needs a RadialDistribution")
    if dist.kind in ("chi", "scaled_beta") and dist.n != n:
        raise DomainError(f"{dist.kind} law has n={dist.n} but the kernel has n={n}")
    rho = _radii(r, ell)
    flat = np.array([_quadrature_scalar(dist, n, float(v), tol) for v in rho.ravel()])
    return _out(flat.reshape(rho.shape))


def reference_distribution(kind, n, ell=1.0):
    """Magnitude law whose isotropic kernel is the closed form ``kind``."""
    n = _check_n(n)
    if kind in ("sinc", "hypergeometric"):
        return RadialDistribution.uniform(length_scale=ell)
    if kind == "gaussian":
        return RadialDistribution.chi(n, length_scale=ell)
    if kind == "jinc":
        return RadialDistribution.scaled_beta(n, length_scale=ell)
    raise DomainError(f"no reference distribution for kernel kind {kind!r}")


@dataclass(frozen=True)
class KernelSpec:
    """A named analytic kernel with its dimension and length scale.

    ``dist`` is only used by the ``"quadrature"`` kind.  Calling an instance
    on radii evaluates the kernel; :meth:`at_points` takes points in R^n.
    """

    kind: str
    n: int = 1
    ell: float = 1.0
    dist: RadialDistribution = None
    ctl: SeriesControl = DEFAULT_SERIES

    def __post_init__(self):
        if self.kind not in KERNEL_KINDS:
            raise DomainError(f"unknown kernel kind {self.kind!r}")
        _check_n(self.n)
        if not (math.isfinite(self.ell) and self.ell > 0):
            raise DomainError(f"length scale must be positive and finite, got {self.ell!r}")
        if self.kind == "sinc" and self.n != 1:
            raise DomainError("the sinc kernel is one-dimensional")
        if self.kind == "quadrature":
            if self.dist is None:
                raise DomainError("quadrature kernel needs a magnitude distribution")
            if self.dist.kind in ("chi", "scaled_beta") and self.dist.n != self.n:
                raise DomainError(f"{self.dist.kind} law has n={self.dist.n}, kernel has n={self.n}")

    def __call__(self, r):
        if self.kind == "sinc":
            return sinc_kernel(r, self.ell)
        if self.kind == "gaussian":
            return gaussian_kernel(r, self.ell)
        if self.kind == "hypergeometric":
            return hypergeometric_kernel(self.n, r, self.ell, self.ctl)
        if self.kind == "jinc":
            return jinc_kernel(self.n, r, self.ell)
        return quadrature_kernel(self.dist, self.n, r, self.ell)

    def at_points(self, x):
        """Kernel at displacement(s) ``x`` with shape ``(..., n)``."""
        x = np.asarray(x, dtype=float)
        if x.shape[-1:] != (self.n,):
            raise DomainError(f"points must have last axis {self.n}")
        return self(np.linalg.norm(x, axis=-1))

    @property
    def label(self):
        if self.kind == "quadrature":
            return f"quadrature[{self.dist.kind}](n={self.n}, ell={self.ell:g})"
        return f"{self.kind}(n={self.n}, ell={self.ell:g})"
