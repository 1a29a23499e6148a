"""Seedable random sources: simplex vertices, Haar rotations, isotropic
directions and radial magnitude laws.

All samplers take an explicit :class:`numpy.random.Generator`; none of
them touch global random state.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .exceptions import DomainError

__all__ = [
    "RadialDistribution",
    "make_rng",
    "simplex_vertices",
    "haar_rotation",
    "sample_radius",
    "radial_pdf",
    "radial_cdf",
    "sample_isotropic_direction",
    "stratified_radii",
    "radial_ppf",
]

KINDS = ("uniform", "chi", "scaled_beta", "tabulated")

# tail mass left beyond the truncation radius of a chi law
CHI_TAIL_MASS = 1e-12


def make_rng(seed):
    """Return a Generator for ``seed`` (an int, SeedSequence or Generator)."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _resolve_scale(lam, length_scale):
    if lam is None and length_scale is None:
        return 1.0
    if lam is not None and length_scale is not None:
        if not math.isclose(lam * length_scale, 1.0, rel_tol=1e-12):
            raise DomainError(
                f"lam={lam!r} and length_scale={length_scale!r} violate lam = 1/length_scale"
            )
        return float(lam)
    if lam is not None:
        return float(lam)
    return 1.0 / float(length_scale)


@dataclass(frozen=True, eq=False)
class RadialDistribution:
    """Law of the phase-vector magnitude ``r = |omega|``.

    Use the constructors :meth:`uniform`, :meth:`chi`, :meth:`scaled_beta`
    and :meth:`tabulated` rather than the raw initializer.

    ``lam`` is the support radius for the uniform and scaled-beta laws and
    the scale factor applied to a unit chi variable.  It is always the
    reciprocal of ``length_scale``.
    """

    kind: str
    n: int = 1
    lam: float = 1.0
    table_r: tuple = ()
    table_p: tuple = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown radial distribution kind {self.kind!r}")
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"n must be a positive integer, got {self.n!r}")
        if not (math.isfinite(self.lam) and self.lam > 0):
            raise DomainError(f"lam must be positive and finite, got {self.lam!r}")
        if self.kind == "tabulated":
            r = np.asarray(self.table_r, dtype=float)
            p = np.asarray(self.table_p, dtype=float)
            if r.ndim != 1 or r.shape != p.shape or r.size < 2:
                raise DomainError("tabulated density needs matching 1-D r and p with >= 2 points")
            if r[0] < 0 or np.any(np.diff(r) <= 0):
                raise DomainError("tabulated radii must start at >= 0 and increase strictly")
            if np.any(p < 0) or not np.all(np.isfinite(p)):
                raise DomainError("tabulated density must be finite and nonnegative")
            mass = np.trapezoid(p, r)
            if not mass > 0:
                raise DomainError("tabulated density has zero mass")
            # an already-normalized table is kept bit-for-bit (serialization)
            if abs(mass - 1.0) > 1e-14:
                p = p / mass
            object.__setattr__(self, "table_r", tuple(r.tolist()))
            object.__setattr__(self, "table_p", tuple(p.tolist()))

    def __eq__(self, other):
        if not isinstance(other, RadialDistribution):
            return NotImplemented
        return (self.kind, self.n, self.lam, self.table_r, self.table_p) == (
            other.kind, other.n, other.lam, other.table_r, other.table_p
        )

    def __hash__(self):
        return hash((self.kind, self.n, self.lam, self.table_r, self.table_p))

    @classmethod
    def uniform(cls, lam=None, length_scale=None, n=1):
        """``r ~ U(0, lam)``."""
        return cls("uniform", n=n, lam=_resolve_scale(lam, length_scale))

    @classmethod
    def chi(cls, n, length_scale=None, lam=None):
        """``r ~ chi(n) / length_scale``; gives the Gaussian kernel."""
        return cls("chi", n=n, lam=_resolve_scale(lam, length_scale))

    @classmethod
    def scaled_beta(cls, n, lam=None, length_scale=None):
        """``r ~ lam * Beta(n, 1)``: uniform inside the n-ball of radius lam."""
        return cls("scaled_beta", n=n, lam=_resolve_scale(lam, length_scale))

    @classmethod
    def tabulated(cls, r, density, n=1):
        """Piecewise-linear density through ``(r, density)``, renormalized
        to unit trapezoidal mass."""
        return cls("tabulated", n=n, lam=1.0, table_r=tuple(r), table_p=tuple(density))

    @property
    def length_scale(self):
        return 1.0 / self.lam

    def support(self):
        """Interval ``(lo, hi)`` outside which the density is negligible."""
        if self.kind in ("uniform", "scaled_beta"):
            return 0.0, self.lam
        if self.kind == "chi":
            tail = special.gammainccinv(self.n / 2.0, CHI_TAIL_MASS)
            return 0.0, self.lam * math.sqrt(2.0 * tail)
        return self.table_r[0], self.table_r[-1]

    def breakpoints(self):
        """Points where the density is not smooth (quadrature panel edges)."""
        lo, hi = self.support()
        if self.kind == "tabulated":
            return np.asarray(self.table_r)
        return np.array([lo, hi])

    def pdf(self, r):
        return radial_pdf(self, r)

    def cdf(self, r):
        return radial_cdf(self, r)

    def sample(self, rng, size=None):
        return sample_radius(self, rng, size)


def simplex_vertices(n):
    """Vertices of the regular simplex centred at the origin.

    Returns an ``(n + 1, n)`` array of unit vectors that sum to zero and
    have pairwise inner products ``-1/n``.  The first vertex lies along
    the first axis.
    """
    n = int(n)
    if n < 1:
        raise DomainError(f"simplex needs n >= 1, got {n}")
    # Start from the standard basis of R^{n+1}, centre it, then express it
    # in an orthonormal basis of the hyperplane sum(x) = 0 whose first
    # vector is the direction of the first centred vertex.
    centred = np.eye(n + 1) - 1.0 / (n + 1)
    centred /= np.linalg.norm(centred, axis=1, keepdims=True)
    basis = np.empty((n + 1, n))
    basis[:, 0] = centred[0]
    # Gram-Schmidt on the remaining centred vertices
    for j in range(1, n):
        v = centred[j] - basis[:, :j] @ (basis[:, :j].T @ centred[j])
        basis[:, j] = v / np.linalg.norm(v)
    verts = centred @ basis
    verts /= np.linalg.norm(verts, axis=1, keepdims=True)
    return verts


def haar_rotation(n, rng):
    """Draw a Haar-distributed rotation from SO(n).

    QR of a standard normal matrix with the signs of R's diagonal moved
    into Q gives Haar measure on O(n); negating one column when the
    determinant is -1 keeps it uniform on SO(n).
    """
    n = int(n)
    if n < 1:
        raise DomainError(f"rotation needs n >= 1, got {n}")
    if n == 1:
        return np.ones((1, 1))
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def sample_isotropic_direction(n, rng, size=None):
    """Uniform point(s) on the unit sphere in R^n.

    Returns shape ``(n,)`` when ``size`` is None, else ``(size, n)``.
    """
    n = int(n)
    if n < 1:
        raise DomainError(f"direction needs n >= 1, got {n}")
    count = 1 if size is None else int(size)
    v = rng.standard_normal((count, n))
    norms = np.linalg.norm(v, axis=1)
    # zero vectors have probability zero; redraw them anyway
    while np.any(norms == 0):
        bad = norms == 0
        v[bad] = rng.standard_normal((int(bad.sum()), n))
        norms = np.linalg.norm(v, axis=1)
    v /= norms[:, None]
    return v[0] if size is None else v


def sample_radius(dist, rng, size=None):
    """Draw magnitude(s) from ``dist``."""
    shape = () if size is None else size
    if dist.kind == "uniform":
        out = dist.lam * rng.random(shape)
    elif dist.kind == "chi":
        z = rng.standard_normal(np.shape(np.empty(shape)) + (dist.n,))
        out = dist.lam * np.sqrt(np.sum(z * z, axis=-1))
    elif dist.kind == "scaled_beta":
        out = dist.lam * rng.random(shape) ** (1.0 / dist.n)
    else:
        out = _tabulated_inverse_cdf(dist, rng.random(shape))
    if size is None:
        return float(out)
    return out


def radial_ppf(dist, u):
    """Inverse CDF (quantile function) of ``dist`` at ``u`` in [0, 1]."""
    u = np.asarray(u, dtype=float)
    if np.any((u < 0) | (u > 1)):
        raise DomainError("quantile levels must lie in [0, 1]")
    if dist.kind == "uniform":
        out = dist.lam * u
    elif dist.kind == "scaled_beta":
        out = dist.lam * u ** (1.0 / dist.n)
    elif dist.kind == "chi":
        out = dist.lam * np.sqrt(2.0 * special.gammaincinv(dist.n / 2.0, u))
    else:
        out = _tabulated_inverse_cdf(dist, u)
    if out.ndim == 0:
        return float(out)
    return out


def stratified_radii(dist, rng, count):
    """``count`` magnitudes, one from each equal-probability stratum of ``dist``.

    Each draw is ``ppf((j + U_j) / count)``, so the set is a sample of
    ``dist`` with much lower variance than ``count`` independent draws.
    """
    count = int(count)
    if count < 1:
        raise DomainError("count must be >= 1")
    u = (np.arange(count) + rng.random(count)) / count
    return np.asarray(radial_ppf(dist, np.minimum(u, 1.0)), dtype=float)


def _tabulated_inverse_cdf(dist, u):
    r = np.asarray(dist.table_r)
    p = np.asarray(dist.table_p)
    h = np.diff(r)
    cum = np.concatenate([[0.0], np.cumsum(0.5 * h * (p[:-1] + p[1:]))])
    u = np.asarray(u, dtype=float) * cum[-1]
    i = np.clip(np.searchsorted(cum, u, side="right") - 1, 0, len(h) - 1)
    # within segment i the CDF is cum_i + p_i s + (slope/2) s^2
    p0 = p[i]
    slope = (p[i + 1] - p[i]) / h[i]
    need = u - cum[i]
    disc = np.sqrt(np.maximum(p0 * p0 + 2.0 * slope * need, 0.0))
    with np.errstate(divide="ignore", invalid="ignore"):
        # stable root of (slope/2) s^2 + p0 s - need = 0
        s = np.where(p0 + disc > 0, 2.0 * need / (p0 + disc), 0.0)
    return np.clip(r[i] + s, r[i], r[i + 1])


def _chi_logpdf_unit(x, n):
    return (n - 1) * np.log(x) - 0.5 * x * x - (n / 2.0 - 1) * math.log(2.0) - math.lgamma(n / 2.0)


def radial_pdf(dist, r):
    """Exact density of ``dist`` at ``r >= 0`` (vectorized)."""
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr < 0) or np.any(np.isnan(r_arr)):
        raise DomainError("radial_pdf needs r >= 0")
    lam = dist.lam
    if dist.kind == "uniform":
        out = np.where(r_arr <= lam, 1.0 / lam, 0.0)
    elif dist.kind == "scaled_beta":
        n = dist.n
        out = np.where(r_arr <= lam, n * lam ** (-n) * r_arr ** (n - 1), 0.0)
    elif dist.kind == "chi":
        x = r_arr / lam
        with np.errstate(divide="ignore"):
            logp = _chi_logpdf_unit(x, dist.n)
        out = np.exp(logp) / lam
        if dist.n == 1:
            out = np.where(x == 0, math.sqrt(2.0 / math.pi) / lam, out)
    else:
        tr = np.asarray(dist.table_r)
        out = np.interp(r_arr, tr, np.asarray(dist.table_p), left=0.0, right=0.0)
    if out.ndim == 0:
        return float(out)
    return out


def radial_cdf(dist, r):
    """Cumulative distribution ``P(|omega| <= r)`` (vectorized)."""
    r_arr = np.maximum(np.asarray(r, dtype=float), 0.0)
    lam = dist.lam
    if dist.kind == "uniform":
        out = np.clip(r_arr / lam, 0.0, 1.0)
    elif dist.kind == "scaled_beta":
        out = np.clip(r_arr / lam, 0.0, 1.0) ** dist.n
    elif dist.kind == "chi":
        out = special.gammainc(dist.n / 2.0, 0.5 * (r_arr / lam) ** 2)
    else:
        tr = np.asarray(dist.table_r)
        tp = np.asarray(dist.table_p)
        h = np.diff(tr)
        cum = np.concatenate([[0.0], np.cumsum(0.5 * h * (tp[:-1] + tp[1:]))])
        i = np.clip(np.searchsorted(tr, r_arr, side="right") - 1, 0, len(h) - 1)
        s = np.clip(r_arr - tr[i], 0.0, h[i])
        slope = (tp[i + 1] - tp[i]) / h[i]
        out = cum[i] + tp[i] * s + 0.5 * slope * s * s
        out = np.where(r_arr < tr[0], 0.0, np.minimum(out, 1.0))
    if out.ndim == 0:
        return float(out)
    return out
