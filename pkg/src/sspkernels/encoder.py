"""SSP embeddings and their inner-product similarity.

An embedding of ``x`` is the real inverse DFT of the conjugate-symmetric
coefficient vector ``(1, e^{j theta_1}, ..., e^{j theta_M},
e^{-j theta_M}, ..., e^{-j theta_1})`` with ``theta = A x / ell``.  By
Parseval, the dot product of two embeddings is a mean of cosines, which
is what :func:`similarity` computes without building the vectors.
"""

from dataclasses import dataclass, field

import numpy as np

from .exceptions import DomainError

__all__ = ["SSPVector", "encode", "similarity", "dot", "check_length_scale"]

# points per chunk when evaluating similarity over large grids
_CHUNK = 4096


def check_length_scale(ell):
    ell = float(ell)
    if not (np.isfinite(ell) and ell > 0):
        raise DomainError(f"length scale must be positive and finite, got {ell!r}")
    return ell


@dataclass(frozen=True, eq=False)
class SSPVector:
    """Real, unit-norm SSP embedding of length ``2 M + 1``."""

    values: np.ndarray
    source: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.values)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.values, dtype=dtype)


def _point(pm, x):
    x = np.asarray(x, dtype=float)
    if x.ndim == 0 and pm.n == 1:
        x = x.reshape(1)
    if x.shape[-1:] != (pm.n,):
        raise DomainError(f"point dimension {x.shape[-1:] or ()} does not match phase matrix n={pm.n}")
    if not np.all(np.isfinite(x)):
        raise DomainError("points must be finite")
    return x


def encode(pm, x, ell=1.0):
    """Embed a single point ``x`` in R^n as an :class:`SSPVector`."""
    ell = check_length_scale(ell)
    x = _point(pm, x)
    if x.ndim != 1:
        raise DomainError("encode takes a single point; loop or use similarity for batches")
    theta = pm.rows @ x / ell
    half = np.exp(1j * theta)
    dc = np.ones(1) if pm.includes_dc else np.zeros(1)
    coeffs = np.concatenate([dc, half, np.conj(half[::-1])])
    # numpy's ifft carries 1/d, which makes unit-modulus coefficients a
    # unit-norm vector; without DC only 2M of the d coefficients count
    values = np.fft.ifft(coeffs).real
    if not pm.includes_dc:
        values *= np.sqrt(len(coeffs) / (2.0 * pm.M))
    return SSPVector(values, {"construction": pm.construction, "ell": ell})


def dot(a, b):
    """Inner product of two embeddings of equal length."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise DomainError(f"length mismatch: {a.shape} vs {b.shape}")
    return float(a @ b)


def similarity(pm, x, y=None, ell=1.0, include_dc=False):
    """Empirical kernel between points ``x`` and ``y`` (default origin).

    Returns ``mean_k cos(omega_k . (x - y) / ell)``.  With ``include_dc``
    the constant coefficient is counted as well, giving
    ``(1 + 2 sum_k cos) / (2 M + 1)``, the exact embedding dot product.

    ``x`` and ``y`` broadcast over leading axes; the last axis is the
    feature dimension.  A scalar is accepted when ``n == 1``.
    """
    ell = check_length_scale(ell)
    x = _point(pm, x)
    disp = x if y is None else x - _point(pm, y)
    lead = disp.shape[:-1]
    flat = disp.reshape(-1, pm.n) / ell
    out = np.empty(flat.shape[0])
    w = pm.rows.T
    for start in range(0, flat.shape[0], _CHUNK):
        block = flat[start:start + _CHUNK]
        out[start:start + _CHUNK] = np.cos(block @ w).sum(axis=1)
    if include_dc and pm.includes_dc:
        out = (1.0 + 2.0 * out) / (2 * pm.M + 1)
    else:
        out = out / pm.M
    out = out.reshape(lead)
    if out.ndim == 0:
        return float(out)
    return out
