"""Compare empirical SSP similarities with analytic kernels.

Radial profiles, 2-D similarity maps, convergence sweeps over the size
of the phase matrix, and a direction-dependence measure.
"""

from dataclasses import dataclass, field, replace

import numpy as np

from .encoder import check_length_scale, similarity
from .exceptions import DomainError
from .kernels import KernelSpec, quadrature_kernel
from .phase import build_hexssp, build_product_ssp, build_randssp
from .sampling import RadialDistribution, sample_isotropic_direction

__all__ = [
    "SimilarityProfile",
    "BuilderConfig",
    "ConvergenceReport",
    "default_radii",
    "kernel_profile",
    "empirical_profile",
    "heatmap2d",
    "convergence_sweep",
    "anisotropy_gap",
    "analytic_reference",
    "derive_seed",
]

DEFAULT_POINTS = 201
DEFAULT_RMAX = 10.0
DEFAULT_DIRECTIONS = 64


def default_radii(ell=1.0, rmax=DEFAULT_RMAX, points=DEFAULT_POINTS):
    """Evaluation grid of ``points`` radii on ``[0, rmax * ell]``."""
    return np.linspace(0.0, rmax * ell, points)


@dataclass(frozen=True, eq=False)
class SimilarityProfile:
    """Kernel or similarity values sampled along a ray."""

    radii: np.ndarray
    direction: np.ndarray
    values: np.ndarray
    label: str = ""
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        radii = np.asarray(self.radii, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if radii.ndim != 1 or values.shape != radii.shape:
            raise DomainError("radii and values must be matching 1-D arrays")
        if np.any(radii < 0) or np.any(np.diff(radii) <= 0):
            raise DomainError("radii must be nonnegative and strictly increasing")
        if not np.all(np.isfinite(values)):
            raise DomainError("profile values must be finite")
        object.__setattr__(self, "radii", radii)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "direction", np.asarray(self.direction, dtype=float))


def kernel_profile(spec, radii=None):
    """Analytic kernel ``spec`` along the first axis."""
    if radii is None:
        radii = default_radii(spec.ell)
    radii = np.asarray(radii, dtype=float)
    direction = np.zeros(spec.n)
    direction[0] = 1.0
    return SimilarityProfile(radii, direction, spec(radii), label=spec.label, meta={"kind": spec.kind})


def empirical_profile(pm, ell=1.0, direction=None, radii=None):
    """Similarity ``similarity(pm, r * direction, 0, ell)`` for each radius."""
    ell = check_length_scale(ell)
    if direction is None:
        direction = np.zeros(pm.n)
        direction[0] = 1.0
    direction = np.asarray(direction, dtype=float)
    if direction.shape != (pm.n,):
        raise DomainError(f"direction must have shape ({pm.n},)")
    if not np.isclose(np.linalg.norm(direction), 1.0, atol=1e-12):
        raise DomainError("direction must be a unit vector")
    if radii is None:
        radii = default_radii(ell)
    radii = np.asarray(radii, dtype=float)
    values = similarity(pm, radii[:, None] * direction, ell=ell)
    return SimilarityProfile(
        radii,
        direction,
        values,
        label=f"empirical[{pm.kind}](M={pm.M}, ell={ell:g})",
        meta={"construction": pm.construction, "M": pm.M},
    )


def heatmap2d(pm, ell=1.0, extent=10.0, resolution=101):
    """Similarity to the origin on a square lattice over ``[-extent, extent]**2``.

    Returns ``(xs, ys, K)`` where ``K[i, j]`` is the value at
    ``(xs[j], ys[i])``.
    """
    if pm.n != 2:
        raise DomainError(f"heatmap2d needs a 2-D phase matrix, got n={pm.n}")
    if not extent > 0 or int(resolution) < 2:
        raise DomainError("extent must be positive and resolution >= 2")
    xs = np.linspace(-extent, extent, int(resolution))
    ys = xs.copy()
    gx, gy = np.meshgrid(xs, ys)
    pts = np.stack([gx, gy], axis=-1)
    return xs, ys, similarity(pm, pts, ell=ell)


def evenly_spread_directions(n, count):
    """Deterministic set of ``count`` unit directions in R^n.

    In 2-D these are angles ``k * pi / count`` (the similarity is even, so
    a half-turn covers every direction).  In higher dimensions the
    coordinate axes come first, followed by a fixed-seed isotropic sample.
    """
    if count < 2:
        raise DomainError("need at least two directions")
    if n == 2:
        ang = np.arange(count) * np.pi / count
        return np.stack([np.cos(ang), np.sin(ang)], axis=1)
    axes = np.eye(n)[: min(n, count)]
    rest = count - len(axes)
    if rest <= 0:
        return axes
    extra = sample_isotropic_direction(n, np.random.default_rng(0), rest)
    return np.concatenate([axes, extra])


def anisotropy_gap(pm, ell=1.0, radius=np.pi, directions=DEFAULT_DIRECTIONS):
    """Spread (max minus min) of similarity over directions at fixed radius."""
    if pm.n < 2:
        raise DomainError("anisotropy needs n >= 2")
    u = evenly_spread_directions(pm.n, int(directions))
    values = similarity(pm, radius * u, ell=ell)
    return float(values.max() - values.min())


def analytic_reference(pm, ell=1.0):
    """Analytic kernel that the similarity of ``pm`` estimates.

    Returns a callable of radius along the first axis.  Uniform, chi and
    scaled-beta magnitudes map onto the hypergeometric, Gaussian and jinc
    closed forms; anything else falls back to quadrature.  For the product
    baseline along an axis the estimator mixes one 1-D kernel with the
    constant 1 from the other axes.
    """
    c = pm.construction
    dist = c.get("dist")
    if dist is None:
        raise DomainError("phase matrix carries no magnitude law")
    n = pm.n
    if c.get("kind") == "product":
        one_d = _closed_form(dist, 1, ell)
        return lambda r: (one_d(r) + (n - 1)) / n
    return _closed_form(dist, n, ell)


def _closed_form(dist, n, ell):
    # closed forms assume unit support, so dist's own scale joins ell
    unit_ell = ell * dist.length_scale
    if dist.kind == "uniform":
        return KernelSpec("hypergeometric", n=n, ell=unit_ell)
    if dist.kind == "chi" and dist.n == n:
        return KernelSpec("gaussian", n=n, ell=unit_ell)
    if dist.kind == "scaled_beta" and dist.n == n:
        return KernelSpec("jinc", n=n, ell=unit_ell)
    return lambda r: quadrature_kernel(dist, n, r, ell)


@dataclass(frozen=True)
class BuilderConfig:
    """Parameters for one of the phase-matrix builders.

    ``kind`` is ``"randssp"``, ``"hexssp"`` or ``"product"``; only the
    size fields relevant to that builder are used.  ``scales`` fixes the
    hexssp scales (one per scale index) instead of drawing them.
    """

    kind: str
    n: int
    dist: RadialDistribution
    M: int = 1000
    n_rotations: int = 50
    n_scales: int = 20
    M_per_axis: int = 1000
    scales: tuple = None

    def build(self, seed):
        if self.kind == "randssp":
            return build_randssp(self.n, self.M, self.dist, seed)
        if self.kind == "hexssp":
            return build_hexssp(self.n, self.n_rotations, self.n_scales, self.dist, seed, scales=self.scales)
        if self.kind == "product":
            return build_product_ssp(self.n, self.M_per_axis, self.dist, seed)
        raise DomainError(f"unknown builder kind {self.kind!r}")

    def with_value(self, param, value):
        if param not in ("M", "n_rotations", "n_scales", "M_per_axis"):
            raise DomainError(f"cannot sweep {param!r}")
        return replace(self, **{param: int(value)})


def derive_seed(master_seed, *index):
    """64-bit seed for one cell of a sweep, derived from the master seed."""
    ss = np.random.SeedSequence((int(master_seed),) + tuple(int(i) for i in index))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


@dataclass(frozen=True, eq=False)
class ConvergenceReport:
    """Error of the empirical kernel versus an analytic reference per sweep value.

    ``max_abs`` and ``rmse`` hold per-seed errors, shape
    ``(len(values), n_seeds)``.
    """

    variable: str
    values: tuple
    max_abs: np.ndarray
    rmse: np.ndarray
    seeds: tuple
    slope: float = None

    @property
    def max_abs_median(self):
        return np.median(self.max_abs, axis=1)

    @property
    def rmse_median(self):
        return np.median(self.rmse, axis=1)


def convergence_sweep(config, reference, sweep, seeds=10, param="M", radii=None, ell=1.0,
                      master_seed=0, direction=None):
    """Empirical-kernel error as a function of one builder size parameter.

    For every value in ``sweep`` and every seed index, a fresh phase
    matrix is built from a seed derived from ``(master_seed, value index,
    seed index)`` and compared with ``reference`` (a :class:`KernelSpec`
    or any callable of radius) on ``radii``.  The slope is a least-squares
    fit of log median max-abs error against log sweep value, omitted for a
    single-value sweep.
    """
    sweep = [int(v) for v in sweep]
    if not sweep:
        raise DomainError("sweep must not be empty")
    seeds = int(seeds)
    if seeds < 1:
        raise DomainError("need at least one seed")
    if radii is None:
        radii = np.linspace(0.0, 6.0 * ell, 61)
    radii = np.asarray(radii, dtype=float)
    ref = np.asarray(reference(radii), dtype=float)

    max_abs = np.empty((len(sweep), seeds))
    rmse = np.empty((len(sweep), seeds))
    used = []
    for i, value in enumerate(sweep):
        cfg = config.with_value(param, value)
        row = []
        for s in range(seeds):
            seed = derive_seed(master_seed, i, s)
            row.append(seed)
            prof = empirical_profile(cfg.build(seed), ell, direction, radii)
            err = prof.values - ref
            max_abs[i, s] = np.max(np.abs(err))
            rmse[i, s] = np.sqrt(np.mean(err * err))
        used.append(tuple(row))

    slope = None
    if len(sweep) > 1:
        med = np.median(max_abs, axis=1)
        slope = float(np.polyfit(np.log(sweep), np.log(med), 1)[0])
    return ConvergenceReport(param, tuple(sweep), max_abs, rmse, tuple(used), slope)
