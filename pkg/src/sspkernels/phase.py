"""Phase matrices for SSP embeddings.

Only the non-redundant half of the conjugate-symmetric phase matrix is
stored: ``M`` rows ``omega_k``.  The full embedding has ``2 M + 1``
Fourier coefficients, the extra one being the constant (DC) term.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import DomainError
from .sampling import (
    RadialDistribution,
    haar_rotation,
    sample_isotropic_direction,
    sample_radius,
    simplex_vertices,
    stratified_radii,
)

__all__ = [
    "PhaseMatrix",
    "build_hexssp",
    "build_randssp",
    "build_product_ssp",
    "dumps",
    "loads",
    "save",
    "load",
]

FORMAT_TAG = "ssp-phase"
FORMAT_VERSION = "v1"
BUILDER_KINDS = ("hexssp", "randssp", "product")


@dataclass(frozen=True, eq=False)
class PhaseMatrix:
    """Immutable set of phase rows plus the record of how they were built.

    Attributes
    ----------
    rows : ndarray, shape (M, n)
        Phase vectors; no row is zero.
    construction : dict
        ``kind``, ``seed`` and builder parameters.  Treat as read-only.
    includes_dc : bool
        Whether the embedding carries the constant zero-frequency term.
    """

    rows: np.ndarray
    construction: dict = field(default_factory=dict)
    includes_dc: bool = True

    def __post_init__(self):
        rows = np.array(self.rows, dtype=float, copy=True)
        if rows.ndim != 2 or rows.shape[0] < 1 or rows.shape[1] < 1:
            raise DomainError(f"phase rows must be a non-empty (M, n) array, got shape {rows.shape}")
        if not np.all(np.isfinite(rows)):
            raise DomainError("phase rows must be finite")
        if np.any(np.all(rows == 0, axis=1)):
            raise DomainError("zero phase rows are not stored; the DC term is a flag")
        rows.setflags(write=False)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "construction", dict(self.construction))
        kind = self.construction.get("kind")
        if kind == "hexssp":
            c = self.construction
            expected = c["n_rotations"] * c["n_scales"] * (self.n + 1)
            if rows.shape[0] != expected:
                raise DomainError(f"hexssp with these parameters needs {expected} rows, got {rows.shape[0]}")

    @property
    def n(self):
        return self.rows.shape[1]

    @property
    def M(self):
        return self.rows.shape[0]

    @property
    def dim(self):
        """Length of the real embedding vector, ``2 M + 1``.

        Without the DC flag the constant coefficient slot is kept but zero.
        """
        return 2 * self.M + 1

    @property
    def kind(self):
        return self.construction.get("kind")

    def __eq__(self, other):
        if not isinstance(other, PhaseMatrix):
            return NotImplemented
        return (
            self.includes_dc == other.includes_dc
            and np.array_equal(self.rows, other.rows)
            and _metadata_equal(self.construction, other.construction)
        )

    __hash__ = None

    def block(self, i, j):
        """Rows of orientation ``i`` at scale ``j`` of a HexSSP."""
        c = self.construction
        if c.get("kind") != "hexssp":
            raise DomainError("blocks are only defined for hexssp phase matrices")
        k = self.n + 1
        start = (i * c["n_scales"] + j) * k
        return self.rows[start:start + k]


def _metadata_equal(a, b):
    if a.keys() != b.keys():
        return False
    for key in a:
        x, y = a[key], b[key]
        if isinstance(x, np.ndarray) or isinstance(y, np.ndarray):
            if not np.array_equal(np.asarray(x), np.asarray(y)):
                return False
        elif x != y:
            return False
    return True


def _check_count(name, value, minimum=1):
    if int(value) != value or value < minimum:
        raise DomainError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return int(value)


def _check_seed(seed):
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise DomainError(f"seed must fit in an unsigned 64-bit integer, got {seed}")
    return seed


def _positive_radii(dist, rng, size):
    r = sample_radius(dist, rng, size)
    # an exact zero would be a DC row; it has probability zero, redraw it
    while np.any(r == 0):
        bad = r == 0
        r[bad] = sample_radius(dist, rng, int(bad.sum()))
    return r


def _stratified_positive(dist, rng, size):
    r = stratified_radii(dist, rng, size)
    while np.any(r == 0):
        r = stratified_radii(dist, rng, size)
    return r


SCALE_SAMPLING = ("stratified", "iid")


def build_hexssp(n, n_rotations, n_scales, dist, seed=0, scales=None, rotations=None,
                 scale_sampling="stratified"):
    """HexSSP phase matrix: scaled, rotated copies of the centred simplex.

    Rows are ``s_ij * R_i @ v_k`` ordered by orientation ``i``, scale
    ``j`` then vertex ``k``.  Each orientation draws its own rotation and
    its own ``n_scales`` magnitudes from an independent child stream of
    ``seed``, so the matrix does not depend on the order in which
    orientations are generated.  By default each orientation's scales are
    stratified (one draw per equal-probability band of ``dist``).

    Parameters
    ----------
    n : int
        Feature dimension.
    n_rotations, n_scales : int
        Number of simplex orientations and of scales per orientation.
    dist : RadialDistribution
        Magnitude law for the scales.
    seed : int
        Master seed.
    scales : array_like, optional
        Explicit scales, shape ``(n_scales,)`` shared by every orientation
        or ``(n_rotations, n_scales)``.  Overrides sampling.
    rotations : array_like, optional
        Explicit ``(n_rotations, n, n)`` rotations.  Overrides sampling.
    scale_sampling : {"stratified", "iid"}
        How scales are drawn when ``scales`` is not given.
    """
    n = _check_count("n", n)
    n_rotations = _check_count("n_rotations", n_rotations)
    n_scales = _check_count("n_scales", n_scales)
    seed = _check_seed(seed)
    if scale_sampling not in SCALE_SAMPLING:
        raise DomainError(f"scale_sampling must be one of {SCALE_SAMPLING}, got {scale_sampling!r}")

    children = np.random.SeedSequence(seed).spawn(n_rotations)
    streams = [np.random.default_rng(c) for c in children]

    if rotations is None:
        rots = np.stack([haar_rotation(n, rng) for rng in streams])
    else:
        rots = np.asarray(rotations, dtype=float).reshape(n_rotations, n, n)
        for r in rots:
            if not np.allclose(r.T @ r, np.eye(n), atol=1e-12) or not math.isclose(
                np.linalg.det(r), 1.0, abs_tol=1e-12
            ):
                raise DomainError("explicit rotations must lie in SO(n)")

    if scales is None:
        draw = _stratified_positive if scale_sampling == "stratified" else _positive_radii
        s = np.stack([draw(dist, rng, n_scales) for rng in streams])
    else:
        s = np.asarray(scales, dtype=float)
        if s.shape == (n_scales,):
            s = np.broadcast_to(s, (n_rotations, n_scales))
        if s.shape != (n_rotations, n_scales):
            raise DomainError(f"scales must have shape ({n_scales},) or ({n_rotations}, {n_scales})")
        if np.any(s <= 0) or not np.all(np.isfinite(s)):
            raise DomainError("scales must be positive and finite")

    verts = simplex_vertices(n)
    # (i, j, k, :) = s[i, j] * R_i @ v_k
    rotated = np.einsum("iab,kb->ika", rots, verts)
    rows = s[:, :, None, None] * rotated[:, None, :, :]

    construction = {
        "kind": "hexssp",
        "seed": seed,
        "n_rotations": n_rotations,
        "n_scales": n_scales,
        "dist": dist,
        "scales": np.array(s),
        "scales_source": "explicit" if scales is not None else scale_sampling,
    }
    if rotations is not None:
        construction["rotations"] = np.array(rots)
    return PhaseMatrix(rows.reshape(-1, n), construction, includes_dc=True)


def build_randssp(n, M, dist, seed=0):
    """Random isotropic phase matrix: ``M`` rows of radius times direction."""
    n = _check_count("n", n)
    M = _check_count("M", M)
    seed = _check_seed(seed)
    rng = np.random.default_rng(seed)
    r = _positive_radii(dist, rng, M)
    u = sample_isotropic_direction(n, rng, M)
    rows = r[:, None] * u
    return PhaseMatrix(rows, {"kind": "randssp", "seed": seed, "M": M, "dist": dist}, includes_dc=True)


def build_product_ssp(n, M_per_axis, dist_1d, seed=0):
    """Axis-aligned baseline: ``M_per_axis`` 1-D phases per axis.

    Each row is ``r * e_a`` with ``r`` drawn from ``dist_1d``.  The
    summed-cosine similarity of this matrix depends on direction, which
    is what the anisotropy measurement compares against.
    """
    n = _check_count("n", n, minimum=2)
    M_per_axis = _check_count("M_per_axis", M_per_axis)
    seed = _check_seed(seed)
    if dist_1d.n != 1:
        raise DomainError(f"product baseline needs a 1-D magnitude law, got n={dist_1d.n}")
    rng = np.random.default_rng(seed)
    rows = np.zeros((n * M_per_axis, n))
    for a in range(n):
        rows[a * M_per_axis:(a + 1) * M_per_axis, a] = _positive_radii(dist_1d, rng, M_per_axis)
    return PhaseMatrix(
        rows,
        {"kind": "product", "seed": seed, "M_per_axis": M_per_axis, "dist": dist_1d},
        includes_dc=True,
    )


# ---------------------------------------------------------------------------
# text serialization

def _fmt(x):
    return format(float(x), ".17g")


def _fmt_list(values):
    return ",".join(_fmt(v) for v in np.ravel(values))


def _parse_list(text):
    return np.array([float(v) for v in text.split(",")]) if text else np.array([])


def _dist_fields(dist):
    out = {"dist": dist.kind, "dist_n": str(dist.n), "dist_lam": _fmt(dist.lam)}
    if dist.kind == "tabulated":
        out["dist_r"] = _fmt_list(dist.table_r)
        out["dist_p"] = _fmt_list(dist.table_p)
    return out


def _dist_from_fields(f):
    kind = f.pop("dist")
    n = int(f.pop("dist_n"))
    lam = float(f.pop("dist_lam"))
    if kind == "tabulated":
        r = tuple(_parse_list(f.pop("dist_r")).tolist())
        p = tuple(_parse_list(f.pop("dist_p")).tolist())
        return RadialDistribution("tabulated", n=n, lam=lam, table_r=r, table_p=p)
    return RadialDistribution(kind, n=n, lam=lam)


_INT_KEYS = ("n_rotations", "n_scales", "M", "M_per_axis")


def dumps(pm):
    """Serialize ``pm`` to the ``ssp-phase v1`` text format."""
    c = pm.construction
    kind = c.get("kind", "randssp")
    header = {
        "kind": kind,
        "n": str(pm.n),
        "M": str(pm.M),
        "dc": "1" if pm.includes_dc else "0",
        "seed": str(int(c.get("seed", 0))),
    }
    for key in _INT_KEYS:
        if key in c and key != "M":
            header[key] = str(int(c[key]))
    if "dist" in c:
        header.update(_dist_fields(c["dist"]))
    if "scales" in c:
        header["scales"] = _fmt_list(c["scales"])
    if "scales_source" in c:
        header["scales_source"] = c["scales_source"]
    if "rotations" in c:
        header["rotations"] = _fmt_list(c["rotations"])
    lines = [" ".join([FORMAT_TAG, FORMAT_VERSION] + [f"{k}={v}" for k, v in header.items()])]
    lines.extend(" ".join(_fmt(v) for v in row) for row in pm.rows)
    return "\n".join(lines) + "\n"


def loads(text):
    """Parse the ``ssp-phase v1`` text format back into a PhaseMatrix."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise DomainError("empty phase-matrix text")
    head = lines[0].split()
    if head[:2] != [FORMAT_TAG, FORMAT_VERSION]:
        raise DomainError(f"not an {FORMAT_TAG} {FORMAT_VERSION} file")
    fields = {}
    for item in head[2:]:
        key, sep, value = item.partition("=")
        if not sep:
            raise DomainError(f"malformed header field {item!r}")
        fields[key] = value
    try:
        kind = fields.pop("kind")
        n = int(fields.pop("n"))
        M = int(fields.pop("M"))
        dc = fields.pop("dc") == "1"
        seed = int(fields.pop("seed"))
    except KeyError as exc:
        raise DomainError(f"missing header field {exc.args[0]!r}") from None
    if kind not in BUILDER_KINDS:
        raise DomainError(f"unknown phase-matrix kind {kind!r}")

    construction = {"kind": kind, "seed": seed}
    if kind == "randssp":
        construction["M"] = M
    for key in _INT_KEYS:
        if key in fields:
            construction[key] = int(fields.pop(key))
    if "dist" in fields:
        construction["dist"] = _dist_from_fields(fields)
    if "scales" in fields:
        s = _parse_list(fields.pop("scales"))
        construction["scales"] = s.reshape(construction["n_rotations"], construction["n_scales"])
    if "scales_source" in fields:
        construction["scales_source"] = fields.pop("scales_source")
    if "rotations" in fields:
        construction["rotations"] = _parse_list(fields.pop("rotations")).reshape(-1, n, n)
    if fields:
        raise DomainError(f"unknown header fields {sorted(fields)}")

    body = lines[1:]
    if len(body) != M:
        raise DomainError(f"header declares M={M} rows, found {len(body)}")
    rows = np.array([[float(v) for v in ln.split()] for ln in body], dtype=float)
    if rows.shape != (M, n):
        raise DomainError(f"rows must be {M} x {n}, got {rows.shape}")
    return PhaseMatrix(rows, construction, includes_dc=dc)


def save(pm, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps(pm))


def load(path):
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())
