import numpy as np
import pytest

from sspkernels.analysis import (
    BuilderConfig,
    SimilarityProfile,
    analytic_reference,
    anisotropy_gap,
    convergence_sweep,
    default_radii,
    derive_seed,
    empirical_profile,
    evenly_spread_directions,
    heatmap2d,
    kernel_profile,
)
from sspkernels.encoder import similarity
from sspkernels.exceptions import DomainError
from sspkernels.kernels import KernelSpec, gaussian_kernel, hypergeometric_kernel, jinc_kernel
from sspkernels.phase import build_hexssp, build_product_ssp, build_randssp
from sspkernels.sampling import RadialDistribution

UNIFORM = RadialDistribution.uniform(1.0)


def rot(deg):
    a = np.deg2rad(deg)
    return np.array([[np.cos(a), -np.sin(a)], [np.sin(a), np.cos(a)]])


class TestProfiles:
    def test_default_grid(self):
        r = default_radii(2.0)
        assert r.shape == (201,) and r[0] == 0 and r[-1] == 20.0

    @pytest.mark.parametrize("n", [1, 2, 5, 64])
    def test_kernel_profile_starts_at_one(self, n):
        prof = kernel_profile(KernelSpec("hypergeometric", n=n))
        assert prof.values[0] == 1.0
        assert prof.direction[0] == 1.0 and np.all(prof.direction[1:] == 0)

    def test_widening_with_dimension(self):
        k2 = kernel_profile(KernelSpec("hypergeometric", n=2), [0.0, 2.0]).values[1]
        k64 = kernel_profile(KernelSpec("hypergeometric", n=64), [0.0, 2.0]).values[1]
        assert k64 > k2

    def test_jinc_sign_change(self):
        prof = kernel_profile(KernelSpec("jinc", n=2), np.arange(3.70, 3.95, 0.01))
        i = np.flatnonzero(np.diff(np.sign(prof.values)))
        assert len(i) == 1
        assert prof.radii[i[0]] < 3.8317 < prof.radii[i[0] + 1]

    @pytest.mark.parametrize("kind,dist", [
        ("hypergeometric", RadialDistribution.uniform(1.0)),
        ("jinc", RadialDistribution.scaled_beta(3)),
        ("gaussian", RadialDistribution.chi(3)),
    ])
    def test_quadrature_profile_matches_closed_form(self, kind, dist):
        r = default_radii(1.0, rmax=8, points=41)
        closed = kernel_profile(KernelSpec(kind, n=3), r).values
        quad = kernel_profile(KernelSpec("quadrature", n=3, dist=dist), r).values
        assert np.max(np.abs(closed - quad)) <= 1e-6

    def test_profile_validation(self):
        with pytest.raises(DomainError):
            SimilarityProfile([0.0, 0.0], [1.0], [1.0, 1.0])
        with pytest.raises(DomainError):
            SimilarityProfile([0.0, 1.0], [1.0], [1.0, np.nan])
        with pytest.raises(DomainError):
            SimilarityProfile([0.0, 1.0], [1.0], [1.0])


class TestEmpirical:
    def test_origin_is_exactly_one(self):
        for pm in (build_randssp(3, 50, UNIFORM, seed=1), build_hexssp(2, 3, 2, UNIFORM, seed=1),
                   build_product_ssp(2, 20, UNIFORM, seed=1)):
            assert empirical_profile(pm).values[0] == 1.0

    def test_values_match_similarity(self):
        pm = build_randssp(2, 40, UNIFORM, seed=3)
        u = np.array([0.6, 0.8])
        prof = empirical_profile(pm, 1.5, u, [0.0, 1.0, 2.5])
        for r, v in zip(prof.radii, prof.values):
            assert v == similarity(pm, r * u, ell=1.5)

    def test_monte_carlo_slack(self):
        pm = build_randssp(2, 200, UNIFORM, seed=8)
        assert np.all(np.abs(empirical_profile(pm).values) <= 1 + 3 / np.sqrt(pm.M))

    def test_hexssp_matches_hypergeometric(self):
        r = default_radii()
        ref = hypergeometric_kernel(2, r)
        rmse = []
        for seed in range(10):
            pm = build_hexssp(2, 50, 20, UNIFORM, seed=seed)
            assert pm.M == 3000
            err = empirical_profile(pm, radii=r).values - ref
            rmse.append(np.sqrt(np.mean(err**2)))
        assert np.median(rmse) < 0.02

    def test_isotropy_of_randssp(self):
        M = 4000
        pm = build_randssp(2, M, RadialDistribution.chi(2), seed=21)
        r = default_radii(1.0, rmax=6, points=61)
        a = empirical_profile(pm, radii=r, direction=[1.0, 0.0]).values
        b = empirical_profile(pm, radii=r, direction=[0.0, 1.0]).values
        # each value is a mean of M bounded cosines: sd <= 1/sqrt(2M)
        band = 3 / np.sqrt(2 * M)
        assert np.max(np.abs(a - b)) <= 2 * band

    def test_direction_checks(self):
        pm = build_randssp(2, 10, UNIFORM)
        with pytest.raises(DomainError):
            empirical_profile(pm, direction=[1.0, 1.0])
        with pytest.raises(DomainError):
            empirical_profile(pm, direction=[1.0, 0.0, 0.0])


class TestHeatmap:
    def test_shape_and_center(self):
        pm = build_hexssp(2, 2, 2, UNIFORM, seed=0)
        xs, ys, K = heatmap2d(pm, extent=5, resolution=21)
        assert K.shape == (21, 21)
        assert K[10, 10] == 1.0
        assert xs[10] == 0.0

    def test_point_symmetry(self):
        pm = build_hexssp(2, 5, 4, UNIFORM, seed=4)
        _, _, K = heatmap2d(pm, extent=7, resolution=41)
        assert np.max(np.abs(K - K[::-1, ::-1])) <= 1e-12

    def test_single_simplex_hexagonal(self):
        pm = build_hexssp(2, 1, 1, UNIFORM, scales=[1.0], rotations=[np.eye(2)])
        pts = np.random.default_rng(2).uniform(-5, 5, size=(500, 2))
        base = similarity(pm, pts)
        for k in range(1, 6):
            turned = similarity(pm, pts @ rot(60 * k).T)
            assert np.max(np.abs(turned - base)) <= 1e-10

    def test_radial_symmetry_emerges(self):
        pm = build_hexssp(2, 50, 20, UNIFORM, seed=1)
        ang = np.linspace(0, 2 * np.pi, 360, endpoint=False)
        ring = similarity(pm, 2.0 * np.stack([np.cos(ang), np.sin(ang)], axis=1))
        assert np.var(ring) < 1e-3

    def test_needs_two_dimensions(self):
        with pytest.raises(DomainError):
            heatmap2d(build_randssp(3, 10, UNIFORM))


class TestConvergence:
    def test_root_m_slope(self):
        cfg = BuilderConfig("randssp", 2, RadialDistribution.chi(2))
        rep = convergence_sweep(cfg, KernelSpec("gaussian", n=2), [100, 1000, 10000], seeds=10)
        assert -0.65 <= rep.slope <= -0.35
        assert rep.max_abs.shape == (3, 10)
        assert np.all(rep.max_abs >= 0) and np.all(rep.rmse >= 0)
        assert len(rep.seeds) == 3 and all(len(s) == 10 for s in rep.seeds)

    def test_hexssp_orientation_sweep_improves(self):
        # 20 seeds: a 10-seed median of max-abs error is too noisy to order 16 vs 64
        cfg = BuilderConfig("hexssp", 2, UNIFORM, n_scales=20)
        rep = convergence_sweep(cfg, KernelSpec("hypergeometric", n=2), [1, 4, 16, 64], seeds=20,
                                param="n_rotations", radii=default_radii(1.0, 10, 101))
        assert np.all(np.diff(rep.max_abs_median) < 0)

    def test_single_value_sweep(self):
        cfg = BuilderConfig("randssp", 2, UNIFORM, M=50)
        rep = convergence_sweep(cfg, KernelSpec("hypergeometric", n=2), [50], seeds=3)
        assert rep.slope is None
        assert rep.max_abs.shape == (1, 3)

    def test_bit_for_bit_reproducible(self):
        cfg = BuilderConfig("hexssp", 2, UNIFORM, n_rotations=3, n_scales=4)
        ref = KernelSpec("hypergeometric", n=2)
        a = convergence_sweep(cfg, ref, [2, 5], seeds=3, param="n_rotations", master_seed=11)
        b = convergence_sweep(cfg, ref, [2, 5], seeds=3, param="n_rotations", master_seed=11)
        assert a.max_abs.tobytes() == b.max_abs.tobytes()
        assert a.rmse.tobytes() == b.rmse.tobytes()
        assert a.seeds == b.seeds

    def test_seed_derivation(self):
        assert derive_seed(0, 1, 2) == derive_seed(0, 1, 2)
        assert len({derive_seed(0, i, j) for i in range(5) for j in range(5)}) == 25
        assert derive_seed(1, 0, 0) != derive_seed(0, 0, 0)

    def test_bad_sweeps(self):
        cfg = BuilderConfig("randssp", 2, UNIFORM)
        with pytest.raises(DomainError):
            convergence_sweep(cfg, KernelSpec("hypergeometric", n=2), [])
        with pytest.raises(DomainError):
            convergence_sweep(cfg, KernelSpec("hypergeometric", n=2), [10], param="lambda")
        with pytest.raises(DomainError):
            BuilderConfig("spiral", 2, UNIFORM).build(0)


class TestAnisotropy:
    def test_product_is_direction_dependent(self):
        pm = build_product_ssp(2, 4000, UNIFORM, seed=0)
        assert anisotropy_gap(pm, radius=np.pi) > 0.05

    def test_hexssp_is_nearly_isotropic(self):
        pm = build_hexssp(2, 50, 20, UNIFORM, seed=0)
        assert anisotropy_gap(pm, radius=np.pi) < 0.05

    def test_zero_radius(self):
        pm = build_product_ssp(2, 100, UNIFORM, seed=0)
        assert anisotropy_gap(pm, radius=0.0) == 0.0

    def test_preconditions(self):
        with pytest.raises(DomainError):
            anisotropy_gap(build_randssp(1, 10, UNIFORM))
        with pytest.raises(DomainError):
            anisotropy_gap(build_randssp(2, 10, UNIFORM), directions=1)

    @pytest.mark.parametrize("n,count", [(2, 64), (3, 10), (5, 3)])
    def test_directions_are_unit(self, n, count):
        u = evenly_spread_directions(n, count)
        assert u.shape == (count, n)
        np.testing.assert_allclose(np.linalg.norm(u, axis=1), 1.0, atol=1e-14)


class TestAnalyticReference:
    def test_dispatch(self):
        r = np.array([0.0, 0.7, 3.0])
        pm = build_randssp(2, 5, RadialDistribution.chi(2))
        np.testing.assert_array_equal(analytic_reference(pm)(r), gaussian_kernel(r))
        pm = build_randssp(3, 5, RadialDistribution.scaled_beta(3, lam=2.0))
        np.testing.assert_allclose(analytic_reference(pm, ell=1.0)(r), jinc_kernel(3, r, ell=0.5), atol=1e-15)

    def test_support_and_displacement_scales_combine(self):
        # magnitudes uniform on [0, 2] with ell = 3 act like ell = 1.5
        pm = build_randssp(2, 5, RadialDistribution.uniform(2.0))
        r = np.array([0.5, 2.0, 4.0])
        np.testing.assert_allclose(analytic_reference(pm, 3.0)(r), hypergeometric_kernel(2, r, 1.5), atol=1e-14)

    def test_product_mixture(self):
        pm = build_product_ssp(3, 5, UNIFORM)
        r = np.array([0.0, 1.0, np.pi])
        expected = (np.sinc(r / np.pi) + 2) / 3
        np.testing.assert_allclose(analytic_reference(pm)(r), expected, atol=1e-12)

    def test_tabulated_uses_quadrature(self):
        dist = RadialDistribution.tabulated([0.0, 1.0], [1.0, 1.0])
        pm = build_randssp(2, 5, dist)
        r = np.array([0.5, 2.0])
        np.testing.assert_allclose(analytic_reference(pm)(r), hypergeometric_kernel(2, r), atol=1e-9)
