import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from sspkernels.encoder import SSPVector, dot, encode, similarity
from sspkernels.exceptions import DomainError
from sspkernels.kernels import gaussian_kernel, sinc_kernel
from sspkernels.phase import PhaseMatrix, build_hexssp, build_randssp
from sspkernels.sampling import RadialDistribution

UNIFORM = RadialDistribution.uniform(1.0)

points2 = arrays(np.float64, 2, elements=st.floats(-20, 20))


@pytest.fixture(scope="module")
def pm2():
    return build_hexssp(2, 5, 4, UNIFORM, seed=3)


def rot(deg):
    a = np.deg2rad(deg)
    return np.array([[np.cos(a), -np.sin(a)], [np.sin(a), np.cos(a)]])


class TestEncode:
    def test_origin_is_delta(self, pm2):
        v = encode(pm2, [0.0, 0.0])
        expected = np.zeros(pm2.dim)
        expected[0] = 1.0
        np.testing.assert_allclose(v.values, expected, atol=1e-15)
        assert isinstance(v, SSPVector) and len(v) == 2 * pm2.M + 1

    @settings(max_examples=50)
    @given(points2)
    def test_unit_norm(self, x):
        pm = build_hexssp(2, 5, 4, UNIFORM, seed=3)
        v = encode(pm, x, ell=0.7)
        assert abs(dot(v, v) - 1.0) <= 1e-12
        assert np.all(np.isreal(v.values))

    @settings(max_examples=50)
    @given(points2, points2, st.floats(0.1, 10))
    def test_parseval(self, x, y, ell):
        pm = build_hexssp(2, 5, 4, UNIFORM, seed=3)
        lhs = dot(encode(pm, x, ell), encode(pm, y, ell))
        assert abs(lhs - similarity(pm, x, y, ell, include_dc=True)) <= 1e-12

    def test_without_dc_flag(self):
        pm = PhaseMatrix(np.array([[1.0], [2.5]]), {"kind": "randssp"}, includes_dc=False)
        x, y = [0.3], [-1.1]
        v = encode(pm, x)
        assert len(v) == 5 and dot(v, v) == pytest.approx(1.0, abs=1e-14)
        assert dot(v, encode(pm, y)) == pytest.approx(similarity(pm, x, y, include_dc=True), abs=1e-14)
        assert similarity(pm, x, y, include_dc=True) == similarity(pm, x, y)

    def test_dimension_mismatch(self, pm2):
        with pytest.raises(DomainError):
            encode(pm2, [1.0, 2.0, 3.0])
        with pytest.raises(DomainError):
            encode(pm2, [[1.0, 2.0]])
        with pytest.raises(DomainError):
            encode(pm2, [0.0, 0.0], ell=0.0)

    def test_dot_length_mismatch(self):
        with pytest.raises(DomainError):
            dot(np.ones(3), np.ones(5))


class TestSimilarity:
    def test_zero_displacement(self, pm2):
        assert similarity(pm2, [1.5, -2.0], [1.5, -2.0]) == 1.0
        assert similarity(pm2, [1.5, -2.0], [1.5, -2.0], include_dc=True) == 1.0

    def test_shift_invariance(self, pm2):
        # dyadic coordinates keep x - y exact in floating point
        x, y, c = np.array([1.25, -0.5]), np.array([0.75, 2.0]), np.array([8.0, -4.0])
        assert similarity(pm2, x, y) == similarity(pm2, x + c, y + c)

    @given(points2)
    def test_even(self, x):
        pm = build_hexssp(2, 5, 4, UNIFORM, seed=3)
        assert similarity(pm, x) == similarity(pm, -x)

    def test_batched_matches_scalar(self, pm2):
        pts = np.random.default_rng(0).normal(size=(3, 4, 2))
        batch = similarity(pm2, pts, ell=2.0)
        assert batch.shape == (3, 4)
        assert batch[1, 2] == similarity(pm2, pts[1, 2], ell=2.0)

    def test_scalar_point_in_one_dimension(self):
        pm = build_randssp(1, 50, UNIFORM, seed=1)
        assert similarity(pm, 0.4) == similarity(pm, [0.4])

    def test_sinc_limit(self):
        x = np.linspace(-10, 10, 401)
        gaps = []
        for seed in range(10):
            pm = build_randssp(1, 2000, UNIFORM, seed=seed)
            gaps.append(np.max(np.abs(similarity(pm, x[:, None]) - sinc_kernel(x))))
        assert np.median(gaps) < 0.05

    def test_single_simplex_sixfold_symmetry(self):
        pm = build_hexssp(2, 1, 1, UNIFORM, scales=[1.0], rotations=[np.eye(2)])
        pts = np.random.default_rng(1).uniform(-5, 5, size=(500, 2))
        a = similarity(pm, pts)
        b = similarity(pm, pts @ rot(60).T)
        assert np.max(np.abs(a - b)) <= 1e-12

    def test_unbiased_for_gaussian(self):
        chi = RadialDistribution.chi(2)
        radii = [0.5, 1.0, 2.0]
        pts = np.array([[r / np.sqrt(2), r / np.sqrt(2)] for r in radii])
        est = np.array([similarity(build_randssp(2, 500, chi, seed=s), pts) for s in range(200)])
        mean = est.mean(axis=0)
        sem = est.std(axis=0, ddof=1) / np.sqrt(200)
        assert np.all(np.abs(mean - gaussian_kernel(radii)) < 3 * sem)

    def test_root_m_convergence(self):
        chi = RadialDistribution.chi(2)
        radii = np.linspace(0, 6, 61)
        pts = np.stack([radii, np.zeros_like(radii)], axis=1)
        ref = gaussian_kernel(radii)
        Ms = [100, 1000, 10000]
        med = [np.median([np.max(np.abs(similarity(build_randssp(2, M, chi, seed=s), pts) - ref))
                          for s in range(20)]) for M in Ms]
        slope = np.polyfit(np.log(Ms), np.log(med), 1)[0]
        assert -0.65 <= slope <= -0.35
