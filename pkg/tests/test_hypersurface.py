import numpy as np
import pytest

from nkahler import hypersurface as hs
from nkahler.octonion import cross

SPHERE = hs.unit_sphere()
ELLIPSOID = hs.ellipsoid((1.0, 1.3, 0.8, 1.1, 0.9, 1.5, 1.2))
SPHEROID = hs.ellipsoid((2.0, 1, 1, 1, 1, 1, 1))
SURFACES = [SPHERE, ELLIPSOID, SPHERE.flipped()]


def sample(S, rng, k=2):
    p = hs.random_points(S, rng, 1)[0]
    P = hs.tangent_projector(S, p)
    return p, [P @ v for v in rng.standard_normal((k, 7))]


class TestOracles:
    @pytest.mark.parametrize("S", [SPHERE, ELLIPSOID], ids=["sphere", "ellipsoid"])
    def test_gradient_matches_finite_differences(self, S, rng):
        x = rng.standard_normal(7)
        h = 1e-5
        fd = np.array([(S.F(x + h * e) - S.F(x - h * e)) / (2 * h) for e in np.eye(7)])
        assert np.abs(fd - S.grad(x)).max() <= 1e-6
        H = S.hess(x)
        assert np.abs(H - H.T).max() <= 1e-12

    def test_bad_orientation(self):
        with pytest.raises(ValueError):
            hs.LevelSurface(SPHERE.F, SPHERE.grad, SPHERE.hess, orientation=2)

    def test_bad_semi_axes(self):
        with pytest.raises(ValueError):
            hs.ellipsoid((1, 1, 1))


class TestPointsAndFrames:
    @pytest.mark.parametrize("S", SURFACES, ids=["sphere", "ellipsoid", "inward"])
    def test_random_points_on_surface(self, S, rng):
        for p in hs.random_points(S, rng, 20):
            assert abs(S.F(p)) <= 1e-10
            assert np.linalg.norm(hs.normal(S, p)) == pytest.approx(1.0, abs=1e-12)

    def test_retract_lands_on_surface(self, rng):
        p, (X,) = sample(ELLIPSOID, rng, 1)
        q = hs.retract(ELLIPSOID, p + 0.01 * X)
        assert abs(ELLIPSOID.F(q)) <= 1e-12

    def test_sphere_normal_is_position(self, rng):
        p = hs.random_points(SPHERE, rng, 1)[0]
        assert np.array_equal(hs.normal(SPHERE, p), p / np.linalg.norm(p))
        assert np.allclose(hs.normal(SPHERE.flipped(), p), -p, atol=1e-15)

    def test_spheroid_vertex_normal(self):
        assert np.allclose(hs.normal(SPHEROID, [2, 0, 0, 0, 0, 0, 0]), np.eye(7)[0])

    def test_degenerate_point(self):
        with pytest.raises(hs.DegeneratePoint):
            hs.normal(SPHERE, np.zeros(7))

    def test_not_on_surface(self):
        with pytest.raises(hs.NotOnSurface):
            hs.check_point(SPHERE, 2 * np.eye(7)[0])

    @pytest.mark.parametrize("S", SURFACES, ids=["sphere", "ellipsoid", "inward"])
    def test_frame_orthonormal_and_oriented(self, S, rng):
        p = hs.random_points(S, rng, 1)[0]
        E = hs.tangent_frame(S, p)
        N = hs.normal(S, p)
        assert np.abs(E @ E.T - np.eye(6)).max() <= 1e-12
        assert np.abs(E @ N).max() <= 1e-12
        assert np.linalg.det(np.vstack([E, N])) > 0


class TestShapeOperator:
    def test_global_sign(self):
        assert hs.shape_sign() in (1, -1)

    def test_sphere_is_umbilic(self, rng):
        p = hs.random_points(SPHERE, rng, 1)[0]
        k = hs.principal_curvatures(SPHERE, p)
        assert np.allclose(k, k[0], atol=1e-12) and abs(k[0]) == pytest.approx(1.0)

    def test_matches_derivative_of_normal(self, rng):
        # K(X) = sigma * orientation * D_X N up to tangential projection
        for S in SURFACES:
            p, (X,) = sample(S, rng, 1)
            dN = hs.directional(S, p, X, lambda q: hs.normal(S, q))
            K = hs.shape_operator(S, p)
            assert np.linalg.norm(K @ X - hs.shape_sign() * hs.tangent_projector(S, p) @ dN) <= 1e-6

    def test_self_adjoint(self, rng):
        p, (X, Y) = sample(ELLIPSOID, rng)
        K = hs.shape_operator(ELLIPSOID, p)
        assert abs((K @ X) @ Y - X @ (K @ Y)) <= 1e-12

    def test_spheroid_vertex_curvatures(self):
        # x1^2/a^2 + |x'|^2 = 1 at (a, 0, ..): each normal section has curvature a / b^2 = 2
        k = hs.principal_curvatures(SPHEROID, [2, 0, 0, 0, 0, 0, 0])
        assert np.allclose(np.abs(k), 2.0, atol=1e-12)


class TestAlmostComplexStructure:
    @pytest.mark.parametrize("S", SURFACES, ids=["sphere", "ellipsoid", "inward"])
    def test_orthogonal_complex_structure(self, S, rng):
        p, (X, Y) = sample(S, rng)
        JX, JY = hs.acs(S, p, X), hs.acs(S, p, Y)
        assert np.linalg.norm(hs.acs(S, p, JX) + X) <= 1e-12
        assert abs(JX @ JY - X @ Y) <= 1e-12

    def test_at_e7(self):
        e = np.eye(7)
        assert np.allclose(hs.acs(SPHERE, e[6], e[0]), cross(e[6], e[0]))

    def test_matrix_form(self, rng):
        p, (X,) = sample(ELLIPSOID, rng, 1)
        assert np.allclose(hs.acs_matrix(ELLIPSOID, p) @ X, hs.acs(ELLIPSOID, p, X), atol=1e-14)


class TestCovariantDerivative:
    def test_metric(self, rng):
        p, (X, Y, Z) = sample(ELLIPSOID, rng, 3)
        Yf, Zf = hs.projected_field(ELLIPSOID, Y), hs.projected_field(ELLIPSOID, Z)
        lhs = hs.directional(ELLIPSOID, p, X, lambda q: Yf(q) @ Zf(q))
        rhs = hs.cov_deriv(ELLIPSOID, p, X, Yf) @ Zf(p) + Yf(p) @ hs.cov_deriv(ELLIPSOID, p, X, Zf)
        assert abs(lhs - rhs) <= 1e-6

    def test_torsion_free(self, rng):
        p, (X, Y) = sample(ELLIPSOID, rng)
        Xf, Yf = hs.projected_field(ELLIPSOID, X), hs.projected_field(ELLIPSOID, Y)
        lhs = hs.cov_deriv(ELLIPSOID, p, Xf(p), Yf) - hs.cov_deriv(ELLIPSOID, p, Yf(p), Xf)
        br = hs.tangent_projector(ELLIPSOID, p) @ hs.lie_bracket(ELLIPSOID, p, Xf, Yf)
        assert np.linalg.norm(lhs - br) <= 1e-6

    def test_zero_field(self, rng):
        p, (X,) = sample(SPHERE, rng, 1)
        assert np.array_equal(hs.cov_deriv(SPHERE, p, X, lambda q: np.zeros(7)), np.zeros(7))

    def test_step_too_small(self, rng):
        p, (X,) = sample(SPHERE, rng, 1)
        with pytest.raises(hs.StepTooSmall):
            hs.cov_deriv(SPHERE, p, X, hs.projected_field(SPHERE, X), h=1e-13)

    def test_step_too_large(self, rng):
        p, (X,) = sample(SPHERE, rng, 1)
        f = lambda q: np.sin(40 * q)  # noqa: E731
        with pytest.raises(hs.StepTooLarge):
            hs.cov_deriv(SPHERE, p, X, f, h=5e-3)


class TestCalabiLemma:
    @pytest.mark.parametrize("S", SURFACES, ids=["sphere", "ellipsoid", "inward"])
    def test_fd_matches_closed_form(self, S, rng):
        for _ in range(5):
            p, (X, Y) = sample(S, rng)
            fd = hs.nablaJ(S, p, X, Y, route="fd")
            assert np.linalg.norm(fd - hs.nablaJ_closed(S, p, X, Y)) <= 1e-6
        hs.nablaJ(S, p, X, Y, route="both")

    def test_unknown_route(self, rng):
        p, (X, Y) = sample(SPHERE, rng)
        with pytest.raises(ValueError):
            hs.nablaJ(SPHERE, p, X, Y, route="magic")

    def test_sphere_nearly_kaehler(self, rng):
        for _ in range(10):
            p, (X,) = sample(SPHERE, rng, 1)
            assert np.linalg.norm(hs.nablaJ(SPHERE, p, X, X, route="fd")) <= 1e-6

    def test_ellipsoid_not_nearly_kaehler(self, rng):
        p, (X,) = sample(ELLIPSOID, rng, 1)
        assert np.linalg.norm(hs.nablaJ_closed(ELLIPSOID, p, X, X)) > 1e-2

    def test_image_orthogonal_to_JY(self, rng):
        for S in SURFACES:
            p, (X, Y) = sample(S, rng)
            assert abs(hs.nablaJ_closed(S, p, X, Y) @ hs.acs(S, p, Y)) <= 1e-12


class TestNijenhuis:
    def test_antisymmetric_diagonal(self, rng):
        p, (X,) = sample(SPHERE, rng, 1)
        assert np.linalg.norm(hs.nijenhuis(SPHERE, p, X, X)) <= 1e-6

    def test_four_nablaJ(self, rng):
        p, (X, Y) = sample(SPHERE, rng)
        N = hs.nijenhuis(SPHERE, p, X, Y)
        assert np.linalg.norm(N - 4 * hs.nablaJ_closed(SPHERE, p, X, hs.acs(SPHERE, p, Y))) <= 1e-5

    def test_non_integrable(self):
        e = np.eye(7)
        p = e[6]
        X, Y = e[0], e[1]  # e7 x e1 is not along e2
        assert abs(hs.acs(SPHERE, p, X) @ Y) < 1e-15
        assert np.linalg.norm(hs.nijenhuis(SPHERE, p, X, Y)) > 0.1


class TestConstantType:
    def test_sphere_alpha_is_one(self):
        res = hs.constant_type_alpha(SPHERE, seed=0, n_samples=200)
        assert res["alpha"] == pytest.approx(1.0, abs=1e-10)
        assert res["max_deviation"] <= 1e-5

    def test_fd_route(self):
        res = hs.constant_type_alpha(SPHERE, seed=1, n_samples=20, route="fd")
        assert res["max_deviation"] <= 1e-5

    def test_ellipsoid_not_constant_type(self):
        assert hs.constant_type_alpha(ELLIPSOID, seed=0, n_samples=50)["max_deviation"] > 1e-2

    def test_too_few_samples(self):
        with pytest.raises(ValueError):
            hs.constant_type_alpha(SPHERE, n_samples=1)


class TestCalabiDefect:
    def test_sphere(self, rng):
        p = hs.random_points(SPHERE, rng, 1)[0]
        assert hs.calabi_defect(SPHERE, p) == pytest.approx(2 * np.sqrt(6), abs=1e-10)

    def test_anti_linear_operator(self, rng):
        p = np.eye(7)[6]
        J = hs.to_frame(hs.tangent_frame(SPHERE, p), hs.acs_matrix(SPHERE, p))
        A = rng.standard_normal((6, 6))
        A = A + A.T
        K = 0.5 * (A + J @ A @ J)  # symmetric and anticommuting with J
        assert hs.anti_linear_defect(K, J) <= 1e-12
        assert hs.eigen_pairing_residual(K, J) <= 1e-10
        lam = np.sort(np.linalg.eigvalsh(K))
        assert np.allclose(lam, -lam[::-1], atol=1e-10)

    def test_zero_operator(self):
        assert hs.anti_linear_defect(np.zeros((6, 6)), np.eye(6)) == 0


class TestCurvature:
    def test_sphere_einstein(self, rng):
        p = hs.random_points(SPHERE, rng, 1)[0]
        assert np.abs(hs.ricci(SPHERE, p) - 5 * np.eye(6)).max() <= 1e-10
        assert hs.einstein_defect(SPHERE, p) <= 1e-10

    def test_ellipsoid_not_einstein(self, rng):
        p = hs.random_points(ELLIPSOID, rng, 1)[0]
        assert hs.einstein_defect(ELLIPSOID, p) > 1e-3

    def test_bianchi_and_antisymmetry(self, rng):
        p, (X, Y, Z) = sample(ELLIPSOID, rng, 3)
        R = lambda a, b, c: hs.curvature_gauss(ELLIPSOID, p, a, b, c)  # noqa: E731
        assert np.linalg.norm(R(X, Y, Z) + R(Y, Z, X) + R(Z, X, Y)) <= 1e-10
        assert np.linalg.norm(R(X, X, Z)) <= 1e-12
