"""Kernel-layer tests: quadrature, eigensolvers, RK4, special functions.

Expected values come from independent oracles: closed forms, series
summed in-test, recurrence identities, and quadrature of known
integrands.
"""

import math

import numpy as np
import pytest

from spincm.numerics import (
    EigenSolveError,
    bessel_j,
    digamma,
    expm,
    gauss_legendre,
    herm_eig,
    hermite,
    jacobi_eig,
    laguerre,
    legendre,
    rk4,
    spherical_harmonic,
    spherical_j,
    sym_eig,
)

EULER_GAMMA = 0.5772156649015328606


class TestQuadrature:
    def test_single_node_is_midpoint(self):
        rule = gauss_legendre(1)
        assert rule.nodes[0] == 0.0
        assert rule.weights[0] == 2.0

    def test_two_node_positions(self):
        rule = gauss_legendre(2)
        assert np.allclose(rule.nodes, [-0.5773502691896258, 0.5773502691896258], atol=1e-15)

    def test_degree_three_exact_at_two_nodes(self):
        rule = gauss_legendre(2)
        assert abs(np.sum(rule.weights * rule.nodes ** 2) - 2.0 / 3.0) < 1e-15

    @pytest.mark.parametrize("n", [4, 8, 16])
    def test_polynomial_exactness(self, n):
        rule = gauss_legendre(n)
        for deg in range(2 * n):
            exact = 0.0 if deg % 2 else 2.0 / (deg + 1)
            assert abs(np.sum(rule.weights * rule.nodes ** deg) - exact) < 1e-12

    @pytest.mark.parametrize("n", [3, 7, 33, 128, 511])
    def test_rule_invariants(self, n):
        rule = gauss_legendre(n)
        assert abs(np.sum(rule.weights) - 2.0) < 1e-13
        assert np.all(np.diff(rule.nodes) > 0)
        assert np.all(rule.weights > 0)
        assert rule.nodes[0] > -1.0 and rule.nodes[-1] < 1.0

    def test_node_count_cap(self):
        with pytest.raises(ValueError):
            gauss_legendre(0)
        with pytest.raises(ValueError):
            gauss_legendre(1025)


class TestSymEig:
    def test_analytic_two_by_two(self):
        dec = sym_eig(np.array([[2.0, 1.0], [1.0, 2.0]]))
        assert np.allclose(dec.values, [1.0, 3.0], atol=1e-14)

    def test_diagonal_input(self):
        dec = sym_eig(np.diag([3.0, -1.0, 2.0]))
        assert np.allclose(dec.values, [-1.0, 2.0, 3.0])
        # permuted identity columns with positive signs
        assert np.allclose(np.abs(dec.vectors).sum(axis=0), 1.0)
        assert np.all(dec.vectors.max(axis=0) == 1.0)

    def test_rejects_asymmetric(self):
        with pytest.raises(EigenSolveError):
            sym_eig(np.array([[0.0, 1.0], [0.5, 0.0]]))

    def test_reconstruction_on_random_matrices(self):
        rng = np.random.default_rng(11)
        for _ in range(100):
            n = int(rng.integers(2, 129))
            m = rng.normal(size=(n, n))
            m = 0.5 * (m + m.T)
            dec = sym_eig(m)
            resid = np.linalg.norm(dec.vectors @ np.diag(dec.values) @ dec.vectors.T - m)
            assert resid <= 1e-9 * np.linalg.norm(m)
            ortho = np.max(np.abs(dec.vectors.T @ dec.vectors - np.eye(n)))
            assert ortho < 1e-10

    def test_deterministic_sign_convention(self):
        m = np.array([[2.0, 1.0], [1.0, 2.0]])
        a = sym_eig(m)
        b = sym_eig(m)
        assert np.array_equal(a.vectors, b.vectors)
        for k in range(2):
            i = np.argmax(np.abs(a.vectors[:, k]))
            assert a.vectors[i, k] > 0

    def test_jacobi_oracle_agrees(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            m = rng.normal(size=(8, 8))
            m = 0.5 * (m + m.T)
            a = sym_eig(m)
            b = jacobi_eig(m)
            assert np.allclose(a.values, b.values, atol=1e-11)

    def test_herm_eig_matches_reconstruction(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            n = 5
            h = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
            h = 0.5 * (h + h.conj().T)
            vals, vecs = herm_eig(h)
            assert np.max(np.abs(h @ vecs - vecs * vals)) < 1e-10 * np.linalg.norm(h)
            assert np.max(np.abs(vecs.conj().T @ vecs - np.eye(n))) < 1e-10
            assert np.all(np.diff(vals) > -1e-12)


class TestRK4:
    def test_constant_rhs(self):
        y = rk4(lambda t, y: np.zeros_like(y), np.array([1.0, -2.0]), 0.0, 5.0, 10)
        assert np.array_equal(y, [1.0, -2.0])

    def test_harmonic_oscillator_period(self):
        def rhs(t, y):
            return np.array([y[1], -y[0]])

        y = rk4(rhs, np.array([1.0, 0.0]), 0.0, 2.0 * math.pi, 1000)
        assert np.max(np.abs(y - [1.0, 0.0])) < 1e-9

    def test_fourth_order_convergence(self):
        def rhs(t, y):
            return y

        exact = math.e
        e1 = abs(rk4(rhs, np.array([1.0]), 0.0, 1.0, 20)[0] - exact)
        e2 = abs(rk4(rhs, np.array([1.0]), 0.0, 1.0, 40)[0] - exact)
        assert 12.0 < e1 / e2 < 20.0

    def test_nonfinite_abort(self):
        with np.errstate(over="ignore", invalid="ignore"):
            with pytest.raises(FloatingPointError):
                rk4(lambda t, y: y * y, np.array([10.0]), 0.0, 5.0, 50)


class TestExpm:
    def test_rotation_block(self):
        g = np.array([[0.0, 1.0], [-1.0, 0.0]])
        for phi in (0.3, 1.7, 12.0):
            u = expm(phi * g)
            ref = np.array([[math.cos(phi), math.sin(phi)],
                            [-math.sin(phi), math.cos(phi)]])
            assert np.max(np.abs(u - ref)) < 1e-13

    def test_diagonal(self):
        u = expm(np.diag([1.0, -2.0]))
        assert np.allclose(np.diag(u), [math.e, math.exp(-2.0)], rtol=1e-14)


class TestBessel:
    def test_j0_at_zero(self):
        assert bessel_j(0, 0.0) == 1.0
        assert bessel_j(2, 0.0) == 0.0

    def test_half_order_closed_form(self):
        # J_{1/2}(x) = sqrt(2/(pi x)) sin x; at x = pi/2 this is 2/pi
        assert abs(bessel_j(0.5, math.pi / 2.0) - 2.0 / math.pi) < 1e-14

    def test_series_oracle_j0_of_one(self):
        total, term = 0.0, 1.0
        k = 0
        while abs(term) > 1e-18:
            total += term
            k += 1
            term = term * (-0.25) / (k * k)
        assert abs(bessel_j(0, 1.0) - total) < 1e-14

    def test_three_term_recurrence_grid(self):
        for nu in (0.5, 1.0, 2.3, 7.0):
            for x in np.linspace(0.5, 40.0, 17):
                lhs = bessel_j(nu, x) + bessel_j(nu + 2.0, x)
                rhs = 2.0 * (nu + 1.0) / x * bessel_j(nu + 1.0, x)
                assert abs(lhs - rhs) < 1e-9

    def test_large_argument_regime(self):
        # downward recurrence against the half-order closed form
        x = 500.0
        ref = math.sqrt(2.0 / (math.pi * x)) * math.sin(x)
        assert abs(bessel_j(0.5, x) - ref) < 1e-13

    def test_envelope_rejected(self):
        with pytest.raises(ValueError):
            bessel_j(51.0, 1.0)
        with pytest.raises(ValueError):
            bessel_j(1.0, 2e4)
        with pytest.raises(ValueError):
            bessel_j(1.0, -1.0)

    def test_spherical_at_zero(self):
        assert spherical_j(0, 0.0) == 1.0
        assert spherical_j(1, 0.0) == 0.0

    def test_spherical_closed_form(self):
        # j_0 = sin x / x, j_1 = sin x / x^2 - cos x / x
        for x in (0.3, 2.0, 11.0):
            assert abs(spherical_j(0, x) - math.sin(x) / x) < 1e-13
            assert abs(spherical_j(1, x) - (math.sin(x) / x ** 2 - math.cos(x) / x)) < 1e-13


class TestDigamma:
    def test_recurrence(self):
        for x in (0.5, 1.0, 2.25):
            assert abs(digamma(x + 1.0) - digamma(x) - 1.0 / x) < 1e-12

    def test_euler_constant(self):
        assert abs(digamma(1.0) + EULER_GAMMA) < 1e-13

    def test_half_argument_duplication(self):
        # psi(1/2) = psi(1) - 2 ln 2
        assert abs(digamma(0.5) - (digamma(1.0) - 2.0 * math.log(2.0))) < 1e-12

    def test_array_input(self):
        out = digamma(np.array([1.0, 2.0]))
        assert abs(out[1] - out[0] - 1.0) < 1e-13

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            digamma(0.0)


class TestLegendre:
    def test_p0_is_one(self):
        for x in (-1.0, -0.3, 0.0, 0.8, 1.0):
            assert legendre(0, 0, x) == 1.0

    def test_p11_closed_form(self):
        assert abs(legendre(1, 1, 0.5) - (-math.sqrt(0.75))) < 1e-14

    def test_q0_closed_form(self):
        assert abs(legendre(0, 0, 0.5, kind="Q") - 0.5 * math.log(3.0)) < 1e-14

    def test_q_rejects_endpoint(self):
        with pytest.raises(ValueError):
            legendre(2, 0, 1.0, kind="Q")

    def test_degree_recurrence(self):
        # (l - m + 1) P_{l+1}^m = (2l + 1) x P_l^m - (l + m) P_{l-1}^m
        for l in range(1, 9):
            for m in range(0, l):
                for x in (-0.7, 0.1, 0.6):
                    lhs = (l - m + 1) * legendre(l + 1, m, x)
                    rhs = (2 * l + 1) * x * legendre(l, m, x) - (l + m) * legendre(l - 1, m, x)
                    assert abs(lhs - rhs) < 1e-10

    @pytest.mark.parametrize("kind", ["P", "Q"])
    def test_associated_ode(self, kind):
        # (1-x^2) f'' - 2x f' + (l(l+1) - m^2/(1-x^2)) f = 0 by central FD
        h = 1e-5
        for l, m in ((2, 1), (3, 2), (4, 3)):
            for x in (-0.4, 0.2, 0.55):
                f = lambda xx: legendre(l, m, xx, kind=kind)
                d1 = (f(x + h) - f(x - h)) / (2 * h)
                d2 = (f(x + h) - 2 * f(x) + f(x - h)) / h ** 2
                resid = (1 - x * x) * d2 - 2 * x * d1 + (l * (l + 1) - m * m / (1 - x * x)) * f(x)
                assert abs(resid) < 1e-4 * max(1.0, abs(f(x)) * l * (l + 1))

    def test_pq_wronskian(self):
        # P_l Q_l' - P_l' Q_l = -1/(1-x^2) for l = 0
        x, h = 0.3, 1e-6
        p = lambda xx: legendre(0, 0, xx)
        q = lambda xx: legendre(0, 0, xx, kind="Q")
        w = p(x) * (q(x + h) - q(x - h)) / (2 * h) - q(x) * (p(x + h) - p(x - h)) / (2 * h)
        assert abs(w - 1.0 / (1.0 - x * x)) < 1e-8


class TestHermiteLaguerre:
    def test_constants(self):
        assert hermite(0, 3.7) == 1.0
        assert laguerre(0, 0.5, 2.0) == 1.0

    def test_h2_value(self):
        assert abs(hermite(2, 1.5) - 7.0) < 1e-13  # 4 x^2 - 2 at 1.5

    def test_l1_value(self):
        assert abs(laguerre(1, 0.5, 2.0) + 0.5) < 1e-14  # 1 + a - x

    def test_hermite_against_expansion(self):
        # H_4 = 16 x^4 - 48 x^2 + 12
        for x in (-1.2, 0.3, 2.0):
            assert abs(hermite(4, x) - (16 * x ** 4 - 48 * x ** 2 + 12)) < 1e-10

    def test_laguerre_against_expansion(self):
        # L_2^a = x^2/2 - (a+2) x + (a+1)(a+2)/2
        a = 0.7
        for x in (0.0, 1.3, 4.0):
            ref = 0.5 * x ** 2 - (a + 2) * x + 0.5 * (a + 1) * (a + 2)
            assert abs(laguerre(2, a, x) - ref) < 1e-12


class TestSphericalHarmonics:
    def test_y00_normalization(self):
        assert abs(spherical_harmonic(0, 0, 0.7, 1.1) - 1.0 / math.sqrt(4 * math.pi)) < 1e-14

    def test_y10_profile(self):
        const = math.sqrt(3.0 / (4.0 * math.pi))
        for theta in (0.2, 1.0, 2.4):
            assert abs(spherical_harmonic(1, 0, theta, 0.3) - const * math.cos(theta)) < 1e-13

    def _sphere_quadrature(self, f, n=32):
        rule = gauss_legendre(n)
        thetas = np.arccos(rule.nodes)
        phis = np.linspace(0.0, 2.0 * math.pi, n, endpoint=False)
        total = 0.0
        for w, th in zip(rule.weights, thetas):
            for ph in phis:
                total += w * f(th, ph) * (2.0 * math.pi / n)
        return total

    def test_unit_norm(self):
        for l, m in ((1, 0), (2, 1), (3, -2)):
            norm = self._sphere_quadrature(
                lambda th, ph: abs(spherical_harmonic(l, m, th, ph)) ** 2)
            assert abs(norm - 1.0) < 1e-8

    def test_orthogonality(self):
        val = self._sphere_quadrature(
            lambda th, ph: (spherical_harmonic(1, 0, th, ph).conjugate()
                            * spherical_harmonic(1, 1, th, ph)).real)
        assert abs(val) < 1e-10
