"""Grid construction and kernel algebra."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from casimir2d.errors import ValidationError
from casimir2d.quadrature import (
    Kernel,
    build_alpha_grid,
    build_grid,
    build_kappa_grid,
    build_p_grid,
    identity_kernel,
    kernel_product,
    kernel_trace,
)

EULER_GAMMA = 0.5772156649015329


class TestAlphaGrid:
    def test_symmetric_and_increasing(self):
        g = build_alpha_grid(64)
        assert np.all(np.diff(g.alpha_nodes) > 0)
        np.testing.assert_allclose(g.alpha_nodes, -g.alpha_nodes[::-1],
                                   atol=1e-13)

    def test_measure_includes_two_pi(self):
        # int sech(alpha) dalpha / (2 pi) = 1/2
        g = build_alpha_grid(96)
        val = np.sum(g.alpha_weights / np.cosh(g.alpha_nodes))
        assert abs(val - 0.5) < 1e-6

    def test_gaussian_moment(self):
        g = build_alpha_grid(96)
        val = np.sum(g.alpha_weights * np.exp(-g.alpha_nodes ** 2))
        assert abs(val - math.sqrt(math.pi) / (2 * math.pi)) < 1e-10

    @given(st.integers(4, 40))
    @settings(deadline=None)
    def test_odd_or_small_counts_refused(self, n):
        if n % 2 or n < 8:
            with pytest.raises(ValidationError):
                build_alpha_grid(n)
        else:
            build_alpha_grid(n)


class TestRadialGrids:
    def test_p_grid_gamma2(self):
        p, w = build_p_grid(48, 1.0)
        assert abs(np.sum(w * np.exp(-p)) - 1.0) < 1e-8

    def test_p_grid_scaling(self):
        # int p e^{-p/s} dp = s^2 Gamma(2)
        p, w = build_p_grid(48, 0.25)
        assert abs(np.sum(w * np.exp(-p / 0.25)) - 0.0625) < 1e-8

    def test_kappa_grid_gamma1(self):
        k, w = build_kappa_grid(48, 1.0)
        assert abs(np.sum(w * np.exp(-k)) - 1.0) < 1e-8

    def test_log_endpoint_integrand(self):
        # int_0^inf e^{-k} log k dk = -gamma; Laguerre-type rules fail
        # this, the exp-sinh rule must not
        k, w = build_kappa_grid(64, 1.0)
        val = np.sum(w * np.exp(-k) * np.log(k))
        assert abs(val + EULER_GAMMA) < 1e-8

    def test_nodes_positive_increasing(self):
        p, w = build_p_grid(32, 2.0)
        assert np.all(p > 0) and np.all(np.diff(p) > 0)
        assert np.all(w > 0)


class TestKernelAlgebra:
    def test_identity_is_neutral(self):
        g = build_alpha_grid(32)
        rng = np.random.default_rng(0)
        k = Kernel(rng.standard_normal((32, 32))
                   + 1j * rng.standard_normal((32, 32)), g)
        ident = identity_kernel(g)
        np.testing.assert_allclose(kernel_product(ident, k).entries,
                                   k.entries, atol=1e-10)
        np.testing.assert_allclose(kernel_product(k, ident).entries,
                                   k.entries, atol=1e-10)

    def test_trace_cyclic(self):
        g = build_alpha_grid(32)
        rng = np.random.default_rng(1)
        a = Kernel(rng.standard_normal((32, 32)) + 0j, g)
        b = Kernel(rng.standard_normal((32, 32)) + 0j, g)
        t_ab = kernel_trace(kernel_product(a, b))
        t_ba = kernel_trace(kernel_product(b, a))
        assert abs(t_ab - t_ba) < 1e-10 * max(1.0, abs(t_ab))

    def test_product_is_operator_composition(self):
        # rank-one kernels: K(a,a') = f(a) g(a') compose to inner products
        g = build_alpha_grid(64)
        a = g.alpha_nodes
        f1, g1 = 1 / np.cosh(a), np.tanh(a) / np.cosh(a)
        f2, g2 = 1 / np.cosh(2 * a), 1 / np.cosh(a) ** 2
        k1 = Kernel(np.outer(f1, g1) + 0j, g)
        k2 = Kernel(np.outer(f2, g2) + 0j, g)
        prod = kernel_product(k1, k2)
        inner = np.sum(g.alpha_weights * g1 * f2)
        np.testing.assert_allclose(prod.entries,
                                   inner * np.outer(f1, g2), atol=1e-12)

    def test_shape_mismatch_rejected(self):
        g = build_alpha_grid(16)
        with pytest.raises(ValidationError):
            Kernel(np.zeros((8, 8)), g)

    def test_nonfinite_rejected(self):
        g = build_alpha_grid(16)
        bad = np.zeros((16, 16))
        bad[0, 0] = np.inf
        with pytest.raises(ValidationError):
            Kernel(bad, g)


class TestBuildGrid:
    def test_radial_modes(self):
        gp = build_grid(32, 16, p_scale=0.5, radial="p")
        gk = build_grid(32, 16, p_scale=0.5, radial="kappa")
        assert gp.n_p == gk.n_p == 16
        with pytest.raises(ValidationError):
            build_grid(32, 16, radial="bogus")

    def test_epsilon_tracks_spacing(self):
        g = build_grid(64, 8)
        assert 0 < g.epsilon <= 0.5 * np.min(np.diff(g.alpha_nodes)) + 1e-15
