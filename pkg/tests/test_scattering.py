"""T-matrix kernels: half-plates (tilted and vertical), needles, plates."""

import math
import warnings

import numpy as np
import pytest
import scipy.integrate as si
from hypothesis import given, settings
from hypothesis import strategies as st

from casimir2d.errors import ResolutionError, ValidationError
from casimir2d.quadrature import build_alpha_grid
from casimir2d.scattering import (
    BoundaryCondition,
    Channel,
    HalfPlate,
    Needle,
    _differentiation_matrix,
    _pv_csch_half,
    halfplate_kernel,
    infinite_plate_rl,
    needle_T_multipole,
    needle_kernel_planar,
    perfect_plate_eigenvalues,
)


class TestBoundaryCondition:
    def test_parse(self):
        assert BoundaryCondition.parse("d") is BoundaryCondition.DIRICHLET
        assert BoundaryCondition.parse("Neumann") is BoundaryCondition.NEUMANN
        assert BoundaryCondition.parse("EM") is BoundaryCondition.EM2D
        with pytest.raises(ValidationError):
            BoundaryCondition.parse("periodic")

    def test_signs(self):
        assert BoundaryCondition.DIRICHLET.sign == -1
        assert BoundaryCondition.NEUMANN.sign == +1
        with pytest.raises(ValidationError):
            BoundaryCondition.EM2D.sign

    def test_perfect_plate_eigenvalues(self):
        assert perfect_plate_eigenvalues("D") == -1.0
        assert perfect_plate_eigenvalues("N") == +1.0
        assert perfect_plate_eigenvalues("M") == -1.0
        assert perfect_plate_eigenvalues("E") == +1.0


class TestHalfPlateKernel:
    @pytest.mark.parametrize("bc", ["D", "N"])
    @pytest.mark.parametrize("phi", [0.0, 0.3, -0.7, 1.2])
    def test_hermitian(self, bc, phi):
        g = build_alpha_grid(48)
        k = halfplate_kernel(bc, Channel.LL, phi, g)
        np.testing.assert_allclose(k.entries, k.entries.conj().T,
                                   atol=1e-12)

    def test_rl_sign(self):
        g = build_alpha_grid(32)
        for bc, s in (("D", -1), ("N", +1)):
            ll = halfplate_kernel(bc, Channel.LL, 0.2, g)
            rl = halfplate_kernel(bc, Channel.RL, 0.2, g)
            np.testing.assert_allclose(rl.entries, -s * ll.entries,
                                       atol=1e-14)

    def test_untilted_values(self):
        # phi = 0: T = (-sech z + s sech y) / 2 elementwise
        g = build_alpha_grid(32)
        a = g.alpha_nodes
        z = 0.5 * (a[:, None] + a[None, :])
        y = 0.5 * (a[:, None] - a[None, :])
        k = halfplate_kernel("D", Channel.LL, 0.0, g)
        np.testing.assert_allclose(
            k.entries, 0.5 * (-1 / np.cosh(z) - 1 / np.cosh(y)), atol=1e-13)

    def test_beyond_pi_half_rejected(self):
        g = build_alpha_grid(32)
        with pytest.raises(ValidationError):
            halfplate_kernel("D", Channel.LL, 2.0, g)

    def test_pole_collar_refused(self):
        g = build_alpha_grid(32)
        phi = 0.5 * math.pi - 0.5 * g.epsilon
        with pytest.raises(ResolutionError):
            halfplate_kernel("D", Channel.LL, phi, g)

    def test_infinite_plate_is_minus_identity(self):
        g = build_alpha_grid(32)
        k = infinite_plate_rl(g)
        np.testing.assert_allclose(
            k.entries, -np.diag(1.0 / g.alpha_weights), atol=1e-13)


class TestVerticalKernel:
    def test_differentiation_matrix(self):
        g = build_alpha_grid(64)
        d = _differentiation_matrix(g)
        a = g.alpha_nodes
        f = 1 / np.cosh(a)
        fprime = -np.tanh(a) / np.cosh(a)
        np.testing.assert_allclose(d @ f, fprime, atol=1e-5)

    def test_differentiation_annihilates_constants(self):
        g = build_alpha_grid(48)
        d = _differentiation_matrix(g)
        np.testing.assert_allclose(d @ np.ones(48), 0.0, atol=1e-10)

    @pytest.mark.parametrize("c", [0.0, 0.3])
    def test_pv_operator_vs_adaptive_quadrature(self, c):
        # PV int dalpha'/(2 pi) f(alpha') / sinh((alpha-alpha')/2),
        # reference by singularity-subtracted adaptive quadrature
        g = build_alpha_grid(96)
        a, w = g.alpha_nodes, g.alpha_weights
        K = _pv_csch_half(g)
        f = 1.0 / np.cosh(a) * np.exp(1j * c * np.sinh(a))
        out = (K * w[None, :]) @ f

        def ref_at(aj):
            fj = 1.0 / math.cosh(aj) * np.exp(1j * c * math.sinh(aj))

            def gfun(x):
                fx = 1.0 / np.cosh(x) * np.exp(1j * c * np.sinh(x))
                return (fx - fj) / np.sinh(0.5 * (aj - x)) / (2 * np.pi)

            with warnings.catch_warnings():
                warnings.simplefilter("ignore", si.IntegrationWarning)
                rr = si.quad(lambda x: gfun(x).real, -25, 25, limit=400,
                             points=[aj])[0]
                ri = si.quad(lambda x: gfun(x).imag, -25, 25, limit=400,
                             points=[aj])[0]
            return rr + 1j * ri

        for j in (48, 32, 60):
            assert abs(out[j] - ref_at(a[j])) < 1e-3

    def test_vertical_kernel_weakly_hermitian(self):
        # the continuum kernel is Hermitian; the discrete entries are not
        # (the PV singularity subtraction adds a dense real correction),
        # but quadratic forms on smooth test functions agree to
        # quadrature accuracy: <f, K h> = conj(<h, K f>)
        g = build_alpha_grid(96)
        a, w = g.alpha_nodes, g.alpha_weights
        f = 1 / np.cosh(a) * np.exp(0.4j * np.sinh(a))
        h = np.tanh(a) / np.cosh(a) + 0.2j / np.cosh(2 * a)
        for bc in ("D", "N"):
            k = halfplate_kernel(bc, Channel.LL, 0.5 * math.pi, g).entries
            lhs = np.sum(w * np.conj(f) * ((k * w[None, :]) @ h))
            rhs = np.conj(np.sum(w * np.conj(h) * ((k * w[None, :]) @ f)))
            assert abs(lhs - rhs) < 1e-4

    def test_up_down_conjugate(self):
        # flipping the extension direction flips only the PV (imaginary
        # odd) part: T_down = conj(T_up) elementwise
        g = build_alpha_grid(48)
        up = halfplate_kernel("N", Channel.LL, 0.5 * math.pi, g)
        down = halfplate_kernel("N", Channel.LL, -0.5 * math.pi, g)
        np.testing.assert_allclose(down.entries, up.entries.conj(),
                                   atol=1e-12)


class TestNeedle:
    def test_multipole_structure(self):
        t = needle_T_multipole(Needle(0.2, 0.3, 0.5, 0.7), 2.0)
        p2 = 4.0
        assert t[1, 1] == pytest.approx(p2 * 0.2)
        for m, k in ((-1, 0), (1, 2)):
            assert t[k, k] == pytest.approx(2 * p2 * 0.8)
            assert t[k, 2 - k] == pytest.approx(
                2 * p2 * (0.3 - 0.5) * np.exp(2j * m * 0.7))
        # m + m' odd entries vanish
        assert t[0, 1] == 0 and t[1, 0] == 0 and t[1, 2] == 0

    def test_planar_kernel_rank_form(self):
        # equivalent rank-one form of the planar conversion
        desc = Needle(0.1, 0.25, 0.6, 0.4)
        g = build_alpha_grid(32)
        p = 1.3
        k = needle_kernel_planar(desc, p, g)
        a_in = g.alpha_nodes[None, :]
        a_out = g.alpha_nodes[:, None]
        expect = math.pi * p * p * (
            desc.t00
            + 8 * desc.txx * np.cosh(a_in + 1j * desc.theta0)
            * np.cosh(a_out - 1j * desc.theta0)
            + 8 * desc.tyy * np.sinh(a_in + 1j * desc.theta0)
            * np.sinh(a_out - 1j * desc.theta0)
        )
        np.testing.assert_allclose(k.entries, expect, atol=1e-10)

    def test_circle_theta_independent(self):
        g = build_alpha_grid(24)
        k1 = needle_kernel_planar(Needle(0.0, 0.3, 0.3, 0.0), 1.0, g)
        k2 = needle_kernel_planar(Needle(0.0, 0.3, 0.3, 1.1), 1.0, g)
        np.testing.assert_allclose(k1.entries, k2.entries, atol=1e-12)

    @given(st.floats(-1.5, 1.5), st.floats(0.1, 3.0))
    @settings(max_examples=20, deadline=None)
    def test_kernel_hermitian_for_real_strengths(self, theta0, p):
        g = build_alpha_grid(16)
        k = needle_kernel_planar(Needle(0.1, 0.2, 0.5, theta0), p, g)
        np.testing.assert_allclose(k.entries, k.entries.conj().T,
                                   atol=1e-10)

    def test_validation(self):
        with pytest.raises(ValidationError):
            Needle(0.0, -1.0, 0.0, 0.0)
        with pytest.raises(ValidationError):
            needle_T_multipole(Needle(), 0.0)
        with pytest.raises(ValidationError):
            HalfPlate(math.nan)
