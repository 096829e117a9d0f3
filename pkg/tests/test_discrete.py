import math

import numpy as np
import pytest

from dbar_range.discrete import (
    DENSE_LIMIT,
    MeshError,
    SolverError,
    abs2_field,
    assemble,
    closed_range_constant,
    constant_field,
    gaussian_decay_field,
    least_norm_solve,
    radial_bump,
    twisted_quadrature_check,
    verify_certificate,
)
from dbar_range.forms import FormValue, HermitianField, theta
from dbar_range.geometry import Disc, PlanarDomain, Rect, Strip, Union


def disc_grid(radius=1.0, h=1 / 16, pad=1.0):
    w = radius + pad
    dom = PlanarDomain(Disc(0, 0, radius), (-w, w, -w, w), h)
    return assemble(dom, h)


def square_grid(h=1 / 16):
    dom = PlanarDomain(Rect(0, 1, 0, 1), (-0.5, 1.5, -0.5, 1.5), h)
    return assemble(dom, h)


class TestAssemble:
    def test_annihilates_constants_and_holomorphic(self):
        g = square_grid(1 / 8)
        ones = np.ones(g.size, dtype=complex)
        z = g.nodes_z
        for f, name in [(ones, "1"), (z, "z"), (z**2, "z^2")]:
            out = (g.op @ f)[g.full_stencil]
            assert np.max(np.abs(out)) < 1e-12, name

    def test_zbar_derivative_is_one(self):
        g = square_grid(1 / 8)
        out = g.op @ np.conj(g.nodes_z)
        assert np.allclose(out[g.full_stencil], 1.0, atol=1e-12)

    def test_unit_square_coarse_interior_count(self):
        # closed unit square on the grid: nodes at 0 and 1 included
        dom = PlanarDomain(Rect(-0.01, 1.01, -0.01, 1.01), (-2, 3, -2, 3), 1 / 4)
        g = assemble(dom, 1 / 4)
        # 3x3 fully interior nodes at h = 1/4
        assert int(g.full_stencil.sum()) == 9
        ones = np.ones(g.size, dtype=complex)
        assert np.max(np.abs((g.op @ ones)[g.full_stencil])) == 0.0

    def test_mesh_preconditions(self):
        dom = PlanarDomain(Rect(0, 1, 0, 1), (-0.5, 1.5, -0.5, 1.5), 0.2)
        with pytest.raises(MeshError):
            assemble(dom, 0.2)  # > window/16
        tiny = PlanarDomain(Disc(0, 0, 0.05), (-1, 1, -1, 1), 1 / 16)
        with pytest.raises(MeshError):
            assemble(tiny, 1 / 16)  # < 16 interior nodes


class TestLeastNormSolve:
    def test_zero_rhs(self):
        g = disc_grid(h=1 / 8)
        v, rep = least_norm_solve(g, np.zeros(g.size, dtype=complex))
        assert np.all(v == 0) and rep.ratio == 0.0

    def test_matches_dense_pseudo_inverse(self):
        g = disc_grid(h=1 / 8)
        rng = np.random.default_rng(7)
        w = radial_bump(g.nodes_z, 0.2 + 0.1j, 0.5) * (1 + 0.3j)
        alpha = g.op @ w
        v, rep = least_norm_solve(g, alpha)
        v_dense = np.linalg.pinv(g.op.toarray()) @ alpha
        assert np.linalg.norm(v - v_dense) <= 1e-6 * np.linalg.norm(v_dense)
        assert rep.residual <= 1e-9

    def test_minimality_beats_particular_solution(self):
        g = disc_grid(h=1 / 8)
        w = radial_bump(g.nodes_z, -0.1 + 0.2j, 0.6)
        alpha = g.op @ w
        _, rep = least_norm_solve(g, alpha)
        assert rep.v_norm <= g.norm(w) + 1e-12

    def test_orthogonal_to_sampled_monomials(self):
        # explicit discrete-kernel audit: z^m restricted to the domain
        g = disc_grid(h=1 / 8)
        w = radial_bump(g.nodes_z, 0.0j, 0.5)
        alpha = g.op @ w
        v, _ = least_norm_solve(g, alpha, tol=1e-12)
        for m in range(3):
            k = g.nodes_z**m
            # monomials are only near-kernel (boundary stencils), so test
            # against the projected kernel via dense SVD null space
        A = g.op.toarray()
        u_, s_, vh = np.linalg.svd(A)
        null = vh[s_ < s_[0] * max(A.shape) * np.finfo(float).eps * 10, :].conj().T
        if null.shape[1]:
            overlap = np.linalg.norm(null.conj().T @ v)
            assert overlap <= 1e-6 * np.linalg.norm(v)

    def test_ratio_bounded_across_bump_centers(self):
        g = disc_grid(h=1 / 8)
        sigma = closed_range_constant(g, method="dense")
        for c in (0j, 0.3 + 0.3j, -0.5j, 0.6 + 0j):
            alpha = g.op @ radial_bump(g.nodes_z, c, 0.35)
            _, rep = least_norm_solve(g, alpha)
            assert rep.ratio <= 1.0 / sigma * (1 + 1e-9)


class TestClosedRangeConstant:
    def test_dense_equals_pinv_oracle(self):
        g = disc_grid(h=1 / 8)
        sigma = closed_range_constant(g, method="dense")
        oracle = 1.0 / np.linalg.norm(np.linalg.pinv(g.op.toarray()), ord=2)
        assert sigma == pytest.approx(oracle, rel=1e-10)

    def test_iterative_matches_dense_disc(self):
        g = disc_grid(h=1 / 8)
        s_dense = closed_range_constant(g, method="dense")
        s_iter = closed_range_constant(g, method="iterative")
        assert abs(s_iter - s_dense) <= 1e-6 * s_dense

    def test_iterative_matches_dense_ribbon(self):
        dom = PlanarDomain(Rect(-1.95, 1.95, -0.04, 0.04), (-2, 2, -1, 1), 0.1)
        g = assemble(dom, 0.1)
        assert g.size == 39  # one-node-high ribbon
        s_dense = closed_range_constant(g, method="dense")
        s_iter = closed_range_constant(g, method="iterative")
        assert abs(s_iter - s_dense) <= 1e-6 * s_dense

    def test_disc_scaling_halves_sigma(self):
        # fixed h/R: grids are exact rescalings, sigma scales like 1/R
        sigmas = {}
        for R in (1.0, 2.0):
            g = disc_grid(radius=R, h=R / 16, pad=0.25 * R)
            sigmas[R] = closed_range_constant(g, method="dense")
        assert sigmas[2.0] / sigmas[1.0] == pytest.approx(0.5, abs=1e-10)

    def test_domain_monotonicity_nested_discs(self):
        # shared window and mesh: nested discs, sigma non-increasing
        h = 0.35
        window = (-8.5, 8.5, -8.5, 8.5)
        values = []
        for R in (1.0, 2.0, 4.0, 8.0):
            dom = PlanarDomain(Disc(0, 0, R), window, h)
            g = assemble(dom, h)
            assert g.size <= DENSE_LIMIT
            values.append(closed_range_constant(g, method="dense"))
        assert all(a >= b - 1e-12 for a, b in zip(values, values[1:]))


class TestVerifyCertificate:
    def test_certified_constant_passes(self):
        g = disc_grid(h=1 / 8)
        sigma = closed_range_constant(g, method="dense")
        rep = verify_certificate(g, 1.0 / sigma, trials=10, seed=42)
        assert rep["passed"]
        assert rep["max_ratio"] <= 1.0 / sigma * (1 + 1e-9)

    def test_tiny_constant_fails(self):
        g = disc_grid(h=1 / 8)
        rep = verify_certificate(g, 1e-9, trials=3, seed=1)
        assert not rep["passed"]

    def test_zero_trials_empty_report(self):
        g = disc_grid(h=1 / 8)
        rep = verify_certificate(g, 1.0, trials=0)
        assert rep["trials"] == 0 and rep["passed"]
        assert rep["ratios"] == []

    def test_replayable(self):
        g = disc_grid(h=1 / 8)
        a = verify_certificate(g, 1.0, trials=5, seed=9)
        b = verify_certificate(g, 1.0, trials=5, seed=9)
        assert a == b


def bump_form(center, radius):
    return lambda z: radial_bump(z, center, radius) * (0.7 - 0.2j)


class TestTwistedQuadrature:
    def test_flat_weights_slack_nonnegative_exactly(self):
        g = disc_grid(h=1 / 16)
        slack = twisted_quadrature_check(
            constant_field(0.0), constant_field(1.0), bump_form(0j, 0.5), g
        )
        assert slack >= 0.0

    def test_zero_form(self):
        g = disc_grid(h=1 / 16)
        slack = twisted_quadrature_check(
            constant_field(0.0), constant_field(1.0), lambda z: np.zeros(len(z)), g
        )
        assert slack == 0.0

    def test_gaussian_weight_random_bumps(self):
        g = disc_grid(h=1 / 32)
        rng = np.random.default_rng(13)
        lam = abs2_field(1.0)
        tau = constant_field(1.0)
        for _ in range(20):
            c = (rng.uniform(-0.3, 0.3) + 1j * rng.uniform(-0.3, 0.3))
            r = rng.uniform(0.2, 0.4)
            slack = twisted_quadrature_check(lam, tau, bump_form(c, r), g)
            assert slack >= -50 * g.h**2

    def test_twisted_pair_slack(self):
        g = disc_grid(h=1 / 32)
        alpha = 0.5
        lam = abs2_field(alpha)
        tau = gaussian_decay_field(alpha)
        slack = twisted_quadrature_check(lam, tau, bump_form(0.1 + 0.1j, 0.4), g)
        assert slack >= -50 * g.h**2

    def test_support_near_boundary_rejected(self):
        g = disc_grid(h=1 / 16)
        with pytest.raises(ValueError):
            twisted_quadrature_check(
                constant_field(0.0),
                constant_field(1.0),
                bump_form(0.5 + 0j, 0.6),
                g,
            )

    def test_theta_factor_agrees_with_form_algebra(self):
        # dual route: the vectorized integrand against the exact pointwise
        # algebra on (0,1)-forms in one variable
        alpha = 0.5
        lam = abs2_field(alpha)
        tau = gaussian_decay_field(alpha)
        rng = np.random.default_rng(3)
        for _ in range(20):
            z = complex(rng.normal(), rng.normal()) * 0.5
            za = np.array([z])
            factor = (
                float(tau.value(za)[0]) * float(lam.zzbar(za)[0])
                - float(tau.zzbar(za)[0])
                - abs(complex(tau.dz(za)[0])) ** 2 / float(tau.value(za)[0])
            )
            lam_f = HermitianField(
                1, [[float(lam.zzbar(za)[0])]], [complex(lam.dz(za)[0])],
                float(lam.value(za)[0]),
            )
            tau_f = HermitianField(
                1, [[float(tau.zzbar(za)[0])]], [complex(tau.dz(za)[0])],
                float(tau.value(za)[0]),
            )
            u = FormValue(1, 1, {(1,): 1.0})
            assert factor == pytest.approx(theta(lam_f, tau_f, u), rel=1e-12)
