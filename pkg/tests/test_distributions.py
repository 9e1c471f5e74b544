import json
import math

import numpy as np
import pytest
from scipy.special import betainc

from rdmt.algebra import (
    AlgebraTag,
    DivMatrix,
    HermitianPD,
    conj_transpose,
    logdet_hpd,
    matmul,
)
from rdmt.distributions import (
    BetaIIParams,
    GammaScalarParams,
    MatricTParams,
    MatrixMTParams,
    RngStream,
    ScaleMixtureSpec,
    WishartParams,
    logpdf_beta2_matric,
    logpdf_beta2_multivariate,
    logpdf_matric_t,
    logpdf_matrix_mt,
    radial_logpdf_matric_t,
    radial_logpdf_matrix_mt,
    sample_beta2_matric,
    sample_elliptical_t,
    sample_gamma_scalar,
    sample_gaussian,
    sample_matric_t,
    sample_matrix_mt,
    sample_wishart,
    _std_normal_raw,
)
from rdmt.errors import DomainError, OctonionMatrixError
from rdmt.spectral import eigenvalues_batch, singular_values_batch
from rdmt.verify import ks_one_sample, ks_two_sample, moment_check

from conftest import random_hpd, random_matrix

R, C, H, O = AlgebraTag.REAL, AlgebraTag.COMPLEX, AlgebraTag.QUATERNION, AlgebraTag.OCTONION


class TestRngStream:
    def test_deterministic(self):
        a = RngStream(5, 3).generator.normal(size=8)
        b = RngStream(5, 3).generator.normal(size=8)
        np.testing.assert_array_equal(a, b)

    def test_streams_independent(self):
        a = RngStream(5, 0).generator.normal(size=8)
        b = RngStream(5, 1).generator.normal(size=8)
        assert not np.array_equal(a, b)

    def test_child_deterministic(self):
        a = RngStream(5, 2).child(7).generator.normal(size=4)
        b = RngStream(5, 2).child(7).generator.normal(size=4)
        np.testing.assert_array_equal(a, b)


class TestGaussian:
    def test_zero_mean_single_entry(self):
        y = sample_gaussian(RngStream(1), C, 1, 1, size=100000)
        se = 1.0 / math.sqrt(2.0 * 100000)
        assert np.abs(y.mean(axis=0)).max() < 4 * se

    def test_unit_entry_norm(self):
        m, n = 2, 3
        y = sample_gaussian(RngStream(2), H, m, n, size=20000)
        sq = np.square(y).sum(axis=(1, 2, 3))
        res = moment_check(sq, float(m * n), 3.0)
        assert res.passed, res

    def test_column_scale_applied(self, rng):
        sigma = random_hpd(rng, C, 2)
        y = sample_gaussian(RngStream(3), C, 3, 2, Sigma=sigma, size=40000)
        from rdmt.algebra import _conj_t_raw, _matmul_raw

        gram = _matmul_raw(_conj_t_raw(y), y)  # expect m * Sigma
        mean = gram.mean(axis=0)
        se = gram.std(axis=0, ddof=1) / math.sqrt(40000)
        z = np.abs(mean - 3.0 * sigma.mat.data) / np.where(se > 1e-12, se, 1.0)
        assert z.max() < 4.0

    def test_determinism(self):
        a = sample_gaussian(RngStream(7, 1), C, 2, 2, size=10)
        b = sample_gaussian(RngStream(7, 1), C, 2, 2, size=10)
        np.testing.assert_array_equal(a, b)

    def test_octonion_rejected(self):
        with pytest.raises(OctonionMatrixError):
            sample_gaussian(RngStream(1), O, 1, 1)


class TestGammaScalar:
    def test_mean(self):
        params = GammaScalarParams(R, 4.0, 2.0)
        s = sample_gamma_scalar(RngStream(4), params, size=100000)
        assert moment_check(s, 8.0, 3.0).passed

    def test_positive(self):
        s = sample_gamma_scalar(RngStream(5), GammaScalarParams(H, 1.5, 0.7),
                                size=10000)
        assert np.all(s > 0)

    def test_octonion_allowed(self):
        s = sample_gamma_scalar(RngStream(6), GammaScalarParams(O, 2.0, 1.0),
                                size=20000)
        assert moment_check(s, 2.0, 3.0).passed

    def test_single_draw_is_float(self):
        assert isinstance(
            sample_gamma_scalar(RngStream(1), GammaScalarParams(R, 2.0, 1.0)),
            float)


class TestWishart:
    def test_mean_nu_xi(self):
        params = WishartParams(C, 2, 5.0)
        w = sample_wishart(RngStream(8), params, size=20000)
        mean = w.mean(axis=0)
        se = w.std(axis=0, ddof=1) / math.sqrt(20000)
        expected = 5.0 * np.stack([np.eye(2), np.zeros((2, 2))], axis=-1)
        z = np.abs(mean - expected) / np.where(se > 1e-12, se, 1.0)
        assert z.max() < 3.5

    def test_single_draw_is_hermitian_pd(self):
        w = sample_wishart(RngStream(9), WishartParams(H, 3, 11.0))
        assert isinstance(w, HermitianPD)

    def test_bartlett_vs_gram_top_eigenvalue(self):
        params = WishartParams(R, 2, 6.0)
        rng = RngStream(10)
        wa = sample_wishart(rng, params, "bartlett", size=20000)
        wb = sample_wishart(rng, params, "gram", size=20000)
        ta = np.sort(eigenvalues_batch(R, wa)[:, 0])
        tb = np.sort(eigenvalues_batch(R, wb)[:, 0])
        _, p = ks_two_sample(ta, tb)
        assert p > 0.005

    def test_gram_requires_integer_nu(self):
        with pytest.raises(DomainError):
            sample_wishart(RngStream(1), WishartParams(R, 2, 6.5), "gram")

    def test_domain(self):
        with pytest.raises(DomainError):
            WishartParams(H, 3, 7.5)  # needs nu > beta*(m-1) = 8

    def test_non_integer_nu_scalar_matches_gamma_law(self):
        # generalized Bartlett at m = 1 must reproduce the analytic scalar
        # law Gamma(beta*nu/2, 2/beta) for fractional nu
        from scipy.stats import gamma as gamma_dist

        nu = 3.7
        w = sample_wishart(RngStream(27), WishartParams(C, 1, nu),
                           size=30000)[:, 0, 0, 0]
        cdf = lambda x: gamma_dist.cdf(x, a=nu, scale=1.0)  # beta=2: shape nu
        _, p = ks_one_sample(np.sort(w), cdf)
        assert p > 0.005


class TestMatricTSampler:
    def test_scalar_cauchy_ks(self):
        t = sample_matric_t(RngStream(11), MatricTParams(R, 1, 1, 1.0),
                            size=50000)[:, 0, 0, 0]
        _, p = ks_one_sample(np.sort(t), lambda x: 0.5 + np.arctan(x) / math.pi)
        assert p > 0.005

    def test_methods_agree(self):
        params = MatricTParams(C, 2, 3, 5.0)
        rng = RngStream(12)
        a = sample_matric_t(rng, params, "wishart_root", size=20000)
        b = sample_matric_t(rng, params, "inverse_root", size=20000)
        sa = singular_values_batch(C, a)
        sb = singular_values_batch(C, b)
        for i in range(2):
            _, p = ks_two_sample(np.sort(sa[:, i]), np.sort(sb[:, i]))
            assert p > 0.005

    def test_translation_family(self, rng):
        mu = DivMatrix.from_real(R, [[2.5]])
        shifted = sample_matric_t(RngStream(13), MatricTParams(R, 1, 1, 3.0, mu),
                                  size=20000)[:, 0, 0, 0] - 2.5
        centered = sample_matric_t(RngStream(14), MatricTParams(R, 1, 1, 3.0),
                                   size=20000)[:, 0, 0, 0]
        _, p = ks_two_sample(np.sort(shifted), np.sort(centered))
        assert p > 0.005

    def test_determinism(self):
        params = MatricTParams(H, 2, 2, 9.0)
        a = sample_matric_t(RngStream(15, 2), params, size=5)
        b = sample_matric_t(RngStream(15, 2), params, size=5)
        np.testing.assert_array_equal(a, b)

    def test_inverse_root_domain(self):
        with pytest.raises(DomainError):
            # nu+n-m = 6 fails beta*(n-1) = 8
            sample_matric_t(RngStream(1), MatricTParams(H, 2, 3, 5.0),
                            "inverse_root")

    def test_nu_domain(self):
        with pytest.raises(DomainError):
            MatricTParams(H, 2, 2, 4.0)  # needs nu > 4

    @pytest.mark.parametrize("tag", [R, C, H])
    def test_scalar_reduction_ks_every_beta(self, tag):
        # ||T||^2 of the scalar standard law is beta-prime(beta/2, beta*nu/2):
        # a sampler/density KS check that works uniformly in the algebra.
        nu = 3.0
        t = sample_matric_t(RngStream(28 + tag.beta),
                            MatricTParams(tag, 1, 1, nu), size=30000)
        f = np.sort(np.square(t).sum(axis=(1, 2, 3)))
        b = tag.beta
        _, p = ks_one_sample(f, lambda x: betainc(b / 2.0, b * nu / 2.0,
                                                  x / (1.0 + x)))
        assert p > 0.005


class TestMatricTDensity:
    def test_scalar_cauchy_at_zero(self):
        params = MatricTParams(R, 1, 1, 1.0)
        t0 = DivMatrix.from_real(R, [[0.0]])
        assert math.isclose(logpdf_matric_t(params, t0), -math.log(math.pi),
                            abs_tol=1e-12)

    def test_scalar_nu3_at_zero(self):
        params = MatricTParams(R, 1, 1, 3.0)
        t0 = DivMatrix.from_real(R, [[0.0]])
        assert math.isclose(logpdf_matric_t(params, t0), math.log(2 / math.pi),
                            abs_tol=1e-12)

    def test_primal_equals_dual_quaternion(self, rng):
        for _ in range(100):
            params = MatricTParams(
                H, 2, 3, 4 * 1 + float(rng.uniform(0.5, 4.0)),
                random_matrix(rng, H, 2, 3), random_hpd(rng, H, 2),
                random_hpd(rng, H, 3))
            point = random_matrix(rng, H, 2, 3)
            gap = abs(logpdf_matric_t(params, point, "primal")
                      - logpdf_matric_t(params, point, "dual"))
            assert gap < 1e-9

    @pytest.mark.parametrize("tag", [R, C, H])
    def test_congruence_jacobian_identity(self, rng, tag):
        # The density transported through T -> A T B + C picks up exactly the
        # linear-transform volume factor |A*A|^(beta n/2) |B*B|^(beta m/2).
        m, n = 2, 3
        beta = tag.beta
        params = MatricTParams(tag, m, n, beta * (m - 1) + 2.0,
                               random_matrix(rng, tag, m, n),
                               random_hpd(rng, tag, m), random_hpd(rng, tag, n))
        point = random_matrix(rng, tag, m, n)
        a = random_matrix(rng, tag, m, m)
        b = random_matrix(rng, tag, n, n)
        c = random_matrix(rng, tag, m, n)
        point2 = matmul(matmul(a, point), b) + c
        mu2 = matmul(matmul(a, params.mu), b) + c
        xi2 = HermitianPD(
            matmul(matmul(a, params.Xi.inverse().mat), conj_transpose(a))
        ).inverse()
        sigma2 = HermitianPD(
            matmul(matmul(conj_transpose(b), params.Sigma.mat), b))
        params2 = MatricTParams(tag, m, n, params.nu, mu2, xi2, sigma2)
        jac = (beta * n / 2.0
               * logdet_hpd(HermitianPD(matmul(conj_transpose(a), a)))
               + beta * m / 2.0
               * logdet_hpd(HermitianPD(matmul(conj_transpose(b), b))))
        lhs = logpdf_matric_t(params, point)
        rhs = logpdf_matric_t(params2, point2) + jac
        assert abs(lhs - rhs) < 1e-9

    def test_octonion_scalar_allowed_matrix_rejected(self):
        params = MatricTParams(O, 1, 1, 2.0)
        point = DivMatrix(O, np.full((1, 1, 8), 0.25))
        assert np.isfinite(logpdf_matric_t(params, point))
        with pytest.raises(OctonionMatrixError):
            logpdf_matric_t(MatricTParams(O, 2, 2, 9.0),
                            DivMatrix(O, np.zeros((2, 2, 8))))

    def test_radial_form_matches_matrix_form(self, rng):
        for tag in (R, C, H):
            for n in (1, 2, 3):
                params = MatricTParams(tag, 1, n, 2.5)
                r = float(rng.uniform(0.1, 3.0))
                data = np.zeros((1, n, tag.beta))
                data[0, 0, 0] = r
                assert math.isclose(
                    radial_logpdf_matric_t(tag, n, 2.5, r),
                    logpdf_matric_t(params, DivMatrix(tag, data)),
                    abs_tol=1e-12)


class TestBetaII:
    def test_scalar_value(self):
        params = BetaIIParams(R, 1, 2, 2.0)
        f = HermitianPD.from_real(R, [[1.0]])
        assert math.isclose(logpdf_beta2_matric(params, f), math.log(0.25),
                            abs_tol=1e-12)

    def test_boundary_limit_zero_exponent(self):
        # At beta(n-m+1)/2 = 1 the kernel exponent is 0 and the density tends
        # to 1/B(nu/2, 1) * 1 = 1 as f -> 0+.
        params = BetaIIParams(R, 1, 2, 2.0)
        val = logpdf_beta2_matric(params, HermitianPD.from_real(R, [[1e-13]]))
        assert abs(val) < 1e-9

    def test_boundary_positive_exponent_gives_minus_inf(self):
        params = BetaIIParams(C, 1, 2, 2.0)  # kernel exponent beta*n/2-1 = 1
        zero = DivMatrix.from_real(C, [[0.0]])
        assert logpdf_beta2_matric(params, zero) == -math.inf

    def test_boundary_zero_exponent_finite_limit(self):
        # exponent 0: the determinant factor drops out, the limit is finite
        params = BetaIIParams(R, 1, 2, 2.0)
        zero = DivMatrix.from_real(R, [[0.0]])
        assert abs(logpdf_beta2_matric(params, zero)) < 1e-12

    def test_boundary_negative_exponent_raises(self):
        params = BetaIIParams(R, 1, 1, 2.0)  # kernel exponent -1/2 diverges
        with pytest.raises(DomainError):
            logpdf_beta2_matric(params, DivMatrix.from_real(R, [[0.0]]))

    def test_outside_cone_is_zero_density(self):
        params = BetaIIParams(R, 2, 3, 4.0)
        indefinite = DivMatrix.from_real(R, [[1.0, 0.0], [0.0, -0.5]])
        assert logpdf_beta2_matric(params, indefinite) == -math.inf
        assert logpdf_beta2_multivariate(params, indefinite) == -math.inf

    def test_non_hermitian_point_rejected(self):
        params = BetaIIParams(R, 2, 3, 4.0)
        skew = DivMatrix.from_real(R, [[1.0, 1.0], [0.0, 1.0]])
        with pytest.raises(ValueError, match="Hermitian"):
            logpdf_beta2_matric(params, skew)

    def test_nonstandardised_identity_scale_reduces(self, rng):
        std = BetaIIParams(C, 2, 3, 4.0)
        scaled = BetaIIParams(C, 2, 3, 4.0, scale=HermitianPD.identity(C, 2))
        f = random_hpd(rng, C, 2)
        assert logpdf_beta2_matric(std, f) == logpdf_beta2_matric(scaled, f)
        assert (logpdf_beta2_multivariate(std, f)
                == logpdf_beta2_multivariate(scaled, f))

    def test_nonstandardised_matches_change_of_variables(self, rng):
        # Z = L F L* with Delta = L L*: p_Z(z) must equal the standard density
        # at F times the inverse congruence volume factor.
        tag, m, n, nu = C, 2, 3, 4.0
        beta = tag.beta
        delta = random_hpd(rng, tag, m)
        std = BetaIIParams(tag, m, n, nu)
        scaled = BetaIIParams(tag, m, n, nu, scale=delta)
        f = random_hpd(rng, tag, m)
        l = delta.chol
        z = HermitianPD(matmul(matmul(l, f.mat), conj_transpose(l)))
        jac = (beta * (m - 1) / 2.0 + 1.0) * delta.logdet
        assert abs(logpdf_beta2_matric(scaled, z)
                   - (logpdf_beta2_matric(std, f) - jac)) < 1e-9

    def test_sampler_scalar_beta_prime_ks(self):
        nu = 3.0
        f = sample_beta2_matric(RngStream(16), BetaIIParams(R, 1, 1, nu),
                                size=50000)[:, 0, 0, 0]
        _, p = ks_one_sample(np.sort(f),
                             lambda x: betainc(0.5, nu / 2.0, x / (1.0 + x)))
        assert p > 0.005

    def test_sampler_eigenvalues_nonnegative(self):
        f = sample_beta2_matric(RngStream(17), BetaIIParams(C, 2, 3, 5.0),
                                size=500)
        assert eigenvalues_batch(C, f).min() > 0.0

    def test_orientation_shapes(self):
        gram = sample_beta2_matric(RngStream(18), BetaIIParams(R, 2, 3, 4.0))
        cogram = sample_beta2_matric(RngStream(18), BetaIIParams(R, 3, 2, 4.0,
                                                                 "cogram"))
        assert gram.m == 2 and cogram.m == 2

    def test_orientation_constraints(self):
        with pytest.raises(ValueError):
            BetaIIParams(R, 3, 2, 4.0, "gram")
        with pytest.raises(ValueError):
            BetaIIParams(R, 2, 3, 4.0, "cogram")

    def test_cogram_printed_variant_changes_exponent_only(self, rng):
        params = BetaIIParams(R, 3, 1, 4.0, "cogram")
        f = HermitianPD.from_real(R, [[0.8]])
        base = logpdf_beta2_matric(params, f)
        printed = logpdf_beta2_matric(params, f, printed_variant=True)
        assert math.isclose(printed - base, -math.log1p(0.8), rel_tol=1e-12)

    def test_sampling_nonstandardised_rejected(self, rng):
        params = BetaIIParams(R, 2, 3, 4.0, scale=random_hpd(rng, R, 2))
        with pytest.raises(ValueError):
            sample_beta2_matric(RngStream(1), params)


class TestMatrixMT:
    def test_scalar_cauchy_value(self):
        params = MatrixMTParams(R, 1, 1, 1.0, 1.0)
        t0 = DivMatrix.from_real(R, [[0.0]])
        assert math.isclose(logpdf_matrix_mt(params, t0), -math.log(math.pi),
                            abs_tol=1e-12)

    def test_m1_coincides_with_matricvariate(self, rng):
        pmt = MatricTParams(C, 1, 3, 4.0)
        pmm = MatrixMTParams(C, 1, 3, 4.0, 1.0)
        for _ in range(50):
            point = random_matrix(rng, C, 1, 3)
            gap = abs(logpdf_matric_t(pmt, point) - logpdf_matrix_mt(pmm, point))
            assert gap < 1e-12

    def test_rho_scaling_identity(self, rng):
        rho = 2.5
        p_rho = MatrixMTParams(H, 2, 2, 3.0, rho)
        p_one = MatrixMTParams(H, 2, 2, 3.0, 1.0)
        beta, m, n = 4, 2, 2
        for _ in range(10):
            point = random_matrix(rng, H, 2, 2)
            scaled = DivMatrix(H, math.sqrt(rho) * point.data)
            lhs = logpdf_matrix_mt(p_rho, point)
            rhs = beta * m * n / 2.0 * math.log(rho) + logpdf_matrix_mt(p_one, scaled)
            assert abs(lhs - rhs) < 1e-12

    def test_sampler_all_finite(self):
        t = sample_matrix_mt(RngStream(19), MatrixMTParams(C, 2, 3, 1.0, 1.0),
                             size=20000)
        assert np.all(np.isfinite(t))

    def test_sampler_determinism(self):
        params = MatrixMTParams(R, 2, 2, 4.0, 2.0)
        a = sample_matrix_mt(RngStream(20, 5), params, size=7)
        b = sample_matrix_mt(RngStream(20, 5), params, size=7)
        np.testing.assert_array_equal(a, b)

    def test_scalar_ks_vs_student(self):
        # T * sqrt(rho * nu) is classical Student-t with nu df; used as an
        # analytic CDF for the sampled scalar law.
        from scipy.stats import t as student

        nu, rho = 5.0, 2.0
        draws = sample_matrix_mt(RngStream(21), MatrixMTParams(R, 1, 1, nu, rho),
                                 size=50000)[:, 0, 0, 0]
        scaled = np.sort(draws * math.sqrt(rho * nu))
        _, p = ks_one_sample(scaled, lambda x: student.cdf(x, nu))
        assert p > 0.005

    def test_general_scales_sampler_matches_density_transport(self, rng):
        # Sampling with (Delta, Lambda) must match transporting standard
        # draws through the congruence map, draw for draw.
        tag = C
        delta = random_hpd(rng, tag, 2)
        lam = random_hpd(rng, tag, 2)
        params = MatrixMTParams(tag, 2, 2, 4.0, 1.5, None, delta, lam)
        std = MatrixMTParams(tag, 2, 2, 4.0, 1.5)
        a = sample_matrix_mt(RngStream(22, 3), params, size=6)
        t1 = sample_matrix_mt(RngStream(22, 3), std, size=6)
        from rdmt.algebra import _conj_t_raw, _solve_upper_raw

        p = _solve_upper_raw(_conj_t_raw(delta.chol.data)[None], t1)
        q = _conj_t_raw(_solve_upper_raw(_conj_t_raw(lam.chol.data)[None],
                                         _conj_t_raw(p)))
        np.testing.assert_allclose(a, q, atol=1e-12)

    def test_octonion_scalar(self):
        params = MatrixMTParams(O, 1, 1, 2.0, 1.0)
        draws = sample_matrix_mt(RngStream(23), params, size=1000)
        assert np.all(np.isfinite(draws))
        point = DivMatrix(O, np.full((1, 1, 8), 0.2))
        assert np.isfinite(logpdf_matrix_mt(params, point))

    def test_radial_form_matches_matrix_form(self, rng):
        params = MatrixMTParams(C, 1, 2, 3.0, 1.7)
        r = 0.9
        data = np.zeros((1, 2, 2))
        data[0, 1, 1] = r  # isotropy: any direction at radius r
        assert math.isclose(radial_logpdf_matrix_mt(C, 2, 3.0, 1.7, r),
                            logpdf_matrix_mt(params, DivMatrix(C, data)),
                            abs_tol=1e-12)

    @pytest.mark.parametrize("tag", [R, C, H])
    def test_scalar_reduction_ks_every_beta(self, tag):
        # rho * ||T1||^2 of the scalar law is beta-prime(beta/2, beta*nu/2)
        nu, rho = 3.0, 1.8
        t = sample_matrix_mt(RngStream(33 + tag.beta),
                             MatrixMTParams(tag, 1, 1, nu, rho), size=30000)
        f = np.sort(rho * np.square(t).sum(axis=(1, 2, 3)))
        b = tag.beta
        _, p = ks_one_sample(f, lambda x: betainc(b / 2.0, b * nu / 2.0,
                                                  x / (1.0 + x)))
        assert p > 0.005


class TestBetaIIMultivariate:
    def test_scalar_value(self):
        params = BetaIIParams(R, 1, 2, 2.0)
        f = HermitianPD.from_real(R, [[1.0]])
        assert math.isclose(logpdf_beta2_multivariate(params, f),
                            math.log(0.25), abs_tol=1e-12)

    def test_m1_coincides_with_matricvariate_form(self, rng):
        params = BetaIIParams(H, 1, 3, 4.0)
        for _ in range(50):
            f = HermitianPD.from_real(H, [[float(rng.uniform(0.05, 5.0))]])
            gap = abs(logpdf_beta2_matric(params, f)
                      - logpdf_beta2_multivariate(params, f))
            assert gap < 1e-12

    def test_trace_kernel_differs_from_determinant_kernel_for_m2(self, rng):
        params = BetaIIParams(R, 2, 3, 4.0)
        f = random_hpd(rng, R, 2)
        assert (logpdf_beta2_matric(params, f)
                != logpdf_beta2_multivariate(params, f))


class TestEllipticalT:
    def test_degenerate_mixture_is_exact_normal_construction(self):
        # With a single unit-scale component no mixture randomness is
        # consumed, so the draws coincide with the plain Gaussian-based
        # gram construction replayed from the same stream.
        tag, m, n, nu, size = C, 2, 3, 4, 8
        mix = ScaleMixtureSpec((1.0,), (1.0,))
        got = sample_elliptical_t(RngStream(24, 1), tag, m, n, nu, mix, size=size)

        from rdmt.algebra import (_cholesky_raw, _conj_t_raw, _hermitize_raw,
                                  _matmul_raw, _solve_lower_raw)

        gen = RngStream(24, 1).generator
        y = _std_normal_raw(gen, tag.beta, (size, m, n + nu))
        y1, y2 = y[:, :, :n, :], y[:, :, n:, :]
        v = _hermitize_raw(_matmul_raw(y2, _conj_t_raw(y2)))
        expected = _solve_lower_raw(_cholesky_raw(v), y1)
        np.testing.assert_array_equal(got, expected)

    @pytest.mark.parametrize("tag", [R, C])
    def test_invariance_vs_normal_built(self, tag):
        mix = ScaleMixtureSpec((0.7, 0.3), (1.0, 3.0))
        rng = RngStream(25)
        a = sample_elliptical_t(rng, tag, 2, 3, 4, mix, size=20000)
        b = sample_matric_t(rng, MatricTParams(tag, 2, 3, 4.0), size=20000)
        sa = singular_values_batch(tag, a)
        sb = singular_values_batch(tag, b)
        for i in range(2):
            _, p = ks_two_sample(np.sort(sa[:, i]), np.sort(sb[:, i]))
            assert p > 0.005

    def test_invalid_mixture(self):
        with pytest.raises(ValueError):
            ScaleMixtureSpec((0.7, 0.7), (1.0, 2.0))
        with pytest.raises(ValueError):
            ScaleMixtureSpec((1.0,), (-1.0,))

    def test_requires_integer_nu_ge_m(self):
        mix = ScaleMixtureSpec((1.0,), (1.0,))
        with pytest.raises(ValueError):
            sample_elliptical_t(RngStream(1), R, 2, 3, 1, mix)


class TestParamSerialization:
    def test_matric_t_round_trip(self, rng):
        params = MatricTParams(H, 2, 3, 9.0, random_matrix(rng, H, 2, 3),
                               random_hpd(rng, H, 2), random_hpd(rng, H, 3))
        text = json.dumps(params.to_json_dict())
        back = MatricTParams.from_json_dict(json.loads(text))
        assert back.nu == params.nu
        assert back.mu.isclose(params.mu)
        assert back.Xi.mat.isclose(params.Xi.mat)

    def test_all_families_round_trip(self, rng):
        records = [
            MatrixMTParams(C, 2, 2, 3.0, 1.5),
            WishartParams(R, 2, 6.0),
            GammaScalarParams(O, 2.0, 0.5),
            BetaIIParams(C, 3, 2, 5.0, "cogram"),
        ]
        for params in records:
            text = json.dumps(params.to_json_dict())
            back = type(params).from_json_dict(json.loads(text))
            assert back.to_json_dict() == params.to_json_dict()
