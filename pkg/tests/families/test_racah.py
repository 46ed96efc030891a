import logging

import pytest
from mpmath import mp

from qlimits.config import working_precision
from qlimits.errors import DegreeError, ParameterError
from qlimits.families import (
    RacahFamily,
    ScaledRacahFamily,
    moment_quotient,
    orthogonality_report,
    recurrence_values,
    ttrr_report,
)
from qlimits.families.bigjacobi import bigjacobi_eval
from qlimits.families.racah import (
    BOUNDARY_FLAG,
    NORMALIZATION_FLAG,
    _masses_at,
    lattice_mu,
    racah_delta_mu,
    racah_eval,
    racah_eval_normalized,
    racah_eval_transformed,
    racah_lattice,
    racah_mu,
    racah_norm_sq,
    racah_orthogonality_report,
    racah_ttrr_coeffs,
    racah_ttrr_normalized,
    racah_weight,
    racah_weight_closed_form,
    racah_x_hat,
)
from qlimits.limits import LimitTransform, normalization_Cn
from qlimits.qcore import qnum
from qlimits.schemas import LimitKind, PrecisionContext, RacahParams, RacahRegime
from qlimits.utils import divided_difference, relative_error


def _summed_4phi3(n, sigma, q="0.5", alpha="0.5", beta="0.2", a="0", b="5"):
    """u_n(mu(a + sigma)) from the prefactor and the 4phi3 summed term by term at 60 digits."""
    with mp.workdps(60):
        q, alpha, beta, a, b = (mp.mpf(v) for v in (q, alpha, beta, a, b))
        s = a + sigma
        kappa = mp.sqrt(q) - 1 / mp.sqrt(q)
        upper = [mp.power(q, -n), mp.power(q, alpha + beta + n + 1), mp.power(q, a - s), mp.power(q, a + s + 1)]
        lower = [mp.power(q, a - b + 1), mp.power(q, beta + 1), mp.power(q, a + b + alpha + 1)]
        series = mp.fsum(
            mp.fprod(mp.qp(x, q, k) for x in upper) / mp.fprod(mp.qp(x, q, k) for x in [*lower, q]) * mp.power(q, k)
            for k in range(n + 1)
        )
        prefactor = mp.power(q, -mp.mpf(n) / 2 * (2 * a + 1)) * mp.fprod(mp.qp(x, q, n) for x in lower) / (
            mp.power(kappa, 2 * n) * mp.qp(mp.power(q, alpha + beta + n + 1), q, n)
        )
        return prefactor * series


class TestLattice:
    def test_lattice_is_product_of_q_numbers(self, base):
        s = mp.mpf("2.3")
        assert abs(lattice_mu(base, s) - qnum(s, base) * qnum(s + 1, base)) < 1e-25

    def test_grid_values(self, racah_params):
        base = racah_params.base
        lattice = racah_lattice(racah_params)
        assert lattice.grid == [0, 1, 2, 3, 4]
        for sigma in lattice.grid:
            assert abs(racah_mu(racah_params, sigma) - lattice_mu(base, sigma)) < 1e-25
            assert abs(racah_delta_mu(racah_params, sigma) - qnum(2 * sigma + 1, base)) < 1e-25

    def test_mu_is_affine_in_normalized_abscissa(self, racah_params):
        lattice = racah_lattice(racah_params)
        slope = (racah_mu(racah_params, 1) - racah_mu(racah_params, 0)) / (
            racah_x_hat(racah_params, 1) - racah_x_hat(racah_params, 0)
        )
        for sigma in range(5):
            assert abs(slope * racah_x_hat(racah_params, sigma) + lattice.c3 - racah_mu(racah_params, sigma)) < 1e-24


class TestParameters:
    def test_exponents_round_trip(self, racah_params):
        ex = racah_params.exponents()
        assert racah_params.N == 5
        assert abs(ex["alpha"] - mp.mpf("0.5")) < 1e-25
        assert abs(ex["beta"] - mp.mpf("0.2")) < 1e-25
        assert abs(ex["a"]) < 1e-25
        assert abs(ex["b"] - 5) < 1e-25

    def test_non_integer_length_rejected(self):
        with pytest.raises(ParameterError):
            RacahParams.from_exponents("0.5", "0.5", "0.2", "0", "4.5")

    def test_beta_above_bound_rejected(self):
        with pytest.raises(ValueError):
            RacahParams.from_exponents("0.5", "0.5", "1.5", "0", "5")

    def test_q_outside_unit_interval_rejected(self):
        with pytest.raises(ValueError):
            RacahParams.from_exponents("1.5", "0.5", "0.2", "0", "5")


class TestEvaluation:
    def test_degree_zero(self, racah_params):
        for sigma in range(5):
            assert racah_eval(racah_params, 0, sigma) == 1

    def test_degree_one_is_mu_minus_beta0(self, racah_params):
        beta0, _ = racah_ttrr_coeffs(racah_params, 0)
        for sigma in range(5):
            value = racah_eval(racah_params, 1, sigma)
            assert relative_error(value, racah_mu(racah_params, sigma) - beta0) < 1e-24

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_monic_in_mu(self, racah_params, n):
        xs = [racah_mu(racah_params, sigma) for sigma in range(n + 1)]
        ys = [racah_eval(racah_params, n, sigma) for sigma in range(n + 1)]
        assert abs(divided_difference(xs, ys) - 1) < 1e-20

    def test_matches_recurrence(self, racah_params):
        family = RacahFamily(racah_params)
        for sigma in range(5):
            path = recurrence_values(family, 4, racah_mu(racah_params, sigma))
            for n in range(5):
                assert relative_error(racah_eval(racah_params, n, sigma), path[n]) < 1e-20

    def test_summed_series_at_double_precision(self, racah_params):
        assert relative_error(racah_eval(racah_params, 2, 1), _summed_4phi3(2, 1)) < 1e-25

    @pytest.mark.parametrize("n", [1, 3, 4])
    def test_summed_series_on_grid(self, racah_params, n):
        for sigma in range(5):
            assert relative_error(racah_eval(racah_params, n, sigma), _summed_4phi3(n, sigma)) < 1e-24

    def test_value_cache_is_bounded(self, racah_params):
        class SmallCache(RacahFamily):
            value_cache_size = 3

        family = SmallCache(racah_params)
        first = [family.evaluate(2, sigma) for sigma in range(5)]
        assert family._values.cache_info().currsize == 3
        assert [family.evaluate(2, sigma) for sigma in range(5)] == first
        with working_precision(PrecisionContext(digits=16)):
            family.evaluate(2, 0)
        assert family._values.cache_info().currsize == 3

    def test_bad_offsets(self, racah_params):
        with pytest.raises(ParameterError):
            racah_eval(racah_params, 1, 5)
        with pytest.raises(DegreeError):
            racah_eval_normalized(racah_params, 6, 0)


class TestWeightAndNorm:
    def test_probability_normalization(self, racah_params):
        total = mp.fsum(racah_weight(racah_params, s) * racah_delta_mu(racah_params, s) for s in range(5))
        assert abs(total - 1) < 1e-25

    def test_weight_positive(self, racah_params):
        assert all(racah_weight(racah_params, s) > 0 for s in range(5))

    def test_recursion_matches_closed_form_shape(self, racah_params):
        recursion = racah_weight(racah_params, 3) / racah_weight(racah_params, 0)
        closed = racah_weight_closed_form(racah_params, 3) / racah_weight_closed_form(racah_params, 0)
        assert relative_error(recursion, closed) < 1e-20

    def test_masses_computed_once_per_precision(self, racah_params):
        _masses_at.cache_clear()
        for sigma in range(5):
            racah_weight(racah_params, sigma)
        info = _masses_at.cache_info()
        assert (info.misses, info.hits) == (1, 4)

        with working_precision(PrecisionContext(digits=16)):
            racah_weight(racah_params, 0)
        assert _masses_at.cache_info().misses == 2

    def test_norms(self, racah_params):
        assert racah_norm_sq(racah_params, 0) == 1
        assert all(racah_norm_sq(racah_params, n) > 0 for n in range(5))
        with pytest.raises(DegreeError):
            racah_norm_sq(racah_params, 5)

    def test_first_norm_by_summation(self, racah_params):
        direct = mp.fsum(
            racah_eval(racah_params, 1, s) ** 2 * racah_weight(racah_params, s) * racah_delta_mu(racah_params, s)
            for s in range(5)
        )
        assert relative_error(direct, racah_norm_sq(racah_params, 1)) < 1e-24


class TestOrthogonality:
    def test_gram_is_diagonal(self, racah_params):
        report = racah_orthogonality_report(racah_params, 4)
        assert report.passed(1e-20)
        assert report.flags == [NORMALIZATION_FLAG, BOUNDARY_FLAG]

    def test_degree_zero_gram(self, racah_params):
        report = racah_orthogonality_report(racah_params, 0)
        assert abs(report.gram[0][0] - 1) < 1e-25

    def test_scaled_family_keeps_orthogonality(self, racah_params):
        family = ScaledRacahFamily(racah_params, scale=2, shift="0.5")
        assert orthogonality_report(family, 4).passed(1e-20)


class TestRecurrence:
    def test_gamma_zero(self, racah_params):
        assert racah_ttrr_coeffs(racah_params, 0)[1] == 0

    def test_beta0_is_moment_quotient(self, racah_params):
        beta0, _ = racah_ttrr_coeffs(racah_params, 0)
        assert relative_error(moment_quotient(RacahFamily(racah_params)), beta0) < 1e-24

    def test_residuals(self, racah_params):
        report = ttrr_report(RacahFamily(racah_params), 3)
        assert report.max_residual < 1e-20

    def test_q_number_form_matches_normalized_form(self, racah_params):
        lattice = racah_lattice(racah_params)
        slope = (racah_mu(racah_params, 1) - racah_mu(racah_params, 0)) / (
            racah_x_hat(racah_params, 1) - racah_x_hat(racah_params, 0)
        )
        for n in range(4):
            beta, gamma = racah_ttrr_coeffs(racah_params, n)
            beta_hat, gamma_hat = racah_ttrr_normalized(racah_params, n)
            assert relative_error(beta, slope * beta_hat + lattice.c3) < 1e-20
            assert relative_error(gamma, slope ** 2 * gamma_hat) < 1e-20

    def test_boundary_degree_is_logged(self, racah_params, caplog):
        caplog.set_level(logging.DEBUG, logger="qlimits.families.racah")
        racah_ttrr_coeffs(racah_params, 4)
        assert "boundary degree" in caplog.text
        with pytest.raises(DegreeError):
            racah_ttrr_coeffs(racah_params, 5)


class TestTransformedRegime:
    def setup_method(self):
        self.kind = LimitKind.TO_BIG_JACOBI

    def test_transformed_parameters(self, bigjacobi_params):
        transform = LimitTransform(kind=self.kind, target=bigjacobi_params, control=10)
        params = transform.racah_params()
        assert params.regime is RacahRegime.BIG_JACOBI_TRANSFORMED
        assert params.q_2a < 0
        assert params.N == 11

    def test_degree_zero(self, bigjacobi_params):
        assert racah_eval_transformed(bigjacobi_params, 10, 0, 3) == 1

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_product_formula_matches_scaled_family(self, bigjacobi_params, n):
        transform = LimitTransform(kind=self.kind, target=bigjacobi_params, control=10)
        source = transform.source_family()
        c_n = normalization_Cn(self.kind, bigjacobi_params, 10, n)
        for sigma in (0, 3, 7, 10):
            value = c_n * racah_eval_transformed(bigjacobi_params, 10, n, sigma)
            assert relative_error(value, source.evaluate(n, sigma)) < 1e-20

    def test_scaled_family_orthogonal(self, bigjacobi_params):
        source = LimitTransform(kind=self.kind, target=bigjacobi_params, control=10).source_family()
        assert orthogonality_report(source, 3).passed(1e-15)

    def test_large_lattice_matches_big_jacobi(self, bigjacobi_params):
        with working_precision(PrecisionContext(digits=64)):
            q, n, sigma, N = bigjacobi_params.base.q, 2, 3, 40
            a_t, c_t = bigjacobi_params.a_t, bigjacobi_params.c_t
            mu_t = mp.power(q, N + 1) * a_t * mp.power(q, -sigma) + c_t * mp.power(q, sigma + 1)
            c_n = normalization_Cn(self.kind, bigjacobi_params, N, n)
            value = c_n * racah_eval_transformed(bigjacobi_params, N, n, sigma)
            assert abs(value - bigjacobi_eval(bigjacobi_params, n, mu_t)) < 1e-6

    def test_standard_only_quantities_refused(self, bigjacobi_params):
        params = LimitTransform(kind=self.kind, target=bigjacobi_params, control=10).racah_params()
        with pytest.raises(ParameterError):
            racah_mu(params, 0)
        with pytest.raises(ParameterError):
            RacahFamily(params)
