import pytest
from mpmath import mp

from qlimits.families import BigJacobiFamily, moment_quotient, recurrence_values, ttrr_report
from qlimits.families.bigjacobi import (
    ENDPOINT_FLAG,
    bigjacobi_eval,
    bigjacobi_norm_sq,
    bigjacobi_orthogonality_report,
    bigjacobi_support,
    bigjacobi_ttrr_coeffs,
    bigjacobi_weight,
)
from qlimits.qcore import cleared_series, jackson_qintegral, qpochhammer
from qlimits.schemas import BigJacobiParams
from qlimits.utils import relative_error


def _beta0():
    # 1 - (1 - a q)(1 - c q) / (1 - a b q^2) at a=0.4, b=0.3, c=-0.2, q=0.5
    return 1 - mp.mpf("0.8") * mp.mpf("1.1") / mp.mpf("0.97")


class TestEvaluation:
    def test_degree_zero(self, bigjacobi_params):
        assert bigjacobi_eval(bigjacobi_params, 0, mp.mpf("0.13")) == 1

    def test_degree_one_at_origin(self, bigjacobi_params):
        assert relative_error(bigjacobi_eval(bigjacobi_params, 1, 0), -_beta0()) < 1e-25

    def test_degree_one(self, bigjacobi_params):
        z = mp.mpf("0.13")
        assert relative_error(bigjacobi_eval(bigjacobi_params, 1, z), z - _beta0()) < 1e-25

    @pytest.mark.parametrize("z", ["0.2", "-0.1", "0.37", "0.013"])
    def test_series_matches_recurrence(self, bigjacobi_params, z):
        z = mp.mpf(z)
        path = recurrence_values(BigJacobiFamily(bigjacobi_params), 4, z)
        for n in range(5):
            assert relative_error(bigjacobi_eval(bigjacobi_params, n, z), path[n]) < 1e-22

    @pytest.mark.parametrize("z", ["0.2", "-0.025", "0.05"])
    def test_plain_series_matches_cleared_form(self, bigjacobi_params, z):
        z = mp.mpf(z)
        q = bigjacobi_params.base.q
        a, b, c = bigjacobi_params.a_t, bigjacobi_params.b_t, bigjacobi_params.c_t
        for n in range(1, 5):
            numerators = [mp.power(q, -n), a * b * mp.power(q, n + 1), q * c / z]
            cleared = cleared_series(numerators, [q * b, q * c], bigjacobi_params.base, z / a, n)
            leading = qpochhammer(a * b * mp.power(q, n + 1), bigjacobi_params.base, n)
            expected = mp.power(-a, n) * mp.power(q, n * (n + 1) // 2) * cleared / leading
            assert relative_error(bigjacobi_eval(bigjacobi_params, n, z), expected) < 1e-25


class TestWeight:
    def test_probability_normalization(self, bigjacobi_params):
        q = bigjacobi_params.base.q
        total = jackson_qintegral(
            lambda z: bigjacobi_weight(bigjacobi_params, z),
            bigjacobi_params.c_t * q,
            bigjacobi_params.a_t * q,
            bigjacobi_params.base,
        )
        assert abs(total - 1) < 1e-25

    def test_positive_on_both_branches(self, bigjacobi_params):
        q = bigjacobi_params.base.q
        for s in range(20):
            assert bigjacobi_weight(bigjacobi_params, bigjacobi_params.a_t * mp.power(q, s + 1)) > 0
            assert bigjacobi_weight(bigjacobi_params, bigjacobi_params.c_t * mp.power(q, s + 1)) > 0

    def test_support_masses_sum_to_one(self, bigjacobi_params):
        support = bigjacobi_support(bigjacobi_params)
        assert abs(mp.fsum(mass for _, mass in support) - 1) < 1e-25
        assert support[0][0] == bigjacobi_params.c_t * bigjacobi_params.base.q

    def test_support_masses_are_jackson_weights(self, bigjacobi_params):
        q = bigjacobi_params.base.q
        for point, mass in bigjacobi_support(bigjacobi_params)[:5]:
            expected = (1 - q) * abs(point) * bigjacobi_weight(bigjacobi_params, point)
            assert relative_error(mass, expected) < 1e-25


class TestNormsAndRecurrence:
    def test_norms(self, bigjacobi_params):
        assert bigjacobi_norm_sq(bigjacobi_params, 0) == 1
        assert all(bigjacobi_norm_sq(bigjacobi_params, n) > 0 for n in range(5))

    def test_first_norm_by_quadrature(self, bigjacobi_params):
        q = bigjacobi_params.base.q
        direct = jackson_qintegral(
            lambda z: bigjacobi_eval(bigjacobi_params, 1, z) ** 2 * bigjacobi_weight(bigjacobi_params, z),
            bigjacobi_params.c_t * q,
            bigjacobi_params.a_t * q,
            bigjacobi_params.base,
        )
        assert relative_error(direct, bigjacobi_norm_sq(bigjacobi_params, 1)) < 1e-24

    def test_first_coefficients(self, bigjacobi_params):
        beta, gamma = bigjacobi_ttrr_coeffs(bigjacobi_params, 0)
        assert gamma == 0
        assert relative_error(beta, _beta0()) < 1e-25

    def test_beta0_is_moment_quotient(self, bigjacobi_params):
        beta, _ = bigjacobi_ttrr_coeffs(bigjacobi_params, 0)
        assert relative_error(moment_quotient(BigJacobiFamily(bigjacobi_params)), beta) < 1e-24

    def test_residuals(self, bigjacobi_params):
        assert ttrr_report(BigJacobiFamily(bigjacobi_params), 3).max_residual < 1e-22


class TestOrthogonality:
    def test_gram_is_diagonal(self, bigjacobi_params):
        assert bigjacobi_orthogonality_report(bigjacobi_params, 4).passed(1e-22)

    def test_degree_zero_gram(self, bigjacobi_params):
        report = bigjacobi_orthogonality_report(bigjacobi_params, 0)
        assert abs(report.gram[0][0] - 1) < 1e-25


class TestFamily:
    def test_endpoints(self, bigjacobi_params):
        q = bigjacobi_params.base.q
        assert BigJacobiFamily(bigjacobi_params).endpoints() == (-mp.mpf("0.2") * q, mp.mpf("0.4") * q)

    def test_endpoint_note_only_applies_to_masses(self, bigjacobi_params):
        family = BigJacobiFamily(bigjacobi_params)
        assert family.flags() == []
        assert ENDPOINT_FLAG in family.krall_notes

    def test_admissibility(self, base):
        with pytest.raises(ValueError):
            BigJacobiParams(base=base, a_t="0.4", b_t="0.3", c_t="0.2")
        with pytest.raises(ValueError):
            BigJacobiParams(base=base, a_t="2.5", b_t="0.3", c_t="-0.2")
