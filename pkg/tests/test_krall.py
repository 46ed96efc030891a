import pytest
from mpmath import mp

from qlimits.errors import CoincidentPoints, SingularModification
from qlimits.families import BigJacobiFamily, RacahFamily, orthogonality_report, ttrr_report
from qlimits.families.bigjacobi import ENDPOINT_FLAG
from qlimits.krall import (
    CD_FLAG,
    KrallFamily,
    christoffel_darboux,
    kappa,
    kernel,
    kernel_reproducing_residual,
    kernel_sum,
    krall_delta,
    krall_endpoint_values,
    krall_eval,
    krall_norm_sq,
    krall_orthogonality_report,
    krall_ttrr_coeffs,
)
from qlimits.schemas import MassPoints
from qlimits.utils import relative_error


class TestKernels:
    def test_degree_zero_kernel(self, racah_params):
        family = RacahFamily(racah_params)
        assert kernel_sum(family, 0, 1, 3) == 1
        assert kernel_sum(family, -1, 1, 3) == 0

    def test_diagonal_positive(self, racah_params):
        family = RacahFamily(racah_params)
        assert all(kernel_sum(family, 2, s, s) > 0 for s in range(5))

    def test_christoffel_darboux_racah(self, racah_params):
        value = kernel(racah_params, 3, 1, 3)
        assert value.cd_residual < 1e-20
        assert relative_error(value.cd_value, value.value) < 1e-20

    def test_christoffel_darboux_bigjacobi(self, bigjacobi_params):
        family = BigJacobiFamily(bigjacobi_params)
        points = [point for point, _ in family.support()[:3]] + [mp.mpf("0.1"), mp.mpf("0.16")]
        for n in range(4):
            for i, s1 in enumerate(points):
                for s2 in points[i + 1:]:
                    assert kernel(family, n, s1, s2).cd_residual < 1e-20

    def test_equal_points_skip_cross_check(self, racah_params):
        value = kernel(racah_params, 2, 2, 2)
        assert value.cd_value is None
        with pytest.raises(CoincidentPoints):
            christoffel_darboux(racah_params, 2, 2, 2)

    @pytest.mark.parametrize("n", [0, 1, 2, 3])
    def test_reproducing_property(self, racah_params, n):
        assert kernel_reproducing_residual(racah_params, n, 2) < 1e-20

    def test_reproducing_property_bigjacobi(self, bigjacobi_params):
        family = BigJacobiFamily(bigjacobi_params)
        assert kernel_reproducing_residual(family, 3, mp.mpf("0.1")) < 1e-20


class TestEndpointValues:
    def test_no_masses_give_classical_values(self, racah_params):
        family = RacahFamily(racah_params)
        for n in range(5):
            left, right = krall_endpoint_values(family, MassPoints(), n)
            assert left == family.evaluate(n, 0)
            assert right == family.evaluate(n, 4)

    def test_single_mass(self, racah_params):
        family = RacahFamily(racah_params)
        mass = MassPoints(A="0.1", B="0")
        for n in range(1, 5):
            left, _ = krall_endpoint_values(family, mass, n)
            expected = family.evaluate(n, 0) / (1 + mp.mpf("0.1") * kernel_sum(family, n - 1, 0, 0))
            assert relative_error(left, expected) < 1e-24

    def test_kappa_at_minus_one(self, racah_params, masses):
        assert kappa(racah_params, masses, -1) == 1

    def test_singular_modification(self, racah_params):
        # 1 + A K_0(l, l) vanishes for A = -1
        with pytest.raises(SingularModification):
            krall_eval(racah_params, MassPoints(A="-1", B="0"), 1, 2)


class TestModifiedPolynomials:
    def test_degree_zero(self, racah_params, masses):
        assert krall_eval(racah_params, masses, 0, 3) == 1

    def test_reduction(self, racah_params):
        family = RacahFamily(racah_params)
        bare = MassPoints()
        for n in range(5):
            assert krall_norm_sq(family, bare, n) == family.norm_sq(n)
            one, beta, gamma = krall_ttrr_coeffs(family, bare, n)
            assert (one, beta, gamma) == (1, *family.ttrr(n))
            for s in range(5):
                assert krall_eval(family, bare, n, s) == family.evaluate(n, s)

    def test_reduction_of_gram(self, racah_params):
        classical = orthogonality_report(RacahFamily(racah_params), 4)
        modified = krall_orthogonality_report(racah_params, MassPoints(), 4)
        assert modified.gram == classical.gram

    def test_delta_at_degree_zero(self, racah_params, masses):
        assert abs(krall_delta(racah_params, masses, 0) - mp.mpf("0.5")) < 1e-25

    def test_norms_positive(self, racah_params, masses):
        assert all(krall_norm_sq(racah_params, masses, n) > 0 for n in range(5))

    def test_racah_gram(self, racah_params, masses):
        report = krall_orthogonality_report(racah_params, masses, 4)
        assert report.passed(1e-20)
        assert CD_FLAG in report.flags

    def test_bigjacobi_gram(self, bigjacobi_params, masses):
        report = krall_orthogonality_report(bigjacobi_params, masses, 3)
        assert report.passed(1e-20)
        assert ENDPOINT_FLAG in report.flags

    def test_symmetric_gram(self, racah_params, masses):
        gram = krall_orthogonality_report(racah_params, masses, 3).gram
        assert all(gram[n][m] == gram[m][n] for n in range(4) for m in range(4))

    def test_racah_recurrence(self, racah_params, masses):
        family = KrallFamily(racah_params, masses)
        assert ttrr_report(family, 2).max_residual < 1e-20
        assert krall_ttrr_coeffs(racah_params, masses, 0)[2] == 0

    def test_bigjacobi_recurrence(self, bigjacobi_params, masses):
        family = KrallFamily(bigjacobi_params, masses)
        assert ttrr_report(family, 2).max_residual < 1e-20

    def test_family_support_carries_masses(self, racah_params, masses):
        classical = RacahFamily(racah_params).support()
        modified = KrallFamily(racah_params, masses).support()
        assert modified[0][1] == classical[0][1] + masses.A
        assert modified[-1][1] == classical[-1][1] + masses.B
        assert modified[2] == classical[2]
