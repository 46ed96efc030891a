import pytest
from mpmath import mp

from qlimits.config import current_precision, working_precision
from qlimits.families import as_family, orthogonality_report, ttrr_report
from qlimits.schemas import (
    GUARD_DIGITS,
    BigJacobiParams,
    DualHahnParams,
    PrecisionContext,
    QBase,
    QHahnParams,
    RacahParams,
)
from qlimits.utils import format_real, relative_error

PARAMETER_SETS = {
    "racah": lambda: RacahParams.from_exponents("0.5", "0.5", "0.2", "0", "5"),
    "bigjacobi": lambda: BigJacobiParams(base=QBase(q="0.5"), a_t="0.4", b_t="0.3", c_t="-0.2"),
    "dualhahn": lambda: DualHahnParams(base=QBase(q="0.5"), gamma="0.4", delta="0.3", N=6),
    "qhahn": lambda: QHahnParams(base=QBase(q="0.5"), alpha_t="0.4", beta_t="0.3", N=6),
}


def _values_at(name, digits):
    with working_precision(PrecisionContext(digits=digits)):
        family = as_family(PARAMETER_SETS[name]())
        points = [point for point, _ in family.support()[:5]]
        return [family.evaluate(n, point) for n in range(4) for point in points]


class TestPrecisionContext:
    def test_tolerances_follow_requested_digits(self):
        ctx = PrecisionContext(digits=16)
        assert ctx.rel_tol == pytest.approx(1e-11)
        assert ctx.trunc_tol == pytest.approx(1e-16)
        assert ctx.working_digits == 16 + GUARD_DIGITS

    def test_guard_digits_are_active(self):
        with working_precision(PrecisionContext(digits=20)) as ctx:
            assert mp.dps == 20 + GUARD_DIGITS
            assert current_precision() is ctx

    def test_output_drops_guard_digits(self):
        with working_precision(PrecisionContext(digits=16)):
            assert format_real(mp.mpf(1) / 3) == "0." + "3" * 16
            assert QBase(q="0.5").model_dump()["q"] == mp.nstr(mp.mpf("0.5"), 16, strip_zeros=False)

    def test_too_few_digits_rejected(self):
        with pytest.raises(ValueError):
            PrecisionContext(digits=10)


@pytest.mark.parametrize("name", list(PARAMETER_SETS))
class TestDefaultDigits:
    def test_values_agree_across_precisions(self, name):
        low, high = _values_at(name, 16), _values_at(name, 30)
        tol = PrecisionContext(digits=16).rel_tol
        assert max(relative_error(a, b) for a, b in zip(low, high)) <= tol

    def test_suites_pass_at_sixteen_digits(self, name):
        with working_precision(PrecisionContext(digits=16)):
            family = as_family(PARAMETER_SETS[name]())
            assert orthogonality_report(family, 3).passed(1e-12)
            assert ttrr_report(family, 3).passed(1e-12)
