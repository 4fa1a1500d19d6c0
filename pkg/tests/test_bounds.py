"""Height-gap lower-bound curves and the lcm growth estimate."""

import math

import pytest

from padicdyn import (
    PreconditionError,
    bound_table,
    bounds_to_csv,
    find_crossover,
    lcm_list,
    lcm_range,
    pottmeyer_bound,
    verify_lcm_exponential_bound,
)


class TestLcmHelpers:
    def test_small_lists(self):
        assert lcm_list([1, 2, 3]) == (6, 3)
        assert lcm_list([4]) == (4, 4)
        assert lcm_list([2, 3, 4, 5, 6, 7, 8, 9, 10]) == (2520, 10)

    def test_range_form(self):
        assert lcm_range(1) == 1
        assert lcm_range(10) == 2520

    def test_rejects_bad_input(self):
        with pytest.raises(PreconditionError):
            lcm_list([])
        with pytest.raises(PreconditionError):
            lcm_list([3, 0])
        with pytest.raises(PreconditionError):
            lcm_list([2, -4])


class TestBoundTable:
    def test_lcm_column(self):
        rows = bound_table(10)
        assert [r.lcm_e for r in rows] == [1, 2, 6, 12, 60, 60, 420, 840, 2520, 2520]

    def test_known_curve_values(self):
        rows = {r.e: r for r in bound_table(8)}
        # factorial-type curve: C * exp(2e) / e**(2e+1)
        assert math.isclose(rows[1].pottmeyer, math.exp(2.0), rel_tol=1e-12)
        assert math.isclose(rows[5].pottmeyer, math.exp(10) / 5**11, rel_tol=1e-12)
        # lcm curve: C / lcm(1..e)**2
        assert math.isclose(rows[5].new_bound, 1.0 / 3600.0, rel_tol=1e-12)
        assert math.isclose(rows[8].nine_exp, 9.0**-8, rel_tol=1e-12)

    def test_lcm_bound_dominates_ninth_powers(self):
        for row in bound_table(200):
            assert row.new_bound >= row.nine_exp

    def test_scaling_constant(self):
        plain = bound_table(6)
        scaled = bound_table(6, c=10.0)
        for a, b in zip(plain, scaled):
            assert math.isclose(b.pottmeyer, 10 * a.pottmeyer, rel_tol=1e-12)
            assert math.isclose(b.new_bound, 10 * a.new_bound, rel_tol=1e-12)

    def test_rejects_empty_table(self):
        with pytest.raises(PreconditionError):
            bound_table(0)


class TestCrossover:
    def test_crossover_at_six(self):
        # at e=5 the factorial-type curve is still above the lcm curve
        # (4.51e-4 vs 2.78e-4) and from e=6 on it drops below for good
        assert find_crossover(40) == 6
        rows = {r.e: r for r in bound_table(7)}
        assert rows[5].pottmeyer > rows[5].new_bound
        assert rows[6].pottmeyer < rows[6].new_bound

    def test_crossover_is_constant_independent(self):
        assert find_crossover(40, c=1e-6) == 6
        assert find_crossover(40, c=1e6) == 6

    def test_none_when_out_of_range(self):
        assert find_crossover(4) is None

    def test_pottmeyer_reference_value(self):
        assert math.isclose(pottmeyer_bound(5), 4.511020e-4, rel_tol=1e-6)


class TestLcmExponentialBound:
    def test_holds_to_one_hundred_thousand(self):
        assert verify_lcm_exponential_bound(100_000) is True

    def test_small_prefix_exact(self):
        lcm = 1
        for n in range(1, 400):
            lcm = math.lcm(lcm, n)
            assert lcm <= 3**n

    def test_rejects_bad_limit(self):
        with pytest.raises(PreconditionError):
            verify_lcm_exponential_bound(0)


class TestCsv:
    def test_header_and_rows(self):
        text = bounds_to_csv(bound_table(3))
        lines = text.strip().splitlines()
        assert lines[0] == "e,lcm_e,pottmeyer,new_bound,nine_exp"
        assert len(lines) == 4
        assert lines[1].startswith("1,1,")
        assert lines[3].startswith("3,6,")
