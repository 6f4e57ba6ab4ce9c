import math
from fractions import Fraction

import pandas as pd
import pytest

from conftest import PI0_12
from src.tools.cosets import is_heavy_tailed, minv
from src.tools.extremal import (
    BOUNDS_COLUMNS,
    bounds,
    build_pi0,
    build_pi0_greedy,
    diameter_upper_bound_parity,
    inv_pi0,
    kt_discrepancies,
    kt_sequence,
    kt_sequence_ceiling,
    lower_bound,
    lower_bound_parity,
    minv_w0,
    prefix_curve,
)
from src.tools.permutation import Permutation, binomial, inv
from src.utils.errors import DomainError
from src.utils.exporters import bounds_frame


class TestKtSequence:
    def test_examples(self):
        assert kt_sequence(12).values == (4, 5, 6, 6, 6, 6)
        assert kt_sequence(5).values == (3, 3)
        assert kt_sequence(2).values == (1,)

    def test_positions(self):
        assert kt_sequence(12).positions() == [5, 7, 9, 10, 11, 12]

    def test_rejects_small_n(self):
        with pytest.raises(DomainError):
            kt_sequence(1)

    @pytest.mark.parametrize("n", range(2, 201))
    def test_minimal_and_monotone(self, n):
        kt = kt_sequence(n)
        assert kt.m == n // 2
        assert list(kt.values) == sorted(kt.values)
        assert kt.values[-1] <= n - kt.m
        for t, k in enumerate(kt.values, start=1):
            target = t * (n - t)
            if n % 2 == 0:
                assert k * k >= target > (k - 1) * (k - 1)
            else:
                assert k * k - k >= target > (k - 1) * (k - 1) - (k - 1)

    def test_ceiling_forms_agree(self):
        assert kt_sequence_ceiling(12) == kt_sequence(12).values
        for n in range(2, 201):
            assert kt_discrepancies(n) == []


class TestPi0:
    def test_golden_twelve(self):
        assert build_pi0(12).word == PI0_12
        assert build_pi0_greedy(12).word == PI0_12

    def test_small_examples(self):
        assert build_pi0(5).word == (3, 2, 1, 5, 4)
        assert build_pi0(4).word == (2, 1, 4, 3)
        assert build_pi0(2).word == (1, 2)
        assert build_pi0_greedy(5).word == (3, 2, 1, 5, 4)

    @pytest.mark.parametrize("n", range(2, 65))
    def test_constructions_agree(self, n):
        pi0 = build_pi0(n)
        assert pi0 == build_pi0_greedy(n)
        assert is_heavy_tailed(pi0)
        assert inv_pi0(n) == inv(pi0) == minv(pi0)

    def test_inv_pi0_examples(self):
        assert inv_pi0(5) == 4
        assert inv_pi0(12) == 33
        assert inv_pi0(2) == 0

    @pytest.mark.parametrize("builder", [build_pi0, build_pi0_greedy, inv_pi0])
    def test_rejects_small_n(self, builder):
        with pytest.raises(DomainError):
            builder(1)


class TestBounds:
    def test_five(self):
        report = bounds(5)
        assert report.sort_upper == 6
        assert report.diam_upper == 7
        assert report.minv_w0 == 4
        assert report.inv_pi0 == 4

    def test_twelve(self):
        report = bounds(12)
        assert report.sort_upper == Fraction(253, 6)
        assert report.sort_upper_floor == 42
        assert report.lower == pytest.approx(25.7256, abs=1e-3)

    def test_one_is_degenerate(self):
        report = bounds(1)
        assert (report.sort_upper, report.diam_upper, report.inv_pi0, report.minv_w0) == (0, 0, 0, 0)

    def test_rejects_zero(self):
        with pytest.raises(DomainError):
            bounds(0)

    @pytest.mark.parametrize("n", range(2, 201))
    def test_lower_bounds_below_inv_pi0(self, n):
        assert lower_bound(n) <= inv_pi0(n)
        assert lower_bound_parity(n) <= inv_pi0(n)
        assert bounds(n).chain_holds()

    @pytest.mark.parametrize("n", range(2, 65))
    def test_minv_of_longest(self, n):
        assert minv(Permutation.longest(n)) == minv_w0(n)
        assert minv_w0(n) == binomial(math.ceil(n / 2), 2) + binomial(n // 2, 2)

    @pytest.mark.parametrize("n", range(1, 40))
    def test_prefix_curve_minimum(self, n):
        assert min(prefix_curve(n)) == diameter_upper_bound_parity(n)
        assert diameter_upper_bound_parity(n) <= bounds(n).diam_upper

    def test_json_rendering(self):
        data = bounds(4).to_dict()
        assert data["sort_upper"] == {"num": 7, "den": 2, "decimal": 3.5}
        assert data["diam_upper"]["num"] == 33
        assert data["sort_upper_floor"] == 3

    def test_golden_rows(self, golden_dir):
        expected = pd.read_csv(golden_dir / "bounds_n4_n5.csv")
        actual = bounds_frame([bounds(4), bounds(5)])
        assert list(actual.columns) == BOUNDS_COLUMNS
        pd.testing.assert_frame_equal(actual, expected, check_dtype=False)
