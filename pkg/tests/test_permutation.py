import math

import pytest

from conftest import perm, random_words
from src.tools.permutation import (
    Permutation,
    binomial,
    compose,
    cos_angle,
    cwinv,
    inv,
    inv_naive,
    inv_rotation_delta,
    inverse,
    left_multiply_adjacent,
    left_multiply_transposition,
    permutations_of,
    rotate,
    stat_triple,
    sum_of_squares,
    winv,
    winv_naive,
)
from src.utils.errors import DomainError, ParseError


class TestPermutationType:
    def test_rejects_non_bijection(self):
        with pytest.raises(DomainError):
            perm(1, 1, 2)

    def test_rejects_out_of_alphabet(self):
        with pytest.raises(DomainError):
            perm(0, 1, 2)

    def test_size_one_is_valid(self):
        p = perm(1)
        assert p.n == 1
        assert (inv(p), winv(p), cwinv(p)) == (0, 0, 0)

    def test_call_is_one_based(self):
        p = perm(3, 1, 2)
        assert [p(i) for i in (1, 2, 3)] == [3, 1, 2]

    def test_named_constructors(self):
        assert Permutation.identity(4).word == (1, 2, 3, 4)
        assert Permutation.longest(4).word == (4, 3, 2, 1)
        assert Permutation.long_cycle(4).word == (2, 3, 4, 1)

    def test_str_and_compact(self):
        p = perm(3, 5, 6, 1, 2, 4)
        assert str(p) == "3,5,6,1,2,4"
        assert p.compact() == "356124"
        with pytest.raises(DomainError):
            Permutation.identity(10).compact()

    def test_pack_layout(self):
        assert Permutation.identity(3).pack() == 0 | (1 << 4) | (2 << 8)
        assert Permutation(tuple(range(16, 0, -1))).pack() == sum(
            (15 - i) << (4 * i) for i in range(16)
        )

    def test_large_words_are_values_but_not_packable(self):
        w0 = Permutation.longest(64)
        assert w0.n == 64
        assert inv(w0) == 64 * 63 // 2
        with pytest.raises(DomainError, match="at most 16"):
            Permutation.identity(17).pack()


class TestParse:
    @pytest.mark.parametrize("text", ["3,5,6,1,2,4", "[3 5 6 1 2 4]", "356124", " 3, 5, 6, 1, 2, 4 "])
    def test_accepted_forms(self, text):
        assert Permutation.parse(text) == perm(3, 5, 6, 1, 2, 4)

    def test_multi_digit_letters(self):
        assert Permutation.parse("6,5,4,3,12,2,11,1,10,9,8,7").n == 12

    def test_bad_token_is_named(self):
        with pytest.raises(ParseError) as info:
            Permutation.parse("1,2,x")
        assert info.value.token == "x"

    def test_not_a_permutation(self):
        with pytest.raises(ParseError):
            Permutation.parse("1,1,2")

    def test_empty(self):
        with pytest.raises(ParseError):
            Permutation.parse("[]")


class TestInversionStatistics:
    def test_inv_examples(self):
        assert inv(perm(1, 2, 3, 4)) == 0
        assert inv(perm(4, 3, 2, 1)) == 6
        assert inv(perm(3, 5, 6, 1, 2, 4)) == 8

    def test_winv_examples(self):
        assert winv(perm(1, 2, 3, 4)) == 0
        assert winv(perm(4, 3, 2, 1)) == 10
        assert winv(perm(3, 1, 2)) == 3

    def test_cwinv_examples(self):
        assert cwinv(perm(1, 2, 3, 4)) == 0
        assert cwinv(perm(4, 3, 2, 1)) == 4
        # [2,3,1] is a rotation of the identity
        assert cwinv(perm(2, 3, 1)) == 0

    def test_stat_triple(self):
        triple = stat_triple(perm(4, 3, 2, 1))
        assert (triple.inv, triple.winv, triple.cwinv) == (6, 10, 4)

    def test_exhaustive_s6_against_oracles(self):
        for p in permutations_of(6):
            assert inv(p) == inv_naive(p)
            assert winv(p) == winv_naive(p)

    @pytest.mark.parametrize("n", range(7, 13))
    def test_random_against_oracles(self, rng, n):
        for p in random_words(rng, n, 300):
            assert inv(p) == inv_naive(p)
            assert winv(p) == winv_naive(p)

    @pytest.mark.parametrize("n", range(1, 8))
    def test_complements(self, n):
        w0 = Permutation.longest(n)
        for p in permutations_of(n):
            flipped = compose(p, w0)
            assert winv(p) + winv(flipped) == binomial(n + 1, 3)
            assert cwinv(p) + cwinv(flipped) == binomial(n, 3)

    @pytest.mark.parametrize("n", range(1, 7))
    def test_cwinv_rotation_invariance_and_range(self, n):
        for p in permutations_of(n):
            value = cwinv(p)
            assert 0 <= value <= binomial(n, 3)
            assert all(cwinv(rotate(p, j)) == value for j in range(n))
        assert cwinv(Permutation.longest(n)) == binomial(n, 3)

    def test_ranges_of_triple(self):
        for p in permutations_of(5):
            triple = stat_triple(p)
            assert 0 <= triple.inv <= binomial(5, 2)
            assert 0 <= triple.winv <= binomial(6, 3)


class TestRotation:
    def test_rotate_examples(self):
        assert rotate(perm(3, 1, 2), 1) == perm(1, 2, 3)
        assert rotate(perm(3, 1, 2), 0) == perm(3, 1, 2)
        assert rotate(perm(4, 3, 2, 1), 2) == perm(2, 1, 4, 3)

    def test_rotate_out_of_range(self):
        with pytest.raises(DomainError):
            rotate(perm(3, 1, 2), 3)

    def test_rotate_is_right_multiplication_by_long_cycle(self):
        c = Permutation.long_cycle(5)
        for p in permutations_of(5):
            assert rotate(p, 1) == compose(p, c)

    def test_delta_examples(self):
        assert inv_rotation_delta(perm(1, 2, 3)) == 2
        assert inv_rotation_delta(perm(3, 1, 2)) == -2
        assert inv_rotation_delta(perm(2, 1)) == -1

    @pytest.mark.parametrize("n", range(2, 7))
    def test_delta_is_exact(self, n):
        for p in permutations_of(n):
            assert inv(rotate(p, 1)) == inv(p) + inv_rotation_delta(p)


class TestGroupOperations:
    def test_left_multiply_adjacent(self):
        assert left_multiply_adjacent(perm(1, 2, 3), 1) == perm(2, 1, 3)
        assert left_multiply_adjacent(perm(3, 1, 2), 2) == perm(2, 1, 3)
        assert left_multiply_adjacent(perm(4, 3, 2, 1), 3) == perm(3, 4, 2, 1)

    def test_left_multiply_adjacent_out_of_range(self):
        with pytest.raises(DomainError):
            left_multiply_adjacent(perm(1, 2, 3), 3)

    def test_left_multiply_is_composition(self):
        s = left_multiply_transposition(Permutation.identity(4), 2, 4)
        for p in permutations_of(4):
            assert left_multiply_transposition(p, 2, 4) == compose(s, p)

    def test_compose_and_inverse(self):
        assert compose(perm(2, 1, 3), perm(1, 3, 2)) == perm(2, 3, 1)
        assert inverse(perm(3, 1, 2)) == perm(2, 3, 1)
        for p in permutations_of(4):
            assert compose(p, inverse(p)) == Permutation.identity(4)

    def test_compose_size_mismatch(self):
        with pytest.raises(DomainError):
            compose(perm(1, 2), perm(1, 2, 3))


class TestCosAngle:
    def test_identity(self):
        assert cos_angle(Permutation.identity(5)) == pytest.approx(1.0)

    def test_longest_three(self):
        assert cos_angle(Permutation.longest(3)) == pytest.approx(10 / 14)

    def test_matches_weighted_inversions(self):
        for p in permutations_of(6):
            expected = 1 - winv(p) / sum_of_squares(6)
            assert math.isclose(cos_angle(p), expected, rel_tol=1e-12)

    def test_undefined_for_one_letter(self):
        with pytest.raises(DomainError):
            cos_angle(perm(1))


def test_binomial_outside_range_is_zero():
    assert binomial(2, 3) == 0
    assert binomial(5, -1) == 0
    assert binomial(6, 3) == 20
