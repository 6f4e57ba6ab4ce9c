"""
Extremal Permutation and Bounds
Builds the heavy-tailed permutation pi_0 that realizes the best known lower
bound on the sorting time, and evaluates every closed-form bound.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Tuple

from src.tools.cosets import is_heavy_tailed
from src.tools.permutation import Permutation, binomial, rotate
from src.utils.errors import DomainError


@dataclass(frozen=True)
class KtSequence:
    """
    Offsets k_1 <= ... <= k_m (m = floor(n/2)) of the large letters in pi_0.

    The t-th largest letter n + 1 - t sits at position k_t + t.
    """

    n: int
    m: int
    values: Tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.values)

    def positions(self) -> List[int]:
        return [k + t for t, k in enumerate(self.values, start=1)]


def _require_size(n: int, minimum: int = 2) -> None:
    if n < minimum:
        raise DomainError(f"n must be >= {minimum}, got {n}")


def _minimal_k(target: int, odd: bool) -> int:
    """Smallest k >= 0 with k^2 >= target (even n) or k^2 - k >= target (odd n)."""
    k = math.isqrt(target)
    if odd:
        while k * k - k < target:
            k += 1
    else:
        while k * k < target:
            k += 1
    return k


def kt_sequence(n: int) -> KtSequence:
    """Minimal offsets for pi_0, computed with exact integer arithmetic."""
    _require_size(n)
    m = n // 2
    odd = n % 2 == 1
    values = tuple(_minimal_k(t * (n - t), odd) for t in range(1, m + 1))
    return KtSequence(n=n, m=m, values=values)


def kt_sequence_ceiling(n: int) -> Tuple[int, ...]:
    """
    The same offsets from the floating-point ceiling forms:
    ceil(sqrt(t(n - t))) for even n, ceil(sqrt(t(n - t) + 1/4) + 1/2) for odd n.
    """
    _require_size(n)
    m = n // 2
    if n % 2 == 0:
        return tuple(math.ceil(math.sqrt(t * (n - t))) for t in range(1, m + 1))
    return tuple(math.ceil(math.sqrt(t * (n - t) + 0.25) + 0.5) for t in range(1, m + 1))


def kt_discrepancies(n: int) -> List[Tuple[int, int, int]]:
    """(t, exact k_t, ceiling-form k_t) for every t where the two disagree."""
    exact = kt_sequence(n).values
    ceiling = kt_sequence_ceiling(n)
    return [
        (t, a, b) for t, (a, b) in enumerate(zip(exact, ceiling), start=1) if a != b
    ]


def build_pi0(n: int) -> Permutation:
    """
    pi_0 defined positionally: position k_t + t holds n + 1 - t, and the other
    positions hold n - m, n - m - 1, ..., 1 from left to right.
    """
    _require_size(n)
    kt = kt_sequence(n)
    word = [0] * n
    for t, position in enumerate(kt.positions(), start=1):
        word[position - 1] = n + 1 - t
    small = iter(range(n - kt.m, 0, -1))
    for index, value in enumerate(word):
        if value == 0:
            word[index] = next(small)
    return Permutation(tuple(word))


def build_pi0_greedy(n: int) -> Permutation:
    """
    pi_0 by construction: start from w0 c_n^m = [n-m, ..., 1, n, ..., n-m+1]
    and push n, n-1, ... leftwards over the small letters one step at a time
    for as long as the word stays heavy tailed.
    """
    _require_size(n)
    m = n // 2
    word = list(rotate(Permutation.longest(n), m).word)
    small_limit = n - m
    for letter in range(n, n - m, -1):
        position = word.index(letter)
        while position > 0 and word[position - 1] <= small_limit:
            word[position - 1], word[position] = word[position], word[position - 1]
            if not is_heavy_tailed(Permutation(tuple(word))):
                word[position - 1], word[position] = word[position], word[position - 1]
                break
            position -= 1
    return Permutation(tuple(word))


def inv_pi0(n: int) -> int:
    """inv(pi_0) = C(n, 2) - (k_1 + ... + k_m)."""
    _require_size(n)
    return binomial(n, 2) - kt_sequence(n).total


def minv_w0(n: int) -> int:
    """minv(w0 Z_n) = C(ceil(n/2), 2) + C(floor(n/2), 2)."""
    return binomial((n + 1) // 2, 2) + binomial(n // 2, 2)


def lower_bound(n: int) -> float:
    """(1/2 - pi/16) n^2 - (3/2) n."""
    return (0.5 - math.pi / 16) * n * n - 1.5 * n


def lower_bound_parity(n: int) -> float:
    """
    The per-parity form the lower-bound argument ends with:
    C(n,2) - (pi/16) n^2 - n for even n, C(n,2) - (pi/16)(n^2 + 1) - (n - 1) for odd n.
    """
    if n % 2 == 0:
        return binomial(n, 2) - math.pi / 16 * n * n - n
    return binomial(n, 2) - math.pi / 16 * (n * n + 1) - (n - 1)


def sort_upper_bound(n: int) -> Fraction:
    """(2n^2 - 3n + 1)/6."""
    return Fraction(2 * n * n - 3 * n + 1, 6)


def diameter_upper_bound(n: int) -> Fraction:
    """(3n^2 - 4n + 1)/8."""
    return Fraction(3 * n * n - 4 * n + 1, 8)


def diameter_upper_bound_parity(n: int) -> Fraction:
    """(3n^2 - 4n + [n odd])/8."""
    return Fraction(3 * n * n - 4 * n + (n % 2), 8)


def prefix_curve(n: int) -> List[Fraction]:
    """C(n, 2) - k(n - k)/2 for k = 0..n; its minimum is the parity diameter bound."""
    return [binomial(n, 2) - Fraction(k * (n - k), 2) for k in range(n + 1)]


@dataclass(frozen=True)
class BoundsReport:
    """Closed-form bounds and exact extremal values for one n."""

    n: int
    sort_upper: Fraction
    diam_upper: Fraction
    diam_upper_parity: Fraction
    lower: float
    lower_parity: float
    inv_pi0: int
    minv_w0: int

    @property
    def sort_upper_floor(self) -> int:
        return math.floor(self.sort_upper)

    @property
    def diam_upper_floor(self) -> int:
        return math.floor(self.diam_upper)

    def chain_holds(self) -> bool:
        """lower <= inv_pi0 <= sort_upper <= diam_upper."""
        return (
            self.lower <= self.inv_pi0
            and self.inv_pi0 <= self.sort_upper
            and self.sort_upper <= self.diam_upper
        )

    def to_dict(self) -> dict:
        def rational(value: Fraction) -> dict:
            return {
                "num": value.numerator,
                "den": value.denominator,
                "decimal": float(value),
            }

        return {
            "n": self.n,
            "lower": self.lower,
            "lower_parity": self.lower_parity,
            "inv_pi0": self.inv_pi0,
            "minv_w0": self.minv_w0,
            "sort_upper": rational(self.sort_upper),
            "sort_upper_floor": self.sort_upper_floor,
            "diam_upper": rational(self.diam_upper),
            "diam_upper_floor": self.diam_upper_floor,
            "diam_upper_parity": rational(self.diam_upper_parity),
        }

    def to_row(self) -> dict:
        """Flat record with the stable CSV column set."""
        return {
            "n": self.n,
            "lower": self.lower,
            "lower_parity": self.lower_parity,
            "inv_pi0": self.inv_pi0,
            "minv_w0": self.minv_w0,
            "sort_upper_num": self.sort_upper.numerator,
            "sort_upper_den": self.sort_upper.denominator,
            "sort_upper_floor": self.sort_upper_floor,
            "diam_upper_num": self.diam_upper.numerator,
            "diam_upper_den": self.diam_upper.denominator,
            "diam_upper_floor": self.diam_upper_floor,
            "diam_upper_parity_num": self.diam_upper_parity.numerator,
            "diam_upper_parity_den": self.diam_upper_parity.denominator,
        }


BOUNDS_COLUMNS = list(BoundsReport(
    0, Fraction(0), Fraction(0), Fraction(0), 0.0, 0.0, 0, 0
).to_row().keys())


def bounds(n: int) -> BoundsReport:
    """Every closed-form bound for n >= 1; inv_pi0 is 0 for n = 1 by convention."""
    _require_size(n, minimum=1)
    return BoundsReport(
        n=n,
        sort_upper=sort_upper_bound(n),
        diam_upper=diameter_upper_bound(n),
        diam_upper_parity=diameter_upper_bound_parity(n),
        lower=lower_bound(n),
        lower_parity=lower_bound_parity(n),
        inv_pi0=inv_pi0(n) if n >= 2 else 0,
        minv_w0=minv_w0(n),
    )
