"""
Permutation Kernels
One-line permutations and the inversion statistics inv, winv and cwinv.

Values are 1-based everywhere in the public interface: a Permutation of
size n is a word over {1, ..., n}. Composition follows the functional
convention (p * q)(i) = p(q(i)), so right multiplication by the long cycle
c_n = (1, 2, ..., n) shifts the word left and left multiplication by a
transposition exchanges two values in place.
"""

import math
import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from typing import Iterable, Tuple

from src.utils.errors import DomainError, ParseError

BITS_PER_LETTER = 4
MAX_PACKED_N = 64 // BITS_PER_LETTER

_TOKEN_SPLIT = re.compile(r"[,\s]+")


@dataclass(frozen=True)
class Permutation:
    """
    A permutation of [n] in one-line notation.

    word[i - 1] is the image of i. Instances are immutable and hashable,
    so they can be shared freely between threads and used as dict keys.
    """

    word: Tuple[int, ...]

    def __post_init__(self):
        word = tuple(int(v) for v in self.word)
        object.__setattr__(self, "word", word)
        n = len(word)
        if n < 1:
            raise DomainError("a permutation needs at least one letter")
        if sorted(word) != list(range(1, n + 1)):
            raise DomainError(f"{list(word)} is not a permutation of 1..{n}")

    @property
    def n(self) -> int:
        return len(self.word)

    def __len__(self) -> int:
        return len(self.word)

    def __iter__(self):
        return iter(self.word)

    def __call__(self, i: int) -> int:
        """pi(i) with a 1-based argument."""
        return self.word[i - 1]

    def __str__(self) -> str:
        return ",".join(str(v) for v in self.word)

    def compact(self) -> str:
        """Comma-free digit word; only defined for n <= 9."""
        if self.n > 9:
            raise DomainError("compact notation needs n <= 9")
        return "".join(str(v) for v in self.word)

    # Constructors

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def longest(cls, n: int) -> "Permutation":
        """w0 = [n, n-1, ..., 1]."""
        return cls(tuple(range(n, 0, -1)))

    @classmethod
    def long_cycle(cls, n: int) -> "Permutation":
        """c_n = (1, 2, ..., n) in one-line notation, i.e. [2, 3, ..., n, 1]."""
        return cls(tuple(range(2, n + 1)) + (1,))

    @classmethod
    def parse(cls, text: str) -> "Permutation":
        """
        Parse a one-line word.

        Accepts comma or whitespace separated integers, optionally wrapped in
        square brackets ("3,5,6,1,2,4", "[3 5 6 1 2 4]"), and the comma-free
        digit form ("356124") for n <= 9.
        """
        body = text.strip()
        if body.startswith("[") and body.endswith("]"):
            body = body[1:-1].strip()
        if not body:
            raise ParseError("empty permutation word", token=text)
        if body.isdigit() and len(body) > 1 and "," not in body:
            tokens = list(body)
        else:
            tokens = [t for t in _TOKEN_SPLIT.split(body) if t]
        values = []
        for token in tokens:
            if not token.isdigit():
                raise ParseError(f"bad token {token!r} in permutation word", token=token)
            values.append(int(token))
        try:
            return cls(tuple(values))
        except DomainError as exc:
            raise ParseError(str(exc), token=text) from None

    # Packed form: letter i (0-based position) stored as value-1 in bits 4i..4i+3.

    def pack(self) -> int:
        if self.n > MAX_PACKED_N:
            raise DomainError(f"packed words hold at most {MAX_PACKED_N} letters, got {self.n}")
        code = 0
        for position, value in enumerate(self.word):
            code |= (value - 1) << (BITS_PER_LETTER * position)
        return code


@dataclass(frozen=True)
class StatTriple:
    """inv, winv and cwinv of one permutation."""

    inv: int
    winv: int
    cwinv: int


def _check_same_size(p: Permutation, q: Permutation) -> None:
    if p.n != q.n:
        raise DomainError(f"size mismatch: {p.n} != {q.n}")


# Inversion counting


def _merge_count(values: list, temp: list, left: int, right: int) -> int:
    """Sort values[left:right] in place and return the inversions inside it."""
    if right - left < 2:
        return 0
    mid = (left + right) // 2
    count = _merge_count(values, temp, left, mid) + _merge_count(values, temp, mid, right)
    i, j, k = left, mid, left
    while i < mid and j < right:
        if values[i] <= values[j]:
            temp[k] = values[i]
            i += 1
        else:
            temp[k] = values[j]
            j += 1
            # every remaining left element is larger than values[j - 1]
            count += mid - i
        k += 1
    while i < mid:
        temp[k] = values[i]
        i += 1
        k += 1
    while j < right:
        temp[k] = values[j]
        j += 1
        k += 1
    values[left:right] = temp[left:right]
    return count


def inv(p: Permutation) -> int:
    """Number of pairs i < j with p(i) > p(j), by merge sort in O(n log n)."""
    values = list(p.word)
    return _merge_count(values, [0] * len(values), 0, len(values))


def inv_naive(p: Permutation) -> int:
    """Direct O(n^2) pair count; the oracle for inv."""
    w = p.word
    return sum(1 for i in range(len(w)) for j in range(i + 1, len(w)) if w[i] > w[j])


def winv(p: Permutation) -> int:
    """Weighted inversion number via the closed form sum(i^2) - sum(i * p(i))."""
    return sum(i * i - i * v for i, v in enumerate(p.word, start=1))


def winv_naive(p: Permutation) -> int:
    """Sum of p(i) - p(j) over inversion pairs."""
    w = p.word
    return sum(
        w[i] - w[j] for i in range(len(w)) for j in range(i + 1, len(w)) if w[i] > w[j]
    )


def cwinv(p: Permutation) -> int:
    """Cyclic weighted inversion number n * inv - 2 * winv."""
    return p.n * inv(p) - 2 * winv(p)


def stat_triple(p: Permutation) -> StatTriple:
    count = inv(p)
    weighted = winv(p)
    return StatTriple(inv=count, winv=weighted, cwinv=p.n * count - 2 * weighted)


# Group operations


def rotate(p: Permutation, j: int) -> Permutation:
    """p * c_n^j: the word shifted left by j positions."""
    if not 0 <= j < p.n:
        raise DomainError(f"shift {j} out of range 0..{p.n - 1}")
    return Permutation(p.word[j:] + p.word[:j])


def inv_rotation_delta(p: Permutation) -> int:
    """inv(rotate(p, 1)) - inv(p) = n + 1 - 2 p(1)."""
    return p.n + 1 - 2 * p.word[0]


def left_multiply_transposition(p: Permutation, a: int, b: int) -> Permutation:
    """(a b) * p: exchange the letters a and b in the word."""
    if not (1 <= a <= p.n and 1 <= b <= p.n) or a == b:
        raise DomainError(f"({a},{b}) is not a transposition of 1..{p.n}")
    swap = {a: b, b: a}
    return Permutation(tuple(swap.get(v, v) for v in p.word))


def left_multiply_adjacent(p: Permutation, i: int) -> Permutation:
    """s_i * p: exchange the letters i and i + 1."""
    if not 1 <= i < p.n:
        raise DomainError(f"adjacent transposition s_{i} undefined for n = {p.n}")
    return left_multiply_transposition(p, i, i + 1)


def compose(p: Permutation, q: Permutation) -> Permutation:
    """(p * q)(i) = p(q(i))."""
    _check_same_size(p, q)
    return Permutation(tuple(p.word[v - 1] for v in q.word))


def inverse(p: Permutation) -> Permutation:
    result = [0] * p.n
    for position, value in enumerate(p.word, start=1):
        result[value - 1] = position
    return Permutation(tuple(result))


@lru_cache(maxsize=None)
def sum_of_squares(n: int) -> int:
    return n * (n + 1) * (2 * n + 1) // 6


def cos_angle(p: Permutation) -> float:
    """
    Cosine of the angle between (p(1), ..., p(n)) and (1, ..., n).

    Equals 1 - winv(p) / sum(i^2). Undefined (DomainError) for n = 1, where
    both vectors are the single point (1) and we do not assign an angle.
    """
    if p.n < 2:
        raise DomainError("cos_angle needs n >= 2")
    dot = sum(i * v for i, v in enumerate(p.word, start=1))
    # both vectors are permutations of 1..n, so they share the norm sqrt(sum i^2)
    return dot / sum_of_squares(p.n)


def binomial(n: int, k: int) -> int:
    """C(n, k), zero outside 0 <= k <= n."""
    if n < 0 or k < 0 or k > n:
        return 0
    return math.comb(n, k)


def permutations_of(n: int) -> Iterable[Permutation]:
    """All of S_n in lexicographic order."""
    for word in permutations(range(1, n + 1)):
        yield Permutation(word)
