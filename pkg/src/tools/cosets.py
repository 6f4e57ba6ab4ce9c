"""
Coset Model
Left cosets of the rotation subgroup Z_n = <c_n>, their dense ranking, the
minv statistic and the exact distance formula between n-cycles.

A coset p Z_n is the set of rotations of the word p. Its canonical
representative is the rotation that starts with the letter 1, and its
CosetIndex is the lexicographic Lehmer rank of the remaining n - 1 letters,
so the identity coset has index 0.
"""

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from typing import Iterator, List, NewType, Tuple

from src.tools.permutation import (
    Permutation,
    binomial,
    compose,
    cwinv,
    inv,
    inverse,
    left_multiply_adjacent,
    rotate,
)
from src.utils.errors import DomainError, ParseError

CosetIndex = NewType("CosetIndex", int)

_CYCLE_PATTERN = re.compile(r"^\(\s*([\d,\s]*)\s*\)$")


@lru_cache(maxsize=None)
def factorials(n: int) -> Tuple[int, ...]:
    """(0!, 1!, ..., n!), built once per n and shared read-only."""
    table = [1]
    for k in range(1, n + 1):
        table.append(table[-1] * k)
    return tuple(table)


def coset_count(n: int) -> int:
    """(n - 1)!, the number of cosets (and of n-cycles)."""
    return factorials(max(n - 1, 0))[max(n - 1, 0)]


@dataclass(frozen=True)
class CosetRep:
    """Canonical representative of a coset: a word whose first letter is 1."""

    word: Permutation

    def __post_init__(self):
        if self.word.word[0] != 1:
            raise DomainError(f"{self.word} is not canonical (first letter must be 1)")

    @property
    def n(self) -> int:
        return self.word.n

    def __str__(self) -> str:
        return str(self.word)


@dataclass(frozen=True)
class Cycle:
    """
    An n-cycle (a1, ..., an) on [n], stored in the rotation that starts with 1.

    Its associated coset is [a1, ..., an] Z_n.
    """

    labels: Tuple[int, ...]

    def __post_init__(self):
        labels = tuple(int(v) for v in self.labels)
        n = len(labels)
        if n < 1 or sorted(labels) != list(range(1, n + 1)):
            raise DomainError(f"{labels} is not a full cycle on 1..{n}")
        start = labels.index(1)
        object.__setattr__(self, "labels", labels[start:] + labels[:start])

    @property
    def n(self) -> int:
        return len(self.labels)

    def __str__(self) -> str:
        return "(" + ",".join(str(v) for v in self.labels) + ")"

    def compact(self) -> str:
        return "(" + "".join(str(v) for v in self.labels) + ")"

    @classmethod
    def canonical(cls, n: int) -> "Cycle":
        """c_n = (1, 2, ..., n)."""
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def parse(cls, text: str) -> "Cycle":
        """Parse '(a1,a2,...,an)' or the comma-free '(a1a2...an)' for n <= 9."""
        match = _CYCLE_PATTERN.match(text.strip())
        if not match:
            raise ParseError(f"bad cycle {text!r}: expected '(a1,...,an)'", token=text)
        body = match.group(1).strip()
        if not body:
            raise ParseError("empty cycle", token=text)
        if "," in body or " " in body:
            tokens = [t for t in re.split(r"[,\s]+", body) if t]
        else:
            tokens = list(body)
        for token in tokens:
            if not token.isdigit():
                raise ParseError(f"bad token {token!r} in cycle", token=token)
        try:
            return cls(tuple(int(t) for t in tokens))
        except DomainError as exc:
            raise ParseError(str(exc), token=text) from None

    @classmethod
    def from_coset(cls, rep: CosetRep) -> "Cycle":
        return cls(rep.word.word)

    def bar(self) -> Permutation:
        """The one-line word [a1, ..., an]."""
        return Permutation(self.labels)

    def coset(self) -> CosetRep:
        return CosetRep(self.bar())

    def as_permutation(self) -> Permutation:
        """The cycle as an element of S_n: a_i maps to a_(i+1)."""
        image = [0] * self.n
        for position, label in enumerate(self.labels):
            image[label - 1] = self.labels[(position + 1) % self.n]
        return Permutation(tuple(image))


def conjugate_transposition(gamma: Cycle, a: int, b: int) -> Cycle:
    """(a b) gamma (a b): the cycle with the labels a and b exchanged."""
    if not (1 <= a <= gamma.n and 1 <= b <= gamma.n) or a == b:
        raise DomainError(f"({a},{b}) is not a transposition of 1..{gamma.n}")
    swap = {a: b, b: a}
    return Cycle(tuple(swap.get(v, v) for v in gamma.labels))


def conjugate_adjacent(gamma: Cycle, i: int) -> Cycle:
    """s_i gamma s_i."""
    if not 1 <= i < gamma.n:
        raise DomainError(f"adjacent transposition s_{i} undefined for n = {gamma.n}")
    return conjugate_transposition(gamma, i, i + 1)


# Canonical form and ranking


def canonical_shift(p: Permutation) -> int:
    """The unique j with rotate(p, j) starting with 1."""
    return p.word.index(1)


def canonicalize(p: Permutation) -> CosetRep:
    return CosetRep(rotate(p, canonical_shift(p)))


def rank(rep: CosetRep) -> CosetIndex:
    """Lexicographic Lehmer rank of the suffix rep[2..n] over the alphabet {2..n}."""
    suffix = rep.word.word[1:]
    fact = factorials(len(suffix))
    index = 0
    for i, value in enumerate(suffix):
        smaller_later = sum(1 for later in suffix[i + 1:] if later < value)
        index += smaller_later * fact[len(suffix) - 1 - i]
    return CosetIndex(index)


def unrank(index: int, n: int) -> CosetRep:
    if n < 1:
        raise DomainError(f"size must be positive, got {n}")
    total = coset_count(n)
    if not 0 <= index < total:
        raise DomainError(f"coset index {index} out of range 0..{total - 1}")
    fact = factorials(n - 1)
    available = list(range(2, n + 1))
    word = [1]
    remainder = index
    for i in range(n - 1):
        digit, remainder = divmod(remainder, fact[n - 2 - i])
        word.append(available.pop(digit))
    return CosetRep(Permutation(tuple(word)))


def coset_index(p: Permutation) -> CosetIndex:
    return rank(canonicalize(p))


def all_coset_reps(n: int) -> Iterator[CosetRep]:
    """Every canonical representative, in CosetIndex order."""
    for suffix in permutations(range(2, n + 1)):
        yield CosetRep(Permutation((1,) + suffix))


# The minv statistic


def rotation_inversions(p: Permutation) -> List[int]:
    """
    inv(p c_n^j) for j = 0..n-1.

    One merge-sort count, then each step adds n + 1 - 2 * (letter moved to the back).
    """
    n = p.n
    current = inv(p)
    values = [current]
    for j in range(n - 1):
        current += n + 1 - 2 * p.word[j]
        values.append(current)
    return values


def minv(p: Permutation) -> int:
    """min{inv(p c_n^j) : 0 <= j < n}."""
    return min(rotation_inversions(p))


def minv_naive(p: Permutation) -> int:
    return min(inv(rotate(p, j)) for j in range(p.n))


def minv_shifts(p: Permutation) -> List[int]:
    """Every shift j attaining the minimum, ascending."""
    values = rotation_inversions(p)
    best = min(values)
    return [j for j, value in enumerate(values) if value == best]


def argmin_shift(p: Permutation) -> int:
    """Smallest shift j attaining minv."""
    return minv_shifts(p)[0]


def is_heavy_tailed(p: Permutation) -> bool:
    """True iff every prefix of length k sums to at most k(n + 1)/2."""
    bound = p.n + 1
    running = 0
    for k, value in enumerate(p.word, start=1):
        running += value
        if 2 * running > k * bound:
            return False
    return True


# Double cosets and distance


def _check_sizes(n1: int, n2: int) -> None:
    if n1 != n2:
        raise DomainError(f"size mismatch: {n1} != {n2}")


def double_coset(p1: Permutation, p2: Permutation) -> List[Permutation]:
    """[p1 c_n^j p2^-1 for j = 0..n-1]."""
    _check_sizes(p1.n, p2.n)
    p2_inv = inverse(p2)
    return [compose(rotate(p1, j), p2_inv) for j in range(p1.n)]


def distance_witnesses(g1: Cycle, g2: Cycle) -> List[Tuple[int, Permutation]]:
    """
    Every (j, tau) with tau = bar(g1) c_n^j bar(g2)^-1 of minimal inv.

    Nothing is claimed about how many there are.
    """
    _check_sizes(g1.n, g2.n)
    elements = double_coset(g1.bar(), g2.bar())
    counts = [inv(tau) for tau in elements]
    best = min(counts)
    return [(j, tau) for j, (tau, count) in enumerate(zip(elements, counts)) if count == best]


def distance(g1: Cycle, g2: Cycle) -> int:
    """Graph distance between two n-cycles: min inv over bar(g1) Z_n bar(g2)^-1."""
    _check_sizes(g1.n, g2.n)
    return min(inv(tau) for tau in double_coset(g1.bar(), g2.bar()))


def coset_mean_inv(p: Permutation) -> Fraction:
    """Mean of inv over the n rotations of p: (cwinv(p) + C(n+1, 3)) / n."""
    return Fraction(cwinv(p) + binomial(p.n + 1, 3), p.n)


def coset_mean_inv_naive(p: Permutation) -> Fraction:
    return Fraction(sum(inv(rotate(p, j)) for j in range(p.n)), p.n)


def max_mean_inv(n: int) -> Fraction:
    """(2n - 1)(n - 1)/6, the largest coset mean of inv over S_n."""
    return Fraction((2 * n - 1) * (n - 1), 6)


# Prefix-sum bounds


def prefix_sum_witness(p1: Permutation, p2: Permutation, k: int) -> Permutation:
    """
    The element tau = p1 c_n^j p2^-1 with the smallest j whose first k letters
    sum to at most k(n + 1)/2.
    """
    _check_sizes(p1.n, p2.n)
    n = p1.n
    if not 0 <= k <= n:
        raise DomainError(f"prefix length {k} out of range 0..{n}")
    for tau in double_coset(p1, p2):
        if 2 * sum(tau.word[:k]) <= k * (n + 1):
            return tau
    # averaging over the n elements guarantees a witness
    raise AssertionError(f"no prefix-sum witness for {p1}, {p2}, k={k}")


def prefix_inv_bound(t: Permutation, k: int) -> int:
    """C(n - k, 2) - k + t(1) + ... + t(k), an upper bound on inv(t)."""
    if not 0 <= k <= t.n:
        raise DomainError(f"prefix length {k} out of range 0..{t.n}")
    return binomial(t.n - k, 2) - k + sum(t.word[:k])


# Sorting sequences


def sorting_steps(p: Permutation) -> List[int]:
    """
    A shortest list of adjacent value switches i (apply s_i on the left) that
    carries p Z_n to the identity coset; its length is minv(p).
    """
    steps = []
    current = p
    remaining = minv(current)
    while remaining > 0:
        for i in range(1, current.n):
            candidate = left_multiply_adjacent(current, i)
            if minv(candidate) == remaining - 1:
                steps.append(i)
                current = candidate
                remaining -= 1
                break
        else:
            raise AssertionError(f"no descending neighbor from {current}")
    return steps


def sorting_steps_between(g1: Cycle, g2: Cycle) -> List[int]:
    """A shortest list of conjugations by s_i carrying g1 to g2."""
    _check_sizes(g1.n, g2.n)
    steps = []
    current = g1
    remaining = distance(current, g2)
    while remaining > 0:
        for i in range(1, current.n):
            candidate = conjugate_adjacent(current, i)
            if distance(candidate, g2) == remaining - 1:
                steps.append(i)
                current = candidate
                remaining -= 1
                break
        else:
            raise AssertionError(f"no descending neighbor from {current}")
    return steps
