"""
Verification Suites
Defines every property check run by the `verify` command.

Each suite is a specialist: it owns one family of identities, knows the
sizes at which it can enumerate S_n exhaustively, and falls back to seeded
random sampling above that.
"""

import math
import time
from dataclasses import asdict, dataclass, field
from typing import Callable, Dict, Iterator, List, Optional, Tuple

import numpy as np
import pandas as pd
from tqdm import tqdm

from src.tools.cosets import (
    Cycle,
    all_coset_reps,
    coset_count,
    coset_mean_inv,
    coset_mean_inv_naive,
    distance,
    double_coset,
    is_heavy_tailed,
    max_mean_inv,
    minv,
    minv_naive,
    prefix_inv_bound,
    prefix_sum_witness,
    unrank,
)
from src.tools.extremal import (
    build_pi0,
    build_pi0_greedy,
    inv_pi0,
    kt_sequence,
    lower_bound,
    minv_w0,
    sort_upper_bound,
)
from src.tools.permutation import (
    Permutation,
    binomial,
    compose,
    cwinv,
    inv,
    inv_naive,
    inv_rotation_delta,
    permutations_of,
    rotate,
    winv,
    winv_naive,
)
from src.tools.schreier_engine import (
    bfs,
    bfs_from_table,
    build_neighbor_table,
    is_unimodal,
    minv_distribution,
    verify_conjecture_sort_eq_pi0,
)
from src.tools.statistics_engine import StatisticsEngine
from src.utils.errors import DomainError, UnknownSuiteError

MAX_RECORDED_FAILURES = 10


@dataclass(frozen=True)
class Failure:
    n: int
    case: str
    detail: str


@dataclass
class VerificationReport:
    """Outcome of one suite run; it passed iff no failure was recorded."""

    suite: str
    n_range: Tuple[int, int]
    seed: int
    cases_run: int = 0
    failures: List[Failure] = field(default_factory=list)
    notes: Dict[int, str] = field(default_factory=dict)
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [{"suite": self.suite, "n": f.n, "case": f.case, "detail": f.detail}
             for f in self.failures],
            columns=["suite", "n", "case", "detail"],
        )

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "n_min": self.n_range[0],
            "n_max": self.n_range[1],
            "seed": self.seed,
            "cases_run": self.cases_run,
            "passed": self.passed,
            "failures": [asdict(f) for f in self.failures],
            "notes": {str(n): note for n, note in self.notes.items()},
            "wall_time": round(self.wall_time, 3),
        }


# run_n(n, rng, cases, workers, memory_cap) -> (cases run, failures, note or None)
RunN = Callable[
    [int, np.random.Generator, int, int, Optional[int]],
    Tuple[int, List[Failure], Optional[str]],
]


@dataclass(frozen=True)
class VerificationSuite:
    name: str
    description: str
    default_range: Tuple[int, int]
    default_cases: int
    run_n: RunN
    # size-cap mode of the search the suite runs; None for pure word checks
    search_mode: Optional[str] = None

    def run(self, n_range: Optional[Tuple[int, int]] = None, seed: int = 0,
            cases: Optional[int] = None, workers: int = 1,
            verbose: bool = False, memory_cap: Optional[int] = None) -> VerificationReport:
        """
        Run the suite over an inclusive range of sizes.

        Args:
            n_range: (n_min, n_max); defaults to the suite's own range
            seed: base seed; size n samples from default_rng([seed, n])
            cases: random cases per size (exhaustive sizes ignore it)
            workers: worker count handed to the search engine
            verbose: show a progress bar over the sizes
            memory_cap: byte cap handed to every BFS or neighbor table

        Returns:
            VerificationReport
        """
        n_min, n_max = n_range or self.default_range
        if n_min < 1 or n_min > n_max:
            raise DomainError(f"invalid size range {n_min}..{n_max}")
        cases = self.default_cases if cases is None else cases
        report = VerificationReport(suite=self.name, n_range=(n_min, n_max), seed=seed)
        started = time.perf_counter()
        sizes = range(n_min, n_max + 1)
        if verbose:
            sizes = tqdm(sizes, desc=self.name)
        for n in sizes:
            rng = np.random.default_rng([seed, n])
            run, failures, note = self.run_n(n, rng, cases, workers, memory_cap)
            report.cases_run += run
            report.failures.extend(failures)
            if note is not None:
                report.notes[n] = note
        report.wall_time = time.perf_counter() - started
        return report


# Case generation


def random_permutation(n: int, rng: np.random.Generator) -> Permutation:
    return Permutation(tuple(int(v) + 1 for v in rng.permutation(n)))


def permutation_cases(n: int, rng: np.random.Generator, cases: int,
                      exhaustive_limit: int) -> Iterator[Permutation]:
    """All of S_n in lexicographic order up to exhaustive_limit, else random samples."""
    if n <= exhaustive_limit:
        yield from permutations_of(n)
    else:
        for _ in range(cases):
            yield random_permutation(n, rng)


def _per_permutation(check: Callable[[Permutation], Optional[str]],
                     exhaustive_limit: int) -> RunN:
    """Wrap a single-permutation check into a run_n callable."""

    def run_n(n, rng, cases, workers, memory_cap=None):
        run, failures = 0, []
        for p in permutation_cases(n, rng, cases, exhaustive_limit):
            run += 1
            detail = check(p)
            if detail is not None and len(failures) < MAX_RECORDED_FAILURES:
                failures.append(Failure(n=n, case=str(p), detail=detail))
        return run, failures, None

    return run_n


# Suite factories


def create_winv_identity_suite() -> VerificationSuite:
    """
    WINV IDENTITY - closed forms against pair counts

    Responsibilities:
    - winv closed form sum(i^2) - sum(i p(i)) equals the pair sum
    - merge-sort inv equals the O(n^2) count
    """

    def check(p: Permutation) -> Optional[str]:
        if winv(p) != winv_naive(p):
            return f"winv closed form {winv(p)} != pair sum {winv_naive(p)}"
        if inv(p) != inv_naive(p):
            return f"inv {inv(p)} != naive {inv_naive(p)}"
        return None

    return VerificationSuite(
        name='winv-identity',
        description='winv closed form and merge-sort inv against direct pair counts',
        default_range=(1, 12),
        default_cases=10_000,
        run_n=_per_permutation(check, exhaustive_limit=8),
    )


def create_cwinv_invariance_suite() -> VerificationSuite:
    """
    CWINV INVARIANCE - rotation behaviour of the statistics

    Responsibilities:
    - cwinv is constant on the rotation coset
    - 0 <= cwinv <= C(n,3), attained by id and w0
    - the shift by one is p c_n, and inv(p c_n) = inv(p) + n + 1 - 2 p(1)
    """

    def check(p: Permutation) -> Optional[str]:
        n = p.n
        value = cwinv(p)
        if not 0 <= value <= binomial(n, 3):
            return f"cwinv {value} outside 0..{binomial(n, 3)}"
        for j in range(1, n):
            if cwinv(rotate(p, j)) != value:
                return f"cwinv changes under shift {j}"
        if n >= 2 and rotate(p, 1) != compose(p, Permutation.long_cycle(n)):
            return "shift by one is not right multiplication by c_n"
        if n >= 2 and inv(rotate(p, 1)) != inv(p) + inv_rotation_delta(p):
            return "inv rotation delta mismatch"
        return None

    per_case = _per_permutation(check, exhaustive_limit=7)

    def run_n(n, rng, cases, workers, memory_cap=None):
        run, failures, note = per_case(n, rng, cases, workers, memory_cap)
        if cwinv(Permutation.identity(n)) != 0:
            failures.append(Failure(n, "id", "cwinv(id) != 0"))
        if cwinv(Permutation.longest(n)) != binomial(n, 3):
            failures.append(Failure(n, "w0", "cwinv(w0) != C(n,3)"))
        return run + 2, failures, note

    return VerificationSuite(
        name='cwinv-invariance',
        description='cwinv rotation invariance, range, and the inv rotation delta',
        default_range=(1, 10),
        default_cases=10_000,
        run_n=run_n,
    )


def create_complements_suite() -> VerificationSuite:
    """
    COMPLEMENTS - palindromy of winv and cwinv

    Responsibilities:
    - winv(p) + winv(p w0) = C(n+1,3)
    - cwinv(p) + cwinv(p w0) = C(n,3)
    """

    def check(p: Permutation) -> Optional[str]:
        n = p.n
        flipped = compose(p, Permutation.longest(n))
        if winv(p) + winv(flipped) != binomial(n + 1, 3):
            return "winv(p) + winv(p w0) != C(n+1,3)"
        if cwinv(p) + cwinv(flipped) != binomial(n, 3):
            return "cwinv(p) + cwinv(p w0) != C(n,3)"
        return None

    return VerificationSuite(
        name='complements',
        description='winv and cwinv complement identities under right multiplication by w0',
        default_range=(1, 12),
        default_cases=10_000,
        run_n=_per_permutation(check, exhaustive_limit=8),
    )


def create_mean_inv_suite() -> VerificationSuite:
    """
    MEAN INV - expected inversions over a rotation coset

    Responsibilities:
    - n * E[inv] = cwinv + C(n+1,3) on every coset
    - exhaustive sizes: the maximum mean equals (2n-1)(n-1)/6
    """
    exhaustive_limit = 7

    def run_n(n, rng, cases, workers, memory_cap=None):
        run, failures, best = 0, [], None
        for p in permutation_cases(n, rng, cases, exhaustive_limit):
            run += 1
            mean = coset_mean_inv(p)
            if mean != coset_mean_inv_naive(p) and len(failures) < MAX_RECORDED_FAILURES:
                failures.append(Failure(n, str(p), f"mean {mean} != rotation average"))
            best = mean if best is None else max(best, mean)
        if n <= exhaustive_limit and best != max_mean_inv(n):
            failures.append(Failure(n, "S_n", f"max mean {best} != {max_mean_inv(n)}"))
        return run, failures, None

    return VerificationSuite(
        name='mean-inv',
        description='coset mean of inv and its maximum (2n-1)(n-1)/6',
        default_range=(1, 7),
        default_cases=10_000,
        run_n=run_n,
    )


def create_heavy_tailed_suite() -> VerificationSuite:
    """
    HEAVY TAILED - when a word already minimizes inv on its coset

    Responsibilities:
    - inv(p) = minv(p) exactly when p is heavy tailed
    - incremental minv equals the n-fold recomputation
    """

    def check(p: Permutation) -> Optional[str]:
        value = minv(p)
        if value != minv_naive(p):
            return f"minv {value} != naive {minv_naive(p)}"
        if (inv(p) == value) != is_heavy_tailed(p):
            return f"inv == minv is {inv(p) == value} but heavy_tailed is {is_heavy_tailed(p)}"
        return None

    return VerificationSuite(
        name='heavy-tailed',
        description='inv = minv iff heavy tailed; incremental minv against naive',
        default_range=(1, 8),
        default_cases=10_000,
        run_n=_per_permutation(check, exhaustive_limit=8),
    )


def create_prefix_bound_suite() -> VerificationSuite:
    """
    PREFIX BOUND - inv(t) <= C(n-k,2) - k + t(1) + ... + t(k)

    Responsibilities:
    - check the bound for every prefix length k = 0..n
    """

    def check(t: Permutation) -> Optional[str]:
        count = inv(t)
        for k in range(t.n + 1):
            if count > prefix_inv_bound(t, k):
                return f"inv {count} > bound {prefix_inv_bound(t, k)} at k={k}"
        return None

    return VerificationSuite(
        name='prefix-bound',
        description='prefix-sum inversion bound for every prefix length',
        default_range=(1, 7),
        default_cases=10_000,
        run_n=_per_permutation(check, exhaustive_limit=7),
    )


def create_witness_suite() -> VerificationSuite:
    """
    WITNESS - small prefix sums exist in every double coset

    Responsibilities:
    - prefix_sum_witness returns a member of p1 Z_n p2^-1
    - its first k letters sum to at most k(n+1)/2
    """

    def run_n(n, rng, cases, workers, memory_cap=None):
        failures = []
        for _ in range(cases):
            p1, p2 = random_permutation(n, rng), random_permutation(n, rng)
            k = int(rng.integers(0, n + 1))
            case = f"{p1} | {p2} | k={k}"
            tau = prefix_sum_witness(p1, p2, k)
            if tau not in double_coset(p1, p2):
                detail = f"{tau} is not in the double coset"
            elif 2 * sum(tau.word[:k]) > k * (n + 1):
                detail = f"prefix sum of {tau} exceeds k(n+1)/2"
            else:
                continue
            if len(failures) < MAX_RECORDED_FAILURES:
                failures.append(Failure(n, case, detail))
        return cases, failures, None

    return VerificationSuite(
        name='witness',
        description='existence of small-prefix-sum elements in double cosets',
        default_range=(1, 8),
        default_cases=10_000,
        run_n=run_n,
    )


def create_distance_oracle_suite() -> VerificationSuite:
    """
    DISTANCE ORACLE - BFS against the double-coset formula

    Responsibilities:
    - implicit BFS and table BFS agree from the canonical coset
    - dist(c_n, gamma) = minv(bar gamma) on every coset
    - random pairs: BFS is symmetric and matches the double-coset minimum
    """

    def run_n(n, rng, cases, workers, memory_cap=None):
        failures = []
        total = coset_count(n)
        table = build_neighbor_table(n, memory_cap=memory_cap)
        fields = {0: bfs_from_table(table, 0)}
        implicit = bfs(0, n, workers=workers, memory_cap=memory_cap).dist
        if not np.array_equal(implicit, fields[0]):
            failures.append(Failure(n, "source 0", "implicit BFS differs from table BFS"))
        for index, rep in enumerate(all_coset_reps(n)):
            if int(fields[0][index]) != minv(rep.word):
                failures.append(Failure(n, str(rep), "dist from c_n != minv"))
                break
        for _ in range(cases):
            a, b = (int(v) for v in rng.integers(0, total, size=2))
            for source in (a, b):
                if source not in fields:
                    fields[source] = bfs_from_table(table, source)
            forward, backward = int(fields[a][b]), int(fields[b][a])
            formula = distance(Cycle.from_coset(unrank(a, n)), Cycle.from_coset(unrank(b, n)))
            if not forward == backward == formula and len(failures) < MAX_RECORDED_FAILURES:
                failures.append(Failure(
                    n, f"{a} -> {b}", f"bfs {forward}/{backward}, formula {formula}"
                ))
        return cases + total + 1, failures, None

    return VerificationSuite(
        name='distance-oracle',
        description='BFS distances against the double-coset minimum',
        default_range=(2, 7),
        default_cases=1_000,
        run_n=run_n,
        search_mode='diameter',
    )


def create_pi0_agreement_suite() -> VerificationSuite:
    """
    PI0 AGREEMENT - the extremal permutation and its offsets

    Responsibilities:
    - closed-form and greedy constructions agree
    - pi_0 is heavy tailed and inv(pi_0) = minv(pi_0) = C(n,2) - sum k_t
    - k_t is nondecreasing with k_m <= n - m
    - the lower bound and the minv(w0) formula hold
    """

    def run_n(n, rng, cases, workers, memory_cap=None):
        failures = []
        if n < 2:
            return 0, failures, None
        pi0 = build_pi0(n)
        kt = kt_sequence(n)

        def fail(detail):
            failures.append(Failure(n, str(pi0), detail))

        if pi0 != build_pi0_greedy(n):
            fail(f"greedy construction gives {build_pi0_greedy(n)}")
        if not is_heavy_tailed(pi0):
            fail("pi_0 is not heavy tailed")
        if not inv_pi0(n) == inv(pi0) == minv(pi0):
            fail(f"inv_pi0 {inv_pi0(n)}, inv {inv(pi0)}, minv {minv(pi0)}")
        if list(kt.values) != sorted(kt.values) or kt.values[-1] > n - kt.m:
            fail(f"k_t sequence {kt.values} is not admissible")
        if lower_bound(n) > inv_pi0(n):
            fail(f"lower bound {lower_bound(n):.3f} exceeds inv_pi0 {inv_pi0(n)}")
        if minv(Permutation.longest(n)) != minv_w0(n):
            fail(f"minv(w0) {minv(Permutation.longest(n))} != {minv_w0(n)}")
        return 1, failures, None

    return VerificationSuite(
        name='pi0-agreement',
        description='pi_0 constructions, offsets and closed forms',
        default_range=(2, 64),
        default_cases=1,
        run_n=run_n,
    )


def create_conjecture_suite() -> VerificationSuite:
    """
    CONJECTURE - Sort_n by BFS against inv(pi_0)

    Responsibilities:
    - sort_exact(n) = inv_pi0(n)
    - lower bound <= Sort_n <= (2n^2 - 3n + 1)/6
    """

    def run_n(n, rng, cases, workers, memory_cap=None):
        report = verify_conjecture_sort_eq_pi0(n, workers=workers, memory_cap=memory_cap)
        failures = []
        case = f"n={n}"
        if not report.equal:
            failures.append(Failure(n, case, f"Sort = {report.sort_exact}, inv(pi_0) = {report.inv_pi0}"))
        if not lower_bound(n) <= report.sort_exact <= sort_upper_bound(n):
            failures.append(Failure(n, case, f"Sort = {report.sort_exact} outside the bounds"))
        return 1, failures, f"Sort={report.sort_exact}"

    return VerificationSuite(
        name='conjecture-sort-pi0',
        description='Sort_n from BFS equals inv(pi_0)',
        default_range=(2, 11),
        default_cases=1,
        run_n=run_n,
        search_mode='sort',
    )


def create_unimodality_suite() -> VerificationSuite:
    """
    UNIMODALITY - shape of the minv distribution

    Responsibilities:
    - record whether the histogram is unimodal (reported, never a failure)
    - fail only when the counts do not add up to (n-1)!
    """

    def run_n(n, rng, cases, workers, memory_cap=None):
        histogram = minv_distribution(n, workers=workers, memory_cap=memory_cap)
        failures = []
        if not histogram.is_consistent():
            failures.append(Failure(n, f"n={n}", f"counts sum to {histogram.total}"))
        verdict = "unimodal" if is_unimodal(histogram) else "not unimodal"
        return 1, failures, f"{verdict} {list(histogram.counts)}"

    return VerificationSuite(
        name='unimodality',
        description='minv distribution totals and unimodality verdict',
        default_range=(1, 11),
        default_cases=1,
        run_n=run_n,
        search_mode='distribution',
    )


def create_sort_minv_suite() -> VerificationSuite:
    """
    SORT MINV - BFS eccentricity against direct minv enumeration

    Responsibilities:
    - the BFS histogram from c_n equals the minv histogram over all cosets
    """
    engine = StatisticsEngine()

    def run_n(n, rng, cases, workers, memory_cap=None):
        histogram = minv_distribution(n, workers=workers, memory_cap=memory_cap)
        direct = engine.coset_distribution(n).tolist()
        failures = []
        if list(histogram.counts) != direct:
            failures.append(Failure(n, f"n={n}", f"bfs {list(histogram.counts)} != direct {direct}"))
        return coset_count(n), failures, f"Sort={len(direct) - 1}"

    return VerificationSuite(
        name='sort-minv',
        description='Sort_n = max minv, histogram by BFS against direct enumeration',
        default_range=(1, 8),
        default_cases=1,
        run_n=run_n,
        search_mode='sort',
    )


def create_palindromy_suite() -> VerificationSuite:
    """
    PALINDROMY - generating functions of inv, winv and cwinv

    Responsibilities:
    - each distribution over S_n reads the same backwards
    - its top degree is C(n,2), C(n+1,3) and C(n,3) respectively
    - the counts add up to n!
    """
    engine = StatisticsEngine()
    degrees = {
        'inv': lambda n: binomial(n, 2),
        'winv': lambda n: binomial(n + 1, 3),
        'cwinv': lambda n: binomial(n, 3),
    }

    def run_n(n, rng, cases, workers, memory_cap=None):
        failures = []
        for name, degree in degrees.items():
            series = engine.distribution(name, n)
            top = int(series.index[-1])
            if not engine.is_palindromic(series):
                failures.append(Failure(n, name, f"coefficients {series.tolist()} are not palindromic"))
            if top != degree(n):
                failures.append(Failure(n, name, f"top degree {top} != {degree(n)}"))
            if int(series.sum()) != math.factorial(n):
                failures.append(Failure(n, name, f"counts sum to {int(series.sum())}"))
        return len(degrees), failures, None

    return VerificationSuite(
        name='palindromy',
        description='inv, winv and cwinv generating functions are palindromic of the right degree',
        default_range=(1, 8),
        default_cases=1,
        run_n=run_n,
    )


def create_all_suites() -> Dict[str, VerificationSuite]:
    """
    Convenience function to create all suites at once.

    Returns:
        Dictionary of all suites keyed by name
    """
    suites = [
        create_winv_identity_suite(),
        create_cwinv_invariance_suite(),
        create_complements_suite(),
        create_mean_inv_suite(),
        create_heavy_tailed_suite(),
        create_prefix_bound_suite(),
        create_witness_suite(),
        create_distance_oracle_suite(),
        create_pi0_agreement_suite(),
        create_conjecture_suite(),
        create_unimodality_suite(),
        create_sort_minv_suite(),
        create_palindromy_suite(),
    ]
    return {suite.name: suite for suite in suites}


def get_suite(name: str) -> VerificationSuite:
    suites = create_all_suites()
    if name not in suites:
        raise UnknownSuiteError(name, suites)
    return suites[name]
