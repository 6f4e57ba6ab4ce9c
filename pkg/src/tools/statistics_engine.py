"""
Statistics Engine
Named permutation statistics and their distributions over S_n and S_n / Z_n.
"""

from collections import Counter
from typing import Callable, Dict

import pandas as pd

from src.tools.cosets import (
    all_coset_reps,
    argmin_shift,
    coset_mean_inv,
    is_heavy_tailed,
    minv,
)
from src.tools.permutation import (
    Permutation,
    cos_angle,
    cwinv,
    inv,
    permutations_of,
    winv,
)
from src.utils.errors import DomainError, UnknownStatisticError

MAX_DISTRIBUTION_N = 9


class StatisticsEngine:
    """
    Calculator that knows every statistic used by the sorting-time bounds.

    Keeps the formulas in one table so the command line, the suites and
    the tests all evaluate statistics the same way.
    """

    def __init__(self):
        self.name = "Permutation Statistics Calculator"
        self.description = (
            "Evaluates inversion statistics of a permutation and of its "
            "rotation coset, and tabulates their distributions."
        )

        # name -> definition; 'kind' decides how the value is rendered
        self.STATISTIC_DEFINITIONS: Dict[str, dict] = {
            'inv': {
                'function': inv,
                'kind': 'integer',
                'description': 'Number of inversions',
            },
            'winv': {
                'function': winv,
                'kind': 'integer',
                'description': 'Inversions weighted by value difference',
            },
            'cwinv': {
                'function': cwinv,
                'kind': 'integer',
                'description': 'n*inv - 2*winv, invariant under rotation',
            },
            'minv': {
                'function': minv,
                'kind': 'integer',
                'description': 'Minimum of inv over the rotation coset',
            },
            'minv_shift': {
                'function': argmin_shift,
                'kind': 'integer',
                'description': 'Smallest rotation attaining minv',
            },
            'heavy_tailed': {
                'function': is_heavy_tailed,
                'kind': 'boolean',
                'description': 'Every prefix of length k sums to at most k(n+1)/2',
            },
            'coset_mean_inv': {
                'function': coset_mean_inv,
                'kind': 'rational',
                'description': 'Mean of inv over the rotation coset',
            },
            'cos_angle': {
                'function': cos_angle,
                'kind': 'real',
                'description': 'Cosine of the angle between the word and the identity',
            },
        }

    def _definition(self, statistic_name: str) -> dict:
        if statistic_name not in self.STATISTIC_DEFINITIONS:
            raise UnknownStatisticError(statistic_name, self.STATISTIC_DEFINITIONS)
        return self.STATISTIC_DEFINITIONS[statistic_name]

    def calculate(self, statistic_name: str, permutation: Permutation):
        """
        Evaluate one statistic.

        Args:
            statistic_name: key of STATISTIC_DEFINITIONS
            permutation: the permutation to evaluate

        Returns:
            int, bool, Fraction or float depending on the statistic kind
        """
        return self._definition(statistic_name)['function'](permutation)

    def calculate_all(self, permutation: Permutation) -> Dict[str, object]:
        """Every statistic that is defined for this size, in table order."""
        results = {}
        for name, definition in self.STATISTIC_DEFINITIONS.items():
            if name == 'cos_angle' and permutation.n < 2:
                continue
            results[name] = definition['function'](permutation)
        return results

    def distribution(self, statistic_name: str, n: int) -> pd.Series:
        """
        Counts of an integer statistic over all of S_n, indexed by value.

        Zero counts inside the range are kept so the series reads as the
        coefficient list of the generating function.
        """
        definition = self._definition(statistic_name)
        if definition['kind'] != 'integer':
            raise DomainError(f"'{statistic_name}' is not integer valued")
        if not 1 <= n <= MAX_DISTRIBUTION_N:
            raise DomainError(f"distributions are tabulated for 1 <= n <= {MAX_DISTRIBUTION_N}")
        function: Callable = definition['function']
        counts = Counter(function(p) for p in permutations_of(n))
        return self._as_series(counts, statistic_name)

    def coset_distribution(self, n: int) -> pd.Series:
        """Counts of minv over S_n / Z_n by direct enumeration of the cosets."""
        if not 1 <= n <= MAX_DISTRIBUTION_N:
            raise DomainError(f"distributions are tabulated for 1 <= n <= {MAX_DISTRIBUTION_N}")
        counts = Counter(minv(rep.word) for rep in all_coset_reps(n))
        return self._as_series(counts, 'minv')

    @staticmethod
    def _as_series(counts: Counter, name: str) -> pd.Series:
        top = max(counts)
        index = pd.RangeIndex(0, top + 1, name=name)
        return pd.Series([counts.get(v, 0) for v in index], index=index, name='count')

    @staticmethod
    def is_palindromic(series: pd.Series) -> bool:
        values = series.tolist()
        return values == values[::-1]

    def list_statistics(self) -> str:
        """Return list of available statistics."""
        output = "Available Statistics:\n\n"
        for name, definition in self.STATISTIC_DEFINITIONS.items():
            output += f"- {name}: {definition['description']}\n"
        return output
