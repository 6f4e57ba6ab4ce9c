from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from src.tools.permutation import Permutation

GOLDEN_DIR = Path(__file__).resolve().parent.parent / "data" / "golden"

PI0_12 = (6, 5, 4, 3, 12, 2, 11, 1, 10, 9, 8, 7)


@pytest.fixture
def golden_dir() -> Path:
    return GOLDEN_DIR


@pytest.fixture
def gamma4_edges() -> pd.DataFrame:
    return pd.read_csv(GOLDEN_DIR / "gamma4_edges.csv")


@pytest.fixture
def rng():
    return np.random.default_rng(2024)


def random_words(rng, n, count):
    return [Permutation(tuple(int(v) + 1 for v in rng.permutation(n))) for _ in range(count)]


def perm(*values) -> Permutation:
    return Permutation(tuple(values))
