"""
Schreier Graph Engine
Exact breadth-first search over the coset graph X(S_n / Z_n, generators).

Vertices are CosetIndex values and are never stored as a whole: the
frontier of each level is kept as packed words (4 bits per letter in a
uint64), neighbors are produced on the fly by exchanging two values in
every word, and new vertices are claimed in a uint8 distance array of
(n - 1)! cells. Diameters run one BFS per source over a precomputed
neighbor table, spread across a process pool.
"""

import math
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from multiprocessing import Pool
from pathlib import Path
from typing import Callable, FrozenSet, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
from tqdm import tqdm

from src.tools.cosets import (
    CosetRep,
    Cycle,
    canonicalize,
    coset_count,
    factorials,
    unrank,
)
from src.tools.extremal import inv_pi0
from src.tools.permutation import BITS_PER_LETTER, left_multiply_transposition
from src.utils.errors import DomainError, ResourceLimitError, format_bytes

UNVISITED = 255
MAX_BFS_N = 14
MAX_DIAMETER_N = 10
MAX_TABLE_N = 10

DUMP_MAGIC = b"CSLD"
DUMP_VERSION = 1
_HEADER = struct.Struct("<4sHHQ")  # magic, version, n, source: 16 bytes


class GeneratorKind(str, Enum):
    ADJACENT = "adjacent"
    CYCLIC = "cyclic"


@dataclass(frozen=True)
class GeneratorSet:
    """
    Transpositions acting on cosets by left multiplication.

    adjacent: s_1, ..., s_(n-1). cyclic: the same plus (n, 1), which for
    n = 2 coincides with s_1 and is not repeated.
    """

    kind: GeneratorKind
    n: int

    @classmethod
    def of(cls, kind, n: int) -> "GeneratorSet":
        return cls(GeneratorKind(kind), n)

    def transpositions(self) -> List[Tuple[int, int]]:
        pairs = [(i, i + 1) for i in range(1, self.n)]
        if self.kind is GeneratorKind.CYCLIC and self.n >= 3:
            pairs.append((self.n, 1))
        return pairs

    def __len__(self) -> int:
        return len(self.transpositions())


@dataclass(frozen=True, eq=False)
class DistanceField:
    """
    Single-source BFS distances, one uint8 cell per CosetIndex.

    kind is the generator set the field was searched with. The dump header
    does not record it, so a field read back with load() has kind None.
    """

    n: int
    source: int
    dist: np.ndarray
    kind: Optional[GeneratorKind] = None

    @property
    def eccentricity(self) -> int:
        return int(self.dist.max())

    @property
    def complete(self) -> bool:
        return not bool((self.dist == UNVISITED).any())

    def histogram(self) -> List[int]:
        return np.bincount(self.dist, minlength=self.eccentricity + 1).tolist()[
            : self.eccentricity + 1
        ]

    def farthest(self) -> np.ndarray:
        """CosetIndices at maximal distance, ascending."""
        return np.flatnonzero(self.dist == self.eccentricity)

    def to_bytes(self) -> bytes:
        header = _HEADER.pack(DUMP_MAGIC, DUMP_VERSION, self.n, self.source)
        return header + self.dist.astype(np.uint8).tobytes()

    def dump(self, path) -> Path:
        path = Path(path)
        path.write_bytes(self.to_bytes())
        return path

    @classmethod
    def from_bytes(cls, payload: bytes) -> "DistanceField":
        magic, version, n, source = _HEADER.unpack_from(payload)
        if magic != DUMP_MAGIC:
            raise DomainError(f"not a distance dump (magic {magic!r})")
        if version != DUMP_VERSION:
            raise DomainError(f"unsupported dump version {version}")
        dist = np.frombuffer(payload, dtype=np.uint8, offset=_HEADER.size).copy()
        if dist.size != coset_count(n):
            raise DomainError(f"dump holds {dist.size} cells, expected {coset_count(n)}")
        return cls(n=n, source=source, dist=dist)

    @classmethod
    def load(cls, path) -> "DistanceField":
        return cls.from_bytes(Path(path).read_bytes())


@dataclass(frozen=True)
class MinvHistogram:
    """counts[d] = number of cosets at distance d from the canonical coset."""

    n: int
    counts: Tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.counts)

    def is_consistent(self) -> bool:
        return self.total == coset_count(self.n) and self.counts[:1] == (1,)


@dataclass(frozen=True, eq=False)
class DiameterResult:
    n: int
    kind: GeneratorKind
    diameter: int
    eccentricities: np.ndarray
    source: int
    target: int


@dataclass(frozen=True)
class ConjectureReport:
    n: int
    sort_exact: int
    inv_pi0: int

    @property
    def equal(self) -> bool:
        return self.sort_exact == self.inv_pi0

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "sort_exact": self.sort_exact,
            "inv_pi0": self.inv_pi0,
            "equal": self.equal,
        }


# Vectorized word kernels. Rows are words over 1..n stored as uint8.


def pack_rows(words: np.ndarray) -> np.ndarray:
    codes = np.zeros(words.shape[0], dtype=np.uint64)
    for position in range(words.shape[1]):
        letter = (words[:, position].astype(np.uint64) - np.uint64(1))
        codes |= letter << np.uint64(BITS_PER_LETTER * position)
    return codes


def unpack_rows(codes: np.ndarray, n: int) -> np.ndarray:
    mask = np.uint64((1 << BITS_PER_LETTER) - 1)
    words = np.empty((codes.shape[0], n), dtype=np.uint8)
    for position in range(n):
        shift = np.uint64(BITS_PER_LETTER * position)
        words[:, position] = ((codes >> shift) & mask).astype(np.uint8) + 1
    return words


def swap_values(words: np.ndarray, a: int, b: int) -> np.ndarray:
    """Left multiplication by the transposition (a b) on every row."""
    return np.where(words == a, b, np.where(words == b, a, words)).astype(np.uint8)


def canonicalize_rows(words: np.ndarray) -> np.ndarray:
    """Rotate every row so that it starts with 1."""
    n = words.shape[1]
    shift = np.argmax(words == 1, axis=1)
    columns = (shift[:, None] + np.arange(n)[None, :]) % n
    return np.take_along_axis(words, columns, axis=1)


def rank_rows(canonical: np.ndarray) -> np.ndarray:
    """Lehmer rank of each row's suffix; rows must already start with 1."""
    suffix = canonical[:, 1:]
    width = suffix.shape[1]
    fact = factorials(width)
    ranks = np.zeros(canonical.shape[0], dtype=np.int64)
    for i in range(width - 1):
        smaller_later = (suffix[:, i + 1:] < suffix[:, i:i + 1]).sum(axis=1)
        ranks += smaller_later.astype(np.int64) * fact[width - 1 - i]
    return ranks


def unrank_rows(indices: np.ndarray, n: int) -> np.ndarray:
    """Canonical words for an array of CosetIndices."""
    indices = np.asarray(indices, dtype=np.int64)
    count = indices.shape[0]
    width = n - 1
    fact = factorials(max(width, 0))
    words = np.ones((count, n), dtype=np.uint8)
    available = np.tile(np.arange(2, n + 1, dtype=np.uint8), (count, 1))
    remainder = indices.copy()
    for i in range(width):
        digit = remainder // fact[width - 1 - i]
        remainder = remainder % fact[width - 1 - i]
        words[:, i + 1] = np.take_along_axis(available, digit[:, None], axis=1)[:, 0]
        slots = available.shape[1] - 1
        if slots:
            # drop the chosen column, keeping the rest in order
            columns = np.arange(slots)[None, :]
            columns = columns + (columns >= digit[:, None])
            available = np.take_along_axis(available, columns, axis=1)
    return words


# Memory model


def estimate_bfs_bytes(n: int, chunk_size: int = 1 << 16, generators: int = 0) -> int:
    """
    Conservative working-set estimate: the distance array, a frontier of at
    most half the cosets as packed uint64 words, and one chunk of candidates.
    """
    cosets = coset_count(n)
    generators = generators or max(n, 1)
    chunk = min(chunk_size, cosets) * generators * (n + 16)
    return cosets + 8 * (cosets // 2 + 1) + chunk


def _check_bfs_limits(n: int, memory_cap: Optional[int], chunk_size: int, generators: int):
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    required = estimate_bfs_bytes(n, chunk_size, generators)
    if n > MAX_BFS_N:
        raise ResourceLimitError(
            f"BFS supports n <= {MAX_BFS_N}; n = {n} would need about "
            f"{format_bytes(required)}",
            required_bytes=required,
        )
    if memory_cap is not None and required > memory_cap:
        raise ResourceLimitError(
            f"BFS for n = {n} needs about {format_bytes(required)}, "
            f"over the memory cap of {format_bytes(memory_cap)}",
            required_bytes=required,
            cap_bytes=memory_cap,
        )


# Scalar neighbors


def neighbors(rep: CosetRep, generators: GeneratorSet) -> FrozenSet[CosetRep]:
    """Distinct cosets one generator away from rep, self-loops dropped."""
    if rep.n != generators.n:
        raise DomainError(f"size mismatch: {rep.n} != {generators.n}")
    result = set()
    for a, b in generators.transpositions():
        image = canonicalize(left_multiply_transposition(rep.word, a, b))
        if image != rep:
            result.add(image)
    return frozenset(result)


# Implicit BFS


def _expand_chunk(codes: np.ndarray, n: int, pairs: Sequence[Tuple[int, int]],
                  dist: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Candidate (ranks, packed words) reachable from one frontier chunk."""
    if not pairs:
        return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.uint64)
    words = unpack_rows(codes, n)
    rank_parts, code_parts = [], []
    for a, b in pairs:
        image = canonicalize_rows(swap_values(words, a, b))
        ranks = rank_rows(image)
        # prefilter only; the claim in bfs() re-checks every cell
        fresh = dist[ranks] == UNVISITED
        rank_parts.append(ranks[fresh])
        code_parts.append(pack_rows(image[fresh]))
    return np.concatenate(rank_parts), np.concatenate(code_parts)


def bfs(source: int, n: int, generators: Optional[GeneratorSet] = None,
        workers: int = 1, memory_cap: Optional[int] = None,
        chunk_size: int = 1 << 16,
        progress: Optional[Callable[[int, int], None]] = None) -> DistanceField:
    """
    Level-synchronous BFS from one coset.

    Frontier chunks may be expanded by a thread pool; claims are applied in
    chunk order after each expansion, so the distance array is identical for
    any worker count.

    Args:
        source: CosetIndex of the start vertex
        n: size
        generators: generator set (default: adjacent transpositions)
        workers: threads used to expand frontier chunks
        memory_cap: refuse with ResourceLimitError above this many bytes
        chunk_size: frontier words expanded per task
        progress: called as progress(level, new_vertices) after every level

    Returns:
        DistanceField with every coset visited
    """
    generators = generators or GeneratorSet(GeneratorKind.ADJACENT, n)
    if generators.n != n:
        raise DomainError(f"generator set is for n = {generators.n}, not {n}")
    _check_bfs_limits(n, memory_cap, chunk_size, len(generators))
    total = coset_count(n)
    if not 0 <= source < total:
        raise DomainError(f"source {source} out of range 0..{total - 1}")

    dist = np.full(total, UNVISITED, dtype=np.uint8)
    dist[source] = 0
    frontier = np.array([unrank(source, n).word.pack()], dtype=np.uint64)
    pairs = generators.transpositions()
    level = 0

    executor = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        while frontier.size:
            chunks = [frontier[i:i + chunk_size] for i in range(0, frontier.size, chunk_size)]
            if executor is None:
                expanded = (_expand_chunk(chunk, n, pairs, dist) for chunk in chunks)
            else:
                expanded = executor.map(lambda c: _expand_chunk(c, n, pairs, dist), chunks)
            next_parts = []
            for ranks, codes in expanded:
                fresh = dist[ranks] == UNVISITED
                ranks, codes = ranks[fresh], codes[fresh]
                ranks, first = np.unique(ranks, return_index=True)
                dist[ranks] = level + 1
                next_parts.append(codes[first])
            frontier = np.concatenate(next_parts) if next_parts else np.empty(0, np.uint64)
            if frontier.size:
                level += 1
                if level >= UNVISITED:
                    raise ResourceLimitError(f"distance {level} does not fit in a uint8 cell")
                if progress is not None:
                    progress(level, int(frontier.size))
    finally:
        if executor is not None:
            executor.shutdown()

    field = DistanceField(n=n, source=source, dist=dist, kind=generators.kind)
    if not field.complete:
        raise AssertionError(f"coset graph for n = {n} is not connected")
    return field


def sort_exact(n: int, workers: int = 1, memory_cap: Optional[int] = None,
               chunk_size: int = 1 << 16, progress=None) -> int:
    """Sort_n: eccentricity of the canonical coset under adjacent generators."""
    field = bfs(0, n, GeneratorSet(GeneratorKind.ADJACENT, n), workers=workers,
                memory_cap=memory_cap, chunk_size=chunk_size, progress=progress)
    return field.eccentricity


def minv_distribution(n: int, workers: int = 1, memory_cap: Optional[int] = None,
                      chunk_size: int = 1 << 16, progress=None) -> MinvHistogram:
    field = bfs(0, n, GeneratorSet(GeneratorKind.ADJACENT, n), workers=workers,
                memory_cap=memory_cap, chunk_size=chunk_size, progress=progress)
    return MinvHistogram(n=n, counts=tuple(field.histogram()))


def is_unimodal(histogram) -> bool:
    """True iff the counts weakly rise to a peak and then weakly fall."""
    counts = list(histogram.counts if isinstance(histogram, MinvHistogram) else histogram)
    if not counts:
        raise DomainError("empty histogram")
    peak = counts.index(max(counts))
    rising = all(counts[i] <= counts[i + 1] for i in range(peak))
    falling = all(counts[i] >= counts[i + 1] for i in range(peak, len(counts) - 1))
    return rising and falling


def verify_conjecture_sort_eq_pi0(n: int, workers: int = 1,
                                  memory_cap: Optional[int] = None) -> ConjectureReport:
    """Compare Sort_n from BFS with inv(pi_0) from the closed form."""
    return ConjectureReport(
        n=n,
        sort_exact=sort_exact(n, workers=workers, memory_cap=memory_cap),
        inv_pi0=inv_pi0(n) if n >= 2 else 0,
    )


# Neighbor tables and diameters


def estimate_table_bytes(n: int, generators: int = 0, workers: int = 1) -> int:
    """
    Working set of a neighbor-table run: the int32 table, the word rows and
    rank temporaries used to build it, one copy of the table per pool worker
    and a distance array per running BFS.
    """
    cosets = coset_count(n)
    generators = generators or max(n - 1, 1)
    table = cosets * generators * 4
    build = cosets * (4 * n + 16)
    copies = workers if workers > 1 else 0
    return table + build + copies * table + max(workers, 1) * 2 * cosets


def _check_table_limits(n: int, generators: int, workers: int,
                        memory_cap: Optional[int]) -> None:
    if memory_cap is None:
        return
    required = estimate_table_bytes(n, generators, workers)
    if required > memory_cap:
        raise ResourceLimitError(
            f"neighbor table for n = {n} with {workers} worker(s) needs about "
            f"{format_bytes(required)}, over the memory cap of {format_bytes(memory_cap)}",
            required_bytes=required,
            cap_bytes=memory_cap,
        )


def build_neighbor_table(n: int, generators: Optional[GeneratorSet] = None,
                         memory_cap: Optional[int] = None) -> np.ndarray:
    """table[v, g] = CosetIndex of generator g applied to coset v."""
    generators = generators or GeneratorSet(GeneratorKind.ADJACENT, n)
    if n > MAX_TABLE_N:
        raise ResourceLimitError(f"neighbor tables are limited to n <= {MAX_TABLE_N}")
    _check_table_limits(n, len(generators), 1, memory_cap)
    total = coset_count(n)
    words = unrank_rows(np.arange(total, dtype=np.int64), n)
    pairs = generators.transpositions()
    table = np.empty((total, len(pairs)), dtype=np.int32)
    for column, (a, b) in enumerate(pairs):
        table[:, column] = rank_rows(canonicalize_rows(swap_values(words, a, b)))
    return table


def bfs_from_table(table: np.ndarray, source: int) -> np.ndarray:
    """Distance array from one source over a neighbor table."""
    dist = np.full(table.shape[0], UNVISITED, dtype=np.uint8)
    dist[source] = 0
    frontier = np.array([source], dtype=np.int64)
    level = 0
    while frontier.size:
        reached = table[frontier].ravel()
        reached = np.unique(reached[dist[reached] == UNVISITED])
        if reached.size:
            level += 1
            dist[reached] = level
        frontier = reached
    return dist


_worker_table: Optional[np.ndarray] = None


def _init_worker(table: np.ndarray) -> None:
    global _worker_table
    _worker_table = table


def _eccentricities(bounds: Tuple[int, int], table: Optional[np.ndarray] = None) -> np.ndarray:
    table = _worker_table if table is None else table
    start, stop = bounds
    return np.array(
        [int(bfs_from_table(table, s).max()) for s in range(start, stop)], dtype=np.uint8
    )


def estimate_diameter_cost(n: int, generators: int) -> str:
    cosets = coset_count(n)
    return f"{cosets:,} BFS runs over {cosets:,} cosets ({cosets * cosets * generators:,} edge visits)"


def diameter_exact(n: int, generators: Optional[GeneratorSet] = None, workers: int = 1,
                   verbose: bool = False, batch: int = 64,
                   memory_cap: Optional[int] = None) -> DiameterResult:
    """
    Maximum eccentricity over every coset.

    Sources are processed in ascending CosetIndex, each with a full BFS; the
    per-source results come back in source order, so the result does not
    depend on the worker count.
    """
    generators = generators or GeneratorSet(GeneratorKind.ADJACENT, n)
    if generators.n != n:
        raise DomainError(f"generator set is for n = {generators.n}, not {n}")
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    if n > MAX_DIAMETER_N:
        raise ResourceLimitError(
            f"diameter supports n <= {MAX_DIAMETER_N}; n = {n} would need "
            + estimate_diameter_cost(n, len(generators))
        )
    _check_table_limits(n, len(generators), workers, memory_cap)
    table = build_neighbor_table(n, generators)
    total = table.shape[0]
    tasks = [(start, min(start + batch, total)) for start in range(0, total, batch)]

    if workers > 1 and len(tasks) > 1:
        with Pool(processes=workers, initializer=_init_worker, initargs=(table,)) as pool:
            results = pool.imap(_eccentricities, tasks)
            if verbose:
                results = tqdm(results, total=len(tasks), desc=f"eccentricities n={n}")
            parts = list(results)
    else:
        iterator = tqdm(tasks, desc=f"eccentricities n={n}") if verbose else tasks
        parts = [_eccentricities(task, table) for task in iterator]

    eccentricities = np.concatenate(parts) if parts else np.zeros(1, dtype=np.uint8)
    diameter = int(eccentricities.max())
    source = int(np.argmax(eccentricities))
    target = int(np.argmax(bfs_from_table(table, source)))
    return DiameterResult(n=n, kind=generators.kind, diameter=diameter,
                          eccentricities=eccentricities, source=source, target=target)


# Explicit export


def export_graph(n: int, generators: Optional[GeneratorSet] = None, cap: int = 7) -> nx.Graph:
    """The coset graph with nodes labelled by cycle notation, e.g. '(1,3,2)'."""
    generators = generators or GeneratorSet(GeneratorKind.ADJACENT, n)
    if n > cap:
        raise ResourceLimitError(
            f"explicit export is limited to n <= {cap} ({math.factorial(cap - 1)} vertices)"
        )
    graph = nx.Graph(n=n, generators=generators.kind.value)
    for index in range(coset_count(n)):
        rep = unrank(index, n)
        label = str(Cycle.from_coset(rep))
        graph.add_node(label, index=index)
        for other in neighbors(rep, generators):
            graph.add_edge(label, str(Cycle.from_coset(other)))
    return graph
