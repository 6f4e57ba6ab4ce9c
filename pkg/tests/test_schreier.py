import networkx as nx
import numpy as np
import pandas as pd
import pytest

from src.tools.cosets import (
    Cycle,
    all_coset_reps,
    canonicalize,
    coset_count,
    distance,
    minv,
    rank,
    unrank,
)
from src.tools.extremal import bounds, inv_pi0, lower_bound
from src.tools.permutation import Permutation, permutations_of
from src.tools.schreier_engine import (
    DUMP_MAGIC,
    UNVISITED,
    DistanceField,
    GeneratorKind,
    GeneratorSet,
    MinvHistogram,
    bfs,
    bfs_from_table,
    build_neighbor_table,
    canonicalize_rows,
    diameter_exact,
    estimate_bfs_bytes,
    estimate_table_bytes,
    export_graph,
    is_unimodal,
    minv_distribution,
    neighbors,
    pack_rows,
    rank_rows,
    sort_exact,
    swap_values,
    unpack_rows,
    unrank_rows,
    verify_conjecture_sort_eq_pi0,
)
from src.utils.errors import DomainError, ResourceLimitError
from src.utils.exporters import edges_frame, histogram_frame


def adjacent(n):
    return GeneratorSet(GeneratorKind.ADJACENT, n)


def cyclic(n):
    return GeneratorSet(GeneratorKind.CYCLIC, n)


class TestGeneratorSet:
    def test_sizes(self):
        assert len(adjacent(5)) == 4
        assert len(cyclic(5)) == 5
        assert cyclic(5).transpositions()[-1] == (5, 1)

    def test_cyclic_two_has_no_duplicate(self):
        assert cyclic(2).transpositions() == [(1, 2)]

    def test_of_accepts_strings(self):
        assert GeneratorSet.of("cyclic", 4).kind is GeneratorKind.CYCLIC
        with pytest.raises(ValueError):
            GeneratorSet.of("star", 4)


class TestVectorKernels:
    @pytest.mark.parametrize("n", [1, 2, 5, 7])
    def test_rank_unrank_rows_match_scalar(self, n):
        total = coset_count(n)
        words = unrank_rows(np.arange(total), n)
        assert [tuple(int(v) for v in row) for row in words] == [
            rep.word.word for rep in all_coset_reps(n)
        ]
        assert rank_rows(words).tolist() == list(range(total))

    def test_pack_round_trip(self):
        words = np.array([p.word for p in permutations_of(5)], dtype=np.uint8)
        assert np.array_equal(unpack_rows(pack_rows(words), 5), words)
        assert pack_rows(words[:1])[0] == Permutation.identity(5).pack()

    def test_swap_and_canonicalize(self):
        words = np.array([p.word for p in permutations_of(4)], dtype=np.uint8)
        image = canonicalize_rows(swap_values(words, 2, 3))
        expected = [
            canonicalize(Permutation(tuple({2: 3, 3: 2}.get(v, v) for v in p.word))).word.word
            for p in permutations_of(4)
        ]
        assert [tuple(int(v) for v in row) for row in image] == expected


class TestNeighbors:
    def test_three(self):
        rep = unrank(0, 3)
        assert {r.word.word for r in neighbors(rep, adjacent(3))} == {(1, 3, 2)}

    def test_canonical_four(self):
        labels = {str(Cycle.from_coset(r)) for r in neighbors(unrank(0, 4), adjacent(4))}
        assert labels == {"(1,2,4,3)", "(1,3,4,2)", "(1,3,2,4)"}

    def test_degree_bounded_by_generators(self):
        for rep in all_coset_reps(6):
            assert len(neighbors(rep, adjacent(6))) <= 5
            assert len(neighbors(rep, cyclic(6))) <= 6
            assert rep not in neighbors(rep, cyclic(6))


class TestBfs:
    def test_small_fields(self):
        field = bfs(0, 3)
        assert field.dist.tolist() == [0, 1]
        assert field.eccentricity == 1
        assert bfs(0, 4).eccentricity == 2
        assert bfs(0, 5).eccentricity == 4

    def test_trivial_sizes(self):
        assert bfs(0, 1).dist.tolist() == [0]
        assert bfs(0, 2).dist.tolist() == [0]

    @pytest.mark.parametrize("n", range(2, 9))
    def test_distance_from_canonical_is_minv(self, n):
        field = bfs(0, n)
        expected = [minv(rep.word) for rep in all_coset_reps(n)]
        assert field.dist.tolist() == expected

    @pytest.mark.parametrize("n", range(2, 8))
    def test_implicit_and_table_agree(self, n):
        for kind in (adjacent(n), cyclic(n)):
            table = build_neighbor_table(n, kind)
            for source in range(0, coset_count(n), max(1, coset_count(n) // 7)):
                field = bfs(source, n, kind, chunk_size=13)
                assert np.array_equal(field.dist, bfs_from_table(table, source))
                assert field.complete

    def test_matches_double_coset_distance(self, rng):
        n = 6
        table = build_neighbor_table(n)
        for _ in range(100):
            a, b = (int(v) for v in rng.integers(0, coset_count(n), size=2))
            from_a, from_b = bfs_from_table(table, a), bfs_from_table(table, b)
            expected = distance(Cycle.from_coset(unrank(a, n)), Cycle.from_coset(unrank(b, n)))
            assert from_a[b] == from_b[a] == expected

    def test_deterministic_across_workers(self):
        one = bfs(0, 8, workers=1, chunk_size=97)
        many = bfs(0, 8, workers=8, chunk_size=97)
        assert one.to_bytes() == many.to_bytes()

    def test_progress_callback(self):
        levels = []
        bfs(0, 5, progress=lambda level, count: levels.append((level, count)))
        assert levels == [(1, 4), (2, 8), (3, 8), (4, 3)]

    def test_source_out_of_range(self):
        with pytest.raises(DomainError):
            bfs(6, 4)

    def test_size_cap(self):
        with pytest.raises(ResourceLimitError) as info:
            bfs(0, 15)
        assert "15" in str(info.value)

    def test_memory_cap(self):
        with pytest.raises(ResourceLimitError) as info:
            bfs(0, 9, memory_cap=1024)
        assert info.value.cap_bytes == 1024
        assert info.value.required_bytes == estimate_bfs_bytes(9, generators=8)


class TestDistanceField:
    def test_dump_round_trip(self, tmp_path):
        field = bfs(3, 6)
        path = field.dump(tmp_path / "field.bin")
        payload = path.read_bytes()
        assert payload[:4] == DUMP_MAGIC
        assert len(payload) == 16 + coset_count(6)
        loaded = DistanceField.load(path)
        assert (loaded.n, loaded.source) == (6, 3)
        assert np.array_equal(loaded.dist, field.dist)

    def test_loaded_field_does_not_claim_a_generator_kind(self, tmp_path):
        field = bfs(0, 5, cyclic(5))
        assert field.kind is GeneratorKind.CYCLIC
        loaded = DistanceField.load(field.dump(tmp_path / "cyclic.bin"))
        assert loaded.kind is None
        assert np.array_equal(loaded.dist, field.dist)

    def test_rejects_foreign_payload(self):
        with pytest.raises(DomainError):
            DistanceField.from_bytes(b"XXXX" + bytes(12) + bytes(6))

    def test_rejects_truncated_payload(self):
        payload = bfs(0, 5).to_bytes()
        with pytest.raises(DomainError):
            DistanceField.from_bytes(payload[:-1])

    def test_farthest_and_histogram(self):
        field = bfs(0, 4)
        assert field.histogram() == [1, 3, 2]
        assert [str(Cycle.from_coset(unrank(int(i), 4))) for i in field.farthest()] == [
            "(1,4,2,3)", "(1,4,3,2)",
        ]
        assert UNVISITED not in field.dist


class TestSortAndDistribution:
    def test_sort_values(self):
        assert sort_exact(2) == 0
        assert sort_exact(4) == 2
        assert sort_exact(5) == 4

    @pytest.mark.parametrize("n", range(2, 9))
    def test_sort_is_max_minv(self, n):
        assert sort_exact(n) == max(minv(rep.word) for rep in all_coset_reps(n))

    def test_distributions(self, golden_dir):
        assert minv_distribution(3).counts == (1, 1)
        for n in (4, 5):
            expected = pd.read_csv(golden_dir / f"distribution_n{n}.csv")
            actual = histogram_frame(minv_distribution(n).counts)
            pd.testing.assert_frame_equal(actual, expected, check_dtype=False)

    @pytest.mark.parametrize("n", range(1, 10))
    def test_histogram_is_consistent(self, n):
        histogram = minv_distribution(n)
        assert histogram.is_consistent()
        assert histogram.total == coset_count(n)

    def test_unimodality(self):
        assert is_unimodal([1, 2, 3])
        assert not is_unimodal([1, 3, 2, 3])
        assert is_unimodal(MinvHistogram(n=5, counts=(1, 4, 8, 8, 3)))
        with pytest.raises(DomainError):
            is_unimodal([])

    @pytest.mark.parametrize("n", range(2, 9))
    def test_conjecture_small(self, n):
        report = verify_conjecture_sort_eq_pi0(n)
        assert report.equal
        assert report.to_dict()["sort_exact"] == inv_pi0(n)

    @pytest.mark.slow
    @pytest.mark.parametrize("n", [9, 10, 11])
    def test_conjecture_large(self, n):
        report = verify_conjecture_sort_eq_pi0(n, workers=4)
        assert report.equal
        assert lower_bound(n) <= report.sort_exact <= bounds(n).sort_upper


class TestDiameter:
    def test_values(self):
        assert diameter_exact(3).diameter == 1
        assert diameter_exact(4).diameter == 2
        assert diameter_exact(2).diameter == 0

    def test_five_is_not_vertex_transitive(self):
        result = diameter_exact(5)
        assert result.diameter == 5
        assert sort_exact(5) == 4
        source = Cycle.from_coset(unrank(result.source, 5))
        target = Cycle.from_coset(unrank(result.target, 5))
        assert distance(source, target) == 5

    @pytest.mark.parametrize("n", range(2, 7))
    def test_matches_double_coset_maximum(self, n):
        reps = [Cycle.from_coset(r) for r in all_coset_reps(n)]
        expected = max(distance(a, b) for a in reps for b in reps)
        assert diameter_exact(n).diameter == expected

    @pytest.mark.parametrize("n", range(2, 8))
    def test_bound_containment(self, n):
        report = bounds(n)
        sort_value = sort_exact(n)
        diameter = diameter_exact(n).diameter
        assert inv_pi0(n) <= sort_value <= diameter <= report.diam_upper_floor
        assert sort_value <= report.sort_upper_floor

    def test_parallel_matches_serial(self):
        serial = diameter_exact(6, workers=1, batch=7)
        parallel = diameter_exact(6, workers=3, batch=7)
        assert np.array_equal(serial.eccentricities, parallel.eccentricities)
        assert (serial.source, serial.target) == (parallel.source, parallel.target)

    @pytest.mark.slow
    def test_eight_is_deterministic(self):
        serial = diameter_exact(8, workers=1)
        parallel = diameter_exact(8, workers=8)
        assert serial.diameter == parallel.diameter
        assert np.array_equal(serial.eccentricities, parallel.eccentricities)

    def test_cyclic_generators_do_not_increase_distances(self):
        assert diameter_exact(5, cyclic(5)).diameter <= diameter_exact(5).diameter

    def test_refuses_large(self):
        with pytest.raises(ResourceLimitError):
            diameter_exact(11)

    def test_memory_cap(self):
        with pytest.raises(ResourceLimitError) as info:
            diameter_exact(6, memory_cap=1024)
        assert info.value.cap_bytes == 1024
        assert info.value.required_bytes == estimate_table_bytes(6, 5, 1)

    def test_memory_cap_counts_worker_copies(self):
        single = estimate_table_bytes(7, 6, workers=1)
        pooled = estimate_table_bytes(7, 6, workers=4)
        assert pooled > single
        diameter_exact(5, workers=1, memory_cap=single)
        with pytest.raises(ResourceLimitError):
            diameter_exact(7, workers=4, memory_cap=single)

    def test_neighbor_table_memory_cap(self):
        assert build_neighbor_table(5, memory_cap=1 << 20).shape == (24, 4)
        with pytest.raises(ResourceLimitError):
            build_neighbor_table(6, memory_cap=100)


class TestExport:
    def test_gamma4_matches_golden_edges(self, gamma4_edges):
        graph = export_graph(4)
        assert graph.number_of_nodes() == 6
        assert graph.number_of_edges() == 8
        pd.testing.assert_frame_equal(edges_frame(graph), gamma4_edges)
        expected = nx.from_pandas_edgelist(gamma4_edges, "source", "target")
        assert nx.is_isomorphic(graph, expected)

    def test_three(self):
        graph = export_graph(3)
        assert (graph.number_of_nodes(), graph.number_of_edges()) == (2, 1)

    def test_cyclic_is_superset(self):
        plain, augmented = export_graph(4), export_graph(4, cyclic(4))
        assert set(map(frozenset, plain.edges)) <= set(map(frozenset, augmented.edges))
        assert augmented.number_of_edges() == 10

    def test_connected(self):
        for n in range(2, 8):
            assert nx.is_connected(export_graph(n))

    def test_node_index_attribute(self):
        graph = export_graph(5)
        for label, index in graph.nodes(data="index"):
            assert rank(Cycle.parse(label).coset()) == index

    def test_cap(self):
        with pytest.raises(ResourceLimitError):
            export_graph(8)
