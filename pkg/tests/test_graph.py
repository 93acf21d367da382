import itertools
from fractions import Fraction

import pytest

from hgpy.definitions import *
import hgpy.core.gf2 as hggf2
import hgpy.core.graph as hggraph
from hgpy.core.exceptions import GraphFormatError, InfeasibleError, InvalidInputError


def test_generate_biregular_is_valid_and_deterministic():
    G = hggraph.generate_biregular(12, 9, 3, 4, seed=1)
    assert G.is_valid()
    assert G.edge_count == 36
    assert all(len(nbrs) == 3 for nbrs in G.adjacency_A)
    assert all(len(nbrs) == 4 for nbrs in G.adjacency_B)
    assert hggraph.generate_biregular(12, 9, 3, 4, seed=1) == G


def test_generate_biregular_rejects_inconsistent_degrees():
    with pytest.raises(InvalidInputError):
        hggraph.generate_biregular(12, 9, 3, 3, seed=1)


def test_generate_biregular_requires_ordered_sides():
    with pytest.raises(InvalidInputError):
        hggraph.generate_biregular(9, 12, 4, 3, seed=1)


def test_constructor_rejects_invalid_graph():
    with pytest.raises(InvalidInputError):
        hggraph.BipartiteGraph(2, 2, 2, 2, [[0, 1], [0, 0]])


def test_invariant_violations_report_witnesses():
    G = hggraph.BipartiteGraph(2, 2, 2, 2, [[0, 1], [0, 0]], check=False)
    violations = G.invariant_violations()
    assert not G.is_valid()
    assert {v['kind'] for v in violations} == {'multi_edge', 'degree'}
    assert {'kind': 'multi_edge', 'side': GraphSide.LEFT.value, 'vertex': 1, 'neighbors': [0, 0]} in violations


def test_from_adjacency_infers_degrees(k4_incidence):
    G = hggraph.BipartiteGraph.from_adjacency(4, k4_incidence.adjacency_A)
    assert (G.n_A, G.n_B, G.delta_A, G.delta_B) == (6, 4, 2, 3)
    assert G == k4_incidence


def test_neighbors(k4_incidence):
    assert hggraph.neighbors(k4_incidence, (GraphSide.LEFT, 3)) == [1, 2]
    assert hggraph.neighbors(k4_incidence, hggraph.Vertex(GraphSide.RIGHT, 0)) == [0, 1, 2]
    with pytest.raises(InvalidInputError):
        hggraph.neighbors(k4_incidence, (GraphSide.RIGHT, 4))


def test_unique_and_multiple_neighbors(k4_incidence):
    # Edges {0,1} and {0,2} share the vertex 0
    unique, multiple = hggraph.unique_and_multiple_neighbors(k4_incidence, [0, 1], GraphSide.LEFT)
    assert unique == frozenset({1, 2})
    assert multiple == frozenset({0})


def test_edge_count_defect_vanishes(k4_incidence, c6):
    for G in (k4_incidence, c6):
        for side in GraphSide:
            for size in range(1, G.size(side) + 1):
                assert hggraph.edge_count_defect(G, range(size), side) == 0


def test_incidence_matrix(k4_incidence, c6):
    H = hggraph.incidence_matrix(k4_incidence)
    assert H.shape == (4, 6)
    assert all(H.col_weight(a) == 2 for a in range(6))
    assert hggf2.rank(H) == 3
    assert hggf2.rank(hggraph.incidence_matrix(c6)) == 2


def test_expands(k4_incidence):
    # A triangle of edges has only three endpoints
    assert hggraph.expands(k4_incidence, [0, 1], GraphSide.LEFT, 0.45)
    assert not hggraph.expands(k4_incidence, [0, 1, 3], GraphSide.LEFT, 0.45)


def test_check_expansion_exhaustive_witness(k4_incidence):
    report = hggraph.check_expansion(k4_incidence, GraphSide.LEFT, Fraction(1, 2), 0.45, max_subset_size=5)
    assert not report.verified
    assert report.witness == (0, 1, 3)
    assert report.size_limit == 3
    assert not report.certifying


def test_check_expansion_verified(k4_incidence):
    report = hggraph.check_expansion(k4_incidence, GraphSide.RIGHT, Fraction(3, 4), 0.45, max_subset_size=5)
    assert report.verified
    assert report.certifying
    assert report.subsets_checked == 4 + 6 + 4


def test_check_expansion_sampled_does_not_certify(k4_incidence):
    report = hggraph.check_expansion(k4_incidence, GraphSide.LEFT, Fraction(1, 3), 0.45, max_subset_size=2,
                                     mode=ExpansionMode.SAMPLED, samples=20, seed=3)
    assert report.verified
    assert not report.certifying


def test_check_expansion_rejects_bad_parameters(k4_incidence):
    with pytest.raises(InvalidInputError):
        hggraph.check_expansion(k4_incidence, GraphSide.LEFT, 0, 0.45, 3)
    with pytest.raises(InvalidInputError):
        hggraph.check_expansion(k4_incidence, GraphSide.LEFT, 0.5, 1.0, 3)


def test_check_expansion_infeasible(k4_incidence, restore_config):
    restore_config.EXPANSION_MAX_SUBSETS = 5
    with pytest.raises(InfeasibleError):
        hggraph.check_expansion(k4_incidence, GraphSide.LEFT, 1, 0.45, max_subset_size=3)


def test_measure_expansion(k4_incidence):
    left = hggraph.measure_expansion(k4_incidence, GraphSide.LEFT, 0.45, 5)
    right = hggraph.measure_expansion(k4_incidence, GraphSide.RIGHT, 0.45, 5)
    assert (left.max_size, left.gamma, left.witness) == (2, Fraction(1, 3), (0, 1, 3))
    assert (right.max_size, right.gamma, right.witness) == (3, Fraction(3, 4), (0, 1, 2, 3))

    left = hggraph.measure_expansion(k4_incidence, GraphSide.LEFT, 0.16, 5)
    right = hggraph.measure_expansion(k4_incidence, GraphSide.RIGHT, 0.16, 5)
    assert (left.max_size, right.max_size) == (1, 1)


def test_minimum_delta(k4_incidence):
    assert hggraph.minimum_delta(k4_incidence, GraphSide.LEFT, 3) == Fraction(1, 2)
    assert hggraph.minimum_delta(k4_incidence, GraphSide.LEFT, 1) == 0


def test_exact():
    assert hggraph.exact(0.1) == Fraction(1, 10)
    assert hggraph.exact(1 / 6) == Fraction(1, 6)
    assert hggraph.exact(3) == 3


def test_graph_file_roundtrip(tmp_path, k4_incidence):
    path = tmp_path / 'k4.txt'
    hggraph.write_graph(k4_incidence, path)
    text = path.read_text()
    assert text.splitlines()[0] == '6 4 2 3'
    assert len(text.splitlines()) == 7
    assert hggraph.read_graph(path) == k4_incidence


@pytest.mark.parametrize('text', [
    '',
    '2 2 2\n0 1\n0 1\n',
    '2 2 2 2\n0 1\n',
    '2 2 2 2\n0 1\n0 x\n',
    '2 2 2 2\n0 1\n0 5\n',
])
def test_parse_graph_rejects_malformed_files(text):
    with pytest.raises(GraphFormatError):
        hggraph.parse_graph(text)


def test_parse_graph_unchecked_keeps_defects():
    G = hggraph.parse_graph('2 2 2 2\n0 1\n0 0\n', check=False)
    assert not G.is_valid()


@pytest.mark.parametrize('n_a, n_b, delta_a, delta_b', [
    (6, 4, 2, 3),
    (8, 4, 2, 4),
    (12, 9, 3, 4),
    (9, 9, 3, 3),
    (10, 5, 2, 4),
])
def test_expansion_gives_unique_neighbors_on_random_graphs(n_a, n_b, delta_a, delta_b):
    delta = Fraction(9, 20)
    for seed in range(10):
        G = hggraph.generate_biregular(n_a, n_b, delta_a, delta_b, seed=7 * seed + n_a)
        for side in GraphSide:
            measured = hggraph.measure_expansion(G, side, delta, 5)
            if measured.max_size < min(G.size(side), 5):
                assert len(measured.witness) == measured.max_size + 1

            for size in range(1, measured.max_size + 1):
                for S in itertools.combinations(range(G.size(side)), size):
                    unique, multiple = hggraph.unique_and_multiple_neighbors(G, S, side)
                    assert len(unique) >= (1 - 2 * delta) * G.degree(side) * size
                    assert not unique & multiple
                    assert hggraph.edge_count_defect(G, S, side) == 0
