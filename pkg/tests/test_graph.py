import numpy as np
import pytest

from dmvr.errors import InvalidEdgeError, InvalidSizeError, NotConnectedError, ConfigurationError
from dmvr.graph import (build_complete, build_ring, build_topology, build_torus, from_edge_list,
                        read_edge_list, sample_neighbor, write_edge_list)
from dmvr.rng import RandomStream


def _well_formed(g):
    for i, nbrs in enumerate(g.adjacency):
        assert list(nbrs) == sorted(set(nbrs))
        assert i not in nbrs
        for j in nbrs:
            assert i in g.adjacency[j]
    assert g.is_connected()


def test_complete():
    assert build_complete(2).adjacency == ((1,), (0,))
    g = build_complete(4)
    assert all(g.degree(i) == 3 for i in range(4))
    assert build_complete(100).num_edges == 100 * 99 // 2
    _well_formed(g)
    with pytest.raises(InvalidSizeError):
        build_complete(1)


def test_ring():
    assert build_ring(3).num_edges == 3
    g = build_ring(100)
    assert g.num_edges == 100 and all(g.degree(i) == 2 for i in range(100))
    assert set(build_ring(5).adjacency[0]) == {1, 4}
    _well_formed(g)
    with pytest.raises(InvalidSizeError):
        build_ring(2)


def test_torus():
    g = build_torus(3, 3)
    assert g.n == 9 and g.num_edges == 18
    assert all(g.degree(i) == 4 for i in range(9))
    assert set(build_torus(4, 3).adjacency[0]) == {3, 9, 1, 2}
    assert build_torus(10, 10).n == 100
    _well_formed(build_torus(10, 10))
    with pytest.raises(InvalidSizeError):
        build_torus(2, 5)


def test_edge_list_builder():
    assert from_edge_list(2, [(0, 1)]).adjacency == ((1,), (0,))
    with pytest.raises(NotConnectedError):
        from_edge_list(3, [(0, 1)])
    g = from_edge_list(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 1)])
    assert g.num_edges == 4 and all(g.degree(i) == 2 for i in range(4))
    with pytest.raises(InvalidEdgeError):
        from_edge_list(3, [(0, 0), (1, 2)])
    with pytest.raises(InvalidEdgeError):
        from_edge_list(3, [(0, 3)])


def test_edge_list_file_roundtrip(tmp_path):
    g = build_torus(3, 4)
    path = tmp_path / "t.edges"
    write_edge_list(g, path)
    h = read_edge_list(path)
    assert h.adjacency == g.adjacency
    path.write_text("# comment\nn 3\n0 1\n# another\n1 2\n")
    assert read_edge_list(path).num_edges == 2
    path.write_text("0 1\n")
    with pytest.raises(InvalidEdgeError):
        read_edge_list(path)


def test_build_topology():
    assert build_topology({"kind": "torus", "rows": 3, "cols": 4}).n == 12
    assert build_topology({"kind": "ring", "n": 7}).label == "ring"
    with pytest.raises(ConfigurationError):
        build_topology({"kind": "star", "n": 5})


def test_csr_matches_adjacency():
    g = build_ring(6)
    indptr, indices = g.csr
    for i in range(6):
        assert tuple(indices[indptr[i]:indptr[i + 1]]) == g.adjacency[i]
    with pytest.raises(ValueError):
        indices[0] = 3


def test_sample_neighbor_single_and_support():
    rng = RandomStream(1)
    assert all(sample_neighbor(build_complete(2), 0, rng) == 1 for _ in range(20))
    g = build_complete(4)
    assert {sample_neighbor(g, 2, rng) for _ in range(200)} == {0, 1, 3}


def test_sample_neighbor_consumes_one_draw():
    rng = RandomStream(3)
    sample_neighbor(build_ring(5), 0, rng)
    assert rng.consumed == 1


def test_sample_neighbor_frequencies():
    rng = RandomStream(7)
    g = build_ring(5)
    draws = [sample_neighbor(g, 0, rng) for _ in range(10_000)]
    assert abs(draws.count(1) / 1e4 - 0.5) < 0.02
    # 5 sigma binomial band over 10^5 draws on a degree-4 node
    g = build_torus(4, 4)
    N = 100_000
    hits = np.array([sample_neighbor(g, 5, rng) for _ in range(N)])
    p = 0.25
    sigma = np.sqrt(N * p * (1 - p))
    for j in g.adjacency[5]:
        assert abs((hits == j).sum() - N * p) < 5 * sigma
