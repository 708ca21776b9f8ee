import numpy as np
import pytest

from orchid import Topology, from_edge_list_text, generate_watts_strogatz, substream


def test_edge_count_matches_ring_lattice():
    topo = generate_watts_strogatz(30, 6, 0.3, substream(0, 0))
    assert topo.edge_count == 30 * 6 // 2
    assert int(topo.degrees.sum()) == 2 * topo.edge_count


def test_pure_ring_lattice():
    topo = generate_watts_strogatz(10, 4, 0.0, substream(1, 0))
    assert topo.neighbors(0) == (1, 2, 8, 9)
    assert all(topo.degree(i) == 4 for i in range(10))


@pytest.mark.parametrize("seed", range(6))
def test_structure_invariants(seed):
    topo = generate_watts_strogatz(25, 6, 0.3, substream(seed, 0))
    for i in range(topo.n):
        assert i not in topo.neighbors(i)
        assert topo.degree(i) >= 1
        for j in topo.neighbors(i):
            assert i in topo.neighbors(j)
    # rewiring preserves the edge count, so the mean degree is exact
    assert topo.degrees.mean() == 6.0


def test_determinism_byte_for_byte():
    a = generate_watts_strogatz(25, 6, 0.3, substream(7, 0))
    b = generate_watts_strogatz(25, 6, 0.3, substream(7, 0))
    assert a.adjacency == b.adjacency
    assert a.to_edge_list_text() == b.to_edge_list_text()


def test_full_rewiring_still_connected():
    # p=1 with the minimum lattice degree stresses the regeneration loop
    for seed in range(20):
        topo = generate_watts_strogatz(20, 2, 1.0, substream(seed, 0))
        seen = {0}
        stack = [0]
        while stack:
            u = stack.pop()
            for v in topo.neighbors(u):
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        assert len(seen) == topo.n


def test_neighbors_out_of_range():
    topo = generate_watts_strogatz(10, 4, 0.0, substream(0, 0))
    with pytest.raises(IndexError):
        topo.neighbors(10)
    with pytest.raises(IndexError):
        topo.neighbors(-1)


def test_edge_list_serialisation_round_trip():
    topo = generate_watts_strogatz(12, 4, 0.5, substream(3, 0))
    text = topo.to_edge_list_text()
    lines = text.strip().splitlines()
    assert len(lines) == topo.edge_count
    pairs = [tuple(map(int, ln.split())) for ln in lines]
    assert all(i < j for i, j in pairs)
    assert pairs == sorted(pairs)
    rebuilt = from_edge_list_text(text, topo.n)
    assert rebuilt.adjacency == topo.adjacency


def test_parameter_validation():
    with pytest.raises(ValueError):
        generate_watts_strogatz(10, 3, 0.3, substream(0, 0))  # odd degree
    with pytest.raises(ValueError):
        generate_watts_strogatz(4, 4, 0.3, substream(0, 0))  # degree >= n
    with pytest.raises(ValueError):
        generate_watts_strogatz(10, 4, 1.5, substream(0, 0))


def test_flat_arrays_match_adjacency():
    topo = generate_watts_strogatz(15, 4, 0.4, substream(11, 0))
    rebuilt = [[] for _ in range(topo.n)]
    for s, d in zip(topo.flat_src, topo.flat_dst):
        rebuilt[s].append(int(d))
    assert tuple(tuple(r) for r in rebuilt) == topo.adjacency


def test_manual_topology_construction():
    topo = Topology(n=3, adjacency=((1, 2), (0,), (0,)), edge_count=2)
    assert topo.degree(0) == 2
    assert np.array_equal(topo.degrees, [2, 1, 1])
