"""Watts-Strogatz small-world communication graph.

The graph is undirected, connected, self-loop free, and immutable after
generation. Rewiring preserves the edge count n*mean_degree/2 exactly, so
the mean degree is always the requested one.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

_MAX_ATTEMPTS = 100


@dataclass(frozen=True)
class Topology:
    n: int
    adjacency: tuple[tuple[int, ...], ...]
    edge_count: int
    # flattened neighbour arrays derived from adjacency, for vectorised sums
    flat_src: np.ndarray = field(init=False, repr=False, compare=False)
    flat_dst: np.ndarray = field(init=False, repr=False, compare=False)
    degrees: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        deg = np.array([len(a) for a in self.adjacency], dtype=np.intp)
        src = np.repeat(np.arange(self.n, dtype=np.intp), deg)
        dst = np.fromiter(
            (j for row in self.adjacency for j in row), dtype=np.intp, count=int(deg.sum())
        )
        object.__setattr__(self, "degrees", deg)
        object.__setattr__(self, "flat_src", src)
        object.__setattr__(self, "flat_dst", dst)

    def neighbors(self, i: int) -> tuple[int, ...]:
        """Sorted neighbour indices of node i; never contains i."""
        if not 0 <= i < self.n:
            raise IndexError(f"node index {i} out of range for n={self.n}")
        return self.adjacency[i]

    def degree(self, i: int) -> int:
        return len(self.neighbors(i))

    def to_edge_list_text(self) -> str:
        """Serialise as sorted 'i j' lines with i < j."""
        lines = [
            f"{i} {j}"
            for i in range(self.n)
            for j in self.adjacency[i]
            if i < j
        ]
        return "\n".join(lines) + "\n"


def from_edge_list_text(text: str, n: int) -> Topology:
    """Rebuild a Topology from its edge-list serialisation."""
    adj: list[set[int]] = [set() for _ in range(n)]
    for line in text.splitlines():
        if not line.strip():
            continue
        i, j = (int(tok) for tok in line.split())
        adj[i].add(j)
        adj[j].add(i)
    return _from_sets(adj)


def _from_sets(adj: list[set[int]]) -> Topology:
    n = len(adj)
    edges = sum(len(s) for s in adj) // 2
    return Topology(n=n, adjacency=tuple(tuple(sorted(s)) for s in adj), edge_count=edges)


def _ring_lattice(n: int, mean_degree: int) -> list[set[int]]:
    adj: list[set[int]] = [set() for _ in range(n)]
    for offset in range(1, mean_degree // 2 + 1):
        for i in range(n):
            j = (i + offset) % n
            adj[i].add(j)
            adj[j].add(i)
    return adj


def _rewire(
    adj: list[set[int]], mean_degree: int, rewire_prob: float, rng: np.random.Generator
) -> None:
    """Standard rewiring: each clockwise lattice edge independently gets its
    far endpoint replaced by a uniform non-self, non-duplicate target."""
    n = len(adj)
    for offset in range(1, mean_degree // 2 + 1):
        for i in range(n):
            j = (i + offset) % n
            if j not in adj[i]:
                continue
            if rng.random() >= rewire_prob:
                continue
            candidates = [w for w in range(n) if w != i and w not in adj[i]]
            if not candidates:
                continue  # node already adjacent to everyone
            w = candidates[int(rng.integers(0, len(candidates)))]
            adj[i].discard(j)
            adj[j].discard(i)
            adj[i].add(w)
            adj[w].add(i)


def _is_connected(adj: list[set[int]]) -> bool:
    n = len(adj)
    seen = np.zeros(n, dtype=bool)
    stack = [0]
    seen[0] = True
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if not seen[v]:
                seen[v] = True
                stack.append(v)
    return bool(seen.all())


def generate_watts_strogatz(
    n: int, mean_degree: int, rewire_prob: float, rng: np.random.Generator
) -> Topology:
    """Generate a connected Watts-Strogatz graph.

    Starts from the ring lattice with mean_degree/2 neighbours on each side
    and rewires each lattice edge independently with probability
    rewire_prob. Disconnected draws are discarded and regenerated from the
    continuation of the stream, up to a bounded number of attempts.
    """
    if mean_degree % 2 != 0:
        raise ValueError(f"mean_degree must be even, got {mean_degree}")
    if not 0 < mean_degree < n:
        raise ValueError(f"mean_degree must be in (0, n), got {mean_degree} (n={n})")
    if not 0.0 <= rewire_prob <= 1.0:
        raise ValueError(f"rewire_prob must be in [0, 1], got {rewire_prob}")
    for _ in range(_MAX_ATTEMPTS):
        adj = _ring_lattice(n, mean_degree)
        _rewire(adj, mean_degree, rewire_prob, rng)
        if _is_connected(adj):
            return _from_sets(adj)
    raise RuntimeError(
        f"no connected graph after {_MAX_ATTEMPTS} attempts "
        f"(n={n}, mean_degree={mean_degree}, rewire_prob={rewire_prob})"
    )
