"""Fixed-node-set dynamic graph with O(1) edge insertion, deletion and membership."""

from __future__ import annotations

from typing import Iterator, Tuple

import numpy as np

_INITIAL_CAPACITY = 64


def edge_key(u: int, v: int) -> Tuple[int, int]:
    """Normalized (min, max) key for an undirected edge."""
    return (u, v) if u < v else (v, u)


class DynamicGraph:
    """Undirected simple graph on a fixed node set {0, ..., n-1}.

    Adjacency is kept as one insertion-ordered dict per node (O(1) insert,
    O(1) delete by key, iteration in insertion order), plus a flat pair of
    index arrays over the current edge set so auditors can vectorize.
    """

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("node count must be at least 1")
        self.n = n
        self._adj = [dict() for _ in range(n)]
        # edge key -> position in the packed arrays below
        self._edge_pos: dict[Tuple[int, int], int] = {}
        cap = _INITIAL_CAPACITY
        self._eu = np.zeros(cap, dtype=np.int64)
        self._ev = np.zeros(cap, dtype=np.int64)

    @property
    def m(self) -> int:
        return len(self._edge_pos)

    def _check_node(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise ValueError(f"node {v} out of range [0, {self.n})")

    def _check_pair(self, u: int, v: int) -> None:
        self._check_node(u)
        self._check_node(v)
        if u == v:
            raise ValueError(f"self-loop ({u},{u}) rejected")

    def insert_edge(self, u: int, v: int) -> bool:
        """Insert edge (u, v); returns False (no-op) if already present."""
        self._check_pair(u, v)
        key = (u, v) if u < v else (v, u)
        if key in self._edge_pos:
            return False
        m = len(self._edge_pos)
        if m == len(self._eu):
            self._eu = np.resize(self._eu, 2 * m)
            self._ev = np.resize(self._ev, 2 * m)
        self._eu[m] = key[0]
        self._ev[m] = key[1]
        self._edge_pos[key] = m
        self._adj[u][v] = True
        self._adj[v][u] = True
        return True

    def delete_edge(self, u: int, v: int) -> bool:
        """Delete edge (u, v); returns False if absent."""
        self._check_pair(u, v)
        key = (u, v) if u < v else (v, u)
        pos = self._edge_pos.pop(key, None)
        if pos is None:
            return False
        # swap the last packed edge into the hole
        last = len(self._edge_pos)
        if pos != last:
            lu = int(self._eu[last])
            lv = int(self._ev[last])
            self._eu[pos] = lu
            self._ev[pos] = lv
            self._edge_pos[(lu, lv)] = pos
        del self._adj[u][v]
        del self._adj[v][u]
        return True

    def has_edge(self, u: int, v: int) -> bool:
        self._check_pair(u, v)
        return v in self._adj[u]

    def degree(self, v: int) -> int:
        self._check_node(v)
        return len(self._adj[v])

    def neighbors(self, v: int) -> Iterator[int]:
        """Current neighbors of v, each exactly once, in insertion order."""
        return iter(self._adj[v])

    def edge_keys(self):
        """View of the current edge set as normalized (u, v) keys."""
        return self._edge_pos.keys()

    def edge_arrays(self) -> Tuple[np.ndarray, np.ndarray]:
        """Packed (u, v) arrays over the current edges (views, do not mutate)."""
        m = len(self._edge_pos)
        return self._eu[:m], self._ev[:m]
