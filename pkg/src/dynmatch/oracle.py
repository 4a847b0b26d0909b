"""Exact reference algorithms and adversarial fixtures for testing.

Everything here runs offline at desk scale and self-checks its witnesses.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .graph import DynamicGraph

_BLOSSOM_NODE_CAP = 500
_BRUTE_EDGE_CAP = 24
_MVC_NODE_CAP = 24


def _key(u: int, v: int) -> Tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass
class ExactResult:
    value: int
    witness: Set[Tuple[int, int]]


class OracleCapError(ValueError):
    """Instance exceeds the size cap of an exact oracle."""


def _adjacency(g: DynamicGraph) -> List[List[int]]:
    return [list(g.neighbors(v)) for v in range(g.n)]


def _verify_matching(g: DynamicGraph, matching: Set[Tuple[int, int]]) -> None:
    seen: Set[int] = set()
    for (u, v) in matching:
        assert g.has_edge(u, v), f"witness edge ({u},{v}) not in graph"
        assert u not in seen and v not in seen, "witness edges share a node"
        seen.add(u)
        seen.add(v)


def max_matching_exact(g: DynamicGraph) -> ExactResult:
    """Maximum-cardinality matching on a general graph (blossom contraction)."""
    n = g.n
    if n > _BLOSSOM_NODE_CAP:
        raise OracleCapError(f"blossom oracle capped at {_BLOSSOM_NODE_CAP} nodes")
    adj = _adjacency(g)
    match = [-1] * n
    p = [0] * n
    base = [0] * n

    def lca(a: int, b: int) -> int:
        used_path = [False] * n
        while True:
            a = base[a]
            used_path[a] = True
            if match[a] == -1:
                break
            a = p[match[a]]
        while True:
            b = base[b]
            if used_path[b]:
                return b
            b = p[match[b]]

    def mark_path(v: int, b: int, child: int, blossom: List[bool]) -> None:
        while base[v] != b:
            blossom[base[v]] = True
            blossom[base[match[v]]] = True
            p[v] = child
            child = match[v]
            v = p[match[v]]

    def find_path(root: int) -> int:
        used = [False] * n
        for i in range(n):
            p[i] = -1
            base[i] = i
        used[root] = True
        queue = [root]
        head = 0
        while head < len(queue):
            v = queue[head]
            head += 1
            for to in adj[v]:
                if base[v] == base[to] or match[v] == to:
                    continue
                if to == root or (match[to] != -1 and p[match[to]] != -1):
                    # odd cycle: contract the blossom
                    curbase = lca(v, to)
                    blossom = [False] * n
                    mark_path(v, curbase, to, blossom)
                    mark_path(to, curbase, v, blossom)
                    for i in range(n):
                        if blossom[base[i]]:
                            base[i] = curbase
                            if not used[i]:
                                used[i] = True
                                queue.append(i)
                elif p[to] == -1:
                    p[to] = v
                    if match[to] == -1:
                        # augmenting path found; flip it
                        while to != -1:
                            pv = p[to]
                            ppv = match[pv]
                            match[to] = pv
                            match[pv] = to
                            to = ppv
                        return 1
                    used[match[to]] = True
                    queue.append(match[to])
        return 0

    size = 0
    for v in range(n):
        if match[v] == -1 and adj[v]:
            size += find_path(v)
    witness = {_key(v, match[v]) for v in range(n) if match[v] != -1}
    assert len(witness) == size
    _verify_matching(g, witness)
    return ExactResult(size, witness)


def max_matching_bruteforce(g: DynamicGraph) -> ExactResult:
    """Exhaustive maximum matching; the independent check on the blossom code."""
    if g.m > _BRUTE_EDGE_CAP:
        raise OracleCapError(f"brute-force oracle capped at {_BRUTE_EDGE_CAP} edges")
    edges = sorted(g.edge_keys())
    best: List[Set[Tuple[int, int]]] = [set()]

    def explore(i: int, used: Set[int], chosen: Set[Tuple[int, int]]) -> None:
        if len(chosen) > len(best[0]):
            best[0] = set(chosen)
        # even taking every remaining edge cannot beat the incumbent
        if i == len(edges) or len(chosen) + (len(edges) - i) <= len(best[0]):
            return
        u, v = edges[i]
        if u not in used and v not in used:
            used.add(u)
            used.add(v)
            chosen.add((u, v))
            explore(i + 1, used, chosen)
            chosen.discard((u, v))
            used.discard(u)
            used.discard(v)
        explore(i + 1, used, chosen)

    explore(0, set(), set())
    witness = best[0]
    _verify_matching(g, witness)
    return ExactResult(len(witness), witness)


def min_vertex_cover_exact(g: DynamicGraph) -> ExactResult:
    """Branch and bound on uncovered edges with a matching lower bound."""
    if g.n > _MVC_NODE_CAP:
        raise OracleCapError(f"vertex cover oracle capped at {_MVC_NODE_CAP} nodes")
    edges = sorted(g.edge_keys())
    adj: Dict[int, Set[int]] = {v: set(g.neighbors(v)) for v in range(g.n)}

    def greedy_cover() -> Set[int]:
        cover: Set[int] = set()
        for (u, v) in edges:
            if u not in cover and v not in cover:
                cover.add(u)
                cover.add(v)
        return cover

    best = [greedy_cover()]

    def matching_lb(active: Set[Tuple[int, int]]) -> int:
        used: Set[int] = set()
        lb = 0
        for (u, v) in active:
            if u not in used and v not in used:
                used.add(u)
                used.add(v)
                lb += 1
        return lb

    def branch(active: List[Tuple[int, int]], chosen: Set[int]) -> None:
        active = [(u, v) for (u, v) in active
                  if u not in chosen and v not in chosen]
        if not active:
            if len(chosen) < len(best[0]):
                best[0] = set(chosen)
            return
        if len(chosen) + matching_lb(set(active)) >= len(best[0]):
            return
        u, v = active[0]
        for pick in (u, v):
            chosen.add(pick)
            branch(active, chosen)
            chosen.discard(pick)

    branch(edges, set())
    witness = best[0]
    assert is_valid_cover(g, witness)
    return ExactResult(len(witness), witness)


def is_valid_cover(g: DynamicGraph, cover: Set[int]) -> bool:
    return all(u in cover or v in cover for (u, v) in g.edge_keys())


def is_maximal_matching(host, matching: Sequence[Tuple[int, int]]) -> bool:
    """Matching validity plus maximality, on any neighbors-style host."""
    matched: Set[int] = set()
    pairs = set()
    for (u, v) in matching:
        if u in matched or v in matched or v not in set(host.neighbors(u)):
            return False
        matched.add(u)
        matched.add(v)
        pairs.add(_key(u, v))
    for v in range(host.n):
        if v in matched:
            continue
        for x in host.neighbors(v):
            if x not in matched:
                return False
    return True


@dataclass
class TightnessFixture:
    """Worst-case instance: a maximal kernel matching 4x below the optimum."""

    c: int
    graph: DynamicGraph
    kernel_edges: List[Tuple[int, int]]
    tight_nodes: List[int]
    kernel_matching: List[Tuple[int, int]]
    large_matching: List[Tuple[int, int]]


def build_tightness_fixture(c: int) -> TightnessFixture:
    """Six node groups; the kernel hides a large matching among the slack nodes.

    Groups (sizes): U (c/2), U' (c/2), U* (c), X (c), Y (c/2), Z (c/2).
    Kernel = the U-U' pairing plus both complete bipartite blocks U x U*
    and U' x U*; the U-U' pairing is maximal in it with c/2 edges, while
    X-U* and the Y/Z pendants alone form a matching of size 2c.
    """
    if c < 2 or c % 2:
        raise ValueError("c must be a positive even integer")
    h = c // 2
    u0, up0, us0, x0, y0, z0 = 0, h, 2 * h, 2 * h + c, 2 * h + 2 * c, 2 * h + 2 * c + h
    n = 4 * c
    g = DynamicGraph(n)
    pairing = [(u0 + i, up0 + i) for i in range(h)]
    u_block = [(u0 + i, us0 + j) for i in range(h) for j in range(c)]
    up_block = [(up0 + i, us0 + j) for i in range(h) for j in range(c)]
    x_block = [(x0 + i, us0 + i) for i in range(c)]
    pendants = [(y0 + i, u0 + i) for i in range(h)] + \
               [(up0 + i, z0 + i) for i in range(h)]
    for (a, b) in pairing + u_block + up_block + x_block + pendants:
        g.insert_edge(a, b)
    kernel_edges = pairing + u_block + up_block
    tight = list(range(u0, us0 + c))
    return TightnessFixture(
        c=c,
        graph=g,
        kernel_edges=kernel_edges,
        tight_nodes=tight,
        kernel_matching=pairing,
        large_matching=x_block + pendants,
    )
