"""End-to-end dynamic approximate-matching algorithms.

* SqrtNMatcher:    sqrt-capped kernel + short-path matching, amortized.
* PhasedMatcher:   phase rebuilds with c = m^(1/3), amortized.
* WorstCaseMatcher: epoch kernel + maximal matching in the foreground while a
  background copy of the graph, its kernel and its matching are rebuilt
  incrementally and swapped in at each phase boundary.

All matchers expect the caller to apply each update to the host graph first
and then call ``update(op, u, v)``.
"""

from __future__ import annotations

import math
from typing import Iterator, List, Optional, Tuple

from . import degmatch
from .degmatch import FreeNeighborIndex, MatchState
from .graph import DynamicGraph
from .kernel import EPOCH, PHASE, SQRT_CAP, Kernel, build_static


def _cube_root_budget(m: int) -> int:
    """Integer degree budget max(1, floor(m^(1/3)))."""
    if m <= 0:
        return 1
    c = int(round(m ** (1.0 / 3.0)))
    while c ** 3 > m:
        c -= 1
    while (c + 1) ** 3 <= m:
        c += 1
    return max(1, c)


def _phase_length(eps: float, c: int) -> int:
    return max(1, int(eps * eps * c * c / 2.0))


class _ShadowGraph:
    """Background copy of the host graph (the edge set E*), O(1) resettable."""

    def __init__(self, n: int):
        self.n = n
        self._gen = 1
        self._adj: List[dict] = [None] * n  # type: ignore[list-item]
        self._stamp = [0] * n
        self.edges: dict[Tuple[int, int], bool] = {}

    def reset(self) -> None:
        self._gen += 1
        self.edges = {}

    def _touch(self, v: int) -> None:
        if self._stamp[v] != self._gen:
            self._stamp[v] = self._gen
            self._adj[v] = {}

    @property
    def m(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        key = (u, v) if u < v else (v, u)
        return key in self.edges

    def insert(self, u: int, v: int) -> None:
        self._touch(u)
        self._touch(v)
        key = (u, v) if u < v else (v, u)
        assert key not in self.edges
        self.edges[key] = True
        self._adj[u][v] = True
        self._adj[v][u] = True

    def delete(self, u: int, v: int) -> None:
        key = (u, v) if u < v else (v, u)
        del self.edges[key]
        del self._adj[u][v]
        del self._adj[v][u]

    def neighbors(self, v: int) -> Iterator[int]:
        self._touch(v)
        return iter(self._adj[v])

    def edge_keys(self):
        return self.edges.keys()


def _build_ap5_matching(kernel: Kernel) -> Tuple[MatchState, FreeNeighborIndex, int]:
    """Static 3/2-approximate matching on a kernel: stream every kernel edge
    through the short-path insert, then sweep rotations until no length-3
    augmenting path survives."""
    st = MatchState(kernel.n)
    idx = FreeNeighborIndex(kernel.n)
    ops = 0
    for (u, v) in kernel.kernel_edges:
        ops += degmatch.ap5_insert(st, idx, kernel, u, v)
    improved = True
    while improved:
        improved = False
        for v in range(kernel.n):
            if v in st.mate:
                continue
            changed, extra = degmatch.resolve(st, idx, kernel, v)
            ops += extra
            if changed:
                improved = True
    return st, idx, ops


def _build_maximal_matching(kernel: Kernel) -> Tuple[MatchState, int]:
    st = MatchState(kernel.n)
    ops = 0
    for (u, v) in kernel.kernel_edges:
        ops += 1
        if u not in st.mate and v not in st.mate:
            st.match(u, v)
    return st, ops


class SqrtNMatcher:
    """(3+3*eps)-approximate matching via a sqrt(n)-capped kernel."""

    def __init__(self, g: DynamicGraph, epsilon: float):
        if not 0.0 < epsilon < 1.0 / 3.0:
            raise ValueError("epsilon must lie in (0, 1/3)")
        self.g = g
        self.epsilon = epsilon
        cap = max(1, math.isqrt(g.n))
        self.kernel = Kernel(g, float(cap), SQRT_CAP, eps=epsilon)
        build_static(g, self.kernel)
        self.matching, self._idx, _ = _build_ap5_matching(self.kernel)
        self.last_ops = 0
        self.kernel.listener = self._on_kernel_event
        self._event_ops = 0

    def _on_kernel_event(self, kind: str, u: int, v: int) -> None:
        if kind == "insert":
            self._event_ops += degmatch.ap5_insert(self.matching, self._idx,
                                                   self.kernel, u, v)
        else:
            self._event_ops += degmatch.ap5_delete(self.matching, self._idx,
                                                   self.kernel, u, v)

    def update(self, op: str, u: int, v: int) -> None:
        ops0 = self.kernel.ops
        self._event_ops = 0
        if op == "+":
            self.kernel.sqrt_insert(u, v)
        else:
            self.kernel.sqrt_delete(u, v)
        self.last_ops = (self.kernel.ops - ops0) + self._event_ops

    def matching_size(self) -> int:
        return self.matching.size

    def current_matching(self) -> List[Tuple[int, int]]:
        return list(self.matching.edges())

    def guarantee(self) -> Tuple[float, str]:
        return (3.0 + 3.0 * self.epsilon, "amortized")


class PhasedMatcher:
    """(3+3*eps)-approximate matching, rebuilt every eps^2*c^2/2 updates."""

    def __init__(self, g: DynamicGraph, epsilon: float):
        if not 0.0 < epsilon < 1.0 / 3.0:
            raise ValueError("epsilon must lie in (0, 1/3)")
        self.g = g
        self.epsilon = epsilon
        self.kernel: Optional[Kernel] = None
        self.phase_index = 0
        self.phase_stats: List[dict] = []
        self.last_ops = 0
        self._event_ops = 0
        self._start_phase()

    def _start_phase(self) -> int:
        self.phase_index += 1
        m = self.g.m
        self.c = _cube_root_budget(m)
        self.phase_len = _phase_length(self.epsilon, self.c)
        self.t = 0
        if self.kernel is None:
            self.kernel = Kernel(self.g, float(self.c), PHASE, eps=self.epsilon,
                                 update_budget=self.phase_len)
        else:
            self.kernel.listener = None
            self.kernel.reset(float(self.c), PHASE, eps=self.epsilon, lam=0.0,
                              update_budget=self.phase_len)
        build_static(self.g, self.kernel)
        self.matching, self._idx, ops = _build_ap5_matching(self.kernel)
        self.kernel.listener = self._on_kernel_event
        return ops + self.g.m

    def _on_kernel_event(self, kind: str, u: int, v: int) -> None:
        if kind == "insert":
            self._event_ops += degmatch.ap5_insert(self.matching, self._idx,
                                                   self.kernel, u, v)
        else:
            self._event_ops += degmatch.ap5_delete(self.matching, self._idx,
                                                   self.kernel, u, v)

    def update(self, op: str, u: int, v: int) -> None:
        kernel = self.kernel
        ops0 = kernel.ops
        self._event_ops = 0
        if op == "+":
            kernel.phase_insert(u, v)
        else:
            kernel.phase_delete(u, v)
        ops = (kernel.ops - ops0) + self._event_ops
        self.t += 1
        if self.t >= self.phase_len:
            self.phase_stats.append({
                "c": self.c,
                "phase_len": self.phase_len,
                "updates": kernel.updates_seen,
                "deletions": kernel.deletions_seen,
                "refills": kernel.refills_this_period,
                "churn": kernel.churn_this_period,
            })
            ops += self._start_phase()
        self.last_ops = ops

    def matching_size(self) -> int:
        return self.matching.size

    def current_matching(self) -> List[Tuple[int, int]]:
        return list(self.matching.edges())

    def guarantee(self) -> Tuple[float, str]:
        return (3.0 + 3.0 * self.epsilon, "amortized")


class WorstCaseMatcher:
    """(4+6*eps)-approximate matching with worst-case update cost.

    Foreground: the kernel handed over at the last boundary, run under the
    epoch discipline, with a maximal matching maintained on it.  Background:
    a shadow edge set E*, kernel and maximal matching for the graph as it
    will stand at the next boundary, fed by mirrored updates plus a bounded
    quantum of catch-up edges per update.
    """

    def __init__(self, g: DynamicGraph, epsilon: float):
        if not 0.0 < epsilon < 1.0 / 6.0:
            raise ValueError("epsilon must lie in (0, 1/6)")
        self.g = g
        self.epsilon = epsilon
        self.phase_index = 0
        self.rotations = 0
        self.rotation_hook = None  # called with (self) just before each swap
        self.epoch_stats: List[dict] = []
        self.last_ops = 0
        self._fg_event_ops = 0
        self._bg_event_ops = 0
        self._begin_phase_geometry()
        # initial foreground: fresh static kernel and maximal matching
        self.fg_kernel = Kernel(g, float(self.c), EPOCH, eps=0.0, lam=epsilon,
                                deletion_budget=self.phase_len)
        build_static(g, self.fg_kernel)
        self.fg_match, _ = _build_maximal_matching(self.fg_kernel)
        self.fg_kernel.listener = self._on_fg_event
        # background shell
        self.shadow = _ShadowGraph(g.n)
        self.bg_kernel = Kernel(self.shadow, float(self.c), EPOCH, eps=0.0,
                                lam=epsilon, deletion_budget=self.phase_len)
        self.bg_match = MatchState(g.n)
        self.bg_kernel.listener = self._on_bg_event
        self._snapshot: List[Tuple[int, int]] = list(g.edge_keys())
        self._cursor = 0
        self.t = 0

    def _begin_phase_geometry(self) -> None:
        self.phase_index += 1
        self.m0 = self.g.m
        self.c = _cube_root_budget(self.m0)
        self.phase_len = _phase_length(self.epsilon, self.c)
        # quantum * phase_len >= m0 so that E* = E at the boundary
        self.quantum = -(-self.m0 // self.phase_len) if self.m0 else 0

    def _on_fg_event(self, kind: str, u: int, v: int) -> None:
        if kind == "insert":
            self._fg_event_ops += degmatch.mm_insert(self.fg_match,
                                                     self.fg_kernel, u, v)
        else:
            self._fg_event_ops += degmatch.mm_delete(self.fg_match,
                                                     self.fg_kernel, u, v)

    def _on_bg_event(self, kind: str, u: int, v: int) -> None:
        if kind == "insert":
            self._bg_event_ops += degmatch.mm_insert(self.bg_match,
                                                     self.bg_kernel, u, v)
        else:
            self._bg_event_ops += degmatch.mm_delete(self.bg_match,
                                                     self.bg_kernel, u, v)

    def update(self, op: str, u: int, v: int) -> None:
        ops = 0
        self._fg_event_ops = 0
        self._bg_event_ops = 0
        fg0 = self.fg_kernel.ops
        bg0 = self.bg_kernel.ops
        if op == "+":
            self.fg_kernel.epoch_insert(u, v)
            self.shadow.insert(u, v)
            self.bg_kernel.epoch_insert(u, v)
        else:
            self.fg_kernel.epoch_delete(u, v)
            if self.shadow.has_edge(u, v):
                self.shadow.delete(u, v)
                self.bg_kernel.epoch_delete(u, v)
        # bounded catch-up over the phase-start snapshot
        picks = 0
        snapshot = self._snapshot
        cursor = self._cursor
        g = self.g
        while picks < self.quantum and cursor < len(snapshot):
            a, b = snapshot[cursor]
            cursor += 1
            ops += 1
            if self.shadow.has_edge(a, b) or not g.has_edge(a, b):
                continue
            self.shadow.insert(a, b)
            self.bg_kernel.epoch_insert(a, b)
            picks += 1
        self._cursor = cursor
        ops += (self.fg_kernel.ops - fg0) + (self.bg_kernel.ops - bg0)
        ops += self._fg_event_ops + self._bg_event_ops
        self.t += 1
        if self.t >= self.phase_len:
            ops += self._rotate()
        self.last_ops = ops

    def _rotate(self) -> int:
        self.rotations += 1
        for kern in (self.fg_kernel, self.bg_kernel):
            self.epoch_stats.append({
                "c": kern.cap,
                "lam": kern.lam,
                "deletions": kern.deletions_seen,
                "refills": kern.refills_this_period,
            })
        if self.rotation_hook is not None:
            self.rotation_hook(self)
        old_fg = self.fg_kernel
        old_fg.listener = None
        # the background becomes the foreground for the next phase; its
        # refills must now rescan the live graph rather than the shadow
        self.fg_kernel = self.bg_kernel
        self.fg_kernel.host = self.g
        self.fg_match = self.bg_match
        self.fg_kernel.listener = self._on_fg_event
        self._begin_phase_geometry()
        # foreground keeps its own degree budget; only the epoch bookkeeping
        # restarts (its kernel now carries eps slack from the finished build)
        self.fg_kernel.configure(self.fg_kernel.c, EPOCH, eps=self.epsilon,
                                 lam=self.epsilon,
                                 update_budget=None,
                                 deletion_budget=self.phase_len)
        # recycle the old foreground as the new empty background
        self.shadow.reset()
        old_fg.host = self.shadow
        old_fg.reset(float(self.c), EPOCH, eps=0.0, lam=self.epsilon,
                     deletion_budget=self.phase_len)
        self.bg_kernel = old_fg
        self.bg_match = MatchState(self.g.n)
        self.bg_kernel.listener = self._on_bg_event
        self._snapshot = list(self.g.edge_keys())
        self._cursor = 0
        self.t = 0
        return len(self._snapshot) + 1

    def matching_size(self) -> int:
        return self.fg_match.size

    def current_matching(self) -> List[Tuple[int, int]]:
        return list(self.fg_match.edges())

    def guarantee(self) -> Tuple[float, str]:
        return (4.0 + 6.0 * self.epsilon, "worst-case")

    def op_budget(self) -> float:
        """Per-update operation allowance 64*(c + m/(eps^2 c^2))."""
        eps = self.epsilon
        c = self.c
        return 64.0 * (c + self.m0 / (eps * eps * c * c))
