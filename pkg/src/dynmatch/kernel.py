"""Bounded-degree kernel subgraphs and their three maintenance disciplines.

A kernel keeps per-node friends lists (a subgraph of the host) such that no
node exceeds the degree budget, every tight node keeps most of its budget,
and any host edge joining two slack nodes is in the kernel.  Such a subgraph
approximately preserves the maximum matching of the host.

Variants differ in how a tight node replenishes lost friends:

* sqrt-cap: hard cap c, full neighbor rescan, partners must be under the cap;
* phase:    partners befriended unconditionally; safe only for a bounded
            number of updates, after which the caller rebuilds from scratch;
* epoch:    like phase but with slackened thresholds, tolerating a bounded
            number of deletions while degrading gracefully.

The degree budget c is an integer (irrational budgets such as sqrt(n) or
m^(1/3) are floored by the callers); epsilon/lambda thresholds are evaluated
in real arithmetic against the integer counters.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator, List, Optional, Tuple

import numpy as np

from .report import AuditReport

SQRT_CAP = "sqrt_cap"
PHASE = "phase"
EPOCH = "epoch"

_VARIANTS = (SQRT_CAP, PHASE, EPOCH)


def _key(u: int, v: int) -> Tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class ChangeEvent:
    kind: str  # "insert" | "delete"
    u: int
    v: int


class Kernel:
    """Friends lists, tight/slack bits and the change stream of one kernel.

    Type bits and friends lists are generation-stamped so that a full reset
    (a fresh empty kernel for the next phase) costs O(1); stale per-node
    state is cleared lazily on first touch.
    """

    def __init__(self, host, c: float, variant: str, eps: float = 0.0,
                 lam: float = 0.0, update_budget: Optional[int] = None,
                 deletion_budget: Optional[int] = None):
        if variant not in _VARIANTS:
            raise ValueError(f"unknown variant {variant!r}")
        n = host.n
        self.host = host
        self.n = n
        self._gen = 1
        self._friends: List[dict] = [None] * n  # type: ignore[list-item]
        self._fstamp = [0] * n
        self.n_friends = [0] * n
        self._tight_stamp = [0] * n
        self.kernel_edges: dict[Tuple[int, int], bool] = {}
        self.change_log: List[ChangeEvent] = []
        self.listener: Optional[Callable[[str, int, int], None]] = None
        # monotone counters
        self.ops = 0
        self.kappa_inserts = 0
        self.kappa_deletes = 0
        self.refill_calls = 0
        self.incident_updates = [0] * n
        self.node_refills = [0] * n
        self.configure(c, variant, eps, lam, update_budget, deletion_budget)

    # ---- parameterization / reset ----------------------------------------

    def configure(self, c: float, variant: str, eps: float, lam: float,
                  update_budget: Optional[int],
                  deletion_budget: Optional[int]) -> None:
        """Pin the thresholds for the coming phase/epoch."""
        if c < 1:
            raise ValueError("degree budget must be at least 1")
        if int(c) != c:
            raise ValueError("degree budget must be integral (callers floor it)")
        if variant == EPOCH:
            if not eps + lam < 1.0 / 3.0:
                raise ValueError("epoch variant requires eps + lam < 1/3")
        elif not 0.0 <= eps < 1.0 / 3.0:
            raise ValueError("eps must lie in [0, 1/3)")
        self.c = float(c)
        self.cap = int(c)
        self.variant = variant
        self.eps = eps
        self.lam = lam
        # refill fires when a tight node's count drops below trigger; the
        # scan then tops it up to target (or demotes to slack)
        if variant == EPOCH:
            self._promote_at = (1.0 - eps) * self.c
            self._trigger = (1.0 - lam - eps) * self.c
            self._target = (1.0 - eps) * self.c
        else:
            self._promote_at = self.c
            self._trigger = (1.0 - eps) * self.c
            self._target = self.c
        self.update_budget = update_budget
        self.deletion_budget = deletion_budget
        self.updates_seen = 0
        self.deletions_seen = 0
        self.refills_this_period = 0
        self.churn_this_period = 0

    def reset(self, c: float, variant: str, eps: float, lam: float,
              update_budget: Optional[int] = None,
              deletion_budget: Optional[int] = None) -> None:
        """O(1) re-initialization to an empty all-slack kernel."""
        self._gen += 1
        self.kernel_edges = {}
        self.change_log = []
        self.configure(c, variant, eps, lam, update_budget, deletion_budget)

    def _touch(self, v: int) -> None:
        if self._fstamp[v] != self._gen:
            self._fstamp[v] = self._gen
            self._friends[v] = {}
            self.n_friends[v] = 0

    # ---- kernel-as-host-graph view ----------------------------------------

    def neighbors(self, v: int) -> Iterator[int]:
        self._touch(v)
        return iter(self._friends[v])

    def is_tight(self, v: int) -> bool:
        return self._tight_stamp[v] == self._gen

    def _set_tight(self, v: int) -> None:
        self._tight_stamp[v] = self._gen

    def _set_slack(self, v: int) -> None:
        self._tight_stamp[v] = 0

    def friend_count(self, v: int) -> int:
        self._touch(v)
        return self.n_friends[v]

    # ---- internal edge plumbing -------------------------------------------

    def _emit(self, kind: str, u: int, v: int) -> None:
        self.change_log.append(ChangeEvent(kind, u, v))
        if self.listener is not None:
            self.listener(kind, u, v)

    def _add_edge(self, u: int, v: int) -> None:
        self._friends[u][v] = True
        self._friends[v][u] = True
        self.n_friends[u] += 1
        self.n_friends[v] += 1
        self.kernel_edges[_key(u, v)] = True
        self.kappa_inserts += 1
        self.churn_this_period += 1
        self.ops += 1
        self._emit("insert", u, v)

    def _remove_edge_if_present(self, u: int, v: int) -> bool:
        if _key(u, v) not in self.kernel_edges:
            return False
        del self.kernel_edges[_key(u, v)]
        del self._friends[u][v]
        del self._friends[v][u]
        self.n_friends[u] -= 1
        self.n_friends[v] -= 1
        self.kappa_deletes += 1
        self.churn_this_period += 1
        self.ops += 1
        self._emit("delete", u, v)
        return True

    def _note_update(self, u: int, v: int, deletion: bool) -> None:
        self.ops += 1
        self.updates_seen += 1
        self.incident_updates[u] += 1
        self.incident_updates[v] += 1
        if deletion:
            self.deletions_seen += 1
            if self.deletion_budget is not None:
                assert self.deletions_seen <= self.deletion_budget, \
                    "epoch deletion budget exceeded; caller must rotate"
        if self.update_budget is not None:
            assert self.updates_seen <= self.update_budget, \
                "phase update budget exceeded; caller must rotate"
        self._touch(u)
        self._touch(v)

    # ---- sqrt-cap variant ---------------------------------------------------

    def sqrt_insert(self, u: int, v: int) -> None:
        assert self.variant == SQRT_CAP
        self._note_update(u, v, deletion=False)
        cap = self.cap
        nf = self.n_friends
        if nf[u] < cap and nf[v] < cap:
            self._add_edge(u, v)
            if nf[u] == cap:
                self._set_tight(u)
            if nf[v] == cap:
                self._set_tight(v)

    def sqrt_delete(self, u: int, v: int) -> None:
        assert self.variant == SQRT_CAP
        self._note_update(u, v, deletion=True)
        self._remove_edge_if_present(u, v)
        for w in (u, v):
            if self.is_tight(w) and self.n_friends[w] < self._trigger:
                self._refill_sqrt(w)

    def _refill_sqrt(self, u: int) -> None:
        """Full neighbor rescan; befriend nodes still under the cap."""
        self.refill_calls += 1
        self.refills_this_period += 1
        self.node_refills[u] += 1
        cap = self.cap
        nf = self.n_friends
        friends_u = self._friends[u]
        for x in self.host.neighbors(u):
            self.ops += 1
            if nf[u] >= cap:
                break
            self._touch(x)
            if x not in friends_u and nf[x] < cap:
                self._add_edge(u, x)
                if nf[x] == cap:
                    self._set_tight(x)
        if nf[u] < cap:
            self._set_slack(u)

    # ---- phase variant --------------------------------------------------------

    def phase_insert(self, u: int, v: int) -> None:
        assert self.variant == PHASE
        self._note_update(u, v, deletion=False)
        if self.is_tight(u) or self.is_tight(v):
            return
        nf = self.n_friends
        if nf[u] >= self._promote_at or nf[v] >= self._promote_at:
            if nf[u] >= self._promote_at:
                self._set_tight(u)
            if nf[v] >= self._promote_at:
                self._set_tight(v)
        else:
            self._add_edge(u, v)

    def phase_delete(self, u: int, v: int) -> None:
        assert self.variant == PHASE
        self._note_update(u, v, deletion=True)
        self._remove_edge_if_present(u, v)
        for w in (u, v):
            if self.is_tight(w) and self.n_friends[w] < self._trigger:
                self._refill_unconditional(w)

    # ---- epoch variant ----------------------------------------------------------

    def epoch_insert(self, u: int, v: int) -> None:
        assert self.variant == EPOCH
        self._note_update(u, v, deletion=False)
        if self.is_tight(u) or self.is_tight(v):
            return
        nf = self.n_friends
        if nf[u] >= self._promote_at or nf[v] >= self._promote_at:
            if nf[u] >= self._promote_at:
                self._set_tight(u)
            if nf[v] >= self._promote_at:
                self._set_tight(v)
        else:
            self._add_edge(u, v)

    def epoch_delete(self, u: int, v: int) -> None:
        assert self.variant == EPOCH
        self._note_update(u, v, deletion=True)
        self._remove_edge_if_present(u, v)
        for w in (u, v):
            if self.is_tight(w) and self.n_friends[w] < self._trigger:
                self._refill_unconditional(w)

    def _refill_unconditional(self, u: int) -> None:
        """Scan the host neighbors of u, befriending any non-friend, until the
        count reaches the variant's target (partners may exceed the budget)."""
        self.refill_calls += 1
        self.refills_this_period += 1
        self.node_refills[u] += 1
        target = self._target
        nf = self.n_friends
        friends_u = self._friends[u]
        for x in self.host.neighbors(u):
            self.ops += 1
            if nf[u] >= target:
                break
            if x not in friends_u:
                self._touch(x)
                self._add_edge(u, x)
        if nf[u] < target:
            self._set_slack(u)

    # ---- auditing ------------------------------------------------------------

    def tight_nodes(self) -> List[int]:
        gen = self._gen
        stamps = self._tight_stamp
        return [v for v in range(self.n) if stamps[v] == gen]

    def audit(self, host, eps_eff: float) -> AuditReport:
        """Check the three kernel invariants plus bookkeeping consistency."""
        rep = AuditReport()
        n = self.n
        for v in range(n):
            self._touch(v)
        counts = np.array(self.n_friends, dtype=np.int64)
        real = np.array([len(self._friends[v]) for v in range(n)], dtype=np.int64)
        if not bool(np.all(counts == real)):
            v = int(np.argmax(counts != real))
            rep.fail(f"friend counter of node {v} is {counts[v]}, list has {real[v]}")
        hi = (1.0 + eps_eff) * self.c
        if not bool(np.all(counts <= hi)):
            v = int(np.argmax(counts))
            rep.fail(f"node {v} has {counts[v]} friends, above ({1 + eps_eff})*c = {hi!r}")
        if self.variant == SQRT_CAP and not bool(np.all(counts <= self.cap)):
            v = int(np.argmax(counts))
            rep.fail(f"node {v} exceeds the hard cap {self.cap}")
        gen = self._gen
        tight = np.array([self._tight_stamp[v] == gen for v in range(n)])
        lo = (1.0 - eps_eff) * self.c
        starved = tight & (counts < lo)
        if starved.any():
            v = int(np.argmax(starved))
            rep.fail(f"tight node {v} has only {counts[v]} friends, below {lo!r}")
        # every host edge between two slack nodes must be a kernel edge
        if hasattr(host, "edge_arrays"):
            eu, ev = host.edge_arrays()
            if len(eu):
                both_slack = ~tight[eu] & ~tight[ev]
                if both_slack.any():
                    for i in np.nonzero(both_slack)[0]:
                        a, b = int(eu[i]), int(ev[i])
                        if (a, b) not in self.kernel_edges:
                            rep.fail(f"slack-slack edge ({a},{b}) missing from the kernel")
                            break
        else:
            for a, b in host.edge_keys():
                if not tight[a] and not tight[b] and (a, b) not in self.kernel_edges:
                    rep.fail(f"slack-slack edge ({a},{b}) missing from the kernel")
                    break
        for (a, b) in self.kernel_edges:
            if not host.has_edge(a, b):
                rep.fail(f"kernel edge ({a},{b}) is not a host edge")
                break
            if b not in self._friends[a] or a not in self._friends[b]:
                rep.fail(f"kernel edge ({a},{b}) missing from a friends list")
                break
        if sum(self.n_friends) != 2 * len(self.kernel_edges):
            rep.fail("friend counters disagree with the kernel edge set")
        replayed: set = set()
        for ev_ in self.change_log:
            k = _key(ev_.u, ev_.v)
            if ev_.kind == "insert":
                replayed.add(k)
            else:
                replayed.discard(k)
        if replayed != set(self.kernel_edges):
            rep.fail("replaying the change log does not reproduce the kernel")
        return rep


def build_static(host, kernel: Kernel) -> Kernel:
    """Greedy single pass over the host edges: take an edge iff both endpoints
    are still under the budget; nodes ending exactly at the budget are tight."""
    cap = kernel.cap
    nf = kernel.n_friends
    for (u, v) in host.edge_keys():
        kernel._touch(u)
        kernel._touch(v)
        kernel.ops += 1
        if nf[u] < cap and nf[v] < cap:
            kernel._add_edge(u, v)
    for v in range(kernel.n):
        kernel._touch(v)
        if nf[v] >= cap:
            kernel._set_tight(v)
    return kernel


def load_kernel(host, c: float, edges, tight_nodes, variant: str = PHASE,
                eps: float = 0.0, lam: float = 0.0) -> Kernel:
    """Assemble a kernel from explicit parts (test fixtures)."""
    k = Kernel(host, c, variant, eps, lam)
    for (u, v) in edges:
        k._touch(u)
        k._touch(v)
        k._add_edge(u, v)
    for v in tight_nodes:
        k._touch(v)
        k._set_tight(v)
    return k
