"""Hierarchical level partition maintaining a (2+eps)-approximate vertex cover.

Nodes live on levels 0..L and every edge carries weight beta^-max(level(u),
level(v)) with beta = 1+eps.  The structure keeps every node's total incident
weight W_v inside [1, alpha*beta] (alpha = 1+3*eps; level-0 nodes are exempt
from the lower bound) by moving dirty nodes one level at a time until
quiescence.  The set {v : W_v >= 1} is then a vertex cover whose size is at
most 2*alpha*beta times the value of the implicit fractional matching
x(u,v) = w(u,v)/(alpha*beta).

Weights are held as exact integers: eps is snapped to a rational a/b and all
weights are multiples of 1/(b^2*(a+b)^L), so increments cancel exactly and
the threshold comparisons W >= 1, W > alpha*beta are exact.  Floating-point
drift would otherwise let a node slide a hair below weight 1 and silently
uncover one of its edges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, List

import numpy as np

from .graph import DynamicGraph
from .report import AuditReport

_REL_TOL = 1e-9
# Safety margin for the recover-loop runaway guard; the acceptance bound on
# edge-weight changes is 50*t*L/eps, the guard sits strictly above it.
_GUARD_FACTOR = 50.0


@dataclass(frozen=True)
class CoverParams:
    """Derived parameters: alpha = 1+3*eps, beta = 1+eps, L = ceil(log_beta(n/alpha))."""

    n: int
    epsilon: float
    alpha: float
    beta: float
    L: int
    eps_num: int
    eps_den: int

    @staticmethod
    def create(n: int, epsilon: float) -> "CoverParams":
        if n < 1:
            raise ValueError("node count must be at least 1")
        if not 0.0 < epsilon <= 1.0:
            raise ValueError("epsilon must lie in (0, 1]")
        frac = Fraction(epsilon).limit_denominator(10 ** 6)
        if frac <= 0:
            raise ValueError("epsilon too small to represent")
        a, b = frac.numerator, frac.denominator
        # smallest L >= 0 with beta^L >= n/alpha, i.e. ceil(log_beta(n/alpha)),
        # in exact integer arithmetic: (a+b)^L * (3a+b) >= n * b^(L+1)
        L = 0
        while (a + b) ** L * (3 * a + b) < n * b ** (L + 1):
            L += 1
        return CoverParams(n=n, epsilon=float(frac), alpha=float(Fraction(3 * a + b, b)),
                           beta=float(Fraction(a + b, b)), L=L, eps_num=a, eps_den=b)


class WorkLedger:
    """Monotone work counters standing in for the amortized-cost analysis."""

    __slots__ = ("edge_weight_changes", "level_moves_up", "level_moves_down",
                 "list_relink_ops")

    def __init__(self) -> None:
        self.edge_weight_changes = 0
        self.level_moves_up = 0
        self.level_moves_down = 0
        self.list_relink_ops = 0

    @property
    def level_moves(self) -> int:
        return self.level_moves_up + self.level_moves_down

    def snapshot(self) -> tuple:
        return (self.edge_weight_changes, self.level_moves_up,
                self.level_moves_down, self.list_relink_ops)


class LevelPartition:
    """Dynamic level partition over a fixed node set.

    Neighbor cells are intrusive doubly-linked list nodes in a flat arena.
    Each node v owns one "combined" list holding all neighbors at levels
    <= level(v) and one list per higher level i holding the neighbors exactly
    at level i.  A level change of v relinks only the cells of neighbors at
    or below v's old level; the list of neighbors at the next level up is
    absorbed with a single O(1) splice.
    """

    def __init__(self, n: int, epsilon: float):
        self.params = CoverParams.create(n, epsilon)
        self.n = n
        self.level = [0] * n
        self.ledger = WorkLedger()
        L = self.params.L
        a, b = self.params.eps_num, self.params.eps_den
        # scaled-integer weight unit: beta^-k maps to b^(k+2) * (a+b)^(L-k)
        self._ipow = [b ** (k + 2) * (a + b) ** (L - k) for k in range(L + 1)]
        self._idelta = [self._ipow[k + 1] - self._ipow[k] for k in range(L)]
        self._one = b ** 2 * (a + b) ** L
        self._ab = (3 * a + b) * (a + b) ** (L + 1)
        self._one_f = float(self._one)
        self._iw = [0] * n
        # insertion-ordered dicts double as O(1) FIFO dirty queue and cover list
        self._dirty: dict[int, bool] = {}
        self._cover: dict[int, bool] = {}
        self._ifrac = 0
        self._t = 0
        self._fix_calls = 0
        # cell arena: payload node, next, prev, twin cell of the same edge
        self._cnode: list[int] = []
        self._cnext: list[int] = []
        self._cprev: list[int] = []
        self._ctwin: list[int] = []
        self._free: list[int] = []
        self._combined = [self._new_sentinel() for _ in range(n)]
        self._upper = [[-1] * (L + 1) for _ in range(n)]
        self._cells: dict[tuple, int] = {}

    # ---- cell arena -----------------------------------------------------

    def _new_sentinel(self) -> int:
        c = self._alloc(-1)
        self._cnext[c] = c
        self._cprev[c] = c
        return c

    def _alloc(self, payload: int) -> int:
        if self._free:
            c = self._free.pop()
            self._cnode[c] = payload
            return c
        self._cnode.append(payload)
        self._cnext.append(-1)
        self._cprev.append(-1)
        self._ctwin.append(-1)
        return len(self._cnode) - 1

    def _link_tail(self, sent: int, c: int) -> None:
        cprev = self._cprev
        cnext = self._cnext
        last = cprev[sent]
        cnext[last] = c
        cprev[c] = last
        cnext[c] = sent
        cprev[sent] = c

    def _unlink(self, c: int) -> None:
        cprev = self._cprev
        cnext = self._cnext
        p = cprev[c]
        nx = cnext[c]
        cnext[p] = nx
        cprev[nx] = p

    def _upper_sent(self, v: int, i: int) -> int:
        s = self._upper[v][i]
        if s < 0:
            s = self._new_sentinel()
            self._upper[v][i] = s
        return s

    # ---- status / cover upkeep ------------------------------------------

    def _update_status(self, u: int) -> None:
        w = self._iw[u]
        dirty = self._dirty
        if w < self._one:
            self._cover.pop(u, None)
            if self.level[u] > 0:
                dirty[u] = True
            else:
                dirty.pop(u, None)
        else:
            self._cover[u] = True
            if w > self._ab:
                dirty[u] = True
            else:
                dirty.pop(u, None)

    # ---- updates ---------------------------------------------------------

    def handle_insert(self, u: int, v: int) -> None:
        """Account for edge (u, v) just inserted into the underlying graph."""
        assert not self._dirty
        self._t += 1
        i = self.level[u]
        j = self.level[v]
        cu = self._alloc(u)  # cell holding u, lives in v's lists
        cv = self._alloc(v)
        self._ctwin[cu] = cv
        self._ctwin[cv] = cu
        self._link_tail(self._combined[v] if i <= j else self._upper_sent(v, i), cu)
        self._link_tail(self._combined[u] if j <= i else self._upper_sent(u, j), cv)
        self.ledger.list_relink_ops += 2
        key = (u, v) if u < v else (v, u)
        self._cells[key] = cu if u == key[0] else cv
        w = self._ipow[i if i > j else j]
        self._iw[u] += w
        self._iw[v] += w
        self._ifrac += w
        self._update_status(u)
        self._update_status(v)
        self._recover()

    def handle_delete(self, u: int, v: int) -> None:
        """Account for edge (u, v) just deleted from the underlying graph."""
        assert not self._dirty
        self._t += 1
        key = (u, v) if u < v else (v, u)
        c1 = self._cells.pop(key)
        c2 = self._ctwin[c1]
        self._unlink(c1)
        self._unlink(c2)
        self._free.append(c1)
        self._free.append(c2)
        self.ledger.list_relink_ops += 2
        i = self.level[u]
        j = self.level[v]
        w = self._ipow[i if i > j else j]
        self._iw[u] -= w
        self._iw[v] -= w
        self._ifrac -= w
        self._update_status(u)
        self._update_status(v)
        self._recover()

    def _recover(self) -> None:
        dirty = self._dirty
        if not dirty:
            return
        L = self.params.L
        budget = (_GUARD_FACTOR * self._t * max(L, 1) / self.params.epsilon
                  + 10.0 * self._t + 1000.0)
        while dirty:
            v = next(iter(dirty))
            self.fix(v)
            if self._fix_calls + self.ledger.edge_weight_changes > budget:
                raise RuntimeError("recover loop exceeded its work budget")

    def fix(self, v: int) -> None:
        """Move one dirty node one level towards a legal weight."""
        assert v in self._dirty, "fix() on a clean node"
        self._fix_calls += 1
        if self._iw[v] > self._ab:
            self.move_up(v)
        else:
            assert self._iw[v] < self._one and self.level[v] > 0
            self.move_down(v)

    def move_up(self, v: int) -> None:
        k = self.level[v]
        assert k < self.params.L
        self.level[v] = k + 1
        iw = self._iw
        cnode = self._cnode
        cnext = self._cnext
        ctwin = self._ctwin
        delta = self._idelta[k]
        sent = self._combined[v]
        ledger = self.ledger
        changes = 0
        cur = cnext[sent]
        while cur != sent:
            nxt = cnext[cur]
            u = cnode[cur]
            # u sat at level <= k: the edge weight drops and v's cell moves
            # from u's combined list (or u's level-k list) to u's level-(k+1) list
            cv = ctwin[cur]
            self._unlink(cv)
            self._link_tail(self._upper_sent(u, k + 1), cv)
            ledger.list_relink_ops += 1
            iw[v] += delta
            iw[u] += delta
            self._ifrac += delta
            changes += 1
            self._update_status(u)
            cur = nxt
        # absorb the neighbors sitting exactly at level k+1 in one splice
        up = self._upper[v][k + 1]
        if up >= 0 and cnext[up] != up:
            first = cnext[up]
            last = self._cprev[up]
            tail = self._cprev[sent]
            cnext[tail] = first
            self._cprev[first] = tail
            cnext[last] = sent
            self._cprev[sent] = last
            cnext[up] = up
            self._cprev[up] = up
            ledger.list_relink_ops += 1
        ledger.edge_weight_changes += changes
        ledger.level_moves_up += 1
        self._update_status(v)

    def move_down(self, v: int) -> None:
        k = self.level[v]
        assert k >= 1
        self.level[v] = k - 1
        level = self.level
        iw = self._iw
        cnode = self._cnode
        cnext = self._cnext
        ctwin = self._ctwin
        delta = -self._idelta[k - 1]
        sent = self._combined[v]
        ledger = self.ledger
        changes = 0
        cur = cnext[sent]
        while cur != sent:
            nxt = cnext[cur]
            u = cnode[cur]
            lu = level[u]
            if lu == k:
                # u is now strictly above v: leave v's combined list
                self._unlink(cur)
                self._link_tail(self._upper_sent(v, k), cur)
                ledger.list_relink_ops += 1
            else:
                # edge weight rises; v's cell relocates inside u's lists
                cv = ctwin[cur]
                self._unlink(cv)
                if lu == k - 1:
                    self._link_tail(self._combined[u], cv)
                else:
                    self._link_tail(self._upper_sent(u, k - 1), cv)
                ledger.list_relink_ops += 1
                iw[u] += delta
                iw[v] += delta
                self._ifrac += delta
                changes += 1
                self._update_status(u)
            cur = nxt
        ledger.edge_weight_changes += changes
        ledger.level_moves_down += 1
        self._update_status(v)

    def update_status(self, u: int) -> None:
        """Re-derive u's dirty bit and cover membership from its weight."""
        self._update_status(u)

    # ---- queries (quiescent only) -----------------------------------------

    def weight_of(self, v: int) -> float:
        """Current W_v as a float (the bookkeeping itself is exact)."""
        return self._iw[v] / self._one_f

    def weights(self) -> np.ndarray:
        one = self._one
        return np.fromiter((w / one for w in self._iw), dtype=float, count=self.n)

    def in_cover(self, v: int) -> bool:
        assert not self._dirty
        return self._iw[v] >= self._one

    def cover_size(self) -> int:
        assert not self._dirty
        return len(self._cover)

    def enumerate_cover(self) -> Iterator[int]:
        assert not self._dirty
        return iter(self._cover)

    def fractional_value(self) -> float:
        """Value of the implicit fractional matching, sum(w)/(alpha*beta)."""
        assert not self._dirty
        return self._ifrac / self._ab

    def duality_holds(self) -> bool:
        """cover_size <= 2*alpha*beta*|M_f|, as an exact integer comparison."""
        return len(self._cover) * self._one <= 2 * self._ifrac

    @property
    def updates_handled(self) -> int:
        return self._t

    # ---- auditing ----------------------------------------------------------

    def recomputed_weights(self, g: DynamicGraph) -> np.ndarray:
        eu, ev = g.edge_arrays()
        lev = np.asarray(self.level, dtype=np.int64)
        pow_f = self.params.beta ** -np.arange(self.params.L + 1, dtype=float)
        w_edges = pow_f[np.maximum(lev[eu], lev[ev])] if len(eu) else np.zeros(0)
        ws = np.bincount(eu, weights=w_edges, minlength=self.n)
        ws += np.bincount(ev, weights=w_edges, minlength=self.n)
        return ws

    def audit(self, g: DynamicGraph, deep: bool = True) -> AuditReport:
        """Recompute everything from scratch and verify the maintained state.

        The shallow pass is vectorized and cheap enough to run after every
        update; deep adds the per-level weight chain and a full walk of the
        linked cells.
        """
        rep = AuditReport()
        if self._dirty:
            rep.fail("audit on a non-quiescent structure")
            return rep
        n = self.n
        one = self._one
        ab_int = self._ab
        iw = self._iw
        lev = np.asarray(self.level, dtype=np.int64)
        w_m = self.weights()
        eu, ev = g.edge_arrays()
        pow_f = self.params.beta ** -np.arange(self.params.L + 1, dtype=float)
        if len(eu):
            w_edges = pow_f[np.maximum(lev[eu], lev[ev])]
        else:
            w_edges = np.zeros(0)
        w_s = np.bincount(eu, weights=w_edges, minlength=n)
        w_s += np.bincount(ev, weights=w_edges, minlength=n)

        drift = np.abs(w_m - w_s) > _REL_TOL * np.maximum(1.0, np.abs(w_s))
        if drift.any():
            v = int(np.argmax(drift))
            rep.fail(f"weight mismatch at node {v}: kept {w_m[v]!r}, "
                     f"recomputed {w_s[v]!r}")
        # weight-range invariant and cover membership, exactly
        ab_f = self.params.alpha * self.params.beta
        suspect = ((w_m > ab_f * (1 - _REL_TOL)) |
                   ((w_m < 1 + _REL_TOL) & (lev > 0)))
        for v in np.nonzero(suspect)[0]:
            v = int(v)
            if iw[v] > ab_int or (iw[v] < one and self.level[v] > 0):
                rep.fail(f"weight-range invariant violated at node {v}: "
                         f"W={w_m[v]!r} level={self.level[v]}")
                break
        covered = w_m >= 1.0
        for v in np.nonzero(np.abs(w_m - 1.0) <= _REL_TOL)[0]:
            covered[int(v)] = iw[int(v)] >= one
        if len(eu) and not bool(np.all(covered[eu] | covered[ev])):
            idx = int(np.argmin(covered[eu] | covered[ev]))
            rep.fail(f"edge ({int(eu[idx])},{int(ev[idx])}) not covered")
        if len(self._cover) != int(covered.sum()) or not all(
                covered[v] for v in self._cover):
            rep.fail("cover registry out of sync with weights")
        scratch_sum = float(w_edges.sum())
        frac_kept = self._ifrac / self._one_f
        if abs(frac_kept - scratch_sum) > _REL_TOL * max(1.0, scratch_sum):
            rep.fail(f"fractional accumulator drifted: kept {frac_kept!r}, "
                     f"recomputed {scratch_sum!r}")
        if not self.duality_holds():
            rep.fail(f"cover size {len(self._cover)} exceeds the duality bound "
                     f"2*alpha*beta*|M_f| = {2 * frac_kept!r}")
        if self._cells.keys() != g.edge_keys():
            rep.fail("partition edge set differs from the graph edge set")
        if not deep or not rep.ok:
            return rep

        # degree-below bound: |N_v(0, level(v))| <= alpha * beta^(level(v)+1)
        if len(eu):
            low_u = (lev[ev] <= lev[eu]).astype(np.float64)
            low_v = (lev[eu] <= lev[ev]).astype(np.float64)
            d_low = np.bincount(eu, weights=low_u, minlength=n)
            d_low += np.bincount(ev, weights=low_v, minlength=n)
            cap = self.params.alpha * self.params.beta ** (lev + 1)
            if not bool(np.all(d_low <= cap * (1 + 1e-12))):
                v = int(np.argmax(d_low - cap))
                rep.fail(f"node {v} has {int(d_low[v])} neighbors at or below "
                         f"its level, cap {cap[v]!r}")
        # hypothetical weights W_v(i): decreasing in i, ratio <= beta, W_v(L) <= alpha
        L = self.params.L
        if len(eu):
            du = np.concatenate([eu, ev])
            dv = np.concatenate([ev, eu])
            lev_dv = lev[dv]
            prev = None
            for i in range(L, -1, -1):
                wi = np.bincount(du, weights=pow_f[np.maximum(lev_dv, i)],
                                 minlength=n)
                if i == L and not bool(np.all(wi <= self.params.alpha
                                              * (1 + _REL_TOL))):
                    rep.fail("top-level hypothetical weight exceeds alpha")
                if prev is not None:
                    if not bool(np.all(wi >= prev * (1 - _REL_TOL))):
                        rep.fail(f"hypothetical weights not monotone at level {i}")
                    if not bool(np.all(wi <= self.params.beta * prev
                                       * (1 + _REL_TOL))):
                        rep.fail(f"hypothetical weight ratio above beta at level {i}")
                prev = wi

        self._audit_lists(rep)
        return rep

    def _audit_lists(self, rep: AuditReport) -> None:
        cnode = self._cnode
        cnext = self._cnext
        cprev = self._cprev
        seen: dict = {}
        for v in range(self.n):
            lv = self.level[v]
            walks = [(self._combined[v], True, 0)]
            for i, s in enumerate(self._upper[v]):
                if s >= 0:
                    walks.append((s, False, i))
            for sent, is_combined, i in walks:
                cur = cnext[sent]
                while cur != sent:
                    if cnext[cprev[cur]] != cur or cprev[cnext[cur]] != cur:
                        rep.fail(f"broken links around cell {cur}")
                        return
                    u = cnode[cur]
                    if is_combined:
                        if self.level[u] > lv:
                            rep.fail(f"node {u} at level {self.level[u]} found in "
                                     f"{v}'s combined list (level {lv})")
                    else:
                        if not (i > lv and self.level[u] == i):
                            rep.fail(f"node {u} misplaced in {v}'s level-{i} list")
                    key = (u, v) if u < v else (v, u)
                    seen[key] = seen.get(key, 0) + 1
                    cur = cnext[cur]
        if any(count != 2 for count in seen.values()) or seen.keys() != self._cells.keys():
            rep.fail("linked cells disagree with the edge handle map")
        for key, c in self._cells.items():
            if cnode[c] != key[0] or cnode[self._ctwin[c]] != key[1]:
                rep.fail(f"handle for edge {key} resolves to wrong cells")
                return
