"""Experiment runner: replays a stream through one structure, auditing and
sampling exact ratios on a cadence, and emits one CSV row per update."""

from __future__ import annotations

import io
import time
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from . import oracle
from .degmatch import verify_short_paths
from .graph import DynamicGraph
from .levelcover import LevelPartition
from .matchers import PhasedMatcher, SqrtNMatcher, WorstCaseMatcher
from .streams import UpdateStream

CSV_HEADER = ("idx,op,u,v,size,frac,weight_changes,level_moves,refills,"
              "kappa_churn,ops,oracle,ratio,ns")

EXIT_OK = 0
EXIT_AUDIT_FAILURE = 2
EXIT_ORACLE_CAP = 3

ALGORITHMS = ("cover", "sqrtn", "phased", "worstcase")


@dataclass
class RunConfig:
    algorithm: str
    epsilon: float
    stream: UpdateStream
    audit_every: int = 0  # 0 = auto: 1 for T <= 2000, else 100
    oracle_every: int = 0  # 0 = never
    seed: int = 0
    no_timing: bool = False


@dataclass
class RunResult:
    csv_text: str
    exit_status: int
    diagnostics: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.exit_status == EXIT_OK


def _auto_audit_every(cfg: RunConfig) -> int:
    if cfg.audit_every > 0:
        return cfg.audit_every
    return 1 if len(cfg.stream) <= 2000 else 100


def _fmt(x: float) -> str:
    return repr(float(x))


def run_experiment(cfg: RunConfig) -> RunResult:
    if cfg.algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {cfg.algorithm!r}")
    stream = cfg.stream
    g = DynamicGraph(stream.n)
    partition: Optional[LevelPartition] = None
    matcher = None
    if cfg.algorithm == "cover":
        partition = LevelPartition(stream.n, cfg.epsilon)
    elif cfg.algorithm == "sqrtn":
        matcher = SqrtNMatcher(g, cfg.epsilon)
    elif cfg.algorithm == "phased":
        matcher = PhasedMatcher(g, cfg.epsilon)
    else:
        matcher = WorstCaseMatcher(g, cfg.epsilon)

    audit_every = _auto_audit_every(cfg)
    diagnostics: List[str] = []
    out = io.StringIO()
    out.write(CSV_HEADER + "\n")
    status = EXIT_OK

    if cfg.oracle_every > 0:
        cap = 24 if cfg.algorithm == "cover" else 500
        if stream.n > cap:
            return RunResult("", EXIT_ORACLE_CAP,
                             [f"oracle sampling needs n <= {cap} for "
                              f"{cfg.algorithm}, stream has n={stream.n}"])

    for idx, (op, u, v) in enumerate(stream.events, start=1):
        t0 = time.perf_counter_ns()
        if op == "+":
            g.insert_edge(u, v)
        else:
            g.delete_edge(u, v)
        if partition is not None:
            led0 = partition.ledger.snapshot()
            if op == "+":
                partition.handle_insert(u, v)
            else:
                partition.handle_delete(u, v)
            led1 = partition.ledger.snapshot()
            ops = sum(b - a for a, b in zip(led0, led1))
            size = partition.cover_size()
            frac = _fmt(partition.fractional_value())
            weight_changes = str(partition.ledger.edge_weight_changes)
            level_moves = str(partition.ledger.level_moves)
            refills = ""
            churn = ""
        else:
            matcher.update(op, u, v)
            ops = matcher.last_ops
            size = matcher.matching_size()
            frac = ""
            weight_changes = ""
            level_moves = ""
            if cfg.algorithm == "worstcase":
                kernels = (matcher.fg_kernel, matcher.bg_kernel)
            else:
                kernels = (matcher.kernel,)
            refills = str(sum(k.refill_calls for k in kernels))
            churn = str(sum(k.kappa_inserts + k.kappa_deletes for k in kernels))
        elapsed = time.perf_counter_ns() - t0

        oracle_field = ""
        ratio_field = ""
        if cfg.oracle_every > 0 and idx % cfg.oracle_every == 0:
            try:
                exact, bound = _sample_oracle(cfg, g, partition, matcher)
            except oracle.OracleCapError as exc:
                diagnostics.append(f"update {idx}: {exc}")
                return RunResult(out.getvalue(), EXIT_ORACLE_CAP, diagnostics)
            oracle_field = str(exact)
            if cfg.algorithm == "cover":
                ratio_field = _fmt(size / exact) if exact else ""
                violated = size > bound * exact
            else:
                ratio_field = _fmt(exact / size) if size else ("" if not exact
                                                               else "inf")
                violated = exact > bound * size
            if violated:
                diagnostics.append(
                    f"update {idx}: ratio bound violated "
                    f"(structure {size}, exact {exact}, bound factor {bound})")
                status = EXIT_AUDIT_FAILURE

        if idx % audit_every == 0 and status == EXIT_OK:
            failures = _run_audits(cfg, g, partition, matcher)
            if failures:
                diagnostics.extend(f"update {idx}: {msg}" for msg in failures)
                status = EXIT_AUDIT_FAILURE

        ns_field = "" if cfg.no_timing else str(elapsed)
        out.write(f"{idx},{op},{u},{v},{size},{frac},{weight_changes},"
                  f"{level_moves},{refills},{churn},{ops},{oracle_field},"
                  f"{ratio_field},{ns_field}\n")
        if status != EXIT_OK:
            break

    return RunResult(out.getvalue(), status, diagnostics)


def _sample_oracle(cfg: RunConfig, g: DynamicGraph,
                   partition: Optional[LevelPartition],
                   matcher) -> Tuple[int, float]:
    """Exact value plus the approximation factor the structure promises."""
    eps = cfg.epsilon
    if cfg.algorithm == "cover":
        exact = oracle.min_vertex_cover_exact(g).value
        return exact, 2.0 * (1.0 + 3.0 * eps) * (1.0 + eps)
    exact = oracle.max_matching_exact(g).value
    bound, _ = matcher.guarantee()
    return exact, bound


def _run_audits(cfg: RunConfig, g: DynamicGraph,
                partition: Optional[LevelPartition], matcher) -> List[str]:
    failures: List[str] = []
    if partition is not None:
        rep = partition.audit(g, deep=True)
        failures.extend(rep.failures)
        return failures
    if cfg.algorithm == "worstcase":
        rep = matcher.fg_kernel.audit(g, eps_eff=matcher.fg_kernel.eps
                                      + matcher.fg_kernel.lam)
        failures.extend(f"foreground kernel: {m}" for m in rep.failures)
        rep = matcher.bg_kernel.audit(matcher.shadow,
                                      eps_eff=matcher.bg_kernel.eps
                                      + matcher.bg_kernel.lam)
        failures.extend(f"background kernel: {m}" for m in rep.failures)
        if verify_short_paths(matcher.fg_match, matcher.fg_kernel, 1):
            failures.append("foreground matching is not maximal")
        if verify_short_paths(matcher.bg_match, matcher.bg_kernel, 1):
            failures.append("background matching is not maximal")
        if not set(matcher.shadow.edge_keys()) <= set(g.edge_keys()):
            failures.append("background edge set is not a subset of the graph")
    else:
        eps_eff = cfg.epsilon
        rep = matcher.kernel.audit(g, eps_eff=eps_eff)
        failures.extend(rep.failures)
        path = verify_short_paths(matcher.matching, matcher.kernel, 5)
        if path:
            failures.append(f"augmenting path shorter than 5: {path}")
    return failures
