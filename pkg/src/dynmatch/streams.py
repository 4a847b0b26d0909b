"""Update streams: the text format, validation, and the three generators."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

Event = Tuple[str, int, int]  # ('+'|'-', u, v)


@dataclass
class UpdateStream:
    """Replay-valid sequence of edge insertions and deletions on n nodes."""

    n: int
    events: List[Event] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.events)


class StreamFormatError(ValueError):
    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason


def parse_stream(text: str) -> UpdateStream:
    """Parse and replay-validate the stream text format.

    Line 1: "n <N>".  Then one event per line, "+ u v" or "- u v".  Lines
    starting with '#' and blank lines are ignored.
    """
    n: Optional[int] = None
    events: List[Event] = []
    present: set = set()
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 2 or parts[0] != "n":
                raise StreamFormatError(line_no, "expected header 'n <N>'")
            try:
                n = int(parts[1])
            except ValueError:
                raise StreamFormatError(line_no, f"bad node count {parts[1]!r}")
            if n < 1:
                raise StreamFormatError(line_no, "node count must be positive")
            continue
        if len(parts) != 3 or parts[0] not in "+-":
            raise StreamFormatError(line_no, f"malformed event {line!r}")
        op = parts[0]
        try:
            u, v = int(parts[1]), int(parts[2])
        except ValueError:
            raise StreamFormatError(line_no, f"non-integer endpoint in {line!r}")
        if u == v:
            raise StreamFormatError(line_no, f"self-loop on node {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise StreamFormatError(line_no, f"endpoint out of range in {line!r}")
        key = (u, v) if u < v else (v, u)
        if op == "+":
            if key in present:
                raise StreamFormatError(line_no, f"inserting present edge {key}")
            present.add(key)
        else:
            if key not in present:
                raise StreamFormatError(line_no, f"deleting absent edge {key}")
            present.remove(key)
        events.append((op, u, v))
    if n is None:
        raise StreamFormatError(0, "empty stream: missing 'n <N>' header")
    return UpdateStream(n=n, events=events)


def format_stream(stream: UpdateStream) -> str:
    lines = [f"n {stream.n}"]
    lines.extend(f"{op} {u} {v}" for (op, u, v) in stream.events)
    return "\n".join(lines) + "\n"


class _EdgePool:
    """Current edge set with O(1) uniform sampling of present edges."""

    def __init__(self) -> None:
        self.edges: List[Tuple[int, int]] = []
        self.pos: Dict[Tuple[int, int], int] = {}

    def __len__(self) -> int:
        return len(self.edges)

    def __contains__(self, key: Tuple[int, int]) -> bool:
        return key in self.pos

    def add(self, key: Tuple[int, int]) -> None:
        self.pos[key] = len(self.edges)
        self.edges.append(key)

    def remove(self, key: Tuple[int, int]) -> None:
        i = self.pos.pop(key)
        last = self.edges.pop()
        if i < len(self.edges):
            self.edges[i] = last
            self.pos[last] = i

    def sample(self, rng: random.Random) -> Tuple[int, int]:
        return self.edges[rng.randrange(len(self.edges))]


def _sample_absent(rng: random.Random, n: int, pool: _EdgePool) -> Optional[Tuple[int, int]]:
    max_edges = n * (n - 1) // 2
    if len(pool) >= max_edges:
        return None
    for _ in range(30):
        u = rng.randrange(n)
        v = rng.randrange(n)
        if u == v:
            continue
        key = (u, v) if u < v else (v, u)
        if key not in pool:
            return key
    # dense fallback: enumerate the complement
    absent = [(u, v) for u in range(n) for v in range(u + 1, n)
              if (u, v) not in pool]
    return absent[rng.randrange(len(absent))] if absent else None


def generate_stream(kind: str, n: int, T: int, params: Optional[dict] = None,
                    seed: int = 0) -> UpdateStream:
    """Deterministic replay-valid stream generator.

    kinds:
      random          -- insert with probability p (default 0.5), else delete
                         a uniform present edge; T events.
      sliding_window  -- T inserted edges; once the window of size ``window``
                         is full, each insert is preceded by deleting the
                         oldest edge (so the stream has more than T events).
      adversarial     -- co-simulates the structure named in params["alg"]
                         and preferentially deletes its matched / kernel /
                         high-level edges; T events.
    """
    params = dict(params or {})
    rng = random.Random(seed)
    if T < 1:
        raise ValueError("T must be at least 1")
    if n < 2:
        raise ValueError("generators need at least 2 nodes")
    if kind == "random":
        return _gen_random(rng, n, T, params)
    if kind == "sliding_window":
        return _gen_sliding(rng, n, T, params)
    if kind == "adversarial":
        return _gen_adversarial(rng, n, T, params)
    raise ValueError(f"unknown stream kind {kind!r}")


def _gen_random(rng: random.Random, n: int, T: int, params: dict) -> UpdateStream:
    p = float(params.get("p", 0.5))
    pool = _EdgePool()
    events: List[Event] = []
    for _ in range(T):
        do_insert = (rng.random() < p or not len(pool))
        if do_insert:
            key = _sample_absent(rng, n, pool)
            if key is None:
                key = pool.sample(rng)
                pool.remove(key)
                events.append(("-", key[0], key[1]))
                continue
            pool.add(key)
            events.append(("+", key[0], key[1]))
        else:
            key = pool.sample(rng)
            pool.remove(key)
            events.append(("-", key[0], key[1]))
    return UpdateStream(n=n, events=events)


def _gen_sliding(rng: random.Random, n: int, T: int, params: dict) -> UpdateStream:
    window = int(params.get("window", 10))
    if window < 1:
        raise ValueError("window must be positive")
    pool = _EdgePool()
    fifo: List[Tuple[int, int]] = []
    events: List[Event] = []
    for _ in range(T):
        if len(fifo) >= window:
            oldest = fifo.pop(0)
            pool.remove(oldest)
            events.append(("-", oldest[0], oldest[1]))
        key = _sample_absent(rng, n, pool)
        if key is None:
            continue
        pool.add(key)
        fifo.append(key)
        events.append(("+", key[0], key[1]))
    return UpdateStream(n=n, events=events)


def _gen_adversarial(rng: random.Random, n: int, T: int, params: dict) -> UpdateStream:
    from .graph import DynamicGraph
    from .levelcover import LevelPartition
    from .matchers import PhasedMatcher, SqrtNMatcher, WorstCaseMatcher

    alg = params.get("alg", "sqrtn")
    eps = float(params.get("eps", 0.3))
    p_delete = float(params.get("p_delete", 0.6))
    warmup = int(params.get("warmup", min(T // 2, 3 * n)))
    g = DynamicGraph(n)
    partition = None
    matcher = None
    if alg == "cover":
        partition = LevelPartition(n, eps)
    elif alg == "sqrtn":
        matcher = SqrtNMatcher(g, eps)
    elif alg == "phased":
        matcher = PhasedMatcher(g, eps)
    elif alg == "worstcase":
        matcher = WorstCaseMatcher(g, eps)
    else:
        raise ValueError(f"unknown adversarial target {alg!r}")

    pool = _EdgePool()
    events: List[Event] = []

    def apply(op: str, u: int, v: int) -> None:
        key = (u, v) if u < v else (v, u)
        if op == "+":
            g.insert_edge(u, v)
            pool.add(key)
        else:
            g.delete_edge(u, v)
            pool.remove(key)
        if partition is not None:
            (partition.handle_insert if op == "+" else partition.handle_delete)(u, v)
        else:
            matcher.update(op, u, v)
        events.append((op, u, v))

    def juicy_targets() -> List[Tuple[int, int]]:
        if partition is not None:
            lifted = [k for k in pool.edges
                      if partition.level[k[0]] > 0 or partition.level[k[1]] > 0]
            return lifted
        kernel = matcher.kernel if not isinstance(matcher, WorstCaseMatcher) \
            else matcher.fg_kernel
        match_state = matcher.matching if not isinstance(matcher, WorstCaseMatcher) \
            else matcher.fg_match
        matched = [k for k in match_state.matched if k in pool]
        if matched:
            return matched
        return [k for k in kernel.kernel_edges if k in pool]

    for step in range(T):
        if step < warmup or not len(pool):
            key = _sample_absent(rng, n, pool)
            if key is None:
                key = pool.sample(rng)
                apply("-", key[0], key[1])
            else:
                apply("+", key[0], key[1])
            continue
        if rng.random() < p_delete:
            targets = juicy_targets()
            key = targets[rng.randrange(len(targets))] if targets \
                else pool.sample(rng)
            apply("-", key[0], key[1])
        else:
            key = _sample_absent(rng, n, pool)
            if key is None:
                key = pool.sample(rng)
                apply("-", key[0], key[1])
            else:
                apply("+", key[0], key[1])
    return UpdateStream(n=n, events=events)
