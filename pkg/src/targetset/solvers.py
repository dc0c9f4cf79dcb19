"""Target set heuristics for the Linear Threshold model.

``mts``         subtractive heuristic with a limbo set for deprecated nodes
``tss``         its predecessor on undirected graphs, which prunes deprecated nodes
``greedy``      additive baseline: repeatedly seed the node of largest residual out-degree
``tip_decomp``  prune nodes of least degree surplus until only a core remains

Selection uses binary heaps with lazy invalidation: a heap entry records the
values it was keyed on and is discarded on pop when these no longer match.
The deprecation metric k/(delta(delta+1)) is compared by integer
cross-multiplication so that ties are detected exactly.
"""

from __future__ import annotations

import heapq
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .activation import is_target_set
from .graph import Digraph

TIE_POLICIES = ("minid", "random")


class SolverError(ValueError):
    pass


class InvariantError(RuntimeError):
    """A property the algorithm guarantees was observed to fail."""


@dataclass(frozen=True)
class TraceRow:
    iteration: int
    node: int
    case: int
    u_size: int
    limbo_size: int
    s_size: int


@dataclass
class TargetSetResult:
    algorithm: str
    seeds: frozenset[int]
    iterations: int
    case_counts: dict[int, int]
    wall_time: float
    selection: list[int] = field(default_factory=list)
    trace: list[TraceRow] | None = None

    @property
    def size(self) -> int:
        return len(self.seeds)


class _Ratio:
    """Heap key for k/(d(d+1)); "smaller" means a larger ratio."""

    __slots__ = ("num", "den")

    def __init__(self, k: int, d: int):
        self.num = k
        self.den = d * (d + 1)

    def __lt__(self, other: "_Ratio") -> bool:
        return self.num * other.den > other.num * self.den

    def __eq__(self, other: object) -> bool:
        return self.num * other.den == other.num * self.den  # type: ignore[attr-defined]

    def __repr__(self) -> str:
        return f"{self.num}/{self.den}"


def _ranks(n: int, tie: str, seed: int | None) -> list[int]:
    """Tie-break key per node; the smallest key wins a tie."""
    if tie == "minid":
        return list(range(n))
    if tie == "random":
        perm = list(range(n))
        random.Random(seed).shuffle(perm)
        rank = [0] * n
        for r, v in enumerate(perm):
            rank[v] = r
        return rank
    raise SolverError(f"tie policy must be one of {TIE_POLICIES}, got {tie!r}")


def _check_thresholds(g: Digraph, t: Sequence[int]) -> list[int]:
    t = list(t)
    if len(t) != g.n:
        raise SolverError(f"got {len(t)} thresholds for {g.n} nodes")
    if any(x < 0 for x in t):
        raise SolverError("thresholds must be non-negative")
    return t


def _require_bidirected(g: Digraph, name: str) -> None:
    if not g.bidirected:
        raise SolverError(f"{name} is defined on undirected graphs; input is not bidirected")


class _Selector:
    """The three candidate pools shared by mts and tss.

    zero:  nodes in U with k = 0
    short: nodes in U - L with delta < k
    pq:    nodes in U - L keyed by k/(delta(delta+1))
    """

    def __init__(self, k: list[int], delta: list[int], rank: list[int], in_u: list[bool], in_l: list[bool]):
        self.k, self.delta, self.rank = k, delta, rank
        self.in_u, self.in_l = in_u, in_l
        n = len(k)
        self.zero = [(rank[v], v) for v in range(n) if k[v] == 0]
        self.short = [(rank[v], v) for v in range(n) if k[v] > 0 and delta[v] < k[v]]
        self.pq = [
            (_Ratio(k[v], delta[v]), rank[v], v, k[v], delta[v])
            for v in range(n)
            if 0 < k[v] <= delta[v]
        ]
        heapq.heapify(self.zero)
        heapq.heapify(self.short)
        heapq.heapify(self.pq)

    def touch(self, u: int) -> None:
        """Re-file ``u`` after k[u] or delta[u] changed."""
        k, d = self.k[u], self.delta[u]
        if k == 0:
            heapq.heappush(self.zero, (self.rank[u], u))
        elif self.in_l[u]:
            return
        elif d < k:
            heapq.heappush(self.short, (self.rank[u], u))
        else:
            heapq.heappush(self.pq, (_Ratio(k, d), self.rank[u], u, k, d))

    def pop_zero(self) -> int | None:
        # k never increases, so a zero entry stays valid while its node is in U
        while self.zero:
            _, v = heapq.heappop(self.zero)
            if self.in_u[v]:
                return v
        return None

    def pop_short(self) -> int | None:
        while self.short:
            _, v = heapq.heappop(self.short)
            if self.in_u[v] and not self.in_l[v] and self.delta[v] < self.k[v]:
                return v
        return None

    def pop_max_ratio(self) -> int | None:
        while self.pq:
            _, _, v, k, d = heapq.heappop(self.pq)
            if self.in_u[v] and not self.in_l[v] and self.k[v] == k and self.delta[v] == d:
                return v
        return None


def _potential(u_minus_l: Sequence[int], k: Sequence[int], delta: Sequence[int]) -> Fraction:
    return sum((min(Fraction(1), Fraction(k[v], delta[v] + 1)) for v in u_minus_l), Fraction(0))


def mts(
    g: Digraph,
    t: Sequence[int],
    tie: str = "minid",
    seed: int | None = None,
    *,
    early_exit: bool = False,
    record_trace: bool = False,
    check: bool = True,
    debug: bool = False,
) -> TargetSetResult:
    """Minimum target set heuristic with limbo (deprecated but not pruned) nodes.

    Each iteration picks, in order of precedence:

    1. a node of U with residual threshold 0, which is removed and whose
       influence lowers the residual threshold of its out-neighbors in U;
    2. a node of U - L with fewer usable in-neighbors than its residual
       threshold, which joins the target set;
    3. otherwise the node of U - L maximizing k/(delta(delta+1)), which moves
       to the limbo set L. It stays in U so that its later activation still
       counts for its out-neighbors, but they stop relying on it (delta drops).

    With ``check`` the result is verified to be a target set, the iteration
    count is held to 2n and, on bidirected graphs, the size to the
    sum-of-min(1, t/(d+1)) bound.  ``debug`` additionally recomputes the
    bookkeeping after every iteration.  ``early_exit`` stops once U - L is
    empty, which leaves S unchanged.
    """
    start = time.perf_counter()
    n = g.n
    t = _check_thresholds(g, t)
    rank = _ranks(n, tie, seed)
    k = list(t)
    delta = [len(a) for a in g.in_adj]
    in_u = [True] * n
    in_l = [False] * n
    sel = _Selector(k, delta, rank, in_u, in_l)
    out_adj = g.out_adj

    seeds: list[int] = []
    selection: list[int] = []
    counts = {1: 0, 2: 0, 3: 0}
    trace: list[TraceRow] | None = [] if record_trace else None
    remaining = n  # |U|
    free = n  # |U - L|
    it = 0
    potential = _potential(range(n), k, delta) if debug and g.bidirected else None

    while remaining:
        if early_exit and free == 0:
            break
        it += 1
        v = sel.pop_zero()
        if v is not None:
            case = 1
        else:
            v = sel.pop_short()
            if v is not None:
                case = 2
            else:
                v = sel.pop_max_ratio()
                case = 3
                if v is None:
                    raise InvariantError("no selectable node while U is non-empty")
        if trace is not None:
            trace.append(TraceRow(it, v, case, remaining, remaining - free, len(seeds)))
        counts[case] += 1
        selection.append(v)
        was_limbo = in_l[v]

        if case == 1:
            for u in out_adj[v]:
                if in_u[u]:
                    if k[u] > 0:
                        k[u] -= 1
                    if not was_limbo:
                        delta[u] -= 1
                    sel.touch(u)
            in_u[v] = False
            remaining -= 1
            if not was_limbo:
                free -= 1
        elif case == 2:
            seeds.append(v)
            for u in out_adj[v]:
                if in_u[u]:
                    k[u] -= 1
                    delta[u] -= 1
                    sel.touch(u)
            in_u[v] = False
            remaining -= 1
            free -= 1
        else:
            if debug and not 1 <= k[v] <= delta[v]:
                raise InvariantError(f"case 3 on node {v} with k={k[v]}, delta={delta[v]}")
            for u in out_adj[v]:
                if in_u[u]:
                    delta[u] -= 1
                    sel.touch(u)
            in_l[v] = True
            free -= 1

        if debug:
            _check_state(g, t, k, delta, in_u, in_l, seeds, remaining, free)
            if potential is not None:
                nxt = _potential([u for u in range(n) if in_u[u] and not in_l[u]], k, delta)
                if potential < nxt + (1 if case == 2 else 0):
                    raise InvariantError(f"potential rose at iteration {it}")
                potential = nxt

    result = TargetSetResult(
        "mts", frozenset(seeds), it, counts, time.perf_counter() - start, selection, trace
    )
    if check:
        if it > 2 * n:
            raise InvariantError(f"mts used {it} iterations on {n} nodes")
        if not is_target_set(g, t, seeds):
            raise InvariantError("mts returned a set that does not activate the graph")
        if g.bidirected:
            from .analysis import upper_bound_exact

            if len(seeds) > upper_bound_exact(g, t):
                raise InvariantError("mts exceeded the sum-of-min(1, t/(d+1)) bound")
    return result


def _check_state(g, t, k, delta, in_u, in_l, seeds, remaining, free) -> None:
    n = g.n
    if sum(in_u) != remaining or sum(1 for v in range(n) if in_u[v] and not in_l[v]) != free:
        raise InvariantError("U / L counters drifted")
    for u in range(n):
        if not in_u[u]:
            continue
        usable = sum(1 for w in g.in_adj[u] if in_u[w] and not in_l[w])
        if delta[u] != usable:
            raise InvariantError(f"delta({u}) = {delta[u]} but {usable} usable in-neighbors")
        if not 0 <= k[u] <= t[u]:
            raise InvariantError(f"k({u}) = {k[u]} outside [0, {t[u]}]")
    if any(in_l[v] for v in seeds):
        raise InvariantError("a limbo node entered the target set")


def tss(
    g: Digraph,
    t: Sequence[int],
    tie: str = "minid",
    seed: int | None = None,
    *,
    record_trace: bool = False,
    check: bool = True,
) -> TargetSetResult:
    """Undirected predecessor of :func:`mts`: the same three cases, but a
    deprecated (case 3) node is pruned at once and its influence is lost."""
    _require_bidirected(g, "tss")
    start = time.perf_counter()
    n = g.n
    t = _check_thresholds(g, t)
    rank = _ranks(n, tie, seed)
    k = list(t)
    delta = [len(a) for a in g.out_adj]
    in_u = [True] * n
    never = [False] * n
    sel = _Selector(k, delta, rank, in_u, never)
    adj = g.out_adj

    seeds: list[int] = []
    selection: list[int] = []
    counts = {1: 0, 2: 0, 3: 0}
    trace: list[TraceRow] | None = [] if record_trace else None
    remaining = n
    it = 0
    while remaining:
        it += 1
        v = sel.pop_zero()
        case = 1
        if v is None:
            v, case = sel.pop_short(), 2
            if v is None:
                v, case = sel.pop_max_ratio(), 3
                if v is None:
                    raise InvariantError("no selectable node while U is non-empty")
        if trace is not None:
            trace.append(TraceRow(it, v, case, remaining, 0, len(seeds)))
        counts[case] += 1
        selection.append(v)
        if case == 2:
            seeds.append(v)
        in_u[v] = False
        remaining -= 1
        for u in adj[v]:
            if in_u[u]:
                if case == 1:
                    k[u] = max(k[u] - 1, 0)
                elif case == 2:
                    k[u] -= 1
                delta[u] -= 1
                sel.touch(u)

    result = TargetSetResult(
        "tss", frozenset(seeds), it, counts, time.perf_counter() - start, selection, trace
    )
    if check and not is_target_set(g, t, seeds):
        raise InvariantError("tss returned a set that does not activate the graph")
    return result


def greedy(
    g: Digraph,
    t: Sequence[int],
    tie: str = "minid",
    seed: int | None = None,
    *,
    check: bool = True,
) -> TargetSetResult:
    """Additive baseline.

    Nodes whose residual threshold is 0 are eliminated first, passing their
    influence to surviving out-neighbors.  When none is left, the surviving
    node with most surviving out-neighbors is seeded and removed the same way.
    """
    start = time.perf_counter()
    n = g.n
    t = _check_thresholds(g, t)
    rank = _ranks(n, tie, seed)
    k = list(t)
    alive = [True] * n
    outdeg = [len(a) for a in g.out_adj]
    zero = [(rank[v], v) for v in range(n) if k[v] == 0]
    big = [(-outdeg[v], rank[v], v) for v in range(n)]
    heapq.heapify(zero)
    heapq.heapify(big)

    seeds: list[int] = []
    selection: list[int] = []
    counts = {1: 0, 2: 0}
    remaining = n
    it = 0
    while remaining:
        it += 1
        v = None
        while zero:
            _, w = heapq.heappop(zero)
            if alive[w]:
                v = w
                break
        if v is not None:
            counts[1] += 1
        else:
            while True:
                negd, _, w = heapq.heappop(big)
                if alive[w] and -negd == outdeg[w]:
                    v = w
                    break
            counts[2] += 1
            seeds.append(v)
        selection.append(v)
        alive[v] = False
        remaining -= 1
        for u in g.out_adj[v]:
            if alive[u] and k[u] > 0:
                k[u] -= 1
                if k[u] == 0:
                    heapq.heappush(zero, (rank[u], u))
        for w in g.in_adj[v]:
            if alive[w]:
                outdeg[w] -= 1
                heapq.heappush(big, (-outdeg[w], rank[w], w))

    result = TargetSetResult("greedy", frozenset(seeds), it, counts, time.perf_counter() - start, selection)
    if check and not is_target_set(g, t, seeds):
        raise InvariantError("greedy returned a set that does not activate the graph")
    return result


def tip_decomp(g: Digraph, t: Sequence[int], *, check: bool = True) -> TargetSetResult:
    """Repeatedly prune the node minimizing degree - threshold among nodes whose
    residual degree still covers their threshold (ties by smallest id).  The
    nodes that survive form the target set."""
    _require_bidirected(g, "tip_decomp")
    start = time.perf_counter()
    n = g.n
    t = _check_thresholds(g, t)
    deg = [len(a) for a in g.out_adj]
    alive = [True] * n
    heap = [(deg[v] - t[v], v) for v in range(n) if deg[v] >= t[v]]
    heapq.heapify(heap)
    selection: list[int] = []
    while heap:
        slack, v = heapq.heappop(heap)
        if not alive[v] or deg[v] - t[v] != slack:
            continue
        alive[v] = False
        selection.append(v)
        for u in g.out_adj[v]:
            if alive[u]:
                deg[u] -= 1
                if deg[u] >= t[u]:
                    heapq.heappush(heap, (deg[u] - t[u], u))
    seeds = frozenset(v for v in range(n) if alive[v])
    result = TargetSetResult(
        "tip", seeds, len(selection), {1: len(selection)}, time.perf_counter() - start, selection
    )
    if check and not is_target_set(g, t, seeds):
        raise InvariantError("tip_decomp returned a set that does not activate the graph")
    return result


SOLVERS = ("mts", "tss", "greedy", "tip")


def solve(algorithm: str, g: Digraph, t: Sequence[int], tie: str = "minid", seed: int | None = None) -> TargetSetResult:
    if algorithm == "mts":
        return mts(g, t, tie, seed)
    if algorithm == "tss":
        return tss(g, t, tie, seed)
    if algorithm == "greedy":
        return greedy(g, t, tie, seed)
    if algorithm == "tip":
        return tip_decomp(g, t)
    raise SolverError(f"unknown algorithm {algorithm!r}")
