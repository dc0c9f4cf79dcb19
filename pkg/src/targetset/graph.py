"""Directed graph container, edge-list I/O, class recognition and instance generators.

Undirected inputs are stored as bidirected digraphs: every edge becomes a pair
of opposite arcs.  Node ids are dense integers; the original labels of a loaded
file are kept in ``Digraph.labels`` so that output can be mapped back.
"""

from __future__ import annotations

import gzip
import heapq
import io
import json
import random
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Iterable, Sequence, TextIO


class GraphError(ValueError):
    """Invalid graph input or an operation applied to the wrong graph class."""


class ParseError(GraphError):
    def __init__(self, lineno: int, line: str, reason: str):
        super().__init__(f"line {lineno}: {reason}: {line!r}")
        self.lineno = lineno


@dataclass(frozen=True)
class Digraph:
    n: int
    out_adj: tuple[tuple[int, ...], ...]
    in_adj: tuple[tuple[int, ...], ...]
    bidirected: bool
    labels: tuple[int, ...] = field(default=(), compare=False)

    @classmethod
    def from_arcs(
        cls,
        n: int,
        arcs: Iterable[tuple[int, int]],
        bidirected: bool | None = None,
        labels: Sequence[int] | None = None,
    ) -> "Digraph":
        """Build a graph from an arc iterable, dropping self-loops and duplicates.

        ``bidirected=None`` detects symmetry; ``True`` requires it.
        """
        if n < 0:
            raise GraphError("negative node count")
        outs: list[set[int]] = [set() for _ in range(n)]
        for u, v in arcs:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"arc ({u}, {v}) out of range for n={n}")
            if u != v:
                outs[u].add(v)
        out_adj = tuple(tuple(sorted(s)) for s in outs)
        ins: list[list[int]] = [[] for _ in range(n)]
        for u in range(n):
            for v in out_adj[u]:
                ins[v].append(u)
        in_adj = tuple(tuple(lst) for lst in ins)
        symmetric = out_adj == in_adj
        if bidirected is None:
            bidirected = symmetric
        elif bidirected and not symmetric:
            raise GraphError("graph flagged bidirected but some arc lacks its reverse")
        if labels is None:
            labels = range(n)
        labels = tuple(labels)
        if len(labels) != n:
            raise GraphError("label map length differs from node count")
        return cls(n, out_adj, in_adj, bool(bidirected), labels)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Digraph":
        """Undirected constructor: each edge contributes both arcs."""
        arcs = []
        for u, v in edges:
            arcs.append((u, v))
            arcs.append((v, u))
        return cls.from_arcs(n, arcs, bidirected=True)

    def d_in(self, v: int) -> int:
        return len(self.in_adj[v])

    def d_out(self, v: int) -> int:
        return len(self.out_adj[v])

    def arcs(self) -> Iterable[tuple[int, int]]:
        for u, nbrs in enumerate(self.out_adj):
            for v in nbrs:
                yield u, v

    @property
    def num_arcs(self) -> int:
        return sum(len(a) for a in self.out_adj)

    @property
    def num_edges(self) -> int:
        """Edge count, with each opposite arc pair counted once on bidirected graphs."""
        m = self.num_arcs
        return m // 2 if self.bidirected else m

    def has_arc(self, u: int, v: int) -> bool:
        nbrs = self.out_adj[u]
        # adjacency tuples are sorted
        lo, hi = 0, len(nbrs)
        while lo < hi:
            mid = (lo + hi) // 2
            if nbrs[mid] < v:
                lo = mid + 1
            else:
                hi = mid
        return lo < len(nbrs) and nbrs[lo] == v

    def underlying_edges(self) -> set[tuple[int, int]]:
        return {(min(u, v), max(u, v)) for u, v in self.arcs()}

    def label(self, v: int) -> int:
        return self.labels[v]


@dataclass(frozen=True)
class LoadReport:
    lines: int
    arcs_read: int
    self_loops: int
    duplicates: int


@dataclass(frozen=True)
class GraphClassReport:
    is_dag: bool
    is_tree_underlying: bool
    is_cycle: bool
    is_clique: bool
    is_ore: bool
    is_dirac: bool


def _check_mode(mode: str) -> bool:
    if mode not in ("directed", "undirected"):
        raise GraphError(f"mode must be 'directed' or 'undirected', got {mode!r}")
    return mode == "undirected"


def parse_edge_list(text: str | TextIO, mode: str = "directed") -> tuple[Digraph, LoadReport]:
    undirected = _check_mode(mode)
    stream = io.StringIO(text) if isinstance(text, str) else text
    pairs: list[tuple[int, int]] = []
    nlines = 0
    for lineno, raw in enumerate(stream, start=1):
        nlines = lineno
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) < 2:
            raise ParseError(lineno, line, "expected two node labels")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(lineno, line, "node labels must be integers") from None
        pairs.append((u, v))
    if not pairs:
        raise GraphError("edge list contains no edges")

    labels = sorted({x for p in pairs for x in p})
    index = {lab: i for i, lab in enumerate(labels)}
    seen: set[tuple[int, int]] = set()
    loops = dups = 0
    arcs: list[tuple[int, int]] = []
    for a, b in pairs:
        u, v = index[a], index[b]
        if u == v:
            loops += 1
            continue
        new = [(u, v), (v, u)] if undirected else [(u, v)]
        if all(arc in seen for arc in new):
            dups += 1
            continue
        for arc in new:
            if arc not in seen:
                seen.add(arc)
                arcs.append(arc)
    g = Digraph.from_arcs(len(labels), arcs, bidirected=True if undirected else None, labels=labels)
    return g, LoadReport(nlines, len(pairs), loops, dups)


def load_edge_list(text: str | TextIO, mode: str = "directed") -> Digraph:
    """Parse a whitespace-separated edge list; lines starting with '#' are comments."""
    return parse_edge_list(text, mode)[0]


def dump_edge_list(g: Digraph) -> str:
    """Serialize every arc with its original labels, one arc per line."""
    lab = g.labels
    return "".join(f"{lab[u]} {lab[v]}\n" for u, v in g.arcs())


def sidecar_path(path: str | Path) -> Path:
    path = Path(path)
    return path.with_name(path.name + ".json")


def write_graph(g: Digraph, path: str | Path, meta: dict | None = None) -> None:
    path = Path(path)
    path.write_text(dump_edge_list(g))
    info = {"directed": not g.bidirected, "n": g.n, "labels": list(g.labels)}
    if meta:
        info.update(meta)
    sidecar_path(path).write_text(json.dumps(info, sort_keys=True) + "\n")


def read_graph(path: str | Path, mode: str | None = None) -> tuple[Digraph, LoadReport]:
    """Load an edge-list file.  Without an explicit mode the JSON sidecar decides,
    falling back to undirected."""
    path = Path(path)
    side = sidecar_path(path)
    if mode is None:
        mode = "undirected"
        if side.exists():
            mode = "directed" if json.loads(side.read_text()).get("directed") else "undirected"
    opener = gzip.open if path.suffix == ".gz" else open
    with opener(path, "rt") as fh:
        g, report = parse_edge_list(fh, mode)
    if side.exists():
        # isolated nodes never appear in the edge list; the sidecar restores them
        labels = json.loads(side.read_text()).get("labels")
        if labels and len(labels) > g.n:
            g = _with_label_map(g, labels)
    return g, report


def _with_label_map(g: Digraph, labels: Sequence[int]) -> Digraph:
    index = {lab: i for i, lab in enumerate(labels)}
    arcs = [(index[g.labels[u]], index[g.labels[v]]) for u, v in g.arcs()]
    return Digraph.from_arcs(len(labels), arcs, bidirected=g.bidirected or None, labels=labels)


# ---------------------------------------------------------------------------
# recognition


def is_dag(g: Digraph) -> bool:
    indeg = [len(a) for a in g.in_adj]
    queue = deque(v for v in range(g.n) if indeg[v] == 0)
    seen = 0
    while queue:
        u = queue.popleft()
        seen += 1
        for v in g.out_adj[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                queue.append(v)
    return seen == g.n


def _underlying_adj(g: Digraph) -> list[set[int]]:
    adj: list[set[int]] = [set() for _ in range(g.n)]
    for u, v in g.arcs():
        adj[u].add(v)
        adj[v].add(u)
    return adj


def _connected(adj: Sequence[set[int]]) -> bool:
    n = len(adj)
    if n == 0:
        return True
    seen = {0}
    stack = [0]
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return len(seen) == n


def is_tree_underlying(g: Digraph) -> bool:
    adj = _underlying_adj(g)
    edges = sum(len(a) for a in adj) // 2
    return g.n >= 1 and edges == g.n - 1 and _connected(adj)


def is_cycle(g: Digraph) -> bool:
    """Bidirected cycle, or a consistently oriented directed cycle, on n >= 3 nodes."""
    if g.n < 3:
        return False
    adj = _underlying_adj(g)
    if any(len(a) != 2 for a in adj) or not _connected(adj):
        return False
    if g.bidirected:
        return True
    return all(g.d_in(v) == 1 and g.d_out(v) == 1 for v in range(g.n))


def is_clique(g: Digraph) -> bool:
    return g.bidirected and all(g.d_out(v) == g.n - 1 for v in range(g.n))


def is_ore(g: Digraph) -> bool:
    if not g.bidirected:
        return False
    deg = [g.d_out(v) for v in range(g.n)]
    for u, v in combinations(range(g.n), 2):
        if not g.has_arc(u, v) and deg[u] + deg[v] < g.n:
            return False
    return True


def is_dirac(g: Digraph) -> bool:
    if not g.bidirected or g.n == 0:
        return False
    return 2 * min(g.d_out(v) for v in range(g.n)) >= g.n


def classify(g: Digraph) -> GraphClassReport:
    return GraphClassReport(
        is_dag=is_dag(g),
        is_tree_underlying=is_tree_underlying(g),
        is_cycle=is_cycle(g),
        is_clique=is_clique(g),
        is_ore=is_ore(g),
        is_dirac=is_dirac(g),
    )


# ---------------------------------------------------------------------------
# generators


def _random_tree_edges(n: int, rng: random.Random) -> list[tuple[int, int]]:
    # uniform labeled tree from a random Pruefer sequence
    if n == 1:
        return []
    if n == 2:
        return [(0, 1)]
    seq = [rng.randrange(n) for _ in range(n - 2)]
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    edges = []
    leaves = [v for v in range(n) if degree[v] == 1]
    heapq.heapify(leaves)
    for x in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, x))
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(leaves, x)
    u, v = heapq.heappop(leaves), heapq.heappop(leaves)
    edges.append((u, v))
    return edges


def _need(cond: bool, msg: str) -> None:
    if not cond:
        raise GraphError(msg)


def gen_tree(n: int, seed: int | None = None) -> Digraph:
    _need(n >= 1, "tree needs n >= 1")
    return Digraph.from_edges(n, _random_tree_edges(n, random.Random(seed)))


def gen_path(n: int) -> Digraph:
    _need(n >= 1, "path needs n >= 1")
    return Digraph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def gen_star(n: int) -> Digraph:
    """Node 0 is the center, 1..n-1 the leaves."""
    _need(n >= 2, "star needs n >= 2")
    return Digraph.from_edges(n, [(0, i) for i in range(1, n)])


def gen_cycle(n: int, directed: bool = False) -> Digraph:
    _need(n >= 3, "cycle needs n >= 3")
    pairs = [(i, (i + 1) % n) for i in range(n)]
    if directed:
        return Digraph.from_arcs(n, pairs, bidirected=False)
    return Digraph.from_edges(n, pairs)


def gen_clique(n: int) -> Digraph:
    _need(n >= 1, "clique needs n >= 1")
    return Digraph.from_edges(n, combinations(range(n), 2))


def gen_dag(n: int, arc_prob: float, seed: int | None = None) -> Digraph:
    _need(n >= 1, "dag needs n >= 1")
    _need(0.0 <= arc_prob <= 1.0, "arc_prob must lie in [0, 1]")
    rng = random.Random(seed)
    arcs = [(u, v) for u, v in combinations(range(n), 2) if rng.random() < arc_prob]
    return Digraph.from_arcs(n, arcs, bidirected=False if arcs else None)


def gen_dirac(n: int, seed: int | None = None, p: float = 0.3) -> Digraph:
    """Random G(n, p), then random edges at minimum-degree nodes until min degree >= n/2."""
    _need(n >= 4 and n % 2 == 0, "dirac generator needs even n >= 4")
    rng = random.Random(seed)
    adj = [set() for _ in range(n)]
    for u, v in combinations(range(n), 2):
        if rng.random() < p:
            adj[u].add(v)
            adj[v].add(u)
    half = n // 2
    while True:
        low = [v for v in range(n) if len(adj[v]) < half]
        if not low:
            break
        u = rng.choice(low)
        v = rng.choice([w for w in range(n) if w != u and w not in adj[u]])
        adj[u].add(v)
        adj[v].add(u)
    return Digraph.from_edges(n, [(u, v) for u in range(n) for v in adj[u] if u < v])


def gen_polytree(n: int, seed: int | None = None) -> Digraph:
    """Random tree with each edge oriented one way, chosen by a fair coin."""
    _need(n >= 1, "polytree needs n >= 1")
    rng = random.Random(seed)
    arcs = []
    for u, v in _random_tree_edges(n, rng):
        arcs.append((u, v) if rng.random() < 0.5 else (v, u))
    return Digraph.from_arcs(n, arcs, bidirected=False if arcs else None)


def gen_gnp(n: int, p: float, seed: int | None = None, directed: bool = False) -> Digraph:
    _need(n >= 1, "gnp needs n >= 1")
    rng = random.Random(seed)
    if directed:
        arcs = [(u, v) for u in range(n) for v in range(n) if u != v and rng.random() < p]
        return Digraph.from_arcs(n, arcs)
    return Digraph.from_edges(n, [e for e in combinations(range(n), 2) if rng.random() < p])


def gen_planted_partition(
    sizes: Sequence[int], p_in: float, p_out: float, seed: int | None = None
) -> Digraph:
    """Undirected stochastic block model with equal in/out probabilities per block."""
    _need(len(sizes) >= 1 and all(s >= 1 for s in sizes), "block sizes must be positive")
    rng = random.Random(seed)
    block = [b for b, s in enumerate(sizes) for _ in range(s)]
    n = len(block)
    edges = [
        (u, v)
        for u, v in combinations(range(n), 2)
        if rng.random() < (p_in if block[u] == block[v] else p_out)
    ]
    return Digraph.from_edges(n, edges)


GENERATORS = ("tree", "path", "star", "cycle", "dcycle", "clique", "dag", "dirac", "polytree", "gnp", "dgnp")


def generate(family: str, n: int, seed: int | None = None, p: float | None = None) -> Digraph:
    """Dispatch by family name; ``p`` is the arc/edge probability where relevant."""
    if family == "tree":
        return gen_tree(n, seed)
    if family == "path":
        return gen_path(n)
    if family == "star":
        return gen_star(n)
    if family == "cycle":
        return gen_cycle(n)
    if family == "dcycle":
        return gen_cycle(n, directed=True)
    if family == "clique":
        return gen_clique(n)
    if family == "dag":
        return gen_dag(n, 0.1 if p is None else p, seed)
    if family == "dirac":
        return gen_dirac(n, seed) if p is None else gen_dirac(n, seed, p)
    if family == "polytree":
        return gen_polytree(n, seed)
    if family == "gnp":
        return gen_gnp(n, 0.1 if p is None else p, seed)
    if family == "dgnp":
        return gen_gnp(n, 0.1 if p is None else p, seed, directed=True)
    raise GraphError(f"unknown family {family!r}; choose from {', '.join(GENERATORS)}")
