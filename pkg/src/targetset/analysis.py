"""Size certificates and network statistics used by the benchmark study."""

from __future__ import annotations

import math
import random
from collections import Counter, defaultdict
from fractions import Fraction
from typing import Sequence

from .graph import Digraph, GraphError


def upper_bound_exact(g: Digraph, t: Sequence[int]) -> Fraction:
    """sum over v of min(1, t(v) / (d_in(v) + 1)), as an exact rational."""
    whole = 0
    by_den: dict[int, int] = defaultdict(int)
    for v in range(g.n):
        den = len(g.in_adj[v]) + 1
        if t[v] >= den:
            whole += 1
        elif t[v]:
            by_den[den] += t[v]
    total = Fraction(whole)
    for den, num in by_den.items():
        total += Fraction(num, den)
    return total


def upper_bound(g: Digraph, t: Sequence[int]) -> float:
    return float(upper_bound_exact(g, t))


Partition = Sequence[int]


def _require_undirected(g: Digraph, what: str) -> None:
    if not g.bidirected:
        raise GraphError(f"{what} is only defined here for undirected (bidirected) graphs")


def modularity(g: Digraph, partition: Partition) -> float:
    """Newman modularity Q = sum_c [e_c/m - (deg_c / 2m)^2]."""
    _require_undirected(g, "modularity")
    if len(partition) != g.n:
        raise ValueError("partition length differs from node count")
    m = g.num_edges
    if m == 0:
        raise GraphError("modularity is undefined on a graph without edges")
    inside: Counter[int] = Counter()
    degsum: Counter[int] = Counter()
    for u in range(g.n):
        cu = partition[u]
        degsum[cu] += len(g.out_adj[u])
        for v in g.out_adj[u]:
            if u < v and partition[v] == cu:
                inside[cu] += 1
    return math.fsum(inside[c] / m - (degsum[c] / (2 * m)) ** 2 for c in degsum)


def _dense(labels: Sequence[int]) -> list[int]:
    ids: dict[int, int] = {}
    return [ids.setdefault(x, len(ids)) for x in labels]


def detect_communities(g: Digraph, seed: int | None = None, max_sweeps: int = 1000) -> list[int]:
    """Asynchronous label propagation.

    Nodes are visited in a fresh random order each sweep and adopt a most
    frequent neighbor label, keeping their own when it is among the most
    frequent; other ties are drawn at random.  Stops at the first sweep that
    changes nothing.  Community ids are renumbered by first appearance.
    """
    _require_undirected(g, "label propagation")
    rng = random.Random(seed)
    label = list(range(g.n))
    order = list(range(g.n))
    for _ in range(max_sweeps):
        rng.shuffle(order)
        changed = False
        for v in order:
            nbrs = g.out_adj[v]
            if not nbrs:
                continue
            freq = Counter(label[u] for u in nbrs)
            top = max(freq.values())
            if freq.get(label[v], 0) == top:
                continue
            best = sorted(c for c, f in freq.items() if f == top)
            label[v] = rng.choice(best)
            changed = True
        if not changed:
            break
    return _dense(label)


def clustering_coefficient(g: Digraph) -> float:
    """Average local clustering; nodes of degree < 2 contribute 0."""
    _require_undirected(g, "clustering coefficient")
    if g.n == 0:
        return 0.0
    nbr_sets = [set(a) for a in g.out_adj]
    total = 0.0
    for v in range(g.n):
        d = len(g.out_adj[v])
        if d < 2:
            continue
        links = sum(len(nbr_sets[u] & nbr_sets[v]) for u in g.out_adj[v]) // 2
        total += links / (d * (d - 1) / 2)
    return total / g.n


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    if len(xs) != len(ys):
        raise ValueError("pearson needs sequences of equal length")
    if len(xs) < 2:
        raise ValueError("pearson needs at least two points")
    n = len(xs)
    mx = math.fsum(xs) / n
    my = math.fsum(ys) / n
    dx = [x - mx for x in xs]
    dy = [y - my for y in ys]
    sxx = math.fsum(a * a for a in dx)
    syy = math.fsum(b * b for b in dy)
    if sxx == 0 or syy == 0:
        raise ValueError("pearson is undefined when a variable has zero variance")
    r = math.fsum(a * b for a, b in zip(dx, dy)) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))
