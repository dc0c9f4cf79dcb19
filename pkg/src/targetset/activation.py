"""Linear Threshold activation and target-set verification."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .graph import Digraph


@dataclass(frozen=True)
class ActivationTrace:
    """Synchronous activation rounds.

    ``layers[l]`` holds the nodes that became active at round ``l`` (``layers[0]``
    is the seed set), so round ``l`` of the process is the union of the first
    ``l + 1`` layers.
    """

    layers: tuple[tuple[int, ...], ...]
    n: int

    @property
    def converged_at(self) -> int:
        return len(self.layers) - 1

    @property
    def rounds(self) -> list[frozenset[int]]:
        out, acc = [], set()
        for layer in self.layers:
            acc.update(layer)
            out.append(frozenset(acc))
        return out

    @property
    def final(self) -> frozenset[int]:
        return frozenset(v for layer in self.layers for v in layer)

    @property
    def complete(self) -> bool:
        return sum(map(len, self.layers)) == self.n


def activate(g: Digraph, t: Sequence[int], seeds: Iterable[int]) -> ActivationTrace:
    n = g.n
    if len(t) != n:
        raise ValueError(f"threshold vector has length {len(t)}, graph has {n} nodes")
    active = [False] * n
    first = []
    for v in seeds:
        if not 0 <= v < n:
            raise ValueError(f"seed {v} is not a node")
        if not active[v]:
            active[v] = True
            first.append(v)
    layers = [tuple(sorted(first))]
    count = [0] * n
    out_adj = g.out_adj
    frontier = first
    # zero-threshold nodes need no active neighbor and join at round 1
    pending = {v for v in range(n) if not active[v] and t[v] <= 0}
    while True:
        nxt = pending
        pending = set()
        for v in frontier:
            for u in out_adj[v]:
                count[u] += 1
                if not active[u] and count[u] >= t[u]:
                    nxt.add(u)
        if not nxt:
            break
        for u in nxt:
            active[u] = True
        frontier = sorted(nxt)
        layers.append(tuple(frontier))
    return ActivationTrace(tuple(layers), n)


def is_target_set(g: Digraph, t: Sequence[int], seeds: Iterable[int]) -> bool:
    return activate(g, t, seeds).complete
