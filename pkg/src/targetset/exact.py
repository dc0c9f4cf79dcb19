"""Exact minimum target sets: exhaustive search, the DAG closed form, and the
reduction of a polytree to a forest of bidirected trees."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .graph import Digraph, GraphError, is_dag, is_tree_underlying

DEFAULT_NODE_LIMIT = 16


class ExactError(ValueError):
    pass


@dataclass(frozen=True)
class ExactResult:
    seeds: frozenset[int]
    opt_size: int
    subsets_checked: int


def forced_seeds(g: Digraph, t: Sequence[int]) -> list[int]:
    """Nodes whose threshold exceeds their in-degree; every target set holds them."""
    return [v for v in range(g.n) if t[v] > len(g.in_adj[v])]


def _activates_all(in_masks: Sequence[int], t: Sequence[int], start: int, full: int) -> bool:
    active = start
    changed = True
    while changed and active != full:
        changed = False
        for u, mask in enumerate(in_masks):
            if not active >> u & 1 and (mask & active).bit_count() >= t[u]:
                active |= 1 << u
                changed = True
    return active == full


def brute_force(
    g: Digraph, t: Sequence[int], node_limit: int = DEFAULT_NODE_LIMIT, prune: bool = True
) -> ExactResult:
    """Smallest target set by enumeration in order of size, then lexicographically.

    With ``prune`` the forced seeds are fixed and only the other nodes are
    enumerated, which cannot change the optimum.
    """
    n = g.n
    if n > node_limit:
        raise ExactError(f"brute force refused: {n} nodes exceeds the limit of {node_limit}")
    if len(t) != n:
        raise ExactError("threshold vector length differs from node count")
    in_masks = [sum(1 << w for w in g.in_adj[v]) for v in range(n)]
    full = (1 << n) - 1
    fixed = forced_seeds(g, t) if prune else []
    fixed_mask = sum(1 << v for v in fixed)
    free = [v for v in range(n) if not fixed_mask >> v & 1]
    checked = 0
    for size in range(len(free) + 1):
        for combo in combinations(free, size):
            checked += 1
            mask = fixed_mask
            for v in combo:
                mask |= 1 << v
            if _activates_all(in_masks, t, mask, full):
                best = frozenset(fixed) | frozenset(combo)
                return ExactResult(best, len(best), checked)
    raise AssertionError("V itself is always a target set")


def dag_optimal(g: Digraph, t: Sequence[int]) -> ExactResult:
    if not is_dag(g):
        raise ExactError("dag_optimal needs an acyclic graph")
    s = frozenset(forced_seeds(g, t))
    return ExactResult(s, len(s), 0)


@dataclass(frozen=True)
class Component:
    """A piece of a reduced polytree.  ``nodes[i]`` is the original id of local node i."""

    nodes: tuple[int, ...]
    graph: Digraph
    thresholds: tuple[int, ...]


def polytree_reduce(g: Digraph, t: Sequence[int]) -> list[Component]:
    """Split a polytree at every one-way arc.

    Cutting a one-way arc (u, v) separates u's side from v's side and lowers
    t(v) by one (not below zero), since v can count on u's eventual
    activation.  Cutting all of them at once gives the same result as cutting
    one at a time.  What remains is a forest of bidirected trees whose
    target sets combine into exactly the target sets of the original.
    """
    if not is_tree_underlying(g):
        raise GraphError("polytree_reduce needs a graph whose underlying structure is a tree")
    n = g.n
    thr = list(t)
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in g.arcs():
        if g.has_arc(v, u):
            if u < v:
                adj[u].append(v)
                adj[v].append(u)
        else:
            thr[v] = max(thr[v] - 1, 0)

    comp = [-1] * n
    out: list[Component] = []
    for root in range(n):
        if comp[root] >= 0:
            continue
        members = []
        stack = [root]
        comp[root] = len(out)
        while stack:
            x = stack.pop()
            members.append(x)
            for y in adj[x]:
                if comp[y] < 0:
                    comp[y] = len(out)
                    stack.append(y)
        members.sort()
        local = {v: i for i, v in enumerate(members)}
        edges = [(local[x], local[y]) for x in members for y in adj[x] if x < y]
        sub = Digraph.from_edges(len(members), edges)
        out.append(Component(tuple(members), sub, tuple(thr[v] for v in members)))
    return out
