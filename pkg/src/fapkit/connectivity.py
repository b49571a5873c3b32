"""Bridges, cut vertices and the 2-edge / 2-vertex connectivity predicates.

All queries recompute from scratch with one DFS lowpoint pass, O(n + m).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable

from .graph import Instance


class Mode(str, enum.Enum):
    TWO_EC = "2ec"
    TWO_VC = "2vc"

    def __str__(self):
        return self.value

    @classmethod
    def parse(cls, text: "str | Mode") -> "Mode":
        if isinstance(text, Mode):
            return text
        key = text.strip().lower().replace("-", "_")
        aliases = {"2ec": cls.TWO_EC, "two_ec": cls.TWO_EC, "2vc": cls.TWO_VC, "two_vc": cls.TWO_VC}
        if key not in aliases:
            raise ValueError(f"unknown mode {text!r}")
        return aliases[key]


@dataclass(frozen=True)
class EdgeView:
    """The spanning subgraph ``(V, active)`` of an instance."""

    instance: Instance
    active: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "active", frozenset(self.active))


def _adjacency(inst: Instance, active: Iterable[int]) -> list[list[tuple[int, int]]]:
    adj: list[list[tuple[int, int]]] = [[] for _ in range(inst.n)]
    edges = inst.edges
    for eid in active:
        u, v, _ = edges[eid]
        adj[u].append((v, eid))
        adj[v].append((u, eid))
    return adj


def _lowpoint(adj, root, disc, low, on_bridge=None, on_cut=None):
    """DFS from ``root`` filling ``disc``/``low`` (entries must start at -1).

    Calls ``on_bridge(eid)`` for each bridge and ``on_cut(v)`` for each cut
    vertex of the component; either callback may return True to abort early,
    in which case the function returns True.
    """
    disc[root] = low[root] = 0
    counter = 1
    root_children = 0
    stack = [(root, -1, iter(adj[root]))]
    while stack:
        x, pe, it = stack[-1]
        advanced = False
        for y, eid in it:
            if eid == pe:
                continue
            if disc[y] == -1:
                disc[y] = low[y] = counter
                counter += 1
                if x == root:
                    root_children += 1
                stack.append((y, eid, iter(adj[y])))
                advanced = True
                break
            if disc[y] < low[x]:
                low[x] = disc[y]
        if advanced:
            continue
        stack.pop()
        if not stack:
            break
        p = stack[-1][0]
        if low[x] < low[p]:
            low[p] = low[x]
        if low[x] > disc[p] and on_bridge is not None and on_bridge(pe):
            return True
        if p != root and low[x] >= disc[p] and on_cut is not None and on_cut(p):
            return True
    if root_children > 1 and on_cut is not None and on_cut(root):
        return True
    return False


def bridges(view: EdgeView) -> set[int]:
    inst = view.instance
    adj = _adjacency(inst, view.active)
    disc = [-1] * inst.n
    low = [-1] * inst.n
    found: set[int] = set()
    for v in range(inst.n):
        if disc[v] == -1 and adj[v]:
            _lowpoint(adj, v, disc, low, on_bridge=lambda e: found.add(e))
    return found


def articulation_points(view: EdgeView) -> set[int]:
    inst = view.instance
    adj = _adjacency(inst, view.active)
    disc = [-1] * inst.n
    low = [-1] * inst.n
    found: set[int] = set()
    for v in range(inst.n):
        if disc[v] == -1 and adj[v]:
            _lowpoint(adj, v, disc, low, on_cut=lambda x: found.add(x))
    return found


def feasible_on(inst: Instance, vertices: Iterable[int] | None, active: Iterable[int], mode: Mode) -> bool:
    """Connectivity predicate for the subgraph with vertex set ``vertices``
    (all of V when None) and edge set ``active``.

    Every active edge must have both ends in ``vertices``.
    """
    mode = Mode.parse(mode)
    adj = _adjacency(inst, active)
    if vertices is None:
        vertices = range(inst.n)
    verts = list(vertices)
    if len(verts) < 3:
        return False
    for v in verts:
        if len(adj[v]) < 2:
            return False
    disc = [-1] * inst.n
    low = [-1] * inst.n
    fail = lambda _x: True  # noqa: E731
    if mode is Mode.TWO_EC:
        aborted = _lowpoint(adj, verts[0], disc, low, on_bridge=fail)
    else:
        aborted = _lowpoint(adj, verts[0], disc, low, on_cut=fail)
    if aborted:
        return False
    return all(disc[v] != -1 for v in verts)


def is_feasible(view: EdgeView, mode: Mode) -> bool:
    """True iff ``view`` spans all vertices, is connected and has no bridge
    (TWO_EC) or no cut vertex (TWO_VC).  Views on fewer than 3 vertices fail."""
    return feasible_on(view.instance, None, view.active, mode)


def components(view: EdgeView) -> list[list[int]]:
    """Connected components of the spanning subgraph, isolated vertices included."""
    inst = view.instance
    adj = _adjacency(inst, view.active)
    seen = [False] * inst.n
    out = []
    for s in range(inst.n):
        if seen[s]:
            continue
        seen[s] = True
        comp, todo = [], [s]
        while todo:
            x = todo.pop()
            comp.append(x)
            for y, _ in adj[x]:
                if not seen[y]:
                    seen[y] = True
                    todo.append(y)
        out.append(sorted(comp))
    return out
