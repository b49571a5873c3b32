"""FAP instances, edge-subset solutions, the text format and block decomposition.

An instance is a simple undirected graph on vertices ``0..n-1`` whose edges
carry cost 0 or 1, with the zero-cost edges forming a forest.  Edge ids are
the positions in the edge list and every other module refers to edges by id.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from functools import cached_property

from .errors import (
    DisconnectedInput,
    DuplicateEdge,
    MalformedLine,
    NonContiguousIds,
    SelfLoop,
    ZeroEdgesNotForest,
)

Edge = tuple[int, int, int]


class DisjointSet:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


@dataclass(frozen=True)
class Instance:
    n: int
    edges: tuple[Edge, ...]

    def __post_init__(self):
        edges = tuple((int(u), int(v), int(c)) for u, v, c in self.edges)
        object.__setattr__(self, "edges", edges)
        if self.n < 0:
            raise NonContiguousIds(f"negative vertex count {self.n}")
        seen = set()
        forest = DisjointSet(self.n)
        for eid, (u, v, c) in enumerate(edges):
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise NonContiguousIds(f"edge {eid} ({u},{v}) outside 0..{self.n - 1}")
            if u == v:
                raise SelfLoop(f"edge {eid} is a loop at {u}")
            if c not in (0, 1):
                raise MalformedLine(f"edge {eid} has cost {c}, expected 0 or 1")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise DuplicateEdge(f"edge {eid} repeats pair {key}")
            seen.add(key)
            if c == 0 and not forest.union(u, v):
                raise ZeroEdgesNotForest(f"zero-cost edge {eid} ({u},{v}) closes a cycle")

    @property
    def m(self) -> int:
        return len(self.edges)

    def cost(self, eid: int) -> int:
        return self.edges[eid][2]

    def endpoints(self, eid: int) -> tuple[int, int]:
        u, v, _ = self.edges[eid]
        return u, v

    def other(self, eid: int, x: int) -> int:
        u, v, _ = self.edges[eid]
        return v if x == u else u

    @cached_property
    def unit_edges(self) -> tuple[int, ...]:
        return tuple(i for i, e in enumerate(self.edges) if e[2] == 1)

    @cached_property
    def zero_edges(self) -> tuple[int, ...]:
        return tuple(i for i, e in enumerate(self.edges) if e[2] == 0)

    @cached_property
    def incidence(self) -> tuple[tuple[int, ...], ...]:
        """Edge ids incident to each vertex, ascending."""
        inc: list[list[int]] = [[] for _ in range(self.n)]
        for eid, (u, v, _) in enumerate(self.edges):
            inc[u].append(eid)
            inc[v].append(eid)
        return tuple(tuple(x) for x in inc)

    @cached_property
    def edge_index(self) -> dict[tuple[int, int], int]:
        return {(min(u, v), max(u, v)): i for i, (u, v, _) in enumerate(self.edges)}

    def edge_id(self, u: int, v: int) -> int:
        return self.edge_index[(min(u, v), max(u, v))]

    def fingerprint(self) -> str:
        return hashlib.sha256(serialize_instance(self).encode()).hexdigest()


@dataclass(frozen=True)
class Solution:
    instance: Instance
    member: frozenset[int]
    _feasible: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "member", frozenset(self.member))

    @classmethod
    def full(cls, inst: Instance) -> "Solution":
        return cls(inst, frozenset(range(inst.m)))

    @property
    def cost(self) -> int:
        edges = self.instance.edges
        return sum(edges[e][2] for e in self.member)

    @property
    def unit_members(self) -> list[int]:
        edges = self.instance.edges
        return sorted(e for e in self.member if edges[e][2] == 1)

    def is_feasible(self, mode) -> bool:
        from .connectivity import EdgeView, is_feasible

        if mode not in self._feasible:
            self._feasible[mode] = is_feasible(EdgeView(self.instance, self.member), mode)
        return self._feasible[mode]

    def sorted_edges(self) -> list[int]:
        return sorted(self.member)


def parse_instance(text: str) -> Instance:
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            rows.append((lineno, [int(tok) for tok in line.split()]))
        except ValueError:
            raise MalformedLine(f"line {lineno}: non-integer token in {raw!r}") from None
    if not rows:
        raise MalformedLine("empty instance")
    lineno, header = rows[0]
    if len(header) != 2 or header[0] < 0 or header[1] < 0:
        raise MalformedLine(f"line {lineno}: header must be 'n m'")
    n, m = header
    body = rows[1:]
    if len(body) != m:
        raise MalformedLine(f"header announces {m} edges, found {len(body)}")
    edges = []
    for lineno, toks in body:
        if len(toks) != 3:
            raise MalformedLine(f"line {lineno}: expected 'u v c'")
        if toks[2] not in (0, 1):
            raise MalformedLine(f"line {lineno}: cost must be 0 or 1")
        edges.append(tuple(toks))
    return Instance(n, tuple(edges))


def serialize_instance(inst: Instance) -> str:
    lines = [f"{inst.n} {inst.m}"]
    lines.extend(f"{u} {v} {c}" for u, v, c in inst.edges)
    return "\n".join(lines) + "\n"


def read_instance(path) -> Instance:
    with open(path) as fh:
        return parse_instance(fh.read())


def is_connected(inst: Instance) -> bool:
    if inst.n <= 1:
        return True
    ds = DisjointSet(inst.n)
    parts = inst.n
    for u, v, _ in inst.edges:
        if ds.union(u, v):
            parts -= 1
    return parts == 1


@dataclass(frozen=True)
class Block:
    """A maximal 2-connected piece of a larger instance, renumbered locally.

    ``vertex_map[i]`` and ``edge_map[j]`` give the original ids of local
    vertex ``i`` and local edge ``j``.  Local ids preserve the original order.
    """

    instance: Instance
    vertex_map: tuple[int, ...]
    edge_map: tuple[int, ...]

    def __iter__(self):
        # unpacks as (instance, vertex mapping)
        return iter((self.instance, self.vertex_map))

    @property
    def is_bridge(self) -> bool:
        return self.instance.m == 1


def _biconnected_edge_groups(inst: Instance) -> list[list[int]]:
    """Edge ids of each biconnected component, via the edge-stack DFS."""
    disc = [-1] * inst.n
    low = [0] * inst.n
    inc = inst.incidence
    groups: list[list[int]] = []
    counter = 0
    for root in range(inst.n):
        if disc[root] != -1 or not inc[root]:
            continue
        disc[root] = low[root] = counter
        counter += 1
        estack: list[int] = []
        # frames: (vertex, parent edge, next incidence position)
        stack = [[root, -1, 0]]
        while stack:
            frame = stack[-1]
            x, pe, pos = frame
            if pos < len(inc[x]):
                frame[2] += 1
                eid = inc[x][pos]
                if eid == pe:
                    continue
                y = inst.other(eid, x)
                if disc[y] == -1:
                    estack.append(eid)
                    disc[y] = low[y] = counter
                    counter += 1
                    stack.append([y, eid, 0])
                elif disc[y] < disc[x]:
                    estack.append(eid)
                    low[x] = min(low[x], disc[y])
                continue
            stack.pop()
            if not stack:
                continue
            p = stack[-1][0]
            low[p] = min(low[p], low[x])
            if low[x] >= disc[p]:
                group = []
                while True:
                    e = estack.pop()
                    group.append(e)
                    if e == pe:
                        break
                groups.append(sorted(group))
    return groups


def blocks(inst: Instance) -> list[Block]:
    """Split ``inst`` into its blocks, ordered by smallest contained edge id.

    Bridges come back as single-edge blocks.  Raises DisconnectedInput if the
    graph (including isolated vertices) is not connected.
    """
    if not is_connected(inst):
        raise DisconnectedInput("input graph is not connected")
    groups = sorted(_biconnected_edge_groups(inst), key=lambda g: g[0])
    out = []
    for group in groups:
        verts = sorted({x for e in group for x in inst.endpoints(e)})
        local = {v: i for i, v in enumerate(verts)}
        edges = tuple((local[inst.edges[e][0]], local[inst.edges[e][1]], inst.edges[e][2]) for e in group)
        out.append(Block(Instance(len(verts), edges), tuple(verts), tuple(group)))
    return out
