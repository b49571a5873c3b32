"""Segments of a solution: maximal paths whose inner vertices have degree 2.

A segment runs between two high-degree vertices (degree >= 3 in the
solution).  It is strong when deleting its edges and inner vertices leaves a
feasible graph, weak otherwise.  A strong segment with at least two edges is
special when at least one of its two side edges costs 1 and every other edge
costs 0.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, replace

from .connectivity import Mode, feasible_on
from .graph import Solution


class Kind(str, enum.Enum):
    STRONG = "strong"
    WEAK = "weak"


@dataclass(frozen=True)
class Segment:
    vertices: tuple[int, ...]
    edges: tuple[int, ...]
    kind: Kind | None = None
    special: bool = False

    @property
    def length(self) -> int:
        return len(self.edges)

    @property
    def trivial(self) -> bool:
        return len(self.edges) == 1

    @property
    def closed(self) -> bool:
        """Both ends at the same vertex; only possible for 2-edge-connected solutions."""
        return self.vertices[0] == self.vertices[-1]

    @property
    def ends(self) -> tuple[int, int]:
        return self.vertices[0], self.vertices[-1]

    @property
    def internal_vertices(self) -> tuple[int, ...]:
        return self.vertices[1:-1]

    @property
    def side_vertices(self) -> tuple[int, int]:
        return self.vertices[1], self.vertices[-2]

    @property
    def side_edges(self) -> tuple[int, int]:
        return self.edges[0], self.edges[-1]


def degrees(sol: Solution) -> list[int]:
    deg = [0] * sol.instance.n
    for e in sol.member:
        u, v = sol.instance.endpoints(e)
        deg[u] += 1
        deg[v] += 1
    return deg


def high_degree_vertices(sol: Solution) -> set[int]:
    return {v for v, d in enumerate(degrees(sol)) if d >= 3}


def enumerate_segments(sol: Solution) -> list[Segment]:
    """All segments of ``sol`` in canonical order (by smallest edge id).

    A solution without high-degree vertices is a single cycle and has none.
    """
    inst = sol.instance
    member = sol.member
    deg = degrees(sol)
    inc = [[e for e in inst.incidence[v] if e in member] for v in range(inst.n)]
    used: set[int] = set()
    found = []
    for h in range(inst.n):
        if deg[h] < 3:
            continue
        for first in inc[h]:
            if first in used:
                continue
            verts, es = [h], [first]
            cur = inst.other(first, h)
            while deg[cur] == 2:
                verts.append(cur)
                nxt = inc[cur][0] if inc[cur][0] != es[-1] else inc[cur][1]
                es.append(nxt)
                cur = inst.other(nxt, cur)
            verts.append(cur)
            used.update(es)
            if verts[0] > verts[-1] or (verts[0] == verts[-1] and es[0] > es[-1]):
                verts.reverse()
                es.reverse()
            found.append(Segment(tuple(verts), tuple(es)))
    found.sort(key=lambda s: min(s.edges))
    return found


def has_special_pattern(seg: Segment, sol: Solution) -> bool:
    """Cost part of the special-segment test (ignores strength)."""
    if seg.length < 2:
        return False
    cost = sol.instance.cost
    first, last = seg.side_edges
    if cost(first) == 0 and cost(last) == 0:
        return False
    return all(cost(e) == 0 for e in seg.edges[1:-1])


def is_strong(seg: Segment, sol: Solution, mode: Mode) -> bool:
    inner = set(seg.internal_vertices)
    rest_vertices = [v for v in range(sol.instance.n) if v not in inner]
    rest_edges = sol.member.difference(seg.edges)
    return feasible_on(sol.instance, rest_vertices, rest_edges, mode)


def classify(seg: Segment, sol: Solution, mode: Mode) -> Segment:
    strong = is_strong(seg, sol, mode)
    return replace(
        seg,
        kind=Kind.STRONG if strong else Kind.WEAK,
        special=strong and has_special_pattern(seg, sol),
    )


def classified_segments(sol: Solution, mode: Mode) -> list[Segment]:
    return [classify(s, sol, mode) for s in enumerate_segments(sol)]


def special_segments(sol: Solution, mode: Mode) -> list[Segment]:
    """Special segments only; the strength test runs on cost-pattern candidates alone."""
    out = []
    for seg in enumerate_segments(sol):
        if has_special_pattern(seg, sol) and is_strong(seg, sol, mode):
            out.append(replace(seg, kind=Kind.STRONG, special=True))
    return out


def census(segments: list[Segment]) -> dict[str, int]:
    counts = Counter()
    for s in segments:
        counts["total"] += 1
        if s.trivial:
            counts["trivial"] += 1
        if s.kind is not None:
            counts[s.kind.value] += 1
        if s.special:
            counts["special"] += 1
        if s.closed:
            counts["closed"] += 1
    return {k: counts.get(k, 0) for k in ("total", "trivial", "strong", "weak", "special", "closed")}
