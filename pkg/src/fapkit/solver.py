"""Reverse-delete and the two-step FAP algorithm, with an event trace.

Step 1 runs reverse-delete over the unit-cost edges of the whole graph.
Step 2 repeatedly takes an unused edge of ``H = E \\ F0`` that touches a side
vertex of a special segment, adds it, and reverse-deletes the unit edges of
the current solution followed by the new edge.  Edges chained through the
stack are processed the same way.

Every scan goes in ascending edge-id order, which makes a run deterministic.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

from .connectivity import Mode, feasible_on
from .errors import BridgeInInput, InfeasibleInput, TraceMismatch
from .graph import Block, Instance, Solution, blocks
from .segments import Segment, census, classified_segments, special_segments


def _debug_asserts() -> bool:
    return os.environ.get("FAPKIT_DEBUG_ASSERT", "") == "1"


# -- events -----------------------------------------------------------------


@dataclass(frozen=True)
class Push:
    edge: int
    side: int

    def line(self) -> str:
        return f"push {self.edge} side={self.side}"


@dataclass(frozen=True)
class Pop:
    edge: int
    side: int
    far: int

    def line(self) -> str:
        return f"pop {self.edge} side={self.side} far={self.far}"


@dataclass(frozen=True)
class RDRemoved:
    edges: tuple[int, ...]

    def line(self) -> str:
        return "removed " + (",".join(map(str, self.edges)) if self.edges else "-")


@dataclass(frozen=True)
class RDKept:
    edge: int

    def line(self) -> str:
        return f"kept {self.edge}"


Event = Union[Push, Pop, RDRemoved, RDKept]


@dataclass
class BlockRun:
    """Trace of one block, in the original instance's edge and vertex ids."""

    edges: tuple[int, ...]
    step1_removed: list[int]
    step1_cost: int
    events: list[Event]
    final_cost: int
    h_size: int
    push_counts: dict[int, int]
    census: dict[str, int]
    reading_divergences: int = 0


@dataclass
class RunReport:
    mode: Mode
    blocks: list[BlockRun]
    final_cost: int
    deterministic: bool = True

    @property
    def step1_removed(self) -> list[int]:
        return [e for b in self.blocks for e in b.step1_removed]

    @property
    def step2_events(self) -> list[Event]:
        return [ev for b in self.blocks for ev in b.events]

    @property
    def step1_cost(self) -> int:
        return sum(b.step1_cost for b in self.blocks)

    @property
    def segment_census(self) -> dict[str, int]:
        total: dict[str, int] = {}
        for b in self.blocks:
            for k, v in b.census.items():
                total[k] = total.get(k, 0) + v
        return total

    @property
    def pushes(self) -> int:
        return sum(sum(b.push_counts.values()) for b in self.blocks)

    @property
    def max_pushes_per_edge(self) -> int:
        return max((c for b in self.blocks for c in b.push_counts.values()), default=0)

    @property
    def reading_divergences(self) -> int:
        return sum(b.reading_divergences for b in self.blocks)


# -- reverse delete -----------------------------------------------------------


def _reverse_delete(inst: Instance, member: set[int], order: Iterable[int], mode: Mode) -> list[int]:
    """Delete edges of ``order`` from ``member`` in place while feasibility holds.

    Returns the removed edges in removal order.  ``member`` must be feasible.
    """
    deg = [0] * inst.n
    for e in member:
        u, v = inst.endpoints(e)
        deg[u] += 1
        deg[v] += 1
    removed = []
    for e in order:
        if e not in member:
            continue
        u, v = inst.endpoints(e)
        # dropping an edge at a degree-2 vertex always breaks feasibility
        if deg[u] < 3 or deg[v] < 3:
            continue
        member.discard(e)
        if feasible_on(inst, None, member, mode):
            deg[u] -= 1
            deg[v] -= 1
            removed.append(e)
        else:
            member.add(e)
    if _debug_asserts():
        assert feasible_on(inst, None, member, mode), "reverse-delete left an infeasible set"
    return removed


def reverse_delete(sol: Solution, first: Iterable[int], second: Iterable[int], mode: Mode) -> Solution:
    """Try to delete each edge of ``first`` and then of ``second`` (each in
    ascending id order), keeping a deletion whenever the rest stays feasible."""
    mode = Mode.parse(mode)
    if not sol.is_feasible(mode):
        raise InfeasibleInput("reverse-delete needs a feasible starting set")
    first, second = sorted(first), sorted(second)
    stray = (set(first) | set(second)) - sol.member
    if stray:
        raise ValueError(f"edges {sorted(stray)} are not in the solution")
    member = set(sol.member)
    _reverse_delete(sol.instance, member, first + second, mode)
    return Solution(sol.instance, frozenset(member))


def step1(inst: Instance, mode: Mode = Mode.TWO_VC) -> Solution:
    """Reverse-delete over all unit-cost edges of E; zero-cost edges all stay."""
    return reverse_delete(Solution.full(inst), inst.unit_edges, (), mode)


# -- step 2 -------------------------------------------------------------------


class _SpecialIndex:
    """Special segments of one solution state, indexed by side vertex."""

    def __init__(self, inst: Instance, member: frozenset[int], mode: Mode):
        self.segments: list[Segment] = special_segments(Solution(inst, member), mode)
        self.by_side: dict[int, list[Segment]] = {}
        for seg in self.segments:
            for x in sorted(set(seg.side_vertices)):
                self.by_side.setdefault(x, []).append(seg)

    def sides_with_end(self, v: int) -> set[int]:
        return {x for seg in self.segments if v in seg.ends for x in seg.side_vertices}

    def sides_touching(self, v: int) -> set[int]:
        # looser reading: v is an end of one of the segment's side edges
        return {
            x
            for seg in self.segments
            if v in seg.ends or v in seg.side_vertices
            for x in seg.side_vertices
        }


def _first_incident(inst: Instance, h_edges: Sequence[int], visited: set[int], sides) -> tuple[int, int] | None:
    for e in h_edges:
        if e in visited:
            continue
        u, v = inst.endpoints(e)
        hits = [x for x in (u, v) if x in sides]
        if hits:
            return e, min(hits)
    return None


@dataclass
class _Step2Result:
    member: frozenset[int]
    events: list[Event] = field(default_factory=list)
    push_counts: dict[int, int] = field(default_factory=dict)
    reading_divergences: int = 0


def _step2(inst: Instance, f0: frozenset[int], mode: Mode) -> _Step2Result:
    h_edges = [e for e in range(inst.m) if e not in f0]
    member = set(f0)
    visited: set[int] = set()
    out = _Step2Result(frozenset(f0))
    cache: dict[frozenset[int], _SpecialIndex] = {}

    def index() -> _SpecialIndex:
        key = frozenset(member)
        if key not in cache:
            cache.clear()
            cache[key] = _SpecialIndex(inst, key, mode)
        return cache[key]

    def push(stack, e, side):
        visited.add(e)
        out.push_counts[e] = out.push_counts.get(e, 0) + 1
        assert out.push_counts[e] == 1, f"edge {e} pushed twice"
        stack.append((e, side))
        out.events.append(Push(e, side))

    while True:
        hit = _first_incident(inst, h_edges, visited, index().by_side)
        if hit is None:
            break
        stack: list[tuple[int, int]] = []
        push(stack, *hit)
        while stack:
            f, u = stack.pop()
            v = inst.other(f, u)
            out.events.append(Pop(f, u, v))
            f1 = sorted(e for e in member if inst.cost(e) == 1)
            member.add(f)
            removed = _reverse_delete(inst, member, f1 + [f], mode)
            out.events.append(RDRemoved(tuple(removed)))
            if f in member:
                out.events.append(RDKept(f))
            idx = index()
            g = _first_incident(inst, h_edges, visited, idx.sides_with_end(v))
            alt = _first_incident(inst, h_edges, visited, idx.sides_touching(v))
            if g != alt:
                out.reading_divergences += 1
            if g is not None:
                push(stack, *g)
    out.member = frozenset(member)
    return out


def step2(inst: Instance, f0: Solution, mode: Mode = Mode.TWO_VC) -> tuple[Solution, RunReport]:
    """Improvement phase on a single 2-connected block, starting from ``f0``."""
    mode = Mode.parse(mode)
    res = _step2(inst, f0.member, mode)
    sol = Solution(inst, res.member)
    run = BlockRun(
        edges=tuple(range(inst.m)),
        step1_removed=[],
        step1_cost=f0.cost,
        events=res.events,
        final_cost=sol.cost,
        h_size=inst.m - len(f0.member),
        push_counts=res.push_counts,
        census=census(classified_segments(sol, mode)),
        reading_divergences=res.reading_divergences,
    )
    return sol, RunReport(mode, [run], sol.cost)


def _map_event(ev: Event, block: Block) -> Event:
    em, vm = block.edge_map, block.vertex_map
    if isinstance(ev, Push):
        return Push(em[ev.edge], vm[ev.side])
    if isinstance(ev, Pop):
        return Pop(em[ev.edge], vm[ev.side], vm[ev.far])
    if isinstance(ev, RDRemoved):
        return RDRemoved(tuple(em[e] for e in ev.edges))
    return RDKept(em[ev.edge])


def solve_block(inst: Instance, mode: Mode) -> tuple[frozenset[int], BlockRun]:
    """Both steps on one 2-connected instance; the run uses local ids."""
    member = set(range(inst.m))
    if not feasible_on(inst, None, member, mode):
        raise InfeasibleInput("block is not feasible on its own")
    removed = _reverse_delete(inst, member, list(inst.unit_edges), mode)
    f0 = frozenset(member)
    step1_cost = sum(inst.cost(e) for e in f0)
    res = _step2(inst, f0, mode)
    final = Solution(inst, res.member)
    if _debug_asserts():
        assert final.is_feasible(mode)
        assert set(inst.zero_edges) <= res.member
        assert final.cost <= step1_cost
    run = BlockRun(
        edges=tuple(range(inst.m)),
        step1_removed=removed,
        step1_cost=step1_cost,
        events=res.events,
        final_cost=final.cost,
        h_size=inst.m - len(f0),
        push_counts=res.push_counts,
        census=census(classified_segments(final, mode)),
        reading_divergences=res.reading_divergences,
    )
    return res.member, run


def solve(inst: Instance, mode: Mode = Mode.TWO_VC) -> tuple[Solution, RunReport]:
    """Run the algorithm block by block and return the union of the block solutions.

    Raises DisconnectedInput for disconnected graphs and BridgeInInput when
    some block is a single edge.
    """
    mode = Mode.parse(mode)
    parts = blocks(inst)
    bridge = next((b for b in parts if b.is_bridge), None)
    if bridge is not None:
        raise BridgeInInput(f"edge {bridge.edge_map[0]} is a bridge of the input graph")
    member: set[int] = set()
    runs = []
    for block in parts:
        local, run = solve_block(block.instance, mode)
        member.update(block.edge_map[e] for e in local)
        em = block.edge_map
        runs.append(
            BlockRun(
                edges=em,
                step1_removed=[em[e] for e in run.step1_removed],
                step1_cost=run.step1_cost,
                events=[_map_event(ev, block) for ev in run.events],
                final_cost=run.final_cost,
                h_size=run.h_size,
                push_counts={em[e]: c for e, c in run.push_counts.items()},
                census=run.census,
                reading_divergences=run.reading_divergences,
            )
        )
    sol = Solution(inst, frozenset(member))
    return sol, RunReport(mode, runs, sol.cost)


# -- trace file ---------------------------------------------------------------

TRACE_MAGIC = "fapkit-trace 1"


def _ids(items: Iterable[int]) -> str:
    items = list(items)
    return ",".join(map(str, items)) if items else "-"


def _parse_ids(tok: str) -> list[int]:
    return [] if tok == "-" else [int(x) for x in tok.split(",")]


def format_trace(inst: Instance, sol: Solution, report: RunReport) -> str:
    """Line-oriented event log.

    Grammar (one item per line)::

        fapkit-trace 1
        instance <sha256> n=<n> m=<m>
        mode <2ec|2vc>
        block <index> edges=<ids>
        s1 <edge>                      step-1 deletion
        push <edge> side=<vertex>
        pop <edge> side=<vertex> far=<vertex>
        removed <ids>                  deletions made by one reverse-delete call
        kept <edge>                    the popped edge survived that call
        end-block cost=<c>
        final cost=<c> edges=<ids>

    ``<ids>`` is a comma-separated list or ``-`` when empty.
    """
    lines = [TRACE_MAGIC, f"instance {inst.fingerprint()} n={inst.n} m={inst.m}", f"mode {report.mode.value}"]
    for i, run in enumerate(report.blocks):
        lines.append(f"block {i} edges={_ids(run.edges)}")
        lines.extend(f"s1 {e}" for e in run.step1_removed)
        lines.extend(ev.line() for ev in run.events)
        lines.append(f"end-block cost={run.final_cost}")
    lines.append(f"final cost={sol.cost} edges={_ids(sol.sorted_edges())}")
    return "\n".join(lines) + "\n"


def _kv(tok: str, key: str) -> str:
    k, sep, val = tok.partition("=")
    if not sep or k != key:
        raise ValueError(f"expected {key}=..., got {tok!r}")
    return val


def replay(inst: Instance, text: str) -> Solution:
    """Re-execute a trace against ``inst`` and return the replayed solution.

    Every deletion is checked to keep its block feasible, every re-added edge
    must be absent, and the block costs and final edge set must match the
    recorded ones.  Any discrepancy raises TraceMismatch.
    """
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not lines or lines[0] != TRACE_MAGIC:
        raise TraceMismatch("not a fapkit trace")
    try:
        return _replay(inst, lines)
    except TraceMismatch:
        raise
    except (ValueError, IndexError, KeyError) as exc:
        raise TraceMismatch(f"unreadable trace: {exc}") from None


def _replay(inst: Instance, lines: list[str]) -> Solution:
    head = lines[1].split()
    if head[0] != "instance" or head[1] != inst.fingerprint():
        raise TraceMismatch("trace was recorded for a different instance")
    mode_tok = lines[2].split()
    if mode_tok[0] != "mode":
        raise TraceMismatch("missing mode line")
    mode = Mode.parse(mode_tok[1])

    parts = blocks(inst)
    member = set(range(inst.m))
    block_edges: set[int] | None = None
    block_vertices: list[int] = []
    seen_blocks = 0
    final = None

    def block_feasible() -> bool:
        return feasible_on(inst, block_vertices, member & block_edges, mode)

    def delete(e: int, lineno: int):
        if block_edges is None or e not in block_edges:
            raise TraceMismatch(f"line {lineno}: edge {e} outside the current block")
        if e not in member:
            raise TraceMismatch(f"line {lineno}: edge {e} deleted while absent")
        if inst.cost(e) != 1:
            raise TraceMismatch(f"line {lineno}: zero-cost edge {e} deleted")
        member.discard(e)
        if not block_feasible():
            raise TraceMismatch(f"line {lineno}: deleting edge {e} breaks feasibility")

    for lineno, line in enumerate(lines[3:], 4):
        toks = line.split()
        op = toks[0]
        if op == "block":
            idx = int(toks[1])
            if idx != seen_blocks or idx >= len(parts):
                raise TraceMismatch(f"line {lineno}: unexpected block {idx}")
            block = parts[idx]
            if tuple(_parse_ids(_kv(toks[2], "edges"))) != block.edge_map:
                raise TraceMismatch(f"line {lineno}: block {idx} edge set differs")
            block_edges = set(block.edge_map)
            block_vertices = list(block.vertex_map)
            seen_blocks += 1
        elif op == "s1":
            delete(int(toks[1]), lineno)
        elif op == "push":
            e = int(toks[1])
            if block_edges is None or e not in block_edges or e in member:
                raise TraceMismatch(f"line {lineno}: edge {e} cannot be pushed")
        elif op == "pop":
            e = int(toks[1])
            if block_edges is None or e not in block_edges or e in member:
                raise TraceMismatch(f"line {lineno}: edge {e} cannot be popped")
            member.add(e)
        elif op == "removed":
            for e in _parse_ids(toks[1]):
                delete(e, lineno)
        elif op == "kept":
            if int(toks[1]) not in member:
                raise TraceMismatch(f"line {lineno}: kept edge {toks[1]} is absent")
        elif op == "end-block":
            cost = sum(inst.cost(e) for e in member & block_edges)
            if cost != int(_kv(toks[1], "cost")):
                raise TraceMismatch(f"line {lineno}: block cost {cost} differs from recorded")
        elif op == "final":
            final = (int(_kv(toks[1], "cost")), _parse_ids(_kv(toks[2], "edges")))
        else:
            raise TraceMismatch(f"line {lineno}: unknown event {op!r}")

    if seen_blocks != len(parts):
        raise TraceMismatch(f"trace covers {seen_blocks} of {len(parts)} blocks")
    if final is None:
        raise TraceMismatch("missing final line")
    sol = Solution(inst, frozenset(member))
    if sol.sorted_edges() != final[1] or sol.cost != final[0]:
        raise TraceMismatch("replayed solution differs from the recorded one")
    return sol


def unit_minimal(sol: Solution, mode: Mode) -> bool:
    """No single unit edge can be dropped without losing feasibility."""
    mode = Mode.parse(mode)
    return not any(feasible_on(sol.instance, None, sol.member - {e}, mode) for e in sol.unit_members)
