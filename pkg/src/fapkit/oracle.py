"""Exact minimum-cost feasible subgraphs for small instances.

Both searches keep every zero-cost edge: adding an edge never breaks
feasibility and a free edge never raises the cost, so some optimum contains
the whole zero forest.  Only the unit-cost edges are searched.

``opt_exhaustive`` tests feasibility straight from the definition (delete
each edge or vertex, check connectivity with union-find), so it shares no
code with the DFS lowpoint routines that the solver and ``opt_bnb`` use.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import combinations

from .connectivity import EdgeView, Mode, bridges, feasible_on
from .errors import Infeasible, TooLarge
from .graph import DisjointSet, Instance, Solution, blocks

EXHAUSTIVE_LIMIT = 24
BNB_LIMIT = 40


class Method(str, enum.Enum):
    EXHAUSTIVE = "exhaustive"
    BNB = "bnb"


@dataclass(frozen=True)
class OptResult:
    opt_cost: int
    witness: Solution
    explored: int
    method: Method


def _connected_without(n: int, pairs, skip_edge: int = -1, skip_vertex: int = -1) -> bool:
    ds = DisjointSet(n)
    parts = n - (1 if skip_vertex >= 0 else 0)
    for i, (u, v) in enumerate(pairs):
        if i == skip_edge or u == skip_vertex or v == skip_vertex:
            continue
        if ds.union(u, v):
            parts -= 1
    return parts == 1


def feasible_by_definition(n: int, pairs: list[tuple[int, int]], mode: Mode) -> bool:
    """Spanning 2-edge / 2-vertex connectivity by deleting each edge / vertex in turn."""
    if n < 3:
        return False
    if not _connected_without(n, pairs):
        return False
    if mode is Mode.TWO_EC:
        return all(_connected_without(n, pairs, skip_edge=i) for i in range(len(pairs)))
    return all(_connected_without(n, pairs, skip_vertex=x) for x in range(n))


def _lower_bound(inst: Instance, chosen) -> int:
    """Unit edges still needed so every vertex reaches degree 2 (each edge fixes two deficits)."""
    deg = [0] * inst.n
    for e in chosen:
        u, v = inst.endpoints(e)
        deg[u] += 1
        deg[v] += 1
    deficit = sum(max(0, 2 - d) for d in deg)
    return (deficit + 1) // 2


def _per_block(inst: Instance, mode: Mode, solve_one, method: Method) -> OptResult:
    parts = blocks(inst)
    if any(b.is_bridge for b in parts):
        raise Infeasible("the input graph has a bridge")
    if len(parts) == 1:
        return solve_one(inst)
    member: set[int] = set()
    explored = 0
    for b in parts:
        res = solve_one(b.instance)
        explored += res.explored
        member.update(b.edge_map[e] for e in res.witness.member)
    sol = Solution(inst, frozenset(member))
    return OptResult(sol.cost, sol, explored, method)


def opt_exhaustive(inst: Instance, mode: Mode = Mode.TWO_VC) -> OptResult:
    """Smallest set of unit edges that completes the zero forest, by cardinality-ascending enumeration."""
    mode = Mode.parse(mode)
    if len(inst.unit_edges) > EXHAUSTIVE_LIMIT:
        raise TooLarge(f"{len(inst.unit_edges)} unit edges exceed the exhaustive limit {EXHAUSTIVE_LIMIT}")

    def one(block: Instance) -> OptResult:
        zero = list(block.zero_edges)
        units = list(block.unit_edges)
        explored = 0
        for k in range(_lower_bound(block, zero), len(units) + 1):
            for pick in combinations(units, k):
                explored += 1
                chosen = zero + list(pick)
                if feasible_by_definition(block.n, [block.endpoints(e) for e in chosen], mode):
                    sol = Solution(block, frozenset(chosen))
                    return OptResult(k, sol, explored, Method.EXHAUSTIVE)
        raise Infeasible("no feasible subgraph exists")

    return _per_block(inst, mode, one, Method.EXHAUSTIVE)


class _BnB:
    def __init__(self, inst: Instance, mode: Mode):
        self.inst = inst
        self.mode = mode
        self.zero = frozenset(inst.zero_edges)
        self.best_cost = len(inst.unit_edges) + 1
        self.best: frozenset[int] | None = None
        self.explored = 0

    def forced(self, avail: frozenset[int], undecided: set[int]) -> set[int]:
        """Undecided edges every feasible completion must use."""
        inst = self.inst
        deg = [0] * inst.n
        for e in avail:
            u, v = inst.endpoints(e)
            deg[u] += 1
            deg[v] += 1
        out = {e for e in undecided if min(deg[x] for x in inst.endpoints(e)) <= 2}
        out |= bridges(EdgeView(inst, avail)) & undecided
        return out

    def run(self, included: frozenset[int], undecided: set[int]):
        self.explored += 1
        inst, mode = self.inst, self.mode
        avail = self.zero | included | undecided
        if not feasible_on(inst, None, avail, mode):
            return
        force = self.forced(avail, undecided)
        included = included | force
        undecided = undecided - force
        chosen = self.zero | included
        if len(included) + _lower_bound(inst, chosen) >= self.best_cost:
            return
        if feasible_on(inst, None, chosen, mode):
            self.best_cost = len(included)
            self.best = chosen
            return
        if not undecided:
            return
        e = self.pick(chosen, undecided)
        self.run(included, undecided - {e})
        self.run(included | {e}, undecided - {e})

    def pick(self, chosen: frozenset[int], undecided: set[int]) -> int:
        # branch at an edge touching the most degree-deficient vertex
        inst = self.inst
        deg = [0] * inst.n
        for e in chosen:
            u, v = inst.endpoints(e)
            deg[u] += 1
            deg[v] += 1
        return min(undecided, key=lambda e: (min(deg[x] for x in inst.endpoints(e)), e))


def opt_bnb(inst: Instance, mode: Mode = Mode.TWO_VC) -> OptResult:
    """Branch and bound over the unit edges with forced-edge propagation and a degree bound."""
    mode = Mode.parse(mode)
    if len(inst.unit_edges) > BNB_LIMIT:
        raise TooLarge(f"{len(inst.unit_edges)} unit edges exceed the branch-and-bound limit {BNB_LIMIT}")

    def one(block: Instance) -> OptResult:
        search = _BnB(block, mode)
        search.run(frozenset(), set(block.unit_edges))
        if search.best is None:
            raise Infeasible("no feasible subgraph exists")
        return OptResult(search.best_cost, Solution(block, search.best), search.explored, Method.BNB)

    return _per_block(inst, mode, one, Method.BNB)


def optimum(inst: Instance, mode: Mode = Mode.TWO_VC, method: Method | str = Method.BNB) -> OptResult:
    method = Method(method)
    return opt_exhaustive(inst, mode) if method is Method.EXHAUSTIVE else opt_bnb(inst, mode)
