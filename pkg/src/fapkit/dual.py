"""Dual certificates for the cut-covering LP of FAP.

The dual has a variable ``y_S >= 0`` for every proper nonempty vertex subset
``S`` and ``z_e >= 0`` for every edge, with one constraint per edge::

    sum of y_S over the sets S that edge e crosses  <=  c(e) + z_e

and objective ``2 * sum(y_S) - sum(z_e)``.  Any feasible dual is a lower
bound on the cost of every 2-edge-connected spanning subgraph.  All values
are Fractions; nothing here touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .connectivity import EdgeView, Mode, is_feasible
from .errors import MalformedSet, PreconditionUnmet
from .graph import Instance, Solution
from .segments import degrees, special_segments

MAX_SETS = 10_000


@dataclass
class DualSolution:
    y: dict[frozenset[int], Fraction] = field(default_factory=dict)
    z: dict[int, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        self.y = {frozenset(s): Fraction(v) for s, v in self.y.items()}
        self.z = {int(e): Fraction(v) for e, v in self.z.items()}
        for s, v in self.y.items():
            if v < 0:
                raise ValueError(f"negative y on {sorted(s)}")
        for e, v in self.z.items():
            if v < 0:
                raise ValueError(f"negative z on edge {e}")
        if len(self.y) > MAX_SETS:
            raise ValueError(f"more than {MAX_SETS} dual sets")

    def scaled(self, factor: Fraction) -> "DualSolution":
        factor = Fraction(factor)
        return DualSolution({s: v * factor for s, v in self.y.items()}, {e: v * factor for e, v in self.z.items()})


@dataclass(frozen=True)
class Violation:
    edge: int
    load: Fraction
    capacity: Fraction

    @property
    def slack(self) -> Fraction:
        return self.capacity - self.load


def _check_sets(inst: Instance, d: DualSolution):
    for s in d.y:
        if not s or len(s) >= inst.n:
            raise MalformedSet(f"dual set {sorted(s)} must be proper and nonempty")
        if any(not 0 <= v < inst.n for v in s):
            raise MalformedSet(f"dual set {sorted(s)} names unknown vertices")
    for e in d.z:
        if not 0 <= e < inst.m:
            raise MalformedSet(f"z on unknown edge {e}")


def edge_loads(inst: Instance, d: DualSolution) -> list[Fraction]:
    loads = [Fraction(0)] * inst.m
    for s, val in d.y.items():
        if val == 0:
            continue
        for eid, (u, v, _) in enumerate(inst.edges):
            if (u in s) != (v in s):
                loads[eid] += val
    return loads


def check_feasible(inst: Instance, d: DualSolution) -> tuple[bool, list[Violation]]:
    _check_sets(inst, d)
    violations = []
    for eid, load in enumerate(edge_loads(inst, d)):
        capacity = inst.cost(eid) + d.z.get(eid, Fraction(0))
        if load > capacity:
            violations.append(Violation(eid, load, capacity))
    return not violations, violations


def objective(d: DualSolution) -> Fraction:
    return 2 * sum(d.y.values(), Fraction(0)) - sum(d.z.values(), Fraction(0))


@dataclass(frozen=True)
class DualityCheck:
    holds: bool
    objective: Fraction
    cost: int

    @property
    def gap(self) -> Fraction:
        return self.cost - self.objective


def weak_duality_check(inst: Instance, d: DualSolution, sol: Solution) -> DualityCheck:
    ok, bad = check_feasible(inst, d)
    if not ok:
        raise PreconditionUnmet(f"dual violates {len(bad)} edge constraints")
    if not is_feasible(EdgeView(inst, sol.member), Mode.TWO_EC):
        raise PreconditionUnmet("solution is not 2-edge-connected and spanning")
    value = objective(d)
    return DualityCheck(value <= sol.cost, value, sol.cost)


@dataclass(frozen=True)
class Clamp:
    vertex: int
    old: Fraction
    new: Fraction
    edge: int


HALF = Fraction(1, 2)
LEVELS = (Fraction(0), HALF, Fraction(1))


def singleton_dual(inst: Instance, sol: Solution, mode: Mode = Mode.TWO_VC) -> tuple[DualSolution, list[Clamp]]:
    """Dual values on single vertices, derived from the segment structure of ``sol``.

    Side vertices of special segments get 1, paid for by raising ``z`` by 1 on
    each zero-cost segment edge at that vertex.  High-degree vertices get 0.
    Every other vertex gets 1/2 if one of its solution edges costs 1 (raising
    ``z`` by 1/2 on an incident zero-cost edge whose ``z`` is still 0), else 0.

    Edges outside the solution can end up overloaded; the offending endpoint
    values are lowered to the largest of {0, 1/2, 1} that fits, edge by edge
    in id order, and each change is reported as a Clamp.
    """
    mode = Mode.parse(mode)
    deg = degrees(sol)
    member = sol.member
    y = {v: Fraction(0) for v in range(inst.n)}
    z: dict[int, Fraction] = {}
    fixed: set[int] = set()

    for seg in special_segments(sol, mode):
        for s in sorted(set(seg.side_vertices)):
            y[s] = Fraction(1)
            fixed.add(s)
            for e in seg.edges:
                if inst.cost(e) == 0 and s in inst.endpoints(e):
                    z[e] = z.get(e, Fraction(0)) + 1

    for w in range(inst.n):
        if w in fixed or deg[w] >= 3:
            continue
        incident = [e for e in inst.incidence[w] if e in member]
        if all(inst.cost(e) == 0 for e in incident):
            continue
        y[w] = HALF
        free = [e for e in incident if inst.cost(e) == 0 and z.get(e, 0) == 0]
        if free:
            z[free[0]] = HALF

    clamps = []
    for eid, (u, v, c) in enumerate(inst.edges):
        cap = c + z.get(eid, Fraction(0))
        while y[u] + y[v] > cap:
            x, other = (u, y[v]) if (y[u], u) > (y[v], v) else (v, y[u])
            fits = [val for val in LEVELS if val + other <= cap and val < y[x]]
            new = max(fits) if fits else Fraction(0)
            clamps.append(Clamp(x, y[x], new, eid))
            y[x] = new

    ys = {frozenset([v]): val for v, val in y.items() if val > 0}
    zs = {e: val for e, val in sorted(z.items()) if val > 0}
    return DualSolution(ys, zs), clamps


def parse_dual(text: str, inst: Instance) -> DualSolution:
    """Lines ``Y v1,v2,...,vk p/q`` and ``Z u v p/q``; ``#`` starts a comment."""
    y: dict[frozenset[int], Fraction] = {}
    z: dict[int, Fraction] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        toks = line.split()
        try:
            if toks[0] == "Y" and len(toks) == 3:
                s = frozenset(int(x) for x in toks[1].split(","))
                y[s] = y.get(s, Fraction(0)) + Fraction(toks[2])
            elif toks[0] == "Z" and len(toks) == 4:
                u, v = int(toks[1]), int(toks[2])
                if (min(u, v), max(u, v)) not in inst.edge_index:
                    raise MalformedSet(f"line {lineno}: no edge ({u},{v})")
                e = inst.edge_id(u, v)
                z[e] = z.get(e, Fraction(0)) + Fraction(toks[3])
            else:
                raise ValueError("unknown record")
        except MalformedSet:
            raise
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"line {lineno}: cannot parse {raw!r}") from None
    return DualSolution(y, z)


def serialize_dual(d: DualSolution, inst: Instance) -> str:
    lines = []
    for s, val in sorted(d.y.items(), key=lambda kv: (len(kv[0]), sorted(kv[0]))):
        lines.append(f"Y {','.join(map(str, sorted(s)))} {val.numerator}/{val.denominator}")
    for e, val in sorted(d.z.items()):
        u, v = inst.endpoints(e)
        lines.append(f"Z {u} {v} {val.numerator}/{val.denominator}")
    return "\n".join(lines) + ("\n" if lines else "")
