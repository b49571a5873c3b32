"""Seeded instance generators, algorithm-vs-optimum comparison and ratio search."""

from __future__ import annotations

import csv
import io
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from fractions import Fraction
from pathlib import Path

from .connectivity import Mode
from .errors import ParamsInvalid
from .graph import DisjointSet, Instance, Solution, serialize_instance
from .oracle import Method, OptResult, optimum
from .solver import RunReport, format_trace, solve

FAMILIES = ("cycle", "theta", "wheel", "tap_path", "map_matching")
CSV_COLUMNS = ("seed", "n", "m", "m0", "alg_cost", "opt_cost", "ratio", "ratio_decimal", "mode")
THREE_HALVES = Fraction(3, 2)


@dataclass(frozen=True)
class GenParams:
    n: int
    extra_edges: int = 0
    zero_fraction: float = 0.0
    seed: int = 0
    mode: Mode = Mode.TWO_VC

    def validate(self):
        if self.n < 3:
            raise ParamsInvalid("n must be at least 3")
        if not 0 <= self.extra_edges <= self.n * (self.n - 3) // 2:
            raise ParamsInvalid(f"extra_edges must lie in [0, {self.n * (self.n - 3) // 2}] for n={self.n}")
        if not 0.0 <= self.zero_fraction <= 1.0:
            raise ParamsInvalid("zero_fraction must lie in [0, 1]")

    def with_seed(self, seed: int) -> "GenParams":
        return GenParams(self.n, self.extra_edges, self.zero_fraction, seed, self.mode)


def gen_random(p: GenParams) -> Instance:
    """Random Hamiltonian cycle plus ``extra_edges`` random chords; then a random
    acyclic subset of roughly ``zero_fraction * m`` edges is made free.

    Edges are emitted sorted by endpoint pair; the output depends only on ``p``.
    """
    p.validate()
    rng = random.Random(p.seed)
    order = list(range(p.n))
    rng.shuffle(order)
    pairs = {tuple(sorted((order[i], order[(i + 1) % p.n]))) for i in range(p.n)}
    chords = [(u, v) for u in range(p.n) for v in range(u + 1, p.n) if (u, v) not in pairs]
    pairs.update(rng.sample(chords, p.extra_edges))
    pairs = sorted(pairs)

    target = min(round(p.zero_fraction * len(pairs)), p.n - 1)
    zero: set[tuple[int, int]] = set()
    forest = DisjointSet(p.n)
    candidates = pairs[:]
    rng.shuffle(candidates)
    for u, v in candidates:
        if len(zero) >= target:
            break
        if forest.union(u, v):
            zero.add((u, v))
    return Instance(p.n, tuple((u, v, 0 if (u, v) in zero else 1) for u, v in pairs))


def gen_family(name: str, k: int) -> Instance:
    """Closed-form families.

    cycle(k)         C_k, all unit (k >= 3).
    theta(k)         two poles joined by three paths with k inner vertices each, all unit.
    wheel(k)         hub 0 joined to a rim cycle 1..k, all unit (k >= 3).
    tap_path(k)      zero-cost path 0-1-..-(k-1) plus unit edges (i, i+2) (k >= 3).
    map_matching(k)  unit cycle on 2k vertices plus zero-cost chords (i, i+k) (k >= 2).
    """
    if name == "cycle":
        if k < 3:
            raise ParamsInvalid("cycle needs k >= 3")
        edges = [(i, (i + 1) % k, 1) for i in range(k)]
        return Instance(k, tuple(edges))
    if name == "theta":
        if k < 1:
            raise ParamsInvalid("theta needs k >= 1")
        edges, nxt = [], 2
        for _ in range(3):
            prev = 0
            for _ in range(k):
                edges.append((prev, nxt, 1))
                prev, nxt = nxt, nxt + 1
            edges.append((prev, 1, 1))
        return Instance(nxt, tuple(edges))
    if name == "wheel":
        if k < 3:
            raise ParamsInvalid("wheel needs k >= 3")
        edges = [(0, i, 1) for i in range(1, k + 1)]
        edges += [(i, i % k + 1, 1) for i in range(1, k + 1)]
        return Instance(k + 1, tuple(edges))
    if name == "tap_path":
        if k < 3:
            raise ParamsInvalid("tap_path needs k >= 3")
        edges = [(i, i + 1, 0) for i in range(k - 1)]
        edges += [(i, i + 2, 1) for i in range(k - 2)]
        return Instance(k, tuple(edges))
    if name == "map_matching":
        if k < 2:
            raise ParamsInvalid("map_matching needs k >= 2")
        n = 2 * k
        edges = [(i, (i + 1) % n, 1) for i in range(n)]
        edges += [(i, i + k, 0) for i in range(k)]
        return Instance(n, tuple(edges))
    raise ParamsInvalid(f"unknown family {name!r}; choose from {', '.join(FAMILIES)}")


@dataclass(frozen=True)
class Comparison:
    instance: Instance
    mode: Mode
    alg: Solution
    opt: OptResult
    report: RunReport
    seed: int | None = None
    opt_mode: Mode | None = None

    @property
    def alg_cost(self) -> int:
        return self.alg.cost

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.alg.cost, self.opt.opt_cost)

    def row(self) -> dict[str, str]:
        inst = self.instance
        return {
            "seed": "" if self.seed is None else str(self.seed),
            "n": str(inst.n),
            "m": str(inst.m),
            "m0": str(len(inst.zero_edges)),
            "alg_cost": str(self.alg.cost),
            "opt_cost": str(self.opt.opt_cost),
            "ratio": f"{self.ratio.numerator}/{self.ratio.denominator}",
            "ratio_decimal": f"{float(self.ratio):.6f}",
            "mode": self.mode.value if self.opt_mode in (None, self.mode) else f"{self.mode.value}-vs-{self.opt_mode.value}",
        }


def compare(
    inst: Instance,
    mode: Mode = Mode.TWO_VC,
    method: Method = Method.BNB,
    seed: int | None = None,
    opt_mode: Mode | None = None,
) -> Comparison:
    """Run the algorithm and the exact oracle on one instance.

    The oracle optimizes in ``opt_mode`` (default: the algorithm's mode).
    """
    mode = Mode.parse(mode)
    opt_mode = mode if opt_mode is None else Mode.parse(opt_mode)
    alg, report = solve(inst, mode)
    opt = optimum(inst, opt_mode, method)
    if opt.witness.cost != opt.opt_cost:
        raise AssertionError("oracle witness cost disagrees with its optimum")
    return Comparison(inst, mode, alg, opt, report, seed, opt_mode)


def rows_to_csv(rows: list[dict[str, str]]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def persist_violation(cmp: Comparison, root: Path) -> Path:
    """Write instance, trace and both witnesses of a ratio above 3/2."""
    tag = f"seed{cmp.seed}" if cmp.seed is not None else cmp.instance.fingerprint()[:12]
    label = cmp.row()["mode"]
    out = Path(root) / f"violation-{label}-{tag}"
    out.mkdir(parents=True, exist_ok=True)
    (out / "instance.txt").write_text(serialize_instance(cmp.instance))
    (out / "trace.txt").write_text(format_trace(cmp.instance, cmp.alg, cmp.report))
    (out / "alg_witness.txt").write_text(" ".join(map(str, cmp.alg.sorted_edges())) + "\n")
    (out / "opt_witness.txt").write_text(" ".join(map(str, cmp.opt.witness.sorted_edges())) + "\n")
    (out / "summary.txt").write_text(
        f"alg_cost={cmp.alg.cost}\nopt_cost={cmp.opt.opt_cost}\nratio={cmp.ratio}\nmode={label}\n"
    )
    return out


def trial_seed(seed: int, trial: int) -> int:
    return (seed ^ trial) & 0xFFFFFFFFFFFFFFFF


def _run_trial(p: GenParams, opt_mode: Mode | None = None) -> Comparison:
    return compare(gen_random(p), p.mode, seed=p.seed, opt_mode=opt_mode)


def run_params(params: list[GenParams], workers: int = 1, opt_mode: Mode | None = None) -> list[Comparison]:
    """Compare on every parameter set; results come back in input order."""
    job = partial(_run_trial, opt_mode=opt_mode)
    if workers <= 1:
        return [job(p) for p in params]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(job, params, chunksize=max(1, len(params) // (4 * workers))))


@dataclass(frozen=True)
class SearchResult:
    worst: Comparison
    ratio: Fraction
    trials: int
    violations: list[Comparison]
    rows: list[dict[str, str]]


def worst_case_search(
    p: GenParams,
    trials: int,
    workers: int = 1,
    violation_dir: Path | None = None,
    opt_mode: Mode | None = None,
) -> SearchResult:
    """Largest observed alg/opt ratio over ``trials`` instances with seeds ``p.seed ^ t``.

    Ties keep the earliest trial.  Ratios above 3/2 are written under
    ``violation_dir`` when given.
    """
    if trials < 1:
        raise ParamsInvalid("trials must be positive")
    params = [p.with_seed(trial_seed(p.seed, t)) for t in range(trials)]
    results = run_params(params, workers, opt_mode)
    worst = results[0]
    for cmp in results[1:]:
        if cmp.ratio > worst.ratio:
            worst = cmp
    violations = [c for c in results if c.ratio > THREE_HALVES]
    if violation_dir is not None:
        for c in violations:
            persist_violation(c, violation_dir)
    return SearchResult(worst, worst.ratio, trials, violations, [c.row() for c in results])
