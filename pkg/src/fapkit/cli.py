"""fapkit command line.

Exit codes:
  0  success
  1  dual certificate infeasible or weak duality fails
  2  usage error or malformed input file
  3  infeasible input (disconnected graph or a bridge)
  4  instance too large for the oracle
  5  trace does not replay to the recorded solution

Results go to stdout as key=value lines or CSV; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from .connectivity import Mode
from .dual import check_feasible, objective, parse_dual, serialize_dual, singleton_dual, weak_duality_check
from .errors import (
    BridgeInInput,
    DisconnectedInput,
    Infeasible,
    InstanceError,
    MalformedSet,
    ParamsInvalid,
    TooLarge,
    TraceMismatch,
)
from .graph import read_instance, serialize_instance
from .instances import (
    FAMILIES,
    THREE_HALVES,
    GenParams,
    compare,
    gen_family,
    gen_random,
    persist_violation,
    rows_to_csv,
    run_params,
    trial_seed,
)
from .oracle import Method, optimum
from .solver import format_trace, replay, solve

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_PARSE = 2
EXIT_INFEASIBLE = 3
EXIT_TOO_LARGE = 4
EXIT_TRACE = 5


def _ids(items) -> str:
    return ",".join(map(str, items))


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_solve(args) -> int:
    inst = read_instance(args.instance)
    sol, report = solve(inst, args.mode)
    census = report.segment_census
    lines = [
        f"mode={report.mode.value}",
        f"n={inst.n}",
        f"m={inst.m}",
        f"blocks={len(report.blocks)}",
        f"step1_cost={report.step1_cost}",
        f"cost={sol.cost}",
        f"edges={_ids(sol.sorted_edges())}",
        f"step1_removed={len(report.step1_removed)}",
        f"pushes={report.pushes}",
        f"max_pushes_per_edge={report.max_pushes_per_edge}",
        f"reading_divergences={report.reading_divergences}",
    ]
    lines += [f"segments_{k}={v}" for k, v in census.items()]
    _emit("\n".join(lines) + "\n", args.out)
    if args.trace:
        Path(args.trace).write_text(format_trace(inst, sol, report))
    return EXIT_OK


def cmd_oracle(args) -> int:
    inst = read_instance(args.instance)
    res = optimum(inst, args.mode, args.method)
    _emit(
        f"mode={args.mode.value}\nmethod={res.method.value}\nopt_cost={res.opt_cost}\n"
        f"explored={res.explored}\nedges={_ids(res.witness.sorted_edges())}\n",
        args.out,
    )
    return EXIT_OK


def cmd_compare(args) -> int:
    rows = []
    for path in args.instances:
        cmp = compare(read_instance(path), args.mode, args.method, opt_mode=args.opt_mode)
        rows.append(cmp.row())
    _emit(rows_to_csv(rows), args.out)
    return EXIT_OK


def cmd_gen(args) -> int:
    if args.family:
        inst = gen_family(args.family, args.k)
    else:
        inst = gen_random(GenParams(args.n, args.extra, args.zero_fraction, args.seed, args.mode))
    _emit(serialize_instance(inst), args.out)
    return EXIT_OK


def _read_manifest(path: str, mode: Mode) -> list[GenParams]:
    """CSV with header n,extra_edges,zero_fraction,seed and an optional mode column."""
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(line for line in fh if not line.startswith("#")))
    params = []
    for i, row in enumerate(rows, 2):
        try:
            params.append(
                GenParams(
                    int(row["n"]),
                    int(row["extra_edges"]),
                    float(row["zero_fraction"]),
                    int(row["seed"]),
                    Mode.parse(row["mode"]) if row.get("mode") else mode,
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InstanceError(f"manifest row {i}: {exc}") from None
    return params


def cmd_batch(args) -> int:
    if args.manifest:
        params = _read_manifest(args.manifest, args.mode)
    elif args.trials:
        base = GenParams(args.n, args.extra, args.zero_fraction, args.seed, args.mode)
        params = [base.with_seed(trial_seed(args.seed, t)) for t in range(args.trials)]
    else:
        print("batch needs a manifest or --trials", file=sys.stderr)
        return EXIT_PARSE
    for p in params:
        p.validate()
    results = run_params(params, args.workers, args.opt_mode)
    _emit(rows_to_csv([c.row() for c in results]), args.out)

    violations = [c for c in results if c.ratio > THREE_HALVES]
    for c in violations:
        persist_violation(c, Path(args.artifacts))
    worst = max(results, key=lambda c: c.ratio, default=None)
    print(f"rows={len(results)}", file=sys.stderr)
    if worst is not None:
        print(f"max_ratio={worst.ratio} max_ratio_seed={worst.seed}", file=sys.stderr)
    print(f"violations={len(violations)}", file=sys.stderr)
    return EXIT_OK


def cmd_check_dual(args) -> int:
    inst = read_instance(args.instance)
    sol, _ = solve(inst, args.mode)
    lines = []
    if args.dual:
        d = parse_dual(Path(args.dual).read_text(), inst)
    else:
        d, clamps = singleton_dual(inst, sol, args.mode)
        lines.append(f"clamps={len(clamps)}")
        for c in clamps:
            print(f"clamp vertex={c.vertex} {c.old}->{c.new} edge={c.edge}", file=sys.stderr)
        if args.write_dual:
            Path(args.write_dual).write_text(serialize_dual(d, inst))
    ok, violations = check_feasible(inst, d)
    value = objective(d)
    lines += [f"feasible={str(ok).lower()}", f"objective={value}", f"violations={len(violations)}"]
    lines += [f"violation edge={v.edge} load={v.load} capacity={v.capacity}" for v in violations]
    code = EXIT_OK if ok else EXIT_CHECK_FAILED
    if ok:
        check = weak_duality_check(inst, d, sol)
        lines += [f"solution_cost={check.cost}", f"weak_duality={str(check.holds).lower()}", f"gap={check.gap}"]
        if not check.holds:
            code = EXIT_CHECK_FAILED
    _emit("\n".join(lines) + "\n", args.out)
    return code


def cmd_replay(args) -> int:
    inst = read_instance(args.instance)
    sol = replay(inst, Path(args.trace).read_text())
    _emit(f"replay=ok\ncost={sol.cost}\nedges={_ids(sol.sorted_edges())}\n", args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fapkit", description="Forest augmentation: solver, oracle and certificates.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, mode=True):
        if mode:
            p.add_argument("--mode", type=Mode.parse, default=Mode.TWO_VC, help="2vc (default) or 2ec")
        p.add_argument("--out", help="write results here instead of stdout")

    p = sub.add_parser("solve", help="run the two-step algorithm")
    p.add_argument("instance")
    p.add_argument("--trace", help="write the event trace to this path")
    common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("oracle", help="exact optimum for small instances")
    p.add_argument("instance")
    p.add_argument("--method", type=Method, default=Method.BNB, choices=list(Method))
    common(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("compare", help="algorithm cost vs exact optimum, one CSV row per file")
    p.add_argument("instances", nargs="+")
    p.add_argument("--method", type=Method, default=Method.BNB, choices=list(Method))
    p.add_argument("--opt-mode", type=Mode.parse, default=None, help="oracle mode (default: --mode)")
    common(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("gen", help="generate an instance file")
    p.add_argument("--family", choices=FAMILIES)
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--extra", type=int, default=0)
    p.add_argument("--zero-fraction", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    common(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("batch", help="seeded comparisons from a manifest or --trials")
    p.add_argument("manifest", nargs="?")
    p.add_argument("--trials", type=int, default=0)
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--extra", type=int, default=0)
    p.add_argument("--zero-fraction", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--opt-mode", type=Mode.parse, default=None, help="oracle mode (default: --mode)")
    p.add_argument("--artifacts", default="violations", help="directory for ratio > 3/2 cases")
    common(p)
    p.set_defaults(func=cmd_batch)

    p = sub.add_parser("check-dual", help="verify a dual certificate against the algorithm's solution")
    p.add_argument("instance")
    p.add_argument("dual", nargs="?", help="dual file; omitted = build the singleton dual")
    p.add_argument("--write-dual", help="save the singleton dual here")
    common(p)
    p.set_defaults(func=cmd_check_dual)

    p = sub.add_parser("replay", help="re-execute a trace and confirm its final solution")
    p.add_argument("instance")
    p.add_argument("trace")
    common(p, mode=False)
    p.set_defaults(func=cmd_replay)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InstanceError, MalformedSet, ParamsInvalid, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (DisconnectedInput, BridgeInInput, Infeasible) as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except TooLarge as exc:
        print(f"too large: {exc}", file=sys.stderr)
        return EXIT_TOO_LARGE
    except TraceMismatch as exc:
        print(f"trace mismatch: {exc}", file=sys.stderr)
        return EXIT_TRACE


if __name__ == "__main__":
    sys.exit(main())
