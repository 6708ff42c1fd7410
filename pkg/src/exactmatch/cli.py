"""Command-line entry point.

Exit codes: 0 success, 1 no result (no evidence / not found / "No"),
2 usage error, 3 parse error, 4 infeasible, 5 unsupported, 6 invalid parameter.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import approx, bench, fileformat, fpt, oracle, reductions
from .errors import InvalidParameter, ParseError, Unsupported
from .generate import FAMILIES, GeneratorSpec, generate
from .report import SolveReport, Status

EXIT_OK, EXIT_NO_RESULT, EXIT_USAGE, EXIT_PARSE, EXIT_INFEASIBLE, EXIT_UNSUPPORTED, EXIT_INVALID = range(7)

SOLVE_KINDS = ("em-relaxed", "ewpm-relaxed", "tkpm-0.5", "tkpm-0.8", "tkpm-fpt-alpha", "tkpm-fpt-beta",
               "em-fpt-circ", "min-tkpm")
ORACLE_KINDS = ("em", "ewpm", "mwem", "tkpm", "min-tkpm", "count")
DIRECTIONS = ("tkpm-to-mwem", "mwem-to-ewpm", "ewpm-to-em", "truncate")


class _Usage(Exception):
    pass


def _param(args, problem, name, flag=None, required=True):
    val = getattr(args, flag or name, None)
    if val is None:
        val = problem.get(name)
    if val is None and required:
        raise _Usage(f"missing parameter {name} (flag or '{name}' line)")
    return val


def _plan(args, problem):
    seed = args.seed if args.seed is not None else problem.get("seed", 0)
    return fpt.ColorCodingPlan(mode=args.mode, seed=seed, trials=args.trials)


def _exit_for(status: Status) -> int:
    return {Status.OK: EXIT_OK, Status.INFEASIBLE: EXIT_INFEASIBLE}.get(status, EXIT_NO_RESULT)


def cmd_solve(args, out) -> int:
    graph, problem = fileformat.read(args.file)
    kind = args.kind
    if kind == "em-relaxed":
        k = _param(args, problem, "k")
        res = approx.em_relaxed_bipartite(graph, k)
        rep = SolveReport.build("em-relaxed", graph, res.matching, k, res.status,
                                counters={"iterations": res.iterations, "trace": [g for g, _ in res.trace]},
                                certificate={"in_band": res.in_band})
    elif kind == "ewpm-relaxed":
        rep = approx.ewpm_relaxed(graph, _param(args, problem, "W"), _param(args, problem, "f", required=False))
    elif kind in ("tkpm-0.5", "tkpm-0.8"):
        k = _param(args, problem, "k")
        eps = _param(args, problem, "eps", "epsilon", required=False)
        cfg = approx.ApproxConfig(epsilon=None if eps is None else Fraction(eps))
        fn = approx.tkpm_half_approx if kind == "tkpm-0.5" else approx.tkpm_08_approx_bipartite
        rep = fn(graph, k, cfg)
    elif kind == "tkpm-fpt-alpha":
        plan = _plan(args, problem)
        rep = fpt.tkpm_fpt_alpha(graph, _param(args, problem, "k"), _param(args, problem, "alpha"), plan)
        rep.counters.update({f"plan.{key}": val for key, val in plan.stats.items()})
    elif kind == "tkpm-fpt-beta":
        plan = _plan(args, problem)
        rep = fpt.tkpm_fpt_beta(graph, _param(args, problem, "k"), _param(args, problem, "beta"), plan)
        rep.counters.update({f"plan.{key}": val for key, val in plan.stats.items()})
    elif kind == "em-fpt-circ":
        plan = _plan(args, problem)
        rep = fpt.em_fpt_circumference(graph, _param(args, problem, "k"), _param(args, problem, "c", "circ"), plan)
    else:
        rep = reductions.solve_min_tkpm(graph, _param(args, problem, "k"))
    out.write(rep.to_text(graph))
    return _exit_for(rep.status)


def cmd_oracle(args, out) -> int:
    graph, problem = fileformat.read(args.file, allow_zero=True)
    cap = args.cap
    kind = args.kind
    if kind == "count":
        out.write(f"perfect_matchings {sum(1 for _ in oracle.enumerate_pms(graph, cap))}\n")
        return EXIT_OK
    if kind == "em":
        k = _param(args, problem, "k")
        m = oracle.em_oracle(graph, k, cap)
        out.write(f"answer {'yes' if m is not None else 'no'}\n")
        if m is None:
            return EXIT_NO_RESULT
        rep = SolveReport.build("oracle-em", graph, m, k)
    elif kind == "ewpm":
        m = oracle.ewpm_oracle(graph, _param(args, problem, "W"), cap)
        out.write(f"answer {'yes' if m is not None else 'no'}\n")
        if m is None:
            return EXIT_NO_RESULT
        rep = SolveReport.build("oracle-ewpm", graph, m)
    else:
        k = _param(args, problem, "k")
        fn = {"mwem": oracle.mwem_oracle, "tkpm": oracle.tkpm_oracle, "min-tkpm": oracle.min_tkpm_oracle}[kind]
        res = fn(graph, k, cap)
        if res is None and kind == "mwem" and next(oracle.enumerate_pms(graph, cap), None) is not None:
            out.write("answer no\n")
            return EXIT_NO_RESULT
        if res is None:
            out.write("status infeasible\n")
            return EXIT_INFEASIBLE
        rep = SolveReport.build(f"oracle-{kind}", graph, res[1], k, certificate={"optimum": res[0]})
    out.write(rep.to_text(graph))
    return EXIT_OK


def cmd_reduce(args, out) -> int:
    graph, problem = fileformat.read(args.file, allow_zero=True)
    cert: dict
    if args.direction == "tkpm-to-mwem":
        k = _param(args, problem, "k")
        inst = reductions.tkpm_to_mwem(graph, k, args.guess_edge - 1)
        target, tprob = inst.graph, fileformat.Problem("mwem", {"k": k})
        cert = {"reduction": "tkpm-to-mwem", "k": k, "guess_edge": args.guess_edge}
    elif args.direction == "mwem-to-ewpm":
        k = _param(args, problem, "k")
        red = reductions.mwem_to_ewpm(graph, k)
        lo, hi = red.band()
        target, tprob = red.target, fileformat.Problem("ewpm", {"k": k})
        cert = {"reduction": "mwem-to-ewpm", "k": k, "w_max": red.w_max, "shift": red.shift,
                "band": [str(lo), str(hi)]}
    elif args.direction == "ewpm-to-em":
        W = _param(args, problem, "W")
        target, k, rc = reductions.ewpm_to_em(graph, W)
        tprob = fileformat.Problem("em", {"k": k})
        cert = rc.as_dict()
    else:
        W = _param(args, problem, "W")
        f = _param(args, problem, "f", required=False) or 4 * graph.n ** 2
        tr = reductions.truncate_weights(graph, W, f)
        target, tprob = tr.graph, fileformat.Problem("ewpm", {"f": f})
        cert = {"reduction": "truncate", "W": W, "f": f, "kept": [i + 1 for i in tr.kept]}
    text = fileformat.emit(target, tprob)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)
    if args.cert:
        with open(args.cert, "w", encoding="utf-8") as fh:
            json.dump(cert, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return EXIT_OK


def cmd_gen(args, out) -> int:
    spec = GeneratorSpec(args.family, args.n, args.p, args.w_min, args.w_max, args.red_p,
                         args.seed if args.seed is not None else 0)
    graph = generate(spec)
    params = {}
    if args.k is not None:
        params["k"] = args.k
    text = fileformat.emit(graph, fileformat.Problem(args.kind, params))
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)
    return EXIT_OK


def cmd_bench(args, out) -> int:
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            data = json.load(fh)
    else:
        data = {"solvers": args.solvers.split(",") if args.solvers else [],
                "instances": [{"family": args.family, "n": args.n, "count": args.count}] if args.count else []}
    if args.seed is not None:
        data["seed"] = args.seed
    if args.no_timing:
        data["record_time"] = False
    if args.epsilon is not None:
        data["epsilon"] = args.epsilon
    csv_text = bench.run_suite(bench.SuiteConfig.from_dict(data))
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(csv_text)
    else:
        out.write(csv_text)
    return EXIT_OK


def cmd_verify(args, out) -> int:
    graph, problem = fileformat.read(args.file)
    alpha = _param(args, problem, "alpha", required=False)
    beta = _param(args, problem, "beta", required=False)
    c = _param(args, problem, "c", "circ", required=False)
    rep = fpt.verify_parameters(graph, alpha, beta, c, cap=args.cap, compute_all=not (alpha or beta or c))
    for line in rep.lines():
        out.write(line + "\n")
    out.write(f"sound {'true' if rep.sound else 'false'}\n")
    return EXIT_OK if rep.sound else EXIT_NO_RESULT


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="exactmatch", description="Exact matching, exact-weight and top-k perfect matching.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int)
        p.add_argument("--cap", type=int, default=oracle.DEFAULT_CAP)

    p = sub.add_parser("solve", help="run one solver on an instance file")
    p.add_argument("kind", choices=SOLVE_KINDS)
    p.add_argument("file")
    p.add_argument("--k", type=int)
    p.add_argument("--W", type=int)
    p.add_argument("--f", type=int)
    p.add_argument("--epsilon", type=Fraction)
    p.add_argument("--alpha", type=int)
    p.add_argument("--beta", type=int)
    p.add_argument("--circ", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--mode", choices=("auto", "random", "exhaustive"), default="auto")
    common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("oracle", help="brute-force ground truth")
    p.add_argument("kind", choices=ORACLE_KINDS)
    p.add_argument("file")
    p.add_argument("--k", type=int)
    p.add_argument("--W", type=int)
    common(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("reduce", help="apply one reduction and write the target instance")
    p.add_argument("file")
    p.add_argument("--direction", choices=DIRECTIONS, required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--W", type=int)
    p.add_argument("--f", type=int)
    p.add_argument("--guess-edge", type=int, default=1, help="1-based edge id used as the k-th edge")
    p.add_argument("-o", "--output")
    p.add_argument("--cert", help="write the reduction certificate (JSON) here")
    common(p)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("gen", help="generate an instance")
    p.add_argument("family", choices=FAMILIES)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--w-min", type=int, default=1)
    p.add_argument("--w-max", type=int, default=10)
    p.add_argument("--red-p", type=float, default=0.5)
    p.add_argument("--kind", choices=fileformat.KINDS, default="graph")
    p.add_argument("--k", type=int)
    p.add_argument("-o", "--output")
    common(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="run a benchmark suite and write CSV")
    p.add_argument("--config", help="JSON suite configuration")
    p.add_argument("--solvers", help="comma-separated solver names")
    p.add_argument("--family", choices=FAMILIES, default="random-bipartite-with-planted-pm")
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--count", type=int, default=0)
    p.add_argument("--epsilon", type=str)
    p.add_argument("--no-timing", action="store_true", help="write 0 wall times for byte-identical output")
    p.add_argument("-o", "--output")
    common(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("verify-params", help="brute-force alpha, beta, circumference")
    p.add_argument("file")
    p.add_argument("--alpha", type=int)
    p.add_argument("--beta", type=int)
    p.add_argument("--circ", type=int)
    common(p)
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except Unsupported as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except InvalidParameter as exc:
        print(f"invalid parameter: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except _Usage as exc:
        print(f"usage: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
