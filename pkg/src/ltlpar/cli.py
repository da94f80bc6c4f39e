"""Command line entry points: ``python -m ltlpar <command> ...``."""

from __future__ import annotations

import argparse
import logging
import os
import sys

from .formula import ParseError, parse, read_formula_file, render
from .gen import GenConfig, gen, write_corpus
from .jobs import EXIT_ERROR, EXIT_SAT, EXIT_UNSAT, JobEnvError, JobError, orchestrate, parse_job_env, run_job
from .tableau import SAT, Budget, format_witness


def _csv_ints(text: str) -> list:
    return [int(x) for x in text.split(",") if x.strip()]


def _seconds(text: str) -> float:
    return float(text[:-1]) if text.endswith("s") else float(text)


def _formula(args):
    if args.formula is not None:
        return parse(args.formula)
    if args.file is not None:
        return read_formula_file(args.file)
    raise SystemExit("give a formula with -l or --file")


def _budget(args) -> Budget:
    return Budget(args.max_vertices, args.max_seconds)


def _add_formula_args(p):
    p.add_argument("-l", dest="formula", help="formula text")
    p.add_argument("--file", help="read the formula from a file")
    p.add_argument("--max-vertices", type=int, default=None)
    p.add_argument("--max-seconds", type=float, default=None)


def cmd_solve(args) -> int:
    from .profiler import TraceRecorder, write_trace

    f = _formula(args)
    job_env = os.environ.get("JOB_NO")
    spec = parse_job_env(job_env) if job_env else None
    hooks = []
    rec = None
    if args.trace:
        d = args.split_depth if args.split_depth else (spec.split_depth if spec else None)
        rec = TraceRecorder(d)
        hooks.append(rec)
    out = run_job(f, spec, budget=_budget(args), hooks=hooks)
    if rec is not None:
        write_trace(rec.trace(), args.trace, rec.split_depth)
    if out.verdict is None:
        print(f"Error: {out.error}")
        return EXIT_ERROR
    print(out.verdict.outcome)
    if out.verdict.outcome == SAT:
        print(format_witness(out.verdict.witness))
    if args.stats:
        s = out.stats
        print(f"vertices: {s.vertices_expanded}  max depth: {s.max_depth}  seconds: {s.duration:.4f}",
              file=sys.stderr)
    return out.exit_code


def _traced_job(prefix):
    from .profiler import TraceRecorder, write_trace

    def job(formula, spec, budget=None, cancel=None):
        rec = TraceRecorder(spec.split_depth)
        try:
            return run_job(formula, spec, budget=budget, cancel=cancel, hooks=[rec])
        finally:
            write_trace(rec.trace(), f"{prefix}.job{spec.job_no}", spec.split_depth)

    return job


def cmd_parallel(args) -> int:
    job_fn = _traced_job(args.trace) if args.trace else None
    try:
        v = orchestrate(_formula(args), args.jobs, args.split_depth, args.workers,
                        budget=_budget(args), mode=args.mode, job_fn=job_fn)
    except JobError as e:
        print(f"Error: {e}")
        return EXIT_ERROR
    if v.outcome == SAT:
        print(format_witness(v.witness))
        return EXIT_SAT
    return EXIT_UNSAT


def cmd_profile(args) -> int:
    from . import profiler

    traces = profiler.load_traces(args.trace)
    if args.estimate:
        n, d = _csv_ints(args.estimate)
        for name, tr in traces.items():
            if len(traces) > 1:
                print(f"# {name}")
            est = profiler.estimate_jobs(tr, n, d, weight=args.weight)
            sys.stdout.write(profiler.format_estimate(est))
    elif args.sweep:
        jobs, depths = _csv_ints(args.sweep[0]), _csv_ints(args.sweep[1])
        grid = profiler.sweep(traces, jobs, depths, weight=args.weight)
        sys.stdout.write(profiler.format_sweep(grid, jobs, depths))
    else:
        profiles = {name: profiler.width_profile(tr) for name, tr in traces.items()}
        sys.stdout.write(profiler.format_width(profiles))
    return 0


def cmd_gen(args) -> int:
    if args.out:
        for p in write_corpus(args.out, args.length, args.count, args.seed):
            print(p)
    else:
        for s in range(args.seed, args.seed + args.count):
            print(render(gen(GenConfig(args.length, s))))
    return 0


def cmd_bench(args) -> int:
    from .bench import ingest, run_suite

    items = ingest(args.dir)
    report = run_suite(items, _csv_ints(args.jobs), _csv_ints(args.depths),
                       Budget(args.max_vertices, _seconds(args.budget)), workers=args.workers)
    if args.out:
        report.write(args.out)
    sys.stdout.write(report.summary())
    return 0


def cmd_oracle(args) -> int:
    from .oracle import decide_reference

    verdict = decide_reference(_formula(args))
    print(verdict)
    return EXIT_SAT if verdict == SAT else EXIT_UNSAT


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ltlpar", description="Partitioned one-pass LTL tableau")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="serial solve; honours JOB_NO=<j>/<n>@<d>")
    _add_formula_args(p)
    p.add_argument("--trace", help="write a vertex trace to this file")
    p.add_argument("--split-depth", type=int, default=None, help="split depth for trace crossing indices")
    p.add_argument("--stats", action="store_true")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("parallel", help="run n jobs and vote")
    _add_formula_args(p)
    p.add_argument("-n", "--jobs", type=int, required=True)
    p.add_argument("-d", "--split-depth", type=int, required=True)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--mode", choices=("thread", "process"), default="thread")
    p.add_argument("--trace", help="write per-job traces to <path>.job<j>")
    p.set_defaults(func=cmd_parallel)

    p = sub.add_parser("profile", help="analyse vertex traces")
    p.add_argument("--trace", action="append", required=True)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--width", action="store_true", help="vertices per depth (default)")
    g.add_argument("--estimate", metavar="N,D")
    g.add_argument("--sweep", nargs=2, metavar=("JOBS", "DEPTHS"), help="e.g. --sweep 1,2,8 16,18,20")
    p.add_argument("--weight", choices=("count", "time"), default="count")
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("gen", help="random formulas")
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="benchmark a corpus directory")
    p.add_argument("--dir", required=True)
    p.add_argument("--jobs", default="1,2,8")
    p.add_argument("--depths", default="18")
    p.add_argument("--budget", default="60s")
    p.add_argument("--max-vertices", type=int, default=None)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--out")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("oracle", help="reference decision procedure (small formulas)")
    p.add_argument("-l", dest="formula")
    p.add_argument("--file")
    p.set_defaults(func=cmd_oracle)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (ParseError, JobEnvError, ValueError, OSError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
