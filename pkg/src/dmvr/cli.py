"""Command line entry point: ``dmvr simulate | sweep | bounds | verify``."""
import argparse
import csv
import sys
import warnings
from pathlib import Path

from . import analysis, verify
from .engine import VARIANTS, Scenario, counts_from_fractions, run
from .errors import DMVRError
from .experiments import Manifest, builtin_manifest, run_manifest, write_csv, write_runs_csv
from .graph import build_topology

BUILTINS = ("fig3", "fig4", "fig5a", "fig5b", "fig6", "fig7")


def _floats(text):
    return [float(x) for x in text.split(",") if x.strip()]


def _ints(text):
    return [int(x) for x in text.split(",") if x.strip()]


def _add_topology(p):
    p.add_argument("--topology", choices=("complete", "ring", "torus", "edgelist"),
                   default="complete")
    p.add_argument("--n", type=int, default=100, help="node count (complete, ring)")
    p.add_argument("--rows", type=int, default=10)
    p.add_argument("--cols", type=int, default=10)
    p.add_argument("--edges", help="edge-list file for --topology edgelist")


def _topology_spec(args):
    if args.topology == "torus":
        return {"kind": "torus", "rows": args.rows, "cols": args.cols}
    if args.topology == "edgelist":
        if not args.edges:
            raise DMVRError("--topology edgelist needs --edges PATH")
        return {"kind": "edgelist", "path": args.edges}
    return {"kind": args.topology, "n": args.n}


def _add_votes(p):
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--counts", type=_ints, help="vote counts per choice, e.g. 70,30")
    g.add_argument("--rho", type=_floats, help="vote fractions per choice, e.g. 0.7,0.3")


def _counts(args, n):
    return args.counts if args.counts is not None else counts_from_fractions(n, args.rho)


def cmd_simulate(args, out):
    graph = build_topology(_topology_spec(args))
    counts = _counts(args, graph.n)
    trajs = []
    for r in range(args.runs):
        sc = Scenario.from_counts(graph, counts, args.variant, args.seed + r,
                                  max_time=args.max_time, log_events=args.log is not None)
        trajs.append(run(sc))
    text = write_runs_csv(trajs, args.output)
    out.write(text)
    if args.log is not None:
        tr = trajs[0]
        with open(args.log, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["event", "time", "i", "j", "v_i_before", "v_j_before",
                        "v_i_after", "v_j_after"])
            log = tr.event_log
            for e in range(len(log)):
                w.writerow([e, repr(float(log.times[e])), *map(int, log.pairs[e]),
                            *map(int, log.sets[e])])
    return 0 if all(t.converged for t in trajs) else 1


def cmd_sweep(args, out):
    if args.manifest:
        m = Manifest.load(args.manifest)
    else:
        m = builtin_manifest(args.builtin)
    if args.replications is not None:
        m.replications = args.replications
    if args.base_seed is not None:
        m.base_seed = args.base_seed
    if args.output is not None:
        m.output = args.output
    if args.dump_manifest:
        out.write(m.to_json() + "\n")
        return 0

    def progress(done, total):
        if not args.quiet:
            print(f"[{done}/{total}] blocks done", file=sys.stderr)

    result = run_manifest(m, progress=progress)
    if not m.output:
        out.write(write_csv(result))
    return 0


def cmd_bounds(args, out):
    rho = args.rho if args.rho is not None else [c / args.n for c in args.counts]
    rows = analysis.bounds_table(args.n, rho)
    if args.format == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["quantity", "value"])
        for name, v in rows:
            w.writerow([name, repr(v)])
    else:
        width = max(len(name) for name, _ in rows)
        for name, v in rows:
            out.write(f"{name:<{width}}  {v:.6g}\n")
    return 0


def _report(lines, ok, args, out):
    text = "\n".join(lines) + "\n"
    out.write(text)
    if args.report:
        Path(args.report).write_text(text)
    return 0 if ok else 1


def cmd_verify(args, out):
    op = args.op
    if op == "model-check":
        if args.all:
            verdicts = verify.model_check_all(args.n, args.K, [args.variant] if args.variant
                                              else verify.MODEL_CHECK_VARIANTS)
        else:
            if args.votes is None:
                raise DMVRError("model-check needs --votes or --all")
            votes = [[int(c) for c in v.split("+")] for v in args.votes.split(",")]
            verdicts = [verify.model_check(len(votes), args.K, votes,
                                           args.variant or "compact-voting")]
        lines = [v.describe() for v in verdicts]
        lines.append(f"{sum(v.ok for v in verdicts)}/{len(verdicts)} verdicts without FAIL")
        return _report(lines, all(v.ok for v in verdicts), args, out)
    if op == "states":
        variants = [args.variant] if args.variant else ["compact-voting", "compact-ranking"]
        lines = []
        for variant in variants:
            c = verify.enumerate_states(args.K, variant)
            lines.append(f"K={args.K} {variant}: syntactic={c.syntactic} "
                         f"reachable={'skipped' if c.reachable is None else c.reachable}")
        return _report(lines, True, args, out)

    graph = build_topology(_topology_spec(args))
    counts = _counts(args, graph.n)
    variant = args.variant or ("compact-ranking" if len(counts) > 2 else "compact-voting")
    if op == "audit":
        lines, ok = [], True
        for r in range(args.trials):
            sc = Scenario.from_counts(graph, counts, variant, args.seed + r, log_events=True)
            rep = verify.audit_trace(run(sc))
            ok &= rep.ok
            lines.append(f"seed={sc.seed} {rep.describe()}")
        return _report(lines, ok, args, out)
    sc = Scenario.from_counts(graph, counts, variant, args.seed)
    res = verify.equivalence_check(sc, trials=args.trials)
    return _report([res.describe()], res.ok, args, out)


def build_parser():
    parser = argparse.ArgumentParser(prog="dmvr", description="DMVR gossip protocol toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run one scenario (or several seeds of it)")
    _add_topology(p)
    _add_votes(p)
    p.add_argument("--variant", choices=VARIANTS, default="compact-voting")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--runs", type=int, default=1, help="consecutive seeds to run")
    p.add_argument("--max-time", type=float, default=1e4)
    p.add_argument("--output", help="write the summary CSV here as well")
    p.add_argument("--log", help="write the first run's event log as CSV")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="run a manifest and emit aggregated CSV")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--manifest", help="JSON manifest file")
    g.add_argument("--builtin", choices=BUILTINS)
    p.add_argument("--replications", type=int)
    p.add_argument("--base-seed", type=int)
    p.add_argument("--output")
    p.add_argument("--dump-manifest", action="store_true", help="print the manifest and exit")
    p.add_argument("--quiet", action="store_true")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("bounds", help="closed-form times for the complete graph")
    p.add_argument("--n", type=int, required=True)
    _add_votes(p)
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("verify", help="model checking, state census, audits, equivalence")
    p.add_argument("op", choices=("model-check", "states", "audit", "equivalence"))
    _add_topology(p)
    p.add_argument("--K", type=int, default=2)
    p.add_argument("--votes", help="per-node votes, e.g. 0,0,1 or 0+1,0,1 for multi-votes")
    p.add_argument("--all", action="store_true", help="every strict profile up to --n, --K")
    p.add_argument("--counts", type=_ints)
    p.add_argument("--rho", type=_floats)
    p.add_argument("--variant", choices=VARIANTS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--report", help="also write the report to this file")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None, out=None):
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    if args.command == "verify" and args.op in ("audit", "equivalence") \
            and args.counts is None and args.rho is None:
        print("dmvr verify: audit and equivalence need --counts or --rho", file=sys.stderr)
        return 2
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            return args.func(args, out)
    except DMVRError as exc:
        print(f"dmvr: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
