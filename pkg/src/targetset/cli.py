"""Command line front end.

Exit codes: 0 success, 1 usage or input error, 2 a reported set failed
verification, 3 an algorithm guarantee was violated at run time.
"""

from __future__ import annotations

import argparse
import csv
import sys
import time
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Iterable, Sequence, TextIO

from . import analysis, exact
from .activation import is_target_set
from .graph import Digraph, GraphError, generate, read_graph, write_graph
from .solvers import InvariantError, SolverError, greedy, mts, tip_decomp, tss
from .thresholds import STUDY_SCHEMES, Scheme, ThresholdError, parse_scheme

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_INVARIANT = 0, 1, 2, 3
ALGORITHMS = ("mts", "tss", "greedy", "tip", "exact", "dag")

HEADER = (
    "network,algorithm,scheme,seed,n,m,target_size,normalized_size,"
    "iterations,upper_bound,wall_ms"
)


class UsageError(Exception):
    pass


@dataclass
class RunRecord:
    network: str
    algorithm: str
    scheme: str
    seed: int
    n: int
    m: int
    target_size: float
    normalized_size: float
    iterations: float
    upper_bound: float
    wall_ms: float

    def row(self, mean: bool = False) -> list[str]:
        def num(x: float, digits: int) -> str:
            return f"{x:.{digits}f}"

        return [
            self.network,
            self.algorithm,
            self.scheme,
            str(self.seed),
            str(self.n),
            str(self.m),
            num(self.target_size, 2) if mean else str(int(self.target_size)),
            num(self.normalized_size, 6),
            num(self.iterations, 2) if mean else str(int(self.iterations)),
            num(self.upper_bound, 6),
            num(self.wall_ms, 2) if mean else str(int(round(self.wall_ms))),
        ]


assert HEADER.split(",") == [f.name for f in fields(RunRecord)]


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit with 2, which means "verification failed" here
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _mode(args) -> str | None:
    if getattr(args, "directed", False):
        return "directed"
    if getattr(args, "undirected", False):
        return "undirected"
    return None


def _network_name(path: str | Path) -> str:
    name = Path(path).name
    for suffix in (".gz", ".txt", ".edges", ".el"):
        if name.endswith(suffix):
            name = name[: -len(suffix)]
    return name


def run_algorithm(
    algorithm: str, g: Digraph, t: Sequence[int], tie: str, seed: int | None, trace: bool = False
):
    """Returns (seed set, iterations, per-iteration trace or None)."""
    if algorithm == "mts":
        r = mts(g, t, tie, seed, record_trace=trace)
        return r.seeds, r.iterations, r.trace
    if algorithm == "tss":
        r = tss(g, t, tie, seed, record_trace=trace)
        return r.seeds, r.iterations, r.trace
    if algorithm == "greedy":
        r = greedy(g, t, tie, seed)
        return r.seeds, r.iterations, None
    if algorithm == "tip":
        r = tip_decomp(g, t)
        return r.seeds, r.iterations, None
    if algorithm == "exact":
        e = exact.brute_force(g, t)
        return e.seeds, e.subsets_checked, None
    if algorithm == "dag":
        e = exact.dag_optimal(g, t)
        return e.seeds, 0, None
    raise UsageError(f"unknown algorithm {algorithm!r}")


def _record(network, algorithm, scheme, seed, g, t, seeds, iterations, seconds, timing) -> RunRecord:
    return RunRecord(
        network=network,
        algorithm=algorithm,
        scheme=scheme,
        seed=seed,
        n=g.n,
        m=g.num_edges,
        target_size=len(seeds),
        normalized_size=len(seeds) / g.n,
        iterations=iterations,
        upper_bound=analysis.upper_bound(g, t),
        wall_ms=seconds * 1000 if timing else 0,
    )


def _write_rows(out: TextIO, rows: Iterable[list[str]], header: bool = True) -> None:
    w = csv.writer(out, lineterminator="\n")
    if header:
        w.writerow(HEADER.split(","))
    for r in rows:
        w.writerow(r)
    out.flush()


def _open_out(path: str | None) -> TextIO:
    return open(path, "w", newline="") if path and path != "-" else sys.stdout


# ---------------------------------------------------------------------------
# solve / verify


def cmd_solve(args) -> int:
    g, _ = read_graph(args.input, _mode(args))
    scheme = parse_scheme(args.thresholds)
    t = scheme.build(g, args.seed)
    seed = int(scheme.param) if scheme.kind == "random" and scheme.param else args.seed
    t0 = time.perf_counter()
    seeds, iterations, trace = run_algorithm(args.algorithm, g, t, args.tie, args.seed, args.trace)
    elapsed = time.perf_counter() - t0
    if args.verify and not is_target_set(g, t, seeds):
        print("verification failed: the returned set does not activate every node", file=sys.stderr)
        return EXIT_VERIFY
    if trace is not None:
        w = csv.writer(sys.stderr, lineterminator="\n")
        w.writerow(["iter", "node", "case", "U", "L", "S"])
        for row in trace:
            w.writerow([row.iteration, g.labels[row.node], row.case, row.u_size, row.limbo_size, row.s_size])
    rec = _record(_network_name(args.input), args.algorithm, scheme.name, seed, g, t, seeds, iterations, elapsed, not args.no_timing)
    out = _open_out(args.output)
    try:
        _write_rows(out, [rec.row()])
        if args.emit_seeds:
            out.write("# seeds\n")
            out.writelines(f"{lab}\n" for lab in sorted(g.labels[v] for v in seeds))
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def cmd_verify(args) -> int:
    g, _ = read_graph(args.input, _mode(args))
    t = parse_scheme(args.thresholds).build(g, args.seed)
    index = {lab: i for i, lab in enumerate(g.labels)}
    seeds = []
    for line in Path(args.seeds).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            seeds.append(index[int(line)])
        except (KeyError, ValueError):
            raise UsageError(f"seed {line!r} is not a node label of {args.input}") from None
    ok = is_target_set(g, t, seeds)
    print(f"{'target set' if ok else 'NOT a target set'}: {len(set(seeds))} seeds, {g.n} nodes")
    return EXIT_OK if ok else EXIT_VERIFY


# ---------------------------------------------------------------------------
# bench


def _bench_network(path: str, mode, algorithms, schemes, repeats, seed, tie, timing):
    """All rows for one network, plus warning lines and whether an invariant broke."""
    rows: list[list[str]] = []
    warnings: list[str] = []
    broken = False
    name = _network_name(path)
    try:
        g, _ = read_graph(path, mode)
    except (OSError, GraphError) as exc:
        return rows, [f"{name}: skipped: {exc}"], broken
    skip: set[str] = set()
    for scheme in schemes:
        reps = [seed + i for i in range(repeats)] if scheme.randomized else [seed]
        acc: dict[str, list[RunRecord]] = defaultdict(list)
        for s in reps:
            # one threshold draw is shared by every algorithm of a repetition
            t = scheme.build(g, s)
            for alg in algorithms:
                if alg in skip:
                    continue
                t0 = time.perf_counter()
                try:
                    seeds, its, _ = run_algorithm(alg, g, t, tie, s)
                except (SolverError, exact.ExactError) as exc:
                    warnings.append(f"{name}: {alg} skipped: {exc}")
                    skip.add(alg)
                    continue
                except InvariantError as exc:
                    warnings.append(f"{name}: {alg} on {scheme.name} seed {s}: INVARIANT VIOLATED: {exc}")
                    broken = True
                    continue
                rec = _record(name, alg, scheme.name, s, g, t, seeds, its, time.perf_counter() - t0, timing)
                acc[alg].append(rec)
                rows.append(rec.row())
        if scheme.randomized:
            for alg in algorithms:
                recs = acc.get(alg)
                if not recs:
                    continue
                k = len(recs)
                mean = RunRecord(
                    name, alg, "random-mean", seed, g.n, g.num_edges,
                    sum(r.target_size for r in recs) / k,
                    sum(r.normalized_size for r in recs) / k,
                    sum(r.iterations for r in recs) / k,
                    sum(r.upper_bound for r in recs) / k,
                    sum(r.wall_ms for r in recs) / k,
                )
                rows.append(mean.row(mean=True))
    return rows, warnings, broken


def _parse_schemes(text: str) -> list[Scheme]:
    if text == "all":
        return list(STUDY_SCHEMES)
    out = []
    for part in text.split(","):
        part = part.strip()
        if part == "const":
            out.extend(s for s in STUDY_SCHEMES if s.kind == "const")
        elif part == "prop":
            out.extend(s for s in STUDY_SCHEMES if s.kind == "prop")
        else:
            out.append(parse_scheme(part))
    return out


def _parse_algorithms(text: str) -> list[str]:
    algs = [a.strip() for a in text.split(",") if a.strip()]
    for a in algs:
        if a not in ALGORITHMS:
            raise UsageError(f"unknown algorithm {a!r}")
    return algs


def cmd_bench(args) -> int:
    algorithms = _parse_algorithms(args.algorithms)
    schemes = _parse_schemes(args.schemes)
    mode = _mode(args)
    job_args = [
        (p, mode, algorithms, schemes, args.repeats, args.seed, args.tie, not args.no_timing)
        for p in args.input
    ]
    out = _open_out(args.output)
    broken = False
    try:
        _write_rows(out, [])
        if args.jobs > 1:
            with ProcessPoolExecutor(args.jobs) as pool:
                results = list(pool.map(_bench_network, *zip(*job_args)))
        else:
            results = (_bench_network(*a) for a in job_args)
        # output order follows the input order regardless of completion order
        for rows, warnings, bad in results:
            for w in warnings:
                print(f"warning: {w}", file=sys.stderr)
            broken |= bad
            _write_rows(out, rows, header=False)
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_INVARIANT if broken else EXIT_OK


# ---------------------------------------------------------------------------
# gen / stats / correlate


def cmd_gen(args) -> int:
    g = generate(args.family, args.n, args.seed, args.p)
    meta = {"family": args.family, "seed": args.seed}
    if args.p is not None:
        meta["p"] = args.p
    write_graph(g, args.output, meta)
    return EXIT_OK


STATS_HEADER = ["network", "n", "m", "max_degree", "clustering", "modularity", "communities"]


def network_stats(g: Digraph, name: str, seed: int | None) -> list[str]:
    """Directed inputs are measured on their underlying undirected graph."""
    und = g if g.bidirected else Digraph.from_edges(g.n, g.underlying_edges())
    part = analysis.detect_communities(und, seed)
    q = analysis.modularity(und, part) if und.num_edges else 0.0
    return [
        name,
        str(g.n),
        str(g.num_edges),
        str(max((len(a) for a in und.out_adj), default=0)),
        f"{analysis.clustering_coefficient(und):.6f}",
        f"{q:.6f}",
        str(max(part, default=-1) + 1),
    ]


def cmd_stats(args) -> int:
    out = _open_out(args.output)
    try:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(STATS_HEADER)
        for path in args.input:
            g, _ = read_graph(path, _mode(args))
            w.writerow(network_stats(g, _network_name(path), args.seed))
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def correlate_rows(rows: Iterable[dict], modularity: dict[str, float] | None = None) -> tuple[list[list[str]], list[str]]:
    """PCC between modularity and mean normalized target-set size per (algorithm, scheme)."""
    rows = list(rows)
    has_single_random = any(r["scheme"] == "random" for r in rows)
    sizes: dict[tuple[str, str], dict[str, list[float]]] = defaultdict(lambda: defaultdict(list))
    mod: dict[str, float] = dict(modularity or {})
    for r in rows:
        scheme = r["scheme"]
        if scheme == "random-mean":
            if has_single_random:
                continue
            scheme = "random"
        net = r["network"]
        if r.get("modularity") not in (None, ""):
            mod[net] = float(r["modularity"])
        if "normalized_size" in r and r["normalized_size"] not in (None, ""):
            y = float(r["normalized_size"])
        else:
            y = float(r["target_size"]) / float(r["n"])
        sizes[(r["algorithm"], scheme)][net].append(y)
    out, warnings = [], []
    for (alg, scheme), per_net in sorted(sizes.items()):
        nets = sorted(nm for nm in per_net if nm in mod)
        missing = sorted(set(per_net) - set(nets))
        if missing:
            warnings.append(f"{alg}/{scheme}: no modularity for {', '.join(missing)}")
        if len(nets) < 2:
            warnings.append(f"{alg}/{scheme}: fewer than 2 networks, skipped")
            continue
        xs = [mod[nm] for nm in nets]
        ys = [sum(per_net[nm]) / len(per_net[nm]) for nm in nets]
        try:
            r = analysis.pearson(xs, ys)
        except ValueError as exc:
            warnings.append(f"{alg}/{scheme}: {exc}, skipped")
            continue
        out.append([alg, scheme, str(len(nets)), f"{r:.6f}"])
    return out, warnings


def cmd_correlate(args) -> int:
    with open(args.csv, newline="") as fh:
        rows = list(csv.DictReader(fh))
    mod = None
    if args.stats:
        with open(args.stats, newline="") as fh:
            mod = {r["network"]: float(r["modularity"]) for r in csv.DictReader(fh)}
    table, warnings = correlate_rows(rows, mod)
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)
    out = _open_out(args.output)
    try:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["algorithm", "scheme", "networks", "pcc"])
        w.writerows(table)
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


# ---------------------------------------------------------------------------


def _add_graph_input(p: argparse.ArgumentParser, many: bool = False) -> None:
    if many:
        p.add_argument("--input", nargs="+", required=True, metavar="PATH")
    else:
        p.add_argument("--input", required=True, metavar="PATH")
    grp = p.add_mutually_exclusive_group()
    grp.add_argument("--directed", action="store_true", help="treat each line as one arc")
    grp.add_argument("--undirected", action="store_true", help="treat each line as an edge (default without a sidecar)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="targetset", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="compute a target set for one network")
    _add_graph_input(p)
    p.add_argument("--algorithm", choices=ALGORITHMS, default="mts")
    p.add_argument("--thresholds", default="random", metavar="SCHEME",
                   help="random[:SEED] | const:T | prop:ALPHA | majority | file:PATH")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tie", choices=("minid", "random"), default="minid")
    p.add_argument("--verify", action="store_true")
    p.add_argument("--trace", action="store_true", help="per-iteration CSV on stderr (mts, tss)")
    p.add_argument("--emit-seeds", action="store_true", help="append the seed labels after the record")
    p.add_argument("--output", metavar="PATH")
    p.add_argument("--no-timing", action="store_true", help="write wall_ms as 0 for byte-stable output")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check that a seed file activates the whole network")
    _add_graph_input(p)
    p.add_argument("--thresholds", required=True, metavar="SCHEME")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--seeds", required=True, metavar="PATH", help="one node label per line")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="sweep algorithms x threshold schemes over networks")
    _add_graph_input(p, many=True)
    p.add_argument("--algorithms", default="mts,tss,greedy,tip")
    p.add_argument("--schemes", default="all", help="'all' (19 settings) or a comma list; 'const'/'prop' expand")
    p.add_argument("--repeats", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tie", choices=("minid", "random"), default="minid")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--output", metavar="PATH")
    p.add_argument("--no-timing", action="store_true")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("gen", help="write a synthetic instance and its JSON sidecar")
    p.add_argument("family")
    p.add_argument("n", type=int)
    p.add_argument("--p", type=float, default=None, help="arc/edge probability where relevant")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", required=True, metavar="PATH")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("stats", help="clustering and modularity per network")
    _add_graph_input(p, many=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", metavar="PATH")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("correlate", help="PCC of modularity vs normalized target-set size")
    p.add_argument("csv", help="bench output, optionally with a modularity column")
    p.add_argument("--stats", metavar="PATH", help="stats output supplying modularity per network")
    p.add_argument("--output", metavar="PATH")
    p.set_defaults(func=cmd_correlate)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InvariantError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (UsageError, GraphError, ThresholdError, SolverError, exact.ExactError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
