"""Modularity versus normalized target-set size on planted-partition networks.

Builds networks with a fixed expected degree and a varying share of
between-block links, then runs the CLI pipeline end to end:
``gen``-style files, ``bench``, ``stats`` and ``correlate``.

    python scripts/correlation_study.py --workdir /tmp/corr [--networks 8]
"""

import argparse
import csv
import sys
from pathlib import Path

from targetset.cli import main as cli
from targetset.graph import gen_planted_partition, write_graph


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--workdir", type=Path, required=True)
    ap.add_argument("--networks", type=int, default=8)
    ap.add_argument("--blocks", type=int, default=6)
    ap.add_argument("--block-size", type=int, default=50)
    ap.add_argument("--degree", type=float, default=8.0)
    ap.add_argument("--repeats", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    args.workdir.mkdir(parents=True, exist_ok=True)
    b, k, deg = args.block_size, args.blocks, args.degree
    paths = []
    for i in range(args.networks):
        mix = 0.02 + 0.5 * i / max(1, args.networks - 1)
        p_in = (1 - mix) * deg / (b - 1)
        p_out = mix * deg / (b * (k - 1))
        g = gen_planted_partition([b] * k, p_in, p_out, seed=args.seed + i)
        path = args.workdir / f"planted_{i:02d}.txt"
        write_graph(g, path, {"family": "planted", "mix": round(mix, 4)})
        paths.append(str(path))

    bench = args.workdir / "bench.csv"
    stats = args.workdir / "stats.csv"
    pcc = args.workdir / "pcc.csv"
    common = ["--input", *paths]
    code = cli(["bench", *common, "--algorithms", "mts,tss,greedy,tip", "--schemes", "random,majority",
                "--repeats", str(args.repeats), "--seed", str(args.seed), "--output", str(bench)])
    code = code or cli(["stats", *common, "--seed", str(args.seed), "--output", str(stats)])
    code = code or cli(["correlate", str(bench), "--stats", str(stats), "--output", str(pcc)])
    if code:
        return code
    with pcc.open() as fh:
        for row in csv.DictReader(fh):
            print(f"{row['algorithm']:7s} {row['scheme']:9s} networks={row['networks']} pcc={row['pcc']}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
