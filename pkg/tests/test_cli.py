import csv
import io
import subprocess
import sys

import pytest

from targetset.cli import HEADER, correlate_rows, main
from targetset.exact import dag_optimal
from targetset.graph import classify, gen_clique, gen_dag, read_graph, write_graph
from targetset.thresholds import random_thresholds


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def records(text):
    return list(csv.DictReader(io.StringIO(text.split("# seeds")[0])))


@pytest.fixture
def k5(tmp_path):
    path = tmp_path / "k5.txt"
    write_graph(gen_clique(5), path)
    return path


def test_solve_clique(capsys, k5):
    code, out, _ = run(capsys, "solve", "--input", k5, "--algorithm", "mts", "--thresholds", "const:2", "--verify")
    assert code == 0
    assert out.splitlines()[0] == HEADER
    (rec,) = records(out)
    assert rec["target_size"] == "2" and rec["n"] == "5" and rec["m"] == "10"
    assert rec["normalized_size"] == "0.400000"


def test_solve_emit_seeds(capsys, k5):
    _, out, _ = run(capsys, "solve", "--input", k5, "--thresholds", "const:2", "--emit-seeds")
    tail = out.split("# seeds\n")[1].split()
    assert len(tail) == 2 and set(tail) <= {str(v) for v in range(5)}


def test_solve_dag_with_threshold_file(capsys, tmp_path):
    g = gen_dag(30, 0.15, 4)
    t = [x + (v % 3 == 0) for v, x in enumerate(random_thresholds(g, 4))]
    path = tmp_path / "dag.txt"
    write_graph(g, path)
    tfile = tmp_path / "t.txt"
    tfile.write_text("\n".join(map(str, t)) + "\n")
    code, out, _ = run(capsys, "solve", "--input", path, "--thresholds", f"file:{tfile}", "--emit-seeds", "--verify")
    assert code == 0
    labels = {int(x) for x in out.split("# seeds\n")[1].split()}
    assert labels == {g.labels[v] for v in dag_optimal(g, t).seeds}


@pytest.mark.parametrize("alg", ["mts", "tss", "greedy", "tip", "exact"])
def test_solve_verify_every_algorithm(capsys, tmp_path, alg):
    path = tmp_path / "g.txt"
    path.write_text("1 2\n2 3\n3 1\n3 4\n4 5\n")
    code, _, _ = run(capsys, "solve", "--input", path, "--algorithm", alg, "--thresholds", "random:3", "--verify")
    assert code == 0


def test_solve_trace_goes_to_stderr(capsys, k5):
    code, out, err = run(capsys, "solve", "--input", k5, "--thresholds", "const:2", "--trace")
    assert code == 0 and err.splitlines()[0] == "iter,node,case,U,L,S"
    assert "iter,node" not in out


def test_bench_row_count(capsys, k5):
    code, out, _ = run(capsys, "bench", "--input", k5, "--algorithms", "mts,tss", "--repeats", "10", "--no-timing")
    assert code == 0
    rows = records(out)
    assert len(rows) == 2 * (18 + 10) + 2
    assert sum(r["scheme"] == "random-mean" for r in rows) == 2
    assert len({r["scheme"] for r in rows}) == 20


def test_bench_mts_under_bound_and_deterministic(capsys, tmp_path):
    path = tmp_path / "g.txt"
    lines = [f"{u} {v}" for u in range(12) for v in range(u + 1, 12) if (u * 7 + v * 3) % 5 == 0]
    path.write_text("\n".join(lines) + "\n")
    argv = ["bench", "--input", path, "--algorithms", "mts,greedy", "--repeats", "3", "--no-timing"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
    for r in records(first):
        if r["algorithm"] == "mts" and r["scheme"] != "random-mean":
            assert int(r["target_size"]) <= float(r["upper_bound"]) + 1e-9
            assert int(r["iterations"]) <= 2 * int(r["n"])


def test_bench_shares_thresholds_across_algorithms(capsys, k5):
    # with random thresholds on K5 both algorithms must see the same upper bound
    _, out, _ = run(capsys, "bench", "--input", k5, "--algorithms", "mts,greedy", "--schemes", "random", "--repeats", "4", "--no-timing")
    bound = {}
    for r in records(out):
        if r["scheme"] == "random":
            bound.setdefault(r["seed"], set()).add(r["upper_bound"])
    assert len(bound) == 4
    assert all(len(v) == 1 for v in bound.values())


def test_bench_skips_undirected_only_solver(capsys, tmp_path):
    path = tmp_path / "d.txt"
    path.write_text("0 1\n1 2\n")
    code, out, err = run(capsys, "bench", "--input", path, "--directed", "--algorithms", "mts,tss", "--schemes", "const:2")
    assert code == 0 and "tss skipped" in err
    assert {r["algorithm"] for r in records(out)} == {"mts"}


def test_bench_missing_network_continues(capsys, k5, tmp_path):
    code, out, err = run(capsys, "bench", "--input", tmp_path / "nope.txt", k5, "--algorithms", "mts", "--schemes", "const:2")
    assert code == 0 and "skipped" in err and len(records(out)) == 1


def test_bench_parallel_matches_serial(capsys, tmp_path):
    paths = []
    for i in range(3):
        p = tmp_path / f"c{i}.txt"
        write_graph(gen_clique(4 + i), p)
        paths.append(p)
    base = ["bench", "--input", *paths, "--algorithms", "mts", "--schemes", "const", "--no-timing"]
    _, serial, _ = run(capsys, *base)
    _, parallel, _ = run(capsys, *base, "--jobs", "2")
    assert serial == parallel


def test_gen_clique_and_dirac(capsys, tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    assert run(capsys, "gen", "clique", 6, "--output", a)[0] == 0
    assert len(a.read_text().splitlines()) == 30
    run(capsys, "gen", "dirac", 10, "--seed", 3, "--output", a)
    run(capsys, "gen", "dirac", 10, "--seed", 3, "--output", b)
    assert a.read_bytes() == b.read_bytes()
    g, _ = read_graph(a)
    assert classify(g).is_dirac


def test_correlate_collinear():
    rows = []
    for i, q in enumerate([0.1, 0.3, 0.5, 0.7]):
        rows.append({"network": f"n{i}", "algorithm": "mts", "scheme": "const:2", "target_size": str(10 + 20 * i), "n": "100", "modularity": str(q)})
    rows.append({"network": "n0", "algorithm": "tss", "scheme": "const:2", "target_size": "5", "n": "100", "modularity": "0.1"})
    table, warnings = correlate_rows(rows)
    assert table == [["mts", "const:2", "4", "1.000000"]]
    assert any("tss/const:2" in w for w in warnings)


def test_stats_then_correlate(capsys, tmp_path):
    paths = []
    for i in range(3):
        p = tmp_path / f"k{i}.txt"
        write_graph(gen_clique(4 + i), p)
        paths.append(p)
    stats = tmp_path / "stats.csv"
    bench = tmp_path / "bench.csv"
    assert run(capsys, "stats", "--input", *paths, "--output", stats)[0] == 0
    rows = list(csv.DictReader(stats.open()))
    assert [r["clustering"] for r in rows] == ["1.000000"] * 3
    run(capsys, "bench", "--input", *paths, "--algorithms", "mts", "--schemes", "const:2", "--output", bench)
    code, out, err = run(capsys, "correlate", bench, "--stats", stats)
    # every clique has modularity 0, so the correlation is undefined and skipped
    assert code == 0 and "zero variance" in err


def test_verify_subcommand(capsys, k5, tmp_path):
    seeds = tmp_path / "s.txt"
    seeds.write_text("0\n1\n")
    assert run(capsys, "verify", "--input", k5, "--thresholds", "const:2", "--seeds", seeds)[0] == 0
    seeds.write_text("0\n")
    assert run(capsys, "verify", "--input", k5, "--thresholds", "const:2", "--seeds", seeds)[0] == 2
    seeds.write_text("99\n")
    assert run(capsys, "verify", "--input", k5, "--thresholds", "const:2", "--seeds", seeds)[0] == 1


def test_usage_errors(capsys, k5, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("0 1\nzzz\n")
    code, _, err = run(capsys, "solve", "--input", bad)
    assert code == 1 and "line 2" in err
    assert run(capsys, "solve", "--input", k5, "--thresholds", "const:0")[0] == 1
    assert run(capsys, "solve", "--input", tmp_path / "missing.txt")[0] == 1
    assert run(capsys, "gen", "hypercube", 5, "--output", tmp_path / "h.txt")[0] == 1
    with pytest.raises(SystemExit) as exc:
        main(["solve"])
    assert exc.value.code == 1


def test_module_entry_point(k5):
    proc = subprocess.run(
        [sys.executable, "-m", "targetset", "solve", "--input", str(k5), "--thresholds", "const:2"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0 and proc.stdout.startswith("network,")
