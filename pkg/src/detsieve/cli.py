"""Command-line front end: ``detsieve <problem> [options]``.

Results go to standard output as one JSON document; a one-line human
summary goes to standard error.  Graph vertices and set elements are
1-based on the command line and in files, as in the graph file format.

Exit codes: 0 run complete (either decision), 2 usage or infeasible
parameters, 3 malformed input file, 4 capacity exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from collections.abc import Sequence
from pathlib import Path

from . import matroid as mr
from . import solvers
from .enumerators import Graph
from .errors import DetsieveError, ParseError, UsageError
from .field import DEFAULT_FIELD, Field, parse_field_name
from .matroid import ColumnAssoc, LinearMatroid
from .oracle import expand_symbolic
from .polyoracle import PolyOracle, parse_circuit_text
from .rng import DEFAULT_SEED, entropy_seed
from .sieve import basis_sieve, odd_sieve

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_CAPACITY = 0, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _ints(text: str | None) -> list[int]:
    if not text:
        return []
    try:
        return [int(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise UsageError(f"expected a comma-separated list of integers, got {text!r}") from None


def _vertices(text: str | None, g: Graph) -> list[int]:
    out = []
    for v in _ints(text):
        if not 1 <= v <= g.n:
            raise UsageError(f"vertex {v} outside 1..{g.n}")
        out.append(v - 1)
    return out


def _vertex(v: int, g: Graph) -> int:
    return _vertices(str(v), g)[0]


def load_graph(path: str) -> Graph:
    return Graph.parse(_read(path))


def load_matroid(spec: str, field: Field) -> LinearMatroid:
    """Inline ``uniform:n:k``, ``free:n``, ``unit:n:i,j,..`` (1-based marks),
    ``graphic:FILE``, ``cographic:FILE``, or a matroid file."""
    kind, _, rest = spec.partition(":")
    args = rest.split(":") if rest else []
    try:
        if kind == "uniform" and len(args) == 2:
            return mr.uniform(int(args[0]), int(args[1]), field)
        if kind == "free" and len(args) == 1:
            return mr.free(int(args[0]), field)
        if kind == "unit" and len(args) == 2:
            n = int(args[0])
            marks = [v - 1 for v in _ints(args[1])]
            if any(not 0 <= v < n for v in marks):
                raise UsageError(f"unit marks must lie in 1..{n}")
            return mr.unit_vectors(list(range(n)), marks, field)
    except ValueError:
        raise UsageError(f"bad matroid spec {spec!r}") from None
    if kind in ("graphic", "cographic") and len(args) == 1:
        g = load_graph(args[0])
        build = mr.graphic if kind == "graphic" else mr.cographic
        return build(g.n, g.edges, field)
    return mr.parse_matroid(_read(spec))


def load_family(path: str) -> tuple[int, list[list[int]]]:
    """``sets <n> <count>`` then one line of 1-based elements per set (``-`` for empty)."""
    lines = [(i + 1, ln.split("#", 1)[0].split()) for i, ln in enumerate(_read(path).splitlines())]
    lines = [(i, p) for i, p in lines if p]
    if not lines or lines[0][1][0] != "sets" or len(lines[0][1]) != 3:
        raise ParseError("expected 'sets <n> <count>'", lines[0][0] if lines else 1)
    try:
        n, count = int(lines[0][1][1]), int(lines[0][1][2])
    except ValueError:
        raise ParseError("set counts must be integers", lines[0][0]) from None
    family = []
    for lineno, parts in lines[1:]:
        if parts == ["-"]:
            family.append([])
            continue
        try:
            elems = [int(t) - 1 for t in parts]
        except ValueError:
            raise ParseError("set elements must be integers", lineno) from None
        if any(not 0 <= v < n for v in elems):
            raise ParseError(f"element outside 1..{n}", lineno)
        family.append(elems)
    if len(family) != count:
        raise ParseError(f"header promises {count} sets, found {len(family)}", lines[0][0])
    return n, family


def _field_name(field: Field) -> str:
    return field.header().removeprefix("field ")


def _one_based_path(path: Sequence[int] | None) -> list[int] | None:
    return None if path is None else [v + 1 for v in path]


def _one_based_edges(edges) -> list[list[int]] | None:
    return None if edges is None else [[u + 1, v + 1] for u, v in edges]


# ---------------------------------------------------------------------------
# subcommands: each returns a SolveResult (possibly with extra JSON fields)


def _cmd_qmi(a, F):
    ms = [load_matroid(s, F) for s in a.matroid]
    k = a.k if a.k is not None else min(m.rank for m in ms)
    return solvers.q_matroid_intersection(ms, k, seed=a.seed, trials=a.trials, witness=a.witness)


def _cmd_qmp(a, F):
    m = load_matroid(a.matroid[0], F)
    if a.blocks:
        blocks = [[int(x) - 1 for x in b.split(",")] for b in a.blocks.split(";")]
    else:
        if m.n % a.q:
            raise UsageError(f"{m.n} elements do not split into blocks of {a.q}")
        blocks = [list(range(i, i + a.q)) for i in range(0, m.n, a.q)]
    res = solvers.q_matroid_parity(m, blocks, a.k, seed=a.seed, trials=a.trials, witness=a.witness)
    if res.witness is not None:
        res.witness = [b + 1 for b in res.witness]
    return res


def _cmd_setcover(a, F, variant="cover"):
    n, family = load_family(a.family)
    m = load_matroid(a.matroid[0], F) if a.matroid else mr.free(n, F)
    if m.n != n:
        raise UsageError(f"the matroid has {m.n} elements, the family ground set {n}")
    m = LinearMatroid(m.rep, list(range(n)))
    res = solvers.rank_set_cover_packing(list(range(n)), family, m, a.t, variant,
                                         seed=a.seed, trials=a.trials, witness=a.witness)
    if res.witness is not None:
        res.witness = [i + 1 for i in res.witness]
    return res


def _cmd_setpack(a, F):
    return _cmd_setcover(a, F, "packing")


def _cmd_oddcov(a, F):
    n, family = load_family(a.family)
    res = solvers.odd_coverage(list(range(n)), family, a.t, a.p, field=F, seed=a.seed,
                               trials=a.trials, witness=a.witness)
    if res.witness is not None:
        res.witness = [i + 1 for i in res.witness]
    return res


def _cmd_linkage(a, F):
    g = load_graph(a.graph)
    size = g.n + (g.m if a.over_edges else 0)
    m = load_matroid(a.matroid[0], F) if a.matroid else mr.free(size, F)
    k = a.k if a.k is not None else m.rank
    res = solvers.rank_linkage(g, _vertices(a.S, g), _vertices(a.T, g), m, k, over_edges=a.over_edges,
                               shortest=a.shortest, parity=a.parity, field=F, seed=a.seed,
                               trials=a.trials, witness=a.witness)
    res.witness = _one_based_edges(res.witness)
    return res


def _cmd_tcycle(a, F):
    g = load_graph(a.graph)
    terminals = _vertices(a.terminals, g) if a.terminals else g.terminals
    res = solvers.t_cycle(g, terminals, field=F, seed=a.seed, trials=a.trials)
    if "edge" in res.extra:
        res.extra["edge"] = [v + 1 for v in res.extra["edge"]]
    return res


def _cmd_longpath(a, F):
    g = load_graph(a.graph)
    res = solvers.long_st_path(g, _vertex(a.s, g), _vertex(a.t, g), a.k, field=F, seed=a.seed,
                               trials=a.trials, rep_factor=a.rep_factor, threads=a.threads,
                               witness=a.witness)
    res.witness = _one_based_path(res.witness)
    return res


def _cmd_longcycle(a, F):
    g = load_graph(a.graph)
    res = solvers.long_cycle(g, a.k, field=F, seed=a.seed, trials=a.trials,
                             rep_factor=a.rep_factor, threads=a.threads)
    if "edge" in res.extra:
        res.extra["edge"] = [v + 1 for v in res.extra["edge"]]
    return res


def _cmd_diverse(a, F):
    g = load_graph(a.graph)
    return solvers.diverse_perfect_matchings(g, a.count, a.d, field=F, seed=a.seed, trials=a.trials,
                                             mode=a.mode, total=a.total)


def _cmd_branchings(a, F):
    g = load_graph(a.graph)
    return solvers.distinct_branchings(g, _vertex(a.s, g), _vertex(a.t, g), a.k, field=F,
                                       seed=a.seed, trials=a.trials)


def _cmd_steiner(a, F):
    g = load_graph(a.graph)
    terminals = _vertices(a.terminals, g) if a.terminals else g.terminals
    return solvers.steiner_tree(g, terminals, a.w, field=F, seed=a.seed, trials=a.trials)


def _cmd_motif(a, F):
    g = load_graph(a.graph)
    if len(g.colours) != g.n:
        raise UsageError("every vertex needs a 'colour' line for graph motif")
    Q = a.motif.replace(",", " ").split()
    return solvers.graph_motif(g, g.colours, Q, a.ks, a.kd, a.ki, k=a.k, field=F,
                               seed=a.seed, trials=a.trials)


def _cmd_euler(a, F):
    g = load_graph(a.graph)
    return solvers.eulerian_deletion(g, a.k, field=F, seed=a.seed, trials=a.trials)


def _cmd_balanced(a, F):
    g = load_graph(a.graph)
    m = load_matroid(a.matroid[0], F)
    if m.n != g.n:
        raise UsageError("the balance matroid must have one element per vertex")
    return solvers.balanced_path(g, a.k, m, field=F, seed=a.seed, trials=a.trials)


def _cmd_sieve_raw(a, F):
    m = load_matroid(a.matroid[0], F)
    circuit = parse_circuit_text(_read(a.circuit), m.field, a.arity)
    p = PolyOracle.from_circuit(circuit, name="raw")
    assoc = ColumnAssoc.identity(p.arity) if p.arity == m.n else None
    if assoc is None:
        raise UsageError(f"circuit arity {p.arity} differs from the matroid size {m.n}")
    sieve = basis_sieve if a.mode == "basis" else odd_sieve
    rep = sieve(p, m, assoc, trials=a.trials, seed=a.seed)
    res = solvers.SolveResult("sieve-raw", rep.decision)
    res.stats.add(rep)
    res.extra["mode"] = a.mode
    if a.expand:
        res.extra["expansion"] = expand_symbolic(circuit).to_text().splitlines()
    return res


COMMANDS = {
    "qmi": _cmd_qmi, "qmp": _cmd_qmp, "setcover": _cmd_setcover, "setpack": _cmd_setpack,
    "oddcov": _cmd_oddcov, "linkage": _cmd_linkage, "tcycle": _cmd_tcycle, "longpath": _cmd_longpath,
    "longcycle": _cmd_longcycle, "diverse": _cmd_diverse, "branchings": _cmd_branchings,
    "steiner": _cmd_steiner, "motif": _cmd_motif, "euler": _cmd_euler, "balanced": _cmd_balanced,
    "sieve-raw": _cmd_sieve_raw,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="master seed (default: fixed constant)")
    common.add_argument("--entropy", action="store_true", help="draw the seed from the OS instead")
    common.add_argument("--field", default="gf2:64", help="gf2:<w> or prime[:<p>] (default gf2:64)")
    common.add_argument("--trials", type=int, default=None, help="sieve trials (default: by field size)")
    common.add_argument("--threads", type=int, default=1, help="worker threads for repetitions")
    common.add_argument("--witness", action="store_true", help="extract a witness by self-reduction")
    common.add_argument("--no-timing", action="store_true", help="omit wall_ms for byte-identical output")
    common.add_argument("--output", help="write the JSON here instead of standard output")

    parser = _Parser(prog="detsieve", description="Determinantal sieving solvers.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_text):
        return sub.add_parser(name, parents=[common], help=help_text)

    p = add("qmi", "common basis of q matroids truncated to rank k")
    p.add_argument("--matroid", action="append", required=True)
    p.add_argument("--k", type=int, help="common independent set size (default: smallest rank)")
    p = add("qmp", "k blocks with independent union")
    p.add_argument("--matroid", action="append", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--q", type=int, default=2, help="block size for consecutive blocks")
    p.add_argument("--blocks", help="explicit blocks, e.g. '1,2;3,4' (1-based)")
    for name, text in (("setcover", "t sets whose union spans the matroid"),
                       ("setpack", "t disjoint sets whose union is a basis")):
        p = add(name, text)
        p.add_argument("--family", required=True)
        p.add_argument("--matroid", action="append")
        p.add_argument("--t", type=int, required=True)
    p = add("oddcov", "t sets covering p elements an odd number of times")
    p.add_argument("--family", required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p = add("linkage", "rank-k perfect (S,T)-linkage")
    p.add_argument("--graph", required=True)
    p.add_argument("--S", required=True)
    p.add_argument("--T", required=True)
    p.add_argument("--matroid", action="append")
    p.add_argument("--k", type=int)
    p.add_argument("--over-edges", action="store_true")
    p.add_argument("--shortest", action="store_true")
    p.add_argument("--parity", choices=["odd", "even"])
    p = add("tcycle", "cycle through all terminals")
    p.add_argument("--graph", required=True)
    p.add_argument("--terminals")
    for name, text in (("longpath", "st-path with at least k vertices"),
                       ("longcycle", "cycle with at least k vertices")):
        p = add(name, text)
        p.add_argument("--graph", required=True)
        if name == "longpath":
            p.add_argument("--s", type=int, required=True)
            p.add_argument("--t", type=int, required=True)
        p.add_argument("--k", type=int, required=True)
        p.add_argument("--rep-factor", type=float, default=10.0)
    p = add("diverse", "perfect matchings with pairwise symmetric differences >= d")
    p.add_argument("--graph", required=True)
    p.add_argument("--count", type=int, default=2)
    p.add_argument("--d", type=int, default=0)
    p.add_argument("--mode", choices=["pairwise", "sum"], default="pairwise")
    p.add_argument("--total", type=int)
    p = add("branchings", "out-branching from s and in-branching to t differing in >= k arcs")
    p.add_argument("--graph", required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p = add("steiner", "connected subgraph on at most w vertices containing the terminals")
    p.add_argument("--graph", required=True)
    p.add_argument("--terminals")
    p.add_argument("--w", type=int, required=True)
    p = add("motif", "connected subgraph whose colours edit into the motif")
    p.add_argument("--graph", required=True)
    p.add_argument("--motif", required=True, help="colour multiset, e.g. 'r,g,r'")
    p.add_argument("--k", type=int)
    p.add_argument("--ks", type=int, default=0)
    p.add_argument("--kd", type=int, default=0)
    p.add_argument("--ki", type=int, default=0)
    p = add("euler", "delete at most k edges to make the graph Eulerian")
    p.add_argument("--graph", required=True)
    p.add_argument("--k", type=int, required=True)
    p = add("balanced", "k-vertex path whose vertex set is a basis of the matroid")
    p.add_argument("--graph", required=True)
    p.add_argument("--matroid", action="append", required=True)
    p.add_argument("--k", type=int, required=True)
    p = add("sieve-raw", "basis or odd sieve on a circuit file")
    p.add_argument("--circuit", required=True)
    p.add_argument("--matroid", action="append", required=True)
    p.add_argument("--mode", choices=["basis", "odd"], default="basis")
    p.add_argument("--arity", type=int)
    p.add_argument("--expand", action="store_true", help="include the symbolic expansion")
    return parser


def run_command(argv: Sequence[str] | None = None) -> tuple[int, dict | None]:
    """Parse and run; returns (exit status, JSON document or None on error)."""
    status, doc, _ = _run(argv)
    return status, doc


def _run(argv):
    args = None
    try:
        args = build_parser().parse_args(argv)
        if args.entropy:
            args.seed = entropy_seed()
        if args.threads < 1:
            raise UsageError("--threads must be at least 1")
        field = parse_field_name(args.field) if args.field else DEFAULT_FIELD
        start = time.perf_counter()
        res = COMMANDS[args.command](args, field)
        wall_ms = (time.perf_counter() - start) * 1000
    except SystemExit as exc:          # --help
        return int(exc.code or 0), None, args
    except DetsieveError as exc:
        print(f"detsieve: error: {exc}", file=sys.stderr)
        return exc.exit_code, None, args
    doc = res.to_json()
    doc["seed"] = args.seed
    doc["field"] = _field_name(field)
    if not args.no_timing:
        doc["wall_ms"] = round(wall_ms, 3)
    order = ["problem", "decision", "witness", "seed", "field", "trials", "p_evals", "failure_bound",
             "wall_ms", "schedule"]
    doc = {key: doc[key] for key in order if key in doc} | {k: v for k, v in doc.items() if k not in order}
    return EXIT_OK, doc, args


def main(argv: Sequence[str] | None = None) -> int:
    status, doc, args = _run(argv)
    if doc is None:
        return status
    text = json.dumps(doc, indent=2) + "\n"
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    summary = f"{doc['problem']}: {'YES' if doc['decision'] else 'NO'}"
    summary += f" ({doc['trials']} trials, {doc['p_evals']} evaluations, failure bound {doc['failure_bound']})"
    print(summary, file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
