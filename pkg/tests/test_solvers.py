import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from detsieve import matroid as mr
from detsieve import oracle as O
from detsieve import solvers as S
from detsieve.enumerators import Graph, random_graph
from detsieve.errors import SpecError, UnsupportedOperation, UsageError
from detsieve.field import GF2_64, P31
from detsieve.linalg import Matrix
from detsieve.matroid import LinearMatroid
from detsieve.oracle import SparsePoly
from detsieve.solvers import ProblemInstance
from support import small_matroid

F = GF2_64


def ids(n):
    return LinearMatroid(Matrix.identity(F, n))


def path(n):
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n):
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


# ---------------------------------------------------------------------------
# documented examples


def test_qmi_examples():
    assert S.q_matroid_intersection([mr.uniform(4, 2, F)] * 3, 2).decision
    a = LinearMatroid(Matrix.from_rows(F, [[1, 0, 1, 0], [0, 1, 0, 1]]))
    b = LinearMatroid(Matrix.from_rows(F, [[1, 1, 0, 0], [0, 0, 1, 1]]))
    assert S.q_matroid_intersection([a, b], 2).decision
    c = LinearMatroid(Matrix.from_rows(F, [[1, 0, 0, 1], [0, 1, 1, 0]]))
    assert not S.q_matroid_intersection([a, b, c], 2).decision
    with pytest.raises(UsageError):
        S.q_matroid_intersection([a, mr.uniform(5, 2, F)], 2)
    with pytest.raises(SpecError):
        S.q_matroid_intersection([a], 1)


def test_qmi_over_prime_field():
    ms = [mr.uniform(4, 2, P31)] * 3
    assert S.q_matroid_intersection(ms, 2).decision
    gen = np.random.default_rng(8)
    for _ in range(10):
        ms = [small_matroid(P31, 2, 5, gen, 0.5) for _ in range(3)]
        assert S.q_matroid_intersection(ms, 2).decision == O.brute_qmi(ms, 2)


def test_qmp_examples():
    m = mr.uniform(4, 2, F)
    assert S.q_matroid_parity(m, [[0, 1], [2, 3]], 1).decision
    assert S.q_matroid_parity(m, [[0, 1], [2, 3]], 0).decision
    par = LinearMatroid(Matrix.from_rows(F, [[1, 1, 1, 0], [0, 0, 0, 1]]))
    blocks = [[0, 1], [2, 3]]
    assert S.q_matroid_parity(par, blocks, 1).decision == O.brute_qmp(par, blocks, 1)


def test_set_cover_packing_examples():
    V = [1, 2]
    m12 = LinearMatroid(Matrix.identity(F, 2), V)
    assert S.rank_set_cover_packing(V, [[1], [2]], m12, 2).decision
    assert not S.rank_set_cover_packing(V, [[1], [2]], m12, 1).decision
    # overlapping sets whose union is a basis but which intersect
    m = ids(3)
    fam = [[0, 1], [1, 2]]
    assert S.rank_set_cover_packing([0, 1, 2], fam, m, 2, "cover").decision
    assert not S.rank_set_cover_packing([0, 1, 2], fam, m, 2, "packing").decision
    with pytest.raises(SpecError):
        S.rank_set_cover_packing(V, [[3]], m12, 1)
    with pytest.raises(UnsupportedOperation):
        S.rank_set_cover_packing(V, [[1]], LinearMatroid(Matrix.identity(P31, 2), V), 1)


def test_classic_set_cover(gen):
    for _ in range(15):
        n = int(gen.integers(2, 7))
        fam = [sorted(set(int(x) for x in gen.integers(0, n, int(gen.integers(1, 4))))) for _ in range(5)]
        t = int(gen.integers(1, 4))
        V = list(range(n))
        assert S.rank_set_cover_packing(V, fam, ids(n), t).decision == O.brute_set_cover(V, fam, ids(n), t)


def test_odd_coverage_examples():
    V = [0, 1, 2]
    assert S.odd_coverage(V, [[0, 1, 2]], 1, 3).decision
    assert not S.odd_coverage(V, [[0, 1, 2]], 1, 4).decision
    assert not S.odd_coverage(V, [[0, 1], [1, 2]], 2, 3).decision
    assert S.odd_coverage(V, [[0, 1], [1, 2]], 2, 2).decision


def test_linkage_examples():
    g = path(4)
    assert S.rank_linkage(g, [0], [3], ids(4), 4).decision
    assert not S.rank_linkage(g, [0], [3], ids(4), 5).decision
    two = Graph(6, [(0, 1), (1, 5), (0, 2), (2, 3), (3, 4), (4, 5)])
    free = mr.uniform(6, 0, F)
    res = S.rank_linkage(two, [0], [5], free, 0, shortest=True)
    assert res.decision and res.extra["length"] == 2
    odd = S.rank_linkage(two, [0], [5], free, 0, parity="odd")
    assert not odd.decision
    even = S.rank_linkage(two, [0], [5], free, 0, parity="even")
    assert even.decision and even.extra["length"] == 2
    with pytest.raises(UsageError):
        S.rank_linkage(Graph(2, [(0, 1)], directed=True), [0], [1], ids(2), 1)


def test_t_cycle_examples():
    assert S.t_cycle(cycle(5), [0, 2, 4]).decision
    assert not S.t_cycle(path(5), [0, 2]).decision
    assert S.t_cycle(cycle(4), []).decision


def test_long_path_parameters_closed_forms():
    p, k2, kx = S.long_path_parameters(1.2, 10)
    assert p == 0.5 and k2 == pytest.approx(6) and kx == pytest.approx(2 * (1 - 1 / math.sqrt(2)) * 12)
    p, _, _ = S.long_path_parameters(2.0, 10)
    assert p == pytest.approx(1 - math.sqrt(0.5)) == pytest.approx(0.2929, abs=1e-4)


def test_long_path_schedule_grid():
    k = 10
    for i in range(21):
        c = 1 + i / 10
        p, k2, kx = S.long_path_parameters(c, k)
        if c <= 4 / 3:
            assert (p, k2, kx) == pytest.approx((0.5, c * k / 2, 2 * (1 - 1 / math.sqrt(2)) * c * k), abs=1e-12)
        else:
            q = 1 - math.sqrt(1 - 1 / c)
            assert (p, k2, kx) == pytest.approx((q, q * c * k, 2 * q * (1 - q) * c * k), abs=1e-12)
    sch = S.long_path_schedule(6, 9)
    assert sch.mu == max(sch.k2, 6 - sch.kx // 2) and sch.kx % 2 == 0
    assert sch.repetitions == math.ceil(10 / sch.p3)
    assert set(sch.to_json()) == {"length", "c", "p", "k2", "kx", "l1", "mu", "p3", "repetitions"}


def test_long_path_examples():
    for k in range(1, 7):
        res = S.long_st_path(path(6), 0, 5, k, seed=k)
        assert res.decision is (k <= 6)
    assert not S.long_st_path(path(6), 0, 5, 7).decision
    assert S.long_st_path(path(3), 1, 1, 1).decision
    res = S.long_st_path(path(5), 0, 4, 4)
    assert res.schedule[0]["p"] == 0.5
    g = Graph(4, [(0, 3), (0, 1), (1, 2), (2, 3)])
    assert S.long_st_path(g, 0, 3, 4).decision
    assert S.long_cycle(cycle(5), 5).decision and not S.long_cycle(path(5), 3).decision


def on_some_st_path(g, s, t):
    """Vertices of all simple st-paths, by depth-first enumeration."""
    adj = {v: g.neighbours(v) for v in range(g.n)}
    seen = set()

    def rec(path):
        u = path[-1]
        if u == t:
            seen.update(path)
            return
        for v in adj[u]:
            if v not in path:
                rec(path + [v])
    rec([s])
    return seen


@given(st.integers(0, 2**32))
def test_st_path_vertices_match_path_enumeration(seed):
    gen = np.random.default_rng(seed)
    n = int(gen.integers(2, 9))
    g = random_graph(n, float(gen.uniform(0.1, 0.6)), gen)
    s, t = (int(v) for v in gen.choice(n, 2, replace=False))
    want = on_some_st_path(g, s, t)
    got = S.st_path_vertices(g, s, t)
    assert got == sorted(want or {s, t})


def test_connected_rank_over_edges_counts_edges():
    # a triangle with independent edges: H may close the cycle, |E(H)| = 3
    tri = Graph(4, [(0, 1), (1, 2), (0, 2)])
    m = ids(3)
    assert S.connected_rank_subgraph(tri, m, 3, 3, over_edges=True).decision
    assert not S.connected_rank_subgraph(tri, m, 3, 2, over_edges=True).decision
    assert S.connected_rank_subgraph(tri, m, 2, 2, over_edges=True).decision
    assert S.connected_rank_subgraph(tri, m, 0, 0, over_edges=True).decision
    assert O.brute_connected_rank_edges(tri, m, 3, 3) and not O.brute_connected_rank_edges(tri, m, 3, 2)


def test_connected_rank_over_edges_matches_exhaustive_search(gen):
    for i in range(25):
        n = int(gen.integers(2, 7))
        g = random_graph(n, 0.5, gen)
        if not g.m:
            continue
        m = small_matroid(F, int(gen.integers(1, 4)), g.m, gen)
        k, w = int(gen.integers(1, m.rank + 1)) if m.rank else 0, int(gen.integers(0, g.m + 1))
        got = S.connected_rank_subgraph(g, m, k, w, over_edges=True, seed=i).decision
        assert got == O.brute_connected_rank_edges(g, m, k, w), (g.edges, k, w)


def test_diverse_examples():
    c4 = cycle(4)
    assert S.diverse_perfect_matchings(c4, 2, 4).decision
    assert not S.diverse_perfect_matchings(c4, 2, 5).decision
    assert S.diverse_perfect_matchings(c4, 1, 0).decision
    assert not S.diverse_perfect_matchings(cycle(3), 1, 0).decision
    assert S.diverse_perfect_matchings(c4, 2, None, mode="sum", total=4).decision
    assert not S.diverse_perfect_matchings(c4, 2, None, mode="sum", total=5).decision
    assert S.diverse_bases(mr.uniform(4, 2, F), 2, 4).decision
    assert not S.diverse_bases(mr.uniform(4, 2, F), 3, 4).decision


def test_distinct_branchings_example():
    g = Graph(3, [(0, 1), (1, 2), (0, 2), (2, 1), (1, 0)], directed=True)
    for k in range(0, 6):
        assert S.distinct_branchings(g, 0, 2, k).decision == O.brute_distinct_branchings(g, 0, 2, k)


def test_steiner_and_motif_examples():
    star = Graph(4, [(0, 1), (0, 2), (0, 3)])
    r = S.steiner_tree(star, [1], 1)
    assert r.decision and r.extra["size"] == 1
    r = S.steiner_tree(star, [1, 2, 3], 4)
    assert r.decision and r.extra["size"] == 4
    assert not S.steiner_tree(star, [1, 2, 3], 3).decision
    p3 = path(3)
    assert S.graph_motif(p3, ["r", "g", "r"], ["r", "g"], k=2).decision
    assert not S.graph_motif(p3, ["r", "g", "r"], ["r", "g"], k=3).decision
    with pytest.raises(SpecError):
        S.graph_motif(p3, ["r", "g", "r"], ["r", "g", "r"], k=2)


def _subset_bases(M, k):
    return {frozenset(M.labels[j] for j in B) for B in itertools.combinations(range(M.n), k)
            if M.rep.columns(B).rank() == k}


def test_motif_matroid_exact_multiset(gen):
    for _ in range(5):
        n = 6
        colours = [int(x) for x in gen.integers(0, 3, n)]
        Q = [int(x) for x in gen.integers(0, 3, 3)]
        g = Graph(n, [])
        M = S.build_motif_edit_matroid(g, colours, Q, 3)
        want = {frozenset(U) for U in itertools.combinations(range(n), 3)
                if sorted(colours[v] for v in U) == sorted(Q)}
        assert _subset_bases(M, 3) == want


def test_motif_matroid_unlimited_edits():
    M = S.build_motif_edit_matroid(Graph(5, []), [0, 0, 1, 1, 2], [7, 7], 2, kd=2, ki=2)
    assert len(_subset_bases(M, 2)) == 10


def test_motif_matroid_substitution():
    colours = ["r", "r", "b"]
    M = S.build_motif_edit_matroid(Graph(3, []), colours, ["r", "r", "r"], 3, ks=1)
    assert _subset_bases(M, 3) == {frozenset({0, 1, 2})}
    M0 = S.build_motif_edit_matroid(Graph(3, []), colours, ["r", "r", "r"], 3)
    assert _subset_bases(M0, 3) == set()


def test_motif_matroid_against_edit_feasibility(gen):
    for _ in range(10):
        n = 6
        colours = [int(x) for x in gen.integers(0, 3, n)]
        Q = [int(x) for x in gen.integers(0, 3, int(gen.integers(1, 4)))]
        ks, kd, ki = (int(x) for x in gen.integers(0, 2, 3))
        k = int(gen.integers(1, 4))
        if max(len(Q) - ki, k - kd) > k:
            continue
        M = S.build_motif_edit_matroid(Graph(n, []), colours, Q, k, ks, kd, ki, seed=int(gen.integers(1 << 30)))
        want = {frozenset(U) for U in itertools.combinations(range(n), k)
                if O.edit_feasible([colours[v] for v in U], Q, ks, kd, ki)}
        assert _subset_bases(M, k) == want


def test_eulerian_examples():
    bowtie = Graph(5, [(0, 1), (1, 2), (0, 2), (0, 3), (3, 4), (0, 4)])
    r = S.eulerian_deletion(bowtie, 0)
    assert r.decision and r.extra["deleted"] == 0
    K4 = Graph(4, list(itertools.combinations(range(4), 2)))
    assert not S.eulerian_deletion(K4, 1).decision
    r = S.eulerian_deletion(K4, 3)
    assert r.decision and r.extra["deleted"] == 2
    assert not S.eulerian_deletion(Graph(4, [(0, 1), (2, 3)]), 3).decision


def test_balanced_examples(gen):
    g = path(4)
    assert S.balanced_path(g, 3, mr.uniform(4, 3, F)).decision
    assert not S.balanced_path(Graph(4, [(0, 1), (2, 3)]), 3, mr.uniform(4, 3, F)).decision
    with pytest.raises(SpecError):
        S.balanced_path(g, 3, mr.uniform(4, 2, F))
    empty = LinearMatroid(Matrix(F, 0, 2))
    assert S.balanced_solution(SparsePoly(F, 2, {(0, 0): 3, (1, 1): 1}).to_oracle(), empty).decision
    assert not S.balanced_solution(SparsePoly(F, 2, {(1, 1): 1}).to_oracle(), empty).decision


# ---------------------------------------------------------------------------
# random agreement with exhaustive search (the full sweep lives in the acceptance run)


def random_instances(gen, count):
    for i in range(count):
        n = int(gen.integers(3, 7))
        g = random_graph(n, 0.5, gen)
        m = small_matroid(F, int(gen.integers(1, 4)), n, gen)
        fam = [sorted(set(int(x) for x in gen.integers(0, n, int(gen.integers(1, 4))))) for _ in range(4)]
        order = [int(v) for v in gen.permutation(n)]
        yield ProblemInstance("qmi", dict(ms=[small_matroid(F, 2, n, gen, 0.5) for _ in range(3)], k=2))
        yield ProblemInstance("set_cover", dict(V=list(range(n)), family=fam, m=m, t=2))
        yield ProblemInstance("set_packing", dict(V=list(range(n)), family=fam, m=m, t=2))
        yield ProblemInstance("odd_coverage", dict(V=list(range(n)), family=fam, t=2, p=int(gen.integers(0, n))))
        yield ProblemInstance("linkage", dict(g=g, S=order[:1], T=order[1:2], m=m, k=int(gen.integers(0, 3))))
        yield ProblemInstance("t_cycle", dict(g=g, terminals=order[:2]))
        yield ProblemInstance("long_path", dict(g=g, s=0, t=n - 1, k=int(gen.integers(1, n + 1))))
        yield ProblemInstance("connected_rank", dict(g=g, m=m, k=m.rank, w=int(gen.integers(1, n + 1))))
        yield ProblemInstance("euler", dict(g=g, k=int(gen.integers(0, 4))))


def test_solvers_agree_with_exhaustive_search():
    gen = np.random.default_rng(2024)
    bad = []
    for i, inst in enumerate(random_instances(gen, 8)):
        if inst.problem == "connected_rank" and inst.args["k"] == 0:
            continue
        if S.solve(inst, seed=i).decision != O.brute_solve(inst):
            bad.append(inst.problem)
    assert bad == []


# ---------------------------------------------------------------------------
# witnesses, monotonicity, reports


def test_witnesses_are_valid(gen):
    ms = [mr.uniform(5, 2, F), mr.graphic(4, [(0, 1), (1, 2), (2, 3), (0, 3), (0, 2)], F),
          mr.partition([[0, 1], [2, 3, 4]], [1, 1], F)]
    r = S.q_matroid_intersection(ms, 2, witness=True)
    assert r.decision and len(r.witness) == 2
    assert all(m.rank_of(r.witness) == 2 for m in ms)

    V = list(range(5))
    fam = [[0, 1], [1, 2], [3], [4], [2, 3]]
    m = ids(5)
    r = S.rank_set_cover_packing(V, fam, m, 3, "packing", witness=True)
    assert r.decision
    chosen = [fam[i] for i in r.witness]
    assert len(chosen) <= 3 and sorted(v for E in chosen for v in E) == V

    g = Graph(5, [(0, 1), (1, 2), (2, 4), (0, 3), (3, 4), (1, 3)])
    r = S.long_st_path(g, 0, 4, 5, witness=True)
    assert r.decision and r.witness[0] == 0 and r.witness[-1] == 4 and len(set(r.witness)) == 5
    assert all(tuple(sorted(e)) in g.edges for e in zip(r.witness, r.witness[1:]))

    r = S.rank_linkage(g, [0], [4], ids(5), 4, witness=True)
    verts = {v for e in r.witness for v in e}
    assert r.decision and len(verts) >= 4 and (frozenset(verts), frozenset(
        g.edges.index(tuple(e)) for e in r.witness)) in set(O.linkages(g, [0], [4]))


def test_eulerian_monotone_in_budget(gen):
    for _ in range(6):
        g = random_graph(5, 0.6, gen)
        answers = [S.eulerian_deletion(g, k).decision for k in range(5)]
        assert answers == sorted(answers)


def test_diverse_antitone_in_distance(gen):
    for _ in range(4):
        g = random_graph(4, 0.8, gen)
        answers = [S.diverse_perfect_matchings(g, 2, d).decision for d in range(6)]
        assert answers == sorted(answers, reverse=True)


def test_result_json_and_bounds():
    r = S.q_matroid_intersection([mr.uniform(4, 2, F)] * 4, 2)
    doc = r.to_json()
    assert doc["problem"] == "qmi" and doc["decision"] is True
    assert S.Fraction(doc["failure_bound"]) > 0


def test_first_success_and_self_reduce():
    calls = []

    def task(i, ok):
        def run():
            calls.append(i)
            return ok, S.Stats(trials=1)
        return run

    hit, stats = S.first_success([task(0, False), task(1, True), task(2, True)])
    assert hit == 1 and calls == [0, 1] and stats.trials == 2
    assert S.self_reduce([1, 2, 3, 4], lambda keep: 2 in keep and 4 in keep) == [2, 4]
