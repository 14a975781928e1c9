import itertools
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, strategies as st

from detsieve.enumerators import (Graph, branching_poly, branching_walk_poly, cauchy_binet_circuit,
                                  cauchy_binet_poly, matching_poly, random_graph, stpath_linkage_det,
                                  tjoin_poly, walk_poly)
from detsieve.errors import ParseError, SpecError, UsageError
from detsieve.field import GF2_64, P31
from detsieve.linalg import Matrix
from detsieve.oracle import branchings, expand_symbolic, linkages, perfect_matchings
from detsieve.polyoracle import check_strong_monotonicity

BIG = dict(max_vars=200)


def monomials(P, layout=None):
    """Expanded monomials as {frozenset of (key, exponent): coefficient}."""
    E = expand_symbolic(P, **BIG)
    keys = layout.keys if layout is not None else list(range(P.arity))
    return {frozenset((keys[i], e) for i, e in enumerate(m) if e): c for m, c in E.terms.items()}


def dfs_walks(g, s, t, k):
    arcs = g.out_arcs()
    out = []

    def rec(v, i, mono):
        if i == k:
            if v == t:
                out.append(frozenset(mono))
            return
        for u, j in arcs[v]:
            rec(u, i + 1, mono + [(("x", u, i + 1), 1), (("e", j, i + 1), 1)])

    rec(s, 0, [(("x", s, 0), 1)])
    return out


# ---------------------------------------------------------------------------
# graphs


def test_graph_text_roundtrip():
    g = Graph(4, [(1, 0), (2, 3)], colours={0: "r"}, terminals=[2])
    assert g.edges == [(0, 1), (2, 3)]
    h = Graph.parse(g.to_text())
    assert h == g
    d = Graph(3, [(2, 0)], directed=True)
    assert Graph.parse(d.to_text()).edges == [(2, 0)]


@pytest.mark.parametrize("text, msg", [
    ("", "empty"),
    ("graph 2\n", "expected"),
    ("graph 2 1\n1 3\n", "outside"),
    ("graph 2 2\n1 2\n", "promises"),
    ("graph 2 1\n1 2 3\n", "unrecognised"),
])
def test_graph_parse_errors(text, msg):
    with pytest.raises(ParseError, match=msg):
        Graph.parse(text)


def test_graph_rejects_bad_edges():
    with pytest.raises(UsageError):
        Graph(2, [(0, 2)])


# ---------------------------------------------------------------------------
# walks


def test_walk_on_a_path():
    g = Graph(3, [(0, 1), (1, 2)])
    P, L = walk_poly(g, 0, 2, 2, GF2_64)
    want = frozenset({(("x", 0, 0), 1), (("x", 1, 1), 1), (("e", 0, 1), 1), (("x", 2, 2), 1), (("e", 1, 2), 1)})
    assert monomials(P, L) == {want: 1}


def test_walk_between_components_is_zero():
    g = Graph(4, [(0, 1), (2, 3)])
    P, _ = walk_poly(g, 0, 3, 3, GF2_64)
    assert monomials(P) == {}
    with pytest.raises(SpecError):
        walk_poly(g, 0, 1, -1, GF2_64)


@given(st.integers(0, 2**32))
def test_walk_monomials_are_walks(seed):
    gen = np.random.default_rng(seed)
    n = int(gen.integers(2, 5))
    g = random_graph(n, 0.6, gen)
    s, t, k = int(gen.integers(0, n)), int(gen.integers(0, n)), int(gen.integers(0, 4))
    P, L = walk_poly(g, s, t, k, GF2_64)
    want = dfs_walks(g, s, t, k)
    assert monomials(P, L) == {w: 1 for w in want}
    assert len(set(want)) == len(want)


@pytest.mark.parametrize("seed", range(4))
def test_walk_count_over_prime_field(seed):
    gen = np.random.default_rng(seed)
    g = random_graph(6, 0.5, gen)
    k = 4
    P, _ = walk_poly(g, 0, 1, k, P31)
    assert P([1] * P.arity) == len(dfs_walks(g, 0, 1, k)) % P31.order
    assert check_strong_monotonicity(P.circuit, max_vars=P.arity)


# ---------------------------------------------------------------------------
# Cauchy-Binet


@pytest.mark.parametrize("F", [GF2_64, P31], ids=lambda f: f.label)
@pytest.mark.parametrize("build", [cauchy_binet_poly, cauchy_binet_circuit], ids=["det", "circuit"])
def test_cauchy_binet_expansion(F, build, gen):
    for k, n in [(1, 1), (1, 3), (2, 4), (3, 5), (3, 6)]:
        A1, A2 = Matrix.random(F, k, n, gen), Matrix.random(F, k, n, gen)
        want = {}
        for B in itertools.combinations(range(n), k):
            c = F.mul(A1.columns(B).det(), A2.columns(B).det())
            if c:
                want[frozenset((v, 1) for v in B)] = c
        assert monomials(build(A1, A2)) == want


def test_cauchy_binet_identity_is_product():
    I = Matrix.identity(GF2_64, 3)
    assert monomials(cauchy_binet_poly(I, I)) == {frozenset((v, 1) for v in range(3)): 1}
    with pytest.raises(UsageError):
        cauchy_binet_poly(I, Matrix.identity(GF2_64, 2))


def test_cauchy_binet_circuit_is_single_output():
    A = Matrix.random(GF2_64, 2, 4, np.random.default_rng(0))
    c = cauchy_binet_circuit(A, A)
    assert c.circuit.fin == 0 and c.degree == 2


# ---------------------------------------------------------------------------
# matchings


def test_matching_examples():
    assert monomials(matching_poly(Graph(2, [(0, 1)]), GF2_64)) == {frozenset({(0, 1)}): 1}
    assert monomials(matching_poly(Graph(3, [(0, 1), (1, 2), (0, 2)]), GF2_64)) == {}
    K4 = Graph(4, list(itertools.combinations(range(4), 2)))
    assert len(monomials(matching_poly(K4, GF2_64))) == 3


@given(st.integers(0, 2**32))
def test_matching_monomials_are_perfect_matchings(seed):
    gen = np.random.default_rng(seed)
    n = 2 * int(gen.integers(1, 4))
    g = random_graph(n, 0.6, gen)
    want = {frozenset((j, 1) for j in pm): 1 for pm in perfect_matchings(g)}
    assert monomials(matching_poly(g, GF2_64)) == want


def test_k_matching_variant(gen):
    g = Graph(4, [(0, 1), (1, 2), (2, 3)])
    got = monomials(matching_poly(g, GF2_64, k=1, gen=gen))
    assert set(got) == {frozenset({(j, 1)}) for j in range(3)}
    assert monomials(matching_poly(g, GF2_64, k=3, gen=gen)) == {}
    with pytest.raises(UsageError):
        matching_poly(g, GF2_64, k=1)
    with pytest.raises(UsageError):
        matching_poly(g, P31)


# ---------------------------------------------------------------------------
# branching walks


def _times(*monos):
    total = Counter()
    for m in monos:
        total.update(dict(m))
    return tuple(sorted(total.items()))


def brute_branching_walks(g, k, start=None):
    """Properly ordered branching walks: rooted trees mapped into g where the
    children of every node go to distinct neighbours, as {monomial: count}."""
    nbrs = [g.neighbours(v) for v in range(g.n)]

    def trees(v, j):
        out = Counter()
        for forest, cnt in forests(v, nbrs[v], j - 1).items():
            out[_times(forest, [(("x", v), 1)])] += cnt
        return out

    def forests(v, cand, size):
        if size == 0:
            return Counter({(): 1})
        out = Counter()
        if not cand:
            return out
        u, rest = cand[0], cand[1:]
        out.update(forests(v, rest, size))
        for t in range(1, size + 1):
            for sub, c1 in trees(u, t).items():
                for fr, c2 in forests(v, rest, size - t).items():
                    out[_times(sub, fr, [(("y", v, u), 1)])] += c1 * c2
        return out

    roots = [start] if start is not None else range(g.n)
    total = Counter()
    for r in roots:
        total.update(trees(r, k))
    return {frozenset(m): c for m, c in total.items()}


def test_branching_walk_examples():
    g = Graph(2, [(0, 1)])
    P, L = branching_walk_poly(g, 1, GF2_64, start=0)
    assert monomials(P, L) == {frozenset({(("x", 0), 1)}): 1}
    P, L = branching_walk_poly(g, 2, GF2_64, start=0)
    assert monomials(P, L) == {frozenset({(("x", 0), 1), (("y", 0, 1), 1), (("x", 1), 1)}): 1}
    P, L = branching_walk_poly(g, 3, GF2_64, start=0)
    assert monomials(P, L) == {frozenset({(("x", 0), 2), (("x", 1), 1), (("y", 0, 1), 1), (("y", 1, 0), 1)}): 1}
    with pytest.raises(SpecError):
        branching_walk_poly(g, 0, GF2_64)


@given(st.integers(0, 2**32))
def test_branching_walks_match_enumeration(seed):
    gen = np.random.default_rng(seed)
    n = int(gen.integers(1, 5))
    g = random_graph(n, 0.6, gen)
    k = int(gen.integers(1, 5))
    start = int(gen.integers(0, n)) if gen.random() < 0.5 else None
    P, L = branching_walk_poly(g, k, P31, start=start)
    want = {m: c % P31.order for m, c in brute_branching_walks(g, k, start).items()}
    assert monomials(P, L) == {m: c for m, c in want.items() if c}


def test_branching_walk_monotonicity():
    g = Graph(3, [(0, 1), (1, 2), (0, 2)])
    for k in (1, 2):
        assert check_strong_monotonicity(branching_walk_poly(g, k, GF2_64)[0].circuit)
    # from k = 3 on, walks revisit vertices, so monomials such as x_0^2 x_1 are not multilinear
    assert not check_strong_monotonicity(branching_walk_poly(g, 3, GF2_64)[0].circuit)


# ---------------------------------------------------------------------------
# linkages


def decode(mono, g):
    """Split a linkage monomial into (edges of degree 1, edges of degree 2) by original index."""
    once, twice = set(), set()
    for key, e in mono:
        if key[0] in ("e", "e2"):
            (once if e == 1 else twice).add(key[1])
    return frozenset(once), frozenset(twice)


def test_linkage_examples():
    g = Graph(3, [(0, 1), (1, 2)])
    P, L = stpath_linkage_det(g, [0], [2], GF2_64)
    got = [decode(m, g) for m in monomials(P, L)]
    assert (frozenset({0, 1}), frozenset()) in got
    h = Graph(5, [(0, 1), (1, 2), (3, 4)])
    P, L = stpath_linkage_det(h, [0], [2], GF2_64)
    got = [decode(m, h) for m in monomials(P, L)]
    assert (frozenset({0, 1}), frozenset({2})) in got
    d = Graph(4, [(0, 1), (2, 3)])
    P, _ = stpath_linkage_det(d, [0], [3], GF2_64)
    assert monomials(P) == {}


@given(st.integers(0, 2**32))
def test_linkage_monomials_decode_to_linkages(seed):
    gen = np.random.default_rng(seed)
    n = int(gen.integers(2, 7))
    g = random_graph(n, 0.5, gen)
    l = int(gen.integers(1, min(2, n // 2) + 1))
    order = [int(v) for v in gen.permutation(n)]
    S, T = order[:l], order[l:2 * l]
    P, L = stpath_linkage_det(g, S, T, GF2_64)
    all_links = {edges: verts for verts, edges in linkages(g, S, T)}
    seen = set()
    for mono in monomials(P, L):
        once, twice = decode(mono, g)
        assert once in all_links
        used = set(all_links[once])
        for j in twice:
            u, v = g.edges[j]
            assert u not in used and v not in used
            used |= {u, v}
        if not twice:
            seen.add(once)
    assert seen == set(all_links)


def test_linkage_with_shared_terminal_and_vertex_vars():
    g = Graph(4, [(0, 1), (1, 2), (2, 3)])
    P, L = stpath_linkage_det(g, [0, 3], [2, 3], GF2_64, vertex_vars=True)
    odd = set()
    for mono in monomials(P, L):
        once, twice = decode(mono, g)
        if not twice:
            odd.add(frozenset(k[1] for k, e in mono if k[0] == "v" and e % 2))
    assert frozenset({0, 1, 2, 3}) in odd
    with pytest.raises(SpecError):
        stpath_linkage_det(g, [0], [1, 2], GF2_64)
    with pytest.raises(SpecError):
        stpath_linkage_det(g, [0, 0], [1, 2], GF2_64)


def test_linkage_trackers_mark_edges():
    g = Graph(3, [(0, 1), (1, 2), (0, 2)])
    P, L = stpath_linkage_det(g, [0], [2], GF2_64, trackers={"len": {0, 1, 2}})
    for mono in monomials(P, L):
        once, twice = decode(mono, g)
        z = dict(mono).get(("z", "len"), 0)
        assert z == len(once) + 2 * len(twice)


# ---------------------------------------------------------------------------
# T-joins and branchings


def test_tjoin_examples():
    g = Graph(2, [(0, 1)])
    assert monomials(tjoin_poly(g, [0, 1], 1, GF2_64)) == {frozenset({(0, 1)}): 1}
    C4 = Graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
    got = monomials(tjoin_poly(C4, [0, 2], 2, GF2_64))
    assert set(got) == {frozenset({(0, 1), (1, 1)}), frozenset({(2, 1), (3, 1)})}
    assert monomials(tjoin_poly(C4, [], 3, GF2_64)) == {frozenset(): 1}
    with pytest.raises(SpecError):
        tjoin_poly(C4, [0], 2, GF2_64)


def test_branching_examples():
    g = Graph(2, [(0, 1)], directed=True)
    assert monomials(branching_poly(g, 0, GF2_64)) == {frozenset({(0, 1)}): 1}
    assert monomials(branching_poly(g, 1, GF2_64)) == {}
    with pytest.raises(UsageError):
        branching_poly(Graph(2, [(0, 1)]), 0, GF2_64)


@given(st.integers(0, 2**32), st.booleans())
def test_branchings_match_enumeration(seed, out):
    gen = np.random.default_rng(seed)
    n = int(gen.integers(2, 6))
    g = random_graph(n, 0.5, gen, directed=True)
    root = int(gen.integers(0, n))
    want = branchings(g, root, out)
    P = branching_poly(g, root, P31, out)
    assert P([1] * P.arity) == len(want) % P31.order
    assert monomials(P) == {frozenset((j, 1) for j in b): 1 for b in want}
