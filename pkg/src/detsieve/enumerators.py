"""Enumerating polynomials for walks, matchings, linkages, joins and branchings.

Every builder returns a circuit-backed :class:`PolyOracle` plus a
:class:`Layout` naming its variables, so callers can attach matroid columns
to the right coordinates.
"""

from __future__ import annotations

from collections.abc import Hashable, Iterable, Sequence
from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import ParseError, SpecError, UsageError
from .field import Field
from .linalg import Matrix
from .polyoracle import Circuit, PolyOracle


@dataclass
class Graph:
    """Graph on vertices 0..n-1.  Undirected unless ``directed``; edges keep input order."""

    n: int
    edges: list[tuple[int, int]]
    directed: bool = False
    colours: dict[int, Hashable] = dc_field(default_factory=dict)
    terminals: list[int] = dc_field(default_factory=list)

    def __post_init__(self):
        self.edges = [tuple(e) if self.directed else (min(e), max(e)) for e in self.edges]
        for u, v in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise UsageError(f"edge ({u}, {v}) outside 0..{self.n - 1}")

    @property
    def m(self) -> int:
        return len(self.edges)

    def out_arcs(self) -> list[list[tuple[int, int]]]:
        """For every vertex, (neighbour, edge index) pairs it can move to, sorted by neighbour."""
        out = [[] for _ in range(self.n)]
        for j, (u, v) in enumerate(self.edges):
            if u == v:
                continue
            out[u].append((v, j))
            if not self.directed:
                out[v].append((u, j))
        for lst in out:
            lst.sort()
        return out

    def neighbours(self, v: int) -> list[int]:
        return sorted({u for u, _ in self.out_arcs()[v]})

    def degree(self, v: int) -> int:
        return sum((a == v) + (b == v) for a, b in self.edges)

    def reversed(self) -> "Graph":
        return Graph(self.n, [(v, u) for u, v in self.edges], self.directed, dict(self.colours),
                     list(self.terminals))

    def without_edges(self, drop: Iterable[int]) -> "Graph":
        drop = set(drop)
        return Graph(self.n, [e for j, e in enumerate(self.edges) if j not in drop], self.directed,
                     dict(self.colours), list(self.terminals))

    def to_text(self) -> str:
        head = f"graph {self.n} {self.m}" + (" directed" if self.directed else "")
        lines = [head] + [f"{u + 1} {v + 1}" for u, v in self.edges]
        lines += [f"colour {v + 1} {c}" for v, c in sorted(self.colours.items())]
        lines += [f"terminal {v + 1}" for v in self.terminals]
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str) -> "Graph":
        """Parse ``graph <n> <m> [directed]`` then ``u v`` lines (1-based vertices),
        optionally followed by ``colour v c`` and ``terminal v`` lines."""
        lines = [(i + 1, ln.split("#", 1)[0].strip()) for i, ln in enumerate(text.splitlines())]
        lines = [(i, ln) for i, ln in lines if ln]
        if not lines:
            raise ParseError("empty graph file", 1)
        lineno, head = lines[0]
        parts = head.split()
        if parts[0] != "graph" or len(parts) not in (3, 4) or (len(parts) == 4 and parts[3] != "directed"):
            raise ParseError("expected 'graph <n> <m> [directed]'", lineno)
        try:
            n, m = int(parts[1]), int(parts[2])
        except ValueError:
            raise ParseError("vertex and edge counts must be integers", lineno) from None
        directed = len(parts) == 4
        edges, colours, terminals = [], {}, []

        def vertex(tok: str, ln: int) -> int:
            try:
                v = int(tok)
            except ValueError:
                raise ParseError(f"bad vertex {tok!r}", ln) from None
            if not 1 <= v <= n:
                raise ParseError(f"vertex {v} outside 1..{n}", ln)
            return v - 1

        for ln, line in lines[1:]:
            parts = line.split()
            if parts[0] == "colour" and len(parts) == 3:
                colours[vertex(parts[1], ln)] = parts[2]
            elif parts[0] == "terminal" and len(parts) == 2:
                terminals.append(vertex(parts[1], ln))
            elif len(parts) == 2:
                if len(edges) >= m:
                    raise ParseError(f"more than {m} edges", ln)
                edges.append((vertex(parts[0], ln), vertex(parts[1], ln)))
            else:
                raise ParseError(f"unrecognised line {line!r}", ln)
        if len(edges) != m:
            raise ParseError(f"header promises {m} edges, found {len(edges)}", lineno)
        return cls(n, edges, directed, colours, terminals)


def random_graph(n: int, p: float, gen: np.random.Generator, directed: bool = False) -> Graph:
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v and (directed or u < v)]
    return Graph(n, [e for e in pairs if gen.random() < p], directed)


class Layout:
    """Names of the variables of an enumerating polynomial."""

    def __init__(self):
        self.keys: list[Hashable] = []
        self.index: dict[Hashable, int] = {}

    def add(self, key: Hashable) -> int:
        if key in self.index:
            raise UsageError(f"variable {key!r} declared twice")
        self.index[key] = len(self.keys)
        self.keys.append(key)
        return self.index[key]

    def __getitem__(self, key: Hashable) -> int:
        return self.index[key]

    def get(self, key: Hashable, default=None):
        return self.index.get(key, default)

    def __contains__(self, key) -> bool:
        return key in self.index

    def __len__(self) -> int:
        return len(self.keys)

    def of_kind(self, tag: str) -> list[int]:
        return [i for i, key in enumerate(self.keys) if isinstance(key, tuple) and key[0] == tag]


def walk_poly(g: Graph, s: int, t: int, k: int, field: Field) -> tuple[PolyOracle, Layout]:
    """Sum over s-t walks with k edges of x_{s,0} prod_i x_{v_i,i} x_{e_i,i}.

    Variables: ('x', s, 0), then ('x', v, i) and ('e', j, i) for i = 1..k.
    The circuit is skew and strongly monotone; degree 2k+1, homogeneous.
    """
    if k < 0:
        raise SpecError("walk length must be non-negative")
    L = Layout()
    L.add(("x", s, 0))
    for i in range(1, k + 1):
        for v in range(g.n):
            L.add(("x", v, i))
    for i in range(1, k + 1):
        for j in range(g.m):
            L.add(("e", j, i))
    c = Circuit(field, len(L))
    arcs = g.out_arcs()
    cur: dict[int, int] = {s: c.input(L[("x", s, 0)])}
    for i in range(1, k + 1):
        incoming: dict[int, list[int]] = {}
        for u, gu in cur.items():
            for v, j in arcs[u]:
                incoming.setdefault(v, []).append(c.mul(gu, c.input(L[("e", j, i)])))
        cur = {v: c.mul(c.input(L[("x", v, i)]), c.sum(gs)) for v, gs in sorted(incoming.items())}
    c.set_output(cur[t] if t in cur else c.const(0))
    c.certified_monotone = True
    return PolyOracle.from_circuit(c, 2 * k + 1, homogeneous=True, name="walk"), L


def _linear_entries(c: Circuit, A1: Matrix, A2: Matrix, xs: Sequence[int]) -> list[int]:
    k, n = A1.rows, A1.cols
    out = []
    for i in range(k):
        for j in range(k):
            terms = []
            for v in range(n):
                coef = A1.field.mul(A1[i, v], A2[j, v])
                if coef:
                    terms.append(c.mul(c.const(coef), xs[v]))
            out.append(c.sum(terms) if terms else None)
    return out


def cauchy_binet_poly(A1: Matrix, A2: Matrix) -> PolyOracle:
    """det(A1 diag(x) A2^T) = sum over k-subsets B of det A1[B] det A2[B] x^B."""
    if A1.rows != A2.rows or A1.cols != A2.cols or A1.field != A2.field:
        raise UsageError("Cauchy-Binet needs two k x n matrices over one field")
    c = Circuit(A1.field, A1.cols)
    xs = [c.input(v) for v in range(A1.cols)]
    c.set_matrix(_linear_entries(c, A1, A2, xs), A1.rows)
    return PolyOracle.from_circuit(c, A1.rows, homogeneous=True, name="cauchy-binet")


def det_circuit(c: Circuit, entries: Sequence[int | None], k: int) -> int:
    """Laplace expansion along rows with memoised column subsets: O(k 2^k) gates."""
    prime = c.field.characteristic != 2
    memo: dict[tuple[int, int], int] = {}

    def minor(r: int, cols: int) -> int:
        if r == k:
            return c.const(1)
        key = (r, cols)
        if key in memo:
            return memo[key]
        acc = None
        pos = 0
        for j in range(k):
            if not cols >> j & 1:
                continue
            e = entries[r * k + j]
            if e is not None:
                term = c.mul(e, minor(r + 1, cols & ~(1 << j)))
                if acc is None:
                    acc = term if not (prime and pos % 2) else c.sub(c.const(0), term)
                elif prime and pos % 2:
                    acc = c.sub(acc, term)
                else:
                    acc = c.add(acc, term)
            pos += 1
        memo[key] = acc if acc is not None else c.const(0)
        return memo[key]

    return minor(0, (1 << k) - 1)


def cauchy_binet_circuit(A1: Matrix, A2: Matrix) -> PolyOracle:
    """Cauchy-Binet polynomial as a single-output (division-free) circuit."""
    c = Circuit(A1.field, A1.cols)
    xs = [c.input(v) for v in range(A1.cols)]
    c.set_output(det_circuit(c, _linear_entries(c, A1, A2, xs), A1.rows))
    return PolyOracle.from_circuit(c, A1.rows, homogeneous=True, name="cauchy-binet")


def matching_poly(g: Graph, field: Field, k: int | None = None,
                  gen: np.random.Generator | None = None) -> PolyOracle:
    """Pfaffian of the Tutte matrix in characteristic 2: sum over perfect matchings
    of prod x_e.  With k set, n - 2k universal vertices joined to every vertex by
    random constant weights turn it into a sum over k-matchings.  Variables are
    the edges in order."""
    if field.characteristic != 2:
        raise UsageError("the Pfaffian enumerator is built in characteristic 2")
    if g.directed:
        raise UsageError("matchings are defined on undirected graphs")
    pad = 0
    if k is not None:
        if gen is None:
            raise UsageError("the k-matching variant needs a random generator")
        pad = g.n - 2 * k
        if pad < 0:
            c = Circuit(field, g.m)
            c.set_output(c.const(0))
            return PolyOracle.from_circuit(c, 0, homogeneous=True, name="matching")
    N = g.n + pad
    c = Circuit(field, g.m)
    entries: list[int | None] = [None] * (N * N)
    for j, (u, v) in enumerate(g.edges):
        if u == v:
            continue
        x = c.input(j)
        for a, b in ((u, v), (v, u)):
            entries[a * N + b] = x if entries[a * N + b] is None else c.add(entries[a * N + b], x)
    for p in range(g.n, N):
        for v in range(g.n):
            w = c.const(field.random_nonzero(gen))
            entries[p * N + v] = w
            entries[v * N + p] = w
    c.set_matrix(entries, N, pfaffian=True)
    deg = k if k is not None else g.n // 2
    return PolyOracle.from_circuit(c, deg, homogeneous=True, name="matching")


def branching_walk_poly(g: Graph, k: int, field: Field, start: int | None = None) -> tuple[PolyOracle, Layout]:
    """Sum over properly ordered branching walks with k nodes of x-monomials.

    B(v, j) = x_v C_1(v, j-1) and C_i(v, j) = C_{i+1}(v, j) +
    sum_t y_(v,u_i) B(u_i, t) C_{i+1}(v, j-t) over the sorted neighbours u_i
    of v.  Variables: ('x', v) then ('y', u, v) per arc.  With ``start`` only
    walks rooted there are counted.  Homogeneous of degree 2k - 1.
    """
    if k < 1:
        raise SpecError("branching walks have at least one node")
    L = Layout()
    for v in range(g.n):
        L.add(("x", v))
    arcs = g.out_arcs()
    for u in range(g.n):
        for v, _ in arcs[u]:
            if ("y", u, v) not in L:
                L.add(("y", u, v))
    c = Circuit(field, len(L))
    nbrs = [sorted({v for v, _ in arcs[u]}) for u in range(g.n)]
    B: dict[tuple[int, int], int | None] = {}
    zero = None

    for j in range(1, k + 1):
        for v in range(g.n):
            # forest over neighbours of v with total size j - 1
            target = j - 1
            # C[i][s] for s = 0..target, computed from the last neighbour backwards
            d = len(nbrs[v])
            nxt: list[int | None] = [c.const(1)] + [zero] * target
            for i in range(d - 1, -1, -1):
                u = nbrs[v][i]
                y = c.input(L[("y", v, u)])
                cur = list(nxt)
                for s in range(1, target + 1):
                    terms = [cur[s]] if cur[s] is not None else []
                    for t in range(1, s + 1):
                        b = B.get((u, t))
                        if b is None or nxt[s - t] is None:
                            continue
                        terms.append(c.mul(c.mul(y, b), nxt[s - t]))
                    cur[s] = c.sum(terms) if terms else None
                nxt = cur
            forest = nxt[target]
            B[(v, j)] = None if forest is None else c.mul(c.input(L[("x", v)]), forest)
    roots = [start] if start is not None else list(range(g.n))
    outs = [B[(v, k)] for v in roots if B.get((v, k)) is not None]
    c.set_output(c.sum(outs) if outs else c.const(0))
    return PolyOracle.from_circuit(c, 2 * k - 1, homogeneous=True, name="branching-walk"), L


@dataclass
class LinkageInstance:
    """Preprocessed (S, T) linkage data behind :func:`stpath_linkage_det`."""

    n: int                                   # vertices after adding subdivisions
    S: list[int]
    T: list[int]
    arcs: list[tuple[int, int, Hashable]]    # (tail, head, edge key)
    removed: list[int]                       # vertices of S and T that coincide
    sub_vertex: dict[int, int]               # original edge index -> subdivision vertex


def _prepare_linkage(g: Graph, S: Sequence[int], T: Sequence[int]) -> LinkageInstance:
    S, T = list(S), list(T)
    if len(S) != len(T):
        raise SpecError("a perfect linkage needs |S| = |T|")
    if len(set(S)) != len(S) or len(set(T)) != len(T):
        raise SpecError("terminal lists must not repeat vertices")
    both = [v for v in S if v in set(T)]
    S = [v for v in S if v not in both]
    T = [v for v in T if v not in both]
    inS, inT, gone = set(S), set(T), set(both)
    n = g.n
    arcs: list[tuple[int, int, Hashable]] = []
    sub_vertex = {}
    for j, (u, v) in enumerate(g.edges):
        if u == v or u in gone or v in gone:
            continue
        if (u in inS and v in inS) or (u in inT and v in inT):
            continue
        crossing = (u in inS and v in inT) or (u in inT and v in inS)
        if crossing:
            if g.directed and u in inT:
                continue
            w = n
            n += 1
            sub_vertex[j] = w
            a, b = (u, v) if u in inS else (v, u)
            arcs.append((a, w, ("e", j)))
            arcs.append((w, b, ("e2", j)))
            if not g.directed:
                arcs.append((w, a, ("e", j)))
                arcs.append((b, w, ("e2", j)))
            continue
        arcs.append((u, v, ("e", j)))
        if not g.directed:
            arcs.append((v, u, ("e", j)))
    return LinkageInstance(n, S, T, arcs, both, sub_vertex)


def stpath_linkage_det(g: Graph, S: Sequence[int], T: Sequence[int], field: Field, *,
                       vertex_vars: bool = False, pair_vars: bool = False,
                       trackers: dict[str, set] | None = None) -> tuple[PolyOracle, Layout]:
    """Determinant of the linkage matrix A_ST.

    Off S and T every vertex has a loop of weight 1, edges carry x_e
    symmetrically, nothing but T enters S, rows of T are zero except
    A[t_i, s_i] = 1.  Nonzero iff a perfect (S, T)-linkage exists.  Shared
    terminals are removed first and S-T edges are subdivided (variables
    ('e', j) and ('e2', j) for the two halves).

    ``vertex_vars`` adds ('v', v) per vertex, substitutes x_uv <- x_uv (x_u + x_v)
    and multiplies by the variables of S and of the removed shared terminals,
    so odd-degree vertex variables mark the vertices of the linkage.
    ``pair_vars`` replaces the constants A[t_i, s_i] by variables ('pair', i).
    ``trackers`` maps a name to a set of edge indices (or ('pair', i)); entries
    of those arcs are multiplied by the variable ('z', name); only the first
    half of a subdivided edge is tracked.
    """
    inst = _prepare_linkage(g, S, T)
    trackers = trackers or {}
    L = Layout()
    for key in dict.fromkeys(a[2] for a in inst.arcs):
        L.add(key)
    if vertex_vars:
        for v in range(inst.n):
            L.add(("v", v))
    if pair_vars:
        for i in range(len(inst.S)):
            L.add(("pair", i))
    for name in trackers:
        L.add(("z", name))
    c = Circuit(field, len(L))
    n = inst.n
    inS, inT = set(inst.S), set(inst.T)
    entries: list[int | None] = [None] * (n * n)
    alive = [v for v in range(n) if v not in set(inst.removed)]

    def tracked(key: Hashable) -> list[int]:
        if key[0] == "e2":
            return []
        probe = key[1] if key[0] == "e" else key
        return [c.input(L[("z", name)]) for name, members in trackers.items() if probe in members]

    for u, v, key in inst.arcs:
        if v in inS or u in inT:
            continue
        val = c.input(L[key])
        if vertex_vars:
            val = c.mul(val, c.add(c.input(L[("v", u)]), c.input(L[("v", v)])))
        for z in tracked(key):
            val = c.mul(val, z)
        pos = u * n + v
        entries[pos] = val if entries[pos] is None else c.add(entries[pos], val)
    for v in alive:
        if v not in inS and v not in inT:
            entries[v * n + v] = c.const(1)
    for i, (s, t) in enumerate(zip(inst.S, inst.T)):
        if pair_vars:
            val = c.input(L[("pair", i)])
            for z in tracked(("pair", i)):
                val = c.mul(val, z)
        else:
            val = c.const(1)
        entries[t * n + s] = val
    # drop removed vertices: restrict the matrix to alive rows and columns
    idx = {v: r for r, v in enumerate(alive)}
    dim = len(alive)
    mat: list[int | None] = [None] * (dim * dim)
    for u in alive:
        for v in alive:
            mat[idx[u] * dim + idx[v]] = entries[u * n + v]
    factors = []
    if vertex_vars:
        factors = [c.input(L[("v", s)]) for s in inst.S + inst.removed]
    if factors:
        if dim == 0:
            mat, dim = [c.product(factors)], 1
        else:
            # scale the first row: det picks up every factor once
            f = c.product(factors)
            mat[:dim] = [None if e is None else c.mul(f, e) for e in mat[:dim]]
    c.set_matrix(mat, dim)
    return PolyOracle.from_circuit(c, name="linkage"), L


def tjoin_poly(g: Graph, T: Sequence[int], k: int, field: Field) -> PolyOracle:
    """Pfaffian of the T x T matrix A'[u, v] = sum_{l=1..k} (A^l)[u, v], where A is
    the symmetric edge-variable adjacency matrix.  Its monomials include every
    T-join with at most k edges.  Variables are the edges in order."""
    if field.characteristic != 2:
        raise UsageError("the T-join enumerator is built in characteristic 2")
    T = list(T)
    if len(T) % 2:
        raise SpecError("a T-join needs an even number of terminals")
    arcs = g.out_arcs()
    c = Circuit(field, g.m)
    walks: dict[int, dict[int, int]] = {}
    for u in T:
        cur: dict[int, int] = {u: c.const(1)}
        acc: dict[int, list[int]] = {}
        for _ in range(k):
            nxt: dict[int, list[int]] = {}
            for a, ga in cur.items():
                for b, j in arcs[a]:
                    nxt.setdefault(b, []).append(c.mul(ga, c.input(j)))
            cur = {b: c.sum(gs) for b, gs in sorted(nxt.items())}
            for b, gb in cur.items():
                acc.setdefault(b, []).append(gb)
        walks[u] = {b: c.sum(gs) for b, gs in acc.items()}
    t = len(T)
    mat: list[int | None] = [None] * (t * t)
    for a in range(t):
        for b in range(a + 1, t):
            e = walks[T[a]].get(T[b])
            mat[a * t + b] = e
            mat[b * t + a] = e
    c.set_matrix(mat, t, pfaffian=True)
    return PolyOracle.from_circuit(c, (t // 2) * k, name="tjoin")


def branching_poly(g: Graph, root: int, field: Field, out: bool = True) -> PolyOracle:
    """Sum over out-branchings (or in-branchings) rooted at ``root`` of prod x_a.

    Determinant of the arc-weighted Laplacian with the root row and column
    removed.  Variables are the arcs in order; homogeneous of degree n - 1.
    """
    if not g.directed:
        raise UsageError("branchings are defined on directed graphs")
    h = g if out else g.reversed()
    c = Circuit(field, g.m)
    n = g.n
    keep = [v for v in range(n) if v != root]
    pos = {v: i for i, v in enumerate(keep)}
    d = len(keep)
    diag: dict[int, list[int]] = {}
    off: dict[tuple[int, int], list[int]] = {}
    for j, (u, v) in enumerate(h.edges):
        if u == v or v == root:
            continue
        x = c.input(j)
        diag.setdefault(v, []).append(x)
        if u != root:
            off.setdefault((u, v), []).append(x)
    mat: list[int | None] = [None] * (d * d)
    zero = c.const(0)
    for v in keep:
        if v in diag:
            mat[pos[v] * d + pos[v]] = c.sum(diag[v])
    for (u, v), xs in off.items():
        s = c.sum(xs)
        mat[pos[u] * d + pos[v]] = s if field.characteristic == 2 else c.sub(zero, s)
    c.set_matrix(mat, d)
    return PolyOracle.from_circuit(c, n - 1, homogeneous=True, name="branching")
