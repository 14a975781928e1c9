"""Ground truth for tests: exact sparse expansion of small oracles and
exhaustive solvers for every problem the library decides.

Nothing here shares code with the evaluation paths: circuits are re-executed
monomial by monomial, determinants use cofactor expansion and Pfaffians their
row expansion.
"""

from __future__ import annotations

import itertools
from collections.abc import Callable, Iterable, Sequence

import numpy as np

from .errors import CapacityError, UsageError
from .field import GF2_64, Field
from .linalg import Matrix
from .matroid import ColumnAssoc, LinearMatroid
from .polyoracle import FIN_DET, FIN_OUT, OP_ADD, OP_CONST, OP_INPUT, OP_MUL, PolyOracle

MAX_VARS = 12
MAX_MONOMIALS = 100_000

Monomial = tuple[int, ...]


class SparsePoly:
    """Polynomial stored as {exponent vector: nonzero coefficient}."""

    def __init__(self, field: Field, arity: int, terms: dict[Monomial, int] | None = None,
                 max_monomials: int = MAX_MONOMIALS):
        self.field = field
        self.arity = arity
        self.max_monomials = max_monomials
        self.terms: dict[Monomial, int] = {}
        for mono, c in (terms or {}).items():
            if len(mono) != arity:
                raise UsageError("exponent vector length differs from the arity")
            c = field.check(c)
            if c:
                self.terms[tuple(mono)] = c
        self._cap()

    def _cap(self) -> None:
        if len(self.terms) > self.max_monomials:
            raise CapacityError(f"expansion exceeds {self.max_monomials} monomials")

    @classmethod
    def constant(cls, field: Field, arity: int, c: int, **kw) -> "SparsePoly":
        return cls(field, arity, {(0,) * arity: c}, **kw)

    @classmethod
    def variable(cls, field: Field, arity: int, i: int, **kw) -> "SparsePoly":
        mono = [0] * arity
        mono[i] = 1
        return cls(field, arity, {tuple(mono): 1}, **kw)

    def _new(self, terms: dict[Monomial, int]) -> "SparsePoly":
        out = SparsePoly(self.field, self.arity, max_monomials=self.max_monomials)
        out.terms = {m: c for m, c in terms.items() if c}
        out._cap()
        return out

    def __add__(self, other: "SparsePoly") -> "SparsePoly":
        F = self.field
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = F.add(t.get(m, 0), c)
        return self._new(t)

    def __neg__(self) -> "SparsePoly":
        return self._new({m: self.field.sub(0, c) for m, c in self.terms.items()})

    def __sub__(self, other: "SparsePoly") -> "SparsePoly":
        return self + (-other)

    def __mul__(self, other: "SparsePoly") -> "SparsePoly":
        F = self.field
        t: dict[Monomial, int] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                t[m] = F.add(t.get(m, 0), F.mul(c1, c2))
            if len(t) > 4 * self.max_monomials:
                raise CapacityError(f"expansion exceeds {self.max_monomials} monomials")
        return self._new(t)

    def scale(self, c: int) -> "SparsePoly":
        return self._new({m: self.field.mul(c, v) for m, v in self.terms.items()})

    def __eq__(self, other) -> bool:
        return (isinstance(other, SparsePoly) and self.field == other.field
                and self.arity == other.arity and self.terms == other.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __repr__(self) -> str:
        return f"SparsePoly({self.to_text().strip()})"

    @property
    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=0)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.terms}) <= 1

    def evaluate(self, point: Sequence[int]) -> int:
        F = self.field
        acc = 0
        for mono, c in self.terms.items():
            term = c
            for x, e in zip(point, mono):
                if e:
                    term = F.mul(term, F.pow(x, e))
            acc = F.add(acc, term)
        return acc

    def supports(self) -> list[frozenset[int]]:
        return [frozenset(i for i, e in enumerate(m) if e) for m in self.terms]

    def to_oracle(self, name: str = "sparse") -> PolyOracle:
        return PolyOracle(self.field, self.arity, self.degree, self.evaluate,
                          homogeneous=self.is_homogeneous(), name=name)

    def to_text(self) -> str:
        """One ``coef_hex  x0^e0 x3^e3`` line per monomial, sorted by exponent vector."""
        lines = []
        for mono in sorted(self.terms):
            vars_ = " ".join(f"x{i}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(mono) if e)
            lines.append(f"{self.field.to_hex(self.terms[mono])} {vars_ or '1'}")
        return "\n".join(lines) + "\n"


def random_sparse(field: Field, arity: int, n_terms: int, max_exp: int, gen: np.random.Generator) -> SparsePoly:
    terms = {}
    for _ in range(n_terms):
        mono = tuple(int(e) for e in gen.integers(0, max_exp + 1, size=arity))
        terms[mono] = field.random_nonzero(gen)
    return SparsePoly(field, arity, terms)


def _det_cofactor(entries: list[list[SparsePoly]], zero: SparsePoly) -> SparsePoly:
    n = len(entries)
    memo: dict[tuple[int, int], SparsePoly] = {}

    def minor(r: int, cols: int) -> SparsePoly:
        if r == n:
            return SparsePoly.constant(zero.field, zero.arity, 1, max_monomials=zero.max_monomials)
        if (r, cols) in memo:
            return memo[(r, cols)]
        acc = zero
        sign = False
        for j in range(n):
            if not cols >> j & 1:
                continue
            e = entries[r][j]
            if e:
                term = e * minor(r + 1, cols & ~(1 << j))
                acc = acc - term if sign else acc + term
            sign = not sign
        memo[(r, cols)] = acc
        return acc

    return minor(0, (1 << n) - 1)


def _pf_expand(entries: list[list[SparsePoly]], zero: SparsePoly) -> SparsePoly:
    """Pfaffian by expansion along the first remaining row (char 2: no signs)."""
    n = len(entries)
    memo: dict[int, SparsePoly] = {}

    def pf(rest: int) -> SparsePoly:
        if rest == 0:
            return SparsePoly.constant(zero.field, zero.arity, 1, max_monomials=zero.max_monomials)
        if rest in memo:
            return memo[rest]
        i = (rest & -rest).bit_length() - 1
        acc = zero
        for j in range(i + 1, n):
            if rest >> j & 1 and entries[i][j]:
                acc = acc + entries[i][j] * pf(rest & ~(1 << i) & ~(1 << j))
        memo[rest] = acc
        return acc

    return pf((1 << n) - 1) if n % 2 == 0 else zero


def expand_circuit(circuit, *, max_vars: int = MAX_VARS, max_monomials: int = MAX_MONOMIALS) -> SparsePoly:
    F, n = circuit.field, circuit.arity
    if n > max_vars:
        raise CapacityError(f"{n} variables exceed the expansion cap of {max_vars}")
    vals: list[SparsePoly] = []
    for op, a, b in circuit.gates:
        if op == OP_CONST:
            vals.append(SparsePoly.constant(F, n, a, max_monomials=max_monomials))
        elif op == OP_INPUT:
            vals.append(SparsePoly.variable(F, n, a, max_monomials=max_monomials))
        elif op == OP_ADD:
            vals.append(vals[a] + vals[b])
        elif op == OP_MUL:
            vals.append(vals[a] * vals[b])
        else:
            vals.append(vals[a] - vals[b])
    zero = SparsePoly(F, n, max_monomials=max_monomials)
    if circuit.fin == FIN_OUT:
        return vals[circuit.output] if circuit.gates else zero
    d = circuit.dim
    M = [[vals[g] if g >= 0 else zero for g in circuit.outputs[r * d:(r + 1) * d]] for r in range(d)]
    if circuit.fin == FIN_DET:
        return _det_cofactor(M, zero)
    return _pf_expand(M, zero)


def expand_blackbox(p: PolyOracle, *, max_vars: int = MAX_VARS, max_points: int = MAX_MONOMIALS) -> SparsePoly:
    """Dense interpolation on the grid {0..degree}^arity (every exponent is at most the degree)."""
    F, n, d = p.field, p.arity, p.degree
    if n > max_vars:
        raise CapacityError(f"{n} variables exceed the expansion cap of {max_vars}")
    if (d + 1) ** n > max_points:
        raise CapacityError(f"interpolation grid of {(d + 1) ** n} points exceeds {max_points}")
    pts = F.enumerate_points(d + 1)
    # per-axis basis change: values at pts -> coefficients of t^0..t^d (inverse Vandermonde)
    V = Matrix.from_rows(F, [[F.pow(x, e) for e in range(d + 1)] for x in pts])
    Vinv = _inverse(V)
    grid = {idx: p([pts[i] for i in idx]) for idx in itertools.product(range(d + 1), repeat=n)}
    for axis in range(n):
        new = {}
        for idx in grid:
            e = idx[axis]
            acc = 0
            for i in range(d + 1):
                src = idx[:axis] + (i,) + idx[axis + 1:]
                acc = F.add(acc, F.mul(Vinv[e, i], grid[src]))
            new[idx] = acc
        grid = new
    return SparsePoly(F, n, {idx: c for idx, c in grid.items() if c})


def _inverse(M: Matrix) -> Matrix:
    n = M.rows
    F = M.field
    aug = [list(M.row(r)) + [1 if c == r else 0 for c in range(n)] for r in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col])
        aug[col], aug[piv] = aug[piv], aug[col]
        iv = F.inv(aug[col][col])
        aug[col] = [F.mul(iv, v) for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [F.sub(a, F.mul(f, b)) for a, b in zip(aug[r], aug[col])]
    return Matrix.from_rows(F, [row[n:] for row in aug])


def expand_symbolic(source, *, max_vars: int = MAX_VARS, max_monomials: int = MAX_MONOMIALS) -> SparsePoly:
    """Exact monomial expansion of a circuit, a circuit-backed oracle, or (by
    interpolation) a small black-box oracle."""
    if isinstance(source, SparsePoly):
        return source
    if isinstance(source, PolyOracle):
        if source.circuit is not None and source.flatten() is not None and source.flatten()[1] == []:
            return expand_circuit(source.circuit, max_vars=max_vars, max_monomials=max_monomials)
        return expand_blackbox(source, max_vars=max_vars, max_points=max_monomials)
    return expand_circuit(source, max_vars=max_vars, max_monomials=max_monomials)


# ---------------------------------------------------------------------------
# monomial predicates behind the sieves


def _resolve(assoc, arity: int) -> list[tuple[int, ...]]:
    if assoc is None:
        return [(i,) for i in range(arity)]
    if isinstance(assoc, ColumnAssoc):
        return list(assoc.sets)
    return [tuple(s) for s in assoc]


def _spans_exactly(m: LinearMatroid, cols: list[int]) -> bool:
    if len(cols) != m.rows:
        return False
    if len(set(cols)) != len(cols):
        return False
    return not cols or m.rep.columns(cols).rank() == m.rows


def basis_monomial_exists(P: SparsePoly, m: LinearMatroid, assoc=None) -> bool:
    """Some monomial is multilinear in the labelled variables and the columns
    of its labelled support form a basis of m (weights summing to rank)."""
    sets = _resolve(assoc, P.arity)
    for mono in P.terms:
        cols: list[int] = []
        ok = True
        for i, e in enumerate(mono):
            if e and sets[i]:
                if e > 1:
                    ok = False
                    break
                cols.extend(sets[i])
        if ok and _spans_exactly(m, cols):
            return True
    return False


def odd_monomial_exists(P: SparsePoly, m: LinearMatroid, assoc=None) -> bool:
    """Some monomial has odd-degree labelled variables J' within which a subset
    J has columns forming a basis of m."""
    sets = _resolve(assoc, P.arity)
    k = m.rows
    for mono in P.terms:
        odd = [i for i, e in enumerate(mono) if e % 2 and sets[i]]
        for r in range(0, min(len(odd), k) + 1):
            for J in itertools.combinations(odd, r):
                cols = [c for i in J for c in sets[i]]
                if _spans_exactly(m, cols):
                    return True
    return False


# ---------------------------------------------------------------------------
# exhaustive combinatorial solvers (ground truth for the sieving solvers)


def _col_rank(m: LinearMatroid, cols: Iterable[int]) -> int:
    cols = sorted(set(cols))
    return m.rep.columns(cols).rank() if cols else 0


def brute_qmi(ms: Sequence[LinearMatroid], k: int) -> bool:
    """A k-set independent in every matroid."""
    n = ms[0].n
    return any(all(_col_rank(m, S) == k for m in ms) for S in itertools.combinations(range(n), k))


def brute_qmp(m: LinearMatroid, blocks: Sequence[Sequence[int]], k: int) -> bool:
    """k blocks whose union is independent."""
    return any(_col_rank(m, [c for b in B for c in blocks[b]]) == sum(len(blocks[b]) for b in B)
               for B in itertools.combinations(range(len(blocks)), k))


def brute_set_cover(V: Sequence, family: Sequence[Sequence], m: LinearMatroid, t: int) -> bool:
    """At most t sets whose union spans m (ground set V, in the order of m)."""
    pos = {v: i for i, v in enumerate(V)}
    r = m.rank
    if r == 0:
        return True
    for size in range(1, min(t, len(family)) + 1):
        for B in itertools.combinations(range(len(family)), size):
            if _col_rank(m, [pos[v] for b in B for v in family[b]]) == r:
                return True
    return False


def brute_set_packing(V: Sequence, family: Sequence[Sequence], m: LinearMatroid, t: int) -> bool:
    """t pairwise disjoint sets (a set may repeat only if empty) whose union is a basis."""
    pos = {v: i for i, v in enumerate(V)}
    r = m.rank
    for B in itertools.combinations_with_replacement(range(len(family)), t):
        union: list[int] = []
        for b in B:
            union.extend(pos[v] for v in set(family[b]))
        if len(union) == len(set(union)) == r and _col_rank(m, union) == r:
            return True
    return False


def brute_odd_coverage(V: Sequence, family: Sequence[Sequence], t: int, p: int) -> bool:
    """t distinct sets covering at least p elements an odd number of times."""
    for B in itertools.combinations(range(len(family)), t):
        count: dict = {}
        for b in B:
            for v in set(family[b]):
                count[v] = count.get(v, 0) + 1
        if sum(1 for c in count.values() if c % 2) >= p:
            return True
    return False


def _simple_paths(adj: list[list[tuple[int, int]]], s: int, ends: set[int], blocked: set[int]):
    """Simple paths from s to a vertex of ``ends`` avoiding ``blocked`` internally;
    yields (vertex list, edge index list)."""
    verts, edges = [s], []
    on = {s}

    def rec(u):
        for v, j in adj[u]:
            if v in on:
                continue
            if v in ends:
                yield verts + [v], edges + [j]
                continue
            if v in blocked:
                continue
            on.add(v)
            verts.append(v)
            edges.append(j)
            yield from rec(v)
            verts.pop()
            edges.pop()
            on.discard(v)

    yield from rec(s)


def linkages(g, S: Sequence[int], T: Sequence[int]):
    """Every perfect (S, T)-linkage of an undirected graph as (vertex set, edge set).

    Shared terminals are trivial paths; the other paths avoid all terminals
    internally and are pairwise vertex-disjoint.
    """
    shared = [v for v in S if v in set(T)]
    S = [v for v in S if v not in shared]
    T = [v for v in T if v not in shared]
    terminals = set(S) | set(T) | set(shared)
    adj: list[list[tuple[int, int]]] = [[] for _ in range(g.n)]
    for j, (u, v) in enumerate(g.edges):
        if u != v:
            adj[u].append((v, j))
            adj[v].append((u, j))

    def rec(i: int, used: set[int], edges: list[int]):
        if i == len(S):
            yield frozenset(used), frozenset(edges)
            return
        free_ends = {t for t in T if t not in used}
        for verts, es in _simple_paths(adj, S[i], free_ends, terminals | used):
            if any(v in used for v in verts[1:-1]):
                continue
            yield from rec(i + 1, used | set(verts), edges + es)

    yield from rec(0, set(shared), [])


def brute_linkage(g, S, T, m: LinearMatroid, k: int, *, over_edges: bool = False,
                  shortest: bool = False, parity: str | None = None) -> tuple[bool, int | None]:
    """(exists, minimum total length) for linkages whose vertex set (or vertex and
    edge set) has rank >= k; the length is only reported with ``shortest`` or ``parity``."""
    best = None
    for verts, edges in linkages(g, S, T):
        cols = list(verts) + ([g.n + j for j in edges] if over_edges else [])
        if _col_rank(m, cols) < k:
            continue
        length = len(edges)
        if parity is not None and (length % 2 == 1) != (parity == "odd"):
            continue
        if not (shortest or parity):
            return True, None
        best = length if best is None else min(best, length)
    return best is not None, best


def simple_cycles(g):
    """Vertex sets and edge sets of the simple cycles (>= 3 vertices) of an undirected graph."""
    adj: list[list[tuple[int, int]]] = [[] for _ in range(g.n)]
    for j, (u, v) in enumerate(g.edges):
        if u != v:
            adj[u].append((v, j))
            adj[v].append((u, j))
    seen = set()
    for s in range(g.n):
        # cycles through s whose other vertices are all larger than s
        stack = [(s, [s], [])]
        while stack:
            u, verts, edges = stack.pop()
            for v, j in adj[u]:
                if v == s and len(verts) >= 3:
                    key = frozenset(edges + [j])
                    if key not in seen:
                        seen.add(key)
                        yield frozenset(verts), key
                elif v > s and v not in verts:
                    stack.append((v, verts + [v], edges + [j]))


def brute_t_cycle(g, terminals: Sequence[int]) -> bool:
    need = set(terminals)
    return any(need <= verts for verts, _ in simple_cycles(g))


def brute_long_path(g, s: int, t: int, k: int) -> bool:
    """Simple st-path with at least k vertices."""
    if s == t:
        return k <= 1
    adj: list[list[tuple[int, int]]] = [[] for _ in range(g.n)]
    for j, (u, v) in enumerate(g.edges):
        if u != v:
            adj[u].append((v, j))
            adj[v].append((u, j))
    return any(len(verts) >= k for verts, _ in _simple_paths(adj, s, {t}, set()))


def brute_long_cycle(g, k: int) -> bool:
    return any(len(verts) >= max(k, 3) for verts, _ in simple_cycles(g))


def perfect_matchings(g) -> list[frozenset[int]]:
    """Perfect matchings as sets of edge indices (loops never match)."""
    out = []

    def rec(free: frozenset[int], chosen: list[int]):
        if not free:
            out.append(frozenset(chosen))
            return
        u = min(free)
        for j, (a, b) in enumerate(g.edges):
            if a != b and u in (a, b):
                v = b if a == u else a
                if v in free:
                    rec(free - {u, v}, chosen + [j])

    rec(frozenset(range(g.n)), [])
    return out


def brute_diverse(families: Sequence[Sequence[frozenset]], d=None, *, mode: str = "pairwise",
                  total: int | None = None, weights: Sequence[int] | None = None) -> bool:
    """One member per family with pairwise weighted symmetric differences >= d_ij
    (or their sum >= total)."""
    K = len(families)
    pairs = list(itertools.combinations(range(K), 2))
    if isinstance(d, int):
        d = {pr: d for pr in pairs}
    d = dict(d or {})

    def dist(a, b):
        return sum(weights[e] if weights else 1 for e in a ^ b)

    for choice in itertools.product(*families):
        if mode == "sum":
            if sum(dist(choice[i], choice[j]) for i, j in pairs) >= total:
                return True
        elif all(dist(choice[i], choice[j]) >= d.get((i, j), 0) for i, j in pairs):
            return True
    return False


def branchings(g, root: int, out: bool = True) -> list[frozenset[int]]:
    """Out-branchings (or in-branchings) spanning every vertex, as arc index sets."""
    n = g.n
    into: dict[int, list[int]] = {v: [] for v in range(n)}
    for j, (u, v) in enumerate(g.edges):
        if u == v:
            continue
        head = v if out else u
        if head != root:
            into[head].append(j)
    others = [v for v in range(n) if v != root]
    result = []
    for pick in itertools.product(*(into[v] for v in others)):
        parent = {}
        for v, j in zip(others, pick):
            u, w = g.edges[j]
            parent[v] = u if out else w
        ok = True
        for v in others:
            seen = set()
            x = v
            while x != root:
                if x in seen:
                    ok = False
                    break
                seen.add(x)
                x = parent[x]
            if not ok:
                break
        if ok:
            result.append(frozenset(pick))
    return result


def brute_distinct_branchings(g, s: int, t: int, k: int) -> bool:
    return brute_diverse([branchings(g, s, True), branchings(g, t, False)], {(0, 1): k})


def _connected_subset(edges: Sequence[tuple[int, int]], U: Iterable[int]) -> bool:
    """Is U non-empty and connected using only edges inside U?"""
    U = set(U)
    if not U:
        return False
    start = min(U)
    seen, queue = {start}, [start]
    for u in queue:
        for a, b in edges:
            for x, y in ((a, b), (b, a)):
                if x == u and y in U and y not in seen:
                    seen.add(y)
                    queue.append(y)
    return seen == U


def brute_connected_rank(g, m: LinearMatroid, k: int, w: int) -> int | None:
    """Smallest size >= max(k, 1) of a connected vertex set with rank >= k, at most w."""
    for size in range(max(k, 1), min(w, g.n) + 1):
        for U in itertools.combinations(range(g.n), size):
            if _col_rank(m, U) >= k and _connected_subset(g.edges, U):
                return size
    return None


def brute_connected_rank_edges(g, m: LinearMatroid, k: int, w: int) -> bool:
    """A connected subgraph of G with at most w edges whose edge set has rank >= k."""
    if k <= 0:
        return g.n > 0
    for size in range(k, min(w, g.m) + 1):
        for F in itertools.combinations(range(g.m), size):
            if _col_rank(m, F) < k:
                continue
            verts = {x for j in F for x in g.edges[j]}
            if _connected_subset([g.edges[j] for j in F], verts):
                return True
    return False


def edit_feasible(colours: Sequence, Q: Sequence, ks: int, kd: int, ki: int) -> bool:
    """Can the colour multiset be edited into Q with at most ks substitutions,
    kd deletions and ki insertions?"""
    have, want = {}, {}
    for c in colours:
        have[c] = have.get(c, 0) + 1
    for c in Q:
        want[c] = want.get(c, 0) + 1
    overlap = sum(min(have[c], want.get(c, 0)) for c in have)
    for kept in range(overlap + 1):
        for subs in range(ks + 1):
            dels = len(colours) - kept - subs
            ins = len(Q) - kept - subs
            if 0 <= dels <= kd and 0 <= ins <= ki:
                return True
    return False


def brute_motif(g, colouring: Sequence, Q: Sequence, ks: int = 0, kd: int = 0, ki: int = 0,
                k: int | None = None) -> bool:
    """Connected k-vertex set (k defaults to |Q|) whose colours edit into Q."""
    k = len(Q) if k is None else k
    if k < 1:
        return False
    return any(_connected_subset(g.edges, U) and edit_feasible([colouring[v] for v in U], Q, ks, kd, ki)
               for U in itertools.combinations(range(g.n), k))


def brute_eulerian_deletion(g, k: int) -> int | None:
    """Fewest deleted edges (at most k) leaving a connected graph with even degrees."""
    if g.n > 1 and not _connected_subset(g.edges, range(g.n)):
        return None
    for size in range(0, min(k, g.m) + 1):
        for F in itertools.combinations(range(g.m), size):
            rest = [e for j, e in enumerate(g.edges) if j not in set(F)]
            deg = [0] * g.n
            for u, v in rest:
                deg[u] += 1
                deg[v] += 1
            if all(x % 2 == 0 for x in deg) and (g.n <= 1 or _connected_subset(rest, range(g.n))):
                return size
    return None


def brute_balanced_path(g, k: int, m: LinearMatroid) -> bool:
    """Simple path on k vertices whose vertex set is a basis of m."""
    adj: list[list[tuple[int, int]]] = [[] for _ in range(g.n)]
    for j, (u, v) in enumerate(g.edges):
        if u != v:
            adj[u].append((v, j))
            if not g.directed:
                adj[v].append((u, j))

    def rec(path):
        if len(path) == k:
            return _col_rank(m, path) == k
        return any(rec(path + [v]) for v, _ in adj[path[-1]] if v not in path)

    return any(rec([v]) for v in range(g.n))


def pfaffian_by_matchings(M: Matrix) -> int:
    """Pfaffian in characteristic 2 as the sum over perfect matchings of
    prod M[i, j] (signs vanish); independent of the determinant route."""
    F = M.field
    n = M.rows

    def rec(free: tuple[int, ...]) -> int:
        if not free:
            return 1
        i, rest = free[0], free[1:]
        total = 0
        for pos, j in enumerate(rest):
            a = M[i, j]
            if a:
                total = F.add(total, F.mul(a, rec(rest[:pos] + rest[pos + 1:])))
        return total

    return 0 if n % 2 else rec(tuple(range(n)))


# ---------------------------------------------------------------------------
# combinatorial matroid definitions


def matroid_axiom_violations(ground: Sequence, independent: Callable[[frozenset], bool]) -> list[str]:
    """Check the independence axioms over every subset: the empty set is
    independent, subsets of independent sets are, and the exchange property."""
    ground = list(ground)
    family = set()
    for r in range(len(ground) + 1):
        for S in itertools.combinations(ground, r):
            if independent(frozenset(S)):
                family.add(frozenset(S))
    problems = []
    if frozenset() not in family:
        problems.append("empty set is dependent")
    for I in family:
        for x in I:
            if I - {x} not in family:
                problems.append(f"hereditary: {sorted(I, key=repr)} minus {x!r}")
    for I in family:
        for J in family:
            if len(I) < len(J) and not any(I | {x} in family for x in J - I):
                problems.append(f"exchange: {sorted(I, key=repr)} from {sorted(J, key=repr)}")
    return problems


def is_forest(n: int, edges: Sequence[tuple[int, int]]) -> bool:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in edges:
        a, b = find(u), find(v)
        if a == b:
            return False
        parent[a] = b
    return True


def component_count(n: int, edges: Sequence[tuple[int, int]]) -> int:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for u, v in edges:
        a, b = find(u), find(v)
        if a != b:
            parent[a] = b
    return sum(1 for v in range(n) if find(v) == v)


def has_matching(neighbours: Sequence[Iterable], S: Iterable[int]) -> bool:
    """Can every element of S be matched to a distinct hidden vertex?"""
    S = list(S)
    match: dict = {}

    def augment(e, seen):
        for h in neighbours[e]:
            if h in seen:
                continue
            seen.add(h)
            if h not in match or augment(match[h], seen):
                match[h] = e
                return True
        return False

    return all(augment(e, set()) for e in S)


def union_rank(rank1: Callable[[frozenset], int], rank2: Callable[[frozenset], int], S: Iterable) -> int:
    """Matroid union rank min over T of |S - T| + r1(T) + r2(T)."""
    S = list(S)
    best = len(S)
    for r in range(len(S) + 1):
        for T in itertools.combinations(S, r):
            fT = frozenset(T)
            best = min(best, len(S) - r + rank1(fT) + rank2(fT))
    return best


# ---------------------------------------------------------------------------
# dispatch by problem name


def basis_sets(m: LinearMatroid) -> list[frozenset[int]]:
    """Column-index sets of the bases of m."""
    r = _col_rank(m, range(m.n))
    return [frozenset(B) for B in itertools.combinations(range(m.n), r) if _col_rank(m, B) == r]


def _brute_steiner(g, terminals, w):
    M = LinearMatroid(Matrix.from_rows(GF2_64, [[1 if v == t else 0 for v in range(g.n)] for t in terminals],
                                       g.n), list(range(g.n)))
    return brute_connected_rank(g, M, len(terminals), w) is not None


def _brute_group_steiner(g, groups, w):
    M = LinearMatroid(Matrix.from_rows(GF2_64, [[1 if v in grp else 0 for v in range(g.n)] for grp in groups],
                                       g.n), list(range(g.n)))
    return brute_connected_rank(g, M, len(groups), w) is not None


def _brute_common_bases(m1, m2, K, d):
    common = sorted(set(basis_sets(m1)) & set(basis_sets(m2)), key=sorted)
    return brute_diverse([common] * K, d)


_BRUTE: dict[str, Callable[..., bool]] = {
    "qmi": lambda ms, k: brute_qmi(ms, k),
    "qmp": lambda m, blocks, k, truncate=True: brute_qmp(m, blocks, k),
    "set_cover": brute_set_cover,
    "set_packing": brute_set_packing,
    "odd_coverage": brute_odd_coverage,
    "balanced_path": brute_balanced_path,
    "linkage": lambda g, S, T, m, k, **kw: brute_linkage(g, S, T, m, k, **kw)[0],
    "t_cycle": brute_t_cycle,
    "long_path": brute_long_path,
    "long_cycle": brute_long_cycle,
    "diverse_pm": lambda g, K, d, mode="pairwise", total=None:
        brute_diverse([perfect_matchings(g)] * K, d, mode=mode, total=total),
    "diverse_bases": lambda m, K, d: brute_diverse([basis_sets(m)] * K, d),
    "diverse_common_bases": _brute_common_bases,
    "branchings": brute_distinct_branchings,
    "connected_rank": lambda g, m, k, w, over_edges=False:
        brute_connected_rank_edges(g, m, k, w) if over_edges else brute_connected_rank(g, m, k, w) is not None,
    "steiner": _brute_steiner,
    "group_steiner": _brute_group_steiner,
    "motif": brute_motif,
    "euler": lambda g, k: brute_eulerian_deletion(g, k) is not None,
}


def brute_solve(inst) -> bool:
    """Exhaustive answer for a :class:`~detsieve.solvers.ProblemInstance`."""
    try:
        fn = _BRUTE[inst.problem]
    except KeyError:
        raise UsageError(f"no exhaustive solver for {inst.problem!r}") from None
    return bool(fn(**inst.args))
