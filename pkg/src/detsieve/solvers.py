"""Parameterized solvers assembled from enumerators, matroids and sieves.

Every solver returns a :class:`SolveResult`.  YES answers are always
correct; NO answers are wrong with probability at most the reported
per-trial failure bound (and, for long paths, the partition miss rate).
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Callable, Hashable, Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction


from .enumerators import (Graph, Layout, branching_poly, branching_walk_poly, cauchy_binet_circuit,
                          cauchy_binet_poly, matching_poly, stpath_linkage_det, tjoin_poly)
from .errors import SpecError, UnsupportedOperation, UsageError
from .extensor import eval_lifted, eval_monotone
from .field import DEFAULT_FIELD, Field
from .linalg import Matrix
from .matroid import (ColumnAssoc, LinearMatroid, cographic, partition, transversal, uniform,
                      unit_vectors)
from .polyoracle import FIN_OUT, FIN_PF, OP_ADD, OP_CONST, OP_INPUT, OP_MUL, Circuit, PolyOracle, coeff_extract
from .rng import DEFAULT_SEED, stream
from .sieve import SieveReport, basis_sieve, default_trials, odd_sieve, sieve_transform

# stream tags keep the random choices of different solver stages independent
TAG_TRUNC, TAG_SIEVE, TAG_TRANSFORM, TAG_PARTITION, TAG_MATROID, TAG_EXT, TAG_PAD = range(1, 8)


@dataclass
class Stats:
    """Aggregated sieve statistics of one solver run."""

    trials: int = 0
    p_evals: int = 0
    failure_bound: Fraction = Fraction(0)
    calls: int = 0

    def add(self, report: SieveReport | None, bound: Fraction | None = None) -> None:
        """Count one sieve call (or a non-sieve randomized test with ``bound``)."""
        self.calls += 1
        if report is not None:
            self.trials += report.trials
            self.p_evals += report.p_evals
            bound = report.failure_bound if bound is None else bound
        if bound is not None:
            self.failure_bound = max(self.failure_bound, bound)

    def merge(self, other: "Stats") -> None:
        self.trials += other.trials
        self.p_evals += other.p_evals
        self.calls += other.calls
        self.failure_bound = max(self.failure_bound, other.failure_bound)


@dataclass
class SolveResult:
    problem: str
    decision: bool
    witness: list | None = None
    stats: Stats = dc_field(default_factory=Stats)
    schedule: list[dict] | None = None
    extra: dict = dc_field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"problem": self.problem, "decision": self.decision}
        if self.witness is not None:
            out["witness"] = self.witness
        out.update(trials=self.stats.trials, p_evals=self.stats.p_evals,
                   failure_bound=str(self.stats.failure_bound))
        if self.schedule is not None:
            out["schedule"] = self.schedule
        out.update(self.extra)
        return out


def first_success(tasks: Iterable[Callable[[], tuple[bool, Stats]]], threads: int = 1) -> tuple[int | None, Stats]:
    """Run pure tasks in index order and stop at the first success.

    Tasks are executed in batches of ``threads``; statistics only include
    tasks up to and including the first success, so the outcome does not
    depend on the thread count.
    """
    total = Stats()
    it = iter(tasks)
    index = 0
    pool = ThreadPoolExecutor(threads) if threads > 1 else None
    try:
        while True:
            batch = list(itertools.islice(it, max(threads, 1)))
            if not batch:
                return None, total
            if pool is None:
                results = []
                for task in batch:
                    results.append(task())
                    if results[-1][0]:
                        break
            else:
                results = list(pool.map(lambda f: f(), batch))
            for ok, st in results:
                total.merge(st)
                if ok:
                    return index, total
                index += 1
    finally:
        if pool is not None:
            pool.shutdown()


def self_reduce(elements: Sequence[Hashable], holds: Callable[[list], bool]) -> list:
    """Drop elements one at a time while ``holds`` stays true on the rest."""
    keep = list(elements)
    for e in list(elements):
        trial = [x for x in keep if x != e]
        if holds(trial):
            keep = trial
    return keep


def _assoc_from_layout(layout: Layout, columns: dict[Hashable, int]) -> ColumnAssoc:
    return ColumnAssoc.of([(columns[key],) if key in columns else () for key in layout.keys])


def _check_char2(field: Field, what: str) -> None:
    if field.characteristic != 2:
        raise UsageError(f"{what} sieves in characteristic 2")


# ---------------------------------------------------------------------------
# matroid problems


def _same_ground(ms: Sequence[LinearMatroid]) -> None:
    if not ms:
        raise SpecError("at least one matroid is required")
    F, labels = ms[0].field, ms[0].labels
    for m in ms[1:]:
        if m.field != F:
            raise SpecError("matroids live over different fields")
        if m.labels != labels:
            raise SpecError("matroids have different ground sets")


def q_matroid_intersection(ms: Sequence[LinearMatroid], k: int, *, seed: int = DEFAULT_SEED,
                           trials: int | None = None, witness: bool = False) -> SolveResult:
    """Common basis of q matroids truncated to rank k.

    In characteristic 2 the Cauchy-Binet polynomial of the first two is
    sieve-transformed by the middle ones and basis-sieved by the last
    (2^((q-2)k) evaluations).  Over other fields q = 3 uses lifted extensor
    evaluation and q > 3 reduces to q-matroid parity over the direct sum.
    """
    _same_ground(ms)
    q = len(ms)
    if q < 2:
        raise SpecError("matroid intersection needs q >= 2")
    if k < 0:
        raise SpecError("rank must be non-negative")
    res = SolveResult("qmi", False)
    if any(m.rank < k for m in ms):
        return res
    F = ms[0].field
    trunc = [m.truncate(k, stream(seed, TAG_TRUNC, i)) for i, m in enumerate(ms)]
    decide = _qmi_char2 if F.characteristic == 2 else _qmi_general
    res.decision = decide(trunc, k, seed, trials, res.stats)
    if witness and res.decision:
        labels = list(ms[0].labels)

        def holds(keep):
            sub = [m.restrict(keep) for m in trunc]
            return len(keep) >= k and decide(sub, k, seed, trials, Stats())

        res.witness = self_reduce(labels, holds)
    return res


def _qmi_char2(ms: list[LinearMatroid], k: int, seed: int, trials: int | None, stats: Stats) -> bool:
    F = ms[0].field
    p = cauchy_binet_poly(ms[0].rep, ms[1].rep)
    if len(ms) == 2:
        trials = default_trials(F) if trials is None else trials
        bound = Fraction(k, F.order)
        for t in range(trials):
            p.reset()
            value = p(F.random_vector(stream(seed, TAG_SIEVE, t), p.arity))
            stats.add(SieveReport(bool(value), 1, 1, bound, seed, "identity-test"))
            if value:
                return True
        return False
    bound = Fraction(0)
    for i, m in enumerate(ms[2:-1]):
        p = sieve_transform(p, m, seed=seed, path=(TAG_TRANSFORM, i))
        bound += p.failure_bound
    rep = basis_sieve(p, ms[-1], trials=trials, seed=seed, path=(TAG_SIEVE,))
    stats.add(rep, rep.failure_bound + bound)
    return rep.decision


def _qmi_general(ms: list[LinearMatroid], k: int, seed: int, trials: int | None, stats: Stats) -> bool:
    F = ms[0].field
    q = len(ms)
    trials = default_trials(F) if trials is None else trials
    if q == 2:
        p = cauchy_binet_poly(ms[0].rep, ms[1].rep)
        for t in range(trials):
            value = p(F.random_vector(stream(seed, TAG_SIEVE, t), p.arity))
            stats.add(SieveReport(bool(value), 1, 1, Fraction(k, F.order), seed, "identity-test"))
            if value:
                return True
        return False
    if q == 3:
        circ = cauchy_binet_circuit(ms[0].rep, ms[1].rep).circuit
        for t in range(trials):
            scalars = F.random_vector(stream(seed, TAG_SIEVE, t), circ.arity)
            top = eval_lifted(circ, ms[2], None, scalars).top
            stats.add(SieveReport(bool(top), 1, 1, Fraction(k, F.order), seed, "lifted"))
            if top:
                return True
        return False
    # common basis of M_1..M_q  <=>  k blocks {(e,1)..(e,q)} spanning the direct sum
    relabelled = [LinearMatroid(m.rep, [(i, lab) for lab in m.labels]) for i, m in enumerate(ms)]
    total = relabelled[0]
    for m in relabelled[1:]:
        total = total.direct_sum(m)
    blocks = [[total.index[(i, lab)] for i in range(q)] for lab in ms[0].labels]
    sub = q_matroid_parity(total, blocks, k, seed=seed, trials=trials, truncate=False)
    stats.merge(sub.stats)
    return sub.decision


def _parity_circuit(field: Field, n_blocks: int) -> Circuit:
    c = Circuit(field, n_blocks)
    one = c.const(1)
    c.set_output(c.product([c.add(one, c.input(i)) for i in range(n_blocks)]))
    c.certified_monotone = True
    return c


def q_matroid_parity(m: LinearMatroid, blocks: Sequence[Sequence[int]], k: int, *,
                     seed: int = DEFAULT_SEED, trials: int | None = None, witness: bool = False,
                     truncate: bool = True) -> SolveResult:
    """k blocks whose union is independent (a basis of the rank-qk truncation).

    prod_E (1 + x_E) with x_E carrying the q columns of block E, basis-sieved
    in characteristic 2 (2^(qk) evaluations per trial) or evaluated with
    extensors elsewhere.
    """
    if k < 0:
        raise SpecError("the number of blocks must be non-negative")
    sizes = {len(b) for b in blocks}
    flat = [c for b in blocks for c in b]
    if len(sizes) > 1 or sorted(flat) != list(range(m.n)):
        raise SpecError("blocks must partition the ground set into equal-size sets")
    q = sizes.pop() if sizes else 0
    res = SolveResult("qmp", False)
    if k == 0:
        res.decision = True
        return res
    if k > len(blocks) or m.rank < q * k:
        return res
    F = m.field
    mt = m.truncate(q * k, stream(seed, TAG_TRUNC)) if truncate else m

    def decide(use: Sequence[int], stats: Stats) -> bool:
        circ = _parity_circuit(F, len(use))
        assoc = ColumnAssoc.of([tuple(blocks[b]) for b in use])
        if F.characteristic == 2:
            p = PolyOracle.from_circuit(circ, len(use), name="parity")
            rep = basis_sieve(p, mt, assoc, trials=trials, seed=seed, path=(TAG_SIEVE,))
            stats.add(rep)
            return rep.decision
        for t in range(default_trials(F) if trials is None else trials):
            scalars = F.random_vector(stream(seed, TAG_SIEVE, t), len(use))
            top = eval_monotone(circ, mt, assoc, scalars).top
            stats.add(SieveReport(bool(top), 1, 1, Fraction(len(use), F.order), seed, "monotone"))
            if top:
                return True
        return False

    res.decision = decide(range(len(blocks)), res.stats)
    if witness and res.decision:
        res.witness = self_reduce(list(range(len(blocks))), lambda keep: decide(keep, Stats()))
    return res


def _family_check(V: Sequence[Hashable], family: Sequence[Iterable[Hashable]]) -> list[list[Hashable]]:
    Vs = set(V)
    fam = [list(dict.fromkeys(E)) for E in family]
    for E in fam:
        if not set(E) <= Vs:
            raise SpecError("a set in the family uses elements outside the ground set")
    return fam


def rank_set_cover_packing(V: Sequence[Hashable], family: Sequence[Iterable[Hashable]], m: LinearMatroid,
                           t: int, variant: str = "cover", *, seed: int = DEFAULT_SEED,
                           trials: int | None = None, witness: bool = False) -> SolveResult:
    """t sets from the family whose union spans m (cover) or t pairwise
    disjoint sets whose union is a basis of m (packing).

    The polynomial is prod_{i<=t} sum_E y_{i,E} prod_{v in E} f(x_{v,E,i}) with
    f(x) = 1 + x for covers and f(x) = x for packings; x_{v,E,i} carries the
    column of v and the y are random scalars.
    """
    if t <= 0:
        raise SpecError("t must be positive")
    if variant not in ("cover", "packing"):
        raise UsageError("variant is 'cover' or 'packing'")
    fam = _family_check(V, family)
    if list(m.labels) != list(V):
        m = m.restrict(list(V))
    res = SolveResult("setcover" if variant == "cover" else "setpack", False)
    k = m.rank
    mr = m.reduced()

    def decide(use: Sequence[int], stats: Stats) -> bool:
        if not use:
            return k == 0 and variant == "cover"
        c_layout = Layout()
        sources = []
        for i in range(t):
            for e in use:
                c_layout.add(("y", i, e))
                sources.append(None)
                for v in fam[e]:
                    c_layout.add(("x", v, e, i))
                    sources.append(v)
        F = m.field
        c = Circuit(F, len(c_layout))
        one = c.const(1)
        slots = []
        for i in range(t):
            terms = []
            for e in use:
                xs = [c.input(c_layout[("x", v, e, i)]) for v in fam[e]]
                if variant == "cover":
                    xs = [c.add(one, x) for x in xs]
                terms.append(c.mul(c.input(c_layout[("y", i, e)]), c.product(xs)))
            slots.append(c.sum(terms))
        c.set_output(c.product(slots))
        c.certified_monotone = variant == "packing"
        labelled = [j for j, s in enumerate(sources) if s is not None]
        ground = mr.parallel_copies([sources[j] for j in labelled], labelled)
        assoc = ColumnAssoc.of([(labelled.index(j),) if sources[j] is not None else ()
                                for j in range(len(sources))])
        degree = t * (1 + max(len(fam[e]) for e in use))
        p = PolyOracle.from_circuit(c, degree, name=variant)
        if F.characteristic == 2:
            rep = basis_sieve(p, ground, assoc, trials=trials, seed=seed, path=(TAG_SIEVE,),
                              z_degree=t * max(len(fam[e]) for e in use))
            stats.add(rep)
            return rep.decision
        if variant != "packing":
            raise UnsupportedOperation("set cover over a non-binary field is not supported; use characteristic 2")
        for tr in range(default_trials(F) if trials is None else trials):
            scalars = F.random_vector(stream(seed, TAG_SIEVE, tr), c.arity)
            top = eval_monotone(c, ground, assoc, scalars).top
            stats.add(SieveReport(bool(top), 1, 1, Fraction(degree, F.order), seed, "monotone"))
            if top:
                return True
        return False

    res.decision = decide(list(range(len(fam))), res.stats)
    if witness and res.decision:
        res.witness = self_reduce(list(range(len(fam))), lambda keep: decide(keep, Stats()))
    return res


def odd_coverage(V: Sequence[Hashable], family: Sequence[Iterable[Hashable]], t: int, p: int, *,
                 field: Field = DEFAULT_FIELD, seed: int = DEFAULT_SEED, trials: int | None = None,
                 witness: bool = False) -> SolveResult:
    """t sets from the family covering at least p elements an odd number of times.

    Coefficient of z^t in prod_E (1 + z y_E prod_{v in E} x_v), odd-sieved
    against the uniform matroid of rank p on V.
    """
    _check_char2(field, "odd coverage")
    fam = _family_check(V, family)
    res = SolveResult("oddcov", False)
    if t < 0 or t > len(fam) or p > len(V):
        return res
    index = {v: i for i, v in enumerate(V)}
    n = len(V)
    M = uniform(n, p, field, list(V))

    def decide(use: Sequence[int], stats: Stats) -> bool:
        if len(use) < t:
            return False
        arity = n + len(use) + 1
        zvar = arity - 1
        c = Circuit(field, arity)
        one = c.const(1)
        z = c.input(zvar)
        factors = []
        for a, e in enumerate(use):
            prod = c.product([c.input(n + a)] + [c.input(index[v]) for v in fam[e]])
            factors.append(c.add(one, c.mul(z, prod)))
        c.set_output(c.product(factors))
        base = PolyOracle.from_circuit(c, name="oddcov")
        q = coeff_extract(base, zvar, t, len(use))
        assoc = ColumnAssoc.of([(i,) for i in range(n)] + [()] * (len(use) + 1))
        zdeg = sum(len(fam[e]) for e in use)
        rep = odd_sieve(q, M, assoc, trials=trials, seed=seed, path=(TAG_SIEVE,), z_degree=zdeg)
        stats.add(rep)
        return rep.decision

    res.decision = decide(list(range(len(fam))), res.stats)
    if witness and res.decision:
        res.witness = self_reduce(list(range(len(fam))), lambda keep: decide(keep, Stats()))
    return res


def balanced_solution(enum: PolyOracle, m: LinearMatroid, assoc: ColumnAssoc | Sequence | None = None, *,
                      seed: int = DEFAULT_SEED, trials: int | None = None) -> SolveResult:
    """A member of the enumerated family forming a basis of the (balance) matroid m."""
    rep = basis_sieve(enum, m, assoc, trials=trials, seed=seed, path=(TAG_SIEVE,))
    res = SolveResult("balanced", rep.decision)
    res.stats.add(rep)
    return res


def balanced_path(g: Graph, k: int, m: LinearMatroid, *, field: Field = DEFAULT_FIELD,
                  seed: int = DEFAULT_SEED, trials: int | None = None) -> SolveResult:
    """Path on k vertices whose vertex set is a basis of m (ground set: vertices 0..n-1).

    Uses the walk polynomial with every copy x_{v,i} bound to the column of v.
    """
    if k < 1:
        raise SpecError("a path has at least one vertex")
    if m.rank != k:
        raise SpecError("the balance matroid must have rank k")
    p, L = _walk_all(g, k - 1, field)
    sources, positions = [], {}
    for j, key in enumerate(L.keys):
        if key[0] == "x":
            positions[j] = len(sources)
            sources.append(key[1])
    ground = m.reduced().parallel_copies(sources, list(range(len(sources))))
    assoc = ColumnAssoc.of([(positions[j],) if j in positions else () for j in range(len(L))])
    rep = basis_sieve(p, ground, assoc, trials=trials, seed=seed, path=(TAG_SIEVE,))
    res = SolveResult("balanced", rep.decision)
    res.stats.add(rep)
    return res


def _walk_all(g: Graph, k: int, field: Field) -> tuple[PolyOracle, Layout]:
    """Walks with k edges from any start to any end (start copies ('x', v, 0))."""
    L = Layout()
    for i in range(k + 1):
        for v in range(g.n):
            L.add(("x", v, i))
    for i in range(1, k + 1):
        for j in range(g.m):
            L.add(("e", j, i))
    c = Circuit(field, len(L))
    arcs = g.out_arcs()
    cur = {v: c.input(L[("x", v, 0)]) for v in range(g.n)}
    for i in range(1, k + 1):
        incoming: dict[int, list[int]] = {}
        for u, gu in cur.items():
            for v, j in arcs[u]:
                incoming.setdefault(v, []).append(c.mul(gu, c.input(L[("e", j, i)])))
        cur = {v: c.mul(c.input(L[("x", v, i)]), c.sum(gs)) for v, gs in sorted(incoming.items())}
    c.set_output(c.sum(list(cur.values())))
    c.certified_monotone = True
    return PolyOracle.from_circuit(c, 2 * k + 1, homogeneous=True, name="walks"), L


# ---------------------------------------------------------------------------
# linkages and cycles


def rank_linkage(g: Graph, S: Sequence[int], T: Sequence[int], m: LinearMatroid, k: int, *,
                 over_edges: bool = False, shortest: bool = False, parity: str | None = None,
                 field: Field | None = None, seed: int = DEFAULT_SEED, trials: int | None = None,
                 witness: bool = False) -> SolveResult:
    """Perfect (S, T)-linkage whose vertex set (or vertex and edge set) has rank >= k in m.

    m is over the vertices 0..n-1, or over the vertices followed by the edges
    when ``over_edges`` is set.  The vertex-variable linkage determinant has
    every vertex and edge of a linkage at odd degree in one of its monomials,
    so both versions are odd-sieved.  ``shortest`` (optionally with ``parity`` 'odd' or
    'even') scans the degree of an edge-counting tracker upwards and reports
    the first length that passes.
    """
    F = m.field if field is None else field
    _check_char2(F, "rank linkage")
    if g.directed:
        raise UsageError("linkages are implemented for undirected graphs")
    if len(S) != len(T):
        raise SpecError("a perfect linkage needs |S| = |T|")
    if parity not in (None, "odd", "even"):
        raise UsageError("parity is 'odd' or 'even'")
    if parity is not None:
        shortest = True
    expect = g.n + (g.m if over_edges else 0)
    if m.n != expect:
        raise SpecError(f"the matroid must have {expect} elements")
    res = SolveResult("linkage", False)
    if m.rank < k:
        return res
    mt = m.truncate(k, stream(seed, TAG_TRUNC))

    def decide(edges: Sequence[int], stats: Stats, want_length: bool) -> int | None:
        h = Graph(g.n, [g.edges[j] for j in edges], g.directed)
        trackers = {"len": set(range(h.m))} if want_length else None
        P, L = stpath_linkage_det(h, S, T, F, vertex_vars=True, trackers=trackers)
        columns: dict[Hashable, int] = {}
        for v in range(g.n):
            columns[("v", v)] = v
        if over_edges:
            for a, j in enumerate(edges):
                columns[("e", a)] = g.n + j
        assoc = _assoc_from_layout(L, columns)
        dim = max(P.circuit.dim, 1)
        zdeg = 2 * dim + len(S)
        lengths = [None]
        if want_length:
            lengths = [ell for ell in range(0, dim + 1)
                       if parity is None or (ell % 2 == 1) == (parity == "odd")]
        for ell in lengths:
            Q = P if ell is None else coeff_extract(P, L[("z", "len")], ell, dim)
            rep = odd_sieve(Q, mt, assoc, trials=trials, seed=seed, path=(TAG_SIEVE, ell or 0), z_degree=zdeg)
            stats.add(rep)
            if rep.decision:
                return ell if ell is not None else 0
        return None

    found = decide(range(g.m), res.stats, shortest)
    res.decision = found is not None
    if shortest and res.decision:
        res.extra["length"] = found
    if witness and res.decision:
        if shortest:
            target = found

            def holds(keep):
                mine = Stats()
                h = decide(keep, mine, True)
                return h is not None and h == target
        else:
            def holds(keep):
                return decide(keep, Stats(), False) is not None
        res.witness = [list(g.edges[j]) for j in self_reduce(list(range(g.m)), holds)]
    return res


def t_cycle(g: Graph, terminals: Sequence[int], *, field: Field = DEFAULT_FIELD, seed: int = DEFAULT_SEED,
            trials: int | None = None) -> SolveResult:
    """Simple cycle through every terminal.

    For each edge st at the first terminal (any edge if there are none), look
    for an st-path in G - st whose vertex set spans the unit vectors of the
    terminals; the path closes into a cycle of length >= 3.
    """
    _check_char2(field, "T-cycle")
    if g.directed:
        raise UsageError("T-cycle is implemented for undirected graphs")
    terminals = list(dict.fromkeys(terminals))
    res = SolveResult("tcycle", False)
    M = unit_vectors(list(range(g.n)), terminals, field)
    anchor = terminals[0] if terminals else None
    for j, (u, v) in enumerate(g.edges):
        if u == v or (anchor is not None and anchor not in (u, v)):
            continue
        h = g.without_edges([i for i, e in enumerate(g.edges) if set(e) == {u, v}])
        sub = rank_linkage(h, [u], [v], M, len(terminals), field=field, seed=seed, trials=trials)
        res.stats.merge(sub.stats)
        if sub.decision:
            res.decision = True
            res.extra["edge"] = [u, v]
            return res
    return res


# ---------------------------------------------------------------------------
# long paths


def long_path_parameters(c: float, k: float) -> tuple[float, float, float]:
    """(p, k2, kx) as real numbers for a cycle of ck vertices."""
    if c <= 4 / 3:
        return 0.5, c * k / 2, 2 * (1 - 1 / math.sqrt(2)) * c * k
    p = 1 - math.sqrt(1 - 1 / c)
    return p, p * c * k, 2 * p * (1 - p) * c * k


def long_path_hit_probability(p: float, length: int, k2: int, kx: int) -> float:
    """p^k2 (1-p)^(L-k2) C(L-k2-1, kx/2-1) C(k2, kx/2): chance (up to the cyclic
    symmetry, which only helps) that a random partition meets both targets."""
    base = p ** k2 * (1 - p) ** (length - k2)
    if kx == 0:
        return base if k2 in (0, length) else 0.0
    h = kx // 2
    return base * math.comb(length - k2 - 1, h - 1) * math.comb(k2, h)


@dataclass(frozen=True)
class LongPathSchedule:
    length: int
    c: float
    p: float
    k2: int
    kx: int
    l1: int
    mu: int
    p3: float
    repetitions: int

    def to_json(self) -> dict:
        return {"length": self.length, "c": self.c, "p": self.p, "k2": self.k2, "kx": self.kx,
                "l1": self.l1, "mu": self.mu, "p3": self.p3, "repetitions": self.repetitions}


def long_path_schedule(k: int, length: int, rep_factor: float = 10.0) -> LongPathSchedule:
    """Integer parameters for target cycle length ``length`` >= k.

    k2 is rounded, kx rounded to an even number and clamped to what a cycle
    with k2 vertices in V2 can achieve; repetitions = ceil(rep_factor / p3).
    """
    c = length / k
    p, k2f, kxf = long_path_parameters(c, k)
    k2 = min(max(round(k2f), 0), length)
    half = min(max(round(kxf / 2), 0), k2, length - k2)
    if 0 < k2 < length:
        half = max(half, 1)
    kx = 2 * half
    l1 = max(0, k - half - k2)
    mu = k2 + l1
    p3 = long_path_hit_probability(p, length, k2, kx)
    reps = math.ceil(rep_factor / p3) if p3 > 0 else 0
    return LongPathSchedule(length, c, p, k2, kx, l1, mu, p3, reps)


def _long_path_partition(g: Graph, s: int, t: int, k: int, sch: LongPathSchedule, F: Field,
                         seed: int, r: int, trials: int | None) -> tuple[bool, Stats]:
    stats = Stats()
    gen = stream(seed, TAG_PARTITION, sch.length, r)
    inV2 = [bool(gen.random() < sch.p) for _ in range(g.n)]
    n2 = sum(inV2)
    if n2 < sch.k2 or (sch.kx and n2 in (0, g.n)):
        return False, stats
    kinds = {}
    for j, (u, v) in enumerate(g.edges):
        kinds[j] = ("2" if inV2[u] and inV2[v] else "1" if not (inV2[u] or inV2[v]) else "x")
    pair_kind = "2" if inV2[s] and inV2[t] else "1" if not (inV2[s] or inV2[t]) else "x"
    trackers = {"x": {j for j, c in kinds.items() if c == "x"},
                "2": {j for j, c in kinds.items() if c == "2"}}
    if pair_kind in trackers:
        trackers[pair_kind].add(("pair", 0))
    P, L = stpath_linkage_det(g, [s], [t], F, pair_vars=True, trackers=trackers)
    keys = [key for key in L.keys if key[0] in ("e", "pair")]

    def kind_of(key):
        return pair_kind if key[0] == "pair" else kinds[key[1]]

    E1 = [key for key in keys if kind_of(key) == "1"]
    E2X = [key for key in keys if kind_of(key) != "1"]
    if len(E1) < sch.l1:
        return False, stats
    ends = {key: (s, t) if key[0] == "pair" else g.edges[key[1]] for key in keys}
    mgen = stream(seed, TAG_MATROID, sch.length, r)
    M = uniform(len(E1), sch.l1, F, E1)
    if E2X:
        M2 = transversal(E2X, [[v for v in ends[key] if inV2[v]] for key in E2X], F, mgen)
        if M2.rank < sch.k2:
            return False, stats
        M = M.direct_sum(M2.truncate(sch.k2, mgen))
    elif sch.k2:
        return False, stats
    columns = {key: M.index[key] for key in keys}
    assoc = _assoc_from_layout(L, columns)
    n1 = g.n - n2
    Q = coeff_extract(P, L[("z", "x")], sch.kx, 2 * min(n1, n2))
    Q = coeff_extract(Q, L[("z", "2")], sch.k2 - sch.kx // 2, n2)
    rep = odd_sieve(Q, M, assoc, trials=trials, seed=seed, path=(TAG_SIEVE, sch.length, r),
                    z_degree=P.circuit.dim)
    stats.add(rep)
    return rep.decision, stats


def long_st_path(g: Graph, s: int, t: int, k: int, *, field: Field = DEFAULT_FIELD,
                 seed: int = DEFAULT_SEED, trials: int | None = None, rep_factor: float = 10.0,
                 threads: int = 1, witness: bool = False) -> SolveResult:
    """st-path with at least k vertices in an undirected graph.

    For every target length L = k..n a schedule fixes (p, k2, kx); each of
    its random partitions V = V1 + V2 is tested by odd sieving the
    tracker-filtered padded-path determinant against
    uniform(E1, l1) + truncated transversal(EX + E2 -> V2, k2), at 2^mu
    evaluations per trial.  Short cases (k <= 2) are decided by reachability.
    """
    _check_char2(field, "long path")
    if g.directed:
        raise UsageError("long paths are implemented for undirected graphs")
    res = SolveResult("longpath", False)
    if k > g.n:
        return res
    if s == t:
        res.decision = k <= 1
        return res
    if k <= 2:
        res.decision = _reachable(g, s, t)
        if witness and res.decision:
            res.witness = _bfs_path(g, s, t)
        return res
    # only the block of G + st holding st can carry a simple st-path
    core = st_path_vertices(g, s, t)
    if len(core) < k:
        return res
    rename = {v: i for i, v in enumerate(core)}
    h = Graph(len(core), [(rename[u], rename[v]) for u, v in g.edges
                          if u in rename and v in rename and {u, v} != {s, t}])
    hs, ht = rename[s], rename[t]
    decision, stats, schedule = _long_path_decide(h, hs, ht, k, field, seed, trials, rep_factor, threads)
    res.decision, res.stats = decision, stats
    res.schedule = [sch.to_json() for sch in schedule]
    if witness and decision:
        def holds(keep):
            sub = Graph(h.n, [h.edges[j] for j in keep])
            return _long_path_decide(sub, hs, ht, k, field, seed, trials, rep_factor, threads)[0]
        keep = self_reduce(list(range(h.m)), holds)
        res.witness = [core[v] for v in _order_path([h.edges[j] for j in keep], hs, ht)]
    return res


def st_path_vertices(g: Graph, s: int, t: int) -> list[int]:
    """Sorted vertices of the biconnected block of G + st containing the edge st
    (s != t).  Beyond s and t these are exactly the vertices on simple st-paths;
    the block is just [s, t] when t is unreachable."""
    adj: list[set[int]] = [set() for _ in range(g.n)]
    for u, v in list(g.edges) + [(s, t)]:
        if u != v:
            adj[u].add(v)
            adj[v].add(u)
    order = {s: 0}
    low = {s: 0}
    edge_stack: list[tuple[int, int]] = []
    stack = [(s, None, iter(sorted(adj[s])))]
    while stack:
        u, parent, it = stack[-1]
        advanced = False
        for v in it:
            if v == parent:
                continue
            if v not in order:
                order[v] = low[v] = len(order)
                edge_stack.append((u, v))
                stack.append((v, u, iter(sorted(adj[v]))))
                advanced = True
                break
            if order[v] < order[u]:
                edge_stack.append((u, v))
                low[u] = min(low[u], order[v])
        if advanced:
            continue
        stack.pop()
        if parent is None:
            break
        low[parent] = min(low[parent], low[u])
        if low[u] >= order[parent]:
            block = set()
            while True:
                e = edge_stack.pop()
                block.update(e)
                if e == (parent, u):
                    break
            if s in block and t in block:
                return sorted(block)
    raise AssertionError("the edge st lies in some block")


def _long_path_decide(g, s, t, k, F, seed, trials, rep_factor, threads):
    schedule = [long_path_schedule(k, length, rep_factor) for length in range(k, g.n + 1)]

    def tasks():
        for sch in schedule:
            for r in range(sch.repetitions):
                yield lambda sch=sch, r=r: _long_path_partition(g, s, t, k, sch, F, seed, r, trials)

    hit, stats = first_success(tasks(), threads)
    return hit is not None, stats, schedule


def long_cycle(g: Graph, k: int, *, field: Field = DEFAULT_FIELD, seed: int = DEFAULT_SEED,
               trials: int | None = None, rep_factor: float = 10.0, threads: int = 1) -> SolveResult:
    """Simple cycle with at least k vertices: some edge st closes an st-path of
    G - st with at least max(k, 3) vertices."""
    res = SolveResult("longcycle", False)
    seen = set()
    for j, (u, v) in enumerate(g.edges):
        if u == v or (u, v) in seen:
            continue
        seen.add((u, v))
        h = g.without_edges([i for i, e in enumerate(g.edges) if set(e) == {u, v}])
        sub = long_st_path(h, u, v, max(k, 3), field=field, seed=seed, trials=trials,
                           rep_factor=rep_factor, threads=threads)
        res.stats.merge(sub.stats)
        if sub.decision:
            res.decision = True
            res.extra["edge"] = [u, v]
            return res
    return res


def _reachable(g: Graph, s: int, t: int) -> bool:
    return _bfs_path(g, s, t) is not None


def _bfs_path(g: Graph, s: int, t: int) -> list[int] | None:
    arcs = g.out_arcs()
    prev = {s: None}
    queue = [s]
    for u in queue:
        for v, _ in arcs[u]:
            if v not in prev:
                prev[v] = u
                queue.append(v)
    if t not in prev:
        return None
    path = [t]
    while prev[path[-1]] is not None:
        path.append(prev[path[-1]])
    return path[::-1]


def _order_path(edges: Sequence[tuple[int, int]], s: int, t: int) -> list[int]:
    adj: dict[int, list[int]] = {}
    for u, v in edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    path, prev = [s], None
    while path[-1] != t:
        nxt = [w for w in adj.get(path[-1], []) if w != prev]
        if not nxt:
            break
        prev = path[-1]
        path.append(nxt[0])
    return path


# ---------------------------------------------------------------------------
# diverse collections


def _inline(c: Circuit, src: Circuit, inputs: Sequence[int]) -> list[int]:
    """Copy ``src`` into ``c`` with variable i replaced by gate inputs[i]; returns gate ids."""
    ids = []
    for op, a, b in src.gates:
        if op == OP_CONST:
            ids.append(c.const(a))
        elif op == OP_INPUT:
            ids.append(inputs[a])
        elif op == OP_ADD:
            ids.append(c.add(ids[a], ids[b]))
        elif op == OP_MUL:
            ids.append(c.mul(ids[a], ids[b]))
        else:
            ids.append(c.sub(ids[a], ids[b]))
    return ids


def _product_circuit(field: Field, arity: int, parts: Sequence[tuple[Circuit, list[Callable[[Circuit], int]]]]):
    """Product of circuits with substituted inputs; matrix finalisers become block-diagonal."""
    fins = {src.fin for src, _ in parts}
    if len(fins) != 1:
        return None
    fin = fins.pop()
    c = Circuit(field, arity)
    outs, blocks = [], []
    for src, subs in parts:
        inputs = [make(c) for make in subs]
        ids = _inline(c, src, inputs)
        if fin == FIN_OUT:
            outs.append(ids[src.output] if src.gates else c.const(0))
        else:
            blocks.append((src.dim, [ids[g] if g >= 0 else None for g in src.outputs]))
    if fin == FIN_OUT:
        c.set_output(c.product(outs))
        return c
    dim = sum(d for d, _ in blocks)
    entries: list[int | None] = [None] * (dim * dim)
    off = 0
    for d, ents in blocks:
        for r in range(d):
            for q in range(d):
                entries[(off + r) * dim + off + q] = ents[r * d + q]
        off += d
    c.set_matrix(entries, dim, pfaffian=fin == FIN_PF)
    return c


def diverse_collection(enums: Sequence[PolyOracle], n_ground: int, d: dict[tuple[int, int], int] | int | None = None, *,
                       mode: str = "pairwise", total: int | None = None, weights: Sequence[int] | None = None,
                       seed: int = DEFAULT_SEED, trials: int | None = None) -> SolveResult:
    """S_i from each enumerated family with |S_i ^ S_j| >= d_ij (weighted: sum of w_e).

    Enumerator i gets x_e <- y_{i,e} prod_{j != i} x_e^{ij} (each x_e^{ij} a
    product of w_e fresh variables when weighted); the product is odd-sieved
    against the direct sum of uniform matroids of rank d_ij over the pair
    copies, or one uniform matroid of rank ``total`` in mode 'sum'.
    """
    K = len(enums)
    if K < 1:
        raise SpecError("need at least one enumerator")
    if mode not in ("pairwise", "sum"):
        raise UsageError("mode is 'pairwise' or 'sum'")
    F = enums[0].field
    _check_char2(F, "diverse collection")
    for p in enums:
        if p.arity != n_ground or p.field != F:
            raise SpecError("every enumerator must be over the common ground set and field")
    w = list(weights) if weights is not None else [1] * n_ground
    if len(w) != n_ground or any(x < 1 for x in w):
        raise SpecError("weights must be positive, one per ground element")
    pairs = list(itertools.combinations(range(K), 2))
    if isinstance(d, int):
        d = {pr: d for pr in pairs}
    d = dict(d or {})
    res = SolveResult("diverse", False)
    cap = sum(w)
    if mode == "pairwise" and any(d.get(pr, 0) > cap for pr in pairs):
        return res
    if mode == "sum":
        if total is None:
            raise SpecError("mode 'sum' needs a total distance")
        if total > cap * len(pairs):
            return res
    L = Layout()
    for i in range(K):
        for e in range(n_ground):
            L.add(("y", i, e))
    for pr in pairs:
        for e in range(n_ground):
            for r in range(w[e]):
                L.add(("x", pr, e, r))

    def subs_for(i: int) -> list[Callable[[Circuit], int]]:
        out = []
        for e in range(n_ground):
            keys = [("y", i, e)] + [("x", pr, e, r) for pr in pairs if i in pr for r in range(w[e])]
            out.append(lambda c, keys=keys: c.product([c.input(L[key]) for key in keys]))
        return out

    circ = None
    if all(p.circuit is not None and p.flatten() is not None and not p.flatten()[1] for p in enums):
        circ = _product_circuit(F, len(L), [(p.circuit, subs_for(i)) for i, p in enumerate(enums)])
    degree = sum(p.degree for p in enums) * (1 + (K - 1) * max(w, default=1))
    if circ is not None:
        P = PolyOracle.from_circuit(circ, degree, name="diverse")
    else:
        def evaluate(pt):
            val = 1
            for i, p in enumerate(enums):
                sub = []
                for e in range(n_ground):
                    x = pt[L[("y", i, e)]]
                    for pr in pairs:
                        if i in pr:
                            for r in range(w[e]):
                                x = F.mul(x, pt[L[("x", pr, e, r)]])
                    sub.append(x)
                val = F.mul(val, p(sub))
            return val
        P = PolyOracle(F, len(L), degree, evaluate, name="diverse")
    xkeys = [key for key in L.keys if key[0] == "x"]
    if mode == "pairwise":
        M = None
        for pr in pairs:
            block = [key for key in xkeys if key[1] == pr]
            Mp = uniform(len(block), d.get(pr, 0), F, block)
            M = Mp if M is None else M.direct_sum(Mp)
    else:
        M = uniform(len(xkeys), total, F, xkeys)
    if M is None:
        M = LinearMatroid(Matrix(F, 0, 0), [])
    assoc = _assoc_from_layout(L, {key: M.index[key] for key in xkeys})
    zdeg = (K - 1) * max(w, default=1) * sum(p.degree for p in enums)
    rep = odd_sieve(P, M, assoc, trials=trials, seed=seed, path=(TAG_SIEVE,), z_degree=zdeg)
    res.decision = rep.decision
    res.stats.add(rep)
    return res


def diverse_perfect_matchings(g: Graph, K: int, d, *, field: Field = DEFAULT_FIELD, seed: int = DEFAULT_SEED,
                              trials: int | None = None, mode: str = "pairwise", total: int | None = None) -> SolveResult:
    enums = [matching_poly(g, field) for _ in range(K)]
    res = diverse_collection(enums, g.m, d, mode=mode, total=total, seed=seed, trials=trials)
    res.problem = "diverse"
    return res


def distinct_branchings(g: Graph, s: int, t: int, k: int, *, field: Field = DEFAULT_FIELD,
                        seed: int = DEFAULT_SEED, trials: int | None = None) -> SolveResult:
    """Out-branching rooted at s and in-branching rooted at t differing in at least k arcs."""
    enums = [branching_poly(g, s, field, out=True), branching_poly(g, t, field, out=False)]
    res = diverse_collection(enums, g.m, {(0, 1): k}, seed=seed, trials=trials)
    res.problem = "branchings"
    return res


# ---------------------------------------------------------------------------
# connected subgraphs


def diverse_bases(m: LinearMatroid, K: int, d, *, seed: int = DEFAULT_SEED,
                  trials: int | None = None) -> SolveResult:
    """K bases of m with pairwise symmetric differences of size >= d."""
    A = m.reduced().rep
    enums = [cauchy_binet_poly(A, A) for _ in range(K)]
    res = diverse_collection(enums, m.n, d, seed=seed, trials=trials)
    res.problem = "diverse"
    return res


def diverse_common_bases(m1: LinearMatroid, m2: LinearMatroid, K: int, d, *, seed: int = DEFAULT_SEED,
                         trials: int | None = None) -> SolveResult:
    """K common bases of two rank-r matroids with pairwise symmetric differences >= d."""
    _same_ground([m1, m2])
    A1, A2 = m1.reduced().rep, m2.reduced().rep
    if A1.rows != A2.rows:
        return SolveResult("diverse", False)
    enums = [cauchy_binet_poly(A1, A2) for _ in range(K)]
    res = diverse_collection(enums, m1.n, d, seed=seed, trials=trials)
    res.problem = "diverse"
    return res


def connected_rank_subgraph(g: Graph, m: LinearMatroid, k: int, w: int, *, over_edges: bool = False,
                            field: Field | None = None, seed: int = DEFAULT_SEED,
                            trials: int | None = None) -> SolveResult:
    """Connected subgraph H whose vertices have rank >= k with |V(H)| <= w, or
    (``over_edges``) whose edges have rank >= k with |E(H)| <= w.

    Odd-sieves the branching-walk polynomial with l nodes against m truncated
    to rank k, for l = k..w (vertices) or l = k+1..w+1 (edges, a walk over
    |E(H)| edges has |E(H)| + 1 nodes), and reports the first l that passes
    (extra 'size').
    """
    F = m.field if field is None else field
    _check_char2(F, "connected rank subgraph")
    res = SolveResult("steiner", False)
    if w < k or (w < 1 and not over_edges):
        return res
    expect = g.m if over_edges else g.n
    if m.n != expect:
        raise SpecError(f"the matroid must have {expect} elements")
    if m.rank < k:
        return res
    mt = m.truncate(k, stream(seed, TAG_TRUNC))
    arcs = g.out_arcs()
    if over_edges:
        sources, keys = [], []
        for u in range(g.n):
            for v, j in arcs[u]:
                if ("y", u, v) not in keys:
                    keys.append(("y", u, v))
                    sources.append(m.labels[j])
        ground = mt.parallel_copies(sources, keys)
    else:
        ground = mt
    sizes = range(k + 1, min(w, g.m) + 2) if over_edges else range(max(k, 1), min(w, g.n) + 1)
    for ell in sizes:
        P, L = branching_walk_poly(g, ell, F)
        if over_edges:
            assoc = _assoc_from_layout(L, {key: ground.index[key] for key in keys})
        else:
            assoc = _assoc_from_layout(L, {("x", v): v for v in range(g.n)})
        rep = odd_sieve(P, ground, assoc, trials=trials, seed=seed, path=(TAG_SIEVE, ell))
        res.stats.add(rep)
        if rep.decision:
            res.decision = True
            res.extra["size"] = ell
            return res
    return res


def steiner_tree(g: Graph, terminals: Sequence[int], w: int, **kw) -> SolveResult:
    """Connected subgraph on at most w vertices containing every terminal."""
    F = kw.pop("field", DEFAULT_FIELD)
    terminals = list(dict.fromkeys(terminals))
    M = unit_vectors(list(range(g.n)), terminals, F)
    return connected_rank_subgraph(g, M, len(terminals), w, field=F, **kw)


def group_steiner_tree(g: Graph, groups: Sequence[Sequence[int]], w: int, **kw) -> SolveResult:
    """Connected subgraph on at most w vertices meeting every group (vertex v carries the
    sum of the unit vectors of its groups, so picking one vertex per group spans)."""
    F = kw.pop("field", DEFAULT_FIELD)
    rep = Matrix(F, len(groups), g.n)
    for i, grp in enumerate(groups):
        for v in grp:
            rep[i, v] = 1
    return connected_rank_subgraph(g, LinearMatroid(rep, list(range(g.n))), len(groups), w, field=F, **kw)


def build_motif_edit_matroid(g: Graph, colouring: dict[int, Hashable] | Sequence[Hashable], Q: Sequence[Hashable],
                             k: int, ks: int = 0, kd: int = 0, ki: int = 0, *, field: Field = DEFAULT_FIELD,
                             seed: int = DEFAULT_SEED) -> LinearMatroid:
    """Matroid over the vertices whose k-element bases are exactly the vertex sets whose
    colour multiset becomes Q with at most ks substitutions, kd deletions and ki insertions.

    Partition matroid with the Q counts as capacities, extended by ks,
    truncated to min(rank, |Q|) (no more than |Q| vertices can ever be
    matched), truncated to k0 = max(|Q| - ki, k - kd), then extended by k - k0.
    """
    colour = [colouring[v] for v in range(g.n)]
    k0 = max(len(Q) - ki, k - kd)
    if k0 > k:
        raise SpecError("parameters rejected: max(|Q| - k_i, k - k_d) exceeds k")
    counts: dict[Hashable, int] = {}
    for q in Q:
        counts[q] = counts.get(q, 0) + 1
    classes: dict[Hashable, list[int]] = {}
    for v, c in enumerate(colour):
        classes.setdefault(c, []).append(v)
    names = sorted(classes, key=repr)
    M1 = partition([classes[c] for c in names], [counts.get(c, 0) for c in names], field)
    M1 = M1.restrict(list(range(g.n)))
    gen = stream(seed, TAG_EXT)
    M2 = M1.extend(ks, gen) if ks else M1
    M2 = M2.truncate(min(M2.rank, len(Q)), gen)
    M3 = M2.truncate(max(k0, 0), gen)
    M = M3.extend(k - k0, gen) if k > k0 else M3
    return M


def graph_motif(g: Graph, colouring, Q: Sequence[Hashable], ks: int = 0, kd: int = 0, ki: int = 0, *,
                k: int | None = None, field: Field = DEFAULT_FIELD, seed: int = DEFAULT_SEED,
                trials: int | None = None) -> SolveResult:
    """Connected k-vertex subgraph whose colours edit into Q within the budgets (k defaults to |Q|)."""
    k = len(Q) if k is None else k
    M = build_motif_edit_matroid(g, colouring, Q, k, ks, kd, ki, field=field, seed=seed)
    res = connected_rank_subgraph(g, M, k, k, field=field, seed=seed, trials=trials)
    res.problem = "motif"
    return res


# ---------------------------------------------------------------------------
# Eulerian deletion


def _connected(g: Graph) -> bool:
    if g.n == 0:
        return True
    return all(_reachable(g, 0, v) for v in range(g.n))


def eulerian_deletion(g: Graph, k: int, *, field: Field = DEFAULT_FIELD, seed: int = DEFAULT_SEED,
                      trials: int | None = None) -> SolveResult:
    """Delete at most k edges to leave a connected graph with all degrees even.

    For k' = 0..k: basis-sieve the weight-k' part of the T-join Pfaffian
    (T = odd-degree vertices) against the cographic matroid truncated to k';
    the first k' that passes is the minimum (extra 'deleted').
    """
    _check_char2(field, "Eulerian deletion")
    if g.directed:
        raise UsageError("Eulerian deletion is implemented for undirected graphs")
    res = SolveResult("euler", False)
    if not _connected(g):
        return res
    T = [v for v in range(g.n) if g.degree(v) % 2]
    if not T:
        res.decision = True
        res.extra["deleted"] = 0
        return res
    co = cographic(g.n, g.edges, field)
    for kp in range(1, k + 1):
        if kp < len(T) // 2 or co.rank < kp:
            continue
        P = tjoin_poly(g, T, kp, field)
        mt = co.truncate(kp, stream(seed, TAG_TRUNC, kp))
        rep = basis_sieve(P, mt, trials=trials, seed=seed, path=(TAG_SIEVE, kp))
        res.stats.add(rep)
        if rep.decision:
            res.decision = True
            res.extra["deleted"] = kp
            return res
    return res


# ---------------------------------------------------------------------------
# problem instances


@dataclass
class ProblemInstance:
    """A named problem with the keyword arguments of its solver."""

    problem: str
    args: dict

    def solve(self, **options) -> SolveResult:
        return solve(self, **options)


def _cover(V, family, m, t, **kw):
    return rank_set_cover_packing(V, family, m, t, "cover", **kw)


def _packing(V, family, m, t, **kw):
    return rank_set_cover_packing(V, family, m, t, "packing", **kw)


SOLVERS: dict[str, Callable[..., SolveResult]] = {
    "qmi": q_matroid_intersection,
    "qmp": q_matroid_parity,
    "set_cover": _cover,
    "set_packing": _packing,
    "odd_coverage": odd_coverage,
    "balanced_path": balanced_path,
    "linkage": rank_linkage,
    "t_cycle": t_cycle,
    "long_path": long_st_path,
    "long_cycle": long_cycle,
    "diverse_pm": diverse_perfect_matchings,
    "diverse_bases": diverse_bases,
    "diverse_common_bases": diverse_common_bases,
    "branchings": distinct_branchings,
    "connected_rank": connected_rank_subgraph,
    "steiner": steiner_tree,
    "group_steiner": group_steiner_tree,
    "motif": graph_motif,
    "euler": eulerian_deletion,
}


def solve(inst: ProblemInstance, **options) -> SolveResult:
    """Run the solver registered for ``inst.problem``; options (seed, trials, ...) pass through."""
    try:
        fn = SOLVERS[inst.problem]
    except KeyError:
        raise UsageError(f"unknown problem {inst.problem!r}") from None
    return fn(**inst.args, **options)
