"""Shared builders for the test suite."""

import numpy as np

from detsieve.linalg import Matrix
from detsieve.matroid import LinearMatroid
from detsieve.oracle import SparsePoly
from detsieve.polyoracle import Circuit, PolyOracle


def sparse_circuit(P: SparsePoly) -> PolyOracle:
    """Circuit oracle computing the sum of c * prod x_i^e_i, term by term."""
    c = Circuit(P.field, P.arity)
    terms = []
    for mono, coef in sorted(P.terms.items()):
        factors = [c.const(coef)]
        for i, e in enumerate(mono):
            factors.extend([c.input(i)] * e)
        terms.append(c.product(factors))
    c.set_output(c.sum(terms))
    return PolyOracle(P.field, P.arity, P.degree, circuit=c, homogeneous=P.is_homogeneous() and bool(P),
                      name="sparse-circuit")


def small_matroid(field, rows, n, gen: np.random.Generator, density=0.6, entries=4) -> LinearMatroid:
    """Representation with small entries, so dependent column sets are common."""
    M = Matrix(field, rows, n)
    for i in range(rows):
        for j in range(n):
            if gen.random() < density:
                M[i, j] = int(gen.integers(1, entries))
    return LinearMatroid(M, list(range(n)))


def random_assoc(n_vars, n_cols, gen: np.random.Generator, max_gamma=2):
    """Disjoint column sets for the variables; some variables get none."""
    cols = list(gen.permutation(n_cols))
    sets = []
    for _ in range(n_vars):
        g = int(gen.integers(0, max_gamma + 1))
        sets.append(tuple(int(q) for q in cols[:g]))
        cols = cols[g:]
    return sets


def random_monotone(F, n, gen):
    """Sum of distinct multilinear monomials, one product chain each."""
    c = Circuit(F, n)
    supports = set()
    for _ in range(int(gen.integers(1, 6))):
        supports.add(tuple(sorted(int(v) for v in gen.choice(n, int(gen.integers(1, n + 1)), replace=False))))
    terms = [c.product([c.const(F.random_nonzero(gen))] + [c.input(v) for v in S]) for S in sorted(supports)]
    c.set_output(c.sum(terms))
    return c


# one line per acceptance criterion, repeated in the terminal summary
ACCEPTANCE: list[str] = []


def report(number: int, title: str, ok: bool, detail: str) -> None:
    line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail}"
    print(line)
    ACCEPTANCE.append(line)
