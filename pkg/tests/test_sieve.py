from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from detsieve.enumerators import cauchy_binet_poly
from detsieve.errors import CapacityError, UnsupportedOperation, UsageError
from detsieve.field import GF2_4, GF2_8, GF2_64, P31
from detsieve.linalg import Matrix
from detsieve.matroid import LinearMatroid
from detsieve.oracle import (SparsePoly, basis_monomial_exists, brute_qmi, expand_blackbox,
                             odd_monomial_exists, random_sparse)
from detsieve.polyoracle import coeff_extract
from detsieve.sieve import basis_sieve, default_trials, odd_sieve, sieve_transform
from support import random_assoc, small_matroid, sparse_circuit

F = GF2_64


def sparse(arity, terms):
    return SparsePoly(F, arity, terms)


def rows(*rs):
    return LinearMatroid(Matrix.from_rows(F, rs))


A23 = rows([1, 0, 0], [0, 1, 1])


@pytest.mark.parametrize("terms, want", [
    ({(1, 1, 0): 1, (0, 1, 1): 1}, True),
    ({(0, 1, 1): 1}, False),
])
def test_basis_examples(terms, want):
    P = sparse(3, terms)
    for O in (P.to_oracle(), sparse_circuit(P)):
        assert basis_sieve(O, A23).decision is want


def test_basis_rejects_squares():
    P = sparse(2, {(2, 1): 1})
    assert basis_sieve(P.to_oracle(), rows([1, 0], [0, 1])).decision is False


@pytest.mark.parametrize("terms, matroid, want", [
    ({(3,): 1}, [[1]], True),
    ({(2,): 1}, [[1]], False),
])
def test_odd_examples_one_variable(terms, matroid, want):
    P = sparse(1, terms)
    assert odd_sieve(P.to_oracle(), rows(*matroid)).decision is want


def test_odd_picks_the_linear_monomial():
    P = sparse(2, {(1, 2): 1, (0, 1): 1})
    m = rows([0, 1])
    assert odd_sieve(sparse_circuit(P), m).decision is True
    assert basis_sieve(sparse_circuit(P), m).decision is True
    Q = sparse(2, {(1, 2): 1})
    assert odd_sieve(sparse_circuit(Q), m).decision is False


def _instance(seed, max_gamma):
    gen = np.random.default_rng(seed)
    n_vars = int(gen.integers(1, 7))
    k = int(gen.integers(0, 4))
    n_cols = int(gen.integers(max(k, 1), 8))
    P = random_sparse(F, n_vars, int(gen.integers(1, 12)), 2, gen)
    m = small_matroid(F, k, n_cols, gen)
    assoc = random_assoc(n_vars, n_cols, gen, max_gamma)
    return P, m, assoc


@given(st.integers(0, 2**32), st.integers(1, 2))
def test_basis_sieve_matches_monomial_predicate(seed, max_gamma):
    P, m, assoc = _instance(seed, max_gamma)
    want = basis_monomial_exists(P, m, assoc)
    assert basis_sieve(sparse_circuit(P), m, assoc, seed=seed).decision is want
    assert basis_sieve(P.to_oracle(), m, assoc, seed=seed).decision is want


@given(st.integers(0, 2**32), st.integers(1, 2))
def test_odd_sieve_matches_monomial_predicate(seed, max_gamma):
    P, m, assoc = _instance(seed, max_gamma)
    want = odd_monomial_exists(P, m, assoc)
    assert odd_sieve(sparse_circuit(P), m, assoc, seed=seed).decision is want


@given(st.integers(0, 2**32))
def test_compiled_and_callback_paths_agree(seed):
    P, m, assoc = _instance(seed, 2)
    a = basis_sieve(sparse_circuit(P), m, assoc, seed=seed, trials=1)
    b = basis_sieve(P.to_oracle(), m, assoc, seed=seed, trials=1)
    assert a.decision == b.decision and a.p_evals == b.p_evals


@pytest.mark.parametrize("k", range(1, 7))
def test_homogeneous_cost_is_two_to_the_k(k, gen):
    A = Matrix.random(F, k, k + 2, gen)
    O = cauchy_binet_poly(A, A)
    rep = basis_sieve(O, LinearMatroid(A), trials=1)
    assert rep.decision and rep.p_evals == 2 ** k and O.evals == 2 ** k


@pytest.mark.parametrize("k", range(1, 6))
def test_nonhomogeneous_costs(k, gen):
    P = random_sparse(F, k + 1, 6, 2, gen)
    m = small_matroid(F, k, k + 1, gen)
    d = P.degree
    O = P.to_oracle()
    if O.homogeneous and d == k:
        want = 2 ** k
    else:
        want = (d + 1) * 2 ** k if d >= k else 0
    assert basis_sieve(O, m, trials=1).p_evals == want
    O.reset()
    rep = odd_sieve(O, m, trials=1)
    assert rep.p_evals == ((d + 1) * 2 ** k if d >= k else 0)


def test_reports():
    P = sparse(3, {(1, 1, 0): 1})
    rep = basis_sieve(P.to_oracle(), A23, trials=3, seed=7)
    assert rep.failure_bound == Fraction(4, F.order)
    assert rep.trials == 1 and rep.seed == 7
    assert rep.to_json() == {"decision": True, "trials": 1, "p_evals": rep.p_evals,
                             "failure_bound": str(Fraction(4, F.order)), "seed": 7, "mode": "basis"}
    no = sparse(3, {(0, 1, 1): 1})
    r2 = basis_sieve(no.to_oracle(), A23, trials=3)
    assert r2.trials == 3 and not r2.decision
    r3 = odd_sieve(no.to_oracle(), A23, trials=1)
    assert r3.failure_bound == Fraction(2 + 2, F.order)


def test_default_trials():
    assert default_trials(GF2_64) == 1
    assert default_trials(GF2_8) == 20
    assert default_trials(GF2_4, Fraction(1, 8)) == 3


def test_errors():
    P31m = LinearMatroid(Matrix.from_rows(P31, [[1, 0], [0, 1]]))
    Pp = SparsePoly(P31, 2, {(1, 1): 1}).to_oracle()
    with pytest.raises(UnsupportedOperation):
        basis_sieve(Pp, P31m)
    with pytest.raises(UsageError):
        basis_sieve(sparse(2, {(1, 1): 1}).to_oracle(), A23)
    with pytest.raises(UsageError):
        basis_sieve(sparse(3, {(1, 1, 0): 1}).to_oracle(), A23, [(0,), (0,), ()])
    with pytest.raises(UsageError):
        basis_sieve(sparse(3, {(1, 1, 0): 1}).to_oracle(), A23, trials=0)
    small = LinearMatroid(Matrix.from_rows(GF2_4, [[1, 0], [0, 1]]))
    big = SparsePoly(GF2_4, 2, {(20, 1): 1, (0, 0): 1}).to_oracle()
    with pytest.raises(CapacityError):
        basis_sieve(big, small)


def test_extraction_slot_cannot_carry_columns():
    P = sparse(3, {(1, 1, 1): 1})
    C = coeff_extract(sparse_circuit(P), 2, 1)
    with pytest.raises(UsageError):
        basis_sieve(C, rows([1, 0, 0], [0, 1, 0]), [(0,), (1,), (2,)])
    assert basis_sieve(C, rows([1, 0, 0], [0, 1, 0]), [(0,), (1,), ()]).decision


def test_seeding_is_reproducible():
    P = random_sparse(GF2_4, 4, 6, 2, np.random.default_rng(0))
    m = small_matroid(GF2_4, 2, 4, np.random.default_rng(1))
    a = basis_sieve(P.to_oracle(), m, seed=11, trials=5)
    b = basis_sieve(P.to_oracle(), m, seed=11, trials=5)
    assert (a.decision, a.trials, a.p_evals) == (b.decision, b.trials, b.p_evals)


@given(st.integers(0, 2**32))
def test_transform_is_nonzero_iff_basis_sieve(seed):
    P, m, assoc = _instance(seed, 1)
    T = sieve_transform(sparse_circuit(P), m, assoc, seed=seed)
    pt = F.random_vector(np.random.default_rng(seed + 1), P.arity)
    assert bool(T(pt)) == basis_monomial_exists(P, m, assoc)


def test_transform_keeps_only_basis_monomials(gen):
    P = sparse(3, {(1, 1, 0): 3, (0, 1, 1): 5, (1, 0, 1): 7, (2, 0, 0): 1})
    T = sieve_transform(P.to_oracle(), A23)
    E = expand_blackbox(T)
    assert {tuple(m) for m in E.terms} == {(1, 1, 0), (1, 0, 1)}


def test_transform_by_rank_zero_keeps_constant_part():
    P = sparse(2, {(0, 0): 9, (1, 0): 4, (1, 1): 2})
    empty = LinearMatroid(Matrix(F, 0, 2))
    T = sieve_transform(P.to_oracle(), empty)
    assert T([5, 6]) == 9


def test_nested_transform_decides_three_way_intersection(gen):
    for _ in range(8):
        n, k = 6, 2
        ms = [small_matroid(F, k, n, gen, density=0.5) for _ in range(3)]
        A1, A2, A3 = (m.rep for m in ms)
        T = sieve_transform(cauchy_binet_poly(A1, A2), ms[2], seed=3)
        pt = F.random_vector(gen, n)
        assert bool(T(pt)) == brute_qmi(ms, k)
