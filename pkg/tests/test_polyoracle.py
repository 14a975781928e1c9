import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from detsieve.errors import CapacityError, ParseError, UsageError
from detsieve.field import GF2_4, GF2_8, GF2_64, P31
from detsieve.oracle import SparsePoly, expand_symbolic, random_sparse
from detsieve.polyoracle import (Circuit, PolyOracle, check_strong_monotonicity, coeff_extract,
                                 homogeneous_part, interpolation_points, lagrange_weights, parse_circuit,
                                 parse_circuit_text,
                                 subset_sieve, substitute)
from support import sparse_circuit


def test_circuit_evaluation_and_degree():
    F = GF2_8
    c = Circuit(F, 2)
    x, y = c.input(0), c.input(1)
    c.set_output(c.add(c.mul(x, x), c.mul(c.const(3), y)))
    assert c.degree() == 2
    assert c.evaluate([2, 5]) == F.add(F.mul(2, 2), F.mul(3, 5))
    assert c.input(0) == x and c.const(3) == c.const(3)
    with pytest.raises(UsageError):
        c.evaluate([1])
    with pytest.raises(UsageError):
        c.input(2)
    with pytest.raises(UsageError):
        c.add(0, 99)


def test_circuit_matrix_finalisers():
    F = GF2_64
    c = Circuit(F, 3)
    a, b, d = (c.input(i) for i in range(3))
    c.set_matrix([a, b, None, d], 2)
    assert c.evaluate([2, 3, 7]) == F.mul(2, 7)
    p = Circuit(F, 1)
    x = p.input(0)
    p.set_matrix([None, x, x, None], 2, pfaffian=True)
    assert p.evaluate([9]) == 9 and p.degree() == 1
    with pytest.raises(UsageError):
        p.to_text()


def test_text_roundtrip():
    F = GF2_8
    c = Circuit(F, 3)
    c.set_output(c.mul(c.add(c.input(0), c.const(0x1B)), c.input(2)))
    text = c.to_text()
    back = parse_circuit_text(text, F)
    assert back.to_text() == text and back.arity == 3
    with pytest.raises(ParseError, match="expected"):
        parse_circuit_text(text, GF2_64)
    with pytest.raises(ParseError, match="promises"):
        parse_circuit_text(text.replace("circuit 3 5", "circuit 3 6"), F)
    for pt in itertools.product(range(4), repeat=3):
        assert back.evaluate(list(pt)) == c.evaluate(list(pt))


@pytest.mark.parametrize("lines, msg", [
    (["in 0", "add 0 1"], "defined before"),
    (["frob 0"], "unknown gate"),
    (["in x"], "bad gate"),
    ([], "no gates"),
])
def test_parse_errors(lines, msg):
    with pytest.raises(ParseError, match=msg):
        parse_circuit(lines, GF2_8)


def test_strong_monotonicity_check():
    F = GF2_64
    c = Circuit(F, 3)
    x = [c.input(i) for i in range(3)]
    c.set_output(c.add(c.mul(x[0], x[1]), c.mul(x[1], x[2])))
    assert check_strong_monotonicity(c)
    d = Circuit(F, 2)
    d.set_output(d.mul(d.input(0), d.input(0)))
    assert not check_strong_monotonicity(d)
    e = Circuit(F, 2)
    s = e.add(e.input(0), e.input(1))
    e.set_output(e.mul(s, s))
    assert not check_strong_monotonicity(e)
    f = Circuit(F, 2)
    f.set_output(f.add(f.input(0), f.input(0)))
    assert not check_strong_monotonicity(f)
    with pytest.raises(CapacityError):
        check_strong_monotonicity(Circuit(F, 40))


def test_oracle_counts_evaluations():
    P = PolyOracle(GF2_8, 2, 1, lambda pt: pt[0] ^ pt[1])
    P([1, 2])
    P([3, 3])
    assert P.evals == 2
    P.reset()
    assert P.evals == 0
    with pytest.raises(UsageError):
        P([1])
    with pytest.raises(UsageError):
        PolyOracle(GF2_8, 2, 1)


def test_lagrange_weights_recover_coefficients(any_field):
    F = any_field
    gen = np.random.default_rng(3)
    coeffs = F.random_vector(gen, 4)
    pts = interpolation_points(F, 3)

    def poly(z):
        return F.add(F.add(coeffs[0], F.mul(coeffs[1], z)), F.add(F.mul(coeffs[2], F.pow(z, 2)),
                                                                   F.mul(coeffs[3], F.pow(z, 3))))

    for t in range(5):
        w = lagrange_weights(F, pts, t)
        got = 0
        for z, a in zip(pts, w):
            got = F.add(got, F.mul(a, poly(z)))
        assert got == (coeffs[t] if t < 4 else 0)


def test_interpolation_points_capacity():
    with pytest.raises(CapacityError):
        interpolation_points(GF2_4, 16)
    assert len(interpolation_points(GF2_4, 15)) == 16


@given(st.integers(0, 2**32))
def test_transformers_match_sparse_expansion(seed):
    gen = np.random.default_rng(seed)
    F = GF2_64
    P = random_sparse(F, 3, int(gen.integers(1, 8)), 3, gen)
    O = sparse_circuit(P)
    pt = F.random_vector(gen, 3)
    var, t = int(gen.integers(0, 3)), int(gen.integers(0, 4))
    acc = SparsePoly(F, 3)
    for m, c in P.terms.items():
        if m[var] == t:
            acc = acc + SparsePoly(F, 3, {m[:var] + (0,) + m[var + 1:]: c})
    assert coeff_extract(O, var, t)(pt) == acc.evaluate(pt)
    part = SparsePoly(F, 3)
    for m, c in P.terms.items():
        if sum(m) == t:
            part = part + SparsePoly(F, 3, {m: c})
    assert homogeneous_part(O, t)(pt) == part.evaluate(pt)
    T = [i for i in range(3) if gen.random() < 0.5]
    div = SparsePoly(F, 3, {m: c for m, c in P.terms.items() if all(m[i] for i in T)})
    assert subset_sieve(O, T)(pt) == div.evaluate(pt)


def test_weighted_homogeneous_part():
    F = GF2_64
    P = SparsePoly(F, 2, {(1, 0): 5, (0, 1): 7, (1, 1): 9})
    O = P.to_oracle()
    # weights (2, 1): x0 has weight 2, so weight-2 part is 5 x0 only
    H = homogeneous_part(O, 2, [2, 1])
    assert H([3, 11]) == F.mul(5, 3)
    with pytest.raises(UsageError):
        homogeneous_part(O, 2, [1])


def test_transformer_costs():
    F = GF2_64
    P = random_sparse(F, 4, 5, 2, np.random.default_rng(1)).to_oracle()
    c = coeff_extract(P, 0, 1)
    c([1, 2, 3, 4])
    assert P.evals == P.degree + 1
    P.reset()
    subset_sieve(P, [0, 2, 3])([1, 2, 3, 4])
    assert P.evals == 8
    with pytest.raises(UsageError):
        subset_sieve(P, [0, 0])
    with pytest.raises(UsageError):
        coeff_extract(P, 9, 1)


def test_substitute():
    F = GF2_8
    P = PolyOracle(F, 2, 2, lambda pt: F.mul(pt[0], pt[1]))
    Q = substitute(P, 1, 2, lambda pt: [pt[0], pt[0]])
    assert Q([7]) == F.mul(7, 7)


def test_compiled_extraction_chain_flattens():
    P = random_sparse(GF2_64, 3, 4, 2, np.random.default_rng(2))
    O = sparse_circuit(P)
    C = coeff_extract(coeff_extract(O, 0, 1), 1, 0)
    top, axes, chain = C.flatten()
    assert top is O and [a[0] for a in axes] == [1, 0] and len(chain) == 3
    assert coeff_extract(P.to_oracle(), 0, 1).flatten() is None


def test_expansion_of_circuit_matches_evaluation(gen):
    P = random_sparse(P31, 4, 6, 2, gen)
    O = sparse_circuit(P)
    assert expand_symbolic(O) == P
