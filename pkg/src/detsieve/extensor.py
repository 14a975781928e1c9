"""Exterior-algebra evaluation of circuits over any field.

An element of the exterior algebra of F^k is stored as its 2^k coefficients,
indexed by subset bitmask.  Evaluating a circuit with each variable replaced
by a scaled wedge of its matroid columns leaves, in the top coefficient, a
sum of determinants over the monomials whose support is a basis.  For
strongly monotone circuits the sum cannot cancel; the lifted variant squares
every determinant and works for arbitrary circuits.
"""

from __future__ import annotations

from collections.abc import Sequence
from fractions import Fraction

from . import _kernels as K
from .errors import ContractError, UsageError
from .field import Field
from .matroid import ColumnAssoc, LinearMatroid
from .polyoracle import (FIN_OUT, OP_ADD, OP_CONST, OP_INPUT, OP_MUL, OP_SUB, Circuit,
                         MONOTONE_CHECK_MAX_VARS, check_strong_monotonicity)
from .rng import DEFAULT_SEED, stream
from .sieve import SieveReport, default_trials


class Extensor:
    """Element of the exterior algebra over F^k."""

    __slots__ = ("field", "k", "coeffs")

    def __init__(self, field: Field, k: int, coeffs: Sequence[int] | None = None):
        self.field = field
        self.k = k
        self.coeffs = list(coeffs) if coeffs is not None else [0] * (1 << k)
        if len(self.coeffs) != 1 << k:
            raise UsageError(f"an extensor over F^{k} has {1 << k} coefficients")

    @classmethod
    def scalar(cls, field: Field, k: int, c: int) -> "Extensor":
        e = cls(field, k)
        e.coeffs[0] = c
        return e

    @classmethod
    def vector(cls, field: Field, k: int, v: Sequence[int]) -> "Extensor":
        if len(v) != k:
            raise UsageError(f"vector of length {len(v)} in F^{k}")
        e = cls(field, k)
        for i, c in enumerate(v):
            e.coeffs[1 << i] = c
        return e

    def _same(self, other: "Extensor") -> None:
        if other.field != self.field or other.k != self.k:
            raise UsageError("extensors over different spaces")

    def wedge(self, other: "Extensor") -> "Extensor":
        self._same(other)
        return Extensor(self.field, self.k, K.wedge(self.field.fs, self.k, self.coeffs, other.coeffs))

    __xor__ = wedge

    def __add__(self, other: "Extensor") -> "Extensor":
        self._same(other)
        F = self.field
        return Extensor(F, self.k, [F.add(a, b) for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "Extensor") -> "Extensor":
        self._same(other)
        F = self.field
        return Extensor(F, self.k, [F.sub(a, b) for a, b in zip(self.coeffs, other.coeffs)])

    def scale(self, c: int) -> "Extensor":
        F = self.field
        return Extensor(F, self.k, [F.mul(c, a) for a in self.coeffs])

    def coefficient(self, S: Sequence[int]) -> int:
        mask = 0
        for i in S:
            mask |= 1 << i
        return self.coeffs[mask]

    @property
    def top(self) -> int:
        return self.coeffs[-1]

    def __eq__(self, other) -> bool:
        return isinstance(other, Extensor) and self.field == other.field and self.coeffs == other.coeffs

    def __repr__(self) -> str:
        nz = {bin(i)[2:].zfill(self.k)[::-1]: c for i, c in enumerate(self.coeffs) if c}
        return f"Extensor(k={self.k}, {nz})"


def wedge_all(field: Field, k: int, items: Sequence[Extensor]) -> Extensor:
    acc = Extensor.scalar(field, k, 1)
    for e in items:
        acc = acc.wedge(e)
    return acc


def lift_vector(field: Field, v: Sequence[int]) -> Extensor:
    """(v, 0) ^ (0, v) in the exterior algebra over F^(2k)."""
    k = len(v)
    a = Extensor.vector(field, 2 * k, list(v) + [0] * k)
    b = Extensor.vector(field, 2 * k, [0] * k + list(v))
    return a.wedge(b)


def evaluate_circuit(circuit: Circuit, inputs: Sequence[Extensor]) -> Extensor:
    """Evaluate a single-output circuit with extensor inputs; gate values are
    dropped as soon as their last reader has run."""
    if circuit.fin != FIN_OUT:
        raise UsageError("extensor evaluation needs a single-output circuit")
    if len(inputs) != circuit.arity:
        raise UsageError("one extensor per circuit variable")
    F = inputs[0].field if inputs else circuit.field
    k = inputs[0].k if inputs else 0
    last = circuit.last_use()
    vals: dict[int, Extensor] = {}
    for g, (op, a, b) in enumerate(circuit.gates):
        if op == OP_CONST:
            v = Extensor.scalar(F, k, a)
        elif op == OP_INPUT:
            v = inputs[a]
        elif op == OP_ADD:
            v = vals[a] + vals[b]
        elif op == OP_SUB:
            v = vals[a] - vals[b]
        else:
            v = vals[a].wedge(vals[b])
        vals[g] = v
        if op in (OP_ADD, OP_SUB, OP_MUL):
            for src in {a, b}:
                if last[src] == g:
                    del vals[src]
    if not circuit.gates:
        return Extensor(F, k)
    return vals[circuit.output]


def _assoc(circuit: Circuit, m: LinearMatroid, assoc) -> ColumnAssoc:
    if assoc is None:
        if circuit.arity != m.n:
            raise UsageError("no association given and arity differs from the ground set size")
        assoc = ColumnAssoc.identity(circuit.arity)
    elif not isinstance(assoc, ColumnAssoc):
        assoc = ColumnAssoc.of(assoc)
    assoc.validate(circuit.arity, m.n)
    return assoc


def _require_monotone(circuit: Circuit) -> None:
    if circuit.certified_monotone:
        return
    if circuit.arity > MONOTONE_CHECK_MAX_VARS:
        raise ContractError("circuit is not certified strongly monotone and is too large to check")
    if not check_strong_monotonicity(circuit):
        raise ContractError("circuit is not strongly monotone; use the lifted evaluator")


def eval_monotone(circuit: Circuit, m: LinearMatroid, assoc: ColumnAssoc | Sequence | None,
                  scalars: Sequence[int]) -> Extensor:
    """Substitute x_i -> scalars[i] * wedge of the columns of x_i and evaluate.

    The top coefficient is sum over monomials of coef * scalars^m * det(A_support),
    restricted to monomials whose support has total weight k.
    """
    _require_monotone(circuit)
    assoc = _assoc(circuit, m, assoc)
    F, k = m.field, m.rows
    cols = [m.rep.col(j) for j in range(m.n)]
    inputs = [wedge_all(F, k, [Extensor.vector(F, k, cols[q]) for q in s]).scale(x)
              for s, x in zip(assoc.sets, scalars)]
    return evaluate_circuit(circuit, inputs)


def eval_lifted(circuit: Circuit, m: LinearMatroid, assoc: ColumnAssoc | Sequence | None,
                scalars: Sequence[int]) -> Extensor:
    """Lifted evaluation over F^(2k): each column v becomes (v,0)^(0,v).

    The top coefficient is (-1)^(k(k-1)/2) times the sum over monomials of
    coef * scalars^m * det(A_support)^2, valid for any circuit; products inside
    the lifted subalgebra commute.  The sign comes from reordering
    (v1,0)(0,v1)...(vk,0)(0,vk) into the standard basis order.
    """
    assoc = _assoc(circuit, m, assoc)
    F, k = m.field, m.rows
    cols = [m.rep.col(j) for j in range(m.n)]
    inputs = [wedge_all(F, 2 * k, [lift_vector(F, cols[q]) for q in s]).scale(x)
              for s, x in zip(assoc.sets, scalars)]
    return evaluate_circuit(circuit, inputs)


def extensor_sieve(circuit: Circuit, m: LinearMatroid, assoc: ColumnAssoc | Sequence | None = None, *,
                   lifted: bool = False, trials: int | None = None, seed: int = DEFAULT_SEED,
                   path: Sequence[int] = ()) -> SieveReport:
    """Basis detection by extensor evaluation at random scalars, over any field."""
    F = m.field
    if circuit.field != F:
        raise UsageError("circuit and matroid live over different fields")
    trials = default_trials(F) if trials is None else trials
    evaluate = eval_lifted if lifted else eval_monotone
    decision = False
    done = 0
    for t in range(trials):
        done += 1
        scalars = F.random_vector(stream(seed, *path, t), circuit.arity)
        if evaluate(circuit, m, assoc, scalars).top:
            decision = True
            break
    bound = Fraction(max(circuit.degree(), 1), F.order)
    return SieveReport(decision, done, done, bound, seed, "lifted" if lifted else "monotone")
