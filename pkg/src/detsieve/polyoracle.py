"""Black-box polynomials: circuits, evaluation oracles and oracle transformers.

A :class:`PolyOracle` evaluates a polynomial over a field and counts its
evaluations.  Oracles built from a :class:`Circuit` can be run inside the
compiled sieve loop; any other oracle goes through the generic Python path.
"""

from __future__ import annotations

import itertools
from collections.abc import Callable, Sequence
from functools import lru_cache

import numpy as np

from . import _kernels as K
from .errors import CapacityError, ParseError, UsageError
from .field import Field, parse_field_header

OP_CONST, OP_INPUT, OP_ADD, OP_MUL, OP_SUB = range(5)
FIN_OUT, FIN_DET, FIN_PF = range(3)
_OPNAMES = {OP_CONST: "const", OP_INPUT: "in", OP_ADD: "add", OP_MUL: "mul", OP_SUB: "sub"}

MONOTONE_CHECK_MAX_VARS = 20


class Circuit:
    """Straight-line arithmetic circuit over ``field`` with ``arity`` inputs.

    Gates are ``(op, a, b)`` triples; ``in`` gates read variable ``a`` and
    ``const`` gates hold the value ``a``.  The result is the last gate unless
    ``set_matrix`` requests a determinant or Pfaffian of gate values.
    """

    def __init__(self, field: Field, arity: int):
        self.field = field
        self.arity = arity
        self.gates: list[tuple[int, int, int]] = []
        self.fin = FIN_OUT
        self.dim = 0
        self.outputs: list[int] = []
        self.certified_monotone = False
        self._inputs: dict[int, int] = {}
        self._consts: dict[int, int] = {}
        self._compiled = None

    def __len__(self) -> int:
        return len(self.gates)

    def _push(self, op: int, a: int, b: int = 0) -> int:
        self.gates.append((op, a, b))
        self._compiled = None
        return len(self.gates) - 1

    def _ref(self, g: int) -> int:
        if not 0 <= g < len(self.gates):
            raise UsageError(f"gate {g} does not exist yet")
        return g

    def input(self, var: int) -> int:
        if not 0 <= var < self.arity:
            raise UsageError(f"variable {var} outside arity {self.arity}")
        if var not in self._inputs:
            self._inputs[var] = self._push(OP_INPUT, var)
        return self._inputs[var]

    def const(self, value: int) -> int:
        value = self.field.check(value)
        if value not in self._consts:
            self._consts[value] = self._push(OP_CONST, value)
        return self._consts[value]

    def add(self, a: int, b: int) -> int:
        return self._push(OP_ADD, self._ref(a), self._ref(b))

    def sub(self, a: int, b: int) -> int:
        return self._push(OP_SUB, self._ref(a), self._ref(b))

    def mul(self, a: int, b: int) -> int:
        return self._push(OP_MUL, self._ref(a), self._ref(b))

    def sum(self, gs: Sequence[int]) -> int:
        gs = list(gs)
        if not gs:
            return self.const(0)
        acc = gs[0]
        for g in gs[1:]:
            acc = self.add(acc, g)
        return acc

    def product(self, gs: Sequence[int]) -> int:
        gs = list(gs)
        if not gs:
            return self.const(1)
        acc = gs[0]
        for g in gs[1:]:
            acc = self.mul(acc, g)
        return acc

    def set_output(self, g: int) -> None:
        self.fin = FIN_OUT
        self.outputs = [self._ref(g)]
        self._compiled = None

    def set_matrix(self, entries: Sequence[int | None], dim: int, pfaffian: bool = False) -> None:
        """Finish with det (or char-2 Pfaffian) of a dim x dim matrix of gates; None is zero."""
        if len(entries) != dim * dim:
            raise UsageError("matrix finaliser needs dim*dim entries")
        self.fin = FIN_PF if pfaffian else FIN_DET
        self.dim = dim
        self.outputs = [self._ref(g) if g is not None else -1 for g in entries]
        self._compiled = None

    @property
    def output(self) -> int:
        if self.fin != FIN_OUT:
            raise UsageError("circuit ends in a matrix finaliser")
        return self.outputs[0] if self.outputs else len(self.gates) - 1

    def is_skew(self) -> bool:
        """Every product gate has an input gate as one of its operands."""
        for op, a, b in self.gates:
            if op == OP_MUL and self.gates[a][0] != OP_INPUT and self.gates[b][0] != OP_INPUT:
                return False
        return True

    def degree(self) -> int:
        """Formal degree bound of the output."""
        deg = []
        for op, a, b in self.gates:
            if op == OP_CONST:
                deg.append(0)
            elif op == OP_INPUT:
                deg.append(1)
            elif op == OP_MUL:
                deg.append(deg[a] + deg[b])
            else:
                deg.append(max(deg[a], deg[b]))
        if self.fin == FIN_OUT:
            return deg[self.output] if self.gates else 0
        dim = self.dim
        rows = [max((deg[g] for g in self.outputs[i * dim:(i + 1) * dim] if g >= 0), default=0)
                for i in range(dim)]
        total = sum(rows)
        return total // 2 if self.fin == FIN_PF else total

    def last_use(self) -> list[int]:
        """For each gate, the index of the last gate reading it (or its own index)."""
        last = list(range(len(self.gates)))
        for g, (op, a, b) in enumerate(self.gates):
            if op in (OP_ADD, OP_MUL, OP_SUB):
                last[a] = g
                last[b] = g
        if self.fin == FIN_OUT:
            if self.gates:
                last[self.output] = len(self.gates)
        else:
            for g in self.outputs:
                if g >= 0:
                    last[g] = len(self.gates)
        return last

    def compiled(self) -> tuple:
        if self._compiled is None:
            if not self.gates:
                self.const(0)
            op = np.array([g[0] for g in self.gates], dtype=np.int32)
            a = np.array([g[1] if g[0] != OP_CONST else 0 for g in self.gates], dtype=np.int32)
            b = np.array([g[2] for g in self.gates], dtype=np.int32)
            cst = np.array([g[1] if g[0] == OP_CONST else 0 for g in self.gates], dtype=np.uint64)
            outs = self.outputs if self.fin != FIN_OUT else [self.output]
            out = np.array(outs or [-1], dtype=np.int32)
            self._compiled = (op, a, b, cst, self.fin, self.dim, out)
        return self._compiled

    def evaluate(self, point: Sequence[int]) -> int:
        if len(point) != self.arity:
            raise UsageError(f"point has {len(point)} coordinates, circuit arity is {self.arity}")
        if not self.gates:
            # every matrix entry is zero: only the empty determinant is nonzero
            return 1 if self.fin != FIN_OUT and self.dim == 0 else 0
        return K.program_value(self.field.fs, self.compiled(), list(point))

    def to_text(self) -> str:
        if self.fin != FIN_OUT:
            raise UsageError("only single-output circuits have a text form")
        F = self.field
        lines = [F.header(), f"circuit {self.arity} {len(self.gates)}"]
        for op, a, b in self.gates:
            if op == OP_INPUT:
                lines.append(f"in {a}")
            elif op == OP_CONST:
                lines.append(f"const {F.to_hex(a)}")
            else:
                lines.append(f"{_OPNAMES[op]} {a} {b}")
        return "\n".join(lines) + "\n"


def parse_circuit(lines: Sequence[str], field: Field, arity: int | None = None,
                  first_line: int = 1) -> Circuit:
    """Parse gate lines ``in <var>`` / ``const <hex>`` / ``add i j`` / ``mul i j``.

    Gates are numbered from 0 in file order; the last gate is the output.
    """
    parsed = []
    for off, raw in enumerate(lines):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        lineno = first_line + off
        try:
            if parts[0] == "in" and len(parts) == 2:
                parsed.append((OP_INPUT, int(parts[1]), 0, lineno))
            elif parts[0] == "const" and len(parts) == 2:
                parsed.append((OP_CONST, field.from_hex(parts[1]), 0, lineno))
            elif parts[0] in ("add", "mul", "sub") and len(parts) == 3:
                op = {"add": OP_ADD, "mul": OP_MUL, "sub": OP_SUB}[parts[0]]
                parsed.append((op, int(parts[1]), int(parts[2]), lineno))
            else:
                raise ParseError(f"unknown gate {line!r}", lineno)
        except ValueError:
            raise ParseError(f"bad gate {line!r}", lineno) from None
    if not parsed:
        raise ParseError("circuit has no gates", first_line)
    n = arity if arity is not None else 1 + max((a for op, a, _, _ in parsed if op == OP_INPUT), default=-1)
    c = Circuit(field, n)
    for g, (op, a, b, lineno) in enumerate(parsed):
        if op == OP_INPUT:
            if not 0 <= a < n:
                raise ParseError(f"variable {a} outside arity {n}", lineno)
            c._push(OP_INPUT, a)
        elif op == OP_CONST:
            c._push(OP_CONST, a)
        else:
            if not (0 <= a < g and 0 <= b < g):
                raise ParseError(f"gate {g} reads a gate that is not defined before it", lineno)
            c._push(op, a, b)
    c.set_output(len(c.gates) - 1)
    return c


def parse_circuit_text(text: str, field: Field, arity: int | None = None) -> Circuit:
    """Parse a circuit file: an optional field header and ``circuit <arity> <gates>``
    line (as written by :meth:`Circuit.to_text`), then gate lines.  A header
    field must match ``field``."""
    lines = text.splitlines()
    start = 0
    content = [(i, ln.split("#", 1)[0].split()) for i, ln in enumerate(lines)]
    content = [(i, p) for i, p in content if p]
    if content and content[0][1][0] == "field":
        i, _ = content.pop(0)
        declared = parse_field_header(lines[i].split("#", 1)[0].strip(), i + 1)
        if declared != field:
            raise ParseError(f"circuit is over {declared.label}, expected {field.label}", i + 1)
        start = i + 1
    gates = None
    if content and content[0][1][0] == "circuit":
        i, parts = content.pop(0)
        if len(parts) != 3:
            raise ParseError("expected 'circuit <arity> <gates>'", i + 1)
        try:
            declared_arity, gates = int(parts[1]), int(parts[2])
        except ValueError:
            raise ParseError("circuit sizes must be integers", i + 1) from None
        if arity is not None and arity != declared_arity:
            raise ParseError(f"circuit arity {declared_arity} differs from the requested {arity}", i + 1)
        arity = declared_arity
        start = i + 1
    c = parse_circuit(lines[start:], field, arity, first_line=start + 1)
    if gates is not None and len(c.gates) != gates:
        raise ParseError(f"header promises {gates} gates, found {len(c.gates)}", start)
    return c


def check_strong_monotonicity(circuit: Circuit, max_vars: int = MONOTONE_CHECK_MAX_VARS) -> bool:
    """Exponential reference check that a circuit is strongly monotone.

    Tracks the monomial support family of every gate: all monomials must be
    multilinear, the two inputs of a sum must have disjoint families, and a
    product must produce pairwise distinct unions.
    """
    if circuit.arity > max_vars:
        raise CapacityError(f"monotonicity check is capped at {max_vars} variables")
    if circuit.fin != FIN_OUT:
        return False
    fam: list[frozenset] = []
    for op, a, b in circuit.gates:
        if op == OP_CONST:
            fam.append(frozenset([frozenset()]) if a else frozenset())
        elif op == OP_INPUT:
            fam.append(frozenset([frozenset([a])]))
        elif op in (OP_ADD, OP_SUB):
            if fam[a] & fam[b]:
                return False
            fam.append(fam[a] | fam[b])
        else:
            out = set()
            for S in fam[a]:
                for T in fam[b]:
                    if S & T:
                        return False
                    U = S | T
                    if U in out:
                        return False
                    out.add(U)
            fam.append(frozenset(out))
    return True


class PolyOracle:
    """Evaluation oracle for a polynomial in ``arity`` variables.

    ``degree`` is an upper bound on the total degree; ``homogeneous`` means
    every monomial has total degree exactly ``degree``.  ``evals`` counts
    calls.
    """

    def __init__(self, field: Field, arity: int, degree: int,
                 fn: Callable[[Sequence[int]], int] | None = None, *,
                 homogeneous: bool = False, circuit: Circuit | None = None, name: str = ""):
        if fn is None and circuit is None:
            raise UsageError("an oracle needs an evaluation function or a circuit")
        if circuit is not None and circuit.arity != arity:
            raise UsageError("circuit arity does not match the oracle")
        self.field = field
        self.arity = arity
        self.degree = degree
        self.homogeneous = homogeneous
        self.circuit = circuit
        self.name = name
        self.evals = 0
        self._fn = fn

    def __repr__(self) -> str:
        return f"PolyOracle({self.name or 'anon'}, arity={self.arity}, degree={self.degree})"

    def __call__(self, point: Sequence[int]) -> int:
        if len(point) != self.arity:
            raise UsageError(f"point has {len(point)} coordinates, oracle arity is {self.arity}")
        self.evals += 1
        if self._fn is not None:
            return self._fn(point)
        return self.circuit.evaluate(point)

    def reset(self) -> None:
        self.evals = 0

    def flatten(self):
        """(circuit oracle, extraction axes, oracle chain) when compilable, else None."""
        if self._fn is None and self.circuit is not None:
            return self, [], [self]
        return None

    @classmethod
    def from_circuit(cls, circuit: Circuit, degree: int | None = None, *,
                     homogeneous: bool = False, name: str = "") -> "PolyOracle":
        return cls(circuit.field, circuit.arity, circuit.degree() if degree is None else degree,
                   circuit=circuit, homogeneous=homogeneous, name=name)


@lru_cache(maxsize=256)
def _lagrange_weights(fs: tuple, points: tuple[int, ...], t: int) -> tuple[int, ...]:
    # weights w with  coeff_t(f) = sum_a w_a f(points[a])  for deg f < len(points)
    mul, inv = K.mul, K.inv
    prime = fs[0] == 1
    p = fs[3]

    def sub(a, b):
        return (a - b) % p if prime else a ^ b

    def add(a, b):
        return (a + b) % p if prime else a ^ b

    N = [1]
    for zb in points:
        nxt = [0] * (len(N) + 1)
        for i, c in enumerate(N):
            nxt[i + 1] = add(nxt[i + 1], c)
            nxt[i] = sub(nxt[i], mul(fs, c, zb))
        N = nxt
    out = []
    D = len(points)
    for za in points:
        # synthetic division N(z) / (z - za)
        q = [0] * D
        carry = 0
        for i in range(D, 0, -1):
            carry = add(N[i], mul(fs, carry, za)) if i < D else N[i]
            q[i - 1] = carry
        denom = 1
        for zb in points:
            if zb != za:
                denom = mul(fs, denom, sub(za, zb))
        out.append(mul(fs, q[t], inv(fs, denom)) if t < D else 0)
    return tuple(out)


def lagrange_weights(field: Field, points: Sequence[int], t: int) -> list[int]:
    return list(_lagrange_weights(field.fs, tuple(points), t))


def interpolation_points(field: Field, degree: int) -> list[int]:
    """degree + 1 canonical points; raises CapacityError if the field is too small."""
    return field.enumerate_points(degree + 1)


class CoeffOracle(PolyOracle):
    """Coefficient of ``var^t`` in ``base``; the slot ``var`` of a point is ignored."""

    def __init__(self, base: PolyOracle, var: int, t: int, var_degree: int | None = None):
        if not 0 <= var < base.arity:
            raise UsageError(f"variable {var} outside arity {base.arity}")
        D = base.degree if var_degree is None else var_degree
        super().__init__(base.field, base.arity, max(base.degree - t, 0), self._eval,
                         name=f"coeff[{var}^{t}]({base.name})")
        self.base = base
        self.var = var
        self.t = t
        self.points = interpolation_points(base.field, D)
        self.weights = lagrange_weights(base.field, self.points, t)

    def _eval(self, point: Sequence[int]) -> int:
        F = self.field
        pt = list(point)
        acc = 0
        for z, w in zip(self.points, self.weights):
            pt[self.var] = z
            v = self.base(pt)
            if w:
                acc = F.add(acc, F.mul(w, v))
        return acc

    def flatten(self):
        inner = self.base.flatten()
        if inner is None:
            return None
        top, axes, chain = inner
        return top, [(self.var, self.points, self.weights)] + axes, [self] + chain


def coeff_extract(p: PolyOracle, var: int, t: int, var_degree: int | None = None) -> CoeffOracle:
    """Oracle for the coefficient of ``x_var^t``; costs var_degree + 1 evaluations of p."""
    return CoeffOracle(p, var, t, var_degree)


class HomogeneousPart(PolyOracle):
    """Weighted-degree-t part of ``base``: x_i is scaled by z^weights[i], then z^t is extracted."""

    def __init__(self, base: PolyOracle, t: int, weights: Sequence[int] | None = None):
        weights = list(weights) if weights is not None else [1] * base.arity
        if len(weights) != base.arity:
            raise UsageError("one weight per variable")
        D = base.degree * max(weights, default=0)
        super().__init__(base.field, base.arity, t if all(w >= 1 for w in weights) else base.degree,
                         self._eval, homogeneous=all(w == 1 for w in weights),
                         name=f"part[{t}]({base.name})")
        self.base = base
        self.t = t
        self.wts = weights
        self.points = interpolation_points(base.field, D)
        self.weights = lagrange_weights(base.field, self.points, t)

    def _eval(self, point: Sequence[int]) -> int:
        F = self.field
        acc = 0
        for z, w in zip(self.points, self.weights):
            pt = [F.mul(F.pow(z, g), x) for x, g in zip(point, self.wts)]
            v = self.base(pt)
            if w:
                acc = F.add(acc, F.mul(w, v))
        return acc


def homogeneous_part(p: PolyOracle, t: int, weights: Sequence[int] | None = None) -> HomogeneousPart:
    return HomogeneousPart(p, t, weights)


class SubsetSieve(PolyOracle):
    """Part of ``base`` made of monomials divisible by every variable in T."""

    def __init__(self, base: PolyOracle, T: Sequence[int]):
        T = list(T)
        if len(set(T)) != len(T) or any(not 0 <= i < base.arity for i in T):
            raise UsageError("T must be distinct variable indices")
        super().__init__(base.field, base.arity, base.degree, self._eval, name=f"sieve({base.name})")
        self.base = base
        self.T = T

    def _eval(self, point: Sequence[int]) -> int:
        F = self.field
        acc = 0
        for r in range(len(self.T) + 1):
            for I in itertools.combinations(self.T, r):
                pt = list(point)
                for i in I:
                    pt[i] = 0
                v = self.base(pt)
                acc = F.sub(acc, v) if r % 2 else F.add(acc, v)
        return acc


def subset_sieve(p: PolyOracle, T: Sequence[int]) -> SubsetSieve:
    """Inclusion-exclusion over T; costs 2^|T| evaluations of p."""
    return SubsetSieve(p, T)


def substitute(p: PolyOracle, arity: int, degree: int, fn: Callable[[Sequence[int]], list[int]],
               name: str = "") -> PolyOracle:
    """Oracle for p(fn(x)), where fn maps a point of the new arity to a point of p."""
    return PolyOracle(p.field, arity, degree, lambda pt: p(fn(pt)), name=name or f"subst({p.name})")
