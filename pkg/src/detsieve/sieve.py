"""Basis sieving and odd sieving over GF(2^w).

Both routines decide whether a polynomial, after attaching matroid columns to
its variables, has a monomial whose labelled variables pick out a basis.
Basis sieving requires the labelled part to be multilinear with support a
basis; odd sieving only requires the variables of odd degree to span.  A
``True`` answer is always correct; ``False`` is wrong with probability at
most ``failure_bound`` per trial.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from . import _kernels as K
from .errors import UnsupportedOperation, UsageError
from .field import Field
from .matroid import ColumnAssoc, LinearMatroid
from .polyoracle import PolyOracle, interpolation_points, lagrange_weights
from .rng import DEFAULT_SEED, stream

DEFAULT_EPSILON = Fraction(1, 1 << 20)

KIND_FIXED, KIND_BASIS, KIND_ODD, KIND_TRACKER = range(4)


@dataclass
class SieveReport:
    decision: bool
    trials: int
    p_evals: int
    failure_bound: Fraction
    seed: int
    mode: str = "basis"
    extra: dict = dc_field(default_factory=dict)

    def to_json(self) -> dict:
        return {"decision": self.decision, "trials": self.trials, "p_evals": self.p_evals,
                "failure_bound": str(self.failure_bound), "seed": self.seed, "mode": self.mode}


def default_trials(field: Field, epsilon: Fraction = DEFAULT_EPSILON) -> int:
    """One trial over GF(2^64); ceil(log2(1/epsilon)) trials over smaller fields."""
    if field.order >= 1 << 64:
        return 1
    return max(1, math.ceil(math.log2(1 / epsilon)))


def _require_char2(field: Field) -> None:
    if field.characteristic != 2:
        raise UnsupportedOperation(
            "inclusion-exclusion sieving needs characteristic 2; use the extensor evaluators")


def _resolve_assoc(p: PolyOracle, m: LinearMatroid, assoc: ColumnAssoc | Sequence | None) -> ColumnAssoc:
    if p.field != m.field:
        raise UsageError("polynomial and matroid live over different fields")
    if assoc is None:
        if p.arity != m.n:
            raise UsageError(f"no association given and arity {p.arity} != ground set size {m.n}")
        assoc = ColumnAssoc.identity(p.arity)
    elif not isinstance(assoc, ColumnAssoc):
        assoc = ColumnAssoc.of(assoc)
    assoc.validate(p.arity, m.n)
    return assoc


def _flat_gammas(assoc: ColumnAssoc) -> tuple[list[int], list[int]]:
    gptr, gcol = [0], []
    for cols in assoc.sets:
        gcol.extend(cols)
        gptr.append(len(gcol))
    return gptr, gcol


class _SieveSetup:
    """Everything about one sieve call that does not change between trials."""

    def __init__(self, p: PolyOracle, m: LinearMatroid, assoc, mode: str,
                 homogeneous: bool | None, z_degree: int | None):
        self.F = p.field
        _require_char2(self.F)
        self.p = p
        self.m = m
        self.assoc = _resolve_assoc(p, m, assoc)
        self.mode = mode
        self.k = m.rows
        self.gptr, self.gcol = _flat_gammas(self.assoc)
        gammas = [len(s) for s in self.assoc.sets]
        self.labelled = [i for i, g in enumerate(gammas) if g]
        gmax = max(gammas, default=0)
        flat = p.flatten()
        self.flat = flat
        tracked = {ax[0] for ax in flat[1]} if flat else set()
        if any(self.assoc.sets[v] for v in tracked):
            raise UsageError("a coefficient-extraction slot cannot carry matroid columns")
        self.tracked = tracked
        if mode == "basis":
            if homogeneous is None:
                homogeneous = (p.homogeneous and p.degree == self.k and gmax <= 1
                               and len(self.labelled) == p.arity)
            self.extract = not homogeneous
        else:
            self.extract = True
        D = z_degree if z_degree is not None else p.degree * gmax
        self.z_degree = D
        self.empty = self.extract and D < self.k
        if self.extract and not self.empty:
            self.zpts = interpolation_points(self.F, D)
            self.zw = lagrange_weights(self.F, self.zpts, self.k)
        else:
            self.zpts, self.zw = [1], [1]
        self.A = list(m.rep.data)

    def evals_per_trial(self) -> int:
        if self.empty:
            return 0
        return (1 << self.k) * len(self.zpts)

    def plan(self, s1: list[int], s2: list[int], y: list[int]) -> dict:
        nv = self.p.arity
        kinds = []
        labelled_kind = KIND_BASIS if self.mode in ("basis", "transform") else KIND_ODD
        for i in range(nv):
            if i in self.tracked:
                kinds.append(KIND_TRACKER)
            elif self.assoc.sets[i]:
                kinds.append(labelled_kind)
            else:
                kinds.append(KIND_FIXED)
        axes = self.flat[1] if self.flat else []
        axptr, axpts, axw = [0], [], []
        for _, pts, wts in axes:
            axpts.extend(pts)
            axw.extend(wts)
            axptr.append(len(axpts))
        return {"k": self.k, "N": self.m.n, "nv": nv, "A": self.A, "y": y, "kind": kinds,
                "s1": s1, "s2": s2, "gptr": self.gptr, "gcol": self.gcol,
                "nz": len(self.zpts), "zpts": self.zpts, "zw": self.zw,
                "zscale": 1 if self.extract else 0, "naxes": len(axes),
                "axvar": [a[0] for a in axes], "axptr": axptr, "axpts": axpts, "axw": axw}

    def run(self, s1: list[int], s2: list[int], y: list[int]) -> int:
        if self.empty:
            return 0
        plan = self.plan(s1, s2, y)
        if self.flat is not None:
            top, axes, chain = self.flat
            value = K.sieve_sum_program(self.F.fs, top.circuit.compiled(), plan)
            count = self.evals_per_trial()
            for layer, ax in zip(chain, axes + [None]):
                layer.evals += count
                if ax is not None:
                    count *= len(ax[1])
            return value
        plan["naxes"] = 0
        return K.sieve_sum_callback(self.F.fs, self.p, plan)


def _trial_inputs(setup: _SieveSetup, seed: int, path: Sequence[int], trial: int):
    gen = stream(seed, *path, trial)
    F = setup.F
    nv = setup.p.arity
    s1 = F.random_vector(gen, nv)
    s2 = F.random_vector(gen, nv)
    y = F.random_vector(gen, setup.k)
    return s1, s2, y


def _run_trials(setup: _SieveSetup, trials: int | None, seed: int, path: Sequence[int],
                bound: Fraction) -> SieveReport:
    trials = default_trials(setup.F) if trials is None else trials
    if trials < 1:
        raise UsageError("at least one trial is required")
    before = setup.p.evals
    done = 0
    decision = False
    for t in range(trials):
        done += 1
        if setup.run(*_trial_inputs(setup, seed, path, t)):
            decision = True
            break
    return SieveReport(decision, done, setup.p.evals - before, bound, seed, setup.mode,
                       {"z_points": len(setup.zpts), "rank": setup.k})


def basis_sieve(p: PolyOracle, m: LinearMatroid, assoc: ColumnAssoc | Sequence | None = None, *,
                trials: int | None = None, seed: int = DEFAULT_SEED, path: Sequence[int] = (),
                homogeneous: bool | None = None, z_degree: int | None = None) -> SieveReport:
    """Does p have a monomial, multilinear in the labelled variables, whose
    labelled support is a basis of the rank-k matroid m (k = rows of m)?

    Variable i carries the columns ``assoc.sets[i]`` (default: column i) and
    weight |Gamma_i|; the weight-k part is extracted by interpolation unless
    the oracle is homogeneous of degree k.  One trial costs 2^k evaluations of
    p, times (z_degree + 1) when extraction is needed.
    """
    setup = _SieveSetup(p, m, assoc, "basis", homogeneous, z_degree)
    bound = Fraction(2 * setup.k, setup.F.order)
    return _run_trials(setup, trials, seed, path, bound)


def odd_sieve(p: PolyOracle, m: LinearMatroid, assoc: ColumnAssoc | Sequence | None = None, *,
              trials: int | None = None, seed: int = DEFAULT_SEED, path: Sequence[int] = (),
              z_degree: int | None = None) -> SieveReport:
    """Does p have a monomial whose odd-degree labelled variables span m?

    Each labelled x_i becomes x_i'' (1 + z^gamma_i x_i' prod_q <y, A_q>); the
    coefficient of z^k is sieved over y.  One trial costs
    (z_degree + 1) 2^k evaluations, z_degree defaulting to degree(p) * max gamma.
    """
    setup = _SieveSetup(p, m, assoc, "odd", None, z_degree)
    bound = Fraction(p.degree + setup.k, setup.F.order)
    return _run_trials(setup, trials, seed, path, bound)


class SieveTransform(PolyOracle):
    """The sieved polynomial Q(X) = sum_I P_k(x_i prod_q L_q^{(I)}) for fixed random y."""

    def __init__(self, p: PolyOracle, m: LinearMatroid, assoc, seed: int, path: Sequence[int],
                 homogeneous: bool | None, z_degree: int | None):
        setup = _SieveSetup(p, m, assoc, "transform", homogeneous, z_degree)
        all_unit = all(len(s) == 1 for s in setup.assoc.sets)
        super().__init__(p.field, p.arity, setup.k if all_unit else p.degree, self._eval,
                         homogeneous=all_unit, name=f"transform({p.name})")
        self.setup = setup
        gen = stream(seed, *path)
        self.y = p.field.random_vector(gen, setup.k)
        self.failure_bound = Fraction(2 * setup.k, p.field.order)

    def _eval(self, point: Sequence[int]) -> int:
        return self.setup.run(list(point), [0] * len(point), self.y)


def sieve_transform(p: PolyOracle, m: LinearMatroid, assoc: ColumnAssoc | Sequence | None = None, *,
                    seed: int = DEFAULT_SEED, path: Sequence[int] = (),
                    homogeneous: bool | None = None, z_degree: int | None = None) -> SieveTransform:
    """Oracle that keeps the monomials of p whose labelled support is a basis of m,
    each scaled by det(A_support) times a fixed nonzero constant (w.h.p.).

    Each evaluation costs one sieve pass (2^k evaluations of p, times the
    extraction points when p is not homogeneous of degree k).
    """
    return SieveTransform(p, m, assoc, seed, path, homogeneous, z_degree)
