"""Linear matroids: representations, constructors and randomized transforms."""

from __future__ import annotations

import itertools
from collections.abc import Hashable, Iterable, Sequence
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, ParseError, SpecError, UsageError
from .field import Field, parse_field_header
from .linalg import Matrix, _content_lines, _read_entries

# Randomized transforms are redrawn when the rank check fails this many times.
MAX_REDRAWS = 32


class LinearMatroid:
    """The column matroid of ``rep``; column j is the ground element ``labels[j]``."""

    def __init__(self, rep: Matrix, labels: Sequence[Hashable] | None = None):
        self.rep = rep
        self.labels = list(labels) if labels is not None else list(range(rep.cols))
        if len(self.labels) != rep.cols:
            raise UsageError(f"{len(self.labels)} labels for {rep.cols} columns")
        self.index = {lab: j for j, lab in enumerate(self.labels)}
        if len(self.index) != len(self.labels):
            raise UsageError("duplicate ground-set labels")
        self._rank: int | None = None

    @property
    def field(self) -> Field:
        return self.rep.field

    @property
    def n(self) -> int:
        return self.rep.cols

    @property
    def rows(self) -> int:
        return self.rep.rows

    @property
    def rank(self) -> int:
        if self._rank is None:
            self._rank = self.rep.rank()
        return self._rank

    def __repr__(self) -> str:
        return f"LinearMatroid(rank={self.rank}, n={self.n}, field={self.field!r})"

    def cols_of(self, S: Iterable[Hashable]) -> list[int]:
        try:
            return [self.index[s] for s in S]
        except KeyError as exc:
            raise UsageError(f"{exc.args[0]!r} is not in the ground set") from None

    def rank_of(self, S: Iterable[Hashable]) -> int:
        cols = self.cols_of(S)
        if not cols:
            return 0
        return self.rep.columns(cols).rank()

    def is_independent(self, S: Iterable[Hashable]) -> bool:
        S = list(S)
        return len(set(S)) == len(S) and self.rank_of(S) == len(S)

    def is_basis(self, S: Iterable[Hashable]) -> bool:
        S = list(S)
        return len(S) == self.rank and self.is_independent(S)

    def bases(self) -> list[tuple]:
        """All bases, by exhaustive search (small ground sets only)."""
        return [B for B in itertools.combinations(self.labels, self.rank) if self.is_independent(B)]

    def independent_sets(self) -> list[tuple]:
        out = []
        for r in range(self.rank + 1):
            out.extend(S for S in itertools.combinations(self.labels, r) if self.is_independent(S))
        return out

    def column(self, label: Hashable) -> list[int]:
        return self.rep.col(self.index[label])

    # transforms

    def reduced(self) -> "LinearMatroid":
        """Same matroid with a full-row-rank representation."""
        if self.rows == self.rank:
            return self
        return LinearMatroid(self.rep.row_basis(), self.labels)

    def dual(self) -> "LinearMatroid":
        """Dual via [I | D] -> [-D^T | I] on the reduced representation."""
        F = self.field
        R, pivots = self.rep.rref()
        r = len(pivots)
        nonpiv = [j for j in range(self.n) if j not in set(pivots)]
        out = Matrix(F, len(nonpiv), self.n)
        for t, q in enumerate(nonpiv):
            for i, pc in enumerate(pivots):
                out[t, pc] = F.neg(R[i, q])
            out[t, q] = 1
        dual = LinearMatroid(out, self.labels)
        dual._rank = self.n - r
        return dual

    def truncate(self, k: int, gen: np.random.Generator) -> "LinearMatroid":
        """Rank-k truncation by a random k x rows left multiplier.

        Asking for k at or above the rank keeps the matroid and pads the
        representation with zero rows, so it always has exactly k rows.
        """
        if k < 0:
            raise SpecError("truncation rank must be non-negative")
        base = self.reduced()
        r = base.rows
        if k >= r:
            pad = Matrix(self.field, k - r, self.n)
            out = LinearMatroid(base.rep.vstack(pad), self.labels)
            out._rank = r
            return out
        for _ in range(MAX_REDRAWS):
            T = Matrix.random(self.field, k, r, gen)
            cand = LinearMatroid(T.matmul(base.rep), self.labels)
            if cand.rank == k:
                return cand
        raise CapacityError("truncation kept failing the rank check; the field is too small")

    def extend(self, d: int, gen: np.random.Generator) -> "LinearMatroid":
        """Append d uniformly random rows (union with a random rank-d uniform matroid)."""
        base = self.reduced()
        target = min(base.rows + d, self.n)
        for _ in range(MAX_REDRAWS):
            extra = Matrix.random(self.field, d, self.n, gen)
            cand = LinearMatroid(base.rep.vstack(extra), self.labels)
            if cand.rank == target:
                return cand
        raise CapacityError("extension kept failing the rank check; the field is too small")

    def direct_sum(self, other: "LinearMatroid") -> "LinearMatroid":
        if self.field != other.field:
            raise UsageError("direct sum of matroids over different fields")
        if set(self.labels) & set(other.labels):
            raise UsageError("direct sum needs disjoint ground sets")
        F = self.field
        out = Matrix(F, self.rows + other.rows, self.n + other.n)
        for i in range(self.rows):
            for j in range(self.n):
                out[i, j] = self.rep[i, j]
        for i in range(other.rows):
            for j in range(other.n):
                out[self.rows + i, self.n + j] = other.rep[i, j]
        return LinearMatroid(out, self.labels + other.labels)

    def union(self, other: "LinearMatroid", gen: np.random.Generator) -> "LinearMatroid":
        """Matroid union on a common ground set: stack both with random column scalings."""
        if self.labels != other.labels:
            other = other.restrict(self.labels)
        F = self.field
        a = self.rep.scale_columns([F.random_nonzero(gen) for _ in range(self.n)])
        b = other.rep.scale_columns([F.random_nonzero(gen) for _ in range(self.n)])
        return LinearMatroid(a.vstack(b), self.labels)

    def restrict(self, labels: Sequence[Hashable]) -> "LinearMatroid":
        return LinearMatroid(self.rep.columns(self.cols_of(labels)), list(labels))

    def parallel_copies(self, sources: Sequence[Hashable], labels: Sequence[Hashable]) -> "LinearMatroid":
        """Matroid on ``labels`` whose element t carries the column of ``sources[t]``.

        A source of ``None`` gives a zero column.
        """
        zero = [0] * self.rows
        cols = [self.column(s) if s is not None else zero for s in sources]
        rep = Matrix(self.field, self.rows, len(cols),
                     [cols[j][i] for i in range(self.rows) for j in range(len(cols))])
        return LinearMatroid(rep, labels)

    def to_text(self) -> str:
        lines = [self.field.header(), f"matroid {self.rows} {self.n}"]
        for i in range(self.rows):
            lines.append(" ".join(self.field.to_hex(v) for v in self.rep.row(i)))
        lines.append("labels " + " ".join(str(lab) for lab in self.labels))
        return "\n".join(lines) + "\n"


def _points(field: Field, n: int) -> list[int]:
    if n + 1 > field.order:
        raise CapacityError(f"{n} distinct nonzero points do not exist in {field!r}")
    return field.enumerate_points(n + 1)[1:]


def _vandermonde_into(M: Matrix, row0: int, k: int, cols: Sequence[int], alphas: Sequence[int]) -> None:
    F = M.field
    for j, a in zip(cols, alphas):
        v = 1
        for i in range(k):
            M[row0 + i, j] = v
            v = F.mul(v, a)


def uniform(n: int, k: int, field: Field, labels: Sequence[Hashable] | None = None) -> LinearMatroid:
    """U(k, n) from a k x n Vandermonde matrix on the points 1, 2, ..., n."""
    if not 0 <= k:
        raise SpecError("rank must be non-negative")
    rep = Matrix(field, k, n)
    _vandermonde_into(rep, 0, k, range(n), _points(field, n))
    m = LinearMatroid(rep, labels)
    m._rank = min(k, n)
    return m


def free(n: int, field: Field, labels: Sequence[Hashable] | None = None) -> LinearMatroid:
    return uniform(n, n, field, labels)


def partition(classes: Sequence[Sequence[Hashable]], caps: Sequence[int], field: Field) -> LinearMatroid:
    """Partition matroid: at most ``caps[c]`` elements from ``classes[c]``."""
    if len(classes) != len(caps):
        raise UsageError("one capacity per class")
    labels = [x for cls in classes for x in cls]
    caps = [min(c, len(cls)) for c, cls in zip(caps, classes)]
    if any(c < 0 for c in caps):
        raise SpecError("capacities must be non-negative")
    rep = Matrix(field, sum(caps), len(labels))
    row = col = 0
    for cls, cap in zip(classes, caps):
        _vandermonde_into(rep, row, cap, range(col, col + len(cls)), _points(field, len(cls)))
        row += cap
        col += len(cls)
    m = LinearMatroid(rep, labels)
    m._rank = sum(caps)
    return m


def graphic(n: int, edges: Sequence[tuple[int, int]], field: Field,
            labels: Sequence[Hashable] | None = None) -> LinearMatroid:
    """Cycle matroid of a graph on vertices 0..n-1 from its (signed) incidence matrix."""
    rep = Matrix(field, n, len(edges))
    for j, (u, v) in enumerate(edges):
        if u == v:
            continue
        rep[u, j] = 1
        rep[v, j] = field.neg(1)
    return LinearMatroid(rep, labels if labels is not None else list(range(len(edges))))


def cographic(n: int, edges: Sequence[tuple[int, int]], field: Field,
              labels: Sequence[Hashable] | None = None) -> LinearMatroid:
    """Bond matroid: the dual of the cycle matroid."""
    return graphic(n, edges, field, labels).dual()


def transversal(elements: Sequence[Hashable], neighbours: Sequence[Iterable[Hashable]],
                field: Field, gen: np.random.Generator) -> LinearMatroid:
    """Transversal matroid of a bipartite graph from elements to hidden vertices.

    Element j may be matched to any hidden vertex in ``neighbours[j]``; the
    representation has one row per hidden vertex with random nonzero entries
    at the incidences.
    """
    hidden = sorted({h for nb in neighbours for h in nb}, key=repr)
    rowof = {h: i for i, h in enumerate(hidden)}
    rep = Matrix(field, len(hidden), len(elements))
    for j, nb in enumerate(neighbours):
        for h in nb:
            rep[rowof[h], j] = field.random_nonzero(gen)
    return LinearMatroid(rep, elements)


def unit_vectors(labels: Sequence[Hashable], marked: Sequence[Hashable], field: Field) -> LinearMatroid:
    """Element ``marked[i]`` carries e_i, every other element the zero vector."""
    pos = {m: i for i, m in enumerate(marked)}
    rep = Matrix(field, len(marked), len(labels))
    for j, lab in enumerate(labels):
        if lab in pos:
            rep[pos[lab], j] = 1
    return LinearMatroid(rep, labels)


@dataclass(frozen=True)
class ColumnAssoc:
    """Column sets attached to the variables of a polynomial.

    ``sets[i]`` lists the matroid columns of variable i; an empty tuple marks
    an unlabelled variable, which sieving replaces by a random scalar.
    """

    sets: tuple[tuple[int, ...], ...]

    @classmethod
    def identity(cls, n: int) -> "ColumnAssoc":
        return cls(tuple((i,) for i in range(n)))

    @classmethod
    def of(cls, sets: Iterable[Iterable[int] | None]) -> "ColumnAssoc":
        return cls(tuple(tuple(s) if s is not None else () for s in sets))

    def __len__(self) -> int:
        return len(self.sets)

    def validate(self, n_vars: int, n_cols: int) -> None:
        if len(self.sets) != n_vars:
            raise UsageError(f"association covers {len(self.sets)} variables, polynomial has {n_vars}")
        seen: set[int] = set()
        for i, cols in enumerate(self.sets):
            for q in cols:
                if not 0 <= q < n_cols:
                    raise UsageError(f"variable {i}: column {q} out of range")
                if q in seen:
                    raise UsageError(f"column {q} is associated with more than one variable")
                seen.add(q)


def _label(tok: str) -> Hashable:
    try:
        return int(tok)
    except ValueError:
        return tok


def parse_matroid(text: str) -> LinearMatroid:
    """Read a field header, ``matroid <k> <n>``, k rows of hex entries and an
    optional ``labels`` line (default labels 0..n-1)."""
    lines = _content_lines(text)
    if not lines:
        raise ParseError("empty matroid file", 1)
    field = parse_field_header(" ".join(lines[0][1]), lines[0][0])
    if len(lines) < 2 or lines[1][1][0] != "matroid" or len(lines[1][1]) != 3:
        raise ParseError("expected 'matroid <k> <n>'", lines[1][0] if len(lines) > 1 else lines[0][0])
    lineno = lines[1][0]
    try:
        k, n = int(lines[1][1][1]), int(lines[1][1][2])
    except ValueError:
        raise ParseError("matroid dimensions must be integers", lineno) from None
    body = [ln for ln in lines[2:] if ln[1][0] != "labels"]
    label_lines = [ln for ln in lines[2:] if ln[1][0] == "labels"]
    entries, rest = _read_entries(field, body, k * n, lineno)
    if rest:
        raise ParseError("trailing content after the representation", rest[0][0])
    labels = None
    if label_lines:
        lab_no, parts = label_lines[0]
        labels = [_label(t) for t in parts[1:]]
        if len(labels) != n:
            raise ParseError(f"expected {n} labels, found {len(labels)}", lab_no)
        if len(set(labels)) != n:
            raise ParseError("duplicate labels", lab_no)
    return LinearMatroid(Matrix(field, k, n, entries), labels)
