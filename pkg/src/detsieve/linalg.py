"""Dense matrices over a :class:`~detsieve.field.Field`."""

from __future__ import annotations

from collections.abc import Iterable, Sequence

import numpy as np

from . import _kernels as K
from .errors import ParseError, StructureError, UnsupportedOperation, UsageError
from .field import Field, parse_field_header


class Matrix:
    """Row-major dense matrix with int entries in ``field``."""

    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field: Field, rows: int, cols: int, data: Sequence[int] | None = None):
        self.field = field
        self.rows = rows
        self.cols = cols
        if data is None:
            self.data = [0] * (rows * cols)
        else:
            if len(data) != rows * cols:
                raise UsageError(f"expected {rows * cols} entries, got {len(data)}")
            self.data = list(data)

    @classmethod
    def from_rows(cls, field: Field, rows: Sequence[Sequence[int]], cols: int | None = None) -> "Matrix":
        rows = [list(r) for r in rows]
        ncols = cols if cols is not None else (len(rows[0]) if rows else 0)
        if any(len(r) != ncols for r in rows):
            raise UsageError("ragged rows")
        return cls(field, len(rows), ncols, [v for r in rows for v in r])

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        m = cls(field, n, n)
        for i in range(n):
            m.data[i * n + i] = 1
        return m

    @classmethod
    def random(cls, field: Field, rows: int, cols: int, gen: np.random.Generator) -> "Matrix":
        return cls(field, rows, cols, field.random_vector(gen, rows * cols))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.data[i * self.cols + j]

    def __setitem__(self, ij: tuple[int, int], v: int) -> None:
        i, j = ij
        self.data[i * self.cols + j] = v

    def row(self, i: int) -> list[int]:
        return self.data[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> list[int]:
        return self.data[j::self.cols]

    def to_rows(self) -> list[list[int]]:
        return [self.row(i) for i in range(self.rows)]

    def copy(self) -> "Matrix":
        return Matrix(self.field, self.rows, self.cols, self.data)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Matrix) and self.field == other.field and self.rows == other.rows
                and self.cols == other.cols and self.data == other.data)

    def __repr__(self) -> str:
        return f"Matrix({self.field!r}, {self.rows}x{self.cols})"

    def transpose(self) -> "Matrix":
        return Matrix(self.field, self.cols, self.rows,
                      [self.data[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)])

    def matmul(self, other: "Matrix") -> "Matrix":
        if self.field != other.field:
            raise UsageError("matrices over different fields")
        if self.cols != other.rows:
            raise UsageError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        F = self.field
        out = []
        ocols = [other.col(j) for j in range(other.cols)]
        for i in range(self.rows):
            r = self.row(i)
            for c in ocols:
                s = 0
                for a, b in zip(r, c):
                    if a and b:
                        s = F.add(s, F.mul(a, b))
                out.append(s)
        return Matrix(F, self.rows, other.cols, out)

    __matmul__ = matmul

    def columns(self, cols: Iterable[int]) -> "Matrix":
        cols = list(cols)
        return Matrix(self.field, self.rows, len(cols),
                      [self.data[i * self.cols + j] for i in range(self.rows) for j in cols])

    def submatrix(self, rows: Iterable[int], cols: Iterable[int]) -> "Matrix":
        rows, cols = list(rows), list(cols)
        return Matrix(self.field, len(rows), len(cols),
                      [self.data[i * self.cols + j] for i in rows for j in cols])

    def vstack(self, other: "Matrix") -> "Matrix":
        if self.cols != other.cols or self.field != other.field:
            raise UsageError("vstack needs equal column counts over one field")
        return Matrix(self.field, self.rows + other.rows, self.cols, self.data + other.data)

    def scale_columns(self, scalars: Sequence[int]) -> "Matrix":
        F = self.field
        return Matrix(F, self.rows, self.cols,
                      [F.mul(v, scalars[idx % self.cols]) for idx, v in enumerate(self.data)])

    def det_rank(self) -> tuple[int, int]:
        """Determinant (0 for non-square input) and rank by Gaussian elimination."""
        return K.det_rank(self.field.fs, self.data, self.rows, self.cols)

    def det(self) -> int:
        if self.rows != self.cols:
            raise UsageError("determinant of a non-square matrix")
        return self.det_rank()[0]

    def rank(self) -> int:
        return self.det_rank()[1]

    def check_alternating(self) -> None:
        """Char-2 alternating: square, symmetric, zero diagonal."""
        n = self.rows
        if n != self.cols:
            raise StructureError("Pfaffian of a non-square matrix")
        for i in range(n):
            if self.data[i * n + i]:
                raise StructureError(f"nonzero diagonal entry at ({i}, {i})")
            for j in range(i + 1, n):
                if self.data[i * n + j] != self.data[j * n + i]:
                    raise StructureError(f"asymmetric entries at ({i}, {j})")

    def pfaffian(self) -> int:
        """Pfaffian in characteristic 2 as the square root of the determinant."""
        if self.field.characteristic != 2:
            raise UnsupportedOperation("the Pfaffian is provided in characteristic 2 only")
        self.check_alternating()
        if self.rows % 2:
            return 0
        return self.field.sqrt(self.det())

    def rref(self) -> tuple["Matrix", list[int]]:
        """Reduced row echelon form and pivot columns."""
        F = self.field
        R, C = self.rows, self.cols
        M = [self.row(i) for i in range(R)]
        pivots = []
        r = 0
        for c in range(C):
            if r >= R:
                break
            piv = next((i for i in range(r, R) if M[i][c]), None)
            if piv is None:
                continue
            M[r], M[piv] = M[piv], M[r]
            inv = F.inv(M[r][c])
            M[r] = [F.mul(inv, v) for v in M[r]]
            for i in range(R):
                a = M[i][c]
                if i != r and a:
                    M[i] = [F.sub(x, F.mul(a, y)) for x, y in zip(M[i], M[r])]
            pivots.append(c)
            r += 1
        return Matrix.from_rows(F, M, C), pivots

    def row_basis(self) -> "Matrix":
        """Nonzero rows of the echelon form: same row space, full row rank."""
        data, r = K.row_echelon(self.field.fs, self.data, self.rows, self.cols)
        return Matrix(self.field, r, self.cols, data[:r * self.cols])

    def to_text(self) -> str:
        lines = [f"matrix {self.rows} {self.cols}"]
        for i in range(self.rows):
            lines.append(" ".join(self.field.to_hex(v) for v in self.row(i)))
        return "\n".join(lines) + "\n"


def _content_lines(text: str) -> list[tuple[int, list[str]]]:
    out = []
    for n, raw in enumerate(text.splitlines(), 1):
        parts = raw.split("#", 1)[0].split()
        if parts:
            out.append((n, parts))
    return out


def _read_entries(field: Field, lines: list[tuple[int, list[str]]], count: int, after: int):
    """Take ``count`` hex entries from the token stream; returns (entries, rest)."""
    entries: list[int] = []
    rest = list(lines)
    while len(entries) < count:
        if not rest:
            raise ParseError(f"expected {count} entries, found {len(entries)}", after)
        lineno, parts = rest.pop(0)
        take = parts[:count - len(entries)]
        for tok in take:
            try:
                entries.append(field.from_hex(tok))
            except (ValueError, UsageError, ParseError):
                raise ParseError(f"bad field element {tok!r}", lineno) from None
        if len(take) < len(parts):
            rest.insert(0, (lineno, parts[len(take):]))
    return entries, rest


def parse_matrix(text: str) -> Matrix:
    """Read a field header, ``matrix <rows> <cols>`` and row-major hex entries."""
    lines = _content_lines(text)
    if not lines:
        raise ParseError("empty matrix file", 1)
    field = parse_field_header(" ".join(lines[0][1]), lines[0][0])
    if len(lines) < 2 or lines[1][1][0] != "matrix" or len(lines[1][1]) != 3:
        raise ParseError("expected 'matrix <rows> <cols>'", lines[1][0] if len(lines) > 1 else lines[0][0])
    lineno = lines[1][0]
    try:
        rows, cols = int(lines[1][1][1]), int(lines[1][1][2])
    except ValueError:
        raise ParseError("matrix dimensions must be integers", lineno) from None
    entries, rest = _read_entries(field, lines[2:], rows * cols, lineno)
    if rest:
        raise ParseError("trailing content after the matrix entries", rest[0][0])
    return Matrix(field, rows, cols, entries)
