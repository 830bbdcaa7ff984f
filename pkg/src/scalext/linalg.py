"""Dense exact matrices and row reduction over any field whose elements
support ``+ - * /`` and compare equal to ``0``.

Scalars are never floats. Row reduction skips zero entries of the pivot row,
which keeps the block-sparse systems produced elsewhere in the package cheap.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence


class LinAlgError(ValueError):
    pass


class Matrix:
    """Immutable ``nrows x ncols`` matrix over ``field``."""

    __slots__ = ("field", "nrows", "ncols", "rows")

    def __init__(self, field, rows: Iterable[Iterable], ncols: int | None = None):
        rows = tuple(tuple(r) for r in rows)
        if ncols is None:
            if not rows:
                raise LinAlgError("ncols required for a matrix with no rows")
            ncols = len(rows[0])
        for r in rows:
            if len(r) != ncols:
                raise LinAlgError(f"ragged row of length {len(r)}, expected {ncols}")
        self.field = field
        self.nrows = len(rows)
        self.ncols = ncols
        self.rows = rows

    @classmethod
    def from_values(cls, field, rows, ncols: int | None = None) -> "Matrix":
        return cls(field, [[field(x) for x in r] for r in rows], ncols)

    @classmethod
    def zeros(cls, field, nrows: int, ncols: int) -> "Matrix":
        z = field.zero
        return cls(field, [[z] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, field, n: int) -> "Matrix":
        z, o = field.zero, field.one
        return cls(field, [[o if i == j else z for j in range(n)] for i in range(n)], n)

    @classmethod
    def from_columns(cls, field, columns: Sequence[Sequence], nrows: int) -> "Matrix":
        if not columns:
            return cls.zeros(field, nrows, 0)
        return cls(field, [[c[i] for c in columns] for i in range(nrows)], len(columns))

    @classmethod
    def block(
        cls,
        field,
        row_sizes: Sequence[int],
        col_sizes: Sequence[int],
        blocks: Mapping[tuple[int, int], "Matrix"],
    ) -> "Matrix":
        """Assemble a block matrix; absent blocks are zero."""
        roff = [0]
        for s in row_sizes:
            roff.append(roff[-1] + s)
        coff = [0]
        for s in col_sizes:
            coff.append(coff[-1] + s)
        z = field.zero
        out = [[z] * coff[-1] for _ in range(roff[-1])]
        for (bi, bj), m in blocks.items():
            if m.nrows != row_sizes[bi] or m.ncols != col_sizes[bj]:
                raise LinAlgError(
                    f"block ({bi},{bj}) has shape {m.shape}, "
                    f"expected {(row_sizes[bi], col_sizes[bj])}"
                )
            r0, c0 = roff[bi], coff[bj]
            for i, row in enumerate(m.rows):
                target = out[r0 + i]
                for j, x in enumerate(row):
                    if x:
                        target[c0 + j] = target[c0 + j] + x
        return cls(field, out, coff[-1])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.shape, self.rows))

    def __repr__(self):
        body = ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.rows)
        return f"Matrix({self.nrows}x{self.ncols}: [{body}])"

    def _check_same_shape(self, other):
        if self.shape != other.shape:
            raise LinAlgError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        return Matrix(
            self.field,
            [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)],
            self.ncols,
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        return Matrix(
            self.field,
            [[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)],
            self.ncols,
        )

    def __neg__(self) -> "Matrix":
        return Matrix(self.field, [[-a for a in r] for r in self.rows], self.ncols)

    def scale(self, c) -> "Matrix":
        return Matrix(self.field, [[c * a for a in r] for r in self.rows], self.ncols)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise LinAlgError(f"cannot multiply {self.shape} by {other.shape}")
        z = self.field.zero
        n = other.ncols
        brows = other.rows
        out = []
        for r in self.rows:
            acc = [z] * n
            for k, a in enumerate(r):
                if a:
                    for j, b in enumerate(brows[k]):
                        if b:
                            acc[j] = acc[j] + a * b
            out.append(acc)
        return Matrix(self.field, out, n)

    def apply(self, vec: Sequence) -> tuple:
        if len(vec) != self.ncols:
            raise LinAlgError(f"vector of length {len(vec)} for matrix {self.shape}")
        z = self.field.zero
        nz = [(j, v) for j, v in enumerate(vec) if v]
        out = []
        for r in self.rows:
            acc = z
            for j, v in nz:
                a = r[j]
                if a:
                    acc = acc + a * v
            out.append(acc)
        return tuple(out)

    @property
    def T(self) -> "Matrix":
        return Matrix(self.field, zip(*self.rows), self.nrows) if self.nrows else Matrix.zeros(
            self.field, self.ncols, 0
        )

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[tuple]:
        return [self.column(j) for j in range(self.ncols)]

    def is_zero(self) -> bool:
        return not any(x for r in self.rows for x in r)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix(self.field, [[self.rows[i][j] for j in cols] for i in rows], len(cols))

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.nrows != other.nrows:
            raise LinAlgError("hstack row mismatch")
        return Matrix(self.field, [r + s for r, s in zip(self.rows, other.rows)], self.ncols + other.ncols)

    def vstack(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.ncols:
            raise LinAlgError("vstack column mismatch")
        return Matrix(self.field, self.rows + other.rows, self.ncols)

    def kron(self, other: "Matrix") -> "Matrix":
        rows = []
        for r in self.rows:
            for s in other.rows:
                rows.append([a * b for a in r for b in s])
        return Matrix(self.field, rows, self.ncols * other.ncols)

    def power(self, k: int) -> "Matrix":
        out = Matrix.identity(self.field, self.nrows)
        for _ in range(k):
            out = out @ self
        return out


def _rref_rows(rows: list[list], width: int, pivot_cols: int):
    """In-place reduced row echelon form, pivoting only among the first
    ``pivot_cols`` columns. Returns the pivot column list."""
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(pivot_cols):
        if r == nrows:
            break
        pr = None
        for i in range(r, nrows):
            if rows[i][c]:
                pr = i
                break
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = 1 / rows[r][c]
        prow = [x * inv if x else x for x in rows[r]]
        rows[r] = prow
        nz = [j for j in range(c, width) if prow[j]]
        for i in range(nrows):
            if i != r:
                row = rows[i]
                f = row[c]
                if f:
                    for j in nz:
                        row[j] = row[j] - f * prow[j]
        pivots.append(c)
        r += 1
    return pivots


def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    rows = [list(r) for r in m.rows]
    piv = _rref_rows(rows, m.ncols, m.ncols)
    return Matrix(m.field, rows, m.ncols), piv


def rank(m: Matrix) -> int:
    if m.nrows == 0 or m.ncols == 0:
        return 0
    rows = [list(r) for r in m.rows]
    return len(_rref_rows(rows, m.ncols, m.ncols))


def kernel_basis(m: Matrix) -> list[tuple]:
    """Basis of ``{x : m x = 0}``, one vector per free column, each scaled
    so that its first nonzero coordinate is 1."""
    f = m.field
    z, o = f.zero, f.one
    n = m.ncols
    if m.nrows == 0:
        return [tuple(o if i == j else z for i in range(n)) for j in range(n)]
    rows = [list(r) for r in m.rows]
    piv = _rref_rows(rows, n, n)
    pivset = set(piv)
    basis = []
    for free in range(n):
        if free in pivset:
            continue
        v = [z] * n
        v[free] = o
        for r, pc in enumerate(piv):
            x = rows[r][free]
            if x:
                v[pc] = -x
        inv = o / next(c for c in v if c)
        basis.append(tuple(c * inv for c in v))
    return basis


def solve(a: Matrix, b: Sequence) -> tuple | None:
    """One solution of ``a x = b`` or ``None``."""
    x, _ = solve_with_certificate(a, b, want_certificate=False)
    return x


def solve_with_certificate(a: Matrix, b: Sequence, want_certificate: bool = True):
    """Return ``(x, None)`` with ``a x = b``, or ``(None, y)`` where ``y a = 0``
    and ``y . b != 0`` witnesses inconsistency."""
    f = a.field
    z, o = f.zero, f.one
    if len(b) != a.nrows:
        raise LinAlgError("right-hand side length mismatch")
    n = a.ncols
    rows = [list(r) + [bi] for r, bi in zip(a.rows, b)]
    piv = _rref_rows(rows, n + 1, n)
    for r in range(len(piv), len(rows)):
        if rows[r][n]:
            if not want_certificate:
                return None, None
            return None, _left_certificate(a, b)
    x = [z] * n
    for r, pc in enumerate(piv):
        x[pc] = rows[r][n]
    return tuple(x), None


def _left_certificate(a: Matrix, b: Sequence) -> tuple:
    f = a.field
    z, o = f.zero, f.one
    m, n = a.nrows, a.ncols
    rows = [list(r) + [bi] + [o if i == k else z for k in range(m)] for i, (r, bi) in enumerate(zip(a.rows, b))]
    piv = _rref_rows(rows, n + 1 + m, n)
    for r in range(len(piv), m):
        if rows[r][n]:
            return tuple(rows[r][n + 1:])
    raise LinAlgError("system is consistent; no certificate exists")


def inverse(m: Matrix) -> Matrix:
    if m.nrows != m.ncols:
        raise LinAlgError("only square matrices are invertible")
    f = m.field
    n = m.nrows
    ident = Matrix.identity(f, n)
    rows = [list(r) + list(e) for r, e in zip(m.rows, ident.rows)]
    piv = _rref_rows(rows, 2 * n, n)
    if len(piv) < n:
        raise LinAlgError("matrix is singular")
    return Matrix(f, [r[n:] for r in rows], n)


def extend_to_basis(field, span: Sequence[Sequence], candidates: Sequence[Sequence], dim: int) -> list[int]:
    """Indices of ``candidates`` that greedily extend ``span`` to a larger
    independent set, in input order."""
    rows: list[list] = []
    width = dim
    if width == 0:
        return []
    for v in span:
        rows.append(list(v))
    base = len(_rref_rows(rows, width, width)) if rows else 0
    rows = rows[:base]
    chosen = []
    for idx, c in enumerate(candidates):
        trial = [list(r) for r in rows] + [list(c)]
        if len(_rref_rows(trial, width, width)) > len(rows):
            rows = trial[: len(rows) + 1]
            chosen.append(idx)
    return chosen


class SubspaceCoordinates:
    """Coordinates with respect to a full-column-rank basis matrix.

    ``coords(v)`` reads the pivot rows of ``v`` and checks the reconstruction,
    so a vector outside the span raises ``LinAlgError``.
    """

    def __init__(self, basis: Matrix):
        self.basis = basis
        f = basis.field
        k = basis.ncols
        rows = [list(r) for r in basis.T.rows] if k else []
        piv = _rref_rows(rows, basis.nrows, basis.nrows) if k else []
        if len(piv) != k:
            raise LinAlgError("basis columns are dependent")
        self.pivot_rows = piv
        self._inv = inverse(basis.submatrix(piv, range(k))) if k else Matrix.zeros(f, 0, 0)

    def projector(self) -> Matrix:
        """Matrix ``P`` with ``P v`` = coordinates, for ``v`` in the span."""
        f = self.basis.field
        n = self.basis.nrows
        k = self.basis.ncols
        z = f.zero
        sel = [[z] * n for _ in range(k)]
        for c, r in enumerate(self.pivot_rows):
            sel[c][r] = f.one
        return self._inv @ Matrix(f, sel, n) if k else Matrix.zeros(f, 0, n)

    def coords(self, v: Sequence, check: bool = True) -> tuple:
        k = self.basis.ncols
        if k == 0:
            if check and any(x for x in v):
                raise LinAlgError("vector not in the zero subspace")
            return ()
        c = self._inv.apply([v[r] for r in self.pivot_rows])
        if check and self.basis.apply(c) != tuple(v):
            raise LinAlgError("vector not in span")
        return c
