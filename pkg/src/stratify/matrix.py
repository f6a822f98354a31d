"""Dense exact matrices over Z, Q, or F_p.

Column-vector convention throughout the package: a matrix representing a map
``source -> target`` has shape ``(rank(target), rank(source))`` and maps
compose as matrix products.  Zero-row and zero-column matrices are first-class
citizens (complexes are full of them), so the column count of a 0 x n matrix
is tracked explicitly.
"""

from __future__ import annotations

from .rings import Ring


class Matrix:
    """Immutable dense matrix with entries in a fixed ring."""

    __slots__ = ("ring", "nrows", "ncols", "rows")

    def __init__(self, ring: Ring, rows, *, coerce: bool = True, ncols: int | None = None):
        self.ring = ring
        if coerce:
            rows = tuple(tuple(ring.el(x) for x in row) for row in rows)
        else:
            rows = tuple(tuple(row) for row in rows)
        self.rows = rows
        self.nrows = len(rows)
        if self.nrows == 0:
            self.ncols = int(ncols) if ncols is not None else 0
        else:
            self.ncols = len(rows[0])
            if ncols is not None and ncols != self.ncols:
                raise ValueError("ncols disagrees with row length")
        for row in rows:
            if len(row) != self.ncols:
                raise ValueError("ragged matrix")

    # -- constructors --------------------------------------------------------

    @classmethod
    def zeros(cls, ring: Ring, nrows: int, ncols: int) -> "Matrix":
        z = ring.zero
        return cls(ring, tuple((z,) * ncols for _ in range(nrows)), coerce=False, ncols=ncols)

    @classmethod
    def identity(cls, ring: Ring, n: int) -> "Matrix":
        z, o = ring.zero, ring.one
        return cls(
            ring,
            tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)),
            coerce=False,
            ncols=n,
        )

    @classmethod
    def column(cls, ring: Ring, entries) -> "Matrix":
        return cls(ring, tuple((ring.el(x),) for x in entries), coerce=False, ncols=1)

    @classmethod
    def from_columns(cls, ring: Ring, nrows: int, columns) -> "Matrix":
        columns = list(columns)
        if not columns:
            return cls.zeros(ring, nrows, 0)
        rows = tuple(tuple(col[i] for col in columns) for i in range(nrows))
        return cls(ring, rows, ncols=len(columns))

    # -- access ----------------------------------------------------------------

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def column_vec(self, j: int) -> tuple:
        return tuple(self.rows[i][j] for i in range(self.nrows))

    def columns(self):
        return [self.column_vec(j) for j in range(self.ncols)]

    def submatrix(self, row_idx, col_idx) -> "Matrix":
        row_idx = list(row_idx)
        col_idx = list(col_idx)
        return Matrix(
            self.ring,
            tuple(tuple(self.rows[i][j] for j in col_idx) for i in row_idx),
            coerce=False,
            ncols=len(col_idx),
        )

    def is_zero(self) -> bool:
        z = self.ring.is_zero
        return all(z(x) for row in self.rows for x in row)

    # -- algebra ------------------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.ring == other.ring
            and self.shape == other.shape
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.ring, self.shape, self.rows))

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        add = self.ring.add
        return Matrix(
            self.ring,
            tuple(
                tuple(add(a, b) for a, b in zip(r1, r2))
                for r1, r2 in zip(self.rows, other.rows)
            ),
            coerce=False,
            ncols=self.ncols,
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + other.neg()

    def neg(self) -> "Matrix":
        neg = self.ring.neg
        return Matrix(
            self.ring,
            tuple(tuple(neg(x) for x in row) for row in self.rows),
            coerce=False,
            ncols=self.ncols,
        )

    def scale(self, c) -> "Matrix":
        c = self.ring.el(c)
        mul = self.ring.mul
        return Matrix(
            self.ring,
            tuple(tuple(mul(c, x) for x in row) for row in self.rows),
            coerce=False,
            ncols=self.ncols,
        )

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ValueError(f"cannot compose {self.shape} with {other.shape}")
        ring = self.ring
        add, mul, zero = ring.add, ring.mul, ring.zero
        ocols = other.ncols
        out = []
        for i in range(self.nrows):
            srow = self.rows[i]
            row = [zero] * ocols
            for k in range(self.ncols):
                a = srow[k]
                if ring.is_zero(a):
                    continue
                orow = other.rows[k]
                for j in range(ocols):
                    b = orow[j]
                    if not ring.is_zero(b):
                        row[j] = add(row[j], mul(a, b))
            out.append(tuple(row))
        return Matrix(ring, tuple(out), coerce=False, ncols=ocols)

    def apply(self, vec) -> tuple:
        """Matrix-vector product (vec given as a tuple/list of entries)."""
        ring = self.ring
        add, mul, zero = ring.add, ring.mul, ring.zero
        if len(vec) != self.ncols:
            raise ValueError("vector length mismatch")
        out = [zero] * self.nrows
        for k, a in enumerate(vec):
            if ring.is_zero(a):
                continue
            for i in range(self.nrows):
                b = self.rows[i][k]
                if not ring.is_zero(b):
                    out[i] = add(out[i], mul(b, a))
        return tuple(out)

    def transpose(self) -> "Matrix":
        return Matrix(
            self.ring,
            tuple(tuple(self.rows[i][j] for i in range(self.nrows)) for j in range(self.ncols)),
            coerce=False,
            ncols=self.nrows,
        )

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.nrows != other.nrows:
            raise ValueError("row count mismatch")
        return Matrix(
            self.ring,
            tuple(r1 + r2 for r1, r2 in zip(self.rows, other.rows)),
            coerce=False,
            ncols=self.ncols + other.ncols,
        )

    def vstack(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.ncols:
            raise ValueError("column count mismatch")
        return Matrix(self.ring, self.rows + other.rows, coerce=False, ncols=self.ncols)

    def to_ring(self, ring: Ring) -> "Matrix":
        return Matrix(ring, self.rows, ncols=self.ncols)

    def __repr__(self):
        if self.nrows == 0 or self.ncols == 0:
            return f"Matrix({self.ring}, {self.nrows}x{self.ncols})"
        body = "; ".join(" ".join(self.ring.to_str(x) for x in row) for row in self.rows)
        return f"Matrix({self.ring}, [{body}])"


def block_diagonal(ring: Ring, blocks) -> Matrix:
    blocks = list(blocks)
    nrows = sum(b.nrows for b in blocks)
    ncols = sum(b.ncols for b in blocks)
    out = [[ring.zero] * ncols for _ in range(nrows)]
    r0 = c0 = 0
    for b in blocks:
        for i in range(b.nrows):
            row = out[r0 + i]
            brow = b.rows[i]
            for j in range(b.ncols):
                row[c0 + j] = brow[j]
        r0 += b.nrows
        c0 += b.ncols
    return Matrix(ring, tuple(tuple(r) for r in out), coerce=False, ncols=ncols)
