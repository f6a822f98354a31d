"""Exact linear algebra: Smith normal form over Z, Gaussian elimination over
fields, and ring-dispatching kernel/solve/rank helpers.

All routines are deterministic: pivot selection scans in a fixed order and
breaks ties by position, so identical inputs give identical outputs across
runs and platforms.
"""

from __future__ import annotations

from .matrix import Matrix
from .rings import Ring, ZZ


# ---------------------------------------------------------------------------
# Smith normal form over Z
# ---------------------------------------------------------------------------


def smith_normal_form(m: Matrix) -> tuple[Matrix, Matrix, Matrix]:
    """Return unimodular ``(u, d, v)`` with ``u @ m @ v == d`` diagonal and
    ``d[0,0] | d[1,1] | ...`` (entries non-negative).

    ``m`` must be an integer matrix.  ``u`` and ``v`` are products of
    elementary row/column operations, hence invertible over Z.
    """
    if m.ring != ZZ:
        raise ValueError("Smith normal form requires an integer matrix")
    nr, nc = m.nrows, m.ncols
    a = [list(row) for row in m.rows]
    u = [[1 if i == j else 0 for j in range(nr)] for i in range(nr)]
    v = [[1 if i == j else 0 for j in range(nc)] for i in range(nc)]

    def row_swap(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def col_swap(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def row_add(i, j, q):
        # row i += q * row j
        ai, aj = a[i], a[j]
        for k in range(nc):
            ai[k] += q * aj[k]
        ui, uj = u[i], u[j]
        for k in range(nr):
            ui[k] += q * uj[k]

    def col_add(i, j, q):
        # col i += q * col j
        for row in a:
            row[i] += q * row[j]
        for row in v:
            row[i] += q * row[j]

    def row_negate(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    t = 0
    limit = min(nr, nc)
    while t < limit:
        # find the nonzero entry of least absolute value in the trailing block
        pivot = None
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                x = a[i][j]
                if x != 0 and (best is None or abs(x) < best):
                    best = abs(x)
                    pivot = (i, j)
                    if best == 1:
                        break
            if best == 1:
                break
        if pivot is None:
            break
        i, j = pivot
        if i != t:
            row_swap(t, i)
        if j != t:
            col_swap(t, j)
        if a[t][t] < 0:
            row_negate(t)

        while True:
            # clear column t
            dirty = False
            for i in range(t + 1, nr):
                if a[i][t] != 0:
                    q = a[i][t] // a[t][t]
                    row_add(i, t, -q)
                    if a[i][t] != 0:
                        # remainder smaller than pivot: swap it up and restart
                        row_swap(t, i)
                        dirty = True
            if dirty:
                continue
            for jj in range(t + 1, nc):
                if a[t][jj] != 0:
                    q = a[t][jj] // a[t][t]
                    col_add(jj, t, -q)
                    if a[t][jj] != 0:
                        col_swap(t, jj)
                        dirty = True
            if dirty:
                continue
            # row and column are clear; enforce divisibility of the block

            offender = None
            p = a[t][t]
            for i in range(t + 1, nr):
                for jj in range(t + 1, nc):
                    if a[i][jj] % p != 0:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            row_add(t, offender, 1)
        if a[t][t] < 0:
            row_negate(t)
        t += 1

    d = Matrix(ZZ, tuple(tuple(row) for row in a), coerce=False, ncols=nc)
    return (
        Matrix(ZZ, tuple(tuple(r) for r in u), coerce=False, ncols=nr),
        d,
        Matrix(ZZ, tuple(tuple(r) for r in v), coerce=False, ncols=nc),
    )


def snf_diagonal(m: Matrix) -> list[int]:
    """Nonzero diagonal entries of the Smith normal form of ``m``."""
    _, d, _ = smith_normal_form(m)
    out = []
    for t in range(min(d.nrows, d.ncols)):
        if d[t, t] != 0:
            out.append(d[t, t])
    return out


def _kernel_int(m: Matrix) -> Matrix:
    """Basis of the integer kernel lattice of ``m`` (columns)."""
    _, d, v = smith_normal_form(m)
    rank = sum(1 for t in range(min(d.nrows, d.ncols)) if d[t, t] != 0)
    cols = list(range(rank, m.ncols))
    return v.submatrix(range(v.nrows), cols)


def _solve_int(m: Matrix, b: Matrix):
    """Integer solve ``m @ x == b`` for a matrix of right-hand sides.

    Returns ``x`` or ``None`` when no integral solution exists.
    """
    u, d, v = smith_normal_form(m)
    ub = u @ b
    k = min(d.nrows, d.ncols)
    y = [[0] * b.ncols for _ in range(m.ncols)]
    for i in range(ub.nrows):
        di = d[i, i] if i < k else 0
        for j in range(b.ncols):
            rhs = ub[i, j]
            if i < k and di != 0:
                if rhs % di != 0:
                    return None
                y[i][j] = rhs // di
            elif rhs != 0:
                return None
    return v @ Matrix(ZZ, tuple(tuple(r) for r in y), coerce=False, ncols=b.ncols)


# ---------------------------------------------------------------------------
# Gaussian elimination over fields
# ---------------------------------------------------------------------------


def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot-column list (field rings only)."""
    ring = m.ring
    if not ring.is_field:
        raise ValueError("rref requires a field")
    rows = [list(r) for r in m.rows]
    pivots: list[int] = []
    r = 0
    for c in range(m.ncols):
        pivot_row = None
        for i in range(r, m.nrows):
            if not ring.is_zero(rows[i][c]):
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        inv = ring.inv(rows[r][c])
        rows[r] = [ring.mul(inv, x) for x in rows[r]]
        for i in range(m.nrows):
            if i != r and not ring.is_zero(rows[i][c]):
                f = rows[i][c]
                rows[i] = [ring.sub(x, ring.mul(f, y)) for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == m.nrows:
            break
    return Matrix(ring, tuple(tuple(r_) for r_ in rows), coerce=False, ncols=m.ncols), pivots


def _kernel_field(m: Matrix) -> Matrix:
    ring = m.ring
    red, pivots = rref(m)
    free = [c for c in range(m.ncols) if c not in pivots]
    cols = []
    for fc in free:
        vec = [ring.zero] * m.ncols
        vec[fc] = ring.one
        for r, pc in enumerate(pivots):
            vec[pc] = ring.neg(red[r, fc])
        cols.append(vec)
    return Matrix.from_columns(ring, m.ncols, cols)


def _solve_field(m: Matrix, b: Matrix):
    ring = m.ring
    aug = m.hstack(b)
    red, pivots = rref(aug)
    # inconsistent if a pivot lands in the b-block
    for p in pivots:
        if p >= m.ncols:
            return None
    x = [[ring.zero] * b.ncols for _ in range(m.ncols)]
    for r, pc in enumerate(pivots):
        for j in range(b.ncols):
            x[pc][j] = red[r, m.ncols + j]
    return Matrix(ring, tuple(tuple(row) for row in x), coerce=False, ncols=b.ncols)


# ---------------------------------------------------------------------------
# Ring-dispatching helpers
# ---------------------------------------------------------------------------


def kernel_basis(m: Matrix) -> Matrix:
    """Columns spanning the kernel (saturated lattice basis over Z)."""
    if m.nrows == 0:
        return Matrix.identity(m.ring, m.ncols)
    if m.ring.is_field:
        return _kernel_field(m)
    return _kernel_int(m)


def solve_columns(m: Matrix, b: Matrix):
    """Solve ``m @ x == b`` columnwise; ``None`` when unsolvable."""
    if m.shape[0] != b.shape[0]:
        raise ValueError("shape mismatch in solve")
    if m.ncols == 0:
        return Matrix.zeros(m.ring, 0, b.ncols) if b.is_zero() else None
    if m.ring.is_field:
        return _solve_field(m, b)
    return _solve_int(m, b)


def rank(m: Matrix) -> int:
    if m.nrows == 0 or m.ncols == 0:
        return 0
    if m.ring.is_field:
        return len(rref(m)[1])
    return len(snf_diagonal(m))


def column_space_basis(m: Matrix) -> Matrix:
    """A deterministic spanning subset of the columns (fields)."""
    ring = m.ring
    if not ring.is_field:
        raise ValueError("column_space_basis requires a field")
    chosen: list[int] = []
    cur = Matrix.zeros(ring, m.nrows, 0)
    r = 0
    for j in range(m.ncols):
        cand = cur.hstack(m.submatrix(range(m.nrows), [j]))
        if rank(cand) > r:
            chosen.append(j)
            cur = cand
            r += 1
    return m.submatrix(range(m.nrows), chosen)
