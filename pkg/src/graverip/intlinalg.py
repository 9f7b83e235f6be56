"""Exact integer linear algebra on small dense matrices.

Hermite normal form, integer linear-system solving, saturated kernel
lattice bases, and exhaustive subdeterminant enumeration.  Everything
here works on arbitrary-precision Python integers; no floating point
is used anywhere.
"""

from __future__ import annotations

import itertools

from .errors import SizeGuardExceeded

IntVector = tuple[int, ...]

# rows*cols cap for exhaustive minor enumeration
SUBDETERMINANT_GUARD = 36


class IntMatrix:
    """Immutable dense matrix with exact integer entries.

    Stored row-major as a tuple of row tuples.  Matrices with zero rows
    or zero columns are legal; a zero-row matrix needs an explicit
    ``cols`` because the width cannot be inferred.
    """

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, entries, cols: int | None = None):
        data = tuple(tuple(int(x) for x in row) for row in entries)
        if data:
            width = len(data[0])
            if any(len(row) != width for row in data):
                raise ValueError("rows have unequal lengths")
            if cols is not None and cols != width:
                raise ValueError(f"cols={cols} disagrees with row width {width}")
            cols = width
        else:
            if cols is None:
                raise ValueError("a matrix with no rows needs an explicit column count")
            if cols < 0:
                raise ValueError("negative column count")
        object.__setattr__(self, "rows", len(data))
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "_data", data)

    def __setattr__(self, name, value):
        raise AttributeError("IntMatrix is immutable")

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], cols=n)

    @property
    def entries(self) -> tuple[IntVector, ...]:
        return self._data

    def row(self, i: int) -> IntVector:
        return self._data[i]

    def col(self, j: int) -> IntVector:
        if not 0 <= j < self.cols:
            raise IndexError(j)
        return tuple(row[j] for row in self._data)

    def __getitem__(self, key):
        i, j = key
        return self._data[i][j]

    def mul_vec(self, v):
        """Matrix-vector product; accepts any sequence of exact numbers."""
        if len(v) != self.cols:
            raise ValueError(f"vector length {len(v)} != cols {self.cols}")
        return tuple(sum(a * x for a, x in zip(row, v)) for row in self._data)

    def mul_mat(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("inner dimensions disagree")
        cols = [other.col(j) for j in range(other.cols)]
        return IntMatrix(
            [[sum(a * b for a, b in zip(row, col)) for col in cols] for row in self._data],
            cols=other.cols,
        )

    def max_abs_entry(self) -> int:
        return max((abs(x) for row in self._data for x in row), default=0)

    def __eq__(self, other):
        return (
            isinstance(other, IntMatrix)
            and self.cols == other.cols
            and self._data == other._data
        )

    def __hash__(self):
        return hash((self.cols, self._data))

    def __repr__(self):
        return f"IntMatrix({[list(r) for r in self._data]!r}, cols={self.cols})"


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with g = gcd(a, b) >= 0 and x*a + y*b == g."""
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        x, y, g = -x, -y, -g
    return g, x, y


def hermite_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix]:
    """Column-style Hermite normal form.

    Returns (H, U) with M @ U == H and U unimodular.  H has a
    lower-triangular staircase profile: the pivot columns come first
    with strictly descending pivot rows, pivots are positive, entries
    to the left of a pivot in its row are reduced into [0, pivot), and
    all remaining columns are zero.
    """
    rows, cols = m.rows, m.cols
    # work column-major so all operations are column operations
    h = [list(m.col(j)) for j in range(cols)]
    u = [[1 if i == j else 0 for i in range(cols)] for j in range(cols)]

    pivot_col = 0
    for r in range(rows):
        if pivot_col == cols:
            break
        # clear row r to the right of pivot_col with 2x2 unimodular column ops
        for j in range(pivot_col + 1, cols):
            if h[j][r] == 0:
                continue
            a, b = h[pivot_col][r], h[j][r]
            g, x, y = _xgcd(a, b)
            ag, bg = a // g, b // g
            cp, cj = h[pivot_col], h[j]
            h[pivot_col] = [x * p + y * q for p, q in zip(cp, cj)]
            h[j] = [-bg * p + ag * q for p, q in zip(cp, cj)]
            cp, cj = u[pivot_col], u[j]
            u[pivot_col] = [x * p + y * q for p, q in zip(cp, cj)]
            u[j] = [-bg * p + ag * q for p, q in zip(cp, cj)]
        piv = h[pivot_col][r]
        if piv == 0:
            continue
        if piv < 0:
            h[pivot_col] = [-x for x in h[pivot_col]]
            u[pivot_col] = [-x for x in u[pivot_col]]
            piv = -piv
        # reduce entries left of the pivot in row r into [0, piv)
        for j in range(pivot_col):
            q = h[j][r] // piv
            if q:
                h[j] = [p - q * s for p, s in zip(h[j], h[pivot_col])]
                u[j] = [p - q * s for p, s in zip(u[j], u[pivot_col])]
        pivot_col += 1

    h_mat = IntMatrix([[h[j][i] for j in range(cols)] for i in range(rows)], cols=cols)
    u_mat = IntMatrix([[u[j][i] for j in range(cols)] for i in range(cols)], cols=cols)
    return h_mat, u_mat


def _staircase_pivots(h: IntMatrix) -> list[tuple[int, int]]:
    """Pivot (row, col) pairs of a column-style HNF matrix."""
    pivots = []
    for j in range(h.cols):
        col = h.col(j)
        nz = [i for i, x in enumerate(col) if x]
        if not nz:
            break
        pivots.append((nz[0], j))
    return pivots


def matrix_rank(m: IntMatrix) -> int:
    """Rank over the rationals, read off the HNF staircase."""
    h, _ = hermite_normal_form(m)
    return len(_staircase_pivots(h))


def solve_integer(e: IntMatrix, b) -> IntVector | None:
    """Some integer solution of E z = b, or None when none exists.

    Solvability is decided exactly: the system is transformed by a
    unimodular change of variables into staircase form, solved by
    forward substitution, and the candidate is checked against every
    row.  No bound constraints are applied.
    """
    b = tuple(int(x) for x in b)
    if e.rows != len(b):
        raise ValueError(f"rhs length {len(b)} != rows {e.rows}")
    h, u = hermite_normal_form(e)
    y = [0] * e.cols
    for r, j in _staircase_pivots(h):
        s = b[r] - sum(h[r, k] * y[k] for k in range(j))
        piv = h[r, j]
        if s % piv:
            return None
        y[j] = s // piv
    # rows without a pivot must agree as well
    if h.mul_vec(y) != b:
        return None
    return u.mul_vec(y)


def kernel_lattice_basis(e: IntMatrix) -> list[IntVector]:
    """Basis of the saturated integer kernel lattice ker(E) ∩ Z^n.

    Derived from the HNF transform: the U-columns mapped to zero
    columns of H span every integer kernel vector because U is
    unimodular.  The result is re-reduced to a staircase basis, so each
    vector's first nonzero entry is a positive pivot and pivot rows
    strictly increase across the list.
    """
    h, u = hermite_normal_form(e)
    r = len(_staircase_pivots(h))
    if r == e.cols:
        return []
    kernel_cols = [[u[i, j] for j in range(r, e.cols)] for i in range(e.cols)]
    k_mat = IntMatrix(kernel_cols, cols=e.cols - r)
    staircase, _ = hermite_normal_form(k_mat)
    return [staircase.col(j) for j in range(staircase.cols)]


def _det(rows: list[list[int]]) -> int:
    """Determinant of a small square integer matrix (Bareiss elimination)."""
    n = len(rows)
    if n == 0:
        return 1
    a = [list(r) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def max_abs_subdeterminant(e: IntMatrix) -> tuple[int, int]:
    """Exhaustive (delta, rank): the largest |minor| over all orders, and the rank.

    Guarded at rows*cols <= SUBDETERMINANT_GUARD; larger matrices must
    fall back to the Hadamard-style bound instead.
    """
    if e.rows * e.cols > SUBDETERMINANT_GUARD:
        raise SizeGuardExceeded(
            f"minor enumeration needs rows*cols <= {SUBDETERMINANT_GUARD}, "
            f"got {e.rows}x{e.cols}"
        )
    delta = 0
    rank = 0
    for k in range(1, min(e.rows, e.cols) + 1):
        for rsel in itertools.combinations(range(e.rows), k):
            sub_rows = [e.row(i) for i in rsel]
            for csel in itertools.combinations(range(e.cols), k):
                d = _det([[row[j] for j in csel] for row in sub_rows])
                if d:
                    rank = k
                    if abs(d) > delta:
                        delta = abs(d)
    return delta, rank
