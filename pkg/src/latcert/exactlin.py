"""Exact integer/rational linear algebra primitives.

Matrices are plain lists of lists over Python's arbitrary-precision ints;
rational results use fractions.Fraction. No floating point anywhere: every
caller downstream depends on these results being exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import SingularMatrix

IntMatrix = list[list[int]]
RatMatrix = list[list[Fraction]]
IntVector = list[int]


# ---------------------------------------------------------------- utilities


def copy_matrix(a: Sequence[Sequence]) -> list[list]:
    return [list(row) for row in a]


def identity(n: int) -> IntMatrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def zeros(m: int, n: int) -> IntMatrix:
    return [[0] * n for _ in range(m)]


def transpose(a: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*a)] if a else []


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    n, k, m = len(a), len(b), len(b[0]) if b else 0
    assert all(len(row) == k for row in a), "inner dimensions must agree"
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def mat_vec(a: Sequence[Sequence], v: Sequence) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def mat_eq(a: Sequence[Sequence], b: Sequence[Sequence]) -> bool:
    return [list(r) for r in a] == [list(r) for r in b]


def is_square(a: Sequence[Sequence]) -> bool:
    return all(len(row) == len(a) for row in a)


def is_symmetric(a: Sequence[Sequence]) -> bool:
    n = len(a)
    return is_square(a) and all(a[i][j] == a[j][i] for i in range(n) for j in range(n))


def require_int_matrix(a: Sequence[Sequence]) -> IntMatrix:
    """Validate a rectangular matrix of true ints (bool excluded)."""
    if not a or not a[0]:
        raise ValueError("empty matrix")
    width = len(a[0])
    out: IntMatrix = []
    for row in a:
        if len(row) != width:
            raise ValueError("ragged matrix")
        for x in row:
            if not isinstance(x, int) or isinstance(x, bool):
                raise ValueError(f"non-integer entry {x!r}")
        out.append(list(row))
    return out


# ------------------------------------------------------------- determinant


def det(a: Sequence[Sequence[int]]) -> int:
    """Exact determinant via Bareiss fraction-free elimination."""
    if not is_square(a):
        raise ValueError("det requires a square matrix")
    n = len(a)
    if n == 0:
        return 1
    m = copy_matrix(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            pivot_row = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if pivot_row is None:
                return 0
            m[k], m[pivot_row] = m[pivot_row], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                # exact division is guaranteed by the Bareiss identity
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def is_unimodular(a: Sequence[Sequence[int]]) -> bool:
    return is_square(a) and abs(det(a)) == 1


# ---------------------------------------------------------------- inverses


def rational_inverse(a: Sequence[Sequence[int]]) -> RatMatrix:
    """Exact inverse over Q by Gauss-Jordan elimination.

    Raises SingularMatrix when det(a) = 0.
    """
    if not is_square(a):
        raise ValueError("inverse requires a square matrix")
    n = len(a)
    work = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
            for i, row in enumerate(a)]
    for col in range(n):
        pivot_row = next((r for r in range(col, n) if work[r][col] != 0), None)
        if pivot_row is None:
            raise SingularMatrix("matrix is singular over Q")
        work[col], work[pivot_row] = work[pivot_row], work[col]
        inv = Fraction(1) / work[col][col]
        work[col] = [x * inv for x in work[col]]
        for r in range(n):
            if r != col and work[r][col] != 0:
                factor = work[r][col]
                work[r] = [x - factor * y for x, y in zip(work[r], work[col])]
    return [row[n:] for row in work]


def rank(a: Sequence[Sequence[int]]) -> int:
    """Rank over Q via exact row echelon."""
    if not a:
        return 0
    work = [[Fraction(x) for x in row] for row in a]
    nrows, ncols = len(work), len(work[0])
    r = 0
    for col in range(ncols):
        pivot_row = next((i for i in range(r, nrows) if work[i][col] != 0), None)
        if pivot_row is None:
            continue
        work[r], work[pivot_row] = work[pivot_row], work[r]
        inv = Fraction(1) / work[r][col]
        work[r] = [x * inv for x in work[r]]
        for i in range(nrows):
            if i != r and work[i][col] != 0:
                f = work[i][col]
                work[i] = [x - f * y for x, y in zip(work[i], work[r])]
        r += 1
        if r == nrows:
            break
    return r


# ---------------------------------------------------------- Smith normal form


@dataclass(frozen=True)
class SmithDecomposition:
    """U @ A @ V == D with U, V unimodular and D diagonal, d1 | d2 | ... | dk."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix

    @property
    def diagonal(self) -> IntVector:
        return [self.D[i][i] for i in range(min(len(self.D), len(self.D[0])))]


def smith_normal_form(a: Sequence[Sequence[int]]) -> SmithDecomposition:
    """Smith normal form with transforms.

    Pivot rule: smallest nonzero absolute value in the remaining block,
    ties broken by lowest (row, col) index, so U and V are reproducible.
    """
    d = copy_matrix(a)
    nrows, ncols = len(d), len(d[0])
    u = identity(nrows)
    v = identity(ncols)

    def row_add(dst: int, src: int, mult: int) -> None:
        d[dst] = [x + mult * y for x, y in zip(d[dst], d[src])]
        u[dst] = [x + mult * y for x, y in zip(u[dst], u[src])]

    def col_add(dst: int, src: int, mult: int) -> None:
        for row in d:
            row[dst] += mult * row[src]
        for row in v:
            row[dst] += mult * row[src]

    def row_swap(i: int, j: int) -> None:
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def col_swap(i: int, j: int) -> None:
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def find_pivot(t: int) -> Optional[tuple[int, int]]:
        best = None
        best_abs = None
        for i in range(t, nrows):
            for j in range(t, ncols):
                x = abs(d[i][j])
                if x != 0 and (best_abs is None or x < best_abs):
                    best, best_abs = (i, j), x
        return best

    for t in range(min(nrows, ncols)):
        while True:
            pos = find_pivot(t)
            if pos is None:
                break
            if pos != (t, t):
                row_swap(t, pos[0])
                col_swap(t, pos[1])
            # clear the pivot column and row; restart if a remainder survives
            dirty = False
            for i in range(t + 1, nrows):
                if d[i][t] != 0:
                    row_add(i, t, -(d[i][t] // d[t][t]))
                    if d[i][t] != 0:
                        dirty = True
            for j in range(t + 1, ncols):
                if d[t][j] != 0:
                    col_add(j, t, -(d[t][j] // d[t][t]))
                    if d[t][j] != 0:
                        dirty = True
            if dirty:
                continue
            # pivot must divide the rest of the block for the chain to hold
            witness = next(((i, j) for i in range(t + 1, nrows)
                            for j in range(t + 1, ncols) if d[i][j] % d[t][t] != 0),
                           None)
            if witness is None:
                break
            row_add(t, witness[0], 1)
        if pos is None:
            break

    for t in range(min(nrows, ncols)):
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
    return SmithDecomposition(U=u, D=d, V=v)


# ------------------------------------------------------ Hermite normal form


def hermite_column_form(generators: Sequence[Sequence[int]]) -> IntMatrix:
    """Canonical basis of the lattice spanned by the given columns.

    Input is m x k with columns generating a rank-m sublattice of Z^m.
    Output is the unique m x m lower-triangular basis with positive diagonal
    and 0 <= H[i][j] < H[i][i] for j < i.
    """
    m = len(generators)
    cols = [list(col) for col in zip(*generators)]  # work on rows = generators^T
    basis: list[list[int]] = []
    for pivot_col in range(m):
        live = [c for c in cols if c[pivot_col] != 0]
        if not live:
            raise ValueError("generators do not span full rank")
        # gcd sweep on the pivot coordinate
        while True:
            live.sort(key=lambda c: abs(c[pivot_col]))
            head = live[0]
            rest = []
            for c in live[1:]:
                q = c[pivot_col] // head[pivot_col]
                c = [x - q * y for x, y in zip(c, head)]
                if c[pivot_col] != 0:
                    rest.append(c)
                elif any(c):
                    cols.append(c)  # re-enter pool with zero pivot coord
            if not rest:
                break
            live = [head] + rest
        if head[pivot_col] < 0:
            head = [-x for x in head]
        basis.append(head)
        cols = [c for c in cols if c[pivot_col] == 0 and any(c)]
    # normalize entries left of each diagonal
    for i in range(m):
        for j in range(i):
            q = basis[j][i] // basis[i][i]
            if q:
                basis[j] = [x - q * y for x, y in zip(basis[j], basis[i])]
    return transpose(basis)


# ----------------------------------------------------------------- mod 2


def solve_mod2(a: Sequence[Sequence[int]], rhs: Sequence[int]) -> Optional[IntVector]:
    """One solution of A x = rhs over GF(2), or None."""
    nrows = len(a)
    ncols = len(a[0])
    if len(rhs) != nrows:
        raise ValueError("dimension mismatch")
    work = [[x & 1 for x in row] + [rhs[i] & 1] for i, row in enumerate(a)]
    pivots: list[tuple[int, int]] = []
    r = 0
    for col in range(ncols):
        pivot_row = next((i for i in range(r, nrows) if work[i][col]), None)
        if pivot_row is None:
            continue
        work[r], work[pivot_row] = work[pivot_row], work[r]
        for i in range(nrows):
            if i != r and work[i][col]:
                work[i] = [(x + y) & 1 for x, y in zip(work[i], work[r])]
        pivots.append((r, col))
        r += 1
    for i in range(r, nrows):
        if work[i][ncols]:
            return None
    x = [0] * ncols
    for row, col in pivots:
        x[col] = work[row][ncols]
    return x


def kernel_mod2(a: Sequence[Sequence[int]]) -> list[IntVector]:
    """Basis of the null space of A over GF(2)."""
    nrows, ncols = len(a), len(a[0])
    work = [[x & 1 for x in row] for row in a]
    pivots: dict[int, int] = {}  # col -> row
    r = 0
    for col in range(ncols):
        pivot_row = next((i for i in range(r, nrows) if work[i][col]), None)
        if pivot_row is None:
            continue
        work[r], work[pivot_row] = work[pivot_row], work[r]
        for i in range(nrows):
            if i != r and work[i][col]:
                work[i] = [(x + y) & 1 for x, y in zip(work[i], work[r])]
        pivots[col] = r
        r += 1
    basis = []
    free_cols = [c for c in range(ncols) if c not in pivots]
    for free in free_cols:
        vec = [0] * ncols
        vec[free] = 1
        for col, row in pivots.items():
            vec[col] = work[row][free]
        basis.append(vec)
    return basis
