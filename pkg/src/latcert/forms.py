"""Integral symmetric bilinear forms and their classical invariants.

Grams are immutable tuples of tuples; every invariant is computed exactly.
The definite isometry test returns an explicit unimodular change of basis or
a verified non-isometry (the backtracking search is exhaustive).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence

from . import exactlin as xl
from .errors import DegenerateForm, UnsupportedIndefinite

Gram = tuple[tuple[int, ...], ...]


def _freeze(gram: Sequence[Sequence[int]]) -> Gram:
    return tuple(tuple(int(x) for x in row) for row in gram)


@dataclass(frozen=True)
class SymBilinearForm:
    gram: Gram

    def __post_init__(self):
        if not xl.is_symmetric(self.gram):
            raise ValueError("gram matrix must be symmetric")

    @staticmethod
    def from_gram(rows: Sequence[Sequence[int]]) -> "SymBilinearForm":
        return SymBilinearForm(_freeze(xl.require_int_matrix(rows)))

    @property
    def dimension(self) -> int:
        return len(self.gram)

    @cached_property
    def determinant(self) -> int:
        return xl.det([list(r) for r in self.gram])

    @cached_property
    def rank(self) -> int:
        return xl.rank([list(r) for r in self.gram])

    @property
    def parity(self) -> str:
        return "even" if all(self.gram[i][i] % 2 == 0 for i in range(self.dimension)) else "odd"

    @property
    def is_even(self) -> bool:
        return self.parity == "even"

    @property
    def is_unimodular(self) -> bool:
        return abs(self.determinant) == 1

    @cached_property
    def signature(self) -> int:
        return signature(self)

    def norm(self, v: Sequence[int]) -> int:
        gv = xl.mat_vec(self.gram, v)
        return sum(x * y for x, y in zip(v, gv))

    def inner(self, v: Sequence[int], w: Sequence[int]) -> int:
        gw = xl.mat_vec(self.gram, w)
        return sum(x * y for x, y in zip(v, gw))

    def to_json_dict(self) -> dict:
        return {"gram": [list(row) for row in self.gram]}


@dataclass(frozen=True)
class FormIsometry:
    """Explicit isometry: matrix^T . source.gram . matrix == target.gram."""

    matrix: Gram
    source: SymBilinearForm
    target: SymBilinearForm

    def __post_init__(self):
        m = [list(r) for r in self.matrix]
        got = xl.mat_mul(xl.mat_mul(xl.transpose(m), [list(r) for r in self.source.gram]), m)
        if not xl.mat_eq(got, [list(r) for r in self.target.gram]):
            raise ValueError("matrix does not carry source form to target form")
        if abs(xl.det(m)) != 1:
            raise ValueError("isometry matrix must be unimodular")


def make_isometry(matrix: Sequence[Sequence[int]], source: SymBilinearForm,
                  target: SymBilinearForm) -> FormIsometry:
    return FormIsometry(_freeze(matrix), source, target)


# ------------------------------------------------------------ constructors


def unit_form(h: int) -> SymBilinearForm:
    """(1)^h, the standard diagonal odd unimodular form."""
    return SymBilinearForm(_freeze(xl.identity(h)))


def hyperbolic_plane() -> SymBilinearForm:
    return SymBilinearForm(((0, 1), (1, 0)))


_E8_GRAM = (
    (2, -1, 0, 0, 0, 0, 0, 0),
    (-1, 2, -1, 0, 0, 0, 0, 0),
    (0, -1, 2, -1, 0, 0, 0, 0),
    (0, 0, -1, 2, -1, 0, 0, 0),
    (0, 0, 0, -1, 2, -1, 0, -1),
    (0, 0, 0, 0, -1, 2, -1, 0),
    (0, 0, 0, 0, 0, -1, 2, 0),
    (0, 0, 0, 0, -1, 0, 0, 2),
)

_e8_checked = False


def e8_form() -> SymBilinearForm:
    """The even unimodular rank-8 root lattice, validated on first use."""
    global _e8_checked
    f = SymBilinearForm(_E8_GRAM)
    if not _e8_checked:
        from . import roots  # deferred: roots imports this module

        assert f.determinant == 1 and f.is_even
        assert roots.count_vectors_of_norm(f, 2) == 240
        _e8_checked = True
    return f


def direct_sum(f: SymBilinearForm, g: SymBilinearForm) -> SymBilinearForm:
    n, m = f.dimension, g.dimension
    out = xl.zeros(n + m, n + m)
    for i in range(n):
        for j in range(n):
            out[i][j] = f.gram[i][j]
    for i in range(m):
        for j in range(m):
            out[n + i][n + j] = g.gram[i][j]
    return SymBilinearForm(_freeze(out))


def stabilize(f: SymBilinearForm, n: int = 1) -> SymBilinearForm:
    out = f
    for _ in range(n):
        out = direct_sum(out, hyperbolic_plane())
    return out


def scale(f: SymBilinearForm, c: int) -> SymBilinearForm:
    return SymBilinearForm(_freeze([[c * x for x in row] for row in f.gram]))


# --------------------------------------------------------------- signature


def signature(f: SymBilinearForm) -> int:
    """p - q by exact symmetric congruence diagonalization over Q.

    Zero diagonals are handled by folding in a row with a nonzero pairing
    (a hyperbolic pair contributes one +1 and one -1).
    """
    n = f.dimension
    a = [[Fraction(x) for x in row] for row in f.gram]
    active = list(range(n))
    pos = neg = 0
    while active:
        pivot = next((i for i in active if a[i][i] != 0), None)
        if pivot is None:
            pair = next(((i, j) for i in active for j in active
                         if i < j and a[i][j] != 0), None)
            if pair is None:
                raise DegenerateForm("form has a nontrivial radical")
            i, j = pair
            # fold row/col j into i: new a[i][i] = 2 a[i][j] != 0
            for k in range(n):
                a[i][k] += a[j][k]
            for k in range(n):
                a[k][i] += a[k][j]
            pivot = i
        if a[pivot][pivot] > 0:
            pos += 1
        else:
            neg += 1
        active.remove(pivot)
        for i in active:
            if a[i][pivot] != 0:
                c = a[i][pivot] / a[pivot][pivot]
                for k in range(n):
                    a[i][k] -= c * a[pivot][k]
                for k in range(n):
                    a[k][i] -= c * a[k][pivot]
    return pos - neg


def is_positive_definite(f: SymBilinearForm) -> bool:
    if f.dimension == 0:
        return True
    try:
        return signature(f) == f.dimension
    except DegenerateForm:
        return False


def indefinite_stable_class(f: SymBilinearForm) -> tuple[int, int, str]:
    """(rank, signature, parity): the complete stable-isometry invariant."""
    return (f.dimension, f.signature, f.parity)


# ----------------------------------------------------- characteristic vector


def characteristic_vector(f: SymBilinearForm) -> list[int]:
    """xi with xi . x == x . x (mod 2) for all x; entries in {0, 1}."""
    diag = [f.gram[i][i] for i in range(f.dimension)]
    sol = xl.solve_mod2([list(r) for r in f.gram], diag)
    if sol is None:
        raise DegenerateForm("no characteristic vector: gram singular mod 2")
    return sol


# ------------------------------------------------------- definite isometry


def _vectors_of_norm_cached(gram: Gram, n: int) -> list[tuple[int, ...]]:
    from . import roots

    return roots.vectors_of_norm(gram, n)


def reduce_definite_gram(gram: Gram) -> tuple[list[list[int]], list[list[int]]]:
    """Greedy exact size reduction of a positive definite gram.

    Returns (t, reduced) with reduced = t^T gram t and t unimodular. Each
    replacement b_i <- b_i - mu*b_j strictly drops an integer norm, so the
    sweep terminates. Brings skew bases (column HNF output in particular)
    down to small diagonals before enumeration or isometry search.
    """
    n = len(gram)
    g = [list(r) for r in gram]
    t = xl.identity(n)
    changed = True
    while changed:
        changed = False
        for i in range(n):
            for j in range(n):
                if i == j or g[j][j] == 0:
                    continue
                num, den = g[i][j], g[j][j]
                mu = (2 * num + den) // (2 * den)  # nearest integer to num/den
                if mu == 0 or g[i][i] - 2 * mu * num + mu * mu * den >= g[i][i]:
                    continue
                for k in range(n):
                    t[k][i] -= mu * t[k][j]
                for k in range(n):
                    g[i][k] -= mu * g[j][k]
                for k in range(n):
                    g[k][i] -= mu * g[k][j]
                changed = True
    return t, g


def is_isometric_definite(f: SymBilinearForm, g: SymBilinearForm) -> Optional[FormIsometry]:
    """Explicit isometry between positive definite forms, or verified None.

    Matches target basis vectors (decreasing norm, then original index)
    against enumerated vectors of equal norm, pruning on partial inner
    products. The search is exhaustive, so None certifies non-isometry.
    """
    for form in (f, g):
        if not is_positive_definite(form):
            raise UnsupportedIndefinite("definite isometry test requires positive definite forms")
    if f.dimension != g.dimension or f.determinant != g.determinant or f.parity != g.parity:
        return None
    n = f.dimension
    if n == 0:
        return make_isometry([], f, g)

    # Search on size-reduced grams; HNF-style bases otherwise blow up the
    # norm enumerations. The witness is conjugated back at the end.
    tf, rf_rows = reduce_definite_gram(f.gram)
    tg, rg_rows = reduce_definite_gram(g.gram)
    rf, rg = _freeze(rf_rows), _freeze(rg_rows)

    needed_norms = sorted({rg[i][i] for i in range(n)} | {1, 2, 3})
    for norm in needed_norms:
        if len(_vectors_of_norm_cached(rf, norm)) != len(_vectors_of_norm_cached(rg, norm)):
            return None

    order = sorted(range(n), key=lambda i: (-rg[i][i], i))
    assigned: list[tuple[int, ...]] = []
    assigned_gf: list[list[int]] = []  # rf @ v for each assigned v

    def extend(level: int) -> bool:
        if level == n:
            return True
        tgt = order[level]
        for cand in _vectors_of_norm_cached(rf, rg[tgt][tgt]):
            ok = True
            for prev_level in range(level):
                want = rg[order[prev_level]][tgt]
                if sum(x * y for x, y in zip(cand, assigned_gf[prev_level])) != want:
                    ok = False
                    break
            if not ok:
                continue
            assigned.append(cand)
            assigned_gf.append(xl.mat_vec(rf, cand))
            if extend(level + 1):
                return True
            assigned.pop()
            assigned_gf.pop()
        return False

    if not extend(0):
        return None
    cols = [None] * n
    for level, tgt in enumerate(order):
        cols[tgt] = assigned[level]
    reduced_witness = xl.transpose(cols)
    tg_inv = [[int(e) for e in row] for row in xl.rational_inverse(tg)]
    matrix = xl.mat_mul(tf, xl.mat_mul(reduced_witness, tg_inv))
    return make_isometry(matrix, f, g)
