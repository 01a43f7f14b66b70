"""Short-vector enumeration in positive definite forms, with exact bounds.

All branch bounds are exact rationals (isqrt on scaled integers), so counts
are guaranteed correct; a miscount by one would invalidate the fingerprint
arguments downstream. Vectors come out in a fixed deterministic order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, isqrt
from typing import Optional, Sequence

from .errors import UnsupportedIndefinite
from .forms import SymBilinearForm

Gram = tuple[tuple[int, ...], ...]


@lru_cache(maxsize=None)
def _cholesky(gram: Gram) -> tuple[tuple[Fraction, ...], tuple[tuple[Fraction, ...], ...]]:
    """Q(x) = sum_i d_i (x_i + sum_{j>i} u_ij x_j)^2; raises if not definite."""
    n = len(gram)
    q = [[Fraction(x) for x in row] for row in gram]
    d = [Fraction(0)] * n
    u = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        if q[i][i] <= 0:
            raise UnsupportedIndefinite("form is not positive definite")
        d[i] = q[i][i]
        for j in range(i + 1, n):
            u[i][j] = q[i][j] / d[i]
        for k in range(i + 1, n):
            for l in range(k, n):
                q[k][l] -= d[i] * u[i][k] * u[i][l]
    return tuple(d), tuple(tuple(row) for row in u)


def _interval(center: Fraction, bound: Fraction) -> tuple[int, int]:
    """Integer t range with (t + center)^2 <= bound (bound >= 0)."""
    from math import ceil, floor

    # sqrt(a/b) = sqrt(a*b)/b, bracketed by isqrt
    a, b = bound.numerator, bound.denominator
    root_hi = Fraction(isqrt(a * b) + 1, b)  # strict upper bound for sqrt(bound)
    lo = ceil(-center - root_hi)
    hi = floor(-center + root_hi)
    while lo <= hi and (lo + center) ** 2 > bound:
        lo += 1
    while hi >= lo and (hi + center) ** 2 > bound:
        hi -= 1
    return lo, hi


@lru_cache(maxsize=None)
def vectors_of_norm(gram: Gram, n: int) -> tuple[tuple[int, ...], ...]:
    """All x with x^T gram x == n, exact, deterministic order, +-v both listed."""
    if n < 0:
        return ()
    dim = len(gram)
    if dim == 0:
        return ((),) if n == 0 else ()
    d, u = _cholesky(gram)
    target = Fraction(n)
    found: list[tuple[int, ...]] = []
    x = [0] * dim

    def descend(i: int, remaining: Fraction) -> None:
        center = sum((u[i][j] * x[j] for j in range(i + 1, dim)), Fraction(0))
        if i == 0:
            # exact equality required at the last coordinate
            lo, hi = _interval(center, remaining / d[0])
            for t in range(lo, hi + 1):
                if d[0] * (t + center) ** 2 == remaining:
                    x[0] = t
                    found.append(tuple(x))
            x[0] = 0
            return
        lo, hi = _interval(center, remaining / d[i])
        for t in range(lo, hi + 1):
            x[i] = t
            descend(i - 1, remaining - d[i] * (t + center) ** 2)
        x[i] = 0

    descend(dim - 1, target)
    if n == 0:
        found = [v for v in found if any(v)]
    return tuple(sorted(found))


def count_vectors_of_norm(f: SymBilinearForm, n: int) -> int:
    return len(vectors_of_norm(f.gram, n))


@dataclass(frozen=True)
class NormCountFingerprint:
    """Cheap isometry invariants: counts of short vectors plus the minimum norm."""

    counts: tuple[tuple[int, int], ...]  # (norm, count) for norms 1..3
    min_norm: Optional[int]

    def to_json_dict(self) -> dict:
        return {"counts": {str(k): v for k, v in self.counts},
                "min_norm": self.min_norm}


def fingerprint(f: SymBilinearForm) -> NormCountFingerprint:
    counts = tuple((n, count_vectors_of_norm(f, n)) for n in (1, 2, 3))
    min_norm = next((n for n, c in counts if c), None)
    if min_norm is None and f.dimension > 0:
        cap = min(f.gram[i][i] for i in range(f.dimension))
        for n in range(4, cap + 1):
            if count_vectors_of_norm(f, n):
                min_norm = n
                break
    return NormCountFingerprint(counts=counts, min_norm=min_norm)


# ---------------------------------------------------------- closed forms


def closed_form_counts(k: int) -> tuple[int, int]:
    """Root counts distinguishing the two rank-(8+k) candidates; equal iff k = 4."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    return (240 + 4 * comb(k, 2), 4 * comb(k + 8, 2))


def substitution_check(k: int) -> bool:
    """Verify the change of variable turning the closed-form norm into a sum of squares.

    With B the closed-form exterior gram, x^T B x = X1^2 + x2^2 + ... + xk^2
    for X1 = 2 x1 + (x2 + ... + xk), and X1 - (x2+...+xk) even pins x1, so
    solutions of norm 2 biject with parity-constrained sum-of-squares tuples.
    """
    from .exterior import exterior_matrix_closed_form

    if not 2 <= k <= 8:
        raise ValueError("supported range is 2 <= k <= 8")
    b = exterior_matrix_closed_form(k)
    lhs = vectors_of_norm(b.gram, 2)

    # right side: X1^2 + sum x_i^2 = 2 with X1 = sum x_i (mod 2)
    rhs = []
    for vec in vectors_of_norm(tuple(tuple(int(i == j) for j in range(k)) for i in range(k)), 2):
        x1big, tail = vec[0], vec[1:]
        if (x1big - sum(tail)) % 2 == 0:
            rhs.append(vec)

    mapped = set()
    for vec in lhs:
        big = (2 * vec[0] + sum(vec[1:]),) + vec[1:]
        if big not in rhs:
            return False
        mapped.add(big)
    return len(mapped) == len(lhs) == len(rhs)
