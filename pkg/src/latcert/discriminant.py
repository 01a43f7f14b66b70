"""Discriminant groups, boundary quadratic linking forms, and the mod-2 lift.

coker(A) is presented through the Smith normal form U A V = D: the map
z -> U z mod D identifies Z^h / A Z^h with the direct sum of Z_{d_i}.
Doubling A doubles D under the same transforms, which is what makes the
lift coker(A) -> coker(2A) a matter of reusing the integer matrix of an
isomorphism in shared SNF coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product
from math import gcd, lcm, prod
from typing import Iterator, Optional, Sequence

from . import exactlin as xl
from .errors import IncompatibleCokernels, NotEven, SingularMatrix, TooLarge

Coords = tuple[int, ...]
SEARCH_ORDER_BOUND = 2 ** 13


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """coker(A) in SNF coordinates; elements are tuples mod the invariant factors."""

    matrix: tuple[tuple[int, ...], ...]      # the presenting A
    snf_u: tuple[tuple[int, ...], ...]       # U with U A V = D
    snf_u_inv: tuple[tuple[int, ...], ...]
    diagonal: tuple[int, ...]                # full SNF diagonal, 1s included

    @cached_property
    def nontrivial(self) -> tuple[int, ...]:
        return tuple(i for i, d in enumerate(self.diagonal) if d != 1)

    @cached_property
    def factors(self) -> tuple[int, ...]:
        return tuple(self.diagonal[i] for i in self.nontrivial)

    @property
    def order(self) -> int:
        return prod(self.factors)

    def coords(self, z: Sequence[int]) -> Coords:
        t = xl.mat_vec([list(r) for r in self.snf_u], list(z))
        return tuple(t[i] % self.diagonal[i] for i in self.nontrivial)

    def representative(self, coords: Coords) -> list[int]:
        full = [0] * len(self.diagonal)
        for i, c in zip(self.nontrivial, coords):
            full[i] = c % self.diagonal[i]
        return xl.mat_vec([list(r) for r in self.snf_u_inv], full)

    def elements(self) -> Iterator[Coords]:
        return product(*(range(d) for d in self.factors))

    def add(self, x: Coords, y: Coords) -> Coords:
        return tuple((a + b) % d for a, b, d in zip(x, y, self.factors))

    def neg(self, x: Coords) -> Coords:
        return tuple((-a) % d for a, d in zip(x, self.factors))

    def element_order(self, x: Coords) -> int:
        return lcm(*(d // gcd(d, c) for c, d in zip(x, self.factors))) if x else 1

    def zero(self) -> Coords:
        return (0,) * len(self.factors)


def discriminant_group(a: Sequence[Sequence[int]]) -> FiniteAbelianGroup:
    a = xl.require_int_matrix(a)
    if not xl.is_square(a) or xl.det(a) == 0:
        raise SingularMatrix("cokernel presentation requires a nonsingular square matrix")
    snf = xl.smith_normal_form(a)
    # U is unimodular so its inverse is integral
    u_inv = [[int(f) for f in row] for row in xl.rational_inverse(snf.U)]
    return FiniteAbelianGroup(
        matrix=tuple(tuple(r) for r in a),
        snf_u=tuple(tuple(r) for r in snf.U),
        snf_u_inv=tuple(tuple(r) for r in u_inv),
        diagonal=tuple(snf.diagonal),
    )


def doubled_group(group: FiniteAbelianGroup) -> FiniteAbelianGroup:
    """coker(2A) presented with the same transforms: U (2A) V = 2D."""
    return FiniteAbelianGroup(
        matrix=tuple(tuple(2 * x for x in row) for row in group.matrix),
        snf_u=group.snf_u,
        snf_u_inv=group.snf_u_inv,
        diagonal=tuple(2 * d for d in group.diagonal),
    )


def reduce_doubled(double: FiniteAbelianGroup, single: FiniteAbelianGroup,
                   coords: Coords) -> Coords:
    """The canonical projection coker(2A) -> coker(A) in SNF coordinates."""
    full = {i: c for i, c in zip(double.nontrivial, coords)}
    return tuple(full.get(i, 0) % single.diagonal[i] for i in single.nontrivial)


# ------------------------------------------------------- group isomorphisms


@dataclass(frozen=True)
class GroupIso:
    """Isomorphism in SNF coordinates: x -> matrix @ x mod target factors."""

    source: FiniteAbelianGroup
    target: FiniteAbelianGroup
    matrix: tuple[tuple[int, ...], ...]  # target-coords rows, source-coords cols

    def __post_init__(self):
        src, tgt = self.source.factors, self.target.factors
        m = self.matrix
        if len(m) != len(tgt) or any(len(row) != len(src) for row in m):
            raise ValueError("isomorphism matrix has wrong shape")
        for j, dj in enumerate(src):
            for i, di in enumerate(tgt):
                if (m[i][j] * dj) % di != 0:
                    raise ValueError("matrix does not define a homomorphism")
        if self.source.order != self.target.order:
            raise ValueError("groups have different orders")
        if len(src) == len(tgt):
            if gcd(xl.det([list(r) for r in m]), self.source.order) != 1:
                raise ValueError("matrix is not invertible on the group")
        else:  # pragma: no cover - shapes always match for SNF bases here
            raise ValueError("unsupported shape")

    def apply(self, coords: Coords) -> Coords:
        vec = xl.mat_vec([list(r) for r in self.matrix], list(coords))
        return tuple(v % d for v, d in zip(vec, self.target.factors))


def identity_iso(group: FiniteAbelianGroup) -> GroupIso:
    k = len(group.factors)
    return GroupIso(group, group, tuple(tuple(int(i == j) for j in range(k))
                                        for i in range(k)))


# --------------------------------------------------- quadratic linking forms


@dataclass(frozen=True)
class QuadraticRefinement:
    """Q with A = Q + Q^T (strict upper triangle plus half the even diagonal)."""

    q: tuple[tuple[int, ...], ...]

    @property
    def bilinear(self) -> list[list[int]]:
        m = [list(r) for r in self.q]
        return [[m[i][j] + m[j][i] for j in range(len(m))] for i in range(len(m))]


def quadratic_refinement(a: Sequence[Sequence[int]]) -> QuadraticRefinement:
    a = xl.require_int_matrix(a)
    if not xl.is_symmetric(a):
        raise ValueError("refinement requires a symmetric matrix")
    n = len(a)
    if any(a[i][i] % 2 for i in range(n)):
        raise NotEven("refinement requires an even diagonal")
    q = [[0] * n for _ in range(n)]
    for i in range(n):
        q[i][i] = a[i][i] // 2
        for j in range(i + 1, n):
            q[i][j] = a[i][j]
    return QuadraticRefinement(tuple(tuple(r) for r in q))


@dataclass(frozen=True)
class QuadraticLinkingForm:
    """q on coker(A): q(pi(z)) = z^T (A^-1)^T Q A^-1 z mod 1."""

    group: FiniteAbelianGroup
    s_num: tuple[tuple[int, ...], ...]
    s_den: int

    def q_of_vector(self, z: Sequence[int]) -> Fraction:
        total = 0
        for i, zi in enumerate(z):
            if zi:
                row = self.s_num[i]
                total += zi * sum(x * y for x, y in zip(row, z))
        return Fraction(total % self.s_den, self.s_den)

    def q(self, coords: Coords) -> Fraction:
        return self.q_of_vector(self.group.representative(coords))

    @cached_property
    def table(self) -> dict[Coords, Fraction]:
        return {x: self.q(x) for x in self.group.elements()}

    def pairing(self, x: Coords, y: Coords) -> Fraction:
        """b(x, y) = q(x+y) - q(x) - q(y) mod 1."""
        t = self.table
        val = t[self.group.add(x, y)] - t[x] - t[y]
        return val % 1

    def value_multiset(self) -> dict[Fraction, int]:
        out: dict[Fraction, int] = {}
        for v in self.table.values():
            out[v] = out.get(v, 0) + 1
        return out


def boundary_linking_form(a: Sequence[Sequence[int]],
                          refinement: Optional[QuadraticRefinement] = None) -> QuadraticLinkingForm:
    a = xl.require_int_matrix(a)
    if refinement is None:
        refinement = quadratic_refinement(a)
    bil = refinement.bilinear
    if not xl.mat_eq(bil, a):
        raise ValueError("refinement does not match the form: Q + Q^T != A")
    group = discriminant_group(a)
    a_inv = xl.rational_inverse(a)
    q_mat = [[Fraction(x) for x in row] for row in refinement.q]
    s = xl.mat_mul(xl.mat_mul(xl.transpose(a_inv), q_mat), a_inv)
    den = lcm(*(f.denominator for row in s for f in row)) if s else 1
    s_num = tuple(tuple(int(f * den) for f in row) for row in s)
    form = QuadraticLinkingForm(group=group, s_num=s_num, s_den=den)

    # well-definedness spot check on generators: shifting by columns of A
    n = len(a)
    for coords in _generators(group):
        z = form.group.representative(coords)
        base = form.q_of_vector(z)
        for j in range(n):
            shifted = [zi + a[i][j] for i, zi in enumerate(z)]
            if form.q_of_vector(shifted) != base:
                raise AssertionError("linking form not well defined on cosets")
    return form


def _generators(group: FiniteAbelianGroup) -> list[Coords]:
    k = len(group.factors)
    return [tuple(int(i == j) for i in range(k)) for j in range(k)]


# ----------------------------------------------------------------- the lift


def lift_isometry_mod2(psi: GroupIso, a_u: Sequence[Sequence[int]],
                       a_b: Sequence[Sequence[int]]) -> GroupIso:
    """Lift coker(A_u) -> coker(A_b) to coker(2A_u) -> coker(2A_b).

    In shared SNF coordinates the projection coker(2A) -> coker(A) is
    componentwise reduction, so the integer matrix of psi, padded by the
    identity on the factors that were trivial downstairs, is itself a lift.
    """
    gu = discriminant_group(a_u)
    gb = discriminant_group(a_b)
    if gu.diagonal != gb.diagonal:
        raise IncompatibleCokernels(
            f"SNF diagonals differ: {gu.diagonal} vs {gb.diagonal}")
    if psi.source.factors != gu.factors or psi.target.factors != gb.factors:
        raise IncompatibleCokernels("isomorphism does not match the given cokernels")
    gu2, gb2 = doubled_group(gu), doubled_group(gb)
    h = len(gu.diagonal)
    tail = gu.nontrivial
    lifted = [[int(i == j) for j in range(h)] for i in range(h)]
    for ti, i in enumerate(tail):
        for tj, j in enumerate(tail):
            lifted[i][j] = psi.matrix[ti][tj]
    out = GroupIso(gu2, gb2, tuple(tuple(r) for r in lifted))

    # the commuting square, checked on generators (homs agree everywhere then)
    for g in _generators(gu2):
        down_then_psi = psi.apply(reduce_doubled(gu2, gu, g))
        lift_then_down = reduce_doubled(gb2, gb, out.apply(g))
        if down_then_psi != lift_then_down:
            raise AssertionError("lift does not commute with reduction")
    return out


def is_linking_isometry(q1: QuadraticLinkingForm, q2: QuadraticLinkingForm,
                        iso: GroupIso) -> bool:
    """Exhaustive check q2(iso(x)) == q1(x)."""
    t1, t2 = q1.table, q2.table
    return all(t2[iso.apply(x)] == t1[x] for x in q1.group.elements())


LIFT_ORDER_BOUND = 2 ** 16


def lift_linking_isometry(psi: GroupIso, a_u: Sequence[Sequence[int]],
                          a_b: Sequence[Sequence[int]]) -> Optional[GroupIso]:
    """A reduction-compatible lift that is also an isometry of the doubled
    boundary linking forms, or None if no such lift exists.

    The plain entrywise lift commutes with reduction but does not in general
    respect the quadratic refinements: the doubled form halves values that
    only exist mod 1, leaving a mod-2 adjustment free in each coordinate.
    So after trying the entrywise lift we search its reduction fiber, a coset
    of Z_2^h per generator image, pruned by element order, q value, and the
    pairings against already-placed images.
    """
    gu = discriminant_group(a_u)
    gb = discriminant_group(a_b)
    if gu.diagonal != gb.diagonal:
        raise IncompatibleCokernels(
            f"SNF diagonals differ: {gu.diagonal} vs {gb.diagonal}")
    a2_u = [[2 * x for x in row] for row in a_u]
    a2_b = [[2 * x for x in row] for row in a_b]
    q2u = boundary_linking_form(a2_u)
    q2b = boundary_linking_form(a2_b)
    gu2, gb2 = q2u.group, q2b.group
    if gu2.order > LIFT_ORDER_BOUND:
        raise TooLarge(f"doubled group order exceeds {LIFT_ORDER_BOUND}")
    # deterministic pivoting makes SNF(2A) reuse the transforms of SNF(A);
    # everything below leans on the coordinate systems agreeing
    assert gu2.snf_u == gu.snf_u and gb2.snf_u == gb.snf_u
    assert gu2.diagonal == tuple(2 * d for d in gu.diagonal)

    entrywise = lift_isometry_mod2(psi, a_u, a_b)
    if is_linking_isometry(q2u, q2b, entrywise):
        return entrywise

    if q2u.value_multiset() != q2b.value_multiset():
        return None
    gens = _generators(gu2)
    t1, t2 = q2u.table, q2b.table
    images: list[Coords] = []

    def fiber(down: Coords) -> list[Coords]:
        # everything in coker(2A_b) reducing to the given coker(A_b) element
        at = {i: c for i, c in zip(gb.nontrivial, down)}
        choices = []
        for i in gb2.nontrivial:
            d = gb.diagonal[i]
            base = at.get(i, 0)
            choices.append((base, base + d))
        return [tuple(c) for c in product(*choices)]

    def place(level: int) -> Optional[GroupIso]:
        if level == len(gens):
            matrix = tuple(tuple(img[i] for img in images)
                           for i in range(len(gb2.factors)))
            try:
                return GroupIso(gu2, gb2, matrix)
            except ValueError:
                return None
        g = gens[level]
        down = psi.apply(reduce_doubled(gu2, gu, g))
        want_q = t1[g]
        want_order = gu2.factors[level]
        for cand in fiber(down):
            if t2[cand] != want_q or gb2.element_order(cand) != want_order:
                continue
            if any(q2b.pairing(cand, images[j]) != q2u.pairing(g, gens[j])
                   for j in range(level)):
                continue
            images.append(cand)
            got = place(level + 1)
            if got is not None:
                return got
            images.pop()
        return None

    found = place(0)
    if found is not None:
        assert is_linking_isometry(q2u, q2b, found)
    return found


# ---------------------------------------------------------------- the search


def linking_isometry_search(q1: QuadraticLinkingForm,
                            q2: QuadraticLinkingForm) -> Optional[GroupIso]:
    """Isomorphism carrying q1 to q2, by generator-image backtracking."""
    g1, g2 = q1.group, q2.group
    if g1.order > SEARCH_ORDER_BOUND or g2.order > SEARCH_ORDER_BOUND:
        raise TooLarge(f"group order exceeds the search bound {SEARCH_ORDER_BOUND}")
    if g1.factors != g2.factors:
        return None
    if q1.value_multiset() != q2.value_multiset():
        return None
    gens = _generators(g1)
    t1, t2 = q1.table, q2.table
    all2 = list(g2.elements())
    images: list[Coords] = []

    def place(level: int) -> bool:
        if level == len(gens):
            return True
        g = gens[level]
        want_q = t1[g]
        want_order = g1.factors[level]
        for cand in all2:
            if t2[cand] != want_q or g2.element_order(cand) != want_order:
                continue
            if any(q2.pairing(cand, images[j]) != q1.pairing(g, gens[j])
                   for j in range(level)):
                continue
            images.append(cand)
            if place(level + 1):
                return True
            images.pop()
        return False

    if not place(0):
        return None
    matrix = tuple(tuple(img[i] for img in images) for i in range(len(g2.factors)))
    try:
        iso = GroupIso(g1, g2, matrix)
    except ValueError:
        iso = _search_full(q1, q2)  # pairing-compatible but singular: rare, retry exhaustively
        if iso is None:
            return None
    assert is_linking_isometry(q1, q2, iso)
    return iso


def _search_full(q1: QuadraticLinkingForm, q2: QuadraticLinkingForm) -> Optional[GroupIso]:
    """Last-resort: backtracking over images with invertibility retried at the leaves."""
    g1, g2 = q1.group, q2.group
    gens = _generators(g1)
    t1, t2 = q1.table, q2.table
    all2 = list(g2.elements())
    images: list[Coords] = []

    def place(level: int) -> Optional[GroupIso]:
        if level == len(gens):
            matrix = tuple(tuple(img[i] for img in images) for i in range(len(g2.factors)))
            try:
                return GroupIso(g1, g2, matrix)
            except ValueError:
                return None
        g = gens[level]
        for cand in all2:
            if t2[cand] != t1[g] or g2.element_order(cand) != g1.factors[level]:
                continue
            if any(q2.pairing(cand, images[j]) != q1.pairing(g, gens[j])
                   for j in range(level)):
                continue
            images.append(cand)
            got = place(level + 1)
            if got is not None:
                return got
            images.pop()
        return None

    return place(0)
