"""Index-two sublattices, their unimodular overlattices, and neighbor counts.

An overlattice M <= N <= M* corresponds to a subgroup of M*/M on which the
rational pairing is integral; N is unimodular exactly when the subgroup's
order squares to det(M). Everything is enumerated through the finite glue
group, so counts come out exact rather than cited.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd, isqrt
from typing import Optional, Sequence

from . import exactlin as xl
from .discriminant import FiniteAbelianGroup, discriminant_group
from .errors import BadRank, TooLarge
from .exterior import SublatticeEmbedding, embed, exterior_nd_form
from .forms import SymBilinearForm, is_isometric_definite, is_positive_definite

GLUE_ORDER_BOUND = 2 ** 8


def is_d_primitive(form: SymBilinearForm, x: Sequence[int], d: int) -> bool:
    """Does the class of x generate a subgroup of order d in L/dL?"""
    if d < 1:
        raise ValueError("d must be positive")
    if len(x) != form.dimension:
        raise ValueError("vector length does not match the form")
    content = 0
    for xi in x:
        content = gcd(content, xi)
    return d // gcd(d, content) == d


def m_d_sublattice(form: SymBilinearForm, x: Sequence[int], d: int) -> SublatticeEmbedding:
    """The sublattice {m : m.x = 0 mod d}, with its canonical basis."""
    if d < 1:
        raise ValueError("d must be positive")
    n = form.dimension
    if len(x) != n:
        raise ValueError("vector length does not match the form")
    r = [v % d for v in xl.mat_vec([list(row) for row in form.gram], list(x))]
    if all(v == 0 for v in r) or d == 1:
        return embed(form, xl.identity(n))
    # diagonalize the functional: r V = (g, 0, ..., 0), then the kernel of
    # y -> r.y mod d is V . diag(d/gcd(g,d), 1, ..., 1) up to column HNF
    snf = xl.smith_normal_form([r])
    g = snf.D[0][0]
    step = d // gcd(g, d)
    gens = [[snf.V[i][j] * (step if j == 0 else 1) for j in range(n)]
            for i in range(n)]
    for i in range(n):  # d Z^n always lies in the kernel
        col = [0] * n
        col[i] = d
        for row, v in zip(gens, col):
            row.append(v)
    basis = xl.hermite_column_form(gens)
    return embed(form, basis)


# ---------------------------------------------------------------- dual data


@dataclass(frozen=True)
class DualOverlatticeData:
    """A sublattice with the finite machinery of its dual quotient."""

    base: SublatticeEmbedding
    dual_basis: tuple[tuple[Fraction, ...], ...]  # columns: M* basis in M coords
    glue: FiniteAbelianGroup

    def glue_vector(self, coords: tuple[int, ...]) -> list[Fraction]:
        """Coset representative in M-coordinates (rational)."""
        z = self.glue.representative(coords)
        return [sum(self.dual_basis[i][j] * z[j] for j in range(len(z)))
                for i in range(len(z))]

    def pairing(self, v: Sequence[Fraction], w: Sequence[Fraction]) -> Fraction:
        g = self.base.induced.gram
        return sum(v[i] * g[i][j] * w[j]
                   for i in range(len(v)) for j in range(len(w)))


def overlattice_data(base: SublatticeEmbedding) -> DualOverlatticeData:
    gram = [list(r) for r in base.induced.gram]
    dual = tuple(tuple(row) for row in xl.rational_inverse(gram))
    glue = discriminant_group(gram)
    return DualOverlatticeData(base=base, dual_basis=dual, glue=glue)


@dataclass(frozen=True)
class Overlattice:
    form: SymBilinearForm
    basis_in_base: tuple[tuple[Fraction, ...], ...]  # N basis in M coords
    base_in_over: tuple[tuple[int, ...], ...]        # M basis in N coords
    parity: str                                      # "odd" or "even"


def _subgroups(group: FiniteAbelianGroup, max_generators: int = 2):
    """All distinct subgroups generated by up to max_generators elements."""
    elems = list(group.elements())
    seen = set()
    out = []
    for k in range(0, max_generators + 1):
        for gens in combinations(elems, k):
            members = {group.zero()}
            frontier = [group.zero()]
            while frontier:
                cur = frontier.pop()
                for g in gens:
                    nxt = group.add(cur, g)
                    if nxt not in members:
                        members.add(nxt)
                        frontier.append(nxt)
            key = frozenset(members)
            if key not in seen:
                seen.add(key)
                out.append((gens, members))
    return out


def unimodular_overlattices(data: DualOverlatticeData) -> list[Overlattice]:
    """Every integral unimodular lattice between M and M*."""
    glue = data.glue
    if glue.order > GLUE_ORDER_BOUND:
        raise TooLarge(f"glue group order exceeds {GLUE_ORDER_BOUND}")
    det_m = abs(data.base.induced.determinant)
    root = isqrt(det_m)
    if root * root != det_m:
        return []
    n = data.base.induced.dimension
    out = []
    for gens, members in _subgroups(glue):
        if len(members) != root:
            continue
        vecs = [data.glue_vector(g) for g in gens]
        if any(data.pairing(v, w).denominator != 1
               for v in vecs for w in vecs):
            continue
        # assemble N = M + <vecs>: scale to clear denominators, column HNF
        denom = 1
        for v in vecs:
            for f in v:
                denom = denom * f.denominator // gcd(denom, f.denominator)
        cols = [[denom if i == j else 0 for j in range(n)] for i in range(n)]
        for v in vecs:
            for i in range(n):
                cols[i].append(int(v[i] * denom))
        scaled = xl.hermite_column_form(cols)
        basis = [[Fraction(scaled[i][j], denom) for j in range(n)]
                 for i in range(n)]
        g_m = data.base.induced.gram
        got = [[sum(basis[k][i] * g_m[k][l] * basis[l][j]
                    for k in range(n) for l in range(n))
                for j in range(n)] for i in range(n)]
        assert all(f.denominator == 1 for row in got for f in row)
        gram = [[int(f) for f in row] for row in got]
        form = SymBilinearForm.from_gram(gram)
        assert abs(form.determinant) == 1
        inv = xl.rational_inverse([[f for f in row] for row in basis])
        assert all(f.denominator == 1 for row in inv for f in row)
        base_in_over = tuple(tuple(int(f) for f in row) for row in inv)
        parity = "odd" if any(gram[i][i] % 2 for i in range(n)) else "even"
        out.append(Overlattice(form=form,
                               basis_in_base=tuple(tuple(r) for r in basis),
                               base_in_over=base_in_over,
                               parity=parity))
    out.sort(key=lambda o: (o.parity, o.form.gram))
    return out


# -------------------------------------------------------------- the lattices


def gamma_lattice(n: int) -> SymBilinearForm:
    """The unimodular lattice spanned by the even-sum vectors and the
    all-halves vector; integral only in ranks divisible by four."""
    if n < 4 or n % 4:
        raise BadRank("rank must be a positive multiple of four")
    # generators, doubled to stay integral: the even-sum root system plus
    # the all-halves vector; column HNF picks the canonical basis
    cols = [[0] * n for _ in range(n)]
    for j in range(n - 1):  # 2(e_j - e_{j+1})
        cols[j][j] = 2
        cols[j + 1][j] = -2
    for row in cols:
        row.append(0)
    cols[n - 2][n - 1] = cols[n - 1][n - 1] = 2  # 2(e_{n-1} + e_n)
    for i in range(n):  # e_1 + ... + e_n, twice the half vector
        cols[i].append(1)
    basis = xl.hermite_column_form(cols)
    gram = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            val = Fraction(sum(basis[k][i] * basis[k][j] for k in range(n)), 4)
            assert val.denominator == 1
            gram[i][j] = int(val)
    return SymBilinearForm.from_gram(gram)


def two_neighbors(b: SymBilinearForm,
                  x: Optional[Sequence[int]] = None) -> list[Overlattice]:
    """Unimodular lattices meeting b in index two along the vector x.

    Enumerates the unimodular overlattices of {m : m.x = 0 mod 2} and drops
    the copy of b itself, recognized by its composite basis being integral
    and unimodular in the original coordinates. Default x is the all-ones
    vector.
    """
    n = b.dimension
    vec = [1] * n if x is None else list(x)
    sub = m_d_sublattice(b, vec, 2)
    overs = unimodular_overlattices(overlattice_data(sub))
    out = []
    for o in overs:
        comp = [[sum(sub.basis[i][k] * o.basis_in_base[k][j] for k in range(n))
                 for j in range(n)] for i in range(n)]
        if all(f.denominator == 1 for row in comp for f in row):
            ints = [[int(f) for f in row] for row in comp]
            if abs(xl.det(ints)) == 1:
                continue
        out.append(o)
    return out


def classify_sharing_exterior(b: SymBilinearForm) -> list[SymBilinearForm]:
    """Isometry classes of odd unimodular forms with the same exterior form.

    The class of b comes first; a second class can only appear in ranks
    congruent to 4 mod 8.
    """
    if b.is_even:
        raise ValueError("form must be odd")
    if abs(b.determinant) != 1:
        raise ValueError("form must be unimodular")
    if not is_positive_definite(b):
        raise ValueError("form must be positive definite")
    if b.dimension > 14:
        raise ValueError("rank at most 14 supported")
    data = overlattice_data(exterior_nd_form(b))
    odd = [o.form for o in unimodular_overlattices(data) if o.parity == "odd"]
    classes: list[SymBilinearForm] = [b]
    for form in odd:
        if all(is_isometric_definite(form, c) is None for c in classes):
            classes.append(form)
    return classes
