"""Hermitian forms over the group ring of the two-element group.

Lambda = Z[T]/(T^2-1). The involution fixes T, so hermitian means symmetric
gram. Modules decompose as Z+^a + Z-^b + Lambda^c; generators are kept in
that order throughout, which makes the two quotient maps (kill the minus
part, kill the plus part) plain coordinate projections.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence

from . import exactlin as xl
from .errors import GlueIncompatible, PullbackMismatch
from .forms import FormIsometry, SymBilinearForm

LGram = tuple[tuple["GroupRingElement", ...], ...]


@dataclass(frozen=True)
class GroupRingElement:
    """p + q*T with T^2 = 1."""

    p: int
    q: int

    def __add__(self, other: "GroupRingElement") -> "GroupRingElement":
        return GroupRingElement(self.p + other.p, self.q + other.q)

    def __sub__(self, other: "GroupRingElement") -> "GroupRingElement":
        return GroupRingElement(self.p - other.p, self.q - other.q)

    def __neg__(self) -> "GroupRingElement":
        return GroupRingElement(-self.p, -self.q)

    def __mul__(self, other: "GroupRingElement") -> "GroupRingElement":
        return GroupRingElement(self.p * other.p + self.q * other.q,
                                self.p * other.q + self.q * other.p)

    @property
    def plus_value(self) -> int:
        """Image in Z+ = Lambda/(1-T)."""
        return self.p + self.q

    @property
    def minus_value(self) -> int:
        """Image in Z- = Lambda/(1+T)."""
        return self.p - self.q

    def is_zero(self) -> bool:
        return self.p == 0 and self.q == 0


ZERO = GroupRingElement(0, 0)
ONE = GroupRingElement(1, 0)
T = GroupRingElement(0, 1)


def scalar(n: int) -> GroupRingElement:
    return GroupRingElement(n, 0)


@dataclass(frozen=True)
class LambdaModule:
    a: int  # Z+ summands
    b: int  # Z- summands
    c: int  # Lambda summands

    def __post_init__(self):
        if min(self.a, self.b, self.c) < 0:
            raise ValueError("summand multiplicities must be nonnegative")

    @property
    def generators(self) -> int:
        return self.a + self.b + self.c

    @property
    def rank(self) -> int:
        return self.a + self.b + 2 * self.c

    def plus_indices(self) -> list[int]:
        """Generators surviving in M/M-: the Z+ block then the Lambda block."""
        return list(range(self.a)) + list(range(self.a + self.b, self.generators))

    def minus_indices(self) -> list[int]:
        return list(range(self.a, self.generators))


@dataclass(frozen=True)
class HermitianForm:
    module: LambdaModule
    gram: LGram

    def __post_init__(self):
        n = self.module.generators
        g = self.gram
        if len(g) != n or any(len(row) != n for row in g):
            raise ValueError("gram size does not match the module")
        for i in range(n):
            for j in range(n):
                if g[i][j] != g[j][i]:
                    raise ValueError("gram is not hermitian")
        a, b = self.module.a, self.module.b
        for i in range(a):  # rows pairing a Z+ generator: T acts trivially
            for j in range(n):
                e = g[i][j]
                if a <= j < a + b:
                    if not e.is_zero():
                        raise ValueError("Z+ and Z- generators must pair to zero")
                elif e.p != e.q:
                    raise ValueError("Z+ rows must lie in Z(1+T)")
        for i in range(a, a + b):  # rows pairing a Z- generator: T acts by -1
            for j in range(n):
                e = g[i][j]
                if j >= a and e.p != -e.q:
                    raise ValueError("Z- rows must lie in Z(1-T)")

    def plus_part(self) -> SymBilinearForm:
        idx = self.module.plus_indices()
        return SymBilinearForm(tuple(
            tuple(self.gram[i][j].plus_value for j in idx) for i in idx))

    def minus_part(self) -> SymBilinearForm:
        idx = self.module.minus_indices()
        return SymBilinearForm(tuple(
            tuple(self.gram[i][j].minus_value for j in idx) for i in idx))

    @cached_property
    def abelian_gram(self) -> tuple[tuple[int, ...], ...]:
        """The underlying Z-bilinear form on the basis s.., m.., (l, Tl)..,
        pairing by the identity-coefficient of the Lambda value."""
        a, b, c = self.module.a, self.module.b, self.module.c
        basis = [(i, ONE) for i in range(a + b)]
        for k in range(c):
            basis.append((a + b + k, ONE))
            basis.append((a + b + k, T))
        out = []
        for gi, si in basis:
            row = []
            for gj, sj in basis:
                row.append((si * sj * self.gram[gi][gj]).p)
            out.append(tuple(row))
        return tuple(out)

    def radical_rank(self) -> int:
        m = [list(r) for r in self.abelian_gram]
        return self.module.rank - (xl.rank(m) if m else 0)

    def to_json_dict(self) -> dict:
        return {
            "module": [self.module.a, self.module.b, self.module.c],
            "gram": [[[e.p, e.q] for e in row] for row in self.gram],
        }


def form_from_json_dict(doc: dict) -> HermitianForm:
    mod = LambdaModule(*(int(x) for x in doc["module"]))
    gram = tuple(tuple(GroupRingElement(int(e[0]), int(e[1])) for e in row)
                 for row in doc["gram"])
    return HermitianForm(mod, gram)


def hyperbolic_hermitian() -> HermitianForm:
    """The hyperbolic form on Lambda^2."""
    return HermitianForm(LambdaModule(0, 0, 2),
                         ((ZERO, ONE), (ONE, ZERO)))


def direct_sum_hermitian(f: HermitianForm, g: HermitianForm) -> HermitianForm:
    """Block sum, reordered into the canonical s.., m.., l.. layout."""
    mf, mg = f.module, g.module
    mod = LambdaModule(mf.a + mg.a, mf.b + mg.b, mf.c + mg.c)
    # positions of f's and g's generators inside the sum
    fpos = (list(range(mf.a))
            + [mod.a + i for i in range(mf.b)]
            + [mod.a + mod.b + i for i in range(mf.c)])
    gpos = ([mf.a + i for i in range(mg.a)]
            + [mod.a + mf.b + i for i in range(mg.b)]
            + [mod.a + mod.b + mf.c + i for i in range(mg.c)])
    n = mod.generators
    gram = [[ZERO] * n for _ in range(n)]
    for i in range(mf.generators):
        for j in range(mf.generators):
            gram[fpos[i]][fpos[j]] = f.gram[i][j]
    for i in range(mg.generators):
        for j in range(mg.generators):
            gram[gpos[i]][gpos[j]] = g.gram[i][j]
    return HermitianForm(mod, tuple(tuple(r) for r in gram))


# ------------------------------------------------------- parts and pullback


def plus_minus_parts(f: HermitianForm) -> tuple[SymBilinearForm, SymBilinearForm]:
    return f.plus_part(), f.minus_part()


def two_part(part: SymBilinearForm, module: LambdaModule) -> tuple[tuple[int, ...], ...]:
    """The Lambda-block of a plus or minus part, reduced mod 2."""
    c = module.c
    n = part.dimension
    if n not in (module.a + c, module.b + c):
        raise ValueError("part does not match the module")
    start = n - c
    return tuple(tuple(part.gram[i][j] % 2 for j in range(start, n))
                 for i in range(start, n))


def _transport_plus(plus: SymBilinearForm, module: LambdaModule,
                    beta: Optional[Sequence[Sequence[int]]]) -> list[list[int]]:
    """Rewrite the plus part in the coordinates the pullback uses: the given
    basis of Z+^(a+c) differs from the canonical one by beta on the
    Lambda-block."""
    p = [list(r) for r in plus.gram]
    c = module.c
    if beta is None or c == 0:
        return p
    beta = xl.require_int_matrix(beta)
    if len(beta) != c or not xl.is_unimodular(beta):
        raise ValueError("beta must be a unimodular matrix on the Lambda-block")
    inv = [[int(f) for f in row] for row in xl.rational_inverse(beta)]
    t = [[int(i == j) for j in range(module.a + c)] for i in range(module.a + c)]
    for i in range(c):
        for j in range(c):
            t[module.a + i][module.a + j] = inv[i][j]
    return xl.mat_mul(xl.mat_mul(xl.transpose(t), p), t)


def pullback(plus: SymBilinearForm, minus: SymBilinearForm, module: LambdaModule,
             beta: Optional[Sequence[Sequence[int]]] = None) -> HermitianForm:
    """The unique hermitian form whose parts are the given pair.

    Both parts are zero-extended to the full generator set; the hermitian
    entry is then ((P+M) + (P-M)T)/2, which is integral exactly when P and M
    agree mod 2 entrywise. That one congruence covers the evenness of the
    pure Z+/Z- pairings and the mod-2 matching on the Lambda-block.
    """
    a, b, c = module.a, module.b, module.c
    if plus.dimension != a + c or minus.dimension != b + c:
        raise ValueError("part ranks do not match the module")
    p_small = _transport_plus(plus, module, beta)
    n = module.generators
    pfull = [[0] * n for _ in range(n)]
    mfull = [[0] * n for _ in range(n)]
    pidx = module.plus_indices()
    midx = module.minus_indices()
    for i, gi in enumerate(pidx):
        for j, gj in enumerate(pidx):
            pfull[gi][gj] = p_small[i][j]
    for i, gi in enumerate(midx):
        for j, gj in enumerate(midx):
            mfull[gi][gj] = minus.gram[i][j]
    for i in range(n):
        for j in range(n):
            if (pfull[i][j] - mfull[i][j]) % 2:
                raise PullbackMismatch(
                    "plus and minus parts disagree mod 2 at "
                    f"generator pair ({i}, {j})")
    gram = tuple(tuple(GroupRingElement((pfull[i][j] + mfull[i][j]) // 2,
                                        (pfull[i][j] - mfull[i][j]) // 2)
                       for j in range(n)) for i in range(n))
    return HermitianForm(module, gram)


@dataclass(frozen=True)
class PullbackSquare:
    """A hermitian form together with the pair it is pulled back from."""

    hermitian: HermitianForm
    plus: SymBilinearForm
    minus: SymBilinearForm
    beta: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        mod = self.hermitian.module
        got_plus = self.hermitian.plus_part()
        want = _transport_plus(self.plus, mod, [list(r) for r in self.beta])
        if not xl.mat_eq([list(r) for r in got_plus.gram], want):
            raise ValueError("plus part does not match the square")
        if self.hermitian.minus_part() != self.minus:
            raise ValueError("minus part does not match the square")


def surface_exterior_form(qnd: SymBilinearForm) -> PullbackSquare:
    """The hermitian form (1-T)*Qnd on Z- + Lambda^(h-1), with its parts.

    The minus part is 2*Qnd, the plus part vanishes, and the radical has
    rank h-1: only the Z- direction pairs nontrivially after abelianizing.
    """
    h = qnd.dimension
    if h < 1:
        raise ValueError("form must have positive rank")
    if qnd.determinant == 0:
        raise ValueError("form must be non-degenerate")
    module = LambdaModule(0, 1, h - 1)
    gram = tuple(tuple(GroupRingElement(qnd.gram[i][j], -qnd.gram[i][j])
                       for j in range(h)) for i in range(h))
    herm = HermitianForm(module, gram)
    beta = tuple(tuple(int(i == j) for j in range(h - 1)) for i in range(h - 1))
    return PullbackSquare(hermitian=herm, plus=herm.plus_part(),
                          minus=herm.minus_part(), beta=beta)


# ------------------------------------------------------------------ gluing


@dataclass(frozen=True)
class HermitianIsometry:
    source: HermitianForm
    target: HermitianForm
    matrix: LGram  # columns express target generators in source coordinates

    def __post_init__(self):
        m = self.matrix
        got = _herm_mat_mul(_herm_transpose(m),
                            _herm_mat_mul(self.source.gram, m))
        if got != self.target.gram:
            raise ValueError("matrix is not an isometry of the hermitian forms")


def _herm_transpose(m: LGram) -> LGram:
    return tuple(tuple(m[i][j] for i in range(len(m))) for j in range(len(m[0])))


def _herm_mat_mul(x: LGram, y: LGram) -> LGram:
    n, k, m = len(x), len(y), len(y[0])
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = ZERO
            for t in range(k):
                acc = acc + x[i][t] * y[t][j]
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def glue_isometry(alpha_plus: FormIsometry, alpha_minus: FormIsometry,
                  module: LambdaModule) -> HermitianIsometry:
    """Assemble a hermitian isometry from compatible plus and minus pieces.

    Coefficients landing on a Z+ or Z- generator are plain integers read off
    the matching piece. Coefficients landing on a Lambda generator come from
    both pieces as ((a+b) + (a-b)T)/2, so those rows must agree mod 2 after
    zero-extension; a violation means the pieces do not glue (equivalently,
    they induce different maps on the mod-2 quotient).
    """
    a, b, c = module.a, module.b, module.c
    if alpha_plus.source.dimension != a + c or alpha_minus.source.dimension != b + c:
        raise ValueError("isometry ranks do not match the module")
    n = module.generators
    pidx = module.plus_indices()
    midx = module.minus_indices()
    pfull = [[0] * n for _ in range(n)]
    mfull = [[0] * n for _ in range(n)]
    for i, gi in enumerate(pidx):
        for j, gj in enumerate(pidx):
            pfull[gi][gj] = alpha_plus.matrix[i][j]
    for i, gi in enumerate(midx):
        for j, gj in enumerate(midx):
            mfull[gi][gj] = alpha_minus.matrix[i][j]
    glued_rows = []
    for i in range(n):
        row = []
        for j in range(n):
            if i < a:
                row.append(GroupRingElement(pfull[i][j], 0))
            elif i < a + b:
                row.append(GroupRingElement(mfull[i][j], 0))
            else:
                if (pfull[i][j] - mfull[i][j]) % 2:
                    raise GlueIncompatible(
                        f"pieces disagree mod 2 at generator pair ({i}, {j})")
                row.append(GroupRingElement((pfull[i][j] + mfull[i][j]) // 2,
                                            (pfull[i][j] - mfull[i][j]) // 2))
        glued_rows.append(tuple(row))
    glued = tuple(glued_rows)
    source = pullback(alpha_plus.source, alpha_minus.source, module)
    target = pullback(alpha_plus.target, alpha_minus.target, module)
    return HermitianIsometry(source, target, glued)
