"""Exterior non-degenerate form: the even-norm sublattice of an odd form.

For an odd non-singular b on Z^h, the vectors of even norm form an index-2
sublattice (x -> b(x,x) mod 2 is linear mod 2). Its induced gram is the
exterior form; a closed-form matrix is available when b is diagonal (1)^h.
The Z[Z2]-action on this sublattice is the scalar one (T = -1), so no module
structure is carried beyond the embedding itself.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import exactlin as xl
from .forms import Gram, SymBilinearForm, _freeze


@dataclass(frozen=True)
class SublatticeEmbedding:
    """Columns of `basis` express the sublattice in ambient coordinates."""

    ambient: SymBilinearForm
    basis: Gram
    induced: SymBilinearForm

    def __post_init__(self):
        b = [list(r) for r in self.basis]
        if xl.rank(b) != len(b[0]):
            raise ValueError("basis must have full column rank")
        got = xl.mat_mul(xl.mat_mul(xl.transpose(b), [list(r) for r in self.ambient.gram]), b)
        if not xl.mat_eq(got, [list(r) for r in self.induced.gram]):
            raise ValueError("induced gram does not match basis^T . ambient . basis")

    @property
    def index(self) -> int:
        b = [list(r) for r in self.basis]
        if len(b) != len(b[0]):
            raise ValueError("index defined only for full-rank square embeddings")
        return abs(xl.det(b))


def embed(ambient: SymBilinearForm, basis_cols: list[list[int]]) -> SublatticeEmbedding:
    induced = xl.mat_mul(
        xl.mat_mul(xl.transpose(basis_cols), [list(r) for r in ambient.gram]), basis_cols)
    return SublatticeEmbedding(ambient=ambient, basis=_freeze(basis_cols),
                               induced=SymBilinearForm(_freeze(induced)))


def exterior_nd_form(b: SymBilinearForm) -> SublatticeEmbedding:
    """Embedding of {x : b(x,x) even}; index 2 for odd b, identity for even b."""
    h = b.dimension
    if b.is_even:
        return embed(b, xl.identity(h))
    parity_row = [[b.gram[i][i] % 2 for i in range(h)]]
    generators = [list(col) for col in zip(*xl.kernel_mod2(parity_row))]
    first_odd = next(i for i in range(h) if b.gram[i][i] % 2)
    double = [[2 if i == first_odd else 0] for i in range(h)]
    gens = [row_k + row_d for row_k, row_d in zip(generators, double)] if generators \
        else double
    basis = xl.hermite_column_form(gens)
    return embed(b, basis)


def exterior_matrix_closed_form(h: int) -> SymBilinearForm:
    """The exterior gram of (1)^h in the basis (2e1, e1+e2, ..., e1+eh)."""
    if h < 1:
        raise ValueError("h must be at least 1")
    gram = [[0] * h for _ in range(h)]
    gram[0][0] = 4
    for i in range(1, h):
        gram[0][i] = gram[i][0] = 2
        gram[i][i] = 2
        for j in range(i + 1, h):
            gram[i][j] = gram[j][i] = 1
    return SymBilinearForm(_freeze(gram))
