"""Exact linear algebra: frozen oracles plus algebraic property tests."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from latcert import exactlin as xl
from latcert.errors import SingularMatrix


def cofactor_det(a):
    # independent oracle: Laplace expansion, fine for tiny matrices
    n = len(a)
    if n == 1:
        return a[0][0]
    total = 0
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in a[1:]]
        total += (-1) ** j * a[0][j] * cofactor_det(minor)
    return total


square_matrices = st.integers(1, 4).flatmap(
    lambda n: st.lists(
        st.lists(st.integers(-9, 9), min_size=n, max_size=n),
        min_size=n, max_size=n,
    )
)

rect_matrices = st.tuples(st.integers(1, 4), st.integers(1, 4)).flatmap(
    lambda mn: st.lists(
        st.lists(st.integers(-9, 9), min_size=mn[1], max_size=mn[1]),
        min_size=mn[0], max_size=mn[0],
    )
)


# ----------------------------------------------------------------- det


def test_det_identity():
    assert xl.det(xl.identity(5)) == 1


def test_det_frozen_2x2():
    assert xl.det([[4, 2], [2, 2]]) == 4  # cofactor oracle: 4*2 - 2*2


def test_det_swap():
    assert xl.det([[0, 1], [1, 0]]) == -1


def test_det_rejects_nonsquare():
    with pytest.raises(ValueError):
        xl.det([[1, 2, 3], [4, 5, 6]])


@given(square_matrices)
def test_det_matches_cofactor_oracle(a):
    assert xl.det(a) == cofactor_det(a)


# ----------------------------------------------------------- rational inverse


def test_inverse_identity():
    assert xl.rational_inverse(xl.identity(3)) == [
        [Fraction(int(i == j)) for j in range(3)] for i in range(3)
    ]


def test_inverse_diagonal():
    inv = xl.rational_inverse([[2, 0], [0, 2]])
    assert inv == [[Fraction(1, 2), 0], [0, Fraction(1, 2)]]


def test_inverse_frozen_2x2():
    inv = xl.rational_inverse([[4, 2], [2, 2]])
    assert inv == [
        [Fraction(1, 2), Fraction(-1, 2)],
        [Fraction(-1, 2), Fraction(1)],
    ]
    assert xl.mat_mul([[4, 2], [2, 2]], inv) == xl.identity(2)


def test_inverse_singular():
    with pytest.raises(SingularMatrix):
        xl.rational_inverse([[1, 1], [1, 1]])


@given(square_matrices)
def test_inverse_multiplies_to_identity(a):
    d = xl.det(a)
    if d == 0:
        with pytest.raises(SingularMatrix):
            xl.rational_inverse(a)
    else:
        inv = xl.rational_inverse(a)
        assert xl.mat_mul(a, inv) == xl.identity(len(a))
        assert d * cofactor_det(inv) == 1  # det(A) * det(A^-1) = 1


# ---------------------------------------------------------------- SNF


def test_snf_frozen_h2():
    snf = xl.smith_normal_form([[4, 2], [2, 2]])
    assert snf.diagonal == [2, 2]


def test_snf_frozen_h3():
    snf = xl.smith_normal_form([[4, 2, 2], [2, 2, 1], [2, 1, 2]])
    assert snf.diagonal == [1, 1, 4]


def test_snf_identity():
    snf = xl.smith_normal_form(xl.identity(4))
    assert snf.D == xl.identity(4)


def check_snf(a):
    snf = xl.smith_normal_form(a)
    assert xl.mat_eq(xl.mat_mul(xl.mat_mul(snf.U, a), snf.V), snf.D)
    assert abs(xl.det(snf.U)) == 1
    assert abs(xl.det(snf.V)) == 1
    diag = snf.diagonal
    for i in range(len(diag)):
        assert diag[i] >= 0
        for j in range(len(a)):
            if i != j or j >= len(a[0]):
                continue
        if i + 1 < len(diag) and diag[i] != 0:
            assert diag[i + 1] % diag[i] == 0
        if diag[i] == 0 and i + 1 < len(diag):
            assert diag[i + 1] == 0
    # off-diagonal of D is zero
    for i, row in enumerate(snf.D):
        for j, x in enumerate(row):
            if i != j:
                assert x == 0
    return snf


@given(rect_matrices)
@settings(max_examples=150)
def test_snf_properties(a):
    check_snf(a)


@given(square_matrices)
def test_snf_diagonal_product_is_abs_det(a):
    d = xl.det(a)
    snf = xl.smith_normal_form(a)
    prod = 1
    for x in snf.diagonal:
        prod *= x
    assert prod == abs(d)


def test_snf_deterministic():
    a = [[6, 4, 2], [4, 4, 4], [2, 4, 8]]
    first = xl.smith_normal_form(a)
    second = xl.smith_normal_form(a)
    assert first.U == second.U and first.V == second.V and first.D == second.D


# ---------------------------------------------------------------- mod 2


def test_solve_mod2_identity():
    assert xl.solve_mod2(xl.identity(3), [1, 0, 1]) == [1, 0, 1]


def test_solve_mod2_zero_matrix_no_solution():
    assert xl.solve_mod2([[0, 0], [0, 0]], [1, 0]) is None


def test_solve_mod2_zero_matrix_zero_rhs():
    assert xl.solve_mod2([[4, 2], [2, 2]], [0, 0]) == [0, 0]


@given(rect_matrices, st.data())
def test_solve_mod2_solves(a, data):
    rhs = data.draw(st.lists(st.integers(0, 1), min_size=len(a), max_size=len(a)))
    x = xl.solve_mod2(a, rhs)
    if x is not None:
        assert [y & 1 for y in xl.mat_vec(a, x)] == [y & 1 for y in rhs]
    else:
        # exhaustive cross-check only feasible for narrow matrices
        ncols = len(a[0])
        if ncols <= 4:
            for mask in range(2 ** ncols):
                cand = [(mask >> i) & 1 for i in range(ncols)]
                assert [y & 1 for y in xl.mat_vec(a, cand)] != [y & 1 for y in rhs]


@given(rect_matrices)
def test_kernel_mod2_members_are_solutions(a):
    for vec in xl.kernel_mod2(a):
        assert any(vec)
        assert all(y % 2 == 0 for y in xl.mat_vec(a, vec))


# ----------------------------------------------------------------- HNF


def test_hnf_shape_and_normalization():
    h = xl.hermite_column_form([[1, 0, 2], [1, 2, 0]])
    assert h == [[1, 0], [1, 2]]


def test_hnf_full_lattice():
    assert xl.hermite_column_form([[2, 1], [1, 1]]) == [[1, 0], [0, 1]]


@given(st.integers(2, 4).flatmap(
    lambda n: st.lists(
        st.lists(st.integers(-5, 5), min_size=n, max_size=n),
        min_size=n, max_size=n + 2,
    )
))
def test_hnf_canonical_and_lattice_preserving(gens):
    cols = xl.transpose(gens)  # generators arrive as rows; feed columns
    mat = [list(r) for r in zip(*cols)]
    if xl.rank(mat) < len(mat):
        return
    h = xl.hermite_column_form(mat)
    n = len(h)
    for i in range(n):
        assert h[i][i] > 0
        for j in range(i + 1, n):
            assert h[i][j] == 0
        for j in range(i):
            assert 0 <= h[i][j] < h[i][i]
    # every generator lies in the lattice spanned by h: solve over Q, demand ints
    hinv = xl.rational_inverse(h)
    for col in cols:
        coeffs = xl.mat_vec(hinv, col)
        assert all(c.denominator == 1 for c in coeffs)
    # index agreement: |det h| equals covolume of the generator lattice
    snf = xl.smith_normal_form(mat)
    prod = 1
    for x in snf.diagonal:
        prod *= x
    assert abs(xl.det(h)) == prod
