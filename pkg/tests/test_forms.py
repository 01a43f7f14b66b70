"""Symmetric bilinear forms: invariants, characteristic vectors, isometry search."""

import random
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from latcert import exactlin as xl
from latcert import forms
from latcert.errors import DegenerateForm, UnsupportedIndefinite

from helpers import congruent_gram, random_definite_gram, random_unimodular


def leading_minors_oracle(gram):
    # Jacobi: signature from signs of leading principal minors (no zero minors)
    n = len(gram)
    minors = [1] + [xl.det([row[: k + 1] for row in gram[: k + 1]]) for k in range(n)]
    assert all(m != 0 for m in minors[1:]), "oracle needs nonzero leading minors"
    sig = 0
    for prev, cur in zip(minors, minors[1:]):
        sig += 1 if (prev > 0) == (cur > 0) else -1
    return sig


# ---------------------------------------------------------------- signature


def test_signature_unit_forms():
    for h in range(1, 6):
        assert forms.unit_form(h).signature == h


def test_signature_hyperbolic():
    assert forms.hyperbolic_plane().signature == 0


def test_signature_e8():
    f = forms.e8_form()
    assert f.signature == 8
    assert leading_minors_oracle(f.gram) == 8


def test_signature_degenerate_raises():
    with pytest.raises(DegenerateForm):
        forms.SymBilinearForm(((0, 0), (0, 1))).signature


@given(st.integers(0, 10**6))
def test_signature_invariant_under_congruence(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 4)
    g = forms.SymBilinearForm.from_gram(random_definite_gram(n, rng))
    t = random_unimodular(n, rng)
    moved = forms.SymBilinearForm.from_gram(congruent_gram(g.gram, t))
    assert moved.signature == g.signature
    assert moved.determinant == g.determinant
    assert moved.parity == g.parity


# ----------------------------------------------------- direct sum, stabilize


def test_stabilize_block_layout():
    f = forms.stabilize(forms.unit_form(1), 1)
    assert f.gram == ((1, 0, 0), (0, 0, 1), (0, 1, 0))


def test_stabilize_preserves_signature():
    f = forms.e8_form()
    assert forms.stabilize(f, 3).signature == f.signature


def test_parity_of_odd_sum():
    assert forms.direct_sum(forms.e8_form(), forms.unit_form(1)).parity == "odd"


# ------------------------------------------------------ characteristic vector


def test_characteristic_vector_unit():
    for h in (1, 3, 7):
        assert forms.characteristic_vector(forms.unit_form(h)) == [1] * h


def test_characteristic_vector_even_form():
    f = forms.e8_form()
    xi = forms.characteristic_vector(f)
    for i in range(8):
        basis = [int(j == i) for j in range(8)]
        assert (f.inner(xi, basis) - f.norm(basis)) % 2 == 0


def test_characteristic_vector_e8_plus_nine():
    f = forms.direct_sum(forms.e8_form(), forms.unit_form(9))
    xi = forms.characteristic_vector(f)
    assert f.norm(xi) % 8 == 17 % 8 == 1


@given(st.integers(0, 10**6))
def test_characteristic_vector_mod8(seed):
    # rank == xi . xi (mod 8) for unimodular forms
    rng = random.Random(seed)
    h = rng.randint(1, 5)
    t = random_unimodular(h, rng)
    f = forms.SymBilinearForm.from_gram(congruent_gram(xl.identity(h), t))
    xi = forms.characteristic_vector(f)
    for i in range(h):
        basis = [int(j == i) for j in range(h)]
        assert (f.inner(xi, basis) - f.norm(basis)) % 2 == 0
    assert (f.norm(xi) - h) % 8 == 0


# --------------------------------------------------------- definite isometry


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 5))
def test_gram_reduction_is_congruence(seed, n):
    rng = random.Random(seed)
    gram = congruent_gram(random_definite_gram(n, rng), random_unimodular(n, rng))
    t, reduced = forms.reduce_definite_gram(gram)
    assert abs(xl.det(t)) == 1
    assert xl.mat_eq(congruent_gram(gram, t), reduced)
    assert max(reduced[i][i] for i in range(n)) <= max(gram[i][i] for i in range(n))


def brute_force_isometric(f, g):
    n = f.dimension
    gf = [list(r) for r in f.gram]
    gg = [list(r) for r in g.gram]
    for entries in product((-1, 0, 1), repeat=n * n):
        t = [list(entries[i * n:(i + 1) * n]) for i in range(n)]
        if abs(xl.det(t)) != 1:
            continue
        if xl.mat_eq(congruent_gram(gf, t), gg):
            return t
    return None


def test_isometry_identity_case():
    f = forms.unit_form(3)
    iso = forms.is_isometric_definite(f, f)
    assert iso is not None


def test_isometry_parity_fingerprint():
    assert forms.is_isometric_definite(forms.e8_form(), forms.unit_form(8)) is None


def test_isometry_rejects_indefinite():
    with pytest.raises(UnsupportedIndefinite):
        forms.is_isometric_definite(forms.hyperbolic_plane(), forms.hyperbolic_plane())


def test_isometry_found_under_congruence():
    rng = random.Random(7)
    f = forms.unit_form(4)
    t = random_unimodular(4, rng)
    g = forms.SymBilinearForm.from_gram(congruent_gram(f.gram, t))
    iso = forms.is_isometric_definite(f, g)
    assert iso is not None  # FormIsometry validates itself on construction


@given(st.integers(0, 10**6))
@settings(max_examples=30, deadline=None)
def test_isometry_agrees_with_brute_force(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 3)
    f = forms.SymBilinearForm.from_gram(random_definite_gram(n, rng))
    if rng.random() < 0.5:
        g = forms.SymBilinearForm.from_gram(
            congruent_gram(f.gram, random_unimodular(n, rng)))
    else:
        g = forms.SymBilinearForm.from_gram(random_definite_gram(n, rng))
    ours = forms.is_isometric_definite(f, g)
    brute = brute_force_isometric(f, g)
    if brute is not None:
        assert ours is not None
    if ours is None:
        assert brute is None


# ---------------------------------------------------------- stable invariants


def test_stable_class_examples():
    h = forms.hyperbolic_plane()
    assert forms.indefinite_stable_class(h) == (2, 0, "even")
    assert forms.indefinite_stable_class(forms.direct_sum(forms.e8_form(), h)) == (10, 8, "even")
    lhs = forms.stabilize(forms.unit_form(9))
    rhs = forms.stabilize(forms.direct_sum(forms.e8_form(), forms.unit_form(1)))
    assert forms.indefinite_stable_class(lhs) == forms.indefinite_stable_class(rhs) == (11, 9, "odd")


def test_form_isometry_validates():
    f = forms.unit_form(2)
    with pytest.raises(ValueError):
        forms.make_isometry([[1, 1], [0, 1]], f, f)
