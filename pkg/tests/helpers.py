"""Shared test utilities: random unimodular matrices and gram generators."""

import random

from latcert import exactlin as xl


def random_unimodular(n, rng: random.Random, steps=None):
    """Random unimodular matrix as a product of elementary operations."""
    m = xl.identity(n)
    for _ in range(steps if steps is not None else 3 * n):
        kind = rng.randrange(3)
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if kind == 0 and i != j:
            c = rng.choice([-2, -1, 1, 2])
            m[i] = [x + c * y for x, y in zip(m[i], m[j])]
        elif kind == 1 and i != j:
            m[i], m[j] = m[j], m[i]
        else:
            m[i] = [-x for x in m[i]]
    return m


def congruent_gram(gram, t):
    """t^T . gram . t."""
    return xl.mat_mul(xl.mat_mul(xl.transpose(t), [list(r) for r in gram]), t)


def random_definite_gram(n, rng: random.Random, spread=2):
    """B^T B for a random nonsingular B: a positive definite gram."""
    while True:
        b = [[rng.randint(-spread, spread) for _ in range(n)] for _ in range(n)]
        if xl.det(b) != 0:
            return xl.mat_mul(xl.transpose(b), b)
