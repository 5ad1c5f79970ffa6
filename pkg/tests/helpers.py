"""Random model generators and small utilities shared by the test modules."""
from __future__ import annotations

import random
from fractions import Fraction

from obddlab.numeric import INV_SQRT2, Matrix, QuadExt
from obddlab.obdd import (
    AffineObdd,
    DeterministicObdd,
    ProbabilisticObdd,
    UnitaryObdd,
    VariableOrder,
)


def rand_order(rng: random.Random, n: int) -> VariableOrder:
    pi = list(range(1, n + 1))
    rng.shuffle(pi)
    return VariableOrder(tuple(pi))


def rand_distribution(rng: random.Random, m: int) -> list[Fraction]:
    w = [rng.randint(0, 4) for _ in range(m)]
    if sum(w) == 0:
        w[rng.randrange(m)] = 1
    total = sum(w)
    return [Fraction(x, total) for x in w]


def rand_stochastic(rng: random.Random, m: int) -> Matrix:
    return Matrix(m, m, [list(enumerate(rand_distribution(rng, m))) for _ in range(m)])


def rand_affine_column(rng: random.Random, m: int) -> list[Fraction]:
    col = [Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(m - 1)]
    return col + [1 - sum(col)]


def rand_affine(rng: random.Random, m: int) -> Matrix:
    return Matrix(m, m, [list(enumerate(rand_affine_column(rng, m))) for _ in range(m)])


def rand_orthogonal(rng: random.Random, m: int) -> Matrix:
    """Signed permutation, optionally followed by a 45-degree rotation of two coordinates."""
    perm = list(range(m))
    rng.shuffle(perm)
    cols = [[(perm[j], QuadExt(rng.choice((1, -1))))] for j in range(m)]
    t = Matrix(m, m, cols)
    if m >= 2 and rng.random() < 0.7:
        i, k = rng.sample(range(m), 2)
        rot = [[(j, QuadExt(1))] for j in range(m)]
        rot[i] = [(i, INV_SQRT2), (k, INV_SQRT2)]
        rot[k] = [(i, -INV_SQRT2), (k, INV_SQRT2)]
        t = Matrix(m, m, rot) @ t
    return t


def rand_partition(rng: random.Random, m: int) -> tuple[set, set]:
    acc, neu = set(), set()
    for s in range(m):
        r = rng.random()
        if r < 0.4:
            acc.add(s)
        elif r < 0.6:
            neu.add(s)
    return acc, neu


def rand_probabilistic(rng: random.Random, n: int, m: int) -> ProbabilisticObdd:
    acc, neu = rand_partition(rng, m)
    return ProbabilisticObdd(
        n=n, width=m, initial=rand_distribution(rng, m), accepting=acc, neutral=neu,
        order=rand_order(rng, n),
        levels=tuple((rand_stochastic(rng, m), rand_stochastic(rng, m)) for _ in range(n)))


def rand_deterministic(rng: random.Random, n: int, m: int) -> DeterministicObdd:
    acc, _ = rand_partition(rng, m)
    levels = tuple(tuple(Matrix.from_mapping(m, [rng.randrange(m) for _ in range(m)])
                         for _ in (0, 1)) for _ in range(n))
    init = [0] * m
    init[rng.randrange(m)] = 1
    return DeterministicObdd(n=n, width=m, initial=init, accepting=acc,
                             order=rand_order(rng, n), levels=levels)


def rand_unitary(rng: random.Random, n: int, m: int) -> UnitaryObdd:
    acc, neu = rand_partition(rng, m)
    init = [QuadExt(0)] * m
    if m >= 2 and rng.random() < 0.5:
        i, k = rng.sample(range(m), 2)
        init[i], init[k] = INV_SQRT2, -INV_SQRT2
    else:
        init[rng.randrange(m)] = QuadExt(1)
    return UnitaryObdd(
        n=n, width=m, initial=init, accepting=acc, neutral=neu, order=rand_order(rng, n),
        levels=tuple((rand_orthogonal(rng, m), rand_orthogonal(rng, m)) for _ in range(n)))


def rand_affine_obdd(rng: random.Random, n: int, m1: int, m2: int) -> AffineObdd:
    acc, neu = rand_partition(rng, m2)
    return AffineObdd(
        n=n, classical_count=m1, affine_count=m2, initial_classical=rng.randrange(m1),
        classical_accepting={s for s in range(m1) if rng.random() < 0.7},
        initial=rand_affine_column(rng, m2), affine_accepting=acc, affine_neutral=neu,
        order=rand_order(rng, n),
        delta=tuple(tuple((rng.randrange(m1), rng.randrange(m1)) for _ in range(m1)) for _ in range(n)),
        transitions=tuple(tuple((rand_affine(rng, m2), rand_affine(rng, m2)) for _ in range(m1))
                          for _ in range(n)),
    )


def rand_input(rng: random.Random, n: int) -> tuple:
    return tuple(rng.randint(0, 1) for _ in range(n))
