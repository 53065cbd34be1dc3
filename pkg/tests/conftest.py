import functools

import pytest

from tnskit.charpair import BUILTIN_NAMES, builtin
from tnskit.cohomology import build_ring

DIM3 = ("bott_cube", "cp3", "paper_P1", "paper_P2")


@functools.lru_cache(maxsize=None)
def ring(name):
    return build_ring(builtin(name))


@pytest.fixture(params=BUILTIN_NAMES)
def fixture_name(request):
    return request.param


def random_unimodular(rng, n):
    """A product of elementary matrices, sometimes with determinant -1."""
    from tnskit import exactalg as ea

    g = ea.identity(n)
    for _ in range(6):
        i, j = rng.sample(range(n), 2)
        E = [list(r) for r in ea.identity(n)]
        E[i][j] = rng.choice([-1, 1])
        g = ea.matmul(E, g)
    if rng.random() < 0.5:
        D = [list(r) for r in ea.identity(n)]
        D[0][0] = -1
        g = ea.matmul(D, g)
    return g


def random_relabeling(rng, m):
    perm = list(range(1, m + 1))
    rng.shuffle(perm)
    return {i + 1: p for i, p in enumerate(perm)}
