import itertools
import random

import pytest

from locwords import kernels


def brute_fs(choices, M, start, target):
    """Largest circular distance of start + (one choice from each of a nonempty set of terms) to target."""
    best, count = 0, 0
    n = len(choices)
    for r in range(1, n + 1):
        for F in itertools.combinations(range(n), r):
            for pick in itertools.product(*(choices[i] for i in F)):
                d = (start + sum(pick) - target) % M
                best = max(best, min(d, M - d))
                count += 1
    return best, count


def brute_schur(n):
    """Colourings of 1..n (colour of 1 fixed) with no monochromatic a < b, a + b <= n."""
    out = []
    for rest in itertools.product((0, 1), repeat=n - 1):
        col = (0,) + rest
        if all(not (col[a - 1] == col[b - 1] == col[a + b - 1])
               for a in range(1, n + 1) for b in range(a + 1, n + 1) if a + b <= n):
            out.append(col)
    return out


BACKENDS = ["python"] + (["cython"] if kernels.BACKEND == "cython" else [])


@pytest.mark.parametrize("backend", BACKENDS)
def test_fs_against_brute_force(backend):
    rng = random.Random(3)
    for _ in range(60):
        M = rng.choice([5, 29, 1 << 20, 1 << 62])
        choices = [[rng.randrange(M) for _ in range(rng.randint(1, 3))] for _ in range(rng.randint(1, 4))]
        start, target = rng.randrange(M), rng.randrange(M)
        assert kernels.fs_max_distance(choices, M, start, target, backend=backend) == brute_fs(choices, M, start, target)


@pytest.mark.parametrize("backend", BACKENDS)
def test_schur_against_brute_force(backend):
    for n in range(1, 12):
        ref = brute_schur(n)
        assert kernels.weak_schur_count_avoiding(n, backend=backend) == len(ref)
        first = kernels.weak_schur_first_avoiding(n, backend=backend)
        assert (first is None) == (not ref)
        if first is not None:
            assert tuple(first) in ref


def test_backends_agree_on_large_instances():
    if kernels.BACKEND != "cython":
        pytest.skip("compiled kernels not built")
    rng = random.Random(9)
    M = 1 << 62
    for _ in range(20):
        choices = [[rng.randrange(M) for _ in range(4)] for _ in range(7)]
        assert kernels.fs_max_distance(choices, M, backend="python") == kernels.fs_max_distance(choices, M, backend="cython")


def test_big_modulus_falls_back():
    M = (1 << 70) + 1
    got = kernels.fs_max_distance([[1, M - 5]], M)
    assert got == brute_fs([[1, M - 5]], M, 0, 0)
