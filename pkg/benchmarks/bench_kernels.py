"""Compare the compiled kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""

from __future__ import annotations

import argparse
import random
import time

from locwords import kernels


def _time(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def _choices(rng: random.Random, terms: int, per_term: int, M: int) -> list:
    return [[rng.randrange(M) for _ in range(per_term)] for _ in range(terms)]


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    if kernels.BACKEND != "cython":
        print("compiled kernels unavailable; only the fallback can be timed")
    rng = random.Random(args.seed)
    M = 1 << 62
    cases = [
        ("fs_max_distance 6x4", lambda b, c=_choices(rng, 6, 4, M): kernels.fs_max_distance(c, M, backend=b)),
        ("fs_max_distance 8x4", lambda b, c=_choices(rng, 8, 4, M): kernels.fs_max_distance(c, M, backend=b)),
        ("fs_max_distance 10x3", lambda b, c=_choices(rng, 10, 3, M): kernels.fs_max_distance(c, M, backend=b)),
        ("weak_schur_count 14", lambda b: kernels.weak_schur_count_avoiding(14, backend=b)),
        ("weak_schur_first 9", lambda b: kernels.weak_schur_first_avoiding(9, backend=b)),
    ]
    print(f"{'case':<24}{'python s':>12}{'cython s':>12}{'speedup':>10}")
    for name, fn in cases:
        py = _time(lambda: fn("python"), args.repeat)
        if kernels.BACKEND == "cython":
            assert fn("python") == fn("cython"), name
            cy = _time(lambda: fn("cython"), args.repeat)
            print(f"{name:<24}{py:>12.4f}{cy:>12.4f}{py / cy:>10.1f}")
        else:
            print(f"{name:<24}{py:>12.4f}{'-':>12}{'-':>10}")


if __name__ == "__main__":
    main()
