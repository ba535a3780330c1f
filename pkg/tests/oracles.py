"""Brute-force references computed without the package's own algorithms."""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import factorial


def rational_value(digits: dict) -> Fraction:
    """Sum of q_r (-1)^(r+1) r! over r > 0 plus q_{-s} (-1)^s / (s+1)! over s > 0."""
    total = Fraction(0)
    for n, q in digits.items():
        if n > 0:
            total += q * (-1) ** (n + 1) * factorial(n)
        else:
            s = -n
            total += Fraction(q * (-1) ** s, factorial(s + 1))
    return total


def integer_value(digits: dict, bases) -> int:
    """Alternating mixed radix: place s has weight (-1)^(s-1) * bases[0] * ... * bases[s-2]."""
    total = 0
    for s, q in digits.items():
        w = 1
        for b in bases[: s - 1]:
            w *= b
        total += q * (-1) ** (s - 1) * w
    return total


def digit_vectors(positions, bound):
    """Every nonempty ``{position: digit}`` with ``1 <= digit <= bound(position)``."""
    options = [[0] + list(range(1, bound(n) + 1)) for n in positions]
    for combo in itertools.product(*options):
        d = {n: q for n, q in zip(positions, combo) if q}
        if d:
            yield d


def variable_words(window: int, bound, two_sided: bool):
    """Variable words on ``-window..window`` as ``{position: letter or 'v'}``.

    Two-sided words must carry the variable on both sides.
    """
    positions = [n for n in range(-window, window + 1) if n and (two_sided or n > 0)]
    options = [[None, "v"] + list(range(1, bound(n) + 1)) for n in positions]
    for combo in itertools.product(*options):
        d = {n: c for n, c in zip(positions, combo) if c is not None}
        pos_v = any(c == "v" for n, c in d.items() if n > 0)
        neg_v = any(c == "v" for n, c in d.items() if n < 0)
        if not pos_v:
            continue
        if two_sided and not neg_v:
            continue
        yield d


def substitutions_of(d: dict, bound) -> list:
    """All ``u(p, q)`` as plain dicts; ``p`` fills positive and ``q`` negative variables.

    Bounds come from the innermost position on each side of the domain.
    """
    pos = [n for n in d if n > 0]
    neg = [n for n in d if n < 0]
    bp = bound(min(pos))
    bq = bound(max(neg)) if neg else 1
    out = []
    for p in range(1, bp + 1):
        for q in range(1, bq + 1):
            out.append({n: (p if n > 0 else q) if c == "v" else c for n, c in d.items()})
    return out


def monochromatic_exists(colour, window: int, bound, two_sided: bool) -> bool:
    """Does some variable word in the window have all its substitutions one colour?"""
    for d in variable_words(window, bound, two_sided):
        subs = substitutions_of(d, bound)
        if len({colour(s) for s in subs}) == 1:
            return True
    return False


def ip_sums(values: list, depth: int):
    """Finite sums over index sets of size <= depth, keyed by the index set."""
    for r in range(1, depth + 1):
        for F in itertools.combinations(range(1, len(values) + 1), r):
            yield F, sum(values[i - 1] for i in F)
