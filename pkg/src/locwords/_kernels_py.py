"""Pure-Python versions of the hot loops.  Semantics must match ``_kernels.pyx``."""

from __future__ import annotations


def fs_max_distance(flat, offsets, modulus, start, target, max_terms):
    """Largest circular distance from ``target`` over all finite-sum values.

    Term ``i`` offers the choice values ``flat[offsets[i]:offsets[i+1]]``.
    Every nonempty set of at most ``max_terms`` terms, with one choice per
    term, gives the point ``(start + sum) % modulus``.  Returns
    ``(max_distance, number_of_points)``.
    """
    M = int(modulus)
    n = len(offsets) - 1
    choices = [[int(flat[j]) % M for j in range(offsets[i], offsets[i + 1])] for i in range(n)]
    target = int(target) % M
    best = 0
    count = 0
    # partial[t] holds the sums that use exactly t terms among those seen so far
    partial = [[int(start) % M]] + [[] for _ in range(max_terms)]
    for ch in choices:
        for t in range(min(max_terms, n), 0, -1):
            prev = partial[t - 1]
            if not prev:
                continue
            fresh = [(s + c) % M for s in prev for c in ch]
            for v in fresh:
                d = (v - target) % M
                d = min(d, M - d)
                if d > best:
                    best = d
            count += len(fresh)
            partial[t].extend(fresh)
    return best, count


def _avoid(n, limit, want_first):
    colour = [0] * (n + 1)
    sets = [0, 0]
    found = [0, None]

    def rec(m):
        if m > n:
            found[0] += 1
            if found[1] is None:
                found[1] = list(colour[1:])
            return want_first or found[0] >= limit
        for c in (0, 1) if m > 1 else (0,):
            A = sets[c]
            bad = False
            for a in range(1, (m + 1) // 2):
                if (A >> a) & 1 and (A >> (m - a)) & 1:
                    bad = True
                    break
            if bad:
                continue
            colour[m] = c
            sets[c] = A | (1 << m)
            stop = rec(m + 1)
            sets[c] = A
            if stop:
                return True
        return False

    rec(1)
    return found


def weak_schur_first_avoiding(n):
    """First colouring (list of 0/1 for 1..n, colour of 1 fixed to 0) with no
    monochromatic ``a < b, a + b``; ``None`` if every colouring has one."""
    return _avoid(n, 1, True)[1]


def weak_schur_count_avoiding(n):
    """Number of avoiding colourings of 1..n with the colour of 1 fixed."""
    return _avoid(n, 1 << 62, False)[0]
