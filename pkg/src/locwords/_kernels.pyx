# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops.  Semantics must match ``_kernels_py``."""

from libc.stdlib cimport malloc, free

ctypedef long long i64


cdef inline i64 _circ(i64 v, i64 target, i64 M) nogil:
    cdef i64 d = v - target
    if d < 0:
        d += M
    if M - d < d:
        return M - d
    return d


def fs_max_distance(const i64[:] flat, const i64[:] offsets, i64 modulus, i64 start, i64 target, int max_terms):
    """Largest circular distance from ``target`` over all finite-sum values (see ``_kernels_py``).

    ``flat`` must already be reduced into ``[0, modulus)``.
    """
    cdef Py_ssize_t n = offsets.shape[0] - 1
    cdef i64 M = modulus
    cdef i64 best = 0, count = 0
    cdef Py_ssize_t t, i, j, k, c, size, lo, hi
    cdef i64 v, d
    if max_terms > n:
        max_terms = <int>n
    # sizes of each layer, bounded by the product of choice counts per layer
    cdef list layers = [None] * (max_terms + 1)
    cdef i64[:] prev
    cdef i64[:] cur
    cdef Py_ssize_t[:] used
    import numpy as np
    layers[0] = np.array([start % M], dtype=np.int64)
    used_arr = np.zeros(max_terms + 1, dtype=np.intp)
    used = used_arr
    used[0] = 1
    for t in range(1, max_terms + 1):
        layers[t] = np.empty(0, dtype=np.int64)
    target = target % M
    for i in range(n):
        lo = offsets[i]
        hi = offsets[i + 1]
        for t in range(max_terms, 0, -1):
            if used[t - 1] == 0:
                continue
            prev = layers[t - 1]
            size = used[t - 1] * (hi - lo)
            arr = layers[t]
            if arr.shape[0] < used[t] + size:
                grown = np.empty(max(2 * arr.shape[0], used[t] + size), dtype=np.int64)
                grown[:used[t]] = arr[:used[t]]
                layers[t] = grown
            cur = layers[t]
            c = used[t]
            with nogil:
                for j in range(used[t - 1]):
                    for k in range(lo, hi):
                        v = prev[j] + flat[k]
                        if v >= M:
                            v -= M
                        cur[c] = v
                        c += 1
                        d = _circ(v, target, M)
                        if d > best:
                            best = d
            count += size
            used[t] = c
    return best, count


cdef int _avoid(int n, i64 limit, bint want_first, i64 *found, int *colour, i64 *sets) nogil:
    # iterative backtracking over m = 1..n; colour[m] in {0,1}, -1 means untried
    cdef int m = 1, c, a
    cdef i64 A
    cdef bint ok
    colour[1] = -1
    while m >= 1:
        if colour[m] >= 0:
            sets[colour[m]] &= ~((<i64>1) << m)
        colour[m] += 1
        if colour[m] > (1 if m > 1 else 0):
            colour[m] = -1
            m -= 1
            continue
        c = colour[m]
        A = sets[c]
        ok = True
        a = 1
        while 2 * a < m:
            if (A >> a) & 1 and (A >> (m - a)) & 1:
                ok = False
                break
            a += 1
        if not ok:
            continue
        sets[c] |= (<i64>1) << m
        if m == n:
            found[0] += 1
            if want_first or found[0] >= limit:
                return 1
            continue
        m += 1
        colour[m] = -1
    return 0


def _run(int n, i64 limit, bint want_first):
    if n < 1 or n > 62:
        raise ValueError("n must lie in 1..62")
    cdef int *colour = <int *>malloc((n + 2) * sizeof(int))
    cdef i64 sets[2]
    cdef i64 found = 0
    cdef int hit
    sets[0] = 0
    sets[1] = 0
    try:
        with nogil:
            hit = _avoid(n, limit, want_first, &found, colour, sets)
        first = [colour[m] for m in range(1, n + 1)] if hit else None
    finally:
        free(colour)
    return found, first


def weak_schur_first_avoiding(int n):
    return _run(n, 1, True)[1]


def weak_schur_count_avoiding(int n):
    return _run(n, (<i64>1) << 62, False)[0]
