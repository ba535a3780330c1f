"""Backend selection for the hot loops.

The compiled extension is used when it imports and the inputs fit in 64-bit
integers; otherwise the pure-Python module runs.  Set
``LOCWORDS_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

import numpy as np

from . import _kernels_py

_INT64_SAFE = 1 << 62

if os.environ.get("LOCWORDS_PURE_PYTHON", "") not in ("", "0"):
    _compiled = None
else:
    try:
        from . import _kernels as _compiled
    except ImportError:  # pragma: no cover - depends on the build
        _compiled = None

BACKEND = "cython" if _compiled is not None else "python"


def fs_max_distance(choices, modulus: int, start: int = 0, target: int = 0, max_terms: int = None,
                    backend: str = None):
    """Max circular distance to ``target`` of ``start + sum`` over all finite sums.

    ``choices`` is a list (one entry per term) of integer choice values; a
    finite sum picks a nonempty set of at most ``max_terms`` terms and one
    value from each.  Returns ``(max_distance, count)``.
    """
    M = int(modulus)
    max_terms = len(choices) if max_terms is None else min(max_terms, len(choices))
    flat = [int(v) % M for ch in choices for v in ch]
    offsets = [0]
    for ch in choices:
        offsets.append(offsets[-1] + len(ch))
    use = backend or BACKEND
    if use == "cython" and _compiled is not None and M <= _INT64_SAFE:
        return _compiled.fs_max_distance(
            np.asarray(flat, dtype=np.int64), np.asarray(offsets, dtype=np.int64),
            M, int(start) % M, int(target) % M, int(max_terms),
        )
    return _kernels_py.fs_max_distance(flat, offsets, M, start, target, max_terms)


def weak_schur_first_avoiding(n: int, backend: str = None):
    use = backend or BACKEND
    if use == "cython" and _compiled is not None:
        return _compiled.weak_schur_first_avoiding(n)
    return _kernels_py.weak_schur_first_avoiding(n)


def weak_schur_count_avoiding(n: int, backend: str = None) -> int:
    use = backend or BACKEND
    if use == "cython" and _compiled is not None:
        return _compiled.weak_schur_count_avoiding(n)
    return _kernels_py.weak_schur_count_avoiding(n)
