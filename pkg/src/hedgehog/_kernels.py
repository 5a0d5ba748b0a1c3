"""Integer search kernels.

Two hot loops live here: the bounded zero search for an integral diagonal
form (rational isotropic vectors / rational points) and the enumeration of
values taken on a box (test oracles).  Each has a numba ``@njit`` version and
a pure-numpy fallback with identical results.  Set ``HEDGEHOG_DISABLE_NUMBA=1``
to force the fallback.

Everything is int64; callers must check :func:`fits_int64` first and use
the pure-Python path otherwise.
"""

from __future__ import annotations

import itertools
import os
from math import isqrt

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and os.environ.get("HEDGEHOG_DISABLE_NUMBA", "0") not in ("1", "true", "yes")

INT64_LIMIT = 2**62
# largest value range the numba box enumeration keeps as a bitmap
BITMAP_LIMIT = 50_000_000


def fits_int64(coeffs, height: int) -> bool:
    m = len(coeffs)
    return m * max(abs(int(a)) for a in coeffs) * (height + 1) ** 2 < INT64_LIMIT


# -- zero search --------------------------------------------------------------


def _zero_search_py(coeffs, height: int, need_last_nonzero: bool):
    """Reference implementation on Python ints (no overflow concerns)."""
    m = len(coeffs)
    head, last = coeffs[:-1], coeffs[-1]
    rng = range(-height, height + 1)
    for x in itertools.product(range(0, height + 1), *([rng] * (m - 2))):
        s = sum(a * t * t for a, t in zip(head, x))
        if (-s) % last:
            continue
        t = -s // last
        if t < 0:
            continue
        z = isqrt(t)
        if z * z != t:
            continue
        if z == 0 and (need_last_nonzero or not any(x)):
            continue
        return np.array(list(x) + [z], dtype=object)
    return None


if HAVE_NUMBA:

    @njit(cache=True)
    def _isqrt64(n):
        if n < 2:
            return n
        x = n
        y = (x + 1) // 2
        while y < x:
            x = y
            y = (x + n // x) // 2
        return x

    @njit(cache=True)
    def _zero_search_nb(coeffs, height, need_last_nonzero):
        m = coeffs.shape[0]
        k = m - 1
        last = coeffs[k]
        x = np.empty(k, dtype=np.int64)
        x[0] = 0
        for i in range(1, k):
            x[i] = -height
        out = np.zeros(m, dtype=np.int64)
        while True:
            s = 0
            nz = False
            for i in range(k):
                s += coeffs[i] * x[i] * x[i]
                if x[i] != 0:
                    nz = True
            r = -s
            if r % last == 0:
                t = r // last
                if t >= 0:
                    z = _isqrt64(t)
                    if z * z == t and not (z == 0 and (need_last_nonzero or not nz)):
                        for i in range(k):
                            out[i] = x[i]
                        out[k] = z
                        return out, True
            # odometer; first coordinate runs over [0, height] only
            i = k - 1
            while i >= 0:
                if x[i] < height:
                    x[i] += 1
                    break
                x[i] = 0 if i == 0 else -height
                i -= 1
            if i < 0:
                return out, False


def _zero_search_np(coeffs: np.ndarray, height: int, need_last_nonzero: bool):
    m = coeffs.shape[0]
    k = m - 1
    last = int(coeffs[k])
    ranges = [np.arange(0, height + 1, dtype=np.int64)] + [
        np.arange(-height, height + 1, dtype=np.int64)
    ] * (k - 1)
    # vectorise over the two innermost coordinates, loop over the rest
    inner = ranges[-2:] if k >= 2 else ranges
    outer = ranges[: len(ranges) - len(inner)]
    grids = np.meshgrid(*inner, indexing="ij")
    inner_pts = np.stack([g.ravel() for g in grids], axis=1)
    inner_coeffs = coeffs[k - len(inner) : k]
    inner_sum = (inner_pts * inner_pts) @ inner_coeffs
    inner_nz = np.any(inner_pts != 0, axis=1)
    tmax = coeffs[:k].__abs__().sum() * height * height // max(abs(last), 1) + 1
    squares = np.arange(isqrt(int(tmax)) + 2, dtype=np.int64) ** 2
    for xo in itertools.product(*outer):
        so = sum(int(a) * int(t) * int(t) for a, t in zip(coeffs[: len(outer)], xo))
        r = -(so + inner_sum)
        ok = r % last == 0
        t = np.where(ok, r // last, -1)
        ok &= t >= 0
        idx = np.searchsorted(squares, np.where(ok, t, 0))
        ok &= squares[np.minimum(idx, len(squares) - 1)] == t
        nz = inner_nz | any(xo)
        z0 = t == 0
        ok &= ~(z0 & (need_last_nonzero | ~nz))
        hits = np.flatnonzero(ok)
        if hits.size:
            j = hits[0]
            zz = idx[j]
            return np.array(list(xo) + list(inner_pts[j]) + [zz], dtype=np.int64), True
    return np.zeros(m, dtype=np.int64), False


def zero_search(coeffs, height: int, need_last_nonzero: bool = False, backend: str | None = None):
    """Integer vector ``x != 0`` with ``sum coeffs[i] x[i]^2 == 0``.

    The first coordinates range over ``|x[i]| <= height``; the last one is
    solved for (so it may exceed the bound), and with ``need_last_nonzero`` it
    must be nonzero.  Returns a list of Python ints or None.
    """
    coeffs = [int(a) for a in coeffs]
    if len(coeffs) < 2:
        return None
    if backend is None:
        backend = "numba" if USE_NUMBA else "numpy"
    if not fits_int64(coeffs, height):
        backend = "python"
    if backend == "python":
        res = _zero_search_py(coeffs, height, need_last_nonzero)
        return None if res is None else [int(t) for t in res]
    arr = np.asarray(coeffs, dtype=np.int64)
    if backend == "numba":
        vec, found = _zero_search_nb(arr, np.int64(height), need_last_nonzero)
    else:
        vec, found = _zero_search_np(arr, height, need_last_nonzero)
    return [int(t) for t in vec] if found else None


# -- value enumeration --------------------------------------------------------


if HAVE_NUMBA:

    @njit(cache=True)
    def _box_values_nb(coeffs, height):
        # reachability bitmap over [lo, hi], extended one coefficient at a time
        lo = 0
        hi = 0
        for a in coeffs:
            if a < 0:
                lo += a * height * height
            else:
                hi += a * height * height
        size = hi - lo + 1
        cur = np.zeros(size, dtype=np.bool_)
        cur[-lo] = True
        nxt = np.zeros(size, dtype=np.bool_)
        for a in coeffs:
            nxt[:] = False
            for v in range(size):
                if cur[v]:
                    for t in range(height + 1):
                        nxt[v + a * t * t] = True
            cur, nxt = nxt, cur
        return np.flatnonzero(cur) + lo


def _box_values_np(coeffs: np.ndarray, height: int):
    sq = np.arange(height + 1, dtype=np.int64) ** 2
    acc = np.zeros(1, dtype=np.int64)
    for a in coeffs:
        acc = np.unique((acc[:, None] + a * sq[None, :]).ravel())
    return acc


def box_values(coeffs, height: int, backend: str | None = None) -> list[int]:
    """Sorted distinct nonzero values of ``sum coeffs[i] x[i]^2`` for ``0 <= x[i] <= height``."""
    coeffs = [int(a) for a in coeffs]
    if backend is None:
        backend = "numba" if USE_NUMBA else "numpy"
    if not fits_int64(coeffs, height):
        backend = "python"
    if backend == "python":
        vals = {0}
        for a in coeffs:
            vals = {v + a * t * t for v in vals for t in range(height + 1)}
        return sorted(v for v in vals if v)
    if backend == "numba" and sum(abs(a) for a in coeffs) * height * height > BITMAP_LIMIT:
        backend = "numpy"
    arr = np.asarray(coeffs, dtype=np.int64)
    vals = _box_values_nb(arr, np.int64(height)) if backend == "numba" else _box_values_np(arr, height)
    return [int(v) for v in vals if v]
