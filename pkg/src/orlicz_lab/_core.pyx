# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled hot loops. See ``_fallback`` for the reference implementations."""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def increment_kernel_sum(const double[::1] g, const double[:, ::1] v, const double[::1] tw):
    """Direct sum ``sum_{x,t} (g[z-x] - g[z-x+t]) v[x,t] tw[t]``.

    ``g`` holds the kernel with its origin at index ``N/2``; ``t`` indices are
    offsets ``it - Nt/2`` on the same spacing as ``x``. Substituting
    ``y = x - t`` in the second term gives ``g (*) (V - W)`` with
    ``V[x] = sum_t v[x,t] tw[t]`` and ``W[y] = sum_t v[y+t,t] tw[t]``, which is
    then evaluated as a direct circular sum.
    """
    cdef Py_ssize_t N = g.shape[0], Nt = tw.shape[0]
    cdef Py_ssize_t iz, ix, it, half = N // 2, thalf = Nt // 2
    cdef double acc, w
    src = np.zeros(N)
    cdef double[::1] q = src
    for ix in range(N):
        for it in range(Nt):
            w = tw[it]
            if w != 0.0:
                q[ix] += v[ix, it] * w
                q[ix] -= v[(((ix + it - thalf) % N) + N) % N, it] * w
    out = np.zeros(N)
    cdef double[::1] o = out
    for iz in range(N):
        acc = 0.0
        for ix in range(N):
            acc += g[(((iz - ix + half) % N) + N) % N] * q[ix]
        o[iz] = acc
    return out


def ball_max_1d(const double[::1] a):
    """Centered maximal function over radii ``0`` and ``2^j`` cells, periodic."""
    cdef Py_ssize_t N = a.shape[0], i, r
    cdef double[::1] prefix = np.zeros(3 * N + 1)
    cdef double mean
    out = np.array(a, copy=True)
    cdef double[::1] o = out
    for i in range(3 * N):
        prefix[i + 1] = prefix[i] + a[i % N]
    r = 1
    while r <= N // 2:
        for i in range(N):
            mean = (prefix[N + i + r + 1] - prefix[N + i - r]) / (2 * r + 1)
            if mean > o[i]:
                o[i] = mean
        r *= 2
    return out
