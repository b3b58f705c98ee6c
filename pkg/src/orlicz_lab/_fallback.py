"""Pure-numpy implementations of the compiled kernels in ``_core``.

They use different algorithms (FFT and vectorized prefix sums) and serve as
the reference in the backend-agreement tests.
"""

import numpy as np


def increment_kernel_sum(g, v, tw):
    """``sum_{x,t} (g[z-x] - g[z-x+t]) v[x,t] tw[t]`` via per-``t`` FFTs.

    For fixed ``t`` the inner sum is ``c_t(z) - c_t(z+t)`` with
    ``c_t = g (*) v[:, t]`` a circular convolution.
    """
    N = g.shape[0]
    Nt = tw.shape[0]
    G = np.fft.rfft(np.fft.ifftshift(g))
    C = np.fft.irfft(G[:, None] * np.fft.rfft(v * tw[None, :], axis=0), n=N, axis=0)
    out = C.sum(axis=1)
    for it in range(Nt):
        if tw[it] != 0.0:
            out -= np.roll(C[:, it], -(it - Nt // 2))
    return out


def ball_max_1d(a):
    """Centered maximal function over radii ``0`` and ``2^j`` cells, periodic."""
    N = a.shape[0]
    prefix = np.concatenate([[0.0], np.cumsum(np.tile(a, 3))])
    idx = np.arange(N)
    out = np.array(a, dtype=float, copy=True)
    r = 1
    while r <= N // 2:
        mean = (prefix[N + idx + r + 1] - prefix[N + idx - r]) / (2 * r + 1)
        np.maximum(out, mean, out=out)
        r *= 2
    return out
