"""Fractional and first-order Orlicz-Sobolev modulars and norms.

The Gagliardo double integral is written with the increment ``h = y - x``
and sampled on logarithmic rings ``inner_cut <= |h| <= h_max``. The integrand
is even in ``h``, so only a half-sphere of directions is visited and each
sample is counted twice. Shifts by non-lattice vectors are exact spectral
phase shifts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .field import Field, gradient_magnitude
from .orlicz import NormResult, _weighted_modular, luxemburg_norm, weighted_luxemburg

DEFAULT_RINGS = 32


def half_sphere_directions(n, count=None):
    """Unit vectors covering half of ``S^(n-1)`` with equal weights."""
    if n == 1:
        return np.ones((1, 1))
    if n == 2:
        count = count or 8
        theta = (np.arange(count) + 0.5) * np.pi / count
        return np.stack([np.cos(theta), np.sin(theta)], axis=1)
    count = count or 16
    # Fibonacci lattice on the upper hemisphere
    k = np.arange(count) + 0.5
    z = 1 - k / count
    phi = k * math.pi * (3 - math.sqrt(5))
    rho = np.sqrt(1 - z**2)
    return np.stack([rho * np.cos(phi), rho * np.sin(phi), z], axis=1)


@dataclass(frozen=True)
class GagliardoQuadrature:
    """Increment sampling for the Gagliardo modular.

    Parameters
    ----------
    h_max : float
        Largest increment radius, at most ``L``.
    ring_count : int
        Number of logarithmic rings between ``inner_cut`` and ``h_max``.
    inner_cut : float
        Smallest increment radius, at least one grid spacing.
    directions : int, optional
        Directions per ring on the half-sphere (ignored for ``n = 1``).
    """

    h_max: float
    ring_count: int = DEFAULT_RINGS
    inner_cut: float = 0.0
    directions: int | None = None

    @classmethod
    def for_grid(cls, grid, ring_count=DEFAULT_RINGS, directions=None):
        """``h_max = L/2`` and ``inner_cut = h``."""
        return cls(grid.L / 2, ring_count, grid.h, directions)

    def validate(self, grid):
        if self.ring_count < 1:
            raise DomainError("ring_count must be positive")
        if self.inner_cut < grid.h * (1 - 1e-12):
            raise DomainError("inner_cut must be at least the grid spacing")
        if self.h_max > grid.L * (1 + 1e-12) or self.h_max <= self.inner_cut:
            raise DomainError("need inner_cut < h_max <= L")

    def edges(self):
        return np.geomspace(self.inner_cut, self.h_max, self.ring_count + 1)

    def samples(self, n):
        """Increment vectors and their weights in ``|h|^-n dh``."""
        edges = self.edges()
        radii = np.sqrt(edges[:-1] * edges[1:])
        dlog = np.log(edges[1:] / edges[:-1])
        dirs = half_sphere_directions(n, self.directions)
        surface = n * _omega(n)
        vecs = radii[:, None, None] * dirs[None, :, :]
        weights = np.repeat(surface * dlog / len(dirs), len(dirs))
        return vecs.reshape(-1, n), np.repeat(radii, len(dirs)), weights


def _omega(n):
    return math.pi ** (n / 2) / math.gamma(n / 2 + 1)


def _check_s(s):
    if not 0 < s < 1:
        raise DomainError("fractional order must lie in (0, 1)")


def shift(u, vec):
    """``u(x + vec)`` by a spectral phase shift."""
    g = u.grid
    phase = np.exp(1j * sum(k * c for k, c in zip(g.xi, vec)))
    return Field(g, np.fft.ifftn(phase * np.fft.fftn(u.samples)).real)


def difference_quotients(s, u, q):
    """Stack of ``|u(x+h) - u(x)| / |h|^s`` and their quadrature weights."""
    g = u.grid
    q.validate(g)
    vecs, radii, weights = q.samples(g.n)
    U = np.fft.fftn(u.samples)
    out = np.empty((len(vecs),) + g.shape)
    for j, (vec, r) in enumerate(zip(vecs, radii)):
        phase = np.exp(1j * sum(k * c for k, c in zip(g.xi, vec)))
        moved = np.fft.ifftn(phase * U).real
        out[j] = np.abs(moved - u.samples) / r**s
    w = (weights * g.cell).reshape((-1,) + (1,) * g.n)
    return out, w


def gagliardo_modular(A, s, u, q):
    """Quadrature value of ``iint A(|u(x+h)-u(x)|/|h|^s) |h|^-n dx dh``.

    Only increments with ``inner_cut <= |h| <= h_max`` are sampled; see
    :func:`gagliardo_interval` for bounds on the omitted parts.
    """
    _check_s(s)
    values, weights = difference_quotients(s, u, q)
    return _weighted_modular(A, values, weights)


@dataclass(frozen=True)
class ModularInterval:
    """Quadrature value plus rigorous bounds on the truncated parts.

    ``inner`` bounds ``|h| < inner_cut`` by
    ``n omega_n/(1-s) Phi_A(inner_cut^(1-s) |grad u|)``; ``tail`` bounds
    ``|h| > h_max`` by ``n omega_n / s Phi_A(2 |u| / h_max^s)``. Both
    follow from convexity of ``A`` and ``A(0) = 0``.
    """

    value: float
    inner: float
    tail: float

    @property
    def upper(self):
        return self.value + self.inner + self.tail


def gagliardo_interval(A, s, u, q):
    """The modular as an interval ``[value, value + inner + tail]``."""
    _check_s(s)
    g = u.grid
    value = gagliardo_modular(A, s, u, q)
    surface = g.n * g.omega
    grad = gradient_magnitude(u).samples
    inner = surface / (1 - s) * _weighted_modular(A, q.inner_cut ** (1 - s) * grad, g.cell)
    tail = surface / s * _weighted_modular(A, 2 * np.abs(u.samples) / q.h_max**s, g.cell)
    return ModularInterval(value, inner, tail)


def spectral_multiplier(s, grid, q):
    """``m(xi)``: the quadrature applied to the single mode ``exp(i xi.x)``.

    For ``A(t) = t^2`` Parseval gives
    ``gagliardo_modular = (2 pi)^-n int m(xi) |F u(xi)|^2 dxi``.
    """
    q.validate(grid)
    vecs, radii, weights = q.samples(grid.n)
    m = np.zeros(grid.shape)
    for vec, r, w in zip(vecs, radii, weights):
        arg = sum(k * c for k, c in zip(grid.xi, vec))
        m += w * np.abs(np.exp(1j * arg) - 1) ** 2 / r ** (2 * s)
    return m


def spectral_oracle(s, u, q):
    """Spectral evaluation of the quadrature for ``A(t) = t^2``."""
    g = u.grid
    U = np.fft.fftn(u.samples) * g.cell
    dxi = (math.pi / g.L) ** g.n
    return float(np.sum(spectral_multiplier(s, g, q) * np.abs(U) ** 2) * dxi / (2 * math.pi) ** g.n)


def gagliardo_seminorm(A, s, u, q):
    """Luxemburg seminorm ``inf{lam : gagliardo_modular(u/lam) <= 1}``."""
    _check_s(s)
    values, weights = difference_quotients(s, u, q)
    return weighted_luxemburg(A, values, weights)


def w1_seminorm(A, u):
    """Luxemburg norm of ``|grad u|``."""
    return luxemburg_norm(A, gradient_magnitude(u))


def sobolev_norm(A, s, u, q=None):
    """``||u||_{L^A} + [u]_{W^{s,A}}`` for ``0 < s <= 1``."""
    if not 0 < s <= 1:
        raise DomainError("sobolev_norm needs 0 < s <= 1")
    base = luxemburg_norm(A, u).value
    if s == 1:
        return base + w1_seminorm(A, u).value
    if q is None:
        q = GagliardoQuadrature.for_grid(u.grid)
    return base + gagliardo_seminorm(A, s, u, q).value

