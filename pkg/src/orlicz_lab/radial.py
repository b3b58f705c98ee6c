"""Radial profiles, ball convolutions and Strauss-type decay ratios."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.special import betainc

from .bessel import bessel_inverse
from .errors import DomainError
from .field import Field, unit_ball_volume
from .orlicz import luxemburg_norm, weighted_luxemburg
from .young import conjugate, delta2_indices


@dataclass(frozen=True, eq=False)
class RadialProfile:
    """Samples ``u0(r)`` on a uniform radial grid ``[0, R_max]``.

    Outside ``[0, R_max]`` the profile is taken to be zero.
    """

    n: int
    r_samples: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        r = np.asarray(self.r_samples, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if r.ndim != 1 or r.shape != v.shape or r.size < 2:
            raise DomainError("radial samples must be matching 1-D arrays")
        if r[0] != 0 or not np.allclose(np.diff(r), r[1] - r[0], rtol=1e-9, atol=0):
            raise DomainError("radial grid must be uniform and start at 0")
        if not np.all(np.isfinite(v)):
            raise DomainError("radial values must be finite")
        object.__setattr__(self, "r_samples", r)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_function(cls, n, fn, R_max, points=4097):
        r = np.linspace(0.0, R_max, points)
        return cls(n, r, fn(r))

    @property
    def R_max(self):
        return float(self.r_samples[-1])

    def __call__(self, r):
        return np.interp(r, self.r_samples, self.values, right=0.0)


def lift(p, grid):
    """Sample ``u0(|x|)`` on the grid by linear interpolation.

    Raises
    ------
    DomainError
        If the grid reaches beyond ``R_max`` or the dimensions differ.
    """
    if p.n != grid.n:
        raise DomainError("profile and grid dimensions differ")
    if math.sqrt(grid.n) * grid.L > p.R_max * (1 + 1e-12):
        raise DomainError("grid radius exceeds the profile range")
    return Field(grid, p(grid.radius))


def sphere_area(n):
    """``|S^(n-1)| = n omega_n``."""
    return n * unit_ball_volume(n)


def cap_area(n, t0):
    """Area of ``{y' in S^(n-1) : x'.y' >= t0}`` for ``n >= 2``."""
    t0 = np.clip(np.asarray(t0, dtype=float), -1.0, 1.0)
    if n == 2:
        return 2.0 * np.arccos(t0)
    half = 0.5 * sphere_area(n)
    # cap beyond |t0| covers the fraction I_{1 - t0^2}((n-1)/2, 1/2) of a hemisphere
    part = half * betainc((n - 1) / 2, 0.5, 1.0 - t0**2)
    return np.where(t0 >= 0, part, 2 * half - part)


def _cosine_quadrature(fn, lo, hi, panels=128, order=8):
    """Composite Gauss-Legendre after ``r = lo + (hi-lo)(1 - cos(pi th))/2``.

    The substitution absorbs square-root behaviour at both endpoints.
    """
    nodes, weights = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(0.0, 1.0, panels + 1)
    half = 0.5 * np.diff(edges)
    th = (0.5 * (edges[:-1] + edges[1:]))[:, None] + half[:, None] * nodes
    w = half[:, None] * weights
    r = lo + (hi - lo) * 0.5 * (1 - np.cos(np.pi * th))
    jac = (hi - lo) * 0.5 * np.pi * np.sin(np.pi * th)
    return float(np.sum(fn(r) * jac * w))


def ball_convolution(f, R, x):
    """``(f * chi_{B(0,R)})(x)`` for a radial profile ``f``.

    For ``n >= 2`` this is ``int f0(r) sigma(r) r^(n-1) dr`` with ``sigma``
    the area of the spherical cap ``x'.y' >= t0``,
    ``t0 = (r^2 + rho^2 - R^2) / (2 r rho)``.
    """
    if not R > 0:
        raise DomainError("R must be positive")
    n = f.n
    x = np.atleast_1d(np.asarray(x, dtype=float))
    rho = float(np.linalg.norm(x))
    if n == 1:
        pieces = [(rho - R, rho + R)] if not rho - R < 0 < rho + R else [(rho - R, 0.0), (0.0, rho + R)]
        return sum(_cosine_quadrature(lambda y: f(np.abs(y)), a, b) for a, b in pieces)
    area = sphere_area(n)
    if rho == 0:
        return _cosine_quadrature(lambda r: f(r) * area * r ** (n - 1), 0.0, R)

    def integrand(r):
        t0 = (r * r + rho * rho - R * R) / (2 * np.maximum(r, 1e-300) * rho)
        return f(r) * cap_area(n, t0) * r ** (n - 1)

    lo, hi = max(0.0, rho - R), rho + R
    if lo < R - rho < hi:
        # full spheres inside r < R - rho
        return _cosine_quadrature(integrand, lo, R - rho) + _cosine_quadrature(integrand, R - rho, hi)
    return _cosine_quadrature(integrand, lo, hi)


def ball_convolution_bound(A_hat, f_norm, R, rho, n):
    """``(R/rho)^(n-1) / Ahat^{-1}(rho^(1-n) / R) * ||f||_{L^A}``."""
    return (R / rho) ** (n - 1) / A_hat.inverse(rho ** (1 - n) / R) * f_norm


def profile_norm(A, f, grid_points=20001):
    """``||f||_{L^A(R^n)}`` of a radial profile via ``n omega_n r^(n-1) dr``."""
    r = np.linspace(0.0, f.R_max, grid_points)
    dr = r[1] - r[0]
    w = sphere_area(f.n) * r ** (f.n - 1) * dr
    w[[0, -1]] *= 0.5
    return weighted_luxemburg(A, f(r), w).value


@dataclass(frozen=True, eq=False)
class StraussProfile:
    """Decay ratios along the first axis.

    ``bound = rho^(1-n) / Ahat^{-1}(rho^(1-n)) * ||u||_{H^{s,A}}`` and
    ``ratio = |u| / bound``.
    """

    rho: np.ndarray
    values: np.ndarray
    bound: np.ndarray
    ratio: np.ndarray
    hypothesis_ok: bool

    @property
    def sup(self):
        return float(np.max(self.ratio)) if self.ratio.size else 0.0

    def to_csv(self, path):
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["rho", "abs_u", "bound", "ratio"])
            for row in zip(self.rho, self.values, self.bound, self.ratio):
                w.writerow([repr(float(v)) for v in row])
        return path


def strauss_ratio(A, s, u, A_hat=None, hs_norm_value=None):
    """Decay ratios ``|u(rho e1)| Ahat^{-1}(rho^(1-n)) / (rho^(1-n) ||u||_{H^{s,A}})``.

    Radii are the grid points ``rho`` in ``[2h, L/2]`` on the positive first
    axis. The hypothesis ``s p_minus > 1`` is recorded, not enforced.

    Raises
    ------
    DomainError
        If ``n < 2``.
    """
    g = u.grid
    if g.n < 2:
        raise DomainError("Strauss ratios need n >= 2")
    A_hat = A_hat if A_hat is not None else conjugate(A)
    ok = s * delta2_indices(A).p_minus > 1
    c = g.N // 2
    j = np.arange(2, int(math.floor(g.L / 2 / g.h + 1e-9)) + 1)
    rho = j * g.h
    line = np.abs(u.samples[(c + j,) + (c,) * (g.n - 1)])
    norm = hs_norm_value
    if norm is None:
        norm = luxemburg_norm(A, bessel_inverse(s, u)).value
    base = rho ** (1.0 - g.n)
    bound = base / A_hat.inverse(base) * norm
    with np.errstate(invalid="ignore", divide="ignore"):
        ratio = np.where(bound > 0, line / bound, 0.0)
    return StraussProfile(rho, line, bound, ratio, bool(ok))


def decay_law_slope(A_hat, n, p, rho):
    """Slope of ``log(rho^(1-n)/Ahat^{-1}(rho^(1-n)) / rho^(-(n-1)/p))`` against ``log rho``."""
    rho = np.asarray(rho, dtype=float)
    base = rho ** (1.0 - n)
    law = base / A_hat.inverse(base) / rho ** (-(n - 1) / p)
    return float(np.polyfit(np.log(rho), np.log(law), 1)[0])

