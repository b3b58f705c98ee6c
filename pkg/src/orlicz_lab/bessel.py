"""Bessel kernels, potentials and the operators built from them.

Off-origin kernel samples come from the heat-kernel subordination formula

    G_s(r) = Gamma(s/2)^-1 int_0^inf tau^(s/2-1) e^-tau (4 pi tau)^(-n/2)
             exp(-r^2 / (4 tau)) dtau,

evaluated by the trapezoid rule in ``log tau`` (geometrically convergent
for this analytic, doubly-exponentially decaying integrand). Periodic images
of the box are summed. The origin cell holds the cell average implied by unit
mass, since the point value is infinite for ``s <= n`` and the
kink/singularity is what spoils the midpoint rule there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np
from scipy.special import gammaln

from . import _kernels
from .errors import ConditioningError, CostGuardError, DomainError, GridMismatchError, NumericError
from .field import Field, Grid, ProductField, convolve, gradient, spectral_multiply
from .orlicz import luxemburg_norm

SUBORDINATION_STEP = 0.08
INCREMENT_MAX_N = 128


def bessel_symbol(s):
    """The multiplier ``xi -> (1 + |xi|^2)^(-s/2)``."""

    def symbol(xi):
        return (1.0 + sum(k**2 for k in xi)) ** (-s / 2)

    return symbol


def radial_kernel(r, s, n, step=SUBORDINATION_STEP):
    """``G_s(r)`` in dimension ``n`` for ``r > 0`` and ``s > 0``.

    Parameters
    ----------
    r : array_like
        Positive radii.
    s : float
        Order, ``s > 0``.
    n : int
        Dimension (any positive integer; ``n + 2`` is used for gradients).
    """
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise DomainError("radial_kernel needs r > 0")
    if not s > 0:
        raise DomainError("radial_kernel needs s > 0")
    flat = r.ravel()
    y = np.arange(math.log(flat.min() ** 2 / 4) - 6, 5.0, step)
    tau = np.exp(y)
    base = (s / 2) * y - tau - (n / 2) * np.log(4 * np.pi * tau) - gammaln(s / 2)
    out = np.empty_like(flat)
    chunk = max(1, 2_000_000 // y.size)
    for start in range(0, flat.size, chunk):
        rr = flat[start : start + chunk, None]
        out[start : start + chunk] = np.exp(base - rr**2 / (4 * tau)).sum(axis=1) * step
    return out.reshape(r.shape)


def _image_offsets(grid):
    """Integer offsets from the origin index, per axis, in grid order."""
    return np.arange(grid.N) - grid.N // 2


@lru_cache(maxsize=32)
def _kernel_table(s, grid, gradient_axis=None):
    """Periodized samples of ``G_s`` (or ``d_i G_s``) with the origin left at 0."""
    n, N, h = grid.n, grid.N, grid.h
    m = _image_offsets(grid)
    shifts = list(product((-1, 0, 1), repeat=n))
    d2_list = []
    for k in shifts:
        comps = np.meshgrid(*[(m + kk * N) for kk in k], indexing="ij", sparse=True)
        d2_list.append(sum(c.astype(np.int64) ** 2 for c in comps))
    stacked = np.stack([np.broadcast_to(d, grid.shape) for d in d2_list])
    values, inverse = np.unique(stacked, return_inverse=True)
    inverse = inverse.reshape(stacked.shape)
    dim = n if gradient_axis is None else n + 2
    g = np.zeros(values.shape)
    pos = values > 0
    g[pos] = radial_kernel(np.sqrt(values[pos].astype(float)) * h, s, dim)
    per_image = g[inverse]
    if gradient_axis is not None:
        for idx, k in enumerate(shifts):
            coord = (m + k[gradient_axis] * N) * h
            shape = [1] * n
            shape[gradient_axis] = N
            per_image[idx] *= -2 * np.pi * coord.reshape(shape)
    out = per_image.sum(axis=0)
    out[grid.origin] = 0.0
    out.flags.writeable = False
    return out


@dataclass(frozen=True, eq=False)
class BesselKernel:
    """Sampled Bessel kernel ``G_s`` on a grid.

    Attributes
    ----------
    s : float
        Order.
    grid : Grid
    samples : Field
        Spatial samples. For ``s > 0`` the origin cell holds the cell average
        fixing unit mass; for ``s < 0`` the samples are the inverse DFT of the
        symbol and carry no integrability claim.
    origin_fit : float or None
        For ``0 < s < n``: the origin-cell average predicted by fitting
        ``C |x|^(s-n) + D`` to the two nearest shells (diagnostic).
    """

    s: float
    grid: Grid
    samples: Field
    origin_fit: float | None = None

    @property
    def symbol(self):
        return bessel_symbol(self.s)

    def mass(self):
        return float(self.grid.cell * np.sum(self.samples.samples))

    def profile(self):
        """Samples along the positive first axis, starting at the origin."""
        g = self.grid
        idx = g.origin[1:]
        line = self.samples.samples[(slice(None),) + idx]
        return g.axis[g.N // 2 :], line[g.N // 2 :]


def _origin_power_fit(table, s, grid):
    n, h = grid.n, grid.h
    c = grid.N // 2
    first = table[(c + 1,) + (c,) * (n - 1)]
    second = table[(c + 2,) + (c,) * (n - 1)]
    e = s - n
    # G ~ C r^e + D on the shells r = h, 2h
    C = (first - second) / (h**e - (2 * h) ** e)
    D = first - C * h**e
    rho = h * (1.0 / grid.omega) ** (1.0 / n)  # ball with the cell's volume
    return C * n * rho**s / s / h**n * grid.omega + D


def synthesize_kernel(s, grid):
    """Sample ``G_s`` on ``grid``.

    Raises
    ------
    DomainError
        If ``s == 0``.
    """
    s = float(s)
    if s == 0:
        raise DomainError("synthesize_kernel needs s != 0")
    if s < 0:
        sym = np.broadcast_to(bessel_symbol(s)(grid.xi), grid.shape)
        raw = np.fft.fftshift(np.fft.ifftn(sym).real) / grid.cell
        return BesselKernel(s, grid, Field(grid, raw))
    table = np.array(_kernel_table(s, grid))
    off_mass = grid.cell * table.sum()
    fit = _origin_power_fit(table, s, grid) if s < grid.n else None
    table[grid.origin] = (1.0 - off_mass) / grid.cell
    return BesselKernel(s, grid, Field(grid, table), fit)


def _symbol_for(kernel_or_s):
    return bessel_symbol(kernel_or_s.s if isinstance(kernel_or_s, BesselKernel) else float(kernel_or_s))


def potential(kernel, f):
    """``G_s * f`` by spectral multiplication.

    ``kernel`` is a :class:`BesselKernel` or an order ``s > 0``.
    """
    if isinstance(kernel, BesselKernel):
        if kernel.grid != f.grid:
            raise GridMismatchError(f"{kernel.grid} vs {f.grid}")
        s = kernel.s
    else:
        s = float(kernel)
    if not s > 0:
        raise DomainError("potential needs s > 0")
    return spectral_multiply(f, bessel_symbol(s))


def bessel_inverse(s, u):
    """Apply ``(1 + |xi|^2)^(s/2)``; the inverse of :func:`potential`.

    Raises
    ------
    ConditioningError
        If the result is not finite.
    """
    try:
        return spectral_multiply(u, bessel_symbol(-float(s)))
    except NumericError as exc:
        raise ConditioningError("bessel_inverse produced non-finite values") from exc


def hs_norm(A, s, u):
    """``||u||_{H^{s,A}} = ||bessel_inverse(s, u)||_{L^A}``."""
    return luxemburg_norm(A, bessel_inverse(s, u))


# -- L^1 modulus of continuity --------------------------------------------


def _shift_cells(grid, shift):
    vec = np.atleast_1d(np.asarray(shift, dtype=float))
    if vec.size == 1 and grid.n > 1:
        vec = np.concatenate([vec, np.zeros(grid.n - 1)])
    if vec.size != grid.n:
        raise DomainError("shift must have n components")
    cells = vec / grid.h
    rounded = np.rint(cells)
    if np.any(np.abs(cells - rounded) > 1e-9 * np.maximum(1, np.abs(cells))):
        raise DomainError("shift is not aligned with the grid")
    return tuple(int(c) for c in rounded), float(np.linalg.norm(vec))


def l1_modulus(kernel, shift):
    """``int |G_s(x + h) - G_s(x)| dx`` for a grid-aligned shift ``h``."""
    if not 0 < kernel.s < 1:
        raise DomainError("l1_modulus is defined for 0 < s < 1")
    cells, _ = _shift_cells(kernel.grid, shift)
    g = kernel.samples.samples
    moved = np.roll(g, tuple(-c for c in cells), axis=tuple(range(kernel.grid.n)))
    return float(kernel.grid.cell * np.sum(np.abs(moved - g)))


def modulus_profile(kernel, cells=None):
    """Moduli along the first axis at shifts ``cells * h`` (default 4..64)."""
    if cells is None:
        cells = 2 ** np.arange(2, 7)
    cells = np.asarray(cells)
    shifts = cells * kernel.grid.h
    values = np.array([l1_modulus(kernel, sh) for sh in shifts])
    return shifts, values


def modulus_slope(kernel, cells=None):
    """Least-squares slope of ``log modulus`` against ``log |h|``."""
    shifts, values = modulus_profile(kernel, cells)
    return float(np.polyfit(np.log(shifts), np.log(values), 1)[0])


def modulus_constant(kernel, max_shift=1.0):
    """Empirical ``sup_{|h| <= max_shift} modulus(h) (1 - s) / |h|^s`` over dyadic shifts."""
    g = kernel.grid
    j_max = int(math.floor(math.log2(min(max_shift, g.L) / g.h)))
    cells = 2 ** np.arange(0, j_max + 1)
    shifts, values = modulus_profile(kernel, cells)
    return float(np.max(values * (1 - kernel.s) / shifts**kernel.s))


# -- singular gradient operators and the s = 1 inversion -------------------


def gradient_kernel(grid, axis):
    """Samples of ``d_axis G_1``; the origin cell is 0 (odd kernel)."""
    return _kernel_table(1.0, grid, axis)


def _truncated(grid, eps):
    removed = grid.radius < eps
    count = int(np.count_nonzero(removed))
    r_eff = (count * grid.cell / grid.omega) ** (1.0 / grid.n)
    return removed, r_eff


def singular_gradient_apply(i, eps, u):
    """Truncated singular integral ``T_i^eps u``.

    The kernel ``d_i G_1`` is restricted to grid points with ``|x| >= eps``.

    Raises
    ------
    DomainError
        If ``eps < 2h`` or ``i`` is not an axis.
    """
    g = u.grid
    if not 0 <= i < g.n:
        raise DomainError("axis out of range")
    if eps < 2 * g.h * (1 - 1e-12):
        raise DomainError("eps must be at least two grid spacings")
    removed, _ = _truncated(g, eps)
    kern = np.where(removed, 0.0, gradient_kernel(g, i))
    return convolve(Field(g, kern), u)


def effective_radius(grid, eps):
    """Radius of the ball whose volume equals the excluded cells."""
    return _truncated(grid, eps)[1]


def singular_gradient_limit(i, eps, u):
    """Richardson extrapolation of ``T_i^eps u`` from ``eps`` and ``eps/2``.

    Truncation error is linear in the excluded radius, so the two levels are
    combined linearly in the effective radii.
    """
    g = u.grid
    r1, r2 = effective_radius(g, eps), effective_radius(g, eps / 2)
    t1 = singular_gradient_apply(i, eps, u)
    t2 = singular_gradient_apply(i, eps / 2, u)
    return Field(g, (r1 * t2.samples - r2 * t1.samples) / (r1 - r2))


def calderon_inversion(u, eps=None):
    """Reconstruct ``(I - Delta)^(1/2) u`` as ``G_1 * u - sum_i T_i D_i u``.

    ``eps`` defaults to four grid spacings. Each ``T_i`` is the Richardson
    limit of the truncations at ``eps`` and ``eps/2``.
    """
    g = u.grid
    if eps is None:
        eps = 4 * g.h
    out = potential(1.0, u).samples.copy()
    for i, du in enumerate(gradient(u)):
        out -= singular_gradient_limit(i, eps, du).samples
    return Field(g, out)


# -- increment-kernel operator ---------------------------------------------


@dataclass(frozen=True)
class IncrementKernelConfig:
    """Parameters of ``K(z,x,t) = (G_alpha(z-x) - G_alpha(z-x+t)) |t|^-gamma``.

    ``grid_t`` defaults to ``grid_x``; its spacing must equal that of
    ``grid_x`` so that ``z - x + t`` stays on the lattice.
    """

    alpha: float
    gamma: float
    grid_x: Grid
    grid_t: Grid | None = None

    def __post_init__(self):
        if not (self.alpha > self.gamma > 0 and self.gamma < 1):
            raise DomainError("need alpha > gamma > 0 and gamma < 1")
        if self.grid_t is None:
            object.__setattr__(self, "grid_t", self.grid_x)
        if self.grid_x.n != 1 or self.grid_t.n != 1:
            raise CostGuardError("the increment-kernel operator is limited to n = 1")
        if self.grid_x.N > INCREMENT_MAX_N or self.grid_t.N > INCREMENT_MAX_N:
            raise CostGuardError("the increment-kernel operator is limited to N <= 128")
        if not math.isclose(self.grid_x.h, self.grid_t.h, rel_tol=1e-12):
            raise DomainError("x and t grids must share the spacing")

    def t_weights(self):
        """``|t|^(-gamma-1) h_t`` with the ``t = 0`` cell removed."""
        t = np.abs(self.grid_t.axis)
        with np.errstate(divide="ignore"):
            w = np.where(t > 0, t ** (-self.gamma - 1.0), 0.0)
        return w * self.grid_t.h

    def kernel(self, z, x, t):
        """``K(z, x, t)`` on broadcast coordinate arrays (lattice points only)."""
        g = synthesize_kernel(self.alpha, self.grid_x).samples.samples
        N, h = self.grid_x.N, self.grid_x.h
        a = np.rint((z - x) / h).astype(int) + N // 2
        b = np.rint((z - x + t) / h).astype(int) + N // 2
        ta = np.abs(t)
        with np.errstate(divide="ignore"):
            tw = np.where(ta > 0, ta ** (-self.gamma), 0.0)
        return (g[a % N] - g[b % N]) * tw


def increment_kernel_apply(cfg, v):
    """``(T v)(z) = iint K(z,x,t) v(x,t) |t|^-n dx dt`` on the lattice.

    Raises
    ------
    GridMismatchError
        If ``v`` does not live on the configured grids.
    """
    if v.grid_x != cfg.grid_x or v.grid_t != cfg.grid_t:
        raise GridMismatchError("v must live on the configured grids")
    g = synthesize_kernel(cfg.alpha, cfg.grid_x).samples.samples
    out = _kernels.increment_kernel_sum(
        np.ascontiguousarray(g), np.ascontiguousarray(v.samples), cfg.t_weights()
    )
    return Field(cfg.grid_x, out * cfg.grid_x.h)
