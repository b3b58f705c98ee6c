"""Sampled functions on uniform periodic grids and their spectral calculus.

Fourier convention: ``F u(xi) = int u(x) exp(-i x.xi) dx`` with inverse
``(2 pi)^-n int (.) exp(i x.xi) dxi``. Samples sit at ``x_j = -L + j h``,
``h = 2L/N``, so the origin is at index ``N/2`` on every axis.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

from . import _kernels
from .errors import CostGuardError, DomainError, GridMismatchError, NumericError

PRODUCT_PAIR_MAX_N = 128


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid on the box ``[-L, L)^n``.

    Parameters
    ----------
    n : int
        Dimension, 1, 2 or 3.
    N : int
        Points per axis, a power of two with ``N >= 8``.
    L : float
        Half-extent of the box.
    """

    n: int
    N: int
    L: float

    def __post_init__(self):
        if self.n not in (1, 2, 3):
            raise DomainError("grid dimension must be 1, 2 or 3")
        if self.N < 8 or self.N & (self.N - 1):
            raise DomainError("N must be a power of two >= 8")
        if not self.L > 0:
            raise DomainError("L must be positive")
        object.__setattr__(self, "L", float(self.L))

    @property
    def h(self):
        return 2 * self.L / self.N

    @property
    def shape(self):
        return (self.N,) * self.n

    @property
    def volume(self):
        return (2 * self.L) ** self.n

    @property
    def cell(self):
        """Cell volume ``h^n``."""
        return self.h**self.n

    @property
    def omega(self):
        """Volume of the unit ball in dimension ``n``."""
        return unit_ball_volume(self.n)

    @property
    def origin(self):
        return (self.N // 2,) * self.n

    @cached_property
    def axis(self):
        """One-dimensional coordinate array ``-L + j h``."""
        return -self.L + self.h * np.arange(self.N)

    @cached_property
    def coords(self):
        """Tuple of ``n`` sparse coordinate arrays broadcastable to ``shape``."""
        return tuple(np.meshgrid(*([self.axis] * self.n), indexing="ij", sparse=True))

    @cached_property
    def radius(self):
        """``|x|`` on the grid."""
        return np.sqrt(sum(c**2 for c in self.coords))

    @cached_property
    def frequency_axis(self):
        """Angular frequencies ``pi k / L`` in FFT order."""
        return 2 * np.pi * np.fft.fftfreq(self.N, d=self.h)

    @cached_property
    def xi(self):
        """Tuple of ``n`` sparse frequency arrays in FFT order."""
        return tuple(np.meshgrid(*([self.frequency_axis] * self.n), indexing="ij", sparse=True))

    @cached_property
    def xi2(self):
        """``|xi|^2`` in FFT order."""
        return sum(k**2 for k in self.xi)

    def refine(self, factor=2):
        """Same box with ``factor`` times as many points per axis."""
        return Grid(self.n, self.N * factor, self.L)

    def to_dict(self):
        return {"n": self.n, "N": self.N, "L": self.L}


def unit_ball_volume(n):
    """``omega_n = pi^(n/2) / Gamma(n/2 + 1)``."""
    return math.pi ** (n / 2) / math.gamma(n / 2 + 1)


def _frozen(arr):
    arr = np.array(arr, dtype=float, copy=True)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class Field:
    """A real function sampled on a :class:`Grid`.

    The sample array is copied and made read-only on construction.
    """

    grid: Grid
    samples: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.samples, dtype=float)
        if arr.shape != self.grid.shape:
            if arr.size != self.grid.N**self.grid.n:
                raise DomainError(f"expected {self.grid.shape} samples, got {arr.shape}")
            arr = arr.reshape(self.grid.shape)
        if not np.all(np.isfinite(arr)):
            raise NumericError("field samples must be finite")
        object.__setattr__(self, "samples", _frozen(arr))

    @classmethod
    def from_function(cls, grid, fn):
        """Sample ``fn(*coords)`` on ``grid``."""
        return cls(grid, np.broadcast_to(fn(*grid.coords), grid.shape))

    @classmethod
    def zeros(cls, grid):
        return cls(grid, np.zeros(grid.shape))

    @classmethod
    def constant(cls, grid, c):
        return cls(grid, np.full(grid.shape, float(c)))

    @classmethod
    def delta(cls, grid):
        """Discrete delta: ``1/h^n`` at the origin cell."""
        arr = np.zeros(grid.shape)
        arr[grid.origin] = 1.0 / grid.cell
        return cls(grid, arr)

    def _check(self, other):
        if isinstance(other, Field) and other.grid != self.grid:
            raise GridMismatchError(f"{self.grid} vs {other.grid}")

    def _value(self, other):
        if isinstance(other, Field):
            self._check(other)
            return other.samples
        return other

    def __add__(self, other):
        return Field(self.grid, self.samples + self._value(other))

    __radd__ = __add__

    def __sub__(self, other):
        return Field(self.grid, self.samples - self._value(other))

    def __rsub__(self, other):
        return Field(self.grid, self._value(other) - self.samples)

    def __mul__(self, other):
        return Field(self.grid, self.samples * self._value(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return Field(self.grid, self.samples / self._value(other))

    def __neg__(self):
        return Field(self.grid, -self.samples)

    def __abs__(self):
        return Field(self.grid, np.abs(self.samples))

    def max_abs(self):
        return float(np.max(np.abs(self.samples)))

    def boundary_max(self):
        """Largest ``|u|`` on the first and last slab of every axis."""
        arr = np.abs(self.samples)
        return float(max(max(np.max(np.take(arr, [0, -1], axis=ax)) for ax in range(self.grid.n)), 0.0))


@dataclass(frozen=True, eq=False)
class ProductField:
    """A function ``v(x, t)`` on the product of two grids of equal dimension.

    ``samples`` has shape ``grid_x.shape + grid_t.shape``.
    """

    grid_x: Grid
    grid_t: Grid
    samples: np.ndarray

    def __post_init__(self):
        if self.grid_x.n != self.grid_t.n:
            raise DomainError("product grids must share the dimension")
        arr = np.asarray(self.samples, dtype=float)
        shape = self.grid_x.shape + self.grid_t.shape
        if arr.shape != shape:
            raise DomainError(f"expected {shape} samples, got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise NumericError("field samples must be finite")
        object.__setattr__(self, "samples", _frozen(arr))

    @classmethod
    def from_function(cls, grid_x, grid_t, fn):
        n = grid_x.n
        x = np.meshgrid(*([grid_x.axis] * n), *([grid_t.axis] * n), indexing="ij", sparse=True)
        shape = grid_x.shape + grid_t.shape
        return cls(grid_x, grid_t, np.broadcast_to(fn(x[:n], x[n:]), shape))

    def measure_weights(self):
        """Cell weights of ``dmu = |t|^-n dx dt``; the ``t = 0`` cell gets 0."""
        n = self.grid_t.n
        tt = np.meshgrid(*([self.grid_t.axis] * n), indexing="ij", sparse=True)
        t_abs = np.sqrt(sum(c**2 for c in tt))
        with np.errstate(divide="ignore"):
            w = np.where(t_abs > 0, t_abs ** (-n), 0.0)
        w = w * self.grid_t.cell * self.grid_x.cell
        return np.broadcast_to(w, self.samples.shape)

    def __mul__(self, c):
        return ProductField(self.grid_x, self.grid_t, self.samples * c)

    __rmul__ = __mul__


def _same_grid(*fields):
    g = fields[0].grid
    for f in fields[1:]:
        if f.grid != g:
            raise GridMismatchError(f"{g} vs {f.grid}")
    return g


def integrate(u):
    """Midpoint rule ``h^n * sum(samples)``."""
    return float(u.grid.cell * np.sum(u.samples))


def convolve(u, v):
    """Periodic convolution ``int u(x - y) v(y) dy`` computed by FFT."""
    g = _same_grid(u, v)
    U = np.fft.rfftn(np.fft.ifftshift(u.samples))
    V = np.fft.rfftn(np.fft.ifftshift(v.samples))
    out = np.fft.irfftn(U * V, s=g.shape, axes=tuple(range(g.n)))
    return Field(g, g.cell * np.fft.fftshift(out))


def _evaluate_symbol(grid, symbol):
    values = symbol(grid.xi) if callable(symbol) else symbol
    values = np.broadcast_to(np.asarray(values), grid.shape)
    if np.any(np.isnan(values)):
        raise NumericError("symbol is NaN on the frequency grid")
    if not np.all(np.isfinite(values)):
        raise NumericError("symbol is not finite on the frequency grid")
    return values


def spectrum(u):
    """Grid approximation of ``F u`` in FFT order."""
    g = u.grid
    return g.cell * np.fft.fftn(np.fft.ifftshift(u.samples))


def spectral_multiply(u, symbol):
    """Apply the Fourier multiplier ``symbol(xi)`` to ``u``.

    Parameters
    ----------
    u : Field
    symbol : callable or array_like
        Either a function of the tuple ``grid.xi`` of frequency arrays or
        values broadcastable to the grid shape in FFT order.

    Returns
    -------
    Field
        Real part of ``F^-1(symbol * F u)``.
    """
    g = u.grid
    values = _evaluate_symbol(g, symbol)
    out = np.fft.ifftn(values * np.fft.fftn(u.samples)).real
    return Field(g, out)


def gradient(u):
    """Spectral gradient: one field per axis, symbol ``i xi_j``."""
    g = u.grid
    U = np.fft.fftn(u.samples)
    out = []
    for j in range(g.n):
        k = np.broadcast_to(g.xi[j], g.shape).copy()
        # the Nyquist mode has no real-valued derivative
        k[(slice(None),) * j + (g.N // 2,)] = 0.0
        out.append(Field(g, np.fft.ifftn(1j * k * U).real))
    return out


def gradient_magnitude(u):
    """Pointwise Euclidean norm of the spectral gradient."""
    parts = gradient(u)
    return Field(u.grid, np.sqrt(sum(p.samples**2 for p in parts)))


def maximal_radii(grid):
    """Dyadic radii ``h 2^j``, ``j = 0 .. log2(N/2)``."""
    return grid.h * 2.0 ** np.arange(int(math.log2(grid.N // 2)) + 1)


def maximal_function(u):
    """Centered discrete maximal function over dyadic radii.

    ``M u(x)`` is the largest mean of ``|u|`` over the grid points within
    distance ``h 2^j`` of ``x`` (periodic wrap), ``j = 0 .. log2(N/2)``.
    The single-point ball (radius 0) is included so that ``M u >= |u|``.
    """
    g = u.grid
    a = np.abs(u.samples)
    if g.n == 1:
        return Field(g, _kernels.ball_max_1d(np.ascontiguousarray(a)))
    best = a.copy()
    A = np.fft.rfftn(a)
    axes = tuple(range(g.n))
    offsets = np.meshgrid(*([np.arange(g.N) - g.N // 2] * g.n), indexing="ij", sparse=True)
    dist2 = sum(o**2 for o in offsets)
    for j in range(int(math.log2(g.N // 2)) + 1):
        ball = (dist2 <= 4**j).astype(float)
        ball /= ball.sum()
        mean = np.fft.irfftn(A * np.fft.rfftn(np.fft.ifftshift(ball)), s=g.shape, axes=axes)
        np.maximum(best, mean, out=best)
    return Field(g, best)


def product_weighted_pair(v, K, w):
    """Triple midpoint sum of ``|K(z, x, t) v(x, t) w(z)| |t|^-n``.

    Parameters
    ----------
    v : ProductField
    K : callable
        ``K(z, x, t)`` vectorized over broadcast arrays.
    w : Field
        On the grid of ``v.grid_x``.

    Raises
    ------
    CostGuardError
        Unless ``n = 1`` and both grids have ``N <= 128``.
    """
    gx, gt = v.grid_x, v.grid_t
    if gx.n != 1 or gx.N > PRODUCT_PAIR_MAX_N or gt.N > PRODUCT_PAIR_MAX_N:
        raise CostGuardError("product_weighted_pair is limited to n = 1, N <= 128")
    if w.grid != gx:
        raise GridMismatchError("w must live on the x grid of v")
    z = gx.axis[:, None, None]
    x = gx.axis[None, :, None]
    t = gt.axis[None, None, :]
    weights = v.measure_weights()[None]
    kern = np.broadcast_to(K(z, x, t), (gx.N, gx.N, gt.N))
    total = np.abs(kern * v.samples[None] * weights).sum(axis=(1, 2))
    return float(gx.cell * np.sum(total * np.abs(w.samples)))


# -- serialization -------------------------------------------------------


def _paths(path):
    path = Path(path)
    base = path.with_suffix("") if path.suffix in (".json", ".bin") else path
    return base.with_suffix(".json"), base.with_suffix(".bin")


def save_field(u, path, extra=None):
    """Write ``u`` as a JSON header plus a float64 sidecar ``.bin`` file.

    Returns the pair of written paths.
    """
    header_path, data_path = _paths(path)
    header = dict(u.grid.to_dict(), dtype="float64", order="C", data=data_path.name)
    if extra:
        header.update(extra)
    header_path.parent.mkdir(parents=True, exist_ok=True)
    np.ascontiguousarray(u.samples, dtype="<f8").tofile(data_path)
    header_path.write_text(json.dumps(header, indent=2, sort_keys=True) + "\n")
    return header_path, data_path


def load_field(path):
    """Inverse of :func:`save_field`; accepts the header or sidecar path."""
    header_path, data_path = _paths(path)
    header = json.loads(header_path.read_text())
    grid = Grid(int(header["n"]), int(header["N"]), float(header["L"]))
    data = np.fromfile(header_path.parent / header.get("data", data_path.name), dtype="<f8")
    return Field(grid, data.reshape(grid.shape))


def export_csv(u, path):
    """Write ``x,u`` rows for a one-dimensional field."""
    if u.grid.n != 1:
        raise DomainError("CSV export is only defined for n = 1")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "u"])
        for x, val in zip(u.grid.axis, u.samples):
            writer.writerow([repr(float(x)), repr(float(val))])
    return path
