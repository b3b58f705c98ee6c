"""Littlewood-Paley filter bank, Triebel norms and atomic decompositions."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path

import numpy as np

from .errors import DomainError, GridMismatchError
from .field import Field, Grid, maximal_function, save_field, spectral_multiply
from .orlicz import luxemburg_norm, weighted_luxemburg

DROP_THRESHOLD = 1e-14


def _smooth_step(t):
    """``exp(-1/t)`` for ``t > 0`` and ``0`` otherwise."""
    t = np.asarray(t, dtype=float)
    with np.errstate(divide="ignore", over="ignore"):
        return np.where(t > 0, np.exp(-1.0 / np.where(t > 0, t, 1.0)), 0.0)


def lowpass_profile(r):
    """Radial profile of the low-pass symbol.

    Equal to 1 on ``[0, 1/2]``, 0 on ``[1, inf)``, and the normalized
    ``exp(-1/t)`` glue ``f(1-t) / (f(1-t) + f(t))``, ``t = 2r - 1``, between.
    """
    t = 2.0 * np.asarray(r, dtype=float) - 1.0
    a, b = _smooth_step(1.0 - t), _smooth_step(t)
    return a / (a + b)


@dataclass(frozen=True, eq=False)
class FilterBank:
    """Symbols of ``Phi`` and ``phi_1 .. phi_K`` on a grid, in FFT order."""

    K: int
    grid: Grid
    Phi_hat: np.ndarray
    phi_hat: tuple

    def symbol_at(self, k, radius):
        """Evaluate symbol ``k`` (0 is the low-pass) at radii ``radius``."""
        if k == 0:
            return lowpass_profile(radius)
        return lowpass_profile(radius / 2**k) - lowpass_profile(radius / 2 ** (k - 1))

    def partition_defect(self):
        """``max |Phi_hat + sum phi_hat - 1|`` over ``|xi| <= 2^(K-1)``."""
        total = self.Phi_hat + sum(self.phi_hat)
        inside = np.sqrt(self.grid.xi2) <= 2 ** (self.K - 1)
        return float(np.max(np.abs(total[inside] - 1.0)))


def max_levels(grid):
    """Largest ``K`` with ``2^K <= pi / h``."""
    return int(math.floor(math.log2(math.pi / grid.h) + 1e-12))


def build_filter_bank(K, grid):
    """Build the bank with ``K`` band-pass levels.

    Raises
    ------
    DomainError
        If ``2^K`` exceeds the Nyquist frequency ``pi/h``.
    """
    if K < 1 or K > max_levels(grid):
        raise DomainError(f"K={K} not resolvable on this grid (max {max_levels(grid)})")
    radius = np.sqrt(grid.xi2)
    Phi = lowpass_profile(radius)
    phis = tuple(lowpass_profile(radius / 2**k) - lowpass_profile(radius / 2 ** (k - 1)) for k in range(1, K + 1))
    for arr in (Phi,) + phis:
        arr.flags.writeable = False
    return FilterBank(K, grid, Phi, phis)


def lp_pieces(bank, u):
    """``[Phi * u, phi_1 * u, ..., phi_K * u]``."""
    if u.grid != bank.grid:
        raise GridMismatchError(f"{bank.grid} vs {u.grid}")
    return [spectral_multiply(u, sym) for sym in (bank.Phi_hat,) + bank.phi_hat]


def lq_aggregate(fields, q, weights=None):
    """Pointwise ``(sum_k |w_k f_k|^q)^(1/q)`` of a list of fields."""
    if weights is None:
        weights = [1.0] * len(fields)
    acc = sum((np.abs(w * f.samples)) ** q for w, f in zip(weights, fields))
    return Field(fields[0].grid, acc ** (1.0 / q))


def triebel_norm(A, s, q, u, bank):
    """``||Phi * u||_{L^A} + ||(sum_k |2^(sk) phi_k * u|^q)^(1/q)||_{L^A}``."""
    if not q > 1:
        raise DomainError("q must exceed 1")
    pieces = lp_pieces(bank, u)
    low = luxemburg_norm(A, pieces[0]).value
    bands = lq_aggregate(pieces[1:], q, [2.0 ** (s * k) for k in range(1, bank.K + 1)])
    return low + luxemburg_norm(A, bands).value


# -- atoms ------------------------------------------------------------------


def _bump(t):
    """``exp(-1/(1-t^2))`` on ``|t| < 1``."""
    t = np.asarray(t, dtype=float)
    inside = np.abs(t) < 1
    out = np.zeros_like(t)
    out[inside] = np.exp(-1.0 / (1.0 - t[inside] ** 2))
    return out


def _cube_side_cells(grid, i):
    cells = 2.0**-i / grid.h
    side = int(round(cells))
    if side < 1 or abs(cells - side) > 1e-9:
        raise DomainError(f"scale {i} cubes are not aligned with the grid")
    if (grid.N % side) != 0:
        raise DomainError(f"scale {i} cubes do not tile the grid")
    return side


def partition_profile(grid, i):
    """One-dimensional ``eta_i * chi_{i0}`` on the index range ``[0, 2 side - 1)``.

    ``eta_i(x) = 2^i eta(2^i x)`` with ``eta`` the bump on ``[0, 1)``,
    normalized to unit discrete mass, so the shifted profiles sum to one.
    """
    side = _cube_side_cells(grid, i)
    x = (np.arange(side) + 0.0) / side  # cell positions in [0, 1)
    eta = _bump(2 * x - 1)
    eta = eta / eta.sum()
    # discrete convolution with the indicator of [0, side)
    return np.convolve(eta, np.ones(side))


@dataclass(frozen=True, eq=False)
class Atom:
    """Atom ``a_ik`` stored on the window of its triple cube.

    ``start`` is the grid index of the window's first cell on each axis (the
    window wraps periodically) and ``values`` has shape ``(3 side,)*n``.
    """

    i: int
    k: tuple
    coefficient: float
    start: tuple
    values: np.ndarray


def _window_index(grid, start, width):
    return np.ix_(*[(np.arange(width) + s0) % grid.N for s0 in start])


def _multi_indices(n, m):
    return [g for g in product(range(m + 1), repeat=n) if sum(g) <= m]


def scaled_derivative_max(field_samples, grid, i, m):
    """``max_{|g| <= m} 2^(-i|g|) sup |D^g f|`` with spectral derivatives."""
    F = np.fft.fftn(field_samples)
    best = float(np.max(np.abs(field_samples)))
    for g in _multi_indices(grid.n, m):
        order = sum(g)
        if order == 0:
            continue
        sym = np.ones(grid.shape, dtype=complex)
        for axis, power in enumerate(g):
            if power:
                k = np.broadcast_to(grid.xi[axis], grid.shape).copy()
                if power % 2:
                    k[(slice(None),) * axis + (grid.N // 2,)] = 0.0
                sym = sym * (1j * k) ** power
        deriv = np.fft.ifftn(sym * F).real
        best = max(best, 2.0 ** (-i * order) * float(np.max(np.abs(deriv))))
    return best


@dataclass
class AtomicDecomposition:
    """Coefficients ``s_ik`` and atoms ``a_ik`` with ``u = sum 2^(-is) s_ik a_ik``."""

    s: float
    m: int
    I_max: int
    grid: Grid
    atoms: list = field(default_factory=list)
    dropped: dict = field(default_factory=dict)

    def coefficients(self, i):
        """Mapping ``k -> s_ik`` at scale ``i``."""
        return {a.k: a.coefficient for a in self.atoms if a.i == i}

    def atom_field(self, atom):
        arr = np.zeros(self.grid.shape)
        side = _cube_side_cells(self.grid, atom.i)
        arr[_window_index(self.grid, atom.start, 3 * side)] = atom.values
        return Field(self.grid, arr)

    def reconstruct(self):
        """``sum_i 2^(-is) sum_k s_ik a_ik``."""
        arr = np.zeros(self.grid.shape)
        for a in self.atoms:
            side = _cube_side_cells(self.grid, a.i)
            arr[_window_index(self.grid, a.start, 3 * side)] += 2.0 ** (-a.i * self.s) * a.coefficient * a.values
        return Field(self.grid, arr)

    def step_field(self, i):
        """``s_i(x) = sum_k s_ik chi_ik(x)``."""
        arr = np.zeros(self.grid.shape)
        side = _cube_side_cells(self.grid, i)
        for a in self.atoms:
            if a.i == i:
                start = tuple(c + side for c in a.start)
                arr[_window_index(self.grid, start, side)] += a.coefficient
        return Field(self.grid, arr)

    def to_json(self):
        scales = []
        for i in range(self.I_max + 1):
            cubes = [{"k": list(a.k), "s": a.coefficient} for a in self.atoms if a.i == i]
            scales.append({"i": i, "cubes": cubes, "dropped": self.dropped.get(i, 0)})
        return {"s": self.s, "m": self.m, "I_max": self.I_max, "grid": self.grid.to_dict(), "scales": scales}


def scale_components(u, s, bank, I_max):
    """``u_i = 2^(is) * (i-th LP piece)`` for ``i = 0 .. I_max``."""
    pieces = lp_pieces(bank, u)
    return [Field(u.grid, 2.0 ** (i * s) * pieces[i].samples) for i in range(I_max + 1)]


def atomic_decompose(u, s, m, bank, I_max):
    """Constructive atomic decomposition.

    For each scale ``i`` and dyadic cube ``Q_ik``, ``b_ik = eta_ik u_i`` with
    ``eta_ik = eta_i * chi_ik`` a smooth partition of unity. ``s_ik`` is the
    scale-normalized ``C^m`` size of ``b_ik`` (spectral derivatives, maximum
    over the full grid) and ``a_ik = b_ik / s_ik``. Cubes whose ``s_ik`` is
    below ``1e-14`` of the scale maximum are dropped and counted.

    Raises
    ------
    DomainError
        If ``I_max`` exceeds the bank, or ``m <= s``.
    """
    g = u.grid
    if I_max > bank.K:
        raise DomainError("I_max exceeds the filter bank levels")
    if not m > s > 0:
        raise DomainError("need m > s > 0")
    dec = AtomicDecomposition(float(s), int(m), int(I_max), g)
    if not np.any(u.samples):
        return dec
    for i, ui in enumerate(scale_components(u, s, bank, I_max)):
        side = _cube_side_cells(g, i)
        prof = partition_profile(g, i)  # length 2 side, starting at the cube's first cell
        window = np.zeros(3 * side)
        window[side : side + prof.size] = prof
        cubes_per_axis = g.N // side
        candidates = []
        for kk in product(range(cubes_per_axis), repeat=g.n):
            start = tuple(c * side - side for c in kk)
            idx = _window_index(g, start, 3 * side)
            eta = window
            for _ in range(g.n - 1):
                eta = np.multiply.outer(eta, window)
            local = eta * ui.samples[idx]
            if not np.any(local):
                continue
            b = np.zeros(g.shape)
            b[idx] = local
            coeff = scaled_derivative_max(b, g, i, m)
            k = tuple(c - g.N // (2 * side) for c in kk)
            candidates.append((k, start, coeff, local))
        if not candidates:
            continue
        top = max(c[2] for c in candidates)
        dropped = 0
        for k, start, coeff, local in candidates:
            if coeff <= DROP_THRESHOLD * top:
                dropped += 1
                continue
            dec.atoms.append(Atom(i, k, coeff, start, local / coeff))
        dec.dropped[i] = dropped
    return dec


@dataclass(frozen=True)
class AtomCheck:
    valid: bool
    ratio: float
    support_ok: bool


def atom_validate(a, cube, m, tol=1e-6):
    """Check support in the triple cube (within one cell) and the size bound.

    Parameters
    ----------
    a : Field
    cube : tuple
        ``(i, k)`` with ``k`` an integer or a tuple of integers.
    m : int
        Number of derivatives.
    """
    g = a.grid
    i, k = cube
    k = (k,) * g.n if np.isscalar(k) else tuple(k)
    side = _cube_side_cells(g, i)
    start = tuple((kk - 1) * side + g.N // 2 - 1 for kk in k)
    mask = np.zeros(g.shape, dtype=bool)
    mask[_window_index(g, start, 3 * side + 2)] = True
    peak = float(np.max(np.abs(a.samples)))
    outside = float(np.max(np.abs(a.samples[~mask]))) if np.any(~mask) else 0.0
    support_ok = outside <= 1e-12 * max(peak, 1e-300) or peak == 0
    ratio = scaled_derivative_max(a.samples, g, i, m) if peak > 0 else 0.0
    return AtomCheck(bool(support_ok and ratio <= 1 + tol), ratio, bool(support_ok))


def coefficient_norm(d, A, q):
    """``||(sum_i |s_i|^q)^(1/q)||_{L^A}`` with ``s_i`` the coefficient step fields."""
    if not d.atoms:
        return 0.0
    steps = [d.step_field(i) for i in range(d.I_max + 1)]
    agg = lq_aggregate(steps, q)
    return weighted_luxemburg(A, agg.samples, d.grid.cell).value


def maximal_domination(d, components):
    """Per-scale ``max_x s_i(x) / M u_i(x)`` over points with ``s_i > 0``."""
    out = []
    for i, ui in enumerate(components):
        step = d.step_field(i).samples
        mu = maximal_function(ui).samples
        sel = step > 0
        if not np.any(sel):
            out.append(0.0)
            continue
        with np.errstate(divide="ignore"):
            out.append(float(np.max(step[sel] / mu[sel])))
    return out


def export_decomposition(d, path, atoms=False, max_atoms=256):
    """Write the JSON index, and optionally atoms in the field format."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    data = d.to_json()
    if atoms:
        if len(d.atoms) > max_atoms:
            raise DomainError(f"{len(d.atoms)} atoms exceed the export guard {max_atoms}")
        names = []
        for j, a in enumerate(d.atoms):
            name = path.with_name(f"{path.stem}_atom{j:04d}")
            save_field(d.atom_field(a), name, {"i": a.i, "k": list(a.k)})
            names.append(name.name + ".json")
        data["atoms"] = names
    path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")
    return path
