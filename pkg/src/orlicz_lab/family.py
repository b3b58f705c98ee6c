"""Deterministic families of smooth, box-decaying test functions.

Members are described by parameters drawn from ``numpy.random.default_rng``
and sampled on demand, so one family can be evaluated on several grids.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, CostGuardError
from .field import Field
from .lpatoms import lowpass_profile, max_levels

FAMILY_KINDS = ("gaussians", "bumps", "bandlimited-random", "radial-gaussians")
BOUNDARY_TOL = 1e-8
REJECTION_BUDGET = 1000


@dataclass(frozen=True)
class FamilyMember:
    """Parameters of one test function.

    ``params`` holds centers, widths, amplitudes and (for band-limited
    members) wave vectors and phases as plain tuples.
    """

    kind: str
    params: dict
    cutoff: float | None = None

    def sample(self, grid):
        p = self.params
        coords = grid.coords
        if self.kind in ("gaussians", "radial-gaussians"):
            r2 = sum((x - c) ** 2 for x, c in zip(coords, p["center"]))
            arr = p["amplitude"] * np.exp(-r2 / p["width"] ** 2)
        elif self.kind == "bumps":
            r2 = sum((x - c) ** 2 for x, c in zip(coords, p["center"])) / p["width"] ** 2
            arr = np.zeros(np.broadcast_shapes(*(np.shape(x) for x in coords)))
            inside = r2 < 1
            arr[inside] = p["amplitude"] * np.exp(-1.0 / (1.0 - r2[inside]))
        else:
            arr = _bandlimited(grid, p, self.cutoff)
        return Field(grid, np.broadcast_to(arr, grid.shape))


def _bandlimited(grid, p, cutoff):
    """Wave packets filtered by the compactly supported low-pass at ``cutoff``."""
    coords = grid.coords
    total = np.zeros(grid.shape, dtype=complex)
    for center, width, wave, phase, amp in zip(p["center"], p["width"], p["wave"], p["phase"], p["amplitude"]):
        r2 = sum((x - c) ** 2 for x, c in zip(coords, center))
        arg = sum(k * x for k, x in zip(wave, coords))
        total = total + amp * np.exp(-r2 / width**2 + 1j * (arg + phase))
    mask = lowpass_profile(np.sqrt(grid.xi2) / cutoff)
    # real part of a masked spectrum keeps the support of the (symmetric) mask
    return np.fft.ifftn(mask * np.fft.fftn(total)).real


def _draw(kind, rng, n, L, cutoff):
    # centers and widths scale with the box so that members decay at its edge
    spread = L / 8
    if kind == "gaussians":
        return {
            "center": tuple(rng.uniform(-spread, spread, n)),
            "width": float(rng.uniform(0.5, 1.5) * spread),
            "amplitude": float(rng.uniform(0.5, 2.0)),
        }
    if kind == "bumps":
        return {
            "center": tuple(rng.uniform(-spread, spread, n)),
            "width": float(rng.uniform(1.0, 3.0) * spread),
            "amplitude": float(rng.uniform(0.5, 2.0)),
        }
    if kind == "radial-gaussians":
        return {
            "center": (0.0,) * n,
            "width": float(rng.uniform(0.6, 1.5) * spread),
            "amplitude": float(rng.uniform(0.5, 2.0)),
        }
    packets = int(rng.integers(1, 4))
    directions = rng.normal(size=(packets, n))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    speeds = rng.uniform(0.0, 0.25 * cutoff, packets)
    # spectral width small enough that the mask barely touches the packets
    w_min = max(0.5 * spread, 32.0 / cutoff)
    return {
        "center": tuple(tuple(c) for c in rng.uniform(-spread, spread, (packets, n))),
        "width": tuple(rng.uniform(w_min, w_min + 0.5 * spread, packets)),
        "wave": tuple(tuple(d * v) for d, v in zip(directions, speeds)),
        "phase": tuple(rng.uniform(0, 2 * math.pi, packets)),
        "amplitude": tuple(rng.uniform(0.5, 2.0, packets)),
    }


def draw_family(kind, size, seed, grid, cutoff=None):
    """Draw ``size`` members accepted on ``grid``.

    Parameters
    ----------
    kind : str
        One of ``FAMILY_KINDS``.
    size : int
    seed : int
    grid : Grid
        Members whose ``boundary_max`` exceeds ``1e-8`` here are redrawn.
    cutoff : float, optional
        Spectral radius for ``bandlimited-random``; default ``2^(K-1)`` with
        ``K`` the finest filter-bank level the grid resolves.

    Raises
    ------
    ConfigError
        Unknown kind or negative size.
    CostGuardError
        If more than ``REJECTION_BUDGET`` draws are rejected.
    """
    if kind not in FAMILY_KINDS:
        raise ConfigError(f"unknown family kind {kind!r}; expected one of {FAMILY_KINDS}")
    if size < 0:
        raise ConfigError("family size must be nonnegative")
    if kind == "bandlimited-random" and cutoff is None:
        cutoff = 2.0 ** (max_levels(grid) - 1)
    rng = np.random.default_rng(seed)
    members, rejected = [], 0
    while len(members) < size:
        member = FamilyMember(kind, _draw(kind, rng, grid.n, grid.L, cutoff), cutoff)
        if member.sample(grid).boundary_max() > BOUNDARY_TOL:
            rejected += 1
            if rejected > REJECTION_BUDGET:
                raise CostGuardError("family rejection budget exceeded; enlarge the box")
            continue
        members.append(member)
    return members


def make_family(kind, size, seed, grid, cutoff=None):
    """Sampled members of :func:`draw_family` as a list of fields."""
    return [m.sample(grid) for m in draw_family(kind, size, seed, grid, cutoff)]
