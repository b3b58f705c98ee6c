"""Orlicz modulars, Luxemburg norms and the Hölder pairing."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ExtrapolationError, GridMismatchError, NumericError
from .field import Field, ProductField, integrate

DEFAULT_RTOL = 1e-10
MAX_ITERATIONS = 200


@dataclass(frozen=True)
class NormResult:
    """Outcome of a Luxemburg-type bisection.

    Attributes
    ----------
    value : float
        The norm. ``0`` exactly when the input vanishes.
    modular_at_value : float
        The modular of ``u / value`` (``0`` when ``value == 0``).
    iterations : int
        Bisection steps used.
    """

    value: float
    modular_at_value: float
    iterations: int

    def __float__(self):
        return self.value


def _samples_and_weights(u):
    if isinstance(u, ProductField):
        return u.samples, u.measure_weights()
    return u.samples, u.grid.cell


def _weighted_modular(A, values, weights):
    """``sum(weights * A(|values|))`` with ``inf`` for out-of-range arguments."""
    try:
        with np.errstate(over="ignore", invalid="ignore"):
            terms = A(np.abs(values))
    except ExtrapolationError:
        return math.inf
    total = float(np.sum(weights * terms))
    if math.isnan(total):
        raise NumericError("modular evaluated to NaN")
    return total


def modular(A, u):
    """The modular ``int A(|u|)``.

    ``u`` may be a :class:`Field` or a :class:`ProductField`; the latter is
    integrated against ``|t|^-n dx dt``.

    Raises
    ------
    NumericError
        If ``A(|u|)`` overflows.
    """
    values, weights = _samples_and_weights(u)
    total = _weighted_modular(A, values, weights)
    if not math.isfinite(total):
        raise NumericError("modular overflows the float range")
    return total


def luxemburg(modular_fn, scale, volume, rtol=DEFAULT_RTOL, max_iter=MAX_ITERATIONS):
    """Generic Luxemburg bisection ``inf{lam > 0 : modular_fn(lam) <= 1}``.

    Parameters
    ----------
    modular_fn : callable
        ``lam -> Phi(u / lam)``, nonincreasing in ``lam``; may return ``inf``.
    scale : float
        ``sup |u|``; the input is treated as zero when it is 0.
    volume : float
        Measure of the domain, used for the initial upper bracket.
    """
    if scale == 0:
        return NormResult(0.0, 0.0, 0)
    hi = scale * max(1.0, volume)
    lo = hi * 1e-16
    iterations = 0
    while modular_fn(hi) > 1:
        lo, hi = hi, hi * 16
        iterations += 1
        if iterations > MAX_ITERATIONS:
            raise NumericError("failed to bracket the Luxemburg norm from above")
    while modular_fn(lo) <= 1:
        hi, lo = lo, lo * 1e-16
        iterations += 1
        if iterations > MAX_ITERATIONS or lo == 0:
            raise NumericError("failed to bracket the Luxemburg norm from below")
    count = 0
    while hi - lo > rtol * hi and count < max_iter:
        mid = math.sqrt(lo * hi) if hi > 64 * lo else 0.5 * (lo + hi)
        if modular_fn(mid) > 1:
            lo = mid
        else:
            hi = mid
        count += 1
    return NormResult(hi, modular_fn(hi), count)


def weighted_luxemburg(A, values, weights, rtol=DEFAULT_RTOL):
    """Luxemburg norm of sampled ``values`` against quadrature ``weights``."""
    values = np.abs(np.asarray(values, dtype=float))
    weights = np.broadcast_to(np.asarray(weights, dtype=float), values.shape)
    support = weights > 0
    scale = float(np.max(values[support])) if np.any(support) else 0.0
    volume = float(np.sum(weights))
    return luxemburg(lambda lam: _weighted_modular(A, values / lam, weights), scale, volume, rtol)


def luxemburg_norm(A, u, rtol=DEFAULT_RTOL):
    """Luxemburg norm ``inf{lam > 0 : int A(|u|/lam) <= 1}``.

    Parameters
    ----------
    A : YoungFunction
    u : Field or ProductField
    rtol : float
        Relative width at which the bisection stops.

    Returns
    -------
    NormResult
    """
    values, weights = _samples_and_weights(u)
    return weighted_luxemburg(A, values, weights, rtol)


def holder_pairing(A, u, w):
    """The pairing ``int |u w|``; ``A`` names the space of ``u``."""
    del A
    if u.grid != w.grid:
        raise GridMismatchError(f"{u.grid} vs {w.grid}")
    return integrate(Field(u.grid, np.abs(u.samples * w.samples)))


def l1_norm(u):
    """``int |u|``."""
    return integrate(abs(u))
