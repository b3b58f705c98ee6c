"""Young functions: evaluation, density, inverse, conjugate and growth indices.

A Young function is stored on the half-line ``t >= 0``; callers pass ``|t|``.
Analytic kinds are evaluated in closed form. The ``tabulated`` kind
interpolates a log-spaced table with a monotone (or Hermite) cubic in
log-log coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np
from scipy.interpolate import CubicHermiteSpline, PchipInterpolator

from .errors import (
    ConjugateRangeError,
    DomainError,
    ExtrapolationError,
    NumericError,
)

KINDS = ("power", "power-sum", "zygmund", "iterated-log", "power-log-integral", "tabulated")

# CLI prefix -> (kind, parameter names in canonical order)
_SPEC_NAMES = {
    "power": ("power", ("p",)),
    "powersum": ("power-sum", ("p", "q")),
    "zygmund": ("zygmund", ("p", "q", "r")),
    "iterlog": ("iterated-log", ("p", "a", "b")),
    "plogint": ("power-log-integral", ("p", "a")),
}
_KIND_PREFIX = {kind: prefix for prefix, (kind, _) in _SPEC_NAMES.items()}

SCAN_RANGE = (1e-8, 1e8)
SCAN_POINTS = 10_000
CONJUGATE_SIZE = 4096


def _as_array(t):
    arr = np.asarray(t, dtype=float)
    if np.any(np.isnan(arr)) or np.any(arr < 0):
        raise DomainError("Young functions are evaluated on t >= 0")
    return arr


def _restore(arr, like):
    return float(arr) if np.ndim(like) == 0 else arr


class _PowerLogIntegral:
    """Cumulative Gauss-Legendre table for A(t) = int_0^t s^(p-1) log^a(1+s) ds.

    Integration runs in x = log s, where the integrand is s^p log^a(1+s).
    """

    X_MIN, X_MAX, CELLS, ORDER = math.log(1e-15), math.log(1e40), 4000, 16

    def __init__(self, p, a):
        self.p, self.a = p, a
        self.nodes, self.weights = np.polynomial.legendre.leggauss(self.ORDER)
        self.x = np.linspace(self.X_MIN, self.X_MAX, self.CELLS + 1)
        pieces = self._gl(self.x[:-1], self.x[1:])
        head = math.exp((p + a) * self.X_MIN) / (p + a)
        self.cumulative = np.concatenate([[head], head + np.cumsum(pieces)])

    def _integrand(self, x):
        s = np.exp(x)
        return s**self.p * np.log1p(s) ** self.a

    def _gl(self, x0, x1):
        half = 0.5 * (x1 - x0)
        mid = 0.5 * (x1 + x0)
        pts = mid[..., None] + half[..., None] * self.nodes
        return half * (self._integrand(pts) @ self.weights)

    def __call__(self, t):
        out = np.zeros_like(t)
        pos = t > 0
        x = np.log(t[pos])
        if np.any(x > self.X_MAX):
            raise NumericError("power-log-integral evaluated beyond t = 1e40")
        low = x < self.X_MIN
        vals = np.empty_like(x)
        # Below the table the integrand is s^(p+a) to relative O(s).
        vals[low] = np.exp((self.p + self.a) * x[low]) / (self.p + self.a)
        hi = ~low
        j = np.clip(np.searchsorted(self.x, x[hi], side="right") - 1, 0, self.CELLS - 1)
        vals[hi] = self.cumulative[j] + self._gl(self.x[j], x[hi])
        out[pos] = vals
        return out


@dataclass(frozen=True, eq=False)
class YoungFunction:
    """A Young function ``A`` on ``[0, inf)``.

    Parameters
    ----------
    kind : str
        One of ``KINDS``.
    params : mapping
        Family parameters, e.g. ``{"p": 2.0}`` for the power kind.
    table : tuple of ndarray, optional
        ``(t, A(t))`` or ``(t, A(t), a(t))`` for the tabulated kind.

    Notes
    -----
    Instances are immutable. Use the constructors (:meth:`power`,
    :meth:`zygmund`, ...) or :func:`parse_young`.
    """

    kind: str
    params: Mapping[str, float] = field(default_factory=dict)
    table: tuple | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown Young kind {self.kind!r}")
        object.__setattr__(self, "params", {k: float(v) for k, v in self.params.items()})
        getattr(self, "_validate_" + self.kind.replace("-", "_"))()

    # -- construction -------------------------------------------------

    @classmethod
    def power(cls, p):
        return cls("power", {"p": p})

    @classmethod
    def power_sum(cls, p, q):
        return cls("power-sum", {"p": p, "q": q})

    @classmethod
    def zygmund(cls, p, q, r):
        return cls("zygmund", {"p": p, "q": q, "r": r})

    @classmethod
    def iterated_log(cls, p, a, b):
        return cls("iterated-log", {"p": p, "a": a, "b": b})

    @classmethod
    def power_log_integral(cls, p, a):
        return cls("power-log-integral", {"p": p, "a": a})

    @classmethod
    def tabulated(cls, t, values, slopes=None):
        """Build a tabulated Young function from samples on ``t > 0``.

        ``slopes`` (the density at ``t``) selects Hermite interpolation;
        without it a monotone PCHIP in log-log coordinates is used.
        """
        t = np.array(t, dtype=float)
        values = np.array(values, dtype=float)
        table = (t, values) if slopes is None else (t, values, np.array(slopes, dtype=float))
        return cls("tabulated", {}, table)

    def _validate_power(self):
        if not self.params["p"] > 1:
            raise DomainError("power kind needs p > 1")

    def _validate_power_sum(self):
        p, q = self.params["p"], self.params["q"]
        if not 1 < p <= q:
            raise DomainError("power-sum kind needs 1 < p <= q")

    def _validate_zygmund(self):
        p, q, r = (self.params[k] for k in "pqr")
        if not (p > 1 and q >= 0 and r > 0):
            raise DomainError("zygmund kind needs p > 1, q >= 0, r > 0")

    def _validate_iterated_log(self):
        p, a, b = (self.params[k] for k in "pab")
        if not (p > 1 and p + a + b > 1):
            raise DomainError("iterated-log kind needs p > 1 and both end exponents > 1")

    def _validate_power_log_integral(self):
        p, a = self.params["p"], self.params["a"]
        if not (p > 1 and p + a > 1):
            raise DomainError("power-log-integral kind needs p > 1 and p + a > 1")
        object.__setattr__(self, "_pli", _PowerLogIntegral(p, a))

    def _validate_tabulated(self):
        if self.table is None or len(self.table) not in (2, 3):
            raise DomainError("tabulated kind needs (t, A) or (t, A, a)")
        t, v = self.table[0], self.table[1]
        if t.ndim != 1 or t.shape != v.shape or t.size < 4:
            raise DomainError("table arrays must be 1-D, equal length, >= 4 points")
        if np.any(t <= 0) or np.any(np.diff(t) <= 0):
            raise DomainError("table abscissae must be positive and increasing")
        if np.any(v <= 0) or np.any(np.diff(v) <= 0) or not np.all(np.isfinite(v)):
            raise DomainError("table values must be positive, finite, increasing")
        slopes = np.diff(v) / np.diff(t)
        if np.any(np.diff(slopes) < -1e-9 * np.abs(slopes[1:])):
            raise DomainError("table is not convex")
        if not v[0] / t[0] < v[-1] / t[-1]:
            raise DomainError("table is not superlinear")
        X, Y = np.log(t), np.log(v)
        if len(self.table) == 3:
            k = self.table[2] * t / v
            spline = CubicHermiteSpline(X, Y, k)
        else:
            spline = PchipInterpolator(X, Y)
        object.__setattr__(self, "_spline", spline)
        object.__setattr__(self, "_dspline", spline.derivative())
        k0 = float(self._dspline(X[0]))
        object.__setattr__(self, "_low_exponent", k0)

    # -- identity -----------------------------------------------------

    @property
    def name(self):
        """Canonical string form, e.g. ``"zygmund:p=2,q=1,r=1"``."""
        if self.kind == "tabulated":
            return f"tabulated:size={self.table[0].size}"
        prefix = _KIND_PREFIX[self.kind]
        return prefix + ":" + ",".join(f"{k}={v:g}" for k, v in self.params.items())

    def __repr__(self):
        return f"YoungFunction({self.name})"

    @property
    def t_max(self):
        """Largest admissible argument (``inf`` for analytic kinds)."""
        if self.kind == "tabulated":
            return float(self.table[0][-1])
        if self.kind == "power-log-integral":
            return math.exp(_PowerLogIntegral.X_MAX)
        return math.inf

    # -- evaluation ---------------------------------------------------

    def __call__(self, t):
        """Evaluate ``A(t)``; vectorized over ``t``."""
        arr = _as_array(t)
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            out = getattr(self, "_eval_" + self.kind.replace("-", "_"))(arr)
        return _restore(out, t)

    def density(self, t):
        """Evaluate the density ``a(t) = A'(t)``; vectorized over ``t``."""
        arr = _as_array(t)
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            out = getattr(self, "_density_" + self.kind.replace("-", "_"))(arr)
        return _restore(out, t)

    def _eval_power(self, t):
        return t ** self.params["p"]

    def _density_power(self, t):
        p = self.params["p"]
        return p * t ** (p - 1)

    def _eval_power_sum(self, t):
        return t ** self.params["p"] + t ** self.params["q"]

    def _density_power_sum(self, t):
        p, q = self.params["p"], self.params["q"]
        return p * t ** (p - 1) + q * t ** (q - 1)

    def _eval_zygmund(self, t):
        p, q, r = (self.params[k] for k in "pqr")
        return np.where(t > 0, t**p * np.log1p(t**r) ** q, 0.0)

    def _density_zygmund(self, t):
        p, q, r = (self.params[k] for k in "pqr")
        tr = t**r
        log = np.log1p(tr)
        # ratio r t^r / ((1+t^r) log(1+t^r)) -> r as t -> 0
        safe = np.where(log > 0, log, 1.0)
        ratio = np.where(log > 0, r * tr / ((1 + tr) * safe), r)
        out = t ** (p - 1) * log**q * (p + q * ratio)
        return np.where(t > 0, out, 0.0)

    def _eval_iterated_log(self, t):
        p, a, b = (self.params[k] for k in "pab")
        l1 = np.log1p(t)
        l2 = np.log1p(l1)
        return np.where(t > 0, t**p * l1**a * l2**b, 0.0)

    def _density_iterated_log(self, t):
        p, a, b = (self.params[k] for k in "pab")
        l1 = np.log1p(t)
        l2 = np.log1p(l1)
        s1 = np.where(l1 > 0, l1, 1.0)
        s2 = np.where(l2 > 0, l2, 1.0)
        # t a(t)/A(t) = p + a t/((1+t) l1) + b t/((1+t)(1+l1) l2)
        g1 = np.where(l1 > 0, t / ((1 + t) * s1), 1.0)
        g2 = np.where(l2 > 0, t / ((1 + t) * (1 + l1) * s2), 1.0)
        out = t ** (p - 1) * l1**a * l2**b * (p + a * g1 + b * g2)
        return np.where(t > 0, out, 0.0)

    def _eval_power_log_integral(self, t):
        return self._pli(t)

    def _density_power_log_integral(self, t):
        p, a = self.params["p"], self.params["a"]
        return np.where(t > 0, t ** (p - 1) * np.log1p(t) ** a, 0.0)

    def _table_split(self, t):
        t0, tN = self.table[0][0], self.table[0][-1]
        if np.any(t > tN * (1 + 1e-12)):
            bad = float(np.max(t))
            raise ExtrapolationError(f"t={bad:g} above tabulated range (max {tN:g})")
        return t0, t > 0, t < t0

    def _eval_tabulated(self, t):
        t0, pos, low = self._table_split(t)
        out = np.zeros_like(t)
        inside = pos & ~low
        out[inside] = np.exp(self._spline(np.log(np.minimum(t[inside], self.table[0][-1]))))
        sel = pos & low
        out[sel] = self.table[1][0] * (t[sel] / t0) ** self._low_exponent
        return out

    def _density_tabulated(self, t):
        vals = self._eval_tabulated(t)
        t0, pos, low = self._table_split(t)
        out = np.zeros_like(t)
        inside = pos & ~low
        X = np.log(np.minimum(t[inside], self.table[0][-1]))
        out[inside] = vals[inside] * self._dspline(X) / t[inside]
        sel = pos & low
        out[sel] = self._low_exponent * vals[sel] / t[sel]
        return out

    # -- inverse ------------------------------------------------------

    def inverse(self, y):
        """Return ``t`` with ``A(t) = y`` by log-space bisection.

        The result satisfies ``|A(t) - y| <= 1e-12 * max(1, y)``.
        """
        arr = np.asarray(y, dtype=float)
        if np.any(np.isnan(arr)) or np.any(arr < 0):
            raise DomainError("inverse needs y >= 0")
        flat = arr.ravel()
        out = np.zeros_like(flat)
        pos = flat > 0
        if np.any(pos):
            out[pos] = _monotone_solve(self, flat[pos], self.t_max)
        out = out.reshape(arr.shape)
        return _restore(out, y)


def _monotone_solve(fn, target, upper=math.inf, derivative=False):
    """Solve ``fn(t) = target`` (or ``fn.density(t) = target``) for increasing fn."""
    g = fn.density if derivative else fn
    lo = np.full(target.shape, -745.0)
    hi = np.full(target.shape, 709.0 if not math.isfinite(upper) else math.log(upper))
    with np.errstate(over="ignore", invalid="ignore"):
        top = g(np.exp(hi))
    if np.any(top < target):
        bad = target[top < target][0]
        raise ExtrapolationError(f"value {bad:g} not reached inside the admissible range")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        with np.errstate(over="ignore", invalid="ignore"):
            below = g(np.exp(mid)) < target
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
        if np.all(hi - lo <= 4e-16 * np.maximum(1.0, np.abs(hi))):
            break
    return np.exp(0.5 * (lo + hi))


@dataclass(frozen=True)
class GrowthIndices:
    """Lower and upper growth indices of a Young function.

    ``p_plus`` may be ``math.inf``. ``delta2`` flags the Delta-2 condition for
    ``A`` (finite ``p_plus``); ``conjugate_delta2`` flags it for the conjugate
    (``p_minus > 1``).
    """

    p_minus: float
    p_plus: float
    delta2: bool
    conjugate_delta2: bool

    def __post_init__(self):
        if not self.p_minus <= self.p_plus:
            raise NumericError("p_minus exceeds p_plus")


def _endpoint_indices(A):
    """Limits of t a(t)/A(t) at 0 and infinity for analytic kinds."""
    P = A.params
    if A.kind == "power":
        return P["p"], P["p"]
    if A.kind == "power-sum":
        return P["p"], P["q"]
    if A.kind == "zygmund":
        return P["p"] + P["q"] * P["r"], P["p"]
    if A.kind == "iterated-log":
        return P["p"] + P["a"] + P["b"], P["p"]
    if A.kind == "power-log-integral":
        return P["p"] + P["a"], P["p"]
    return None


def index_ratio(A, t):
    """The growth ratio ``t a(t) / A(t)``."""
    t = np.asarray(t, dtype=float)
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        return t * A.density(t) / A(t)


def delta2_indices(A, scan_range=SCAN_RANGE, points=SCAN_POINTS):
    """Growth indices ``(p_minus, p_plus)`` of ``A``.

    The ratio ``t a(t)/A(t)`` is scanned on ``points`` log-spaced abscissae in
    ``scan_range`` (clipped to the table for tabulated kinds). For analytic
    kinds the exact limits at ``0`` and ``inf`` are folded into the
    inf/sup, since on a finite scan grid slowly varying logarithmic factors
    have not yet reached their limits.

    Raises
    ------
    NumericError
        If the ratio is non-finite at a scan point.
    """
    lo, hi = scan_range
    if A.kind == "tabulated":
        hi = min(hi, A.t_max)
    t = np.geomspace(lo, hi, points)
    ratio = index_ratio(A, t)
    if not np.all(np.isfinite(ratio)):
        bad = t[~np.isfinite(ratio)][0]
        raise NumericError(f"non-finite index ratio at t={bad:g}")
    ends = _endpoint_indices(A)
    p_minus, p_plus = float(np.min(ratio)), float(np.max(ratio))
    if ends is not None:
        p_minus = min(p_minus, *ends)
        p_plus = max(p_plus, *ends)
    return GrowthIndices(p_minus, p_plus, math.isfinite(p_plus), p_minus > 1)


def conjugate(A, size=CONJUGATE_SIZE, t_range=(1e-8, 1e8), w_points=8192):
    """Numeric Legendre conjugate ``Ahat(t) = sup_w (t w - A(w))``.

    The conjugate is tabulated on ``size`` log-spaced abscissae. For each
    ``t`` the discrete transform over a log grid of ``w`` locates the
    maximizer to within one grid cell; it is then refined by bisection on
    ``a(w) = t``. The maximizer is stored as the table slope, since
    ``Ahat'(t) = w(t)``.

    Raises
    ------
    ConjugateRangeError
        If ``a(w) = t`` has no solution for some ``t`` (the supremum is not
        attained in the admissible range of ``w``).
    """
    lo, hi = t_range
    if A.kind == "tabulated":
        a_top = float(A.density(A.t_max))
        hi = min(hi, a_top * (1 - 1e-9))
    t = np.geomspace(lo, hi, size)
    try:
        w_ends = _monotone_solve(A, np.array([lo, hi]), A.t_max, derivative=True)
    except ExtrapolationError as exc:
        raise ConjugateRangeError(hi) from exc
    w_grid = np.geomspace(w_ends[0] / 2, min(w_ends[1] * 2, A.t_max), w_points)
    A_grid = A(w_grid)
    slopes = np.diff(A_grid) / np.diff(w_grid)
    j = np.clip(np.searchsorted(slopes, t), 0, w_points - 1)
    discrete = t * w_grid[j] - A_grid[j]

    # refine inside the cells adjacent to the discrete maximizer
    w_lo = w_grid[np.maximum(j - 1, 0)]
    w_hi = w_grid[np.minimum(j + 1, w_points - 1)]
    L, H = np.log(w_lo), np.log(w_hi)
    for _ in range(64):
        M = 0.5 * (L + H)
        below = A.density(np.exp(M)) < t
        L = np.where(below, M, L)
        H = np.where(below, H, M)
    w = np.exp(0.5 * (L + H))
    values = t * w - A(w)
    worse = values < discrete
    values = np.where(worse, discrete, values)
    w = np.where(worse, w_grid[j], w)
    if not np.all(np.isfinite(values)) or np.any(values <= 0):
        bad = t[~(np.isfinite(values) & (values > 0))][0]
        raise ConjugateRangeError(bad)
    return YoungFunction.tabulated(t, values, w)


def parse_young(spec):
    """Parse a Young-function string such as ``"zygmund:p=2,q=1,r=1"``."""
    if isinstance(spec, YoungFunction):
        return spec
    text = spec.strip()
    prefix, _, body = text.partition(":")
    if prefix not in _SPEC_NAMES:
        raise DomainError(f"unknown Young function {prefix!r}; choose from {sorted(_SPEC_NAMES)}")
    kind, names = _SPEC_NAMES[prefix]
    params = {}
    for item in filter(None, (s.strip() for s in body.split(","))):
        key, eq, value = item.partition("=")
        if not eq or key not in names:
            raise DomainError(f"bad parameter {item!r} for {prefix}")
        try:
            params[key] = float(value)
        except ValueError as exc:
            raise DomainError(f"bad value in {item!r}") from exc
    missing = [k for k in names if k not in params]
    if missing:
        raise DomainError(f"{prefix} is missing parameters {missing}")
    return YoungFunction(kind, {k: params[k] for k in names})


# -- checks used by tests and the young-axioms suite -----------------------


def young_inequality_violation(A, Ahat, t1, t2):
    """Largest value of ``t1 t2 - A(t1) - Ahat(t2)`` over the product grid."""
    t1 = np.asarray(t1, dtype=float)
    t2 = np.asarray(t2, dtype=float)
    gap = np.multiply.outer(t1, t2) - A(t1)[:, None] - Ahat(t2)[None, :]
    return float(np.max(gap))


def inverse_product_bracket(A, Ahat, t):
    """Return ``A^{-1}(t) Ahat^{-1}(t) / t``; it should lie in ``[1, 2]``."""
    t = np.asarray(t, dtype=float)
    return A.inverse(t) * Ahat.inverse(t) / t


def power_envelope_violation(A, indices=None, t=None):
    """Largest relative violation of ``min(t^p-, t^p+) <= A(t)/A(1) <= max(...)``."""
    if indices is None:
        indices = delta2_indices(A)
    if t is None:
        t = np.geomspace(*SCAN_RANGE, SCAN_POINTS)
    vals = A(t) / A(1.0)
    lo = np.minimum(t**indices.p_minus, t**indices.p_plus)
    hi = np.maximum(t**indices.p_minus, t**indices.p_plus)
    below = (lo - vals) / lo
    above = (vals - hi) / hi
    return float(max(np.max(below), np.max(above), 0.0))
