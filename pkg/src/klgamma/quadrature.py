"""One-dimensional quadrature.

Double-exponential rules do the heavy lifting: exp-sinh on ``(0, inf)`` and
tanh-sinh on finite intervals.  Both refine by halving the step and reusing
every previously computed node, and both estimate the error from the change
between consecutive levels.  Composite Gauss-Legendre panels cover smooth
oscillatory integrands where node placement has to follow the oscillation.

All integrands are called with a 1-D ``numpy`` array of abscissae and must
return an array of the same shape (real or complex).
"""

from dataclasses import dataclass
from functools import lru_cache
import math

import numpy as np

from .errors import DomainError, EvaluationError

__all__ = [
    "QuadratureSpec",
    "IntegrationResult",
    "integrate_semi_infinite",
    "integrate_interval",
    "integrate_even_real_line",
    "integrate_panels",
    "gauss_legendre",
    "tanh_sinh_batch",
]

HALF_PI = 0.5 * math.pi


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerance contract shared by all integrators."""

    abs_tol: float = 1e-14
    rel_tol: float = 1e-12
    max_level: int = 8
    max_evals: int = 60000

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise DomainError("abs_tol must be positive")
        if not self.rel_tol > 0:
            raise DomainError("rel_tol must be positive")
        if self.max_level < 1:
            raise DomainError("max_level must be >= 1")
        if self.max_evals < 16:
            raise DomainError("max_evals must be >= 16")

    def target(self, value):
        return max(self.abs_tol, self.rel_tol * abs(value))


@dataclass(frozen=True)
class IntegrationResult:
    value: complex
    error_estimate: float
    evaluations: int
    converged: bool

    def __float__(self):
        return float(np.real(self.value))

    def __complex__(self):
        return complex(self.value)


DEFAULT_SPEC = QuadratureSpec()


def _call(f, x):
    y = np.asarray(f(x))
    if y.shape != x.shape:
        y = np.broadcast_to(y, x.shape)
    if not np.all(np.isfinite(y)):
        bad = x[~np.isfinite(y)]
        raise EvaluationError(f"integrand is not finite at x = {bad[:3]!r}")
    return y


def _finish(total, err, evals, spec, tail=0.0):
    value = total.item() if isinstance(total, np.generic) else total
    if isinstance(value, complex) and value.imag == 0.0:
        value = complex(value)
    err = float(err) + float(tail)
    converged = err <= spec.target(value)
    return IntegrationResult(value, err, evals, converged)


def _level_nodes(t_lo, t_hi, h0, level):
    """Abscissae first appearing at ``level`` of a grid ``j*h0/2**level``."""
    if level == 0:
        j = np.arange(math.ceil(t_lo / h0), math.floor(t_hi / h0) + 1)
        return j * h0
    h = h0 / 2**level
    j = np.arange(math.ceil((t_lo / h - 1) / 2), math.floor((t_hi / h - 1) / 2) + 1)
    return (2 * j + 1) * h


def _refine(weighted, t_lo, t_hi, h0, spec, trim=None, reserve=0):
    """Level loop shared by the double-exponential rules.

    ``weighted(t)`` returns ``w(t) * f(x(t))`` at the transformed abscissae.
    ``trim``, if given, may shrink ``(t_lo, t_hi)`` after level 0 based on the
    magnitude of the level-0 terms; it returns the new bounds.  ``reserve``
    evaluations of the budget are kept for the caller.
    """
    budget = spec.max_evals - reserve
    t = _level_nodes(t_lo, t_hi, h0, 0)
    # a tiny budget coarsens the base step rather than overrunning
    while t.size > budget and t.size > 1:
        h0 *= 2.0
        t = _level_nodes(t_lo, t_hi, h0, 0)
    terms = weighted(t)
    evals = t.size
    if trim is not None:
        t_lo, t_hi = trim(t, terms)
        keep = (t >= t_lo) & (t <= t_hi)
        terms = terms[keep]
    raw = terms.sum()
    total = h0 * raw
    err = math.inf
    for level in range(1, spec.max_level + 1):
        t = _level_nodes(t_lo, t_hi, h0, level)
        if evals + t.size > budget:
            break
        terms = weighted(t)
        evals += t.size
        raw = raw + terms.sum()
        new = raw * (h0 / 2**level)
        err = abs(new - total)
        total = new
        if err <= spec.target(total) and level >= 2:
            break
    return total, err, evals


def _magnitude_trim(t, terms, t_lo, t_hi, h0, floor=1e-20):
    mag = np.abs(terms)
    peak = mag.max() if mag.size else 0.0
    if peak == 0.0:
        return t_lo, t_hi
    big = np.nonzero(mag > floor * peak)[0]
    lo = max(t_lo, t[big[0]] - h0)
    hi = min(t_hi, t[big[-1]] + h0)
    return lo, hi


def integrate_semi_infinite(f, singularity_exponent=0.0, spec=DEFAULT_SPEC, t_max=4.5):
    """Integrate ``f`` over ``(0, inf)`` with the exp-sinh rule.

    ``x = exp(pi/2 sinh t)`` sends both ends of the real ``t`` line to the ends
    of ``(0, inf)`` double exponentially, so an endpoint behaviour
    ``|f(x)| ~ x**sigma`` (``sigma > -1``) and algebraic or exponential decay
    at infinity are both absorbed.  ``singularity_exponent`` sets the
    smallest abscissa used; the neglected piece ``int_0^x_min`` is bounded
    from the leftmost sample and added to the error estimate.

    Parameters
    ----------
    f : callable
        Vectorised integrand.
    singularity_exponent : float
        ``sigma`` in ``|f(x)| <~ x**sigma`` as ``x -> 0+``; must exceed -1.
    spec : QuadratureSpec
    t_max : float
        Upper limit of the transformed variable (``x`` up to ~1e30).

    Returns
    -------
    IntegrationResult
        ``converged`` is False when the evaluation budget or level cap is
        exhausted before the tolerance is met.
    """
    sigma = float(singularity_exponent)
    if not sigma > -1.0:
        raise DomainError("singularity_exponent must exceed -1")
    # x_min**(sigma+1) ~ 1e-17, kept inside the normal double range
    log_xmin = max(-39.0 / (sigma + 1.0), -690.0)
    log_xmin = min(log_xmin, -18.0)
    t_lo = math.asinh(log_xmin / HALF_PI)
    h0 = 0.5

    def weighted(t):
        s = HALF_PI * np.sinh(t)
        x = np.exp(s)
        return _call(f, x) * (HALF_PI * np.cosh(t) * x)

    def trim(t, terms):
        return _magnitude_trim(t, terms, t_lo, t_max, h0)

    total, err, evals = _refine(weighted, t_lo, t_max, h0, spec, trim, reserve=1)

    # bound for the piece on (0, x_min); the refined levels reach down to t_lo
    x0 = math.exp(log_xmin)
    f0 = abs(complex(_call(f, np.array([x0]))[0]))
    tail = f0 * x0 / (sigma + 1.0)
    return _finish(total, err, evals + 1, spec, tail)


def _fit_base_step(h0, t_max, panels, budget):
    """Coarsen the level-0 step until one sweep fits in ``budget``."""
    while _ts_unit(0, h0, t_max)[0].size * panels > budget and h0 < t_max:
        h0 *= 2.0
    return h0


@lru_cache(maxsize=None)
def _ts_unit(level, h0, t_max):
    """tanh-sinh nodes for ``(0, 1)`` first appearing at ``level``.

    Returns ``(s, c, w)``: the abscissa, its complement ``1 - s`` (kept
    separately so endpoint distances are exact), and the weight.
    """
    t = _level_nodes(-t_max, t_max, h0, level)
    u = HALF_PI * np.sinh(t)
    s = 1.0 / (1.0 + np.exp(-2.0 * u))
    c = 1.0 / (1.0 + np.exp(2.0 * u))
    w = HALF_PI * np.cosh(t) / (2.0 * np.cosh(u) ** 2)
    for arr in (s, c, w):
        arr.setflags(write=False)
    return s, c, w


def integrate_interval(f, a, b, spec=DEFAULT_SPEC, t_max=4.0):
    """tanh-sinh quadrature of ``f`` on the finite interval ``[a, b]``.

    Nodes cluster double exponentially at both ends, so integrable algebraic
    endpoint singularities need no special treatment.
    """
    a = float(a)
    b = float(b)
    if not b > a:
        raise DomainError("integrate_interval needs b > a")
    width = b - a
    h0 = _fit_base_step(0.5, t_max, 1, spec.max_evals)

    total = 0.0
    raw = 0.0
    evals = 0
    err = math.inf
    for level in range(0, spec.max_level + 1):
        s, c, w = _ts_unit(level, h0, t_max)
        if level and evals + s.size > spec.max_evals:
            break
        x = np.where(s <= 0.5, a + width * s, b - width * c)
        raw = raw + (_call(f, x) * w).sum()
        evals += s.size
        new = raw * width * h0 / 2**level
        if level:
            err = abs(new - total)
        total = new
        if level >= 2 and err <= spec.target(total):
            break
    return _finish(total, err, evals, spec)


def integrate_even_real_line(f, truncation_radius, spec=DEFAULT_SPEC, decay_rate=HALF_PI):
    """Integral of an even function over the real line.

    Returns ``2 * int_0^S f``, computed with tanh-sinh on dyadic panels
    ``[0, 1/2], [1/2, 1], [1, 2], ...`` so that features near the origin are
    resolved independently of ``S``.  The caller asserts
    ``|f(s)| <= C exp(-decay_rate |s|)`` beyond ``S``; the resulting tail bound
    is folded into ``error_estimate``.
    """
    S = float(truncation_radius)
    if not S > 0:
        raise DomainError("truncation radius must be positive")
    edges = [0.0]
    e = 0.5
    while e < S:
        edges.append(e)
        e *= 2.0
    edges.append(S)
    lo = np.array(edges[:-1])
    width = np.diff(np.array(edges))
    t_max = 3.2
    n_edge = 3
    h0 = _fit_base_step(0.5, t_max, lo.size, spec.max_evals - n_edge)

    total = 0.0
    raw = 0.0
    evals = 0
    err = math.inf
    for level in range(0, spec.max_level + 1):
        s, c, w = _ts_unit(level, h0, t_max)
        if level and evals + s.size * lo.size > spec.max_evals:
            break
        x = (lo[:, None] + width[:, None] * s[None, :]).ravel()
        vals = _call(f, x).reshape(lo.size, s.size)
        raw = raw + (vals * (w[None, :] * width[:, None])).sum()
        evals += x.size
        new = 2.0 * raw * h0 / 2**level
        if level:
            err = abs(new - total)
        total = new
        if level >= 2 and err <= spec.target(total):
            break
    # tail beyond S, both sides
    edge = np.linspace(S - min(1.0, S / 2), S, n_edge)
    fS = float(np.max(np.abs(_call(f, edge))))
    tail = 2.0 * fS / decay_rate
    return _finish(total, err, evals + edge.size, spec, tail)


@lru_cache(maxsize=None)
def gauss_legendre(order):
    """Gauss-Legendre nodes and weights mapped to ``[0, 1]`` (cached, read-only)."""
    x, w = np.polynomial.legendre.leggauss(order)
    x = 0.5 * (x + 1.0)
    w = 0.5 * w
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def integrate_panels(f, edges, spec=DEFAULT_SPEC, order=20):
    """Composite Gauss-Legendre over consecutive ``edges``.

    The panel set is bisected once to obtain the error estimate (and the
    refined value is returned).  Meant for smooth integrands whose oscillation
    scale is known in advance, so ``edges`` can be chosen to resolve it.
    """
    edges = np.asarray(edges, dtype=float)
    if edges.ndim != 1 or edges.size < 2 or np.any(np.diff(edges) <= 0):
        raise DomainError("edges must be strictly increasing")
    xg, wg = gauss_legendre(order)

    def rule(e):
        lo = e[:-1, None]
        h = np.diff(e)[:, None]
        x = (lo + h * xg[None, :]).ravel()
        return (_call(f, x).reshape(h.shape[0], order) * (h * wg[None, :])).sum(), x.size

    coarse, n1 = rule(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    fine_edges = np.empty(2 * edges.size - 1)
    fine_edges[0::2] = edges
    fine_edges[1::2] = mid
    fine, n2 = rule(fine_edges)
    return _finish(fine, abs(fine - coarse), n1 + n2, spec)


def tanh_sinh_batch(g, lo, hi, rtol=1e-14, max_level=10, t_max=3.5, min_level=3):
    """Many tanh-sinh integrals at once, one per row.

    ``g(t)`` receives a 2-D array of abscissae of shape ``(m, k)`` (row ``i``
    inside ``[lo[i], hi[i]]``) and returns values of the same shape.  Levels
    are added until every row changes by less than ``rtol`` times its
    absolute-value integral.

    Returns
    -------
    values : ndarray, shape (m,)
    errors : ndarray, shape (m,)
        Change between the last two levels.
    """
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    width = hi - lo
    h0 = 0.5
    raw = 0.0
    l1 = 0.0
    total = None
    err = np.full(lo.shape, np.inf)
    for level in range(0, max_level + 1):
        s, c, w = _ts_unit(level, h0, t_max)
        t = np.where(s[None, :] <= 0.5,
                     lo[:, None] + width[:, None] * s[None, :],
                     hi[:, None] - width[:, None] * c[None, :])
        vals = g(t)
        ww = w[None, :] * width[:, None]
        raw = raw + (vals * ww).sum(axis=1)
        l1 = l1 + (np.abs(vals) * ww).sum(axis=1)
        new = raw * (h0 / 2**level)
        if total is not None:
            err = np.abs(new - total)
        total = new
        scale = l1 * (h0 / 2**level)
        if level >= min_level and np.all(err <= rtol * scale + 1e-300):
            break
    return total, err
