"""Solvers for the initial value problem

    dU/dt = (y^2 d^2/dy^2 + y d/dy - y^2 - p^2) U,    U(0, y) = y^p,    y, t > 0.

Three independent routes:

* ``spectral_single``: one integral over the Kontorovich-Lebedev spectrum,
  ``U = 2^p/(2 pi^2) int_0^inf u sinh(pi u) exp(-(p^2+u^2) t)
  |Gamma(p/2 + iu/2)|^2 K_{iu}(y) du``, valid for ``p > 0``.  For
  ``-2n-2 < p < 0`` the same integral minus discrete terms
  ``c_k exp(((p+2k)^2 - p^2) t) K_{-p-2k}(y)``, ``k = 0..n``.
* ``spectral_double``: the same spectrum with the Mellin transform
  ``int_0^inf x^{p-1} K_{iu}(x) dx`` computed numerically instead of in
  closed form (``p > 0`` only).
* ``finite_difference``: Crank-Nicolson in ``v = log y``, where the operator
  becomes ``d^2/dv^2 - e^{2v} - p^2``.
"""

from dataclasses import dataclass, field
from functools import lru_cache
import math

import numpy as np
from scipy.linalg import solve_banded

from .bessel import bessel_k, kiv_array
from .errors import DomainError, GridError, PoleError, StripMismatchError
from .gamma import loggamma_array, rgamma
from .quadrature import gauss_legendre

__all__ = [
    "METHODS",
    "FPQuery",
    "FPResult",
    "correction_coefficients",
    "solve_spectral_positive",
    "solve_spectral_double",
    "solve_spectral_negative",
    "solve_finite_difference",
    "default_grid",
    "apply_operator",
    "solve",
]

METHODS = ("spectral_single", "spectral_double", "finite_difference")
SPECTRAL_TOL = 1e-12
_GL_ORDER = 20


def _strip(p):
    # n with p in (-2n-2, -2n)
    return int(math.floor(-p / 2.0))


@dataclass(frozen=True)
class FPQuery:
    """One point ``U_p(t, y)`` to be solved for.

    ``n`` is the number of discrete terms minus one for ``p < 0``; it is
    inferred from ``p`` when omitted and must satisfy ``-2n-2 < p < -2n``.
    """

    p: float
    t: float
    y: float
    n: int = None
    method: str = "spectral_single"

    def __post_init__(self):
        for name in ("p", "t", "y"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise DomainError(f"{name} must be finite")
            object.__setattr__(self, name, v)
        if not self.t > 0:
            raise DomainError("t must be positive")
        if not self.y > 0:
            raise DomainError("y must be positive")
        if self.method not in METHODS:
            raise DomainError(f"method must be one of {METHODS}")
        if self.p <= 0 and self.p == round(self.p):
            raise PoleError(int(self.p), f"p = {self.p:g} is a non-positive integer")
        if self.p < 0:
            need = _strip(self.p)
            if self.n is None:
                object.__setattr__(self, "n", need)
            elif int(self.n) != need:
                raise StripMismatchError(self.p, int(self.n), need)
            else:
                object.__setattr__(self, "n", int(self.n))
        else:
            object.__setattr__(self, "n", 0 if self.n is None else int(self.n))
        if self.method == "spectral_double" and not self.p > 0:
            raise DomainError("spectral_double needs p > 0")


@dataclass
class FPResult:
    value: float
    correction_terms: list = field(default_factory=list)
    u_truncation: float = 0.0
    est_error: float = 0.0
    method: str = "spectral_single"
    evaluations: int = 0


def correction_coefficients(p, n):
    """``c_k = 2^{p+1} (p+2k) / (k! Gamma(1-p-k))`` for ``k = 0..n``."""
    return [2.0 ** (p + 1) * (p + 2 * k) * rgamma(1.0 - p - k).real / math.factorial(k) for k in range(n + 1)]


def u_truncation(t, tol=SPECTRAL_TOL):
    """Spectral cutoff ``sqrt(log(1/tol)/t) + 20``."""
    return math.sqrt(math.log(1.0 / tol) / t) + 20.0


def _u_edges(U, p, y):
    # narrow panels where |Gamma(p/2 + iu/2)|^2 varies (u ~ |p|), then a
    # width following the oscillation of K_{iu}(y), whose phase grows like
    # u log(2u/y)
    edges = [0.0]
    u = 0.0
    while u < U:
        w = min(0.5, 0.25 * max(u, abs(p), 0.2), math.pi / (1.0 + math.log1p(2.0 * u / y)))
        u = min(U, u + w)
        edges.append(u)
    return np.array(edges)


def _gl(f, edges, order=_GL_ORDER):
    xg, wg = gauss_legendre(order)
    lo = edges[:-1, None]
    h = np.diff(edges)[:, None]
    x = (lo + h * xg[None, :]).ravel()
    return float((f(x).reshape(h.shape[0], order) * (h * wg[None, :])).sum()), x.size


def _gl_pair(f, edges, order=_GL_ORDER):
    """Composite rule on ``edges`` and on the bisected panels."""
    coarse, n1 = _gl(f, edges, order)
    fine_edges = np.empty(2 * edges.size - 1)
    fine_edges[0::2] = edges
    fine_edges[1::2] = 0.5 * (edges[:-1] + edges[1:])
    fine, n2 = _gl(f, fine_edges, order)
    return fine, abs(fine - coarse), n1 + n2


def _spectral_weight(u, p):
    # u sinh(pi u) |Gamma(p/2 + iu/2)|^2 with the e^{-pi u/2} that the scaled
    # K_{iu} carries put back:  u [sinh(pi u) e^{-pi u}] [|Gamma|^2 e^{pi u/2}]
    lg = loggamma_array(0.5 * p + 0.5j * u).real
    return u * (-0.5 * np.expm1(-2.0 * math.pi * u)) * np.exp(2.0 * lg + 0.5 * math.pi * u)


def _single_integral(p, t, y, tol):
    U = u_truncation(t, tol)
    edges = _u_edges(U, p, y)
    pref = 2.0 ** p / (2.0 * math.pi ** 2)

    def f(u):
        return pref * _spectral_weight(u, p) * kiv_array(u, y, scale="nu") * np.exp(-(p * p + u * u) * t)

    val, err, evals = _gl_pair(f, edges)
    return val, err, U, evals


def solve_spectral_positive(q, tol=SPECTRAL_TOL):
    """Single-integral spectral solution for ``p > 0``.

    The ``u`` integral is truncated at ``sqrt(log(1/tol)/t) + 20`` and
    evaluated with composite Gauss-Legendre panels sized to the oscillation
    of ``K_{iu}(y)``.

    Examples
    --------
    >>> r = solve_spectral_positive(FPQuery(1.0, 1e-6, 2.0))
    >>> abs(r.value - 2.0) < 1e-3
    True
    """
    if not q.p > 0:
        raise DomainError("solve_spectral_positive needs p > 0; use solve_spectral_negative")
    val, err, U, evals = _single_integral(q.p, q.t, q.y, tol)
    return FPResult(val, [], U, err, "spectral_single", evals)


def solve_spectral_negative(q, tol=SPECTRAL_TOL):
    """Spectral solution for ``-2n-2 < p < 0``.

    The continuous part is the integral of :func:`solve_spectral_positive`;
    the discrete part ``c_k exp(((p+2k)^2 - p^2) t) K_{-p-2k}(y)`` is
    subtracted for ``k = 0..n`` and each term is listed in
    ``correction_terms``.
    """
    if not q.p < 0:
        raise DomainError("solve_spectral_negative needs p < 0")
    p = q.p
    val, err, U, evals = _single_integral(p, q.t, q.y, tol)
    terms = []
    for k, c in enumerate(correction_coefficients(p, q.n)):
        nu = -p - 2 * k
        lam = (p + 2 * k) ** 2 - p * p
        terms.append(c * math.exp(lam * q.t) * bessel_k(nu, q.y).real)
    value = val - math.fsum(terms)
    err += 1e-14 * math.fsum(abs(x) for x in terms)
    return FPResult(value, terms, U, err, "spectral_single", evals + len(terms))


# -- inner Mellin transform for the double integral ------------------------

# cancellation in the ascending series grows like exp(2 x0) near u = 0
_X0 = 8.0


def _inner_small(u, p):
    """``e^{pi u/2} int_0^{x0} x^{p-1} K_{iu}(x) dx`` by termwise integration of
    ``K_{iu}(x) = Re[Gamma(-iu) (x/2)^{iu} sum_k (x/2)^{2k} / (k! (1+iu)_k)]``."""
    iu = 1j * u
    h = 0.5 * _X0
    # Gamma(-iu) e^{pi u/2} = Gamma(1-iu) e^{pi u/2} / (-iu)
    g = np.exp(loggamma_array(1.0 - iu) + 0.5 * math.pi * u) / (-iu)
    term = np.ones(u.shape, dtype=complex)
    acc = term / (p + iu)
    k = 0
    while True:
        k += 1
        term = term * (h * h) / (k * (k + iu))
        add = term / (p + 2 * k + iu)
        acc = acc + add
        if np.all(np.abs(add) <= 1e-17 * np.abs(acc)) and k > 2:
            break
    phase = np.exp(iu * math.log(h))
    return 2.0 ** p * h ** p * (g * phase * acc).real


@lru_cache(maxsize=4096)
def _inner_panel(p, a, b, order):
    """Scaled inner transform at the Gauss-Legendre nodes of ``[a, b]``."""
    xg, _ = gauss_legendre(order)
    u = a + (b - a) * xg
    small = _inner_small(u, p)
    # [x0, inf): the scaled K_{iu}(x) e^{pi u/2} decays like e^{pi u/2 - x}
    m = int(math.ceil((0.5 * math.pi * b + 35.0) / 4.0))
    edges = _X0 + 4.0 * np.arange(m + 1)
    xk, wk = gauss_legendre(14)
    lo = edges[:-1, None]
    hw = np.diff(edges)[:, None]
    x = (lo + hw * xk[None, :]).ravel()
    w = (hw * wk[None, :]).ravel()
    kv = kiv_array(u[:, None], x[None, :], scale="nu")
    big = (kv * (x ** (p - 1.0) * w)[None, :]).sum(axis=1)
    out = small + big
    out.setflags(write=False)
    return out


def _double_rule(p, t, y, edges, order):
    xg, wg = gauss_legendre(order)
    total = 0.0
    n = 0
    for a, b in zip(edges[:-1], edges[1:]):
        u = a + (b - a) * xg
        inner = _inner_panel(p, float(a), float(b), order)
        f = (2.0 / math.pi ** 2) * u * (-0.5 * np.expm1(-2.0 * math.pi * u)) \
            * kiv_array(u, y, scale="nu") * inner * np.exp(-(p * p + u * u) * t)
        total += float((f * wg).sum() * (b - a))
        n += u.size
    return total, n


def solve_spectral_double(q, tol=SPECTRAL_TOL):
    """Spectral solution with the inner Mellin transform done numerically.

    ``U = (2/pi^2) int_0^inf u sinh(pi u) K_{iu}(y) exp(-(p^2+u^2) t)
    int_0^inf x^{p-1} K_{iu}(x) dx du``.  The inner integral over ``(0, 8]``
    integrates the ascending series of ``K_{iu}`` term by term and the rest
    by Gauss-Legendre panels.  Its values depend on ``p`` only and are cached
    per panel, so sweeps over ``t`` and ``y`` reuse them.
    """
    if not q.p > 0:
        raise DomainError("solve_spectral_double needs p > 0")
    U = u_truncation(q.t, tol)
    # fixed panel layout so that the cache is shared between queries
    edges = [0.0, 0.25, 0.5, 1.0, 2.0]
    while edges[-1] < U:
        edges.append(edges[-1] + 2.0)
    edges = np.array(edges)
    fine_edges = np.empty(2 * edges.size - 1)
    fine_edges[0::2] = edges
    fine_edges[1::2] = 0.5 * (edges[:-1] + edges[1:])
    coarse, n1 = _double_rule(q.p, q.t, q.y, edges, _GL_ORDER)
    fine, n2 = _double_rule(q.p, q.t, q.y, fine_edges, _GL_ORDER)
    return FPResult(fine, [], float(edges[-1]), abs(fine - coarse), "spectral_double", n1 + n2)


# -- finite differences -----------------------------------------------------


def default_grid(y, t):
    """Grid on ``[log y - 8, log y + 4]`` with ``log y`` a node."""
    c = math.log(y)
    return {"v_min": c - 8.0, "v_max": c + 4.0, "nv": 12 * 100 + 1, "nt": max(64, int(math.ceil(400 * math.sqrt(t))))}


def apply_operator(values, v, p):
    """Discrete ``d^2/dv^2 - e^{2v} - p^2`` at the interior nodes of ``v``."""
    values = np.asarray(values, dtype=float)
    dv = v[1] - v[0]
    d2 = (values[2:] - 2.0 * values[1:-1] + values[:-2]) / (dv * dv)
    return d2 - (np.exp(2.0 * v[1:-1]) + p * p) * values[1:-1]


def _fd_run(p, t, y, v_min, v_max, nv, nt, startup=4):
    v = np.linspace(v_min, v_max, nv)
    dv = v[1] - v[0]
    u = np.exp(p * v)
    u[-1] = 0.0
    pot = np.exp(2.0 * v) + p * p
    r = 1.0 / (dv * dv)
    # operator rows; node 0 carries the Robin condition U_v = p U through a
    # ghost node U_{-1} = U_1 - 2 dv p U_0
    main = -2.0 * r - pot
    upper = np.full(nv - 1, r)
    lower = np.full(nv - 1, r)
    upper[0] = 2.0 * r
    main[0] += -2.0 * dv * p * r
    # Dirichlet at v_max
    main[-1] = 0.0
    lower[-1] = 0.0

    def apply(x):
        out = main * x
        out[:-1] += upper * x[1:]
        out[1:] += lower * x[:-1]
        return out

    def banded(theta, dt):
        ab = np.zeros((3, nv))
        ab[0, 1:] = -theta * dt * upper
        ab[1] = 1.0 - theta * dt * main
        ab[2, :-1] = -theta * dt * lower
        ab[1, -1] = 1.0
        ab[0, -1] = 0.0
        ab[2, -2] = 0.0
        return ab

    dt = t / nt
    # Rannacher start: backward Euler half steps damp the boundary mismatch
    steps = []
    k0 = min(startup, nt)
    steps += [(1.0, 0.5 * dt)] * (2 * k0)
    steps += [(0.5, dt)] * (nt - k0)
    cache = {}
    for theta, h in steps:
        key = (theta, h)
        if key not in cache:
            cache[key] = banded(theta, h)
        rhs = u + (1.0 - theta) * h * apply(u)
        rhs[-1] = 0.0
        u = solve_banded((1, 1), cache[key], rhs)
    return v, u


def _fd_value(p, t, y, grid):
    v, u = _fd_run(p, t, y, grid["v_min"], grid["v_max"], grid["nv"], grid["nt"])
    c = math.log(y)
    i = int(round((c - v[0]) / (v[1] - v[0])))
    if abs(v[i] - c) < 1e-12 * max(1.0, abs(c)):
        return float(u[i])
    # off-node query: cubic interpolation on the four nearest nodes
    j = min(max(i - 2, 0), v.size - 4)
    return float(np.polyval(np.polyfit(v[j:j + 4] - c, u[j:j + 4], 3), 0.0))


def solve_finite_difference(q, grid=None):
    """Crank-Nicolson oracle in ``v = log y``.

    Parameters
    ----------
    q : FPQuery
    grid : dict, optional
        ``{"v_min", "v_max", "nv", "nt"}``; must cover
        ``[log y - 8, log y + 4]`` with ``nv >= 32`` and ``nt >= 16``.

    Returns
    -------
    FPResult
        ``value`` on the given grid; ``est_error`` is the Richardson
        estimate ``|U_h - U_{2h}| / 3`` against the grid with half the
        resolution in both ``v`` and ``t``.
    """
    g = dict(default_grid(q.y, q.t) if grid is None else grid)
    for key in ("v_min", "v_max", "nv", "nt"):
        if key not in g:
            raise GridError(f"grid is missing {key!r}")
    g["nv"] = int(g["nv"])
    g["nt"] = int(g["nt"])
    if g["nv"] < 32 or g["nt"] < 16:
        raise GridError("finite differences need nv >= 32 and nt >= 16")
    c = math.log(q.y)
    if g["v_min"] > c - 8.0 or g["v_max"] < c + 4.0:
        raise GridError("grid must cover [log y - 8, log y + 4]")
    fine = _fd_value(q.p, q.t, q.y, g)
    half = dict(g, nv=(g["nv"] - 1) // 2 + 1, nt=max(1, g["nt"] // 2))
    coarse = _fd_value(q.p, q.t, q.y, half)
    return FPResult(fine, [], 0.0, abs(fine - coarse) / 3.0, "finite_difference", g["nv"] * g["nt"])


def solve(q, tol=SPECTRAL_TOL, grid=None):
    """Dispatch on ``q.method`` (and on the sign of ``p`` for the single integral)."""
    if q.method == "spectral_double":
        return solve_spectral_double(q, tol)
    if q.method == "finite_difference":
        return solve_finite_difference(q, grid)
    if q.p > 0:
        return solve_spectral_positive(q, tol)
    return solve_spectral_negative(q, tol)
