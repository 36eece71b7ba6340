"""Both sides of the Kontorovich-Lebedev type identities for Gamma pairs and
of the Fourier transform of ``|Gamma(a + i s)|**2``.

Each ``*_rhs`` function evaluates an integral representation by quadrature;
the matching left side is :func:`klgamma.gamma.gamma_pair` or a closed form.
:class:`IdentityReport` pairs the two and :func:`verify_all` sweeps a grid
of parameters, turning failures into reports instead of exceptions.

The representations, for ``-n-1 < Re z < -n`` where needed:

* classic:  ``Gamma(z+is) Gamma(z-is) = 4 int_0^inf (x/2)^{2z} K_{2is}(x) dx/x``, ``Re z > 0``
* extended: ``... = 2 int_0^inf K_{2is}(x) Psi_n(x) (2/x)^{1-2z} dx``
* mixed:    a sum over the poles ``z = -k +- is`` plus an integral of
  ``K_{2is}`` against ``x^{2z-1}`` minus ``I``-Bessel counter terms
* Mellin:   ``4 int_0^inf K_{2is}(x) I_{2k+2z}(x) dx/x = 1/((z+k)^2 + s^2)``
* Fourier:  ``int_R cos(xi s) |Gamma(a+is)|^2 ds``, computed directly and as
  ``(2 pi / 2^{2a}) int_0^inf x^{2a-1} Psi_n(x) exp(-x cosh(xi/2)) dx``
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
import math
import os

import numpy as np

from .bessel import bessel_i_array, kiv_array
from .errors import DomainError, KLGammaError, PoleError, StripMismatchError, strip_index
from .gamma import abs_gamma_sq_log, cgamma, gamma_pair, loggamma_array, sinpi
from .kernel import KernelParams, psi_array, vanishing_order
from .quadrature import QuadratureSpec, integrate_even_real_line, integrate_semi_infinite

__all__ = [
    "IdentityReport",
    "IDENTITY_SPEC",
    "TOLERANCES",
    "kl_classic_rhs",
    "kl_extended_rhs",
    "kl_mixed_rhs",
    "mellin_ki_pair",
    "fourier_gamma_direct",
    "fourier_gamma_repr",
    "fourier_closed_half",
    "ramanujan_closed",
    "builtin_grid",
    "evaluate_point",
    "verify_all",
]

# Purely relative: several Gamma pairs in the sweeps are below 1e-10.
IDENTITY_SPEC = QuadratureSpec(abs_tol=1e-300, rel_tol=1e-12, max_level=9, max_evals=200000)

FOURIER_RADIUS = 40.0

# default pass thresholds (relative residual) per identity
TOLERANCES = {
    "kl_classic": 1e-9,
    "kl_extended": 1e-7,
    "kl_extended_complex": 1e-6,
    "kl_mixed": 1e-7,
    "kl_consistency": 1e-7,
    "mellin": 1e-9,
    "ramanujan": 1e-8,
    "fourier_repr": 1e-6,
    "fourier_closed": 1e-7,
}


@dataclass
class IdentityReport:
    """One identity checked at one parameter point.

    ``abs_residual = |lhs - rhs|`` and
    ``rel_residual = abs_residual / max(|lhs|, |rhs|, 1e-300)``.
    ``error`` holds a short tag when the point could not be evaluated, in
    which case ``lhs``/``rhs`` are NaN and ``converged`` is False.
    """

    name: str
    lhs: complex
    rhs: complex
    abs_residual: float
    rel_residual: float
    evaluations: int
    converged: bool
    params: dict = field(default_factory=dict)
    tol: float = 1e-7
    error: str = None

    @classmethod
    def compare(cls, name, lhs, rhs, evaluations=0, converged=True, params=None, tol=None):
        lhs = complex(lhs)
        rhs = complex(rhs)
        ar = abs(lhs - rhs)
        rr = ar / max(abs(lhs), abs(rhs), 1e-300)
        if tol is None:
            tol = TOLERANCES.get(name, 1e-7)
        return cls(name, lhs, rhs, ar, rr, int(evaluations), bool(converged), dict(params or {}), tol)

    @classmethod
    def failure(cls, name, params, tag, tol=None):
        nan = complex(math.nan, math.nan)
        if tol is None:
            tol = TOLERANCES.get(name, 1e-7)
        return cls(name, nan, nan, math.nan, math.nan, 0, False, dict(params or {}), tol, tag)

    @property
    def passed(self):
        return self.error is None and self.rel_residual <= self.tol


def _real_if_possible(v, z):
    v = complex(v)
    return complex(v.real, 0.0) if complex(z).imag == 0.0 else v


def _check_finite(*vals):
    for v in vals:
        v = complex(v)
        if not (math.isfinite(v.real) and math.isfinite(v.imag)):
            raise DomainError("parameters must be finite")


# ---------------------------------------------------------------------------
# Kontorovich-Lebedev representations


def _classic(z, s, spec):
    z = complex(z)
    s = float(s)
    _check_finite(z, s)
    if not z.real > 0:
        raise DomainError("the classic representation needs Re z > 0; use kl_extended_rhs")
    nu = 2.0 * s

    def f(x):
        return 4.0 * kiv_array(nu, x) * np.exp(2.0 * z * np.log(0.5 * x)) / x

    return integrate_semi_infinite(f, 2.0 * z.real - 1.0, spec)


def kl_classic_rhs(z, s, spec=IDENTITY_SPEC):
    """``4 int_0^inf (x/2)^{2z} K_{2is}(x) dx / x`` for ``Re z > 0``.

    Examples
    --------
    >>> round(kl_classic_rhs(1.0, 0.0).real, 10)
    1.0
    """
    res = _classic(z, s, spec)
    return _real_if_possible(res.value, z)


def _extended(z, s, n, spec):
    z = complex(z)
    s = float(s)
    _check_finite(z, s)
    params = KernelParams(z, n)
    nu = 2.0 * s
    sigma = 2.0 * z.real - 1.0 + vanishing_order(params)

    def f(x):
        return 2.0 * kiv_array(nu, x) * psi_array(x, params) * np.exp((1.0 - 2.0 * z) * np.log(2.0 / x))

    return integrate_semi_infinite(f, sigma, spec)


def kl_extended_rhs(z, s, n=None, spec=IDENTITY_SPEC):
    """``2 int_0^inf K_{2is}(x) Psi_n(x) (2/x)^{1-2z} dx`` for ``-n-1 < Re z < -n``.

    Parameters
    ----------
    z : complex
    s : float
    n : int, optional
        Strip index; inferred from ``Re z`` when omitted.

    Raises
    ------
    StripMismatchError
        If ``Re z`` is not inside the strip of ``n``.

    Examples
    --------
    >>> round(kl_extended_rhs(-0.5, 0.0, 0).real, 6)
    12.566371
    """
    if n is None:
        n = strip_index(complex(z).real)
        if n is None:
            raise StripMismatchError(z, -1, None)
    res = _extended(z, s, n, spec)
    return _real_if_possible(res.value, z)


@lru_cache(maxsize=256)
def _mixed_tail_coefficients(z, n, lmax):
    """Coefficients of ``T(x) = sum_{l>n} t_l (x/2)^{2l}``, the small-x form of
    ``(2/x)^{2z} sum_k d_k I_{2k+2z}(x) - 1``."""
    out = []
    for l in range(n + 1, lmax + 1):
        inner = 0j
        for k in range(n + 1):
            poch = 1.0 + 0j
            for j in range(l + 1):
                poch *= k + 2.0 * z + j
            inner += math.comb(l, k) * 2.0 * (-1) ** k * (k + z) / poch
        out.append(inner * math.exp(-math.lgamma(l + 1)))
    return tuple(out)


def _mixed_d(z, n):
    # d_k = 2 (-1)^k (k+z) Gamma(k+2z) / k!  ( = (2 pi / sin 2 pi z) (k+z) / (k! Gamma(1-k-2z)) )
    return [2.0 * (-1) ** k * (k + z) * cgamma(k + 2.0 * z) / math.factorial(k) for k in range(n + 1)]


def _mixed_bracket_small(x, z, n):
    # 1 - (2/x)^{2z} sum_k d_k I_{2k+2z}(x) = -T(x), summed for x <= 2
    q = (0.5 * x) ** 2
    coef = _mixed_tail_coefficients(z, n, n + 60)
    acc = np.zeros(x.shape, dtype=complex)
    qp = q ** (n + 1)
    for c in coef:
        acc += c * qp
        qp = qp * q
    return -acc


def _mixed(z, s, n, spec, min_sin=1e-3):
    z = complex(z)
    s = float(s)
    _check_finite(z, s)
    n = int(n)
    if n < 0 or not z.real > -n - 1:
        raise StripMismatchError(z, n, strip_index(z.real))
    # Gamma(k + 2z) has a pole when 2z is a non-positive integer
    if z.real < 0.25 and abs(complex(sinpi(2.0 * z))) < min_sin:
        raise DomainError(
            f"|sin(2 pi z)| < {min_sin:g}: the mixed representation degenerates; use kl_extended_rhs")
    nu = 2.0 * s
    d = _mixed_d(z, n)
    poles = sum(d[k] / ((z + k) ** 2 + s * s) for k in range(n + 1))
    pref = complex(np.exp((2.0 - 2.0 * z) * math.log(2.0)))

    def f(x):
        out = np.empty(x.shape, dtype=complex)
        small = x <= 2.0
        if np.any(small):
            xs = x[small]
            out[small] = kiv_array(nu, xs) * _mixed_bracket_small(xs, z, n) * np.exp((2.0 * z - 1.0) * np.log(xs))
        big = ~small
        if np.any(big):
            xb = x[big]
            # K (1 - (2/x)^{2z} sum d_k I) x^{2z-1}, with e^{x} K e^{-x} I products
            kx = kiv_array(nu, xb, scale="x")
            acc = np.zeros(xb.shape, dtype=complex)
            for k in range(n + 1):
                acc += d[k] * bessel_i_array(2 * k + 2.0 * z, xb, scaled=True)
            lx = np.log(xb)
            with np.errstate(under="ignore"):
                head = np.exp(-xb + (2.0 * z - 1.0) * lx)
            out[big] = kx * (head - acc * np.exp(2.0 * z * math.log(2.0) - lx))
        return pref * out

    sigma = 2.0 * z.real + 2 * n + 1.0
    res = integrate_semi_infinite(f, sigma, spec)
    return poles, res


def kl_mixed_rhs(z, s, n=0, spec=IDENTITY_SPEC):
    """Pole sum plus ``I``-renormalized integral, valid for ``Re z > -n-1``.

    ``sum_k d_k / ((z+k)^2 + s^2)
    + 2^{2-2z} int_0^inf K_{2is}(x) [1 - (2/x)^{2z} sum_k d_k I_{2k+2z}(x)] x^{2z-1} dx``
    with ``d_k = 2 (-1)^k (k+z) Gamma(k+2z) / k!``, the same coefficients as
    ``(2 pi / sin 2 pi z) (k+z) / (k! Gamma(1-k-2z))`` but free of the sine.

    Raises
    ------
    DomainError
        When ``2z`` is within the sine guard of a non-positive integer.
    """
    poles, res = _mixed(z, s, n, spec)
    return _real_if_possible(poles + res.value, z)


def mellin_ki_pair(z, k, s, spec=IDENTITY_SPEC, tol=None):
    """Check ``4 int_0^inf K_{2is}(x) I_{2k+2z}(x) dx/x = 1/((z+k)^2 + s^2)``.

    Returns
    -------
    IdentityReport
        ``lhs`` is the closed form, ``rhs`` the quadrature value.
    """
    z = complex(z)
    k = int(k)
    s = float(s)
    _check_finite(z, s)
    if not z.real + k > 0:
        raise DomainError("the Mellin pair needs Re z + k > 0")
    nu = 2.0 * s
    order = 2 * k + 2.0 * z

    def f(x):
        return 4.0 * kiv_array(nu, x, scale="x") * bessel_i_array(order, x, scaled=True) / x

    res = integrate_semi_infinite(f, 2.0 * (z.real + k) - 1.0, spec)
    closed = 1.0 / ((z + k) ** 2 + s * s)
    return IdentityReport.compare("mellin", closed, _real_if_possible(res.value, z), res.evaluations,
                                  res.converged, {"z": z, "k": k, "s": s}, tol)


# ---------------------------------------------------------------------------
# Fourier transform of |Gamma(a + i s)|^2


def _check_a(a):
    a = float(a)
    if not math.isfinite(a):
        raise DomainError("a must be finite")
    if a <= 0 and a == round(a):
        raise PoleError(int(a))
    return a


def _direct(a, xi, spec, radius=FOURIER_RADIUS):
    a = _check_a(a)
    xi = float(xi)

    def f(s):
        return np.cos(xi * s) * np.exp(abs_gamma_sq_log(a, s))

    return integrate_even_real_line(f, radius, spec, decay_rate=math.pi)


def fourier_gamma_direct(a, xi, spec=IDENTITY_SPEC, radius=FOURIER_RADIUS):
    """``int_R cos(xi s) |Gamma(a + i s)|^2 ds``, truncated at ``|s| = radius``.

    Examples
    --------
    >>> round(fourier_gamma_direct(1.0, 0.0), 7)
    1.5707963
    """
    return float(_direct(a, xi, spec, radius).value.real)


def _repr(a, xi, n, spec):
    a = float(a)
    xi = float(xi)
    if n is None:
        n = strip_index(a)
        if n is None:
            raise StripMismatchError(a, -1, None)
    params = KernelParams(a, n)
    c = math.cosh(0.5 * xi)
    sigma = 2.0 * a - 1.0 + vanishing_order(params)

    def f(x):
        with np.errstate(under="ignore"):
            return np.exp((2.0 * a - 1.0) * np.log(x) - x * c) * psi_array(x, params).real

    res = integrate_semi_infinite(f, sigma, spec)
    return 2.0 * math.pi * 2.0 ** (-2.0 * a) * res.value.real, res


def fourier_gamma_repr(a, xi, n=None, spec=IDENTITY_SPEC):
    """``(2 pi / 2^{2a}) int_0^inf x^{2a-1} Psi_n(x) exp(-x cosh(xi/2)) dx``.

    Valid for ``-n-1 < a < -n``, where it equals :func:`fourier_gamma_direct`.
    """
    return float(_repr(a, xi, n, spec)[0])


def ramanujan_closed(a, xi):
    """``sqrt(pi) Gamma(a) Gamma(a + 1/2) cosh(xi/2)^{-2a}`` for ``a > 0``."""
    a = float(a)
    if not a > 0:
        raise DomainError("the closed form needs a > 0")
    lg = loggamma_array(np.array([a, a + 0.5])).real.sum()
    return math.exp(0.5 * math.log(math.pi) + lg - 2.0 * a * math.log(math.cosh(0.5 * float(xi))))


def fourier_closed_half(xi):
    """The transform at ``a = -1/2``:
    ``4 pi log(1 + e^{-|xi|}) cosh(xi/2) + 2 pi |xi| e^{-|xi|/2}``."""
    t = abs(float(xi))
    return 4.0 * math.pi * math.log1p(math.exp(-t)) * math.cosh(0.5 * t) + 2.0 * math.pi * t * math.exp(-0.5 * t)


# ---------------------------------------------------------------------------
# sweeps

_EXTENDED_Z = [(-0.25, 0), (-0.5, 0), (-0.75, 0), (-1.5, 1), (-2.5, 2)]
_S_GRID = [0.0, 0.5, 1.0, 2.0, 5.0]
_COMPLEX_SPOTS = [(complex(-0.3, 0.4), 0, 0.5), (complex(-1.5, 0.2), 1, 0.5)]
_MELLIN = [(1, 0, 0), (0.5, 1, 2), (-0.4, 1, 0), (0.3, 0, 0.5), (complex(1, 0.5), 0, 1),
           (2, 0, 0.25), (-0.75, 1, 1), (-1.2, 2, 0.5), (complex(0.5, 0.3), 1, 1.5)]


def builtin_grid(suite="all"):
    """Parameter points of the acceptance sweeps.

    Returns a list of ``(name, params)`` pairs in a fixed order.  Suites are
    ``kl`` (extended representation on the real grid), ``mellin``,
    ``fourier`` and ``all``.
    """
    if suite not in ("kl", "mellin", "fourier", "all"):
        raise DomainError(f"unknown suite {suite!r}")
    pts = []
    if suite == "all":
        for z in (0.5, 1.0, 2.0, complex(0.5, 0.5)):
            for s in (0.0, 0.5, 1.0, 2.0):
                pts.append(("kl_classic", {"z": z, "s": s}))
    if suite in ("kl", "all"):
        for z, n in _EXTENDED_Z:
            for s in _S_GRID:
                pts.append(("kl_extended", {"z": z, "s": s, "n": n}))
    if suite == "all":
        for z, n, s in _COMPLEX_SPOTS:
            pts.append(("kl_extended", {"z": z, "s": s, "n": n}))
        for z, n in [(-0.25, 0), (-0.75, 0)]:
            for s in _S_GRID:
                pts.append(("kl_mixed", {"z": z, "s": s, "n": n}))
        for z, n, s in _COMPLEX_SPOTS:
            pts.append(("kl_mixed", {"z": z, "s": s, "n": n}))
        pts.append(("kl_mixed", {"z": 1.0, "s": 1.0, "n": 0}))
        for z, n in [(-0.25, 0), (-0.75, 0)]:
            for s in _S_GRID:
                pts.append(("kl_consistency", {"z": z, "s": s, "n": n}))
        for z, n, s in _COMPLEX_SPOTS:
            pts.append(("kl_consistency", {"z": z, "s": s, "n": n}))
    if suite in ("mellin", "all"):
        for z, k, s in _MELLIN:
            pts.append(("mellin", {"z": z, "k": k, "s": s}))
    if suite in ("fourier", "all"):
        for a in (0.5, 1.0, 2.0):
            for xi in (0.0, 1.0, 3.0):
                pts.append(("ramanujan", {"a": a, "xi": xi}))
        for a, n in [(-0.25, 0), (-0.5, 0), (-0.75, 0), (-1.5, 1)]:
            for xi in (0.0, 1.0, 2.0, 4.0):
                pts.append(("fourier_repr", {"a": a, "xi": xi, "n": n}))
        for xi in (0.0, 1.0, 2.0, 4.0):
            pts.append(("fourier_closed", {"xi": xi, "method": "direct"}))
            pts.append(("fourier_closed", {"xi": xi, "method": "repr"}))
    return pts


def _extended_tol(z):
    return TOLERANCES["kl_extended_complex"] if complex(z).imag else TOLERANCES["kl_extended"]


def evaluate_point(name, params, spec=IDENTITY_SPEC, tol=None):
    """Evaluate one identity at one parameter point.

    Never raises for bad parameters or failed evaluations: the returned
    report then has ``converged=False`` and a short ``error`` tag.
    """
    p = dict(params)
    try:
        if name == "kl_classic":
            res = _classic(p["z"], p["s"], spec)
            return IdentityReport.compare(name, gamma_pair(p["z"], p["s"]), _real_if_possible(res.value, p["z"]),
                                          res.evaluations, res.converged, p, tol)
        if name == "kl_extended":
            res = _extended(p["z"], p["s"], p["n"], spec)
            return IdentityReport.compare(name, gamma_pair(p["z"], p["s"]), _real_if_possible(res.value, p["z"]),
                                          res.evaluations, res.converged, p, tol or _extended_tol(p["z"]))
        if name == "kl_mixed":
            poles, res = _mixed(p["z"], p["s"], p["n"], spec)
            return IdentityReport.compare(name, gamma_pair(p["z"], p["s"]),
                                          _real_if_possible(poles + res.value, p["z"]),
                                          res.evaluations, res.converged, p, tol)
        if name == "kl_consistency":
            r1 = _extended(p["z"], p["s"], p["n"], spec)
            poles, r2 = _mixed(p["z"], p["s"], p["n"], spec)
            return IdentityReport.compare(name, _real_if_possible(r1.value, p["z"]),
                                          _real_if_possible(poles + r2.value, p["z"]),
                                          r1.evaluations + r2.evaluations, r1.converged and r2.converged, p, tol)
        if name == "mellin":
            rep = mellin_ki_pair(p["z"], p["k"], p["s"], spec, tol)
            rep.params = p
            return rep
        if name == "ramanujan":
            res = _direct(p["a"], p["xi"], spec, p.get("radius", FOURIER_RADIUS))
            return IdentityReport.compare(name, ramanujan_closed(p["a"], p["xi"]), res.value.real,
                                          res.evaluations, res.converged, p, tol)
        if name == "fourier_repr":
            r1 = _direct(p["a"], p["xi"], spec, p.get("radius", FOURIER_RADIUS))
            val, r2 = _repr(p["a"], p["xi"], p.get("n"), spec)
            return IdentityReport.compare(name, r1.value.real, val, r1.evaluations + r2.evaluations,
                                          r1.converged and r2.converged, p, tol)
        if name == "fourier_closed":
            if p.get("method", "direct") == "direct":
                res = _direct(-0.5, p["xi"], spec, p.get("radius", FOURIER_RADIUS))
                val = res.value.real
            else:
                val, res = _repr(-0.5, p["xi"], 0, spec)
            return IdentityReport.compare(name, fourier_closed_half(p["xi"]), val,
                                          res.evaluations, res.converged, p, tol)
        return IdentityReport.failure(name, p, "unknown_identity", tol)
    except StripMismatchError:
        return IdentityReport.failure(name, p, "strip_mismatch", tol)
    except PoleError:
        return IdentityReport.failure(name, p, "pole", tol)
    except (KLGammaError, ValueError, KeyError, TypeError, ArithmeticError) as exc:
        return IdentityReport.failure(name, p, type(exc).__name__, tol)


def _threads(threads):
    if threads is not None:
        return max(1, int(threads))
    env = os.environ.get("KLGAMMA_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1


def verify_all(grid=None, spec=IDENTITY_SPEC, threads=None, tol=None):
    """Run every identity over a grid of parameter points.

    Parameters
    ----------
    grid : list of (name, params) or str, optional
        Points as produced by :func:`builtin_grid`; a string selects a
        builtin suite.  Defaults to the full builtin grid.
    spec : QuadratureSpec
    threads : int, optional
        Worker threads; defaults to ``KLGAMMA_THREADS`` or 1.
    tol : float, optional
        Overrides the per-identity pass threshold.

    Returns
    -------
    list of IdentityReport
        In grid order, whatever the completion order.
    """
    if grid is None:
        grid = builtin_grid("all")
    elif isinstance(grid, str):
        grid = builtin_grid(grid)
    grid = list(grid)
    if not grid:
        return []
    workers = _threads(threads)
    if workers == 1:
        return [evaluate_point(name, p, spec, tol) for name, p in grid]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(evaluate_point, name, p, spec, tol) for name, p in grid]
        return [f.result() for f in futures]
