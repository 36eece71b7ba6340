"""Command-line front end.

    klgamma gamma   --z RE,IM [--s S]
    klgamma bessel  --kind i|k --order RE,IM --x X
    klgamma psi     --z RE,IM --n N --x X
    klgamma verify  --suite kl|mellin|fourier|all [--grid FILE|builtin] [--tol T]
    klgamma fourier --a A --xi-grid LO:HI:STEP [--n N]
    klgamma fp      --p P --t T --y Y [--method single|double|fd] [--n N]

Exit status: 0 on success, 2 on bad arguments or parameters outside an
operation's domain, 1 when a ``verify`` sweep has a report above its
tolerance (or another evaluation failure).
"""

import argparse
import csv
import io
import json
import math
import sys

from .bessel import bessel_i, bessel_k
from .errors import DomainError, KLGammaError
from .fokker_planck import FPQuery, solve
from .gamma import cgamma, gamma_pair
from .identities import (
    IDENTITY_SPEC,
    builtin_grid,
    fourier_closed_half,
    fourier_gamma_direct,
    fourier_gamma_repr,
    ramanujan_closed,
    verify_all,
)
from .kernel import KernelParams, psi

__all__ = ["run", "main", "report_to_dict", "dumps"]

_METHODS = {"single": "spectral_single", "double": "spectral_double", "fd": "finite_difference"}


class UsageError(Exception):
    """Bad command line; reported as a single line with exit status 2."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- serialization ------------------------------------------------------------


def _jsonable(v):
    if isinstance(v, complex):
        return [_jsonable(v.real), _jsonable(v.imag)]
    if isinstance(v, float):
        return v if math.isfinite(v) else None
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if hasattr(v, "item"):
        return _jsonable(v.item())
    return v


def dumps(obj):
    """Deterministic JSON: fixed key order, shortest round-trip floats."""
    return json.dumps(_jsonable(obj), indent=2, allow_nan=False)


def report_to_dict(rep):
    params = dict(rep.params)
    params["tol"] = rep.tol
    if rep.error is not None:
        params["error"] = rep.error
    return {
        "name": rep.name,
        "params": params,
        "lhs": rep.lhs,
        "rhs": rep.rhs,
        "abs_residual": rep.abs_residual,
        "rel_residual": rep.rel_residual,
        "converged": rep.converged,
    }


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(x) for x in r])
    return buf.getvalue()


def _human(header, rows):
    cells = [[str(h) for h in header]] + [[_fmt(x) for x in r] for r in rows]
    widths = [max(len(c[i]) for c in cells) for i in range(len(header))]
    return "\n".join("  ".join(c[i].ljust(widths[i]) for i in range(len(c))).rstrip() for c in cells) + "\n"


def _flatten(d):
    """Header and row for a flat record, complex values split in re/im."""
    header, row = [], []
    for k, v in d.items():
        if isinstance(v, complex):
            header += [f"{k}_re", f"{k}_im"]
            row += [v.real, v.imag]
        elif isinstance(v, (list, tuple)):
            header.append(k)
            row.append(";".join(_fmt(x) for x in v))
        elif isinstance(v, dict):
            header.append(k)
            row.append(json.dumps(_jsonable(v), sort_keys=False))
        else:
            header.append(k)
            row.append(v)
    return header, row


def _emit(records, fmt, single=False):
    if fmt == "json":
        return dumps(records[0] if single else records) + "\n"
    header, _ = _flatten(records[0]) if records else ([], [])
    rows = [_flatten(r)[1] for r in records]
    return _csv(header, rows) if fmt == "csv" else _human(header, rows)


# -- argument parsing -----------------------------------------------------------


def _complex_arg(text):
    try:
        parts = [float(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected RE or RE,IM, got {text!r}")
    if len(parts) == 1:
        return complex(parts[0], 0.0)
    if len(parts) == 2:
        return complex(parts[0], parts[1])
    raise argparse.ArgumentTypeError(f"expected RE or RE,IM, got {text!r}")


def _positive(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}")
    if not v > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    return v


def _xi_grid(text):
    try:
        lo, hi, step = (float(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI:STEP, got {text!r}")
    if not step > 0 or hi < lo:
        raise argparse.ArgumentTypeError("xi grid needs STEP > 0 and HI >= LO")
    m = int(math.floor((hi - lo) / step + 1e-9))
    if m > 100000:
        raise argparse.ArgumentTypeError("xi grid has too many points")
    return [lo + i * step for i in range(m + 1)]


def _parser():
    p = _Parser(prog="klgamma", description="Gamma-pair integral representations and a Fokker-Planck solver.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, default_fmt="json"):
        sp.add_argument("--format", choices=("json", "csv", "human"), default=default_fmt)
        sp.add_argument("--output", help="write to this file instead of stdout")

    sp = sub.add_parser("gamma", help="Gamma(z), or Gamma(z+is) Gamma(z-is) with --s")
    sp.add_argument("--z", type=_complex_arg, required=True)
    sp.add_argument("--s", type=float)
    common(sp)

    sp = sub.add_parser("bessel", help="I_nu(x) or K_nu(x) of complex order")
    sp.add_argument("--kind", choices=("i", "k"), required=True)
    sp.add_argument("--order", type=_complex_arg, required=True)
    sp.add_argument("--x", type=_positive, required=True)
    common(sp)

    sp = sub.add_parser("psi", help="renormalized kernel Psi_n(x)")
    sp.add_argument("--z", type=_complex_arg, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--x", type=_positive, required=True)
    common(sp)

    sp = sub.add_parser("verify", help="identity verification sweep")
    sp.add_argument("--suite", choices=("kl", "mellin", "fourier", "all"), default="all")
    sp.add_argument("--grid", default="builtin", help="JSON file of {name, params} points, or 'builtin'")
    sp.add_argument("--tol", type=_positive, help="override the per-identity tolerance")
    sp.add_argument("--threads", type=int, help="worker threads (default: KLGAMMA_THREADS or 1)")
    common(sp)

    sp = sub.add_parser("fourier", help="table of the Fourier transform of |Gamma(a+is)|^2")
    sp.add_argument("--a", type=float, required=True)
    sp.add_argument("--xi-grid", type=_xi_grid, required=True)
    sp.add_argument("--n", type=int)
    sp.add_argument("--radius", type=_positive, default=40.0, help="truncation radius in s")
    common(sp, "csv")

    sp = sub.add_parser("fp", help="solve the Fokker-Planck problem at one point")
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--t", type=_positive, required=True)
    sp.add_argument("--y", type=_positive, required=True)
    sp.add_argument("--method", choices=tuple(_METHODS), default="single")
    sp.add_argument("--n", type=int)
    common(sp)
    return p


# -- commands ---------------------------------------------------------------------


def _cmd_gamma(a):
    if a.s is None:
        rec = {"name": "gamma", "params": {"z": a.z}, "value": cgamma(a.z)}
    else:
        rec = {"name": "gamma_pair", "params": {"z": a.z, "s": a.s}, "value": gamma_pair(a.z, a.s)}
    return [rec], True, 0


def _cmd_bessel(a):
    fn = bessel_i if a.kind == "i" else bessel_k
    rec = {"name": f"bessel_{a.kind}", "params": {"order": a.order, "x": a.x}, "value": fn(a.order, a.x)}
    return [rec], True, 0


def _cmd_psi(a):
    v = psi(a.x, KernelParams(a.z, a.n))
    rec = {"name": "psi", "params": {"z": a.z, "n": a.n, "x": a.x},
           "value": v.psi, "regime": v.regime, "est_error": v.est_error}
    return [rec], True, 0


def _decode_param(v):
    if isinstance(v, list) and len(v) == 2 and all(isinstance(x, (int, float)) for x in v):
        return complex(v[0], v[1])
    return v


def _load_grid(path):
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read grid {path!r}: {exc}")
    if not isinstance(raw, list):
        raise UsageError("grid file must hold a JSON array")
    pts = []
    for item in raw:
        if not isinstance(item, dict) or "name" not in item or not isinstance(item.get("params"), dict):
            raise UsageError("grid entries must be objects with 'name' and 'params'")
        pts.append((str(item["name"]), {k: _decode_param(v) for k, v in item["params"].items()}))
    return pts


def _cmd_verify(a):
    if a.grid == "builtin":
        grid = builtin_grid(a.suite)
    else:
        grid = _load_grid(a.grid)
    if not grid:
        raise UsageError("grid is empty")
    reports = verify_all(grid, IDENTITY_SPEC, a.threads, a.tol)
    code = 0 if all(r.passed for r in reports) else 1
    return [report_to_dict(r) for r in reports], False, code


def _cmd_fourier(a):
    recs = []
    for xi in a.xi_grid:
        direct = fourier_gamma_direct(a.a, xi, radius=a.radius)
        rep = None
        if a.a < 0:
            rep = fourier_gamma_repr(a.a, xi, a.n)
        closed = None
        if a.a == -0.5:
            closed = fourier_closed_half(xi)
        elif a.a > 0:
            closed = ramanujan_closed(a.a, xi)
        value = rep if rep is not None else direct
        ref = closed if closed is not None else direct
        residual = abs(value - ref) / max(abs(ref), 1e-300)
        recs.append({"xi": xi, "direct": direct, "repr": rep, "closed": closed, "residual": residual})
    return recs, False, 0


def _cmd_fp(a):
    q = FPQuery(a.p, a.t, a.y, a.n, _METHODS[a.method])
    r = solve(q)
    rec = {"name": "fokker_planck", "params": {"p": q.p, "t": q.t, "y": q.y, "n": q.n, "method": r.method},
           "value": r.value, "correction_terms": list(r.correction_terms),
           "u_truncation": r.u_truncation, "est_error": r.est_error}
    return [rec], True, 0


_COMMANDS = {"gamma": _cmd_gamma, "bessel": _cmd_bessel, "psi": _cmd_psi, "verify": _cmd_verify,
             "fourier": _cmd_fourier, "fp": _cmd_fp}


def run(argv=None, stdout=None, stderr=None):
    """Run the CLI and return the exit status (never calls ``sys.exit``)."""
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"klgamma: error: {exc}", file=stderr)
        return 2
    except SystemExit as exc:
        # --help
        return int(exc.code or 0)
    try:
        records, single, code = _COMMANDS[args.command](args)
        text = _emit(records, args.format, single)
    except UsageError as exc:
        print(f"klgamma: error: {exc}", file=stderr)
        return 2
    except DomainError as exc:
        print(f"klgamma: error: {type(exc).__name__}: {exc}", file=stderr)
        return 2
    except KLGammaError as exc:
        print(f"klgamma: error: {type(exc).__name__}: {exc}", file=stderr)
        return 1
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
