"""Job-oriented command line: parse specs, run solvers, emit CSV/JSON/SVG.

Exit codes: 0 success, 2 invalid input, 3 numerical breakdown (partial output
is still written), 4 I/O failure.  Output formatting is fixed (17 significant
digits, '.' decimal, LF line endings, header row always present) so identical
jobs produce byte-identical artifacts.
"""

import argparse
import json
import math
import os
import sys
import warnings

import numpy as np

from . import approx, closedforms
from .errors import (
    BreakdownAtOrder,
    CanonhamError,
    DegenerateRatio,
    DomainError,
    EmptyPeriod,
    InsufficientMoments,
    LengthMismatch,
    NegativeDensity,
    NonDiagonalHamiltonian,
    NonRealResult,
    NotPositiveDefinite,
    PartialResultWarning,
    QuadratureFailure,
    SeriesDivergence,
    SingularSystem,
)
from .inverse import StepHamiltonian, recover_g, recover_h
from .kernels import backend_name
from .measures import MeasureSpec, periodize, trig_moments
from .opuc import direct_moments, g_via_opuc, h_via_opuc, verblunsky_from_hamiltonian
from .svg import render_svg

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_BREAKDOWN = 3
EXIT_IO = 4

DEFAULT_ROUTE_TOL = 1e-8


def _fmt(x):
    return format(float(x), ".17g")


def _write_text(path, text):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _csv(header, rows):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def _write_json(path, obj):
    _write_text(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")


def parse_scalar(s):
    """Float literal, optionally a multiple of pi: '2pi', 'pi', '0.5pi'."""
    s = str(s).strip().lower()
    if s.endswith("pi"):
        head = s[:-2]
        return (float(head) if head else 1.0) * math.pi
    return float(s)


def parse_measure(s):
    """Inline JSON (starts with '{') or a path to a JSON file."""
    s = s.strip()
    if s.startswith("{"):
        return MeasureSpec.from_json(json.loads(s))
    with open(s, "r", encoding="utf-8") as fh:
        return MeasureSpec.from_json(json.load(fh))


def parse_hamiltonian(s):
    s = s.strip()
    if s.startswith("{"):
        return StepHamiltonian.from_json(json.loads(s))
    with open(s, "r", encoding="utf-8") as fh:
        return StepHamiltonian.from_json(json.load(fh))


def parse_grid(s):
    """'a:b:step' inclusive of b up to roundoff."""
    a, b, step = (parse_scalar(v) for v in s.split(":"))
    if step <= 0 or b < a:
        raise ValueError(f"bad grid {s!r}")
    n = int(math.floor((b - a) / step + 1e-9)) + 1
    return a + step * np.arange(n)


def parse_intervals(s):
    out = []
    for part in s.split(","):
        a, b = (parse_scalar(v) for v in part.split(":"))
        out.append((a, b))
    return out


def parse_kv(s):
    out = {}
    if s:
        for part in s.split(","):
            k, v = part.split("=")
            out[k.strip()] = v.strip()
    return out


def parse_atoms(s):
    out = []
    for part in s.replace(";", ",").split(","):
        loc, w = part.split(":")
        out.append((parse_scalar(loc), parse_scalar(w)))
    return tuple(out)


def parse_h11(s):
    """Declared h11 forms: 'exp:rate=1,scale=1', 'poly:coeffs=1;0;2', 'const:value=2'."""
    kind, _, rest = s.partition(":")
    kv = parse_kv(rest)
    if kind == "poly":
        coeffs = [float(v) for v in kv.get("coeffs", "1").split(";")]
        return approx.declared_h11("poly", coeffs=coeffs)
    return approx.declared_h11(kind, **{k: float(v) for k, v in kv.items()})


def closed_form_by_name(name, params):
    """HamiltonianFunction for a named closed form with string parameters."""
    p = {k: parse_scalar(v) for k, v in params.items() if k != "atoms"}
    if name == "pointmass":
        return closedforms.pointmass_hamiltonian(p.get("alpha", 1.0), p.get("beta", 0.0))
    if name == "winkler":
        alpha = p.get("alpha", 1.0)
        r = p.get("r", 0.0)
        base = (lambda t: np.full(np.shape(t), 1.0 / alpha))
        anti = (lambda t: np.asarray(t, float) / alpha)
        return closedforms.HamiltonianFunction(
            h11=closedforms.winkler_fn(base, r, antiderivative=anti),
            label=f"winkler({alpha},{r})",
        )
    if name == "atom-at-lambda":
        return closedforms.HamiltonianFunction(
            h11=lambda t: closedforms.atom_at_lambda_h(
                p.get("alpha", 1.0), p.get("beta", 1.0), p.get("lam", 1.0), t
            ),
            label="atom-at-lambda",
        )
    if name == "atoms":
        sys_ = closedforms.AtomSystem(
            alpha=p.get("alpha", 1.0), atoms=parse_atoms(params["atoms"])
        )
        return closedforms.HamiltonianFunction(
            h11=lambda t: np.array(
                [closedforms.atoms_h(sys_, float(tt)) for tt in np.atleast_1d(t)]
            ).reshape(np.shape(t)),
            label="atoms",
        )
    if name == "homogeneous":
        return closedforms.homogeneous_hamiltonian(
            p.get("c1", 1.0), p.get("c2", 0.0), p.get("c", p.get("C", 0.0))
        )
    if name == "bessel":
        system = closedforms.bessel_system(p.get("m", 1.0))
        return closedforms.HamiltonianFunction(
            h11=system.h, domain_start=0.0, domain_open=system.m > 0,
            label=f"bessel({system.m})",
        )
    raise ValueError(f"unknown closed form {name!r}")


def parse_reference(s):
    """'name:key=val,...' closed form, or a path to a step-Hamiltonian JSON."""
    name, _, rest = s.partition(":")
    try:
        return closed_form_by_name(name, parse_kv(rest))
    except (ValueError, KeyError):
        if os.path.exists(s):
            return parse_hamiltonian(s)
        raise


def _moments_for(args):
    spec = parse_measure(args.measure)
    T = parse_scalar(args.T)
    pm = periodize(spec, T)
    return pm, T


def _pd_tol(args):
    return getattr(args, "pd_tol", None)


def cmd_inverse(args):
    spec = parse_measure(args.measure)
    T = parse_scalar(args.T)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", PartialResultWarning)
        H = approx.inverse_via_periodization(
            spec, T, args.N, method=args.method, pd_tol=_pd_tol(args),
            allow_partial=True,
        )
    degraded = any(issubclass(w.category, PartialResultWarning) for w in caught)
    _write_text(
        args.out, _csv(("t_start", "t_end", "h11", "g", "h22"), H.csv_rows())
    )
    if args.json:
        _write_json(args.json, H.to_json())
    if args.svg:
        reference = parse_reference(args.reference) if args.reference else None
        render_svg(H, reference=reference, path=args.svg, title=args.svg_title,
                   log_y=args.svg_log)
    if degraded:
        sys.stderr.write("warning: positivity breakdown, partial steps written\n")
        return EXIT_BREAKDOWN
    return EXIT_OK


def cmd_direct(args):
    H = parse_hamiltonian(args.hamiltonian)
    N = args.N if args.N is not None else H.n_steps - 1
    m = direct_moments(H, N)
    rows = [(k, g.real, g.imag) for k, g in enumerate(m.gamma)]
    _write_text(args.out, _csv(("k", "re_gamma", "im_gamma"), rows))
    if args.verblunsky:
        _write_json(args.verblunsky, verblunsky_from_hamiltonian(H).to_json())
    return EXIT_OK


def cmd_periodize(args):
    pm, T = _moments_for(args)
    m = trig_moments(pm, args.n_max)
    rows = [(k, g.real, g.imag) for k, g in enumerate(m.gamma)]
    _write_text(args.out, _csv(("k", "re_gamma", "im_gamma"), rows))
    return EXIT_OK


def cmd_dirac_approx(args):
    fn, anti = parse_h11(args.h11)
    T = parse_scalar(args.T)
    H = approx.dirac_step_hamiltonian(fn, T, args.N, antiderivative=anti)
    _write_text(
        args.out, _csv(("t_start", "t_end", "h11", "g", "h22"), H.csv_rows())
    )
    if args.spectrum or args.verblunsky:
        v, m = approx.dirac_direct_spectrum(fn, T, args.N, antiderivative=anti)
        if args.spectrum:
            rows = [(k, g.real, g.imag) for k, g in enumerate(m.gamma)]
            _write_text(args.spectrum, _csv(("k", "re_gamma", "im_gamma"), rows))
        if args.verblunsky:
            _write_json(args.verblunsky, v.to_json())
    return EXIT_OK


def cmd_closed_form(args):
    kv = parse_kv(args.params or "")
    for key in ("alpha", "beta", "lam", "r", "c1", "c2", "C", "m", "atoms"):
        val = getattr(args, key, None)
        if val is not None:
            kv[key] = val
    H = closed_form_by_name(args.name, kv)
    grid = parse_grid(args.grid)
    h11, g, h22 = H(grid)
    rows = list(zip(grid, h11, g, h22))
    _write_text(args.out, _csv(("t", "h11", "g", "h22"), rows))
    return EXIT_OK


def cmd_validate(args):
    pm, T = _moments_for(args)
    m = trig_moments(pm, args.N)
    routes_h = {
        "toeplitz-levinson": recover_h(m, args.N, method="levinson", pd_tol=_pd_tol(args)),
        "toeplitz-dense": recover_h(m, args.N, method="dense", pd_tol=_pd_tol(args)),
        "opuc": h_via_opuc(m, args.N, pd_tol=_pd_tol(args)),
    }
    routes_g = {
        "toeplitz-levinson": recover_g(m, args.N, method="levinson", pd_tol=_pd_tol(args)),
        "toeplitz-dense": recover_g(m, args.N, method="dense", pd_tol=_pd_tol(args)),
        "opuc": g_via_opuc(m, args.N, pd_tol=_pd_tol(args)),
    }
    report = {"T": T, "N": args.N, "kernel_backend": backend_name(), "comparisons": []}
    worst = 0.0
    for label, routes in (("h", routes_h), ("g", routes_g)):
        names = sorted(routes)
        for i, na in enumerate(names):
            for nb in names[i + 1:]:
                a, b = routes[na], routes[nb]
                scale = np.maximum(np.abs(a), 1.0)
                dev = float(np.max(np.abs(a - b) / scale))
                worst = max(worst, dev)
                report["comparisons"].append(
                    {"quantity": label, "routes": [na, nb], "max_rel_dev": dev}
                )
                print(f"{label}: {na} vs {nb}: max rel dev {dev:.3e}")
    report["max_rel_dev"] = worst
    report["tolerance"] = args.route_tol
    report["agree"] = worst <= args.route_tol
    h, g = routes_h["toeplitz-levinson"], routes_g["toeplitz-levinson"]
    h22 = (1.0 + g**2) / h
    report["steps"] = [
        {"h11": float(a), "g": float(b), "h22": float(c)}
        for a, b, c in zip(h, g, h22)
    ]
    print("   n          h11            g          h22")
    for n, (a, b, c) in enumerate(zip(h, g, h22)):
        print(f"{n:>4}  {a:>11.8g}  {b:>11.8g}  {c:>11.8g}")
    if args.report:
        _write_json(args.report, report)
    if worst > args.route_tol:
        print(f"ROUTES DISAGREE: {worst:.3e} > {args.route_tol:.3e}")
        return EXIT_BREAKDOWN
    print(f"routes agree within {args.route_tol:.3e}")
    return EXIT_OK


def cmd_sweep(args):
    spec = parse_measure(args.measure)
    T_list = [parse_scalar(v) for v in args.T_list.split(",")]
    reference = parse_reference(args.reference)
    intervals = parse_intervals(args.intervals)
    report = approx.convergence_sweep(
        spec, T_list, reference, intervals, method=args.method, pd_tol=_pd_tol(args)
    )
    _write_text(
        args.out,
        _csv(("T", "interval_a", "interval_b", "int_hT", "int_href", "abs_err"),
             report.csv_rows()),
    )
    if args.json:
        _write_json(args.json, report.to_json())
    return EXIT_OK


def _add_common_out(p):
    p.add_argument("--out", default=None, help="CSV output path (default stdout)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="canonham",
        description="Spectral problems for 2x2 canonical systems with periodic "
        "spectral measures",
    )
    parser.add_argument("--pd-tol", type=float, default=None, dest="pd_tol",
                        help="positive-definiteness floor (default 1e-13*gamma_0)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("inverse", help="measure -> step Hamiltonian")
    p.add_argument("--measure", required=True)
    p.add_argument("--T", required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--method", choices=("levinson", "dense"), default="levinson")
    _add_common_out(p)
    p.add_argument("--json", default=None, help="also write the steps as JSON")
    p.add_argument("--svg", default=None, help="render the step profile as SVG")
    p.add_argument("--svg-log", action="store_true", dest="svg_log")
    p.add_argument("--svg-title", default="", dest="svg_title")
    p.add_argument("--reference", default=None,
                   help="closed form 'name:k=v,...' or steps JSON, overlay in SVG")
    p.set_defaults(func=cmd_inverse)

    p = sub.add_parser("direct", help="diagonal step Hamiltonian -> moments")
    p.add_argument("--hamiltonian", required=True)
    p.add_argument("--N", type=int, default=None)
    _add_common_out(p)
    p.add_argument("--verblunsky", default=None, help="write reflection data JSON")
    p.set_defaults(func=cmd_direct)

    p = sub.add_parser("periodize", help="measure -> periodized moments")
    p.add_argument("--measure", required=True)
    p.add_argument("--T", required=True)
    p.add_argument("--n-max", type=int, required=True, dest="n_max")
    _add_common_out(p)
    p.set_defaults(func=cmd_periodize)

    p = sub.add_parser("dirac-approx", help="block-average h11 and solve directly")
    p.add_argument("--h11", required=True,
                   help="'exp:rate=..', 'poly:coeffs=a;b;c', or 'const:value=..'")
    p.add_argument("--T", required=True)
    p.add_argument("--N", type=int, required=True)
    _add_common_out(p)
    p.add_argument("--spectrum", default=None, help="write moments CSV")
    p.add_argument("--verblunsky", default=None, help="write reflection data JSON")
    p.set_defaults(func=cmd_dirac_approx)

    p = sub.add_parser("closed-form", help="evaluate a closed-form Hamiltonian")
    p.add_argument("name", choices=("pointmass", "winkler", "atom-at-lambda",
                                    "atoms", "homogeneous", "bessel"))
    p.add_argument("--params", default="", help="'alpha=1,beta=1,...'")
    p.add_argument("--alpha", default=None)
    p.add_argument("--beta", default=None)
    p.add_argument("--lam", default=None)
    p.add_argument("--r", default=None)
    p.add_argument("--c1", default=None)
    p.add_argument("--c2", default=None)
    p.add_argument("--C", default=None)
    p.add_argument("--m", default=None)
    p.add_argument("--atoms", default=None, help="'loc:beta,loc:beta,...'")
    p.add_argument("--grid", required=True, help="'a:b:step'")
    _add_common_out(p)
    p.set_defaults(func=cmd_closed_form)

    p = sub.add_parser("validate", help="cross-check Toeplitz and polynomial routes")
    p.add_argument("--measure", required=True)
    p.add_argument("--T", default="pi")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--route-tol", type=float, default=DEFAULT_ROUTE_TOL,
                   dest="route_tol")
    p.add_argument("--report", default=None, help="write the comparison JSON")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("sweep", help="periodization convergence sweep")
    p.add_argument("--measure", required=True)
    p.add_argument("--T-list", required=True, dest="T_list", help="'pi,2pi,4pi'")
    p.add_argument("--reference", required=True)
    p.add_argument("--intervals", required=True, help="'0:1,1:2'")
    p.add_argument("--method", choices=("levinson", "dense"), default="levinson")
    _add_common_out(p)
    p.add_argument("--json", default=None)
    p.set_defaults(func=cmd_sweep)
    return parser


def _expand_job(argv):
    if "--job" not in argv:
        return argv
    i = argv.index("--job")
    try:
        path = argv[i + 1]
    except IndexError:
        raise ValueError("--job needs a path") from None
    with open(path, "r", encoding="utf-8") as fh:
        job = json.load(fh)
    out = [str(job["command"])]
    args = job.get("args", {})
    positional = args.pop("name", None)
    if positional is not None:
        out.append(str(positional))
    for key, value in args.items():
        flag = "--" + key.replace("_", "-")
        if value is True:
            out.append(flag)
        elif value is False or value is None:
            continue
        elif isinstance(value, (dict, list)):
            out.extend([flag, json.dumps(value)])
        else:
            out.extend([flag, str(value)])
    return argv[:i] + out + argv[i + 2:]


def main(argv=None):
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    try:
        argv = _expand_job(argv)
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"error: bad job file: {exc}\n")
        return EXIT_INVALID
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_INVALID
    try:
        return args.func(args)
    except (BreakdownAtOrder, NotPositiveDefinite, NonRealResult, QuadratureFailure,
            DegenerateRatio, SingularSystem, SeriesDivergence) as exc:
        sys.stderr.write(f"numerical breakdown: {exc}\n")
        return EXIT_BREAKDOWN
    except (NegativeDensity, EmptyPeriod, DomainError, InsufficientMoments,
            LengthMismatch, NonDiagonalHamiltonian, CanonhamError) as exc:
        sys.stderr.write(f"invalid input: {exc}\n")
        return EXIT_INVALID
    except (ValueError, KeyError, TypeError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"invalid input: {exc}\n")
        return EXIT_INVALID
    except OSError as exc:
        sys.stderr.write(f"i/o failure: {exc}\n")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
