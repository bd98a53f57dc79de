"""Command-line surface.

Subcommands: family, verify, classify, solve, reduce, limit, nonexistence.
Every run echoes its configuration into the JSON output so results are
reproducible from the file alone.  Exit codes: 0 ok, 2 domain/usage error,
3 solver non-convergence where a result was required.

a, b, c, d accept exact rationals ("-8/3"); lam, sigma, m accept floats.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction

# lets "-8/3" pass as an option value rather than being read as a flag
_NEGATIVE_VALUE = re.compile(r"^-\d+(/\d+)?$|^-\d*\.\d+$")

from . import __version__
from .cnexpr import build_coefficient_system
from .elliptic import complete_k
from .errors import AbcdWavesError, ConstraintError, DomainError, UsageError
from .families import (FAMILY_SET_LABELS, ParameterSet, SolutionParams,
                       build_family, check_physical_constraint)
from .reduction import classify_ansatz, verify_termination
from .solver import (NewtonOptions, multistart, pin_and_square,
                     reproduce_nonexistence, solve_newton)
from .verifier import limit_consistency, ode_residual, periodicity_check

EXIT_OK = 0
EXIT_DOMAIN = 2
EXIT_NO_CONVERGENCE = 3


class _SubParser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._negative_number_matcher = _NEGATIVE_VALUE


def _rat(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from exc


_num = _rat   # lam/sigma/m flags: accept "3/4" as well as "0.75"


def _add_abcd(parser, required=False):
    for name in "abcd":
        parser.add_argument(f"--{name}", type=_rat, required=required,
                            default=Fraction(0), help=f"coefficient {name} (rational, e.g. -8/3)")


def _params_from(args) -> ParameterSet:
    return ParameterSet.make(args.a, args.b, args.c, args.d)


# ---------------------------------------------------------------- outputs
def write_csv(path: str, rows, header="xi,eta,w"):
    with open(path, "w", newline="") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(format(v, ".17g") for v in row) + "\n")


def _svg_path(points, x_min, x_max, y_min, y_max, width, height, pad):
    sx = (width - 2 * pad) / (x_max - x_min)
    sy = (height - 2 * pad) / (y_max - y_min) if y_max > y_min else 1.0
    coords = []
    for x, y in points:
        px = pad + (x - x_min) * sx
        py = height - pad - (y - y_min) * sy
        coords.append(f"{px:.2f},{py:.2f}")
    return "M" + " L".join(coords)


def write_svg(path: str, xs, etas, ws, title=""):
    """Dependency-free two-curve plot: eta in blue, w in green."""
    width, height, pad = 800, 500, 50
    x_min, x_max = min(xs), max(xs)
    y_all = list(etas) + list(ws)
    y_min, y_max = min(y_all), max(y_all)
    if y_max == y_min:
        y_min, y_max = y_min - 1.0, y_max + 1.0
    margin = 0.05 * (y_max - y_min)
    y_min, y_max = y_min - margin, y_max + margin
    p_eta = _svg_path(zip(xs, etas), x_min, x_max, y_min, y_max, width, height, pad)
    p_w = _svg_path(zip(xs, ws), x_min, x_max, y_min, y_max, width, height, pad)
    ticks = []
    for i in range(5):
        xv = x_min + (x_max - x_min) * i / 4
        px = pad + (width - 2 * pad) * i / 4
        ticks.append(f'<line x1="{px:.1f}" y1="{height-pad}" x2="{px:.1f}" '
                     f'y2="{height-pad+6}" stroke="black"/>'
                     f'<text x="{px:.1f}" y="{height-pad+20}" font-size="12" '
                     f'text-anchor="middle">{xv:.3g}</text>')
        yv = y_min + (y_max - y_min) * i / 4
        py = height - pad - (height - 2 * pad) * i / 4
        ticks.append(f'<line x1="{pad-6}" y1="{py:.1f}" x2="{pad}" y2="{py:.1f}" '
                     f'stroke="black"/>'
                     f'<text x="{pad-10}" y="{py+4:.1f}" font-size="12" '
                     f'text-anchor="end">{yv:.3g}</text>')
    svg = f'''<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {width} {height}">
<rect width="{width}" height="{height}" fill="white"/>
<text x="{width/2}" y="25" font-size="14" text-anchor="middle">{title}</text>
<line x1="{pad}" y1="{height-pad}" x2="{width-pad}" y2="{height-pad}" stroke="black"/>
<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height-pad}" stroke="black"/>
{''.join(ticks)}
<path d="{p_eta}" fill="none" stroke="blue" stroke-width="1.5"/>
<path d="{p_w}" fill="none" stroke="green" stroke-width="1.5"/>
<text x="{width-pad-60}" y="{pad+10}" font-size="13" fill="blue">eta</text>
<text x="{width-pad-60}" y="{pad+28}" font-size="13" fill="green">w</text>
</svg>
'''
    with open(path, "w") as fh:
        fh.write(svg)


def _json_default(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    raise TypeError(f"not JSON serializable: {obj!r}")


def _dumps(obj, **kw):
    return json.dumps(obj, default=_json_default, **kw)


def _echo_config(args, command):
    cfg = {"command": command, "version": __version__}
    for key, val in sorted(vars(args).items()):
        if key in ("func",):
            continue
        if isinstance(val, Fraction):
            val = str(val)
        elif isinstance(val, (list, tuple)):
            val = [str(v) if isinstance(v, Fraction) else v for v in val]
        cfg[key] = val
    return cfg


# ---------------------------------------------------------------- commands
def cmd_family(args) -> int:
    p = _params_from(args)
    if args.check_physical:
        try:
            theta = check_physical_constraint(p)
            print(f"physical constraint ok: theta = {theta:.12g}")
        except ConstraintError as exc:
            print(f"warning: physical constraint violated: {exc}", file=sys.stderr)

    tag = FAMILY_SET_LABELS[args.set]
    if tag == "S411":
        sol = build_family(tag, p, args.m, args.tau1, args.tau2)
    elif tag == "S412":
        sol = build_family(tag, p, args.lam, args.sigma, args.m, args.sign)
    elif tag in ("S421", "S422"):
        sol = build_family(tag, p, args.lam, args.sigma, args.m)
    else:
        sol = build_family(tag, args.d, args.lam, args.sigma, args.m)

    report = ode_residual(sol, p, args.samples)
    if sol.m < 1.0:
        period = 4.0 * complete_k(sol.m) / sol.lam
        span = args.periods * period
    else:
        span = 24.0 / sol.lam
    n_rows = max(args.samples, 2)
    xs = [span * i / (n_rows - 1) for i in range(n_rows)]
    etas = [sol.eval_eta(x) for x in xs]
    ws = [sol.eval_w(x) for x in xs]

    out = args.out or f"family_{args.set.replace('.', '_')}"
    payload = {
        "run_config": _echo_config(args, "family"),
        "solution": sol.to_dict(),
        "residual": report.to_dict(),
    }
    with open(out + ".json", "w") as fh:
        fh.write(_dumps(payload, indent=2))
    write_csv(out + ".csv", zip(xs, etas, ws))
    write_svg(out + ".svg", xs, etas, ws,
              title=f"family {args.set} (relative residual {report.relative:.2e})")
    print(f"family {args.set}: wrote {out}.json, {out}.csv, {out}.svg")
    print(f"relative residual: {report.relative:.3e}")
    return EXIT_OK


def _load_solution(path):
    with open(path) as fh:
        payload = json.load(fh)
    if "solution" in payload:
        sol = SolutionParams.from_dict(payload["solution"])
        cfg = payload.get("run_config", {})
    else:
        sol = SolutionParams.from_dict(payload)
        cfg = {}
    return sol, cfg


def cmd_verify(args) -> int:
    sol, cfg = _load_solution(args.input)
    p = ParameterSet.make(
        args.a if args.a is not None else Fraction(cfg.get("a", 0)),
        args.b if args.b is not None else Fraction(cfg.get("b", 0)),
        args.c if args.c is not None else Fraction(cfg.get("c", 0)),
        args.d if args.d is not None else Fraction(cfg.get("d", 0)),
    )
    report = ode_residual(sol, p, args.samples)
    out = {"run_config": _echo_config(args, "verify"), "residual": report.to_dict()}
    if sol.m < 1.0:
        out["periodicity"] = periodicity_check(sol).to_dict()
    print(_dumps(out, indent=2))
    return EXIT_OK


def cmd_classify(args) -> int:
    shape = classify_ansatz(_params_from(args))
    out = {
        "run_config": _echo_config(args, "classify"),
        "shape": shape.value,
        "max_eta_degree": shape.max_eta_degree,
        "max_w_degree": shape.max_w_degree,
    }
    print(_dumps(out, indent=2))
    return EXIT_OK


_SYSTEMS = {
    "coeffs1": dict(n_eta=2, n_w=2, params=None),
    "coeffs2": dict(n_eta=4, n_w=2, params={"c": 0}),
    "coeffs2red": dict(n_eta=4, n_w=2, params={"c": 0},
                       extra_pins={"j1": 0, "j3": 0, "k1": 0}),
}


def cmd_solve(args) -> int:
    entry = _SYSTEMS[args.system]
    params = dict(entry["params"] or {})
    for name in "abcd":
        val = getattr(args, name)
        if name in params and Fraction(val) != Fraction(params[name]):
            raise DomainError(f"system {args.system} fixes {name} = {params[name]}")
        params.setdefault(name, val)
    system = build_coefficient_system(entry["n_eta"], entry["n_w"], params=params)

    pins = dict(entry.get("extra_pins", {}))
    if args.pin:
        for chunk in args.pin.split(","):
            key, _, val = chunk.partition("=")
            key = key.strip()
            if key == "lambda":
                key = "lam"
            pins[key] = Fraction(val)
    sysn = pin_and_square(system, pins)

    if args.seed_from:
        sol, _ = _load_solution(args.seed_from)
        seed_map = sol.coefficient_map()
        missing = [u for u in sysn.unknowns if u not in seed_map]
        if missing:
            raise UsageError(f"seed file does not cover unknowns {missing}")
        result = solve_newton(sysn, sysn.vector_from_map(seed_map))
        out = {
            "run_config": _echo_config(args, "solve"),
            "unknowns": sysn.unknowns,
            "status": result.status,
            "iterations": result.iterations,
            "hinf": result.hinf,
            "x": {u: float(v) for u, v in zip(sysn.unknowns, result.x)},
        }
        print(_dumps(out, indent=2))
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(_dumps(out, indent=2))
        return EXIT_OK if result.converged else EXIT_NO_CONVERGENCE

    branch_set = multistart(sysn, args.starts, seed_rng=args.seed,
                            opts=NewtonOptions(max_iter=args.max_iter))
    out = {"run_config": _echo_config(args, "solve"), "unknowns": sysn.unknowns,
           "branches": branch_set.to_dict()}
    nontrivial = branch_set.nontrivial()
    print(f"{args.system}: {branch_set.n_converged}/{args.starts} starts converged, "
          f"{len(branch_set.roots)} distinct roots, "
          f"{len(nontrivial)} non-trivial")
    for rec in nontrivial:
        vals = ", ".join(f"{k}={v:.8g}" for k, v in rec.values.items())
        print(f"  [{rec.classification}] {vals} (hits {rec.hits}, |h|_inf {rec.hinf:.2e})")
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(_dumps(out, indent=2))
        print(f"wrote {args.out}")
    if args.require_nontrivial and not nontrivial:
        print("no non-trivial root found", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    return EXIT_OK


def cmd_reduce(args) -> int:
    if args.case:
        report = verify_termination(case=args.case.replace("-", "_"),
                                    n_max=args.nmax)
    else:
        report = verify_termination(_params_from(args), args.nmax)
    out = {"run_config": _echo_config(args, "reduce"), **report.to_dict()}
    print(_dumps(out, indent=2))
    return EXIT_OK


def cmd_limit(args) -> int:
    kind = args.kind.replace("-", "_")
    if kind == "c_to_zero":
        table = limit_consistency(kind, a=args.a, b=args.b, d=args.d,
                                  lam=args.lam, sigma=args.sigma, m=args.m)
    elif kind == "a_to_zero":
        table = limit_consistency(kind, b=args.b, d=args.d, lam=args.lam,
                                  sigma=args.sigma, m=args.m)
    else:
        p = _params_from(args)
        tag = FAMILY_SET_LABELS[args.set]
        if tag == "S412":
            table = limit_consistency(kind, family=tag, args=(p,),
                                      lam=args.lam, sigma=args.sigma,
                                      sign=args.sign)
        elif tag in ("S421", "S422"):
            table = limit_consistency(kind, family=tag, args=(p,),
                                      lam=args.lam, sigma=args.sigma)
        elif tag == "S43":
            table = limit_consistency(kind, family=tag, args=(args.d,),
                                      lam=args.lam, sigma=args.sigma)
        else:
            raise UsageError("m->1 limit via this command supports sets "
                             "4.1.2, 4.2.1, 4.2.2 and 4.3")
    out = {"run_config": _echo_config(args, "limit"), **table.to_dict()}
    print(_dumps(out, indent=2))
    return EXIT_OK


def cmd_nonexistence(args) -> int:
    grid = []
    for a in args.grid_a:
        for b in args.grid_b:
            for d in args.grid_d:
                grid.append({"a": a, "b": b, "d": d, "lam": args.lam,
                             "m": args.m, "sigma": args.sigma})
    report = reproduce_nonexistence(args.var, grid, value=args.value,
                                    n_starts=args.starts, seed=args.seed)
    summary = {
        "run_config": _echo_config(args, "nonexistence"),
        "constrained": report.constrained,
        "value": report.value,
        "delta": report.delta,
        "sigma_free": report.sigma_free,
        "grid_points": len(report.points),
        "total_roots": report.total_roots,
        "upheld": report.upheld,
        "counterexamples": report.counterexamples,
    }
    print(_dumps(summary, indent=2))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(_dumps({"run_config": summary["run_config"],
                             **report.to_dict()}, indent=2))
        print(f"wrote {args.out}")
    if not report.upheld:
        print("counterexample found; see report", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="abcdwaves",
        description="Exact cnoidal traveling-wave solutions of the "
                    "abcd-Boussinesq system")
    parser._negative_number_matcher = _NEGATIVE_VALUE
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_SubParser)

    fam = sub.add_parser("family", help="construct a closed-form solution family")
    fam.add_argument("--set", required=True, choices=sorted(FAMILY_SET_LABELS),
                     help="solution set label")
    _add_abcd(fam)
    fam.add_argument("--m", type=_num, required=True)
    fam.add_argument("--lambda", dest="lam", type=_num, default=1.0)
    fam.add_argument("--sigma", type=_num, default=1.0)
    fam.add_argument("--tau1", type=int, choices=(1, -1), default=1)
    fam.add_argument("--tau2", type=int, choices=(1, -1), default=1)
    fam.add_argument("--sign", choices=("top", "bottom"), default="top")
    fam.add_argument("--periods", type=_num, default=3.0)
    fam.add_argument("--samples", type=int, default=1024)
    fam.add_argument("--out", default=None)
    fam.add_argument("--check-physical", action="store_true")
    fam.set_defaults(func=cmd_family)

    ver = sub.add_parser("verify", help="ODE residual of a stored solution")
    ver.add_argument("--input", required=True)
    for name in "abcd":
        ver.add_argument(f"--{name}", type=_rat, default=None)
    ver.add_argument("--samples", type=int, default=1024)
    ver.set_defaults(func=cmd_verify)

    cla = sub.add_parser("classify", help="ansatz shape for given (a,b,c,d)")
    _add_abcd(cla)
    cla.set_defaults(func=cmd_classify)

    sol = sub.add_parser("solve", help="multistart rediscovery of branches")
    sol.add_argument("--system", choices=sorted(_SYSTEMS), default="coeffs1")
    _add_abcd(sol)
    sol.add_argument("--pin", default="",
                     help="comma list var=value (rationals), e.g. m=3/4,lambda=1")
    sol.add_argument("--starts", type=int, default=500)
    sol.add_argument("--seed", type=int, default=0)
    sol.add_argument("--max-iter", type=int, default=200)
    sol.add_argument("--seed-from", default=None,
                     help="solution JSON used as the single Newton seed")
    sol.add_argument("--require-nontrivial", action="store_true")
    sol.add_argument("--out", default=None)
    sol.set_defaults(func=cmd_solve)

    red = sub.add_parser("reduce", help="verify series-termination chains")
    red.add_argument("--case", choices=("c-nonzero", "c-zero"), default=None)
    _add_abcd(red)
    red.add_argument("--nmax", type=int, default=5)
    red.set_defaults(func=cmd_reduce)

    lim = sub.add_parser("limit", help="limit-consistency tables")
    lim.add_argument("--kind", required=True,
                     choices=("c-to-zero", "a-to-zero", "m-to-one"))
    _add_abcd(lim)
    lim.add_argument("--set", default="4.1.2", choices=sorted(FAMILY_SET_LABELS))
    lim.add_argument("--lambda", dest="lam", type=_num, default=1.0)
    lim.add_argument("--sigma", type=_num, default=1.0)
    lim.add_argument("--m", type=_num, default=0.5)
    lim.add_argument("--sign", choices=("top", "bottom"), default="top")
    lim.set_defaults(func=cmd_limit)

    non = sub.add_parser("nonexistence",
                         help="sweep for roots with a coefficient pinned off zero")
    non.add_argument("--var", required=True, choices=("j1", "j3", "k1"))
    non.add_argument("--value", type=_num, default=0.1)
    non.add_argument("--grid-a", type=_rat, nargs="+", required=True)
    non.add_argument("--grid-b", type=_rat, nargs="+", required=True)
    non.add_argument("--grid-d", type=_rat, nargs="+", required=True)
    non.add_argument("--lambda", dest="lam", type=_num, default=1.0)
    non.add_argument("--m", type=_num, default=0.5)
    non.add_argument("--sigma", type=_num, default=1.0)
    non.add_argument("--starts", type=int, default=500)
    non.add_argument("--seed", type=int, default=0)
    non.add_argument("--out", default=None)
    non.set_defaults(func=cmd_nonexistence)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DomainError, ConstraintError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except AbcdWavesError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
