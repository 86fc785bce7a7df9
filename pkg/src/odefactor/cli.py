"""Command-line front end.

    odefactor list [--json]
    odefactor fit FAMILY [params] [--json]
    odefactor solve FAMILY [params] [--case N --root R --sign S] [--grid a:b:n]
                    [--tau0 X] [--format csv|json|svg] [--out PATH] [--tol T] [--standoff E]
    odefactor verify FAMILY [params] [--tau0 X] [--tol T] [--standoff E] [--perturb-g X] [--json]
    odefactor invert --A --B --C --a1 [--seed U] [--tau0 X] (--taus t1,t2,... | --grid a:b:n)

Exit codes: 0 success, 1 verification failure or internal error, 2 invalid
input or infeasible parameters.  Output is deterministic; ``LF_SEED`` is
reserved and currently unused.
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import math
import sys
from dataclasses import replace

import numpy as np

from . import svg
from .errors import DomainError, InvalidParam, OdeFactorError, OutOfRangeError
from .factorization import LienardForm, verify_factorization
from .families import (FAMILIES, ClosedFormSolution, DuffingVanDerPol, GeneralizedLienard, ModifiedEmden,
                       chandrasekar_case, emden_fit, lienard_implicit_case2)
from .numerics import (DEFAULT_RESIDUAL_TOL, DEFAULT_STANDOFF, GridSpec, invert_implicit, residual_scan,
                       track_closed_form)

ALIASES = {"bh": "burgers-huxley", "burgers_huxley": "burgers-huxley", "duffing": "dvp"}
PARAM_FLAGS = ("alpha", "beta", "gamma", "delta", "A", "B", "C", "a1", "E", "G", "mu", "seed")
CASE_COUNTS = {"emden": 2, "lienard": 2, "dvp": 1, "fisher": 2, "burgers-huxley": 2}
BRANCHES = {
    "emden": "case 1: root plus/minus; case 2: none (a1 free, default -1)",
    "lienard": "case 1: root plus/minus (sign of Delta); case 2: implicit relation",
    "dvp": "sign plus/minus",
    "fisher": "cases 1 and 2: sign plus/minus",
    "burgers-huxley": "cases 1 and 2: root plus/minus x sign plus/minus",
}
RK4_TOL = 1e-6
IDENTITY_TOL = 1e-12


def _num(x: float) -> str:
    return f"{x:.17g}"


def _jsonable(x):
    if isinstance(x, float) and not math.isfinite(x):
        return "inf" if x > 0 else "-inf" if x < 0 else "nan"
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, np.floating):
        return _jsonable(float(x))
    return x


def _dump(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2)


def build_family(name: str, ns: argparse.Namespace):
    name = ALIASES.get(name, name)
    if name not in FAMILIES:
        raise InvalidParam(f"unknown family {name!r}; choose from {', '.join(FAMILIES)}")
    cls = FAMILIES[name]
    kwargs = {}
    for f in dataclasses.fields(cls):
        if not f.init:
            continue
        val = getattr(ns, f.name, None)
        if val is None:
            if f.default is dataclasses.MISSING:
                raise InvalidParam(f"{name} requires --{f.name}")
            continue
        kwargs[f.name] = val
    return cls(**kwargs)


def family_params(fam) -> dict:
    return {f.name: getattr(fam, f.name) for f in dataclasses.fields(fam)}


# -- list ---------------------------------------------------------------------

def cmd_list(ns) -> int:
    rows = [{"name": cls.name, "title": cls.title, "params": list(cls.params),
             "constraints": cls.constraints, "cases": CASE_COUNTS[cls.name],
             "branches": BRANCHES[cls.name]} for cls in FAMILIES.values()]
    if ns.json:
        print(_dump(rows))
    else:
        for r in rows:
            print(f"{r['name']}: {r['title']}")
            print(f"  params: {', '.join(r['params'])}")
            print(f"  requires: {r['constraints']}")
            print(f"  cases: {r['cases']}  branches: {r['branches']}")
    return 0


# -- fit ----------------------------------------------------------------------

def fit_report(fam) -> list[dict]:
    if isinstance(fam, ModifiedEmden):
        emden_fit(fam.alpha, fam.beta)
    out, seen = [], set()
    for sol in fam.solutions():
        key = (sol.case, sol.root_branch)
        if key in seen:
            continue
        seen.add(key)
        out.append({
            "case": sol.case,
            "root": sol.root_branch,
            sol.param_name: sol.param,
            "values": [{"name": n, "value": v, "source": src} for n, v, src in sol.extras],
            "g": str(sol.target.g),
            "F": str(sol.target.F),
        })
    return out


def cmd_fit(ns) -> int:
    fam = build_family(ns.family, ns)
    report = fit_report(fam)
    if ns.json:
        print(_dump({"family": fam.name, "params": family_params(fam), "fits": report}))
        return 0
    print(f"{fam.name} {family_params(fam)}")
    for r in report:
        pname = "e1" if "e1" in r else "a1"
        root = f" root={r['root']}" if r["root"] else ""
        print(f"  case {r['case']}{root}: {pname} = {r[pname]:.15g}")
        for v in r["values"]:
            if v["name"] != pname:
                print(f"    {v['name']} = {v['value']:.15g}  [{v['source']}]")
        print(f"    g(u) = {r['g']}")
    return 0


# -- solve --------------------------------------------------------------------

def _select(fam, ns) -> list[ClosedFormSolution]:
    sols = fam.solutions(ns.tau0)
    if ns.case is not None:
        sols = [s for s in sols if s.case == ns.case]
    if ns.root is not None:
        sols = [s for s in sols if s.root_branch in (None, ns.root)]
    if ns.sign is not None:
        want = 1 if ns.sign == "plus" else -1
        sols = [s for s in sols if s.sign_branch in (None, want)]
    if not sols:
        raise InvalidParam("no feasible solution branch for the given selectors")
    return sols


def solution_rows(sol: ClosedFormSolution, taus) -> list[tuple[float, float, float, float]]:
    rows = []
    g, F = sol.target.g, sol.target.F
    for tau in taus:
        u, ud, udd = sol.state(float(tau))
        Fu = F(u)
        rows.append((float(tau), u, ud, (udd + g(u) * ud + Fu) / (1.0 + abs(Fu))))
    return rows


def cmd_solve(ns) -> int:
    fam = build_family(ns.family, ns)
    sols = _select(fam, ns)
    if ns.grid:
        grid = GridSpec.parse(ns.grid)
    else:
        grid = sols[0].windows(standoff=ns.standoff)[0]
    taus = grid.points()

    if ns.format == "svg":
        sol = next((s for s in sols if any(s.contains(t, ns.standoff) for t in taus)), None)
        if sol is None:
            raise DomainError(f"grid misses every validity domain: {[s.domain for s in sols]}")
        segments, run = [], []
        for t in taus:
            if sol.contains(t, ns.standoff):
                run.append((float(t), sol.u(t)))
            elif run:
                segments.append(run)
                run = []
        if run:
            segments.append(run)
        text = svg.render(segments, title=sol.label, singularities=sol.singularities)
        _emit(text, ns.out)
        print(f"solution: {sol.label}", file=sys.stderr)
        return 0

    sol = next((s for s in sols if all(s.contains(t, ns.standoff) for t in taus)), None)
    if sol is None:
        doms = "; ".join(f"{s.label}: {s.domain}" for s in sols)
        raise DomainError(f"grid [{grid.start}, {grid.end}] leaves the validity domain "
                          f"(standoff {ns.standoff}); domains: {doms}")
    rows = solution_rows(sol, taus)
    worst = max(abs(r[3]) for r in rows)
    if ns.format == "json":
        text = _dump({"family": fam.name, "params": family_params(fam), "solution": sol.label,
                      "domain": sol.domain, "singularities": sol.singularities,
                      "max_residual": worst, "tolerance": ns.tol,
                      "rows": [dict(zip(("tau", "u", "udot", "residual"), r)) for r in rows]}) + "\n"
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("tau", "u", "udot", "residual"))
        w.writerows([[_num(x) for x in r] for r in rows])
        text = buf.getvalue()
    _emit(text, ns.out)
    print(f"solution: {sol.label}; max |residual| = {worst:.3g}", file=sys.stderr)
    return 0 if worst <= ns.tol else 1


def _emit(text: str, path):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- verify -------------------------------------------------------------------

def _check(label, name, value, tol, **extra):
    return {"solution": label, "check": name, "value": value, "tolerance": tol,
            "passed": bool(value <= tol), **extra}


def verify_solution(sol: ClosedFormSolution, *, tol=DEFAULT_RESIDUAL_TOL, standoff=DEFAULT_STANDOFF,
                    rk4_tol=RK4_TOL, h=1e-3, span=5.0) -> list[dict]:
    checks = []
    for name, expected, got in sol.identities:
        checks.append(_check(sol.label, f"identification:{name}", abs(expected - got),
                             IDENTITY_TOL * max(1.0, abs(expected))))
    ok = verify_factorization(sol.target, sol.pair, IDENTITY_TOL)
    checks.append({"solution": sol.label, "check": "compose", "value": float(not ok),
                   "tolerance": 0.0, "passed": ok})
    for grid in sol.windows(standoff=standoff):
        rep = residual_scan(sol.target.g, sol.target.F, sol, grid, tol=tol, standoff=standoff)
        checks.append(_check(sol.label, "residual", rep.max_abs_relative, tol,
                             window=[grid.start, grid.end]))
    for a, b in sol.spans(span):
        dev, direction = track_closed_form(sol, (a, b), h, rk4_tol)
        checks.append(_check(sol.label, "rk4", dev, rk4_tol, window=[a, b], direction=direction))
    return checks


def verify_implicit(rel, n: int = 50) -> list[dict]:
    label = "lienard case 2 implicit"
    lo, hi = rel.bracket
    a = lo if math.isfinite(lo) else min(hi, rel.seed) - 10.0
    b = hi if math.isfinite(hi) else max(lo, rel.seed) + 10.0
    us = np.linspace(a, b, n + 2)[1:-1]
    worst_rt = worst_fd = 0.0
    for u in us:
        tau = rel.tau(u)
        worst_rt = max(worst_rt, abs(invert_implicit(rel, tau) - u))
        exact = rel.a1 * rel.F3(u)
        h = 1e-5 * abs(u / exact)
        fd = (invert_implicit(rel, tau + h) - invert_implicit(rel, tau - h)) / (2 * h)
        worst_fd = max(worst_fd, abs(fd - exact) / abs(exact))
    return [_check(label, "inversion-roundtrip", worst_rt, 1e-9),
            _check(label, "inversion-derivative", worst_fd, 1e-7)]


def run_verify(fam, *, tau0=0.0, tol=DEFAULT_RESIDUAL_TOL, standoff=DEFAULT_STANDOFF,
               perturb_g=0.0) -> dict:
    sols = fam.solutions(tau0)
    if not sols:
        raise InvalidParam(f"{fam.name}: no feasible solution branch for {family_params(fam)}")
    checks = []
    for sol in sols:
        if perturb_g:
            sol = replace(sol, target=LienardForm(sol.target.g + perturb_g, sol.target.F))
        checks += verify_solution(sol, tol=tol, standoff=standoff)
    if isinstance(fam, GeneralizedLienard) and fam.A != 0:
        checks += verify_implicit(fam.implicit(tau0))
    report = {"family": fam.name, "params": family_params(fam), "perturb_g": perturb_g,
              "solutions": [s.label for s in sols], "checks": checks,
              "passed": all(c["passed"] for c in checks)}
    if isinstance(fam, DuffingVanDerPol):
        report["chandrasekar_case"] = chandrasekar_case(fam.E, fam.A)
    return report


def cmd_verify(ns) -> int:
    fam = build_family(ns.family, ns)
    report = run_verify(fam, tau0=ns.tau0, tol=ns.tol, standoff=ns.standoff, perturb_g=ns.perturb_g)
    if ns.json:
        print(_dump(report))
    else:
        print(f"{fam.name} {family_params(fam)}")
        if "chandrasekar_case" in report:
            print(f"  chandrasekar case (A = 3/E^2): {report['chandrasekar_case']}")
        for c in report["checks"]:
            mark = "PASS" if c["passed"] else "FAIL"
            print(f"  [{mark}] {c['solution']:<40} {c['check']:<24} {c['value']:.3g} (tol {c['tolerance']:.3g})")
        print("all checks passed" if report["passed"] else "verification FAILED")
    return 0 if report["passed"] else 1


# -- invert -------------------------------------------------------------------

def cmd_invert(ns) -> int:
    for k in ("A", "B", "C", "a1"):
        if getattr(ns, k) is None:
            raise InvalidParam(f"invert requires --{k}")
    rel = lienard_implicit_case2(ns.A, ns.B, ns.C, ns.a1, ns.tau0,
                                 1.0 if ns.seed is None else ns.seed)
    if ns.taus:
        try:
            taus = [float(t) for t in ns.taus.split(",")]
        except ValueError as exc:
            raise InvalidParam(f"bad --taus {ns.taus!r}") from exc
    elif ns.grid:
        taus = GridSpec.parse(ns.grid).points().tolist()
    else:
        raise InvalidParam("invert requires --taus or --grid")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("tau", "u", "roundtrip", "error"))
    for tau in taus:
        try:
            u = invert_implicit(rel, tau)
            w.writerow((_num(tau), _num(u), _num(abs(rel.tau(u) - tau)), ""))
        except OutOfRangeError:
            w.writerow((_num(tau), "", "", "out-of-range"))
    _emit(buf.getvalue(), ns.out)
    return 0


# -- entry point --------------------------------------------------------------

def _family_args(p: argparse.ArgumentParser, positional: bool = True):
    if positional:
        p.add_argument("family", help="emden | lienard | dvp | fisher | burgers-huxley")
    for name in PARAM_FLAGS:
        p.add_argument(f"--{name}", type=float, default=None)
    p.add_argument("--tau0", type=float, default=0.0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="odefactor", description=__doc__.splitlines()[0] if __doc__ else None)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("list", help="list equation families")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_list)

    p = sub.add_parser("fit", help="fitting parameters for every branch")
    _family_args(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("solve", help="emit a solution curve")
    _family_args(p)
    p.add_argument("--case", type=int, choices=(1, 2))
    p.add_argument("--root", choices=("plus", "minus"))
    p.add_argument("--sign", choices=("plus", "minus"))
    p.add_argument("--grid", help="a:b:n")
    p.add_argument("--format", choices=("csv", "json", "svg"), default="csv")
    p.add_argument("--out")
    p.add_argument("--tol", type=float, default=DEFAULT_RESIDUAL_TOL)
    p.add_argument("--standoff", type=float, default=DEFAULT_STANDOFF)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="run all checks for every feasible branch")
    _family_args(p)
    p.add_argument("--tol", type=float, default=DEFAULT_RESIDUAL_TOL)
    p.add_argument("--standoff", type=float, default=DEFAULT_STANDOFF)
    p.add_argument("--perturb-g", type=float, default=0.0,
                   help="add a constant to the target damping g (sensitivity check)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("invert", help="invert the implicit Lienard case-2 relation")
    _family_args(p, positional=False)
    p.add_argument("--taus", help="comma-separated tau values")
    p.add_argument("--grid", help="a:b:n")
    p.add_argument("--out")
    p.set_defaults(func=cmd_invert)
    return parser


def _glue_negative_values(argv):
    """Let ``--grid -10:10:401`` and ``--taus -1,2`` through argparse."""
    out, it = [], iter(argv)
    for tok in it:
        if tok in ("--grid", "--taus"):
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    ns = build_parser().parse_args(_glue_negative_values(argv))
    for flag in ("tol", "standoff"):
        if getattr(ns, flag, 1.0) <= 0:
            print(f"error: --{flag} must be positive", file=sys.stderr)
            return 2
    try:
        return ns.func(ns)
    except (OdeFactorError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {exc!r}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
