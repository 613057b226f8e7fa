"""Command line front end: ``adict run FILE`` and ``adict corpus``.

Exit codes: 0 every verify task passed, 1 some verification failed,
2 a task was aborted by a resource bound, 3 the problem file is invalid.
"""

import argparse
import json
import signal
import sys
import time
from importlib import resources
from pathlib import Path

from . import __version__
from .complexes import BoundedComplex
from .derived import (
    AdicPair,
    llambda,
    rgamma,
    verify_completion_lemmas,
    verify_formulas,
    verify_gm,
    verify_mgm,
)
from .groebner import ResourceLimit, set_gb_step_limit
from .problem import ProblemError, build, parse
from .towers import DegreeWindow

EXIT_PASS, EXIT_FAIL, EXIT_ABORT, EXIT_INVALID = 0, 1, 2, 3


class TaskTimeout(Exception):
    pass


class TaskContext:
    """A task statement with command line overrides applied."""

    def __init__(self, ws, stmt, overrides):
        self.ws = ws
        self.stmt = stmt
        self.over = overrides

    def arg(self, key, default=None):
        if self.over.get(key) is not None:
            return self.over[key]
        return self.stmt.get(key, default)

    def window(self, default=None):
        w = self.arg("window", default)
        return None if w is None else tuple(w)

    def pair(self, key="pair"):
        R, I = self.ws.pair(self.stmt.get(key))
        return AdicPair(R, I.gens, T=self.arg("T", 6), J=self.arg("J", 6), window=self.window())

    def module(self, key="module"):
        name = self.stmt.get(key)
        if name is None:
            cname = self.stmt.get("complex")
            if key == "module" and cname is not None:
                return self.ws.complexes[cname]
            return None
        return self.ws.module(name)


def _complex_diagnostic(X: BoundedComplex):
    for i, cols in X.certificate().items():
        if any(cols):
            return f"d^{i + 1} o d^{i} != 0"
    return None


def _verdict(report):
    return "pass" if report["pass"] else "fail"


# ------------------------------------------------------------------ tasks

def t_check_complex(ctx):
    X = ctx.ws.complexes[ctx.stmt.get("complex")]
    diag = _complex_diagnostic(X)
    return ("fail" if diag else "pass"), {"ranks": X.ranks(), "diagnostic": diag}


def t_groebner(ctx):
    from .rings import groebner_basis

    R, I = ctx.ws.pair(ctx.stmt.get("pair"))
    return "computed", {"basis": [g.to_str() for g in groebner_basis(I)]}


def t_resolution(ctx):
    from .complexes import free_resolution

    M = ctx.module()
    F, _ = free_resolution(M, ctx.arg("length", 3))
    return "computed", {"ranks": {str(i): F[i].rank for i in range(F.lo, F.hi + 1)},
                        "shifts": {str(i): list(F[i].shifts) for i in range(F.lo, F.hi + 1)}}


def _object_report(obj, window):
    rep = obj.report(window)
    out = {}
    for i, rows in rep.items():
        out[str(i)] = [{"degree": r["degree"], "dim": r.get("dim", r.get("lim")), "lim1": r.get("lim1"),
                        "stabilized_at": r["stabilized_at"]} for r in rows]
    return out


def t_rgamma(ctx):
    pair = ctx.pair()
    obj = rgamma(pair, ctx.module(), route=ctx.stmt.get("route", "koszul"))
    return "computed", {"window": pair.window.as_list(), "cohomology": _object_report(obj, pair.window)}


def t_llambda(ctx):
    pair = ctx.pair()
    obj = llambda(pair, ctx.module(), route=ctx.stmt.get("route", "telescope"))
    return "computed", {"window": pair.window.as_list(), "cohomology": _object_report(obj, pair.window)}


def t_verify_formulas(ctx):
    r = verify_formulas(ctx.pair(), ctx.module())
    return _verdict(r), r


def t_verify_mgm(ctx):
    r = verify_mgm(ctx.pair(), ctx.module())
    return _verdict(r), r


def t_verify_gm(ctx):
    r = verify_gm(ctx.pair(), ctx.module(), ctx.module("module2"))
    return _verdict(r), r


def t_verify_completion_lemmas(ctx):
    swap = None
    if ctx.stmt.get("swap_ring") is not None:
        swap = (ctx.ws.rings[ctx.stmt.get("swap_ring")], ctx.ws.module(ctx.stmt.get("swap_module")))
    r = verify_completion_lemmas(ctx.pair(), ctx.module(), swap=swap)
    return _verdict(r), r


def t_certify(ctx):
    from .wpr import ConcreteRing, TensorOverField, certify

    att = frozenset(ctx.stmt.get("attest", ()))
    R, I = ctx.ws.pair(ctx.stmt.get("pair"))
    d = ConcreteRing(R, I, att)
    if ctx.stmt.get("with") is not None:
        R2, I2 = ctx.ws.pair(ctx.stmt.get("with"))
        d = TensorOverField(d, ConcreteRing(R2, I2, att))
    cert = certify(d)
    js = cert.to_json()
    return ("pass" if cert.ok else "fail"), js


def _env(ctx):
    from .hochschild import enveloping

    R, I = ctx.ws.pair(ctx.stmt.get("pair"))
    return enveloping(R, I.gens)


def _hh_window(ctx):
    return ctx.window((-3, 3))


def t_hh(ctx):
    from .hochschild import hh_discrete

    env = _env(ctx)
    tab = hh_discrete(env, ctx.module(), ctx.arg("n_max", 3), window=_hh_window(ctx))
    return "computed", tab.to_json()


def t_adic_hh(ctx):
    from .hochschild import CompletedEnveloping, adic_hh

    env = _env(ctx)
    n_max = ctx.arg("n_max", 3)
    tab, _ = adic_hh(CompletedEnveloping(env, ctx.arg("T", 6), n_max + 1), ctx.module(), n_max, _hh_window(ctx))
    return "computed", tab.to_json()


def t_complete_dhc(ctx):
    from .hochschild import complete_dhc

    tab, _ = complete_dhc(_env(ctx), ctx.module(), ctx.module("module2"), ctx.arg("n_max", 2),
                          ctx.arg("T", 6), ctx.arg("J", 6), _hh_window(ctx))
    return "computed", tab.to_json()


def t_torsion_dhc(ctx):
    from .hochschild import torsion_dhc

    tab, _ = torsion_dhc(_env(ctx), ctx.module(), ctx.module("module2"), ctx.arg("n_max", 2),
                         ctx.arg("T", 6), ctx.arg("J", 6), _hh_window(ctx))
    return "computed", tab.to_json()


def t_hh_homology(ctx):
    from .hochschild import hh_homology

    tab = hh_homology(_env(ctx), ctx.module(), ctx.module("module2"), ctx.arg("n_max", 3), _hh_window(ctx),
                      ctx.arg("top"))
    return "computed", tab.to_json()


def t_torsion_hh_homology(ctx):
    from .hochschild import torsion_hh_homology

    tab = torsion_hh_homology(_env(ctx), ctx.module(), ctx.module("module2"), ctx.arg("n_max", 3),
                              ctx.arg("T", 6), _hh_window(ctx), ctx.arg("top"))
    return "computed", tab.to_json()


def t_verify_comparison(ctx):
    from .hochschild import adic_window_stages, verify_comparison

    w = ctx.window((0, 3))
    n_max = ctx.arg("n_max", 3)
    r = verify_comparison(_env(ctx), ctx.module(), n_max, ctx.arg("T") or adic_window_stages(w, n_max), w)
    return _verdict(r), r


def t_verify_cformula(ctx):
    from .hochschild import verify_cformula

    r = verify_cformula(_env(ctx), ctx.module(), ctx.module("module2"), ctx.arg("n_max", 2), ctx.arg("T"),
                        ctx.window((-2, 2)))
    return _verdict(r), r


def t_verify_domain_of_def(ctx):
    from .hochschild import verify_domain_of_def

    r = verify_domain_of_def(_env(ctx), ctx.module(), ctx.module("module2"), ctx.arg("T"), ctx.window((-2, 2)),
                             ctx.arg("n_max", 2))
    return _verdict(r), r


def t_vdb_check(ctx):
    from .hochschild import vdb_check

    r = vdb_check(ctx.arg("m", 0), ctx.arg("n", 1), ctx.window((-2, 2)), ctx.arg("T"), ctx.ws.field)
    return _verdict(r), r


def t_verify_tformula_homology(ctx):
    from .hochschild import verify_tformula_homology

    r = verify_tformula_homology(_env(ctx), ctx.module(), ctx.module("module2"), ctx.arg("n_max", 3),
                                 ctx.arg("T"), ctx.window((-3, 3)), ctx.arg("top"))
    return _verdict(r), r


TASKS = {
    "check_complex": t_check_complex,
    "groebner": t_groebner,
    "resolution": t_resolution,
    "rgamma": t_rgamma,
    "llambda": t_llambda,
    "verify_formulas": t_verify_formulas,
    "verify_mgm": t_verify_mgm,
    "verify_gm": t_verify_gm,
    "verify_completion_lemmas": t_verify_completion_lemmas,
    "certify": t_certify,
    "hh": t_hh,
    "adic_hh": t_adic_hh,
    "complete_dhc": t_complete_dhc,
    "torsion_dhc": t_torsion_dhc,
    "hh_homology": t_hh_homology,
    "torsion_hh_homology": t_torsion_hh_homology,
    "verify_comparison": t_verify_comparison,
    "verify_cformula": t_verify_cformula,
    "verify_domain_of_def": t_verify_domain_of_def,
    "vdb_check": t_vdb_check,
    "verify_tformula_homology": t_verify_tformula_homology,
}


# ------------------------------------------------------------------- run

def _alarm(signum, frame):
    raise TaskTimeout()


def _run_task(ws, stmt, overrides, max_seconds):
    ctx = TaskContext(ws, stmt, overrides)
    cname = stmt.get("complex")
    if cname is not None:
        diag = _complex_diagnostic(ws.complexes[cname])
        if diag is not None:
            return "fail", {"diagnostic": f"complex {cname}: {diag}"}
    use_alarm = max_seconds is not None and hasattr(signal, "SIGALRM")
    if use_alarm:
        old = signal.signal(signal.SIGALRM, _alarm)
        signal.setitimer(signal.ITIMER_REAL, max_seconds)
    try:
        return TASKS[stmt.name](ctx)
    except TaskTimeout:
        return "aborted", {"reason": f"exceeded {max_seconds} s"}
    except ResourceLimit as e:
        return "aborted", {"reason": str(e)}
    finally:
        if use_alarm:
            signal.setitimer(signal.ITIMER_REAL, 0)
            signal.signal(signal.SIGALRM, old)


_PM = ("pair", "module|complex")
_PMM = ("pair", "module|complex", "module2")
REQUIRED = {
    "check_complex": ("complex",), "groebner": ("pair",), "resolution": ("module",),
    "rgamma": _PM, "llambda": _PM, "verify_formulas": _PM, "verify_mgm": _PM, "verify_gm": _PMM,
    "verify_completion_lemmas": _PM, "certify": ("pair",), "hh": _PM, "adic_hh": _PM,
    "complete_dhc": _PMM, "torsion_dhc": _PMM, "hh_homology": _PMM, "torsion_hh_homology": _PMM,
    "verify_comparison": _PM, "verify_cformula": _PMM, "verify_domain_of_def": _PMM,
    "vdb_check": (), "verify_tformula_homology": _PMM,
}
ROUTES = {"rgamma": ("koszul", "telescope", "ext"), "llambda": ("telescope", "koszul", "adic")}


def validate(pf):
    diags = []
    for s in pf.tasks:
        if s.name not in TASKS:
            diags.append((s.line, 1, f"unknown task {s.name!r}"))
            continue
        for need in REQUIRED[s.name]:
            if all(s.get(k) is None for k in need.split("|")):
                diags.append((s.line, 1, f"task {s.name} needs {need.replace('|', ' or ')}"))
        route = s.get("route")
        if route is not None and route not in ROUTES.get(s.name, ()):
            allowed = ", ".join(ROUTES.get(s.name, ())) or "no routes"
            diags.append((s.line, 1, f"task {s.name} route {route!r} not one of: {allowed}"))
    if diags:
        raise ProblemError(diags)


def run_problem(text, overrides=None, max_seconds=None, max_gb_steps=None):
    """Parse, build and run a problem; returns (report dict, exit code).

    Wall-times live under the top-level "timing" key, so the rest of the
    report is a deterministic function of the problem text and version.
    """
    overrides = overrides or {}
    try:
        pf = parse(text)
        validate(pf)
        ws = build(pf)
    except ProblemError as e:
        return {"tool": "adict", "version": __version__, "status": "invalid",
                "diagnostics": [{"line": l, "column": c, "message": m} for l, c, m in e.diagnostics]}, EXIT_INVALID
    set_gb_step_limit(max_gb_steps)
    results, timing = [], {}
    try:
        for k, stmt in enumerate(pf.tasks):
            t0 = time.perf_counter()
            status, result = _run_task(ws, stmt, overrides, max_seconds)
            timing[str(k)] = round(time.perf_counter() - t0, 3)
            results.append({"index": k, "task": stmt.name, "status": status, "result": result})
    finally:
        set_gb_step_limit(None)
    statuses = {r["status"] for r in results}
    if "aborted" in statuses:
        code = EXIT_ABORT
    elif "fail" in statuses:
        code = EXIT_FAIL
    else:
        code = EXIT_PASS
    report = {
        "tool": "adict",
        "version": __version__,
        "problem": pf.digest(),
        "expect": pf.expect,
        "tasks": results,
        "pass": code == EXIT_PASS,
        "timing": timing,
    }
    return report, code


def dumps(report):
    return json.dumps(report, sort_keys=True, indent=1, default=str)


def strip_timing(report):
    """A copy of a report without wall-time fields."""
    if isinstance(report, dict):
        return {k: strip_timing(v) for k, v in report.items() if k not in ("timing", "seconds")}
    if isinstance(report, list):
        return [strip_timing(v) for v in report]
    return report


# ----------------------------------------------------------------- tables

def format_table(report):
    lines = []
    if report.get("status") == "invalid":
        for d in report["diagnostics"]:
            lines.append(f"line {d['line']}, column {d['column']}: {d['message']}")
        return "\n".join(lines)
    for r in report["tasks"]:
        lines.append(f"[{r['index']}] {r['task']}: {r['status']}")
        res = r["result"]
        if "per_degree" in res:
            lines.append("    check                 idx  deg  lhs  rhs  basis          ok")
            for e in res["per_degree"]:
                lines.append(f"    {e['check']:<21} {e['index']:>3} {e['degree']:>4} {str(e['lhs_value']):>4} "
                             f"{str(e['rhs_value']):>4}  {e['basis']:<14} {'yes' if e['iso'] else 'NO'}")
            for k, v in sorted(res.get("side_checks", {}).items()):
                lines.append(f"    side check {k}: {'yes' if v else 'NO'}")
        elif "entries" in res:
            for e in res["entries"]:
                lines.append(f"    n={e['n']:<3} {e['kind']:<7} window {e['window']}: {e['dims']}")
        elif "cohomology" in res:
            estimated = False
            for i, rows in res["cohomology"].items():
                cells = []
                for x in rows:
                    mark = "?" if x["stabilized_at"] is None else ""
                    estimated = estimated or bool(mark)
                    cells.append(f"{x['degree']}:{x['dim']}{mark}")
                lines.append(f"    H^{i}: " + " ".join(cells))
            if estimated:
                lines.append("    ? = tower did not stabilize within the stages; value is an estimate (raise --T/--J)")
        else:
            for k, v in sorted(res.items()):
                lines.append(f"    {k}: {v}")
    return "\n".join(lines)


# -------------------------------------------------------------------- main

def _window_arg(text):
    lo, sep, hi = text.partition("..")
    if not sep:
        raise argparse.ArgumentTypeError("window must look like LO..HI")
    w = (int(lo), int(hi))
    DegreeWindow.coerce(w)
    return w


def corpus_dir():
    return Path(str(resources.files("adict") / "corpus"))


def run_corpus(directory=None, **kw):
    """Run every .prob file; a file passes when its outcome matches its ``expect`` line."""
    directory = Path(directory) if directory else corpus_dir()
    out = {}
    ok = True
    for path in sorted(directory.glob("*.prob")):
        report, code = run_problem(path.read_text(), **kw)
        expected = report.get("expect", "pass")
        met = (code == EXIT_PASS) if expected == "pass" else (code == EXIT_FAIL)
        ok = ok and met
        out[path.name] = {"exit": code, "expected": expected, "met": met, "report": report}
    return out, ok


def main(argv=None):
    p = argparse.ArgumentParser(prog="adict", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"adict {__version__}")
    sub = p.add_subparsers(dest="cmd", required=True)
    for name in ("run", "corpus"):
        sp = sub.add_parser(name)
        if name == "run":
            sp.add_argument("file")
        else:
            sp.add_argument("--dir", default=None, help="directory of .prob files (default: bundled corpus)")
        sp.add_argument("--json", dest="json_path", default=None)
        sp.add_argument("--table", action="store_true")
        sp.add_argument("--window", type=_window_arg, default=None)
        sp.add_argument("--T", dest="T", type=int, default=None)
        sp.add_argument("--J", dest="J", type=int, default=None)
        sp.add_argument("--max-seconds", type=float, default=None)
        sp.add_argument("--max-gb-steps", type=int, default=None)
        sp.add_argument("--seed", type=int, default=None, help="accepted and ignored; runs are deterministic")
    args = p.parse_args(argv)
    overrides = {"window": args.window, "T": args.T, "J": args.J}
    kw = dict(overrides=overrides, max_seconds=args.max_seconds, max_gb_steps=args.max_gb_steps)
    if args.cmd == "run":
        try:
            text = Path(args.file).read_text(encoding="utf-8")
        except OSError as e:
            print(f"adict: {e}", file=sys.stderr)
            return EXIT_INVALID
        report, code = run_problem(text, **kw)
        if args.json_path:
            Path(args.json_path).write_text(dumps(report))
        if args.table or not args.json_path:
            print(format_table(report))
        if code == EXIT_INVALID:
            for d in report["diagnostics"]:
                print(f"{args.file}:{d['line']}:{d['column']}: {d['message']}", file=sys.stderr)
        return code
    results, ok = run_corpus(args.dir, **kw)
    for name, r in results.items():
        print(f"{'ok  ' if r['met'] else 'FAIL'} {name} (exit {r['exit']}, expected {r['expected']})")
        if args.table:
            print(format_table(r["report"]))
    if args.json_path:
        Path(args.json_path).write_text(dumps({"files": {k: v["report"] for k, v in results.items()}}))
    return EXIT_PASS if ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
