"""Acceptance suite: one check per criterion, each printing a single PASS/FAIL line.

Run with pytest, or directly as a script for the summary alone.
"""
import json
import os
import time

import pytest
import sympy

from adict.cli import corpus_dir, dumps, run_corpus, run_problem, strip_timing
from adict.derived import AdicPair, rgamma
from adict.field import QQ
from adict.hochschild import enveloping, hh_discrete
from adict.modules import FPModule
from adict.rings import make_ring
from adict.wpr import verify_certificate


def _run(name):
    with open(os.path.join(corpus_dir(), name + ".prob")) as fh:
        report, _ = run_problem(fh.read())
    return report


def _entries(task):
    return task["result"].get("per_degree", [])


def _unstable(tasks):
    return sum(e["stabilized_at"] is None for t in tasks for e in _entries(t))


def _exact(tasks):
    return all(e["lhs_value"] == e["rhs_value"] and e["iso"] for t in tasks for e in _entries(t))


def _timed(budget, fn):
    t0 = time.perf_counter()
    ok, detail = fn()
    elapsed = time.perf_counter() - t0
    if elapsed > budget:
        ok = False
    return ok, f"{detail} ({elapsed:.1f}s, budget {budget}s)"


# ------------------------------------------------------------------ 1

def criterion_1():
    def body():
        tasks = []
        for name in ("formulas_kx", "formulas_kxy", "formulas_kx2", "formulas_f7xy"):
            tasks += _run(name)["tasks"]
        bad = [t["index"] for t in tasks if t["status"] != "pass"]
        ok = len(tasks) == 12 and not bad and _exact(tasks)
        return ok, f"{len(tasks) - len(bad)}/{len(tasks)} verify_formulas instances pass"
    return _timed(30, body)


# ------------------------------------------------------------------ 2

def h2_monomials(d):
    """Number of x^-a y^-b with a, b >= 1 in degree d."""
    return sum(1 for a in range(1, -d) if -d - a >= 1)


def criterion_2():
    def body():
        A = make_ring(QQ, "x y")
        window = (-5, -2)
        oracle = [h2_monomials(d) for d in range(-5, -1)]
        P = AdicPair(A, ["x", "y"], window=window)
        got = {}
        for route in ("koszul", "telescope", "ext"):
            R = rgamma(P, FPModule.free(A, [0]), route=route)
            got[route] = (R.dims(0), R.dims(1), R.dims(2))
        ok = oracle == [4, 3, 2, 1] and all(h0 == [0] * 4 and h1 == [0] * 4 and h2 == oracle
                                             for h0, h1, h2 in got.values())
        return ok, f"H^2 dims {got['koszul'][2]} vs oracle {oracle} on three routes"
    return _timed(10, body)


# ------------------------------------------------------------------ 3

def criterion_3():
    def body():
        tasks = []
        for name in ("mgm_kx", "mgm_kxy", "mgm_kx2", "mgm_f7xy"):
            tasks += _run(name)["tasks"]
        passed = sum(t["status"] == "pass" for t in tasks)
        total = sum(len(_entries(t)) for t in tasks)
        unstable = _unstable(tasks)
        ok = passed == len(tasks) == 12 and unstable == 0
        return ok, (f"{passed}/{len(tasks)} verify_mgm instances pass, "
                    f"{unstable}/{total} entries unstabilized at T=J=6")
    return _timed(60, body)


# ------------------------------------------------------------------ 4

def criterion_4():
    def body():
        tasks = _run("gm_kx")["tasks"]
        ok = len(tasks) == 3 and all(t["status"] == "pass" for t in tasks) and _exact(tasks)
        return ok, f"{sum(t['status'] == 'pass' for t in tasks)}/3 verify_gm pairs pass"
    return _timed(60, body)


# ------------------------------------------------------------------ 5

def _walk(node):
    yield node
    for p in node["premises"]:
        yield from _walk(p)


def criterion_5():
    def body():
        tasks = _run("wpr_tensor")["tasks"]
        tensor = [t["result"] for t in tasks if t["result"]["rule"] == "R4"]
        chain = all({"R2", "R3"} <= {n["rule"] for n in _walk(c)} for c in tensor)
        sides = all(s["passed"] for t in tasks for n in _walk(t["result"]) for s in n["side_checks"])
        reverify = all(verify_certificate(json.loads(json.dumps(t["result"])))[0] for t in tasks)
        ok = all(t["status"] == "pass" for t in tasks) and len(tensor) == 2 and chain and sides and reverify
        return ok, (f"{len(tensor)} tensor certificates with R2->R3 chain={chain}, "
                    f"side checks={sides}, re-verified={reverify}")
    return _timed(5, body)


# ------------------------------------------------------------------ 6

def line_oracle(n, d):
    """HH^n(k[x]; k[x]) in degree d from the Koszul bimodule resolution: cochains A -> A(1)
    with zero differential, so HH^0_d = A_d and HH^1_d = A_{d+1}."""
    if n == 0:
        return 1 if d >= 0 else 0
    if n == 1:
        return 1 if d + 1 >= 0 else 0
    return 0


def periodic_oracle(n_max):
    """HH^n(k[x]/(x^2)) from the 2-periodic bimodule resolution: cochain maps alternate 0 and 2x."""
    zero = sympy.zeros(2, 2)
    two_x = sympy.Matrix([[0, 0], [2, 0]])
    maps = [zero if n % 2 == 0 else two_x for n in range(n_max + 2)]
    return [2 - maps[n].rank() - (maps[n - 1].rank() if n > 0 else 0) for n in range(n_max + 1)]


def criterion_6():
    def body():
        window = (-4, 4)
        degrees = range(window[0], window[1] + 1)
        line = make_ring(QQ, "x")
        tab = hh_discrete(enveloping(line, ["x"]), FPModule.free(line, [0]), 3, window)
        line_ok = all(tab.dims(n) == [line_oracle(n, d) for d in degrees] for n in range(4))
        dual = make_ring(QQ, "x", ["x^2"])
        tab2 = hh_discrete(enveloping(dual, ["x"]), FPModule.free(dual, [0]), 3, window)
        totals = [sum(tab2.dims(n)) for n in range(4)]
        ok = line_ok and totals == periodic_oracle(3) == [2, 1, 1, 1]
        return ok, f"k[x] pattern (A, A, 0, 0) matched={line_ok}; k[x]/(x^2) totals {totals}"
    return _timed(30, body)


# ------------------------------------------------------------------ 7

def criterion_7():
    def body():
        tasks = [t for t in _run("hochschild_kx")["tasks"] if t["task"] == "verify_comparison"]
        passed = all(t["status"] == "pass" for t in tasks) and _exact(tasks) and _unstable(tasks) == 0
        depth_ok = all(max(e["stabilized_at"] for e in _entries(t)) <= t["result"]["window"][1] + 2
                       for t in tasks)
        # tower case k[[x]] with M = A: the completed values at n = 0, 1 are the Hilbert function of A
        tower = _entries(tasks[0])
        lo, hi = tasks[0]["result"]["window"]
        series = [1 if d >= 0 else 0 for d in range(lo, hi + 1)]
        values = {n: [e["rhs_value"] for e in tower if e["index"] == n] for n in (0, 1)}
        ok = len(tasks) == 3 and passed and depth_ok and values[0] == values[1] == series
        return ok, (f"{len(tasks)} comparisons pass={passed}, stabilized by window depth + 2={depth_ok}, "
                    f"HH^0={values[0]} HH^1={values[1]}")
    return _timed(60, body)


# ------------------------------------------------------------------ 8

def criterion_8():
    def body():
        tasks = [t for t in _run("hochschild_formulas")["tasks"] if t["task"] == "verify_cformula"]
        ok = (len(tasks) == 2 and all(t["status"] == "pass" for t in tasks) and _exact(tasks)
              and all(t["result"]["window"] == [-2, 2] for t in tasks))
        return ok, f"{sum(t['status'] == 'pass' for t in tasks)}/2 complete formula instances agree"
    return _timed(120, body)


# ------------------------------------------------------------------ 9

def criterion_9():
    def body():
        tasks = _run("smooth_duality")["tasks"]
        ok = len(tasks) == 2
        shifts = []
        for t in tasks:
            r = t["result"]
            m, n = r["instance"]["m"], r["instance"]["n"]
            shifts.append(r["shift"])
            ok = ok and t["status"] == "pass" and r["shift"] == -(m + n) and all(r["side_checks"].values())
            ok = ok and r["nonzero_indices"]["lhs"] == [m + n] and r["nonzero_indices"]["rhs"] == [0]
        return ok, f"shifts {shifts} for (m,n) in (0,1),(1,1)"
    return _timed(120, body)


# ------------------------------------------------------------------ 10

def criterion_10():
    def body():
        tasks = [t for t in _run("hochschild_formulas")["tasks"] if t["task"] == "verify_tformula_homology"]
        ok = len(tasks) == 2 and all(t["status"] == "pass" for t in tasks) and _exact(tasks)
        return ok, f"{sum(t['status'] == 'pass' for t in tasks)}/2 torsion homology instances pass"
    return _timed(60, body)


# ------------------------------------------------------------------ 11

def criterion_11():
    def body():
        runs = []
        for _ in range(2):
            results, _ = run_corpus(corpus_dir())
            runs.append(dumps({name: strip_timing(v["report"]) for name, v in sorted(results.items())}))
        ok = runs[0] == runs[1]
        return ok, f"{len(results)} corpus files, {len(runs[0])} bytes, identical={ok}"
    return _timed(600, body)


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9, criterion_10, criterion_11]


def _line(k, ok, detail):
    return f"criterion {k}: {'PASS' if ok else 'FAIL'} - {detail}"


@pytest.mark.parametrize("k", range(1, len(CRITERIA) + 1))
def test_criterion(k, capsys):
    ok, detail = CRITERIA[k - 1]()
    with capsys.disabled():
        print("\n" + _line(k, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    for k, fn in enumerate(CRITERIA, 1):
        print(_line(k, *fn()), flush=True)
