"""Compare the compiled and pure-Python row kernels.

    python3 benchmarks/bench_kernels.py [--repeat 3]

Times sparse rank computations over F_p and Q and one end-to-end check
(the MGM corpus for Q[x,y] at (x,y)) under both backends, and checks that
both backends give the same answers.
"""

import argparse
import random
import time

from adict import linalg
from adict.field import QQ, PrimeField


def random_rows(n, m, density, field, seed):
    rng = random.Random(seed)
    rows = []
    for _ in range(n):
        row = {}
        for j in range(m):
            if rng.random() < density:
                a = rng.randint(-9, 9)
                if a:
                    row[j] = field(a)
        rows.append(row)
    return rows


def bench(fn, repeat):
    best = None
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best, out


def mgm_corpus():
    from adict.derived import AdicPair, verify_mgm
    from adict.modules import FPModule
    from adict.rings import make_ring

    A = make_ring(QQ, "x:1 y:1")
    pair = AdicPair(A, ["x", "y"], window=(-3, 3))
    return verify_mgm(pair, FPModule.free(A, [0]))["pass"]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    cases = [
        ("rank F_32003 200x200", lambda: linalg.rank(random_rows(200, 200, 0.05, PrimeField(32003), 1), PrimeField(32003))),
        ("rank Q 80x80", lambda: linalg.rank(random_rows(80, 80, 0.08, QQ, 2), QQ)),
        ("verify_mgm Q[x,y]", mgm_corpus),
    ]
    backends = ["python"]
    try:
        linalg.use_backend("cython")
        backends.append("cython")
    except ImportError:
        print("compiled backend not built; timing the fallback only")
    print(f"{'case':<24}" + "".join(f"{b:>12}" for b in backends) + "   same")
    for name, fn in cases:
        times, outs = [], []
        for b in backends:
            linalg.use_backend(b)
            t, out = bench(fn, args.repeat)
            times.append(t)
            outs.append(out)
        same = all(o == outs[0] for o in outs)
        print(f"{name:<24}" + "".join(f"{t:>11.3f}s" for t in times) + f"   {'yes' if same else 'NO'}")


if __name__ == "__main__":
    main()
