"""Compiled vs pure-Python kernels.

Two measurements:

* micro: the raw dict kernels on random sparse polynomials, both modules
  imported side by side (results are compared for equality);
* end to end: one relation family run in a fresh interpreter per backend,
  switching with ``TWGKLO_PURE``.

Usage::

    python benchmarks/bench_kernels.py [--repeat 5] [--size 400] [--json]
"""
from __future__ import annotations

import argparse
import json
import os
import random
import subprocess
import sys
import timeit

from gmpy2 import mpq

from twgklo import _kernels_py as py

try:
    from twgklo import _ckernels as cy
except ImportError:
    cy = None

E2E = (
    "import time; from twgklo import kernels, relcheck as R; from twgklo.gklo import build_shape; "
    "S = build_shape(2, [4]); t = time.perf_counter(); "
    "f = R.check_relation(S, 'b-b-same'); "
    "print(kernels.BACKEND, f.status, time.perf_counter() - t)"
)


def random_poly(rng, size, nvars=6, width=10, maxdeg=6):
    out = {}
    for _ in range(size):
        exps = [rng.randint(0, maxdeg) for _ in range(nvars)]
        m = sum(e << (width * k) for k, e in enumerate(exps)) | (sum(exps) << (width * nvars))
        c = mpq(rng.randint(-50, 50), rng.randint(1, 9))
        if c:
            out[m] = c
    return out


def micro(size, repeat):
    rng = random.Random(1)
    a, b = random_poly(rng, size), random_poly(rng, size)
    small = random_poly(rng, 20)
    cases = {
        "padd": lambda k: k.padd(a, b),
        "pmul(size x 20)": lambda k: k.pmul(a, small),
        "pmul(size x size)": lambda k: k.pmul(a, b),
    }
    rows = []
    for name, fn in cases.items():
        row = {"kernel": name, "python_s": min(timeit.repeat(lambda: fn(py), number=1, repeat=repeat))}
        if cy is not None:
            assert fn(cy) == fn(py), name
            row["cython_s"] = min(timeit.repeat(lambda: fn(cy), number=1, repeat=repeat))
            row["speedup"] = row["python_s"] / row["cython_s"]
        rows.append(row)
    return rows


def end_to_end():
    rows = []
    for pure in ("1", "0"):
        env = dict(os.environ, TWGKLO_PURE=pure)
        out = subprocess.run([sys.executable, "-c", E2E], env=env, capture_output=True,
                             text=True, check=True).stdout.split()
        rows.append({"backend": out[0], "status": out[1], "seconds": float(out[2])})
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--size", type=int, default=400)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()
    res = {"micro": micro(args.size, args.repeat), "end_to_end": end_to_end()}
    if args.json:
        print(json.dumps(res, indent=2))
        return
    if cy is None:
        print("compiled kernel not built; python timings only")
    for r in res["micro"]:
        line = "%-20s python %8.4fs" % (r["kernel"], r["python_s"])
        if "cython_s" in r:
            line += "  cython %8.4fs  x%.2f" % (r["cython_s"], r["speedup"])
        print(line)
    for r in res["end_to_end"]:
        print("b-b-same n=2 lambda=(4)  %-7s %-5s %.2fs" % (r["backend"], r["status"], r["seconds"]))


if __name__ == "__main__":
    main()
