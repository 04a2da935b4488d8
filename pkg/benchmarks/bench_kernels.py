"""Compare the compiled and pure-Python kernel backends.

Times each hot kernel under every importable backend, checks that both
backends return the same numbers, and times one end-to-end COVO run per
backend in a subprocess (``COVO_PURE_PYTHON=1`` selects the fallback).

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from covo import kernels
from covo.benchmarks import FUNCTION_IDS

END_TO_END = (
    "import time; from covo.benchmarks import make_objective; from covo.core import preset, run; "
    "from covo import kernels; t=time.perf_counter(); "
    "r=run(make_objective('{fid}', 30), preset('tableII', max_iter=10**6, max_evals={budget}), 0); "
    "print(kernels.BACKEND, r.evals, repr(r.best_error), (time.perf_counter()-t)*1e3)"
)


def workloads(rng):
    X = rng.uniform(-30, 30, (200, 30))
    ranks2 = np.arange(2, 2 * 21 + 1, 2, dtype=np.int64)
    D = np.round(rng.uniform(0, 1, (300, 10)), 2)
    out = {f"evaluate_batch {fid} 200x30": (lambda m, k=k: m.evaluate_batch(k, X, np.zeros(200)))
           for k, fid in enumerate(FUNCTION_IDS, 1)}
    out["penalty x1000"] = lambda m: [m.penalty(v, 10.0, 100.0, 4.0) for v in X.ravel()[:1000]]
    out["chaotic_step x1000"] = lambda m: [m.chaotic_step(0.43597 + i * 1e-4, 0.5, 2 * np.pi) for i in range(1000)]
    out["signed_rank_null n=21"] = lambda m: m.signed_rank_null(ranks2)
    out["dedupe_mask 300x10"] = lambda m: m.dedupe_mask(D, 1e-9)
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--budget", type=int, default=20_000)
    args = ap.parse_args(argv)

    found = kernels.backends()
    names = sorted(found)
    rng = np.random.default_rng(0)
    print(f"backends: {', '.join(names)} (active: {kernels.BACKEND})")
    print(f"{'kernel':32s}" + "".join(f"{n + ' us':>14s}" for n in names) + f"{'speedup':>10s}  agree")
    for label, fn in workloads(rng).items():
        times, results = {}, {}
        for n in names:
            number = 20
            times[n] = min(timeit.repeat(lambda: fn(found[n]), number=number, repeat=args.repeat)) / number * 1e6
            results[n] = np.asarray(fn(found[n]), dtype=float)
        ref = results["python"]
        agree = all(np.allclose(r, ref, rtol=1e-12, atol=1e-300) for r in results.values())
        speed = times["python"] / times["cython"] if "cython" in times else float("nan")
        print(f"{label:32s}" + "".join(f"{times[n]:14.1f}" for n in names) + f"{speed:10.1f}  {agree}")

    print(f"\nend-to-end COVO run, F1..F13 at D=30, budget {args.budget}:")
    for pure in ([False, True] if "cython" in found else [True]):
        env = dict(os.environ)
        env.pop("COVO_PURE_PYTHON", None)
        if pure:
            env["COVO_PURE_PYTHON"] = "1"
        total = 0.0
        for fid in FUNCTION_IDS:
            code = END_TO_END.format(fid=fid, budget=args.budget)
            out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
            backend, evals, best, ms = out.stdout.split()
            total += float(ms)
        print(f"  {backend:8s} {total:10.1f} ms total")


if __name__ == "__main__":
    main()
