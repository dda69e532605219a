"""Compare the compiled and numpy kernel backends on representative workloads.

    python benchmarks/bench_kernels.py [--repeat 5]

Prints best-of-N wall time per kernel and backend, the speedup, and the
maximum disagreement between backends.
"""
import argparse
import time

import numpy as np

from lidstone._kernels import available_backends
from lidstone.basis import NodeSystem
from lidstone.kernel import KernelSystem

SYSTEMS = {
    "lidstone": NodeSystem.lidstone(),
    "m3": NodeSystem((0, 1, 2), (0, 0, 1)),
    "gontcharoff4": NodeSystem.gontcharoff(("0", "1/2", "1", "-1/2")),
}


def best_of(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def workloads():
    ts = 3.0 * np.exp(2j * np.pi * np.arange(4096) / 4096)
    for name, nodes in SYSTEMS.items():
        s, zk, zr = KernelSystem(nodes).arrays
        yield f"delta[{name}] x4096", lambda mod, s=s, zk=zk, zr=zr: mod.delta_batch(ts, s, zk, zr)
        yield f"inverse[{name}] x4096", \
            lambda mod, s=s, zk=zk, zr=zr: mod.inverse_batch(ts, s, zk, zr)[1]
    coeffs = np.random.default_rng(0).normal(size=64) + 0j
    zs = np.random.default_rng(1).normal(size=20000) + 1j * np.random.default_rng(2).normal(size=20000)
    yield "horner deg63 x20000", lambda mod: mod.horner_batch(coeffs, zs)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    backends = available_backends()
    if "cython" not in backends:
        print("compiled backend not built; only the numpy fallback is available")
    print(f"{'workload':28s} " + " ".join(f"{b:>10s}" for b in backends) + "   speedup  max rel diff")
    for label, fn in workloads():
        times, outs = {}, {}
        for name, mod in backends.items():
            times[name], outs[name] = best_of(lambda: fn(mod), args.repeat)
        row = f"{label:28s} " + " ".join(f"{times[b] * 1e3:8.2f}ms" for b in backends)
        if "cython" in times:
            a, b = np.asarray(outs["cython"]), np.asarray(outs["python"])
            diff = float(np.nanmax(np.abs(a - b) / np.maximum(np.abs(b), 1.0)))
            row += f"   {times['python'] / times['cython']:6.1f}x  {diff:.2e}"
        print(row)


if __name__ == "__main__":
    main()
