"""Compare the numba and numpy kernels on the spindle and its perturbed wedges.

    python3 benchmarks/bench_kernels.py [--stages 2] [--repeat 3]

Both backends must return the same vertices and edges; the script exits
nonzero otherwise.  The numba timings exclude the first (compiling) call.
"""

import argparse
import sys
import time
from math import comb

from wedgekit import _kernels
from wedgekit.construction import build_santos_weibel
from wedgekit.enumeration import adjacency_graph, enumerate_vertices
from wedgekit.hrep import load_p5


def best_of(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--stages", type=int, default=2, help="perturbed wedges beyond P5 to include")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    if not _kernels.HAVE_NUMBA:
        print("numba is not importable; only the numpy kernels can run")
        return 1
    trace = build_santos_weibel(load_p5())
    cases = [trace.entries[2 * s] for s in range(args.stages + 1)]
    # compile once on the smallest case
    P0 = cases[0].polytope
    adjacency_graph(P0, enumerate_vertices(P0, backend="numba"), backend="numba")

    print(f"{'polytope':<10} {'dim':>3} {'subsets':>9} {'verts':>6} {'edges':>6} "
          f"{'numpy enum':>11} {'numba enum':>11} {'numpy adj':>10} {'numba adj':>10} {'speedup':>8}")
    ok = True
    for ent in cases:
        P = ent.polytope
        res = {}
        for which in ("numpy", "numba"):
            te, V = best_of(lambda: enumerate_vertices(P, backend=which), args.repeat)
            ta, G = best_of(lambda: adjacency_graph(P, V, backend=which), args.repeat)
            res[which] = (te, ta, [v.coords for v in V], G.edges)
        same = res["numpy"][2:] == res["numba"][2:]
        ok &= same
        (ne, na, Vs, E), (be, ba, _, _) = res["numpy"], res["numba"]
        speed = (ne + na) / (be + ba)
        print(f"{ent.name:<10} {P.dim:>3} {comb(P.n, P.dim):>9} {len(Vs):>6} {len(E):>6} "
              f"{ne:>10.3f}s {be:>10.3f}s {na:>9.3f}s {ba:>9.3f}s {speed:>7.1f}x" + ("" if same else "  MISMATCH"))
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
