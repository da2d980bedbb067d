"""Compare the compiled and pure-Python branch-and-bound kernels.

Both kernels must explore the same nodes and return the same layering;
the script checks that and reports the speed ratio.

    python3 benchmarks/bench_kernels.py [--sizes 12,16,20] [--seeds 3] [--preset exp1]
"""

from __future__ import annotations

import argparse
import sys
import time

from layerforge.graph import GenSpec, generate_random
from layerforge.presets import PRESETS, make_preset
from layerforge.solver import HAVE_COMPILED, SolveConfig, branch_and_bound


def timed(g, cfg):
    start = time.perf_counter()
    res = branch_and_bound(g, cfg)
    return res, time.perf_counter() - start


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="12,16,20")
    ap.add_argument("--seeds", type=int, default=3)
    ap.add_argument("--preset", default="exp1", choices=PRESETS)
    ap.add_argument("--order", default="connected", choices=("id", "degree_desc", "connected"))
    args = ap.parse_args(argv)
    if not HAVE_COMPILED:
        print("compiled kernel not built; run `pip install -e . --no-build-isolation` with Cython available")
        return 1

    print(f"{'n':>3} {'seed':>4} {'m':>3} {'Y':>3} {'nodes':>9} {'compiled_s':>10} {'python_s':>9} {'speedup':>8}")
    mismatches = 0
    tot_c = tot_p = 0.0
    for n in (int(x) for x in args.sizes.split(",")):
        for seed in range(args.seeds):
            g = generate_random(GenSpec(n, seed=seed))
            p = make_preset(args.preset, g)
            base = dict(variant=p.variant, weights=p.weights, Y=p.Y, branch_order=args.order, time_limit=600)
            rc, tc = timed(g, SolveConfig(**base, backend="compiled"))
            rp, tp = timed(g, SolveConfig(**base, backend="python"))
            same = (rc.status, rc.objective, rc.best, rc.nodes_explored) == (rp.status, rp.objective, rp.best, rp.nodes_explored)
            mismatches += not same
            tot_c += tc
            tot_p += tp
            flag = "" if same else "  MISMATCH"
            print(f"{g.n:>3} {seed:>4} {g.m:>3} {p.Y:>3} {rc.nodes_explored:>9} {tc:>10.4f} {tp:>9.3f} {tp / max(tc, 1e-9):>8.1f}{flag}")
    print(f"total compiled {tot_c:.3f}s python {tot_p:.3f}s speedup {tot_p / max(tot_c, 1e-9):.1f}x")
    return 1 if mismatches else 0


if __name__ == "__main__":
    sys.exit(main())
