#!/usr/bin/env python3
"""Print the critical couplings g_c(p, N) used for g/g_c rescaling."""
import argparse
import math
import sys

from spinotto import ChainParams, critical_coupling_cached


def run(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, nargs="+", default=[8, 10])
    parser.add_argument("--boundary", choices=["open", "periodic"], default="open")
    args = parser.parse_args(argv)

    print("N,p,g_c")
    for n in args.n:
        for p in (1.0, 2.0, 3.0, math.inf):
            gc = critical_coupling_cached(ChainParams(n, p, 0.0, boundary=args.boundary))
            label = "inf" if math.isinf(p) else f"{p:g}"
            print(f"{n},{label},{gc:.4f}")
    return 0


if __name__ == "__main__":
    sys.exit(run())
