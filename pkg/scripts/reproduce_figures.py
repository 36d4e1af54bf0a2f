#!/usr/bin/env python3
"""Regenerate the bundled experiment curves into an output directory.

Light presets (pure diagonalization) run in a few minutes at N = 10.  The
stroke-time scans integrate real-time dynamics and are opt-in via --heavy;
use --n to scale them down.
"""
import argparse
import sys

from spinotto.cli import main as cli_main

LIGHT = ["s1", "s2", "fig2b", "fig2c", "fig3a", "fig3b", "fig3c"]
HEAVY = ["fig4a", "fig4b"]


def run(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="spinotto_out")
    parser.add_argument("--n", type=int, default=None, help="chain length override")
    parser.add_argument("--heavy", action="store_true", help="include the dynamics presets")
    parser.add_argument("--svg", action="store_true")
    args = parser.parse_args(argv)

    names = LIGHT + (HEAVY if args.heavy else [])
    for name in names:
        cmd = ["figure", name, "--out", args.out]
        if args.n:
            cmd += ["--n", str(args.n)]
        if args.svg:
            cmd += ["--svg"]
        print(f"== {name}")
        code = cli_main(cmd)
        if code != 0:
            print(f"preset {name} exited with {code}", file=sys.stderr)
            return code
    return 0


if __name__ == "__main__":
    sys.exit(run())
