#!/usr/bin/env python3
"""Stable period versus the fraction of energy-heterogeneous nodes.

Non-heterogeneous nodes start at the fixed 2 J level; the sweep moves the
heterogeneous fraction from 0 to 1 for all three policies.
"""

import argparse
import sys
from pathlib import Path

from wsncluster.cli import main

ROOT = Path(__file__).resolve().parent.parent

if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--scenario", default=str(ROOT / "scenarios" / "table1.json"))
    parser.add_argument("--seeds", type=int, default=30)
    parser.add_argument("--out", default="results/heterogeneity")
    parser.add_argument("--jobs", type=int, default=1)
    args = parser.parse_args()
    sys.exit(main([
        "--scenario", args.scenario,
        "--policy", "leach,sep,eepca",
        "--seeds", str(args.seeds),
        "--sweep", "frac_energy_heterogeneous=0,0.25,0.5,0.75,1.0",
        "--out", args.out,
        "--jobs", str(args.jobs),
    ]))
