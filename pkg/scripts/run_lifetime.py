#!/usr/bin/env python3
"""Lifetime comparison: all three policies on the default scenario.

Produces summary.csv with per-seed death milestones and curves.csv with the
alive-vs-round curves used for the lifetime figures.
"""

import argparse
import sys
from pathlib import Path

from wsncluster.cli import main

ROOT = Path(__file__).resolve().parent.parent

if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--scenario", default=str(ROOT / "scenarios" / "table1.json"))
    parser.add_argument("--seeds", type=int, default=100)
    parser.add_argument("--out", default="results/lifetime")
    parser.add_argument("--jobs", type=int, default=1)
    args = parser.parse_args()
    sys.exit(main([
        "--scenario", args.scenario,
        "--policy", "leach,sep,eepca",
        "--seeds", str(args.seeds),
        "--out", args.out,
        "--jobs", str(args.jobs),
    ]))
