#!/usr/bin/env python3
"""Monitoring quality: cumulative base-station messages per policy.

Runs all three policies on the scheduled-acquisition scenario; the bs_cum
column of curves.csv gives the cumulative messages the base station has
received by each round.
"""

import argparse
import sys
from pathlib import Path

from wsncluster.cli import main

ROOT = Path(__file__).resolve().parent.parent

if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--scenario", default=str(ROOT / "scenarios" / "rda50.json"))
    parser.add_argument("--seeds", type=int, default=100)
    parser.add_argument("--out", default="results/monitoring")
    parser.add_argument("--jobs", type=int, default=1)
    args = parser.parse_args()
    sys.exit(main([
        "--scenario", args.scenario,
        "--policy", "leach,sep,eepca",
        "--seeds", str(args.seeds),
        "--out", args.out,
        "--jobs", str(args.jobs),
    ]))
