#!/usr/bin/env python3
"""Prediction-tolerance sweep on the scheduled-acquisition scenario.

Half the nodes run fixed acquisition schedules and a tenth of them
malfunction; the sweep varies the suppression tolerance epsilon and records
the stable period and base-station message counts.
"""

import argparse
import sys
from pathlib import Path

from wsncluster.cli import main

ROOT = Path(__file__).resolve().parent.parent

if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--scenario", default=str(ROOT / "scenarios" / "rda50.json"))
    parser.add_argument("--seeds", type=int, default=30)
    parser.add_argument("--out", default="results/epsilon")
    parser.add_argument("--jobs", type=int, default=1)
    args = parser.parse_args()
    sys.exit(main([
        "--scenario", args.scenario,
        "--policy", "eepca",
        "--seeds", str(args.seeds),
        "--sweep", "epsilon_tol=0.80,0.85,0.90,0.95,1.00",
        "--out", args.out,
        "--jobs", str(args.jobs),
    ]))
