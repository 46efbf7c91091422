#!/usr/bin/env python3
"""Energy-factor weight sweep: first-node-death versus alpha.

Sweeps the election weighting alpha from 0.50 to 0.90 (beta is always
1 - alpha) and records the death milestones per seed.
"""

import argparse
import sys
from pathlib import Path

from wsncluster.cli import main

ROOT = Path(__file__).resolve().parent.parent
GRID = ",".join(f"{0.50 + 0.05 * i:.2f}" for i in range(9))

if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--scenario", default=str(ROOT / "scenarios" / "table1.json"))
    parser.add_argument("--seeds", type=int, default=50)
    parser.add_argument("--out", default="results/alpha")
    parser.add_argument("--jobs", type=int, default=1)
    args = parser.parse_args()
    sys.exit(main([
        "--scenario", args.scenario,
        "--policy", "eepca",
        "--seeds", str(args.seeds),
        "--sweep", f"alpha={GRID}",
        "--out", args.out,
        "--jobs", str(args.jobs),
    ]))
