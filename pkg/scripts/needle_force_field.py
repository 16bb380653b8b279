#!/usr/bin/env python3
"""Force direction field on a needle around a half-line edge.

Samples needle positions on a circle of radius D around the edge and a
set of spatial orientations, and writes the (normalized) force vectors
as CSV.  This is a library-level product (no CLI subcommand): the field
is a 2D grid over (position angle, orientation), not a 1D sweep.
"""

import argparse
import math
from pathlib import Path

import numpy as np

from casimir2d.cli import _csv_text
from casimir2d.scenarios import ScenarioConfig, force_direction_field


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results/needle_force_field",
                    metavar="DIR")
    ap.add_argument("--D", type=float, default=1.0,
                    help="edge-to-needle distance")
    ap.add_argument("--tyy", type=float, default=1e-4,
                    help="elongated-direction needle strength")
    ap.add_argument("--n-positions", type=int, default=13)
    ap.add_argument("--n-orientations", type=int, default=8)
    args = ap.parse_args()

    cfg = ScenarioConfig(scenario_id="edge_needle", bc="N", D=args.D,
                         t00=0.0, txx=0.0, tyy=args.tyy)
    positions = np.linspace(-0.5 * math.pi, 0.5 * math.pi,
                            args.n_positions)
    orientations = np.linspace(0.0, math.pi, args.n_orientations,
                               endpoint=False)
    out = force_direction_field(cfg, positions, orientations)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / "needle_force_field.csv"
    path.write_text(_csv_text(out), newline="")
    print(f"wrote {path} ({len(out.rows)} rows)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
