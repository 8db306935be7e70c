"""Distance between the stationary density and the optimal one, per epsilon.

Fits an affine model to the gaps and reports slope and R^2.

    python3 scripts/eps_sweep.py --eps 0.05 0.1 0.2 0.4 0.8
"""

import argparse
from pathlib import Path

import numpy as np

from forage.config import parse_scenario
from forage.oracle import epsilon_gap
from forage.output import write_table_csv
from forage.scenario import build_scenario

ROOT = Path(__file__).resolve().parent.parent


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--scenario", type=Path, default=ROOT / "scenarios" / "lattice3.cfg")
    ap.add_argument("--eps", type=float, nargs="+", default=[0.05, 0.1, 0.2, 0.4])
    ap.add_argument("--tol", type=float, default=1e-12)
    ap.add_argument("--out", type=Path, default=ROOT / "results" / "eps_gap.csv")
    args = ap.parse_args()

    cfg = parse_scenario(args.scenario)
    rows = epsilon_gap(build_scenario(cfg), args.eps, cfg.dynamics(), max(cfg.max_t, 200_000), args.tol)
    for r in rows:
        print(f"eps={r.eps:<6g} gap={r.gap:.5f} converged={r.converged} t_stop={r.t_stop}")
    eps = np.array([r.eps for r in rows])
    gaps = np.array([r.gap for r in rows])
    if len(rows) >= 2:
        slope, intercept = np.polyfit(eps, gaps, 1)
        resid = gaps - (slope * eps + intercept)
        r2 = 1 - (resid**2).sum() / ((gaps - gaps.mean()) ** 2).sum()
        print(f"affine fit: gap = {slope:.4f} * eps + {intercept:.4f}, R^2 = {r2:.4f}")
    args.out.parent.mkdir(parents=True, exist_ok=True)
    write_table_csv(["eps", "gap", "converged", "t_stop"],
                    [(r.eps, r.gap, r.converged, r.t_stop) for r in rows], args.out)


if __name__ == "__main__":
    main()
