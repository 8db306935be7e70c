"""Error summary over an (r, rho, n) grid on the 20x20 lattice.

    python3 scripts/reproduce_table2.py --K 100 --out results/table2.csv
"""

import argparse
import time
from pathlib import Path

from forage.config import parse_grid, parse_scenario
from forage.harness import table2_grid
from forage.output import write_table_csv
from forage.scenario import build_scenario

ROOT = Path(__file__).resolve().parent.parent


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--scenario", type=Path, default=ROOT / "scenarios" / "lattice20.cfg")
    ap.add_argument("--grid", type=Path, default=ROOT / "scenarios" / "table2_grid.csv")
    ap.add_argument("--K", type=int, default=100)
    ap.add_argument("--t-bar", type=int, default=5000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", type=Path, default=ROOT / "results" / "table2.csv")
    args = ap.parse_args()

    cfg = parse_scenario(args.scenario)
    dg = build_scenario(cfg)
    grid = parse_grid(args.grid)
    t0 = time.perf_counter()
    rows = table2_grid(dg, cfg.dynamics(), grid, args.K, args.t_bar, args.seed)
    print(f"{'r':>5} {'rho':>7} {'n':>5} {'e_norm':>9} {'var_norm':>9}")
    for r in rows:
        print(f"{r.r:5g} {r.rho:7g} {r.n:5d} {r.e_norm:9.4f} {r.var_norm:9.5f}")
    print(f"K={args.K}, t_bar={args.t_bar}, {time.perf_counter() - t0:.0f}s")
    args.out.parent.mkdir(parents=True, exist_ok=True)
    write_table_csv(
        ["r", "rho", "n", "e_norm", "var_norm"],
        [(r.r, r.rho, r.n, r.e_norm, r.var_norm) for r in rows],
        args.out,
    )


if __name__ == "__main__":
    main()
