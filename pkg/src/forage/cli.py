"""Command-line entry point ``forage``.

Exit codes: 0 success, 2 config error, 3 numerical non-convergence, 4 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import harness, meanfield, oracle, swarm
from .config import ScenarioConfig, parse_grid, parse_scenario
from .errors import ConfigError, InvalidGraph, NoConvergence
from .graph import diameter
from .output import write_heatmap_svg, write_table_csv, write_timeseries_csv
from .scenario import build_scenario

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4


def _number_list(text: str, kind=float) -> list:
    try:
        return [kind(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad list {text!r}") from None


def _snapshot_rows(dg, t, occupancy, w):
    V = dg.V
    occ = occupancy[:V] + occupancy[V:]
    diff = w[:V] - w[V:]
    return [(t, v, occ[v], diff[v]) for v in range(V)]


def _final_svg(dg, occupancy, w, path, title):
    V = dg.V
    write_heatmap_svg(
        dg.base,
        w[:V] - w[V:],
        path,
        occupancy=occupancy[:V] + occupancy[V:],
        source=dg.s_vertex,
        target=dg.t_vertex,
        title=title,
    )


def cmd_mf_run(cfg: ScenarioConfig, out: Path, args) -> int:
    dg = build_scenario(cfg)
    p = cfg.dynamics()
    y_bar = oracle.optimal_distribution(dg, p.r, p.lam).y_bar if p.r > 0 else None
    w_inf = oracle.closed_form_w_inf(dg, p.r, p.lam)
    on_path = y_bar > 0 if y_bar is not None else None
    records, snaps = [], []

    def observe(state, force=False):
        if state.t % cfg.snapshot_stride and not force:
            return
        records.append((state.t, "w_inf_error", float(np.abs(state.w - w_inf).max())))
        if y_bar is not None:
            records.append((state.t, "gap_ybar", float(np.abs(state.y - y_bar).sum())))
            records.append((state.t, "mass_optimal", float(state.y[on_path].sum())))
        snaps.extend(_snapshot_rows(dg, state.t, state.y, state.w))

    start = meanfield.init_mean_field(dg, cfg.w0)
    state, rep = meanfield.run(
        dg, p, cfg.max_t, cfg.tol, window=cfg.window, sample_every=cfg.snapshot_stride,
        callback=observe, state=start,
    )
    for t, ry, rw in rep.samples:
        records += [(t, "y_residual", ry), (t, "w_residual", rw)]
    if state.t % cfg.snapshot_stride:
        observe(state, force=True)
        records += [(state.t, "y_residual", rep.y_residual), (state.t, "w_residual", rep.w_residual)]
    records.append((state.t, "converged", float(rep.converged)))
    write_timeseries_csv(records, out / "timeseries.csv")
    write_table_csv(["t", "vertex", "occupancy", "w_diff"], snaps, out / "snapshots.csv")
    write_table_csv(
        ["index", "copy", "vertex", "y", "w"],
        [(i, *dg.locate(i), state.y[i], state.w[i]) for i in range(dg.dim)],
        out / "final_state.csv",
    )
    _final_svg(dg, state.y, state.w, out / "final.svg", f"mean field t={state.t}")
    return EXIT_OK if rep.converged else EXIT_NUMERIC


def cmd_swarm_run(cfg: ScenarioConfig, out: Path, args) -> int:
    dg = build_scenario(cfg)
    p = cfg.dynamics()
    traj = swarm.run_swarm(dg, p, cfg.n, cfg.horizon, cfg.seed, stride=cfg.snapshot_stride)
    on_path = oracle.optimal_distribution(dg, p.r, p.lam).y_bar > 0 if p.r > 0 else None
    records, snaps = [], []
    for t, q, w in zip(traj.times, traj.occupancy, traj.weights):
        records.append((t, "occupied_vertices", float((q > 0).sum())))
        if on_path is not None:
            records.append((t, "mass_optimal", float(q[on_path].sum())))
        snaps.extend(_snapshot_rows(dg, t, q, w))
    write_timeseries_csv(records, out / "timeseries.csv")
    write_table_csv(["t", "vertex", "occupancy", "w_diff"], snaps, out / "snapshots.csv")
    final = traj.final
    _final_svg(dg, swarm.occupancy(final, dg.dim), final.w, out / "final.svg", f"n={cfg.n} t={final.t}")
    return EXIT_OK


def cmd_oracle(cfg: ScenarioConfig, out: Path, args) -> int:
    dg = build_scenario(cfg)
    p = cfg.dynamics()
    w_inf = oracle.closed_form_w_inf(dg, p.r, p.lam)
    d_star = diameter(dg.base)
    g_max = int(dg.base.degree.max())
    metrics = [
        ("vertices", dg.V),
        ("edges", len(dg.base.edges)),
        ("k", dg.k),
        ("delta_star", d_star),
        ("fixed_point_residual", oracle.fixed_point_residual(w_inf, dg, p.r, p.lam)),
        ("w_star_member", oracle.is_optimal_weights(w_inf, dg)),
        ("alpha", oracle.rate_bound(p.eps, d_star)),
        ("alpha_degree", oracle.rate_bound_degree(p.eps, d_star, g_max)),
    ]
    write_table_csv(
        ["index", "copy", "vertex", "w_inf"],
        [(i, *dg.locate(i), w_inf[i]) for i in range(dg.dim)],
        out / "w_inf.csv",
    )
    if p.r > 0:
        y_bar = oracle.optimal_distribution(dg, p.r, p.lam).y_bar
        P0 = oracle.greedy_operator(dg, p.r, p.lam)
        metrics.append(("eigen_residual", float(np.abs(P0.matvec(y_bar) - y_bar).sum())))
        write_table_csv(
            ["index", "copy", "vertex", "y_bar"],
            [(i, *dg.locate(i), y_bar[i]) for i in range(dg.dim)],
            out / "y_bar.csv",
        )
    write_table_csv(["metric", "value"], metrics, out / "oracle.csv")
    return EXIT_OK


def cmd_stats(cfg: ScenarioConfig, out: Path, args) -> int:
    dg = build_scenario(cfg)
    p = cfg.dynamics()
    K = args.K if args.K is not None else cfg.K
    if K < 2:
        raise ConfigError("K must be >= 2 for error statistics")
    n_list = args.n_list or [cfg.n]
    y_inf = harness.stationary_reference(dg, p, cfg.max_t, cfg.tol)
    sweep = harness.agent_sweep(dg, p, n_list, K, cfg.horizon, cfg.seed, y_inf, cfg.snapshot_stride)
    rows = [
        (n, int(t), e, v)
        for n, st in sweep.items()
        for t, e, v in zip(st.times, st.e_norm, st.var_norm)
    ]
    write_table_csv(["n", "t", "e_norm", "var_norm"], rows, out / "error_stats.csv")
    return EXIT_OK


def cmd_table2(cfg: ScenarioConfig, out: Path, args) -> int:
    dg = build_scenario(cfg)
    grid = parse_grid(args.grid)
    K = args.K if args.K is not None else cfg.K
    if K < 2:
        raise ConfigError("K must be >= 2 for error statistics")
    t_bar = args.t_bar if args.t_bar is not None else cfg.horizon
    rows = harness.table2_grid(dg, cfg.dynamics(), grid, K, t_bar, cfg.seed)
    write_table_csv(
        ["r", "rho", "n", "e_norm", "var_norm"],
        [(r.r, r.rho, r.n, r.e_norm, r.var_norm) for r in rows],
        out / "table2.csv",
    )
    return EXIT_OK


def cmd_sweep_eps(cfg: ScenarioConfig, out: Path, args) -> int:
    dg = build_scenario(cfg)
    rows = oracle.epsilon_gap(dg, args.eps_list, cfg.dynamics(), cfg.max_t, cfg.tol, cfg.window)
    write_table_csv(
        ["eps", "gap", "converged", "t_stop"],
        [(r.eps, r.gap, r.converged, r.t_stop) for r in rows],
        out / "eps_gap.csv",
    )
    return EXIT_OK if all(r.converged for r in rows) else EXIT_NUMERIC


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="forage", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def scenario_args(p):
        p.add_argument("scenario", type=Path)
        p.add_argument("--out", type=Path, required=True)

    mf = sub.add_parser("mf", help="mean-field system").add_subparsers(dest="action", required=True)
    scenario_args(mf.add_parser("run", help="run the mean-field dynamics"))
    sw = sub.add_parser("swarm", help="finite swarm").add_subparsers(dest="action", required=True)
    scenario_args(sw.add_parser("run", help="simulate the finite swarm"))
    scenario_args(sub.add_parser("oracle", help="closed-form fixed point and optimal density"))

    st = sub.add_parser("stats", help="error statistics over seeded replicas")
    scenario_args(st)
    st.add_argument("--n-list", type=lambda s: _number_list(s, int), default=None)
    st.add_argument("--K", type=int, default=None)

    t2 = sub.add_parser("table2", help="error summary over an (r, rho, n) grid")
    scenario_args(t2)
    t2.add_argument("--grid", type=Path, required=True)
    t2.add_argument("--K", type=int, default=None)
    t2.add_argument("--t-bar", type=int, default=None)

    se = sub.add_parser("sweep-eps", help="distance to the optimal density per epsilon")
    scenario_args(se)
    se.add_argument("--eps-list", type=_number_list, required=True)
    return ap


COMMANDS = {
    ("mf", "run"): cmd_mf_run,
    ("swarm", "run"): cmd_swarm_run,
    ("oracle", None): cmd_oracle,
    ("stats", None): cmd_stats,
    ("table2", None): cmd_table2,
    ("sweep-eps", None): cmd_sweep_eps,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    handler = COMMANDS[(args.command, getattr(args, "action", None))]
    try:
        cfg = parse_scenario(args.scenario)
    except OSError as exc:
        print(f"forage: cannot read scenario: {exc}", file=sys.stderr)
        return EXIT_IO
    except ConfigError as exc:
        print(f"forage: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        args.out.mkdir(parents=True, exist_ok=True)
        return handler(cfg, args.out, args)
    except (ConfigError, InvalidGraph, ValueError) as exc:
        print(f"forage: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NoConvergence as exc:
        print(f"forage: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"forage: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
