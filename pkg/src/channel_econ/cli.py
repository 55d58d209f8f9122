"""Command-line frontend.

Every subcommand loads the JSON config (flag-overridable), writes one or
more CSVs plus a deterministic JSON manifest into the output directory, and
prints a short summary.  Exit codes: 0 success, 2 configuration error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import channel_analytics as ca
from . import market_analytics as ma
from . import mc_simulation as mc
from . import star_topology as star_mod
from .config import ConfigError, RunConfig, Topology, config_sha256, load_config
from .export import export_csv, write_manifest
from .model import PairParams, ParameterError, PowerLaw, Rng, Uniform, World

_WORLD_TAG = {World.NO_LIGHTNING: "no_lightning", World.WITH_LIGHTNING: "with_lightning"}


def _parse_grid_flag(text: str, name: str):
    """Grid override: a number, a comma list, or start:stop:num[:log|linear]."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) not in (3, 4):
            raise ConfigError(f"{name}: expected start:stop:num[:spacing], got {text!r}")
        spec = {"start": parts[0], "stop": parts[1], "num": parts[2]}
        spec["spacing"] = parts[3] if len(parts) == 4 else "log"
        try:
            return {
                "start": float(spec["start"]),
                "stop": float(spec["stop"]),
                "num": int(spec["num"]),
                "spacing": spec["spacing"],
            }
        except ValueError as exc:
            raise ConfigError(f"{name}: {exc}") from exc
    if "," in text:
        try:
            return [float(v) for v in text.split(",") if v]
        except ValueError as exc:
            raise ConfigError(f"{name}: {exc}") from exc
    try:
        return [float(text)]
    except ValueError as exc:
        raise ConfigError(f"{name}: {exc}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="channel-econ",
        description="Payment-channel economics: analytic curves, Monte-Carlo "
        "simulations, and market equilibria, exported as CSV.",
    )
    parser.add_argument("--version", action="version", version=f"channel-econ {__version__}")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file")
    common.add_argument("--seed", type=int, help="master RNG seed override")
    common.add_argument("--out", help="output directory override")
    common.add_argument("--phi", help="phi grid override: x | a,b,c | start:stop:num[:spacing]")
    common.add_argument("-n", "--n", dest="n", help="user-count grid override")
    common.add_argument("-w", "--w", dest="w", help="capacity grid override")
    common.add_argument("--replications", type=int, help="simulation replications override")
    scale = common.add_mutually_exclusive_group()
    scale.add_argument(
        "--scaled-down", dest="scaled_down", action="store_true", default=None,
        help="desk-scale simulation budgets (default)",
    )
    scale.add_argument(
        "--full", dest="scaled_down", action="store_false",
        help="paper-scale simulation budgets",
    )

    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in _HANDLERS.items():
        if name == "sim":
            continue
        p = sub.add_parser(name, parents=[common], help=fn.__doc__)
        if name == "reproduce":
            p.add_argument("figure", choices=sorted(_FIGURES), help="figure family id")
    sim = sub.add_parser("sim", help="Monte-Carlo experiments")
    sim_sub = sim.add_subparsers(dest="sim_command", required=True)
    for name in ("reset-radius", "capacity", "demand", "equilibrium", "network"):
        sim_sub.add_parser(name, parents=[common])
    return parser


def _resolve_config(args) -> RunConfig:
    overrides = {
        "seed": getattr(args, "seed", None),
        "output_dir": getattr(args, "out", None),
        "replications": getattr(args, "replications", None),
    }
    if getattr(args, "scaled_down", None) is not None:
        overrides["scaled_down"] = args.scaled_down
    for flag, key in (("phi", "phi_grid"), ("n", "n_grid"), ("w", "w_grid")):
        raw = getattr(args, flag, None)
        if raw is not None:
            overrides[key] = _parse_grid_flag(raw, key)
    return load_config(getattr(args, "config", None), overrides)


def _finish(cfg: RunConfig, command: str, outputs: list[Path], extras: dict, lines: list[str]) -> int:
    manifest = write_manifest(
        Path(cfg.output_dir) / f"manifest_{command.replace(' ', '_')}.json",
        {
            "tool": "channel-econ",
            "version": __version__,
            "command": command,
            "seed": cfg.seed,
            "config": cfg.raw,
            "config_sha256": config_sha256(cfg),
            "outputs": [p.name for p in outputs],
            "extras": extras,
        },
    )
    for line in lines:
        print(line)
    for p in outputs:
        print(f"  wrote {p}")
    print(f"  wrote {manifest}")
    return 0


# ---------------------------------------------------------------------------
# analytic subcommands


def _cmd_lifetime(cfg: RunConfig, out: Path) -> int:
    """Optimal initialization and expected lifetime per capacity."""
    rows = []
    for w in cfg.w_grid:
        m_star, t_days = ca.optimal_initialization(cfg.pair, w)
        rows.append((w, m_star, t_days))
    path = export_csv(
        ["w_transfers", "m_star_transfers", "lifetime_days"], rows, out / "lifetime.csv"
    )
    last = rows[-1]
    return _finish(
        cfg, "lifetime", [path], {},
        [f"lifetime: w={last[0]:g} -> m*={last[1]:g}, T={last[2]:g} days"],
    )


def _cmd_capacity(cfg: RunConfig, out: Path) -> int:
    """Optimal channel capacity and fee along the phi grid."""
    z = _typical_transfer_size(cfg)
    rows = []
    for phi in cfg.phi_grid:
        w_opt = ca.optimal_capacity(cfg.market, cfg.pair, z, phi)
        rows.append(
            (
                phi,
                w_opt,
                ca.fee_approx(cfg.market, cfg.pair, z, w_opt, phi),
                ca.fee_exact(cfg.market, cfg.pair, z, w_opt, phi),
                ca.optimal_fee(cfg.market, cfg.pair, z, phi),
            )
        )
    path = export_csv(
        [
            "phi_btc_per_record",
            "w_opt_transfers",
            "fee_approx_btc",
            "fee_exact_btc",
            "fee_opt_closed_btc",
        ],
        rows,
        out / "capacity.csv",
    )
    return _finish(
        cfg, "capacity", [path], {"z_btc": z},
        [f"capacity: z={z:g}, w_opt({rows[0][0]:g})={rows[0][1]:.4g}"],
    )


def _typical_transfer_size(cfg: RunConfig) -> float:
    dist = cfg.dist
    if isinstance(dist, PowerLaw):
        return 2.0 * dist.z_min  # median of the power law
    if isinstance(dist, Uniform):
        return dist.z_max / 2.0
    return dist.z


def _cmd_thresholds(cfg: RunConfig, out: Path) -> int:
    """Venue-choice thresholds along the phi grid."""
    mult = 2.0 if cfg.topology is Topology.STAR else 1.0
    rows = []
    for phi in cfg.phi_grid:
        t = ma.thresholds(cfg.market, cfg.pair, phi, fee_multiplier=mult)
        rows.append((phi, t.t_nl, t.t_nb, t.t_lb))
    path = export_csv(
        ["phi_btc_per_record", "t_nl_btc", "t_nb_btc", "t_lb_btc"],
        rows,
        out / "thresholds.csv",
    )
    phi, t_nl, t_nb, t_lb = rows[-1]
    return _finish(
        cfg, "thresholds", [path], {"fee_multiplier": mult},
        [f"thresholds at phi={phi:g}: t_NL={t_nl:.6g}  t_NB={t_nb:.6g}  t_LB={t_lb:.6g}"],
    )


def _demand_point(cfg: RunConfig, world: World, phi: float) -> ma.DemandPoint:
    if world is World.NO_LIGHTNING:
        return ma.demand_no_lightning(cfg.market, cfg.pair, cfg.dist, phi)
    if cfg.topology is Topology.STAR:
        return ma.demand_with_lightning(
            cfg.market, cfg.pair, cfg.dist, phi,
            fee_multiplier=star_mod.STAR_FEE_MULTIPLIER,
            reset_channels=star_mod.STAR_RESET_CHANNELS,
        )
    return ma.demand_with_lightning(cfg.market, cfg.pair, cfg.dist, phi)


def _cmd_demand(cfg: RunConfig, out: Path) -> int:
    """Analytic per-pair record demand along the phi grid."""
    outputs = []
    summary = []
    for world in cfg.worlds():
        rows = []
        for phi in cfg.phi_grid:
            d = _demand_point(cfg, world, phi)
            rows.append(
                (
                    phi,
                    d.records_per_day,
                    d.lightning_tx,
                    d.blockchain_tx,
                    d.lightning_volume,
                    d.blockchain_volume,
                )
            )
        tag = _WORLD_TAG[world]
        outputs.append(
            export_csv(
                [
                    "phi_btc_per_record",
                    "records_per_pair_per_day",
                    "lightning_tx_per_day",
                    "blockchain_tx_per_day",
                    "lightning_volume_btc_per_day",
                    "blockchain_volume_btc_per_day",
                ],
                rows,
                out / f"demand_{tag}.csv",
            )
        )
        summary.append(f"demand[{tag}]: D({rows[0][0]:g})={rows[0][1]:.6g} records/day")
    return _finish(cfg, "demand", outputs, {"topology": cfg.topology.value}, summary)


def _equilibrium(cfg: RunConfig, world: World, n: float) -> ma.EquilibriumResult:
    if cfg.topology is Topology.STAR and world is World.WITH_LIGHTNING:
        return ma.equilibrium_fee(
            cfg.market, cfg.pair, cfg.dist, n, world,
            fee_multiplier=star_mod.STAR_FEE_MULTIPLIER,
            reset_channels=star_mod.STAR_RESET_CHANNELS,
            method="root",
        )
    return ma.equilibrium_fee(cfg.market, cfg.pair, cfg.dist, n, world)


def _cmd_equilibrium(cfg: RunConfig, out: Path) -> int:
    """Market equilibrium at the largest configured user count."""
    n = cfg.n_grid[-1]
    rows = []
    for world in cfg.worlds():
        res = _equilibrium(cfg, world, n)
        d = res.demand
        rows.append(
            (
                n,
                _WORLD_TAG[world],
                res.phi_eq,
                res.miner_revenue,
                res.regime.value,
                d.records_per_day,
                d.lightning_tx,
                d.blockchain_tx,
            )
        )
    path = export_csv(
        [
            "n_users",
            "world",
            "phi_eq_btc_per_record",
            "miner_revenue_btc_per_day",
            "regime",
            "records_per_pair_per_day",
            "lightning_tx_per_day",
            "blockchain_tx_per_day",
        ],
        rows,
        out / "equilibrium.csv",
    )
    lines = [
        f"equilibrium[{r[1]}] at n={n:g}: phi={r[2]:.6g}, revenue={r[3]:.6g} BTC/day ({r[4]})"
        for r in rows
    ]
    return _finish(cfg, "equilibrium", [path], {}, lines)


def _cmd_price_curve(cfg: RunConfig, out: Path) -> int:
    """Equilibrium price and venue split along the n grid."""
    outputs = []
    lines = []
    for world in cfg.worlds():
        rows = []
        for n in cfg.n_grid:
            res = _equilibrium(cfg, world, n)
            d = res.demand
            pairs = n / 2.0
            rows.append(
                (
                    n,
                    res.phi_eq,
                    res.miner_revenue,
                    res.regime.value,
                    pairs * d.lightning_tx,
                    pairs * d.blockchain_tx,
                    pairs * d.records_per_day,
                )
            )
        tag = _WORLD_TAG[world]
        outputs.append(
            export_csv(
                [
                    "n_users",
                    "phi_eq_btc_per_record",
                    "miner_revenue_btc_per_day",
                    "regime",
                    "market_lightning_tx_per_day",
                    "market_blockchain_tx_per_day",
                    "market_records_per_day",
                ],
                rows,
                out / f"price_curve_{tag}.csv",
            )
        )
        lines.append(f"price-curve[{tag}]: phi({rows[-1][0]:.3g} users)={rows[-1][1]:.6g}")
    return _finish(cfg, "price-curve", outputs, {"topology": cfg.topology.value}, lines)


def _cmd_star(cfg: RunConfig, out: Path) -> int:
    """Star-topology demand curve and equilibrium (doubled lightning cost)."""
    if not cfg.pair.symmetric():
        raise ConfigError("star topology analysis needs a symmetric pair")
    stp = star_mod.StarParams.uniform(2, cfg.pair.lambda_a)
    curve, eq = star_mod.star_market(
        cfg.market, stp, cfg.dist, cfg.n_grid[-1], cfg.phi_grid
    )
    rows = [
        (
            d.phi,
            d.records_per_day,
            d.lightning_tx,
            d.blockchain_tx,
            d.lightning_volume,
            d.blockchain_volume,
        )
        for d in curve
    ]
    demand_path = export_csv(
        [
            "phi_btc_per_record",
            "records_per_user_pair_per_day",
            "lightning_tx_per_day",
            "blockchain_tx_per_day",
            "lightning_volume_btc_per_day",
            "blockchain_volume_btc_per_day",
        ],
        rows,
        out / "star_demand.csv",
    )
    eq_path = export_csv(
        ["n_users", "phi_eq_btc_per_record", "miner_revenue_btc_per_day", "regime"],
        [(eq.n_users, eq.phi_eq, eq.miner_revenue, eq.regime.value)],
        out / "star_equilibrium.csv",
    )
    pair_eq = ma.equilibrium_fee(
        cfg.market, cfg.pair, cfg.dist, cfg.n_grid[-1], World.WITH_LIGHTNING, method="root"
    )
    extras = {
        "topology": "star",
        "pairs_phi_eq_same_n": pair_eq.phi_eq,
        "per_user_fee_multiplier": star_mod.STAR_FEE_MULTIPLIER,
    }
    return _finish(
        cfg, "star", [demand_path, eq_path], extras,
        [f"star equilibrium at n={eq.n_users:g}: phi={eq.phi_eq:.6g} "
         f"(pairs topology: {pair_eq.phi_eq:.6g})"],
    )


# ---------------------------------------------------------------------------
# simulation subcommands


def _protocol(cfg: RunConfig) -> mc.Protocol:
    proto = mc.DESK_PROTOCOL if cfg.scaled_down else mc.FULL_PROTOCOL
    if cfg.replications is not None:
        from dataclasses import replace

        proto = replace(proto, replications=cfg.replications, eq_replications=cfg.replications)
    return proto


def _sim_rules(cfg: RunConfig, proto: mc.Protocol):
    """Reset-radius and capacity fits that the later sim stages build on."""
    rng = Rng(cfg.seed)
    rr = mc.reset_radius_regression(
        proto.radius_w_grid, proto.radius_phi, cfg.market, cfg.pair, cfg.dist,
        proto.replications, proto.horizon_days, rng,
    )
    cap = mc.capacity_regression(
        proto.capacity_phi_grid, cfg.market, cfg.pair, cfg.dist,
        proto.replications, proto.horizon_days, rng, rr.radius_for,
    )
    return rng, rr, cap


def _cmd_sim_reset_radius(cfg: RunConfig, out: Path) -> int:
    """Reset-radius scan at w=10 plus the R*(w) regression."""
    proto = _protocol(cfg)
    rng = Rng(cfg.seed)
    scan = mc.optimal_reset_radius(
        10.0, proto.radius_phi, cfg.market, cfg.pair, cfg.dist,
        proto.replications, proto.horizon_days, rng,
    )
    scan_path = export_csv(
        ["reset_radius_btc", "mean_net_utility_btc", "mean_blockchain_hits_records"],
        list(zip(scan.radii, scan.mean_utility, scan.mean_hits)),
        out / "sim_reset_radius_scan.csv",
    )
    reg = mc.reset_radius_regression(
        proto.radius_w_grid, proto.radius_phi, cfg.market, cfg.pair, cfg.dist,
        proto.replications, proto.horizon_days, rng,
    )
    reg_path = export_csv(
        ["w_btc", "r_star_btc"],
        list(zip(reg.w_grid, reg.r_stars)),
        out / "sim_reset_radius_regression.csv",
    )
    extras = {"slope": reg.slope, "intercept": reg.intercept, "protocol": proto.name}
    return _finish(
        cfg, "sim reset-radius", [scan_path, reg_path], extras,
        [f"sim reset-radius: R*(w) ~ {reg.slope:.4f} w + {reg.intercept:.4f} "
         f"(w=10 scan optimum {scan.r_star:.3g})"],
    )


def _cmd_sim_capacity(cfg: RunConfig, out: Path) -> int:
    """Optimal capacity search per fee plus the log-log fit."""
    proto = _protocol(cfg)
    rng, rr, cap = _sim_rules(cfg, proto)
    rows = [
        (s.phi, s.w_star, s.utility, s.blockchain_cost, s.economic_cost)
        for s in cap.searches
    ]
    path = export_csv(
        [
            "phi_btc_per_record",
            "w_star_btc",
            "mean_net_utility_btc",
            "mean_blockchain_cost_btc",
            "economic_cost_btc",
        ],
        rows,
        out / "sim_capacity.csv",
    )
    extras = {
        "exponent": cap.exponent,
        "coefficient": cap.coefficient,
        "radius_slope": rr.slope,
        "radius_intercept": rr.intercept,
        "protocol": proto.name,
    }
    return _finish(
        cfg, "sim capacity", [path], extras,
        [f"sim capacity: w*(phi) ~ {cap.coefficient:.3g} * phi^{cap.exponent:.3f}"],
    )


def _cmd_sim_demand(cfg: RunConfig, out: Path) -> int:
    """Simulated demand curves with and without lightning."""
    proto = _protocol(cfg)
    rng, rr, cap = _sim_rules(cfg, proto)
    curve = mc.demand_curve_sim(
        proto.demand_phi_grid, cfg.market, cfg.pair, cfg.dist,
        proto.replications, proto.horizon_days, rng, cap.capacity_for, rr.radius_for,
    )
    rows = [
        (
            p.phi,
            p.records_per_day,
            p.records_no_lightning,
            p.lightning_tx,
            p.blockchain_tx,
            p.lightning_volume,
            p.blockchain_volume,
            p.adopted_fraction,
        )
        for p in curve.points
    ]
    path = export_csv(
        [
            "phi_btc_per_record",
            "records_with_lightning_per_day",
            "records_no_lightning_per_day",
            "lightning_tx_per_day",
            "blockchain_tx_per_day",
            "lightning_volume_btc_per_day",
            "blockchain_volume_btc_per_day",
            "lightning_adopted_fraction",
        ],
        rows,
        out / "sim_demand.csv",
    )
    extras = {
        "with_lightning_exponent": curve.with_lightning_exponent,
        "no_lightning_exponent": curve.no_lightning_exponent,
        "protocol": proto.name,
    }
    return _finish(
        cfg, "sim demand", [path], extras,
        [f"sim demand: exponents with={curve.with_lightning_exponent:.3f}, "
         f"without={curve.no_lightning_exponent:.3f}"],
    )


def _cmd_sim_equilibrium(cfg: RunConfig, out: Path) -> int:
    """Simulated equilibrium fee curve over the user-count grid."""
    proto = _protocol(cfg)
    rng, rr, cap = _sim_rules(cfg, proto)
    outputs = []
    extras = {"protocol": proto.name}
    lines = []
    for world in cfg.worlds():
        curve = mc.equilibrium_curve_sim(
            proto.n_grid, cfg.market, cfg.pair, cfg.dist,
            proto.eq_replications, proto.horizon_days, rng,
            cap.capacity_for, rr.radius_for, world,
        )
        tag = _WORLD_TAG[world]
        outputs.append(
            export_csv(
                ["n_users", "phi_eq_mean_btc", "phi_eq_std_btc", "zero_fraction"],
                [
                    (p.n_users, p.phi_mean, p.phi_std, p.zero_fraction)
                    for p in curve.points
                ],
                out / f"sim_equilibrium_{tag}.csv",
            )
        )
        extras[f"growth_exponent_{tag}"] = curve.growth_exponent
        lines.append(f"sim equilibrium[{tag}]: phi ~ n^{curve.growth_exponent:.3f}")
    return _finish(cfg, "sim equilibrium", outputs, extras, lines)


def _cmd_sim_network(cfg: RunConfig, out: Path) -> int:
    """Whole-network sweep across user counts and block sizes."""
    proto = _protocol(cfg)
    rng, rr, cap = _sim_rules(cfg, proto)
    rows = mc.network_sweep(
        proto.network_n_grid, cfg.market, cfg.pair, cfg.dist, proto.tau_values,
        proto.eq_replications, proto.horizon_days, rng, cap.capacity_for, rr.radius_for,
    )
    path = export_csv(
        [
            "tau_records_per_day",
            "n_users",
            "phi_eq_btc",
            "phi_eq_no_lightning_btc",
            "market_records_per_day",
            "market_lightning_tx_per_day",
            "market_blockchain_tx_per_day",
            "market_lightning_volume_btc_per_day",
            "market_blockchain_volume_btc_per_day",
            "miner_revenue_btc_per_day",
            "utility_per_user_per_day_btc",
        ],
        [
            (
                r.tau,
                r.n_users,
                r.phi_eq,
                r.phi_eq_no_lightning,
                r.records_per_day,
                r.lightning_tx_per_day,
                r.blockchain_tx_per_day,
                r.lightning_volume_per_day,
                r.blockchain_volume_per_day,
                r.miner_revenue,
                r.utility_per_user_per_day,
            )
            for r in rows
        ],
        out / "sim_network.csv",
    )
    top = [r for r in rows if r.n_users == max(x.n_users for x in rows)]
    by_tau = {r.tau: r for r in top}
    taus = sorted(by_tau)
    extras = {"protocol": proto.name}
    lines = ["sim network: wrote per-(tau, n) stats"]
    if len(taus) == 2 and by_tau[taus[1]].phi_eq > 0:
        a, b = by_tau[taus[0]], by_tau[taus[1]]
        extras["phi_factor_at_top_n"] = a.phi_eq / b.phi_eq
        extras["revenue_factor_at_top_n"] = a.miner_revenue / b.miner_revenue
        extras["utility_factor_at_top_n"] = (
            b.utility_per_user_per_day / a.utility_per_user_per_day
        )
        lines.append(
            f"  doubling tau at n={a.n_users:.3g}: phi /{extras['phi_factor_at_top_n']:.2f}, "
            f"revenue /{extras['revenue_factor_at_top_n']:.2f}, "
            f"utility x{extras['utility_factor_at_top_n']:.2f}"
        )
    return _finish(cfg, "sim network", [path], extras, lines)


# ---------------------------------------------------------------------------
# reproduce


def _fig_channel_lifetime(cfg: RunConfig, out: Path):
    ps = [0.1, 0.2, 0.3, 0.4, 0.6, 0.7, 0.8, 0.9]
    w = 100
    rows = []
    for m in range(w + 1):
        rows.append(
            [m] + [ca.lifetime_transfers_asymmetric(w, m, p) for p in ps]
        )
    headers = ["m_transfers"] + [f"lifetime_transfers_p_{p:g}" for p in ps]
    return [export_csv(headers, rows, out / "fig_channel_lifetime.csv")], {"w": w}


def _fig_demand(cfg: RunConfig, out: Path, dist, tag: str, grid):
    rows = []
    for phi in grid:
        d0 = ma.demand_no_lightning(cfg.market, cfg.pair, dist, phi)
        ds = ma.demand_with_lightning(cfg.market, cfg.pair, dist, phi)
        rows.append(
            (
                phi,
                d0.records_per_day,
                ds.records_per_day,
                ds.lightning_tx,
                ds.blockchain_tx,
                ds.lightning_volume,
                ds.blockchain_volume,
            )
        )
    headers = [
        "phi_btc_per_record",
        "records_no_lightning_per_day",
        "records_with_lightning_per_day",
        "lightning_tx_per_day",
        "blockchain_tx_per_day",
        "lightning_volume_btc_per_day",
        "blockchain_volume_btc_per_day",
    ]
    return [export_csv(headers, rows, out / f"fig_demand_{tag}.csv")], {}


def _fig_demand_powerlaw(cfg, out):
    return _fig_demand(cfg, out, cfg.dist if isinstance(cfg.dist, PowerLaw) else PowerLaw(0.001),
                       "powerlaw", np.geomspace(1e-8, 1.0, 200))


def _fig_demand_uniform(cfg, out):
    uni = cfg.dist if isinstance(cfg.dist, Uniform) else Uniform(1.0)
    outputs, _ = _fig_demand(cfg, out, uni, "uniform", np.geomspace(1e-7, 1.5e-2, 200))
    # asymmetric variant shares the figure family
    pair_a = PairParams(8.0, 2.0) if cfg.pair.symmetric() else cfg.pair
    rows = [
        (
            phi,
            ma.demand_no_lightning(cfg.market, pair_a, uni, phi).records_per_day,
            ma.demand_with_lightning(cfg.market, pair_a, uni, phi).records_per_day,
        )
        for phi in np.geomspace(1e-7, 1.5e-2, 200)
    ]
    outputs.append(
        export_csv(
            ["phi_btc_per_record", "records_no_lightning_per_day", "records_with_lightning_per_day"],
            rows,
            out / "fig_demand_uniform_asymmetric.csv",
        )
    )
    return outputs, {}


def _fig_price(cfg: RunConfig, out: Path, dist, tag: str, n_grid):
    rows = []
    for n in n_grid:
        no_l = ma.equilibrium_fee(cfg.market, cfg.pair, dist, n, World.NO_LIGHTNING)
        with_l = ma.equilibrium_fee(
            cfg.market, cfg.pair, dist, n, World.WITH_LIGHTNING,
            method="auto" if isinstance(dist, PowerLaw) else "root",
        )
        rows.append(
            (
                n,
                no_l.phi_eq,
                with_l.phi_eq,
                no_l.miner_revenue,
                with_l.miner_revenue,
                with_l.regime.value,
            )
        )
    headers = [
        "n_users",
        "phi_eq_no_lightning_btc",
        "phi_eq_with_lightning_btc",
        "revenue_no_lightning_btc_per_day",
        "revenue_with_lightning_btc_per_day",
        "regime_with_lightning",
    ]
    return [export_csv(headers, rows, out / f"fig_price_{tag}.csv")], {}


def _fig_price_powerlaw(cfg, out):
    dist = cfg.dist if isinstance(cfg.dist, PowerLaw) else PowerLaw(0.001)
    return _fig_price(cfg, out, dist, "powerlaw", np.geomspace(1e4, 1e10, 150))


def _fig_price_uniform(cfg, out):
    dist = cfg.dist if isinstance(cfg.dist, Uniform) else Uniform(1.0)
    return _fig_price(cfg, out, dist, "uniform", np.geomspace(1e4, 1e9, 120))


def _fig_txs(cfg: RunConfig, out: Path, dist, tag: str, n_grid):
    rows = []
    for n in n_grid:
        pairs = n / 2.0
        res = {}
        for world in World:
            eq = ma.equilibrium_fee(
                cfg.market, cfg.pair, dist, n, world,
                method="auto" if isinstance(dist, PowerLaw) else "root",
            )
            d = eq.demand
            res[world] = (
                pairs * d.lightning_tx,
                pairs * d.blockchain_tx,
                eq.phi_eq,
            )
        light, chain, phi_w = res[World.WITH_LIGHTNING]
        _, chain0, phi_0 = res[World.NO_LIGHTNING]
        rows.append((n, phi_w, light, chain, light + chain, phi_0, chain0))
    headers = [
        "n_users",
        "phi_eq_with_lightning_btc",
        "market_lightning_tx_per_day",
        "market_blockchain_tx_per_day",
        "market_total_tx_per_day",
        "phi_eq_no_lightning_btc",
        "market_tx_no_lightning_per_day",
    ]
    path = export_csv(headers, rows, out / f"fig_txs_{tag}.csv")
    totals = [r[4] for r in rows]
    jumps = [
        (abs(b - a) / max(a, 1e-12), n)
        for a, b, n in zip(totals, totals[1:], n_grid[1:])
    ]
    worst_jump, where = max(jumps)
    extras = {"largest_relative_jump": worst_jump, "largest_jump_at_n": where}
    return [path], extras


def _fig_txs_powerlaw(cfg, out):
    dist = cfg.dist if isinstance(cfg.dist, PowerLaw) else PowerLaw(0.001)
    return _fig_txs(cfg, out, dist, "powerlaw", np.geomspace(1e4, 1e10, 150))


def _fig_txs_uniform(cfg, out):
    dist = cfg.dist if isinstance(cfg.dist, Uniform) else Uniform(1.0)
    return _fig_txs(cfg, out, dist, "uniform", np.geomspace(1e4, 1e9, 120))


_FIGURES = {
    "channel-lifetime": _fig_channel_lifetime,
    "demand-powerlaw": _fig_demand_powerlaw,
    "demand-uniform": _fig_demand_uniform,
    "price-powerlaw": _fig_price_powerlaw,
    "price-uniform": _fig_price_uniform,
    "txs-powerlaw": _fig_txs_powerlaw,
    "txs-uniform": _fig_txs_uniform,
    "sim-reset-radius": None,
    "sim-capacity": None,
    "sim-demand": None,
    "sim-price": None,
    "sim-network": None,
}

_SIM_FIGURE_ALIASES = {
    "sim-reset-radius": _cmd_sim_reset_radius,
    "sim-capacity": _cmd_sim_capacity,
    "sim-demand": _cmd_sim_demand,
    "sim-price": _cmd_sim_equilibrium,
    "sim-network": _cmd_sim_network,
}


def _cmd_reproduce(cfg: RunConfig, out: Path, figure: str) -> int:
    """Emit the CSV backing one figure family."""
    if figure in _SIM_FIGURE_ALIASES:
        return _SIM_FIGURE_ALIASES[figure](cfg, out)
    outputs, extras = _FIGURES[figure](cfg, out)
    return _finish(cfg, f"reproduce {figure}", outputs, extras, [f"reproduce {figure}"])


# ---------------------------------------------------------------------------
# dispatch

_HANDLERS = {
    "lifetime": _cmd_lifetime,
    "capacity": _cmd_capacity,
    "thresholds": _cmd_thresholds,
    "demand": _cmd_demand,
    "equilibrium": _cmd_equilibrium,
    "price-curve": _cmd_price_curve,
    "star": _cmd_star,
    "sim": None,
    "reproduce": _cmd_reproduce,
}

_SIM_HANDLERS = {
    "reset-radius": _cmd_sim_reset_radius,
    "capacity": _cmd_sim_capacity,
    "demand": _cmd_sim_demand,
    "equilibrium": _cmd_sim_equilibrium,
    "network": _cmd_sim_network,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _resolve_config(args)
        out = Path(cfg.output_dir)
        if args.command == "sim":
            return _SIM_HANDLERS[args.sim_command](cfg, out)
        if args.command == "reproduce":
            return _cmd_reproduce(cfg, out, args.figure)
        return _HANDLERS[args.command](cfg, out)
    except (ConfigError, ParameterError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (ma.QuadratureFailure, ma.BracketFailure) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except ca.DomainError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
