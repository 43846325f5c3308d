"""Command-line harness.

Every command reads one INI config, writes its artifacts into an output
directory (--out, else $PENDULON_OUT, else the working directory) plus a
summary.json echoing the configuration. Reruns with the same config are
byte-identical: no wall clock in outputs, all sampling seeded and recorded.

Exit codes: 0 success, 1 config/validation failure, 2 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import lagrangian_orders as lagexp
from . import lattice as lattice_mod
from . import continuum, perturbation, reductions, travelwave
from .config import (ConfigError, chain_from_config, expansion_from_config,
                     load_config, parse_bool, parse_floats, read_section)
from .lattice import IntegrationError
from .continuum import PDEInstabilityError
from .travelwave import TWParams, TWSolveError


def _py(obj):
    """Coerce numpy scalars/arrays to plain Python for json.dump."""
    if isinstance(obj, np.ndarray):
        return [_py(x) for x in obj]
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, dict):
        return {k: _py(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_py(x) for x in obj]
    return obj


def _rel_l2(a, b):
    return float(np.linalg.norm(a - b) / np.linalg.norm(b))


def _write_json(payload, path):
    with open(path, "w") as f:
        json.dump(_py(payload), f, indent=2, sort_keys=True)
        f.write("\n")


# ---------------------------------------------------------------------------
# commands: each does all config parsing first, bails before compute on dry run
# ---------------------------------------------------------------------------

_INTEGRATION_SCHEMA = {"dt": float, "t_end": float, "snapshot_every": int}


def cmd_simulate_lattice(cp, args, out_dir, dry):
    params = chain_from_config(cp)
    lat = read_section(cp, "lattice",
                       {"n_sites": int, "k": float, "v": float,
                        "center": float, "index": int},
                       required=("n_sites", "k", "v"))
    integ = read_section(cp, "integration", _INTEGRATION_SCHEMA,
                         required=("dt", "t_end"))
    if dry:
        return None, None
    state = lattice_mod.moving_kink_state(params, lat["k"], lat["v"],
                                          lat["n_sites"],
                                          center=lat.get("center"),
                                          index=lat.get("index", 1))
    report = lattice_mod.simulate(state, integ["t_end"], integ["dt"], params,
                                  snapshot_every=integ.get("snapshot_every", 1))
    outputs = []
    for name, writer in (("lattice-trajectory.csv",
                          lambda p: lattice_mod.export_trajectory_csv(report, p)),
                         ("lattice-energy.csv",
                          lambda p: lattice_mod.export_energy_csv(report, p))):
        writer(os.path.join(out_dir, name))
        outputs.append(name)
    return lattice_mod.summary_dict(report, params), outputs


def cmd_simulate_pde(cp, args, out_dir, dry):
    params = chain_from_config(cp)
    dom = read_section(cp, "domain",
                       {"x_min": float, "x_max": float, "n_points": int},
                       required=("x_min", "x_max", "n_points"))
    pde = read_section(cp, "pde",
                       {"k": float, "v": float, "center": float, "index": int},
                       required=("k", "v"))
    integ = read_section(cp, "integration", _INTEGRATION_SCHEMA,
                         required=("dt", "t_end"))
    if dry:
        return None, None
    x = np.linspace(dom["x_min"], dom["x_max"], dom["n_points"])
    grid = continuum.kink_field_grid(params, pde["k"], pde["v"], x,
                                     center=pde.get("center"),
                                     index=pde.get("index", 1))
    snaps = continuum.evolve(grid, integ["t_end"], integ["dt"], params,
                             snapshot_every=integ.get("snapshot_every"))
    outputs = ["pde-fields.csv", "pde-energy.csv"]
    continuum.export_fields_csv(snaps, os.path.join(out_dir, outputs[0]))
    continuum.export_energy_csv(snaps, params, os.path.join(out_dir, outputs[1]))
    energies = np.array([continuum.energy_total(s, params) for s in snaps])
    drift = np.max(np.abs(energies - energies[0])) / (abs(energies[0]) + 1e-300)

    def charge(s):
        try:
            return continuum.topological_charge(s)
        except ValueError:
            return None

    results = {
        "t_final": snaps[-1].t,
        "n_snapshots": len(snaps),
        "energy_initial": energies[0],
        "energy_final": energies[-1],
        "max_energy_drift": drift,
        "charge_initial": charge(snaps[0]),
        "charge_final": charge(snaps[-1]),
    }
    return results, outputs


def cmd_solve_tw(cp, args, out_dir, dry):
    params = chain_from_config(cp)
    sec = read_section(cp, "tw",
                       {"v": float, "k": float, "pi_shift": parse_bool,
                        "index": int},
                       required=("v", "k"))
    dom = read_section(cp, "domain", {"half_width": float, "n_points": int})
    if dry:
        return None, None
    k = sec["k"]
    half = dom.get("half_width", 20.0 / k)
    z = np.linspace(-half, half, dom.get("n_points", 2001))
    guess = travelwave.kink_profile(z, k, sec["v"], params,
                                    pi_shift=sec.get("pi_shift", False),
                                    with_curvature=False,
                                    index=sec.get("index", 1))
    tw = TWParams.for_speed(sec["v"], params)
    prof = travelwave.solve_tw_bvp(guess, params, tw)
    outputs = ["tw-profile.csv"]
    travelwave.export_profile_csv(prof, params, os.path.join(out_dir, outputs[0]))
    res1, res2 = travelwave.tw_residual(prof, params)
    first = travelwave.tw_first_integral(prof, params)
    results = {
        "v": tw.v,
        "mu": tw.mu,
        "residual_eq1_linf": np.max(np.abs(res1)),
        "residual_eq2_linf": np.max(np.abs(res2)),
        "first_integral_mean": np.mean(first),
        "first_integral_rel_variance": np.var(first) / (np.mean(first) ** 2 + 1e-300),
    }
    return results, outputs


_GRID_SCHEMA = {"n_points": int, "half_width_factor": float}


def cmd_build_perturbative(cp, args, out_dir, dry):
    exp = expansion_from_config(cp)
    grid = read_section(cp, "grid", _GRID_SCHEMA)
    comp = read_section(cp, "compose", {"eps": float, "order": int})
    if dry:
        return None, None
    z = perturbation.kink_grid(exp, n=grid.get("n_points", 4001),
                               half_width=grid.get("half_width_factor", 25.0))
    sol = perturbation.build_perturbative(exp, z)
    eps = comp.get("eps", exp.eps)
    order = comp.get("order", 2)
    prof = perturbation.compose_series(sol, eps, order)
    chain = exp.to_chain_params(eps=eps)
    outputs = ["perturbative-orders.csv", "tw-profile.csv"]
    path = os.path.join(out_dir, outputs[0])
    with open(path, "w") as f:
        f.write("# schema: perturbative-orders v1\n")
        f.write("z,theta0,theta1,phi1,phi2\n")
        for row in zip(sol.z, sol.theta0, sol.theta1, sol.phi1, sol.phi2):
            f.write(",".join(repr(float(x)) for x in row) + "\n")
    travelwave.export_profile_csv(prof, chain, os.path.join(out_dir, outputs[1]))
    res1, res2 = travelwave.tw_residual(prof, chain)
    results = {
        "k": sol.k,
        "B": sol.B,
        "eps": eps,
        "order": order,
        "v": exp.speed(eps),
        "residual_eq1_linf": np.max(np.abs(res1)),
        "residual_eq2_linf": np.max(np.abs(res2)),
    }
    return results, outputs


def _extract_worker(task):
    exp, order, field, z, h_eps, n_points = task
    return perturbation.taylor_extract(exp, order, field, z,
                                       h_eps=h_eps, n_points=n_points)


def cmd_verify_expansion(cp, args, out_dir, dry):
    exp = expansion_from_config(cp)
    ver = read_section(cp, "verify",
                       {"eps_list": parse_floats, "order": int,
                        "h_eps": float, "extract_points": int,
                        "n_points": int, "half_width_factor": float})
    if dry:
        return None, None
    z = perturbation.kink_grid(exp, n=ver.get("n_points", 4001),
                               half_width=ver.get("half_width_factor", 25.0))
    eps_list = ver.get("eps_list", [0.01, 0.02, 0.05, 0.1])
    order = ver.get("order", 1)
    study = perturbation.residual_scaling(exp, eps_list, order, z=z)
    outputs = ["residual-scaling.csv", "verify-expansion.json"]
    perturbation.export_scaling_csv(study, os.path.join(out_dir, outputs[0]))

    h_eps = ver.get("h_eps", 0.02)
    n_ext = ver.get("extract_points", 6)
    tasks = [(exp, 1, "theta", z, h_eps, n_ext),
             (exp, 1, "phi", z, h_eps, n_ext),
             (exp, 2, "phi", z, h_eps, max(n_ext, 4))]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            extracted = list(pool.map(_extract_worker, tasks))
    else:
        extracted = [_extract_worker(t) for t in tasks]
    theta1_ext, phi1_ext, phi2_ext = extracted

    sol = perturbation.build_perturbative(exp, z)
    theta1_ext = perturbation.project_zero_mode(theta1_ext, z, exp)
    report = {
        "order": order,
        "eps_list": list(eps_list),
        "slope_res1": study.slope1,
        "slope_res2": study.slope2,
        "h_eps": h_eps,
        "extract_points": n_ext,
        "theta1_rel_l2": _rel_l2(theta1_ext, sol.theta1),
        "phi1_rel_l2": _rel_l2(phi1_ext, sol.phi1),
        "phi2_rel_l2": _rel_l2(phi2_ext, sol.phi2),
    }
    _write_json(report, os.path.join(out_dir, outputs[1]))
    return report, outputs


def cmd_speed_select(cp, args, out_dir, dry):
    params = chain_from_config(cp)
    stiff_sec = read_section(cp, "stiff",
                             {"ladder": parse_floats, "v_probe": parse_floats,
                              "n_points": int})
    if dry:
        return None, None
    sel = reductions.selected_speed(params)
    print(f"v_star = ±{sel.v_star!r}")
    print(f"mu_star = {sel.mu_star!r}")
    results = {"v_star": sel.v_star, "mu_star": sel.mu_star}
    if params.R > 0:
        results["kink_width_parameter"] = reductions.selected_kink_width(params)
    outputs = []
    if args.stiff:
        report = reductions.stiff_limit_experiment(
            params,
            stiffness_ladder=stiff_sec.get("ladder"),
            v_probe=stiff_sec.get("v_probe"),
            n_points=stiff_sec.get("n_points", 2001))
        outputs.append("stiff-limit.csv")
        reductions.export_stiff_csv(report, os.path.join(out_dir, outputs[0]))
        results["stiff_cells"] = [
            {"h2": c.h2, "v": c.v, "converged": c.converged,
             "max_abs_phi": c.max_abs_phi, "residual": c.residual}
            for c in report.cells]
    return results, outputs


def cmd_verify_lagrangian(cp, args, out_dir, dry):
    exp = expansion_from_config(cp)
    lag = read_section(cp, "lagrangian",
                       {"n_samples": int, "seed": int, "n_points": int,
                        "half_width": float, "h_eps": float,
                        "taylor_points": int})
    if dry:
        return None, None
    n_samples = lag.get("n_samples", 100)
    seed = lag.get("seed", 0)
    z = np.linspace(-lag.get("half_width", 8.0), lag.get("half_width", 8.0),
                    lag.get("n_points", 257))
    h_eps = lag.get("h_eps", 0.05)
    taylor_points = lag.get("taylor_points", 9)

    oracle_max = [0.0, 0.0, 0.0]
    aux_max = [0.0, 0.0, 0.0]
    el_gap_max = 0.0
    for s in range(n_samples):
        sample = lagexp.smooth_sample(exp, z, seed=seed + s)
        exact = lagexp.eval_L0_L1_L2(sample)
        taylor = lagexp.taylor_lagrangian_coefficients(sample, h_eps=h_eps,
                                                       n_points=taylor_points)
        for k in range(3):
            scale = np.max(np.abs(taylor[k])) + 1e-300
            oracle_max[k] = max(oracle_max[k],
                                float(np.max(np.abs(exact[k] - taylor[k])) / scale))
            aux_max[k] = max(aux_max[k], lagexp.auxiliary_check(sample, k))
        e10, e21, _ = lagexp.el_identities(sample)
        el_gap_max = max(el_gap_max, float(np.max(np.abs(e10 - e21))))

    slaving = lagexp.slaving_consistency(
        exp, perturbation.kink_grid(exp, n=2001, half_width=25.0))
    report = {
        "seed": seed,
        "n_samples": n_samples,
        "oracle_rel_max": {"L0": oracle_max[0], "L1": oracle_max[1],
                           "L2": oracle_max[2]},
        "auxiliary_max": {"order0": aux_max[0], "order1": aux_max[1],
                          "order2": aux_max[2]},
        "el_identity_gap_max": el_gap_max,
        "slaving": slaving,
    }
    outputs = ["verify-lagrangian.json"]
    _write_json(report, os.path.join(out_dir, outputs[0]))
    return report, outputs


_COMMANDS = {
    "simulate-lattice": cmd_simulate_lattice,
    "simulate-pde": cmd_simulate_pde,
    "solve-tw": cmd_solve_tw,
    "build-perturbative": cmd_build_perturbative,
    "verify-expansion": cmd_verify_expansion,
    "speed-select": cmd_speed_select,
    "verify-lagrangian": cmd_verify_lagrangian,
}


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="pendulon",
        description="Double-pendulum chain laboratory: simulation, "
                    "travelling waves, and expansion checks.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="INI config file")
        p.add_argument("--out", default=None, help="output directory")
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--dry-run", action="store_true")
        if name == "speed-select":
            p.add_argument("--stiff", action="store_true",
                           help="also run the confinement-stiffness sweep")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handler = _COMMANDS[args.command]
    out_dir = args.out or os.environ.get("PENDULON_OUT") or "."
    try:
        if not args.dry_run:
            os.makedirs(out_dir, exist_ok=True)
        cp = load_config(args.config)
        results, outputs = handler(cp, args, out_dir, args.dry_run)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return 1
    except (TWSolveError, IntegrationError, PDEInstabilityError,
            RuntimeError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    if args.dry_run:
        print("config ok")
        return 0
    summary = {
        "command": args.command,
        "config": {s: dict(cp.items(s)) for s in cp.sections()},
        "results": results,
        "outputs": outputs,
    }
    _write_json(summary, os.path.join(out_dir, "summary.json"))
    for name in outputs + ["summary.json"]:
        print(f"wrote {os.path.join(out_dir, name)}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
