"""Command line front end.

Three subcommands share one config format:

  elphase simulate --config planar-interface-ions --out results/
  elphase study    --config planar-interface-neutral --deltas 0.1,0.05,0.025
  elphase profiles --config planar-interface-ions

Exit codes: 0 success, 1 solver failure at runtime, 2 bad usage or config.
"""

from __future__ import annotations

import argparse
import os
import sys as _sys

import numpy as np

from . import io as eio
from .config import (ConfigError, PRESETS, _float, _get, _int, _vec,
                     build_case_factory, build_simulation, build_mixture,
                     load_config, resolved_config, study_deltas)
from .evolution import run
from .sharp_interface import delta_convergence_study, solve_inner_profiles


def _outdir(args, cfg: dict) -> str:
    if args.out is not None:
        return args.out
    env = os.environ.get("ELPHASE_OUT")
    if env:
        return env
    return _get(cfg, "output.dir", default="out")


def _cmd_simulate(args) -> int:
    cfg = load_config(args.config)
    sys_, state, step = build_simulation(cfg)
    traj = run(sys_, state, step)
    outdir = _outdir(args, cfg)
    eio.write_snapshots(outdir, sys_, traj)
    eio.write_scalars(outdir, traj)
    eio.write_meta(outdir, resolved_config(cfg), {
        "command": "simulate",
        "steps": len(traj.scalars) - 1,
        "final_time": traj.scalars[-1]["t"] if traj.scalars else 0.0,
    })
    print(f"simulate: {len(traj.snapshots)} snapshots -> {outdir}")
    return 0


def _cmd_study(args) -> int:
    cfg = load_config(args.config)
    deltas = study_deltas(cfg, args.deltas)
    factory = build_case_factory(cfg)
    rows = delta_convergence_study(factory, deltas)
    outdir = _outdir(args, cfg)
    eio.write_jump_residuals(outdir, rows)
    eio.write_meta(outdir, resolved_config(cfg), {
        "command": "study",
        "deltas": ",".join(repr(d) for d in deltas),
    })
    for row in rows:
        worst = max(abs(v) for v in row.residuals.values())
        print(f"study: delta={row.delta:g} worst residual {worst:.3e}")
    print(f"study: {len(rows)} rows -> {outdir}")
    return 0


def _cmd_profiles(args) -> int:
    cfg = load_config(args.config)
    mix = build_mixture(cfg)
    rho_minus = _vec(cfg, "profile.rho_minus", required=True)
    if rho_minus.size != mix.n_species:
        raise ConfigError("profile.rho_minus needs one entry per species")
    sol = solve_inner_profiles(
        mix, rho_minus,
        j0=_float(cfg, "profile.j0", 0.0),
        gamma=_float(cfg, "phasefield.gamma", 2.0),
        tau=_float(cfg, "phasefield.tau", 1.0),
        kinetic_denominator=_get(cfg, "profile.denominator", "sum-squared"),
        nz=_int(cfg, "profile.nz", 4001))
    outdir = _outdir(args, cfg)
    eio.write_inner_profile(outdir, sol)
    eio.write_meta(outdir, resolved_config(cfg), {
        "command": "profiles",
        "picard_iterations": sol.picard_iterations,
        "max_node_residual": sol.max_node_residual,
        "i_sigma": sol.i_sigma,
        "i_j": sol.i_j,
    })
    print(f"profiles: residual {sol.max_node_residual:.3e} -> {outdir}")
    return 0


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="elphase",
        description="1d two-phase electrolyte simulator and interface toolkit")
    sub = parser.add_subparsers(dest="command", required=True)
    presets = ", ".join(sorted(PRESETS))
    for name, fn, doc in (
            ("simulate", _cmd_simulate, "run one case and write csv output"),
            ("study", _cmd_study, "interface width refinement study"),
            ("profiles", _cmd_profiles, "solve the layer profiles directly")):
        p = sub.add_parser(name, help=doc)
        p.add_argument("--config", required=True,
                       help=f"config file path or preset name ({presets})")
        p.add_argument("--out", default=None,
                       help="output directory (overrides ELPHASE_OUT and config)")
        if name == "study":
            p.add_argument("--deltas", default=None,
                           help="comma list of decreasing interface widths")
        p.set_defaults(fn=fn)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return 2
    except (RuntimeError, FloatingPointError, ValueError,
            np.linalg.LinAlgError) as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
