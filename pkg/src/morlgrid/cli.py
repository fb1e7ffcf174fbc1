"""Command-line entry point: ``morlgrid {train,sweep,synth,validate-config}``.

Exit codes: 0 success, 2 validation error, 3 I/O error.
"""
from __future__ import annotations

import argparse
import dataclasses
import logging
import sys
from pathlib import Path

from . import exports
from .config import RunConfig, load_config
from .environment import rollout, write_timeseries, synth_day
from .errors import ConfigError, DataError, InvalidInputError
from .learner import KINDS, ScalarizationSpec, train
from .pareto import fair_point_index, sweep

log = logging.getLogger("morlgrid")

EXIT_OK, EXIT_VALIDATION, EXIT_IO = 0, 2, 3


def _parse_weights(text):
    try:
        values = tuple(float(x) for x in text.split(","))
    except ValueError:
        raise ConfigError("--weights", f"expected four comma-separated numbers, got {text!r}") from None
    if len(values) != 4:
        raise ConfigError("--weights", f"expected 4 weights (w,s,g,a), got {len(values)}")
    return values


def resolve_config(args):
    cfg = load_config(args.config) if args.config else RunConfig()
    learner = cfg.learner
    if getattr(args, "seed", None) is not None:
        learner = dataclasses.replace(learner, seed=args.seed)
    if getattr(args, "episodes", None) is not None:
        learner = dataclasses.replace(learner, episodes=args.episodes)
    scal = cfg.scalarization
    kind = getattr(args, "scalarization", None) or scal.kind
    weights = _parse_weights(args.weights) if getattr(args, "weights", None) else scal.weights
    try:
        scal = ScalarizationSpec(kind, weights, scal.utopian, scal.tau, scal.normalize)
    except InvalidInputError as exc:
        raise ConfigError("--weights" if getattr(args, "weights", None) else "scalarization", str(exc)) from None
    grid = args.grid if getattr(args, "grid", None) is not None else cfg.grid
    if grid < 1:
        raise ConfigError("--grid", f"must be >= 1, got {grid}")
    out = getattr(args, "out", None) or cfg.out_dir
    return dataclasses.replace(cfg, learner=learner, scalarization=scal, grid=grid, out_dir=out)


def cmd_train(cfg):
    day = cfg.load_day()
    res = train(cfg.system, day, cfg.scalarization, cfg.learner)
    ret, traj = rollout(res.policy, day, cfg.system)
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files = [
        exports.write_convergence(res.log, out / "convergence.csv"),
        exports.write_policy(res.policy, cfg.system, out / "policy.csv"),
        exports.write_trajectory(traj, cfg.system, out / "trajectory.csv"),
    ]
    print(f"trained {cfg.scalarization.kind} w={cfg.scalarization.weights} "
          f"episodes={cfg.learner.episodes}: Fw={ret.w:.6g} Fs={ret.s:.6g} Fg={ret.g:.6g} Fa={ret.a:.6g}")
    return files


def cmd_sweep(cfg):
    day = cfg.load_day()
    scal = cfg.scalarization
    archive = sweep(cfg.system, day, scal.kind, cfg.grid, cfg.learner,
                    tau=scal.tau, normalize=scal.normalize, workers=cfg.workers)
    fair = fair_point_index(archive)
    out = Path(cfg.out_dir)
    (out / "trajectories").mkdir(parents=True, exist_ok=True)
    files = [exports.write_archive(archive, out / "archive.csv", fair),
             exports.write_runs(archive, out / "runs.csv")]
    for i, entry in enumerate(archive.entries):
        files.append(exports.write_trajectory(entry.trajectory, cfg.system,
                                              out / "trajectories" / f"trajectory_{i:03d}.csv"))
    e = archive.entries[fair]
    o = e.objectives
    print(f"archive: {len(archive)} non-dominated of {len(archive.candidates)} runs")
    print(f"fair point #{fair}: w={tuple(round(x, 6) for x in e.weights)} "
          f"Fw={o.w:.6g} Fs={o.s:.6g} Fg={o.g:.6g} Fa={o.a:.6g}")
    return files


def cmd_synth(cfg, seed):
    day = synth_day(seed, cfg.system)
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = write_timeseries(day, out / "timeseries.csv")
    print(f"wrote {path}")
    return [path]


def cmd_validate(cfg):
    day = cfg.load_day()
    s = cfg.system
    print(f"ok: {len(s.microgrids)} microgrids ({len(s.storages)} with storage), "
          f"{len(s.price_grid)} prices, day series {list(day.names)}, "
          f"{cfg.scalarization.kind} w={cfg.scalarization.weights}, grid H={cfg.grid}")
    return []


def build_parser():
    p = argparse.ArgumentParser(prog="morlgrid", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="YAML run configuration")
        sp.add_argument("--out", help="output directory (overrides output.dir)")
        sp.add_argument("--seed", type=int, help="learner seed (synth: day seed)")
        return sp

    t = common(sub.add_parser("train", help="train one policy for a weight vector"))
    t.add_argument("--weights", help="w,s,g,a summing to 1")
    t.add_argument("--scalarization", choices=KINDS)
    t.add_argument("--episodes", type=int)

    s = common(sub.add_parser("sweep", help="train over a weight grid and select the fair point"))
    s.add_argument("--scalarization", choices=KINDS)
    s.add_argument("--grid", type=int, help="weight grid granularity H")
    s.add_argument("--episodes", type=int)

    common(sub.add_parser("synth", help="write a synthetic time-series day"))
    common(sub.add_parser("validate-config", help="check a configuration and exit"))
    return p


def main(argv=None):
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(message)s")
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        if args.command == "train":
            cmd_train(cfg)
        elif args.command == "sweep":
            cmd_sweep(cfg)
        elif args.command == "synth":
            cmd_synth(cfg, args.seed if args.seed is not None else cfg.synth_seed)
        else:
            cmd_validate(cfg)
    except (ConfigError, InvalidInputError, DataError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
