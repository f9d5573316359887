"""Command-line entry point: run, ablate, render.

Flags mirror the run configuration. A ``--config`` file in simple
``key=value`` lines supplies defaults; explicit flags override it. Levels may
be given as file paths or bundled names (``arena_16``, ``arena_64``,
``rooms_64``, ``ghostwall_64``). Exit code 0 on success, nonzero otherwise.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .gridio import read_csv
from .harness import RunConfig, render_outputs, run_ablation, simulate_trial
from .kernels import build_kernel
from .level import bundled_level_path, load_level_file
from .metrics import RunMetrics
from .policy import ExplorationMode
from .surrogate import SurrogateState

_DEFAULTS = {
    "level": None,
    "sigma": 3.0,
    "sigma_f": 1.0,
    "target_mode": "bo",
    "exploration": "adaptive",
    "explore_rate": 0.2,
    "step_budget": "auto",
    "total_steps": 50_000,
    "trials": 20,
    "seed": 0,
    "out": None,
}


def _parse_config_file(path: str) -> dict:
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _DEFAULTS:
            raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = value
    return values


def _resolve(args: argparse.Namespace) -> dict:
    """Merge defaults, config file, and explicit flags (highest priority)."""
    merged = dict(_DEFAULTS)
    if getattr(args, "config", None):
        merged.update(_parse_config_file(args.config))
    for key in _DEFAULTS:
        flag_value = getattr(args, key, None)
        if flag_value is not None:
            merged[key] = flag_value
    # Values arriving from the config file are strings; coerce them.
    merged["sigma"] = float(merged["sigma"])
    merged["sigma_f"] = float(merged["sigma_f"])
    merged["explore_rate"] = float(merged["explore_rate"])
    merged["total_steps"] = int(merged["total_steps"])
    merged["trials"] = int(merged["trials"])
    merged["seed"] = int(merged["seed"])
    return merged


def _resolve_level(level: str | None) -> Path:
    if not level:
        raise ValueError("no level given (use --level or a config file)")
    path = Path(level)
    if path.exists():
        return path
    bundled = bundled_level_path(level)
    if bundled.exists():
        return bundled
    raise FileNotFoundError(f"level {level!r} is neither a file nor a bundled level")


def _build_run_config(merged: dict) -> RunConfig:
    kind = merged["exploration"]
    if kind == "constant":
        exploration = ExplorationMode.constant(merged["explore_rate"])
    elif kind == "none":
        exploration = ExplorationMode.none()
    elif kind == "adaptive":
        exploration = ExplorationMode.adaptive()
    else:
        raise ValueError(f"unknown exploration mode {kind!r}")
    budget = merged["step_budget"]
    step_budget = None if str(budget) == "auto" else int(budget)
    return RunConfig(
        level_path=_resolve_level(merged["level"]),
        sigma=merged["sigma"],
        sigma_f=merged["sigma_f"],
        target_mode=merged["target_mode"],
        exploration=exploration,
        step_budget=step_budget,
        total_steps=merged["total_steps"],
        trials=merged["trials"],
        seed=merged["seed"],
        out_dir=merged["out"],
    )


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="key=value config file; flags override it")
    parser.add_argument("--level", help="level file path or bundled level name")
    parser.add_argument("--sigma", type=float, help="kernel bandwidth in cells")
    parser.add_argument("--sigma-f", dest="sigma_f", type=float, help="uncertainty amplitude")
    parser.add_argument("--target-mode", dest="target_mode", choices=["bo", "random"])
    parser.add_argument("--exploration", choices=["adaptive", "constant", "none"])
    parser.add_argument("--explore-rate", dest="explore_rate", type=float,
                        help="random-action rate for constant exploration")
    parser.add_argument("--step-budget", dest="step_budget",
                        help="steps per target before reset, or 'auto'")
    parser.add_argument("--total-steps", dest="total_steps", type=int)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--out", help="output directory")


def _cmd_run(args: argparse.Namespace) -> int:
    config = _build_run_config(_resolve(args))
    result = simulate_trial(config, config.seed)
    m = result.metrics
    print(f"coverage={m.coverage:.4f} dist_uniform={m.dist_uniform:.4f} "
          f"ghost_passes={m.ghost_passes} steps={m.steps} seed={m.seed}")
    if config.out_dir is not None:
        written = render_outputs(result.state, m, config.out_dir, config=config)
        print(f"wrote {len(written)} files to {config.out_dir}")
    return 0


def _cmd_ablate(args: argparse.Namespace) -> int:
    merged = _resolve(args)
    config = _build_run_config(merged)
    report = run_ablation(config, constant_rate=merged["explore_rate"])
    print(report.table_text(), end="")
    if config.out_dir is not None:
        print(f"report written to {config.out_dir}")
    return 0


def _cmd_render(args: argparse.Namespace) -> int:
    run_dir = Path(args.run)
    payload = json.loads((run_dir / "metrics.json").read_text())
    level_path = args.level or payload["config"].get("level_path")
    if level_path is None:
        raise ValueError("saved config has no level_path; pass --level")
    level = load_level_file(_resolve_level(level_path))
    mode = payload.get("surrogate_mode", "additive")
    state = SurrogateState(level.navmask, build_kernel(float(payload["config"]["sigma"])),
                           sigma_f=float(payload["config"]["sigma_f"]), mode=mode)
    state.occupancy[:] = read_csv(run_dir / "occupancy.csv")
    state.heat[:] = read_csv(run_dir / "heat.csv")
    if mode == "averaged":
        state.metric_count[:] = read_csv(run_dir / "counts.csv")
    state.sample_count = int(round(state.heat.sum())) if mode == "additive" else int(
        round(state.metric_count.sum()))
    metrics = RunMetrics.from_dict(payload)
    out = Path(args.out) if args.out else run_dir
    written = render_outputs(state, metrics, out)
    print(f"re-rendered {len(written)} files to {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gridbo",
                                     description="Grid-map BO exploration testing harness")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run a single configuration for one seeded trial")
    _add_common_flags(run_p)
    run_p.set_defaults(func=_cmd_run)

    ablate_p = sub.add_parser("ablate", help="run the full ablation matrix")
    _add_common_flags(ablate_p)
    ablate_p.add_argument("--trials", type=int, help="trials per configuration")
    ablate_p.set_defaults(func=_cmd_ablate)

    render_p = sub.add_parser("render", help="re-emit maps from a saved run directory")
    render_p.add_argument("--run", required=True, help="directory written by 'run'")
    render_p.add_argument("--level", help="override the level path recorded in the run")
    render_p.add_argument("--out", help="output directory (default: the run directory)")
    render_p.set_defaults(func=_cmd_render)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # surface a readable error, nonzero exit
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
