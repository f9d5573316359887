"""Experiment harness: single trials, the ablation matrix, and file outputs.

A trial alternates two loops. The outer loop picks the next exploration
target -- either by minimizing the acquisition field over the navmesh, or
uniformly at random over valid cells (the baseline) -- and snapshots the
confidence field. The inner loop runs the agent one action per simulation
step: route lookup, exploration mixing, movement, and an O(1) model update,
until the target is reached or the step-budget reset fires. Derived fields
are recomputed only at target selection, so recording stays O(1) per step.

Everything is driven by one seeded generator per trial, which makes runs
bit-reproducible: same config and seed, same metrics and same output files.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .acquisition import acquisition_field, select_target
from .gridio import write_csv, write_pgm
from .kernels import build_kernel
from .level import (AgentState, LevelSpec, default_step_budget, load_level_file,
                    maybe_reset, step)
from .metrics import (COVERAGE_DEFINITION, DISTANCE_DEFINITION, RunMetrics,
                      coverage, distance_to_uniform, normalize_vs_baseline)
from .policy import ExplorationMode, Router, choose_from_planned
from .surrogate import SurrogateState

DEFAULT_CONSTANT_RATE = 0.2

# Table-style ablation matrix: five system variants plus the normalization
# baseline (random targets, no exploratory actions), in fixed order.
ABLATION_LABELS = ("bo_adaptive", "bo_constant", "bo_none",
                   "random_adaptive", "random_constant", "random_none")
BASELINE_LABEL = "random_none"


@dataclass
class RunConfig:
    """Knobs for one run; defaults are the package defaults, not measured values."""

    level_path: str | Path
    sigma: float = 3.0
    sigma_f: float = 1.0
    target_mode: str = "bo"  # "bo" | "random"
    exploration: ExplorationMode = field(default_factory=ExplorationMode.adaptive)
    step_budget: int | None = None  # None = auto: 4 * (width + height)
    total_steps: int = 50_000
    trials: int = 20
    seed: int = 0
    out_dir: str | Path | None = None

    def validate(self) -> None:
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if not self.sigma_f > 0:
            raise ValueError(f"sigma_f must be positive, got {self.sigma_f}")
        if self.target_mode not in ("bo", "random"):
            raise ValueError(f"target_mode must be 'bo' or 'random', got {self.target_mode!r}")
        if self.step_budget is not None and self.step_budget < 1:
            raise ValueError(f"step_budget must be >= 1, got {self.step_budget}")
        if self.total_steps < 1:
            raise ValueError(f"total_steps must be >= 1, got {self.total_steps}")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")

    def echo(self) -> dict:
        """JSON-ready snapshot of the configuration, for output metadata."""
        return {
            "level_path": str(self.level_path),
            "sigma": self.sigma,
            "sigma_f": self.sigma_f,
            "target_mode": self.target_mode,
            "exploration": self.exploration.label(),
            "step_budget": self.step_budget if self.step_budget is not None else "auto",
            "total_steps": self.total_steps,
            "trials": self.trials,
            "seed": self.seed,
        }


@dataclass
class TrialResult:
    """A trial's metrics plus the final model state (for rendering/analysis)."""

    metrics: RunMetrics
    state: SurrogateState
    level: LevelSpec
    coverage_curve: tuple[float, ...] = ()


def simulate_trial(config: RunConfig, seed: int, router: Router | None = None,
                   coverage_every: int = 0) -> TrialResult:
    """Run one seeded trial and keep the final model state.

    ``router`` may be shared across trials of the same level (it only caches
    immutable route fields). ``coverage_every`` > 0 samples the coverage
    fraction every that many steps into ``coverage_curve``.
    """
    config.validate()
    level = load_level_file(config.level_path)
    router = router if router is not None else Router(level)
    kernel = build_kernel(config.sigma)
    state = SurrogateState(level.navmask, kernel, sigma_f=config.sigma_f, mode="additive")
    rng = np.random.default_rng(seed)
    budget = config.step_budget if config.step_budget is not None else default_step_budget(level)
    mode = config.exploration
    bo_targets = config.target_mode == "bo"
    valid_flat = np.flatnonzero(level.navmask.ravel())
    width = level.width

    agent = AgentState(position=level.spawn)
    route = None
    c_snapshot = np.zeros(level.navmask.shape)
    ghost_passes = 0
    curve: list[float] = []

    for step_index in range(config.total_steps):
        if agent.target is None:
            # New episode: refresh the field snapshot and pick a target.
            c_snapshot = state.confidence_field()
            if bo_targets:
                f = state.predict_field()
                u = state.uncertainty_field(c_snapshot)
                a = acquisition_field(f, u, level.navmask)
            # A target equal to the current cell counts as reached on the
            # spot, so redraw on it; bounded in case there is nowhere else.
            for _ in range(9):
                if bo_targets:
                    target = select_target(a, level.navmask, rng).target
                else:
                    pick = int(valid_flat[rng.integers(valid_flat.size)])
                    target = (pick // width, pick % width)
                if target != agent.position or valid_flat.size == 1:
                    break
            agent = AgentState(position=agent.position, target=target)
            route = router.field(target)
        planned = route.action_from(agent.position)
        action = choose_from_planned(planned, float(c_snapshot[agent.position]), mode, rng)
        agent, outcome = step(level, agent, action)
        state.record(agent.position)
        if outcome.ghost_wall_entered:
            ghost_passes += 1
        if outcome.target_reached:
            agent = AgentState(position=agent.position)
        else:
            agent = maybe_reset(level, agent, budget)
        if coverage_every and (step_index + 1) % coverage_every == 0:
            curve.append(coverage(state.occupancy, level.navmask))

    metrics = RunMetrics(
        coverage=coverage(state.occupancy, level.navmask),
        dist_uniform=distance_to_uniform(state.heat, level.navmask),
        ghost_passes=ghost_passes,
        steps=config.total_steps,
        seed=seed,
    )
    return TrialResult(metrics=metrics, state=state, level=level,
                       coverage_curve=tuple(curve))


def run_trial(config: RunConfig, seed: int) -> RunMetrics:
    """Run one trial; deterministic given (config, seed)."""
    return simulate_trial(config, seed).metrics


def trial_seeds(base_seed: int, trials: int) -> list[int]:
    """Per-trial seeds derived from the base seed.

    The same trial seed is used for every configuration (common random
    numbers), so ablation rows are paired by trial index.
    """
    return [int(s) for s in np.random.SeedSequence(base_seed).generate_state(trials)]


def ablation_config(base: RunConfig, label: str,
                    constant_rate: float = DEFAULT_CONSTANT_RATE) -> RunConfig:
    """The base config specialized to one ablation row."""
    target_mode, exploration_kind = label.split("_", 1)
    if exploration_kind == "adaptive":
        exploration = ExplorationMode.adaptive()
    elif exploration_kind == "constant":
        exploration = ExplorationMode.constant(constant_rate)
    else:
        exploration = ExplorationMode.none()
    return replace(base, target_mode=target_mode, exploration=exploration)


@dataclass
class ConfigSummary:
    """Aggregate of one ablation row across trials."""

    label: str
    target_mode: str
    exploration: str
    mean_coverage: float
    std_coverage: float
    mean_dist_uniform: float
    std_dist_uniform: float
    mean_ghost_passes: float
    normalized_coverage: float
    normalized_dist_uniform: float
    trials: list[dict]


@dataclass
class AblationReport:
    """All ablation rows plus the metadata that makes the numbers self-describing."""

    rows: list[ConfigSummary]
    baseline_label: str
    meta: dict

    def row(self, label: str) -> ConfigSummary:
        for row in self.rows:
            if row.label == label:
                return row
        raise KeyError(label)

    def to_dict(self) -> dict:
        return {
            "baseline": self.baseline_label,
            "meta": self.meta,
            "rows": [
                {
                    "label": r.label,
                    "target_mode": r.target_mode,
                    "exploration": r.exploration,
                    "mean_coverage": r.mean_coverage,
                    "std_coverage": r.std_coverage,
                    "mean_dist_uniform": r.mean_dist_uniform,
                    "std_dist_uniform": r.std_dist_uniform,
                    "mean_ghost_passes": r.mean_ghost_passes,
                    "normalized_coverage": r.normalized_coverage,
                    "normalized_dist_uniform": r.normalized_dist_uniform,
                    "trials": r.trials,
                }
                for r in self.rows
            ],
        }

    def table_text(self) -> str:
        """Fixed-width summary table (normalized values, baseline = 1.0)."""
        header = f"{'config':<18} {'coverage':>10} {'dist_unif':>10} {'ghost':>8}"
        lines = [header, "-" * len(header)]
        for r in self.rows:
            lines.append(f"{r.label:<18} {r.normalized_coverage:>10.3f} "
                         f"{r.normalized_dist_uniform:>10.3f} {r.mean_ghost_passes:>8.1f}")
        return "\n".join(lines) + "\n"


def run_ablation(base: RunConfig, constant_rate: float = DEFAULT_CONSTANT_RATE) -> AblationReport:
    """Run the full target-mode x exploration matrix and normalize vs baseline.

    Each configuration reuses the same per-trial seeds, so rows are paired.
    When ``base.out_dir`` is set, writes report.json, report.txt, and per-row
    maps rendered from the first trial's final model state.
    """
    base.validate()
    level = load_level_file(base.level_path)
    router = Router(level)
    seeds = trial_seeds(base.seed, base.trials)

    per_label: dict[str, list[RunMetrics]] = {}
    first_states: dict[str, SurrogateState] = {}
    for label in ABLATION_LABELS:
        config = ablation_config(base, label, constant_rate)
        results = []
        for trial_index, seed in enumerate(seeds):
            result = simulate_trial(config, seed, router=router)
            results.append(result.metrics)
            if trial_index == 0:
                first_states[label] = result.state
        per_label[label] = results

    baseline = per_label[BASELINE_LABEL]
    base_cov = float(np.mean([m.coverage for m in baseline]))
    base_dist = float(np.mean([m.dist_uniform for m in baseline]))

    rows = []
    for label in ABLATION_LABELS:
        results = per_label[label]
        cov = np.array([m.coverage for m in results])
        dist = np.array([m.dist_uniform for m in results])
        ghosts = np.array([m.ghost_passes for m in results], dtype=float)
        config = ablation_config(base, label, constant_rate)
        rows.append(ConfigSummary(
            label=label,
            target_mode=config.target_mode,
            exploration=config.exploration.label(),
            mean_coverage=float(cov.mean()),
            std_coverage=float(cov.std()),
            mean_dist_uniform=float(dist.mean()),
            std_dist_uniform=float(dist.std()),
            mean_ghost_passes=float(ghosts.mean()),
            normalized_coverage=normalize_vs_baseline(float(cov.mean()), base_cov),
            normalized_dist_uniform=normalize_vs_baseline(float(dist.mean()), base_dist),
            trials=[m.to_dict() for m in results],
        ))

    meta = base.echo()
    meta.update({
        "constant_rate": constant_rate,
        "trial_seeds": seeds,
        "coverage_definition": COVERAGE_DEFINITION,
        "distance_definition": DISTANCE_DEFINITION,
        "step_budget_resolved": base.step_budget if base.step_budget is not None
                                else default_step_budget(level),
    })
    report = AblationReport(rows=rows, baseline_label=BASELINE_LABEL, meta=meta)

    if base.out_dir is not None:
        out = Path(base.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.json").write_text(json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n")
        (out / "report.txt").write_text(report.table_text())
        for label in ABLATION_LABELS:
            config = ablation_config(base, label, constant_rate)
            row = report.row(label)
            metrics = RunMetrics.from_dict(row.trials[0])
            render_outputs(first_states[label], metrics, out / "maps" / label, config=config)
    return report


def render_outputs(state: SurrogateState, metrics: RunMetrics, out_dir: str | Path,
                   config: RunConfig | None = None) -> list[Path]:
    """Write the standard map and metric files for one model state.

    Produces occupancy/heat/confidence/acquisition PGMs, heat and occupancy
    CSVs (enough to rebuild the model), and metrics.json with a config echo
    and the metric definitions. Returns the paths written.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    c = state.confidence_field()
    f = state.predict_field()
    u = state.uncertainty_field(c)
    a = acquisition_field(f, u, state.navmask)

    written = []

    def emit(name: str, writer, payload) -> None:
        path = out / name
        writer(path, payload)
        written.append(path)

    emit("occupancy.pgm", write_pgm, state.occupancy)
    emit("heat.pgm", write_pgm, state.heat)
    emit("confidence.pgm", write_pgm, c)
    emit("acquisition.pgm", write_pgm, a)
    emit("heat.csv", write_csv, state.heat)
    emit("occupancy.csv", write_csv, state.occupancy)
    if state.metric_count is not None:
        emit("counts.csv", write_csv, state.metric_count)

    payload = metrics.to_dict()
    payload["config"] = config.echo() if config is not None else {
        "sigma": state.kernel.sigma, "sigma_f": state.sigma_f, "mode": state.mode,
    }
    payload["definitions"] = {
        "coverage": COVERAGE_DEFINITION,
        "dist_uniform": DISTANCE_DEFINITION,
        "step_budget": "steps per target before a spawn reset (wall-clock stand-in)",
    }
    payload["surrogate_mode"] = state.mode
    path = out / "metrics.json"
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    written.append(path)
    return written
