"""gridbo: grid-map Bayesian optimization for automated level-exploration testing.

An agent explores a game level while a grid-backed surrogate model digests
every visited cell in O(1). Smoothed prediction and confidence fields come
from convolving the grids with a Gaussian kernel; minimizing the resulting
lower-confidence-bound field picks the next place worth visiting, and the
confidence at the agent's feet decides how much random flailing to mix into
its navigation. A deterministic grid-world simulator, metrics, and an
ablation harness make the whole loop reproducible end to end.

Typical use::

    from gridbo import RunConfig, bundled_level_path, run_trial

    config = RunConfig(level_path=bundled_level_path("rooms_64"), total_steps=20_000)
    metrics = run_trial(config, seed=7)
"""

from .acquisition import MASKED, AcquisitionResult, acquisition_field, select_target
from .harness import (ABLATION_LABELS, BASELINE_LABEL, AblationReport, ConfigSummary,
                      RunConfig, TrialResult, render_outputs, run_ablation, run_trial,
                      simulate_trial, trial_seeds)
from .kernels import Kernel, build_kernel, convolve
from .level import (ACTION_DELTAS, ACTIONS, AgentState, LevelParseError, LevelSpec,
                    StepOutcome, bundled_level_path, default_step_budget, load_level,
                    load_level_file, maybe_reset, step)
from .metrics import RunMetrics, coverage, distance_to_uniform, normalize_vs_baseline
from .policy import (ExplorationMode, PlanCache, RouteField, Router, choose_action,
                     choose_from_planned, exploration_decision, plan, route_field)
from .surrogate import SurrogateState, apply_mask

__version__ = "0.1.0"

__all__ = [
    "ABLATION_LABELS", "ACTIONS", "ACTION_DELTAS", "AblationReport",
    "AcquisitionResult", "AgentState", "BASELINE_LABEL", "ConfigSummary",
    "ExplorationMode", "Kernel", "LevelParseError", "LevelSpec", "MASKED",
    "PlanCache", "RouteField", "Router", "RunConfig", "RunMetrics", "StepOutcome",
    "SurrogateState", "TrialResult", "acquisition_field", "apply_mask",
    "build_kernel", "bundled_level_path", "choose_action", "choose_from_planned",
    "convolve", "coverage", "default_step_budget", "distance_to_uniform",
    "exploration_decision", "load_level", "load_level_file", "maybe_reset",
    "normalize_vs_baseline", "plan", "render_outputs", "route_field",
    "run_ablation", "run_trial", "select_target", "simulate_trial", "step",
    "trial_seeds",
]
