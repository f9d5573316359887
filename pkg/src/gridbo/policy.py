"""Navigation policy: shortest-path routing mixed with random exploration.

The goal-reaching controller is a breadth-first planner over the navmesh; it
stands in for whatever trained controller a real deployment would use, and is
deterministic so experiments isolate the target-selection layer.

Routes come from a distance field rooted at the target (one BFS per target),
so "next move from here" is an O(1) lookup no matter how often the agent
strays off its path -- random exploratory actions make that constant.

Exploration mixing: at each step the agent follows the planned move with some
probability and otherwise takes a uniformly random action. In adaptive mode
that probability is the surrogate's confidence at the agent's cell, so the
agent blunders around in fresh territory and walks cleanly through
well-covered ground. With no plan (off the navmesh, or target unreachable)
the agent always acts randomly until it recovers.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .level import ACTION_DELTAS, ACTIONS, Cell, LevelSpec

_UNREACHED = -1
_NO_ACTION = -1


@dataclass(frozen=True)
class ExplorationMode:
    """How much random action to mix into the policy.

    kinds: "adaptive" (random with probability 1 - confidence),
    "constant" (fixed random rate), "none" (always follow the plan).
    """

    kind: str
    rate: float = 0.0

    def __post_init__(self):
        if self.kind not in ("adaptive", "constant", "none"):
            raise ValueError(f"unknown exploration kind {self.kind!r}")
        if self.kind == "constant" and not 0.0 <= self.rate <= 1.0:
            raise ValueError(f"constant rate must be in [0, 1], got {self.rate}")

    @classmethod
    def adaptive(cls) -> "ExplorationMode":
        return cls("adaptive")

    @classmethod
    def constant(cls, rate: float = 0.2) -> "ExplorationMode":
        return cls("constant", rate)

    @classmethod
    def none(cls) -> "ExplorationMode":
        return cls("none")

    def random_rate(self, c_at_position: float) -> float:
        """Probability of taking a random action at confidence ``c``."""
        if self.kind == "adaptive":
            return 1.0 - c_at_position
        if self.kind == "constant":
            return self.rate
        return 0.0

    def label(self) -> str:
        if self.kind == "constant":
            return f"constant({self.rate:g})"
        return self.kind


@dataclass(frozen=True)
class PlanCache:
    """A shortest path to ``target``; ``path[0]`` is the source cell."""

    target: Cell
    path: tuple[Cell, ...]

    def next_action(self) -> str | None:
        """Action from the source toward the second path cell, if any."""
        if len(self.path) < 2:
            return None
        (r0, c0), (r1, c1) = self.path[0], self.path[1]
        for action, (dr, dc) in ACTION_DELTAS.items():
            if (r0 + dr, c0 + dc) == (r1, c1):
                return action
        raise ValueError("path cells are not 4-adjacent")


@dataclass
class RouteField:
    """BFS distance field rooted at ``target``, with a per-cell next action.

    ``dist`` holds hop counts over navmesh-valid cells (-1 where unreachable
    or off-mesh); ``next_idx`` the index into ACTIONS of the first direction
    (north, east, south, west order) that steps one hop closer.
    """

    target: Cell
    dist: np.ndarray
    next_idx: np.ndarray = field(repr=False)

    def reachable(self, cell: Cell) -> bool:
        return self.dist[cell] != _UNREACHED

    def action_from(self, cell: Cell) -> str | None:
        """Next action toward the target, or None at the target / off-mesh."""
        idx = self.next_idx[cell]
        return ACTIONS[idx] if idx != _NO_ACTION else None

    def path_from(self, source: Cell) -> tuple[Cell, ...] | None:
        """Cells from ``source`` to the target, or None when unreachable."""
        if self.dist[source] == _UNREACHED:
            return None
        path = [source]
        cell = source
        while cell != self.target:
            dr, dc = ACTION_DELTAS[ACTIONS[self.next_idx[cell]]]
            cell = (cell[0] + dr, cell[1] + dc)
            path.append(cell)
        return tuple(path)


def route_field(level: LevelSpec, target: Cell) -> RouteField:
    """Breadth-first wavefront expansion from ``target`` over the navmesh.

    Raises:
        ValueError: if ``target`` is not navmesh-valid.
    """
    valid = level.navmask
    if not valid[target]:
        raise ValueError(f"target {target} is not navmesh-valid")
    dist = np.full(valid.shape, _UNREACHED, dtype=np.int32)
    dist[target] = 0
    frontier = np.zeros(valid.shape, dtype=bool)
    frontier[target] = True
    hops = 0
    while frontier.any():
        hops += 1
        grown = np.zeros_like(frontier)
        grown[1:, :] |= frontier[:-1, :]
        grown[:-1, :] |= frontier[1:, :]
        grown[:, 1:] |= frontier[:, :-1]
        grown[:, :-1] |= frontier[:, 1:]
        grown &= valid & (dist == _UNREACHED)
        dist[grown] = hops
        frontier = grown

    # First direction (N, E, S, W order) whose neighbor is one hop closer.
    next_idx = np.full(valid.shape, _NO_ACTION, dtype=np.int8)
    wants = dist > 0
    for idx, action in enumerate(ACTIONS):
        dr, dc = ACTION_DELTAS[action]
        neighbor = np.full(valid.shape, _UNREACHED, dtype=np.int32)
        src = (slice(max(dr, 0), valid.shape[0] + min(dr, 0)),
               slice(max(dc, 0), valid.shape[1] + min(dc, 0)))
        dst = (slice(max(-dr, 0), valid.shape[0] + min(-dr, 0)),
               slice(max(-dc, 0), valid.shape[1] + min(-dc, 0)))
        neighbor[dst] = dist[src]
        closer = wants & (next_idx == _NO_ACTION) & (neighbor == dist - 1)
        next_idx[closer] = idx
    return RouteField(target=target, dist=dist, next_idx=next_idx)


class Router:
    """Per-level cache of route fields; levels are immutable so fields are too."""

    def __init__(self, level: LevelSpec):
        self.level = level
        self._fields: dict[Cell, RouteField] = {}

    def field(self, target: Cell) -> RouteField:
        cached = self._fields.get(target)
        if cached is None:
            cached = route_field(self.level, target)
            self._fields[target] = cached
        return cached


def plan(level: LevelSpec, source: Cell, target: Cell) -> PlanCache | None:
    """Shortest navmesh path from ``source`` to ``target``.

    Returns None (no-path) when the source is off the navmesh or the target
    is unreachable from it. Deterministic: ties between equally short paths
    resolve by fixed neighbor order (north, east, south, west).

    Raises:
        ValueError: if ``target`` is not navmesh-valid.
    """
    field = route_field(level, target)
    path = field.path_from(source) if level.navmask[source] else None
    if path is None:
        return None
    return PlanCache(target=target, path=path)


def exploration_decision(c_at_position: float, mode: ExplorationMode,
                         rng: np.random.Generator) -> bool:
    """True when this step should be a random exploratory action.

    Draws from ``rng`` only when the random rate is positive, so "none" mode
    consumes no randomness.
    """
    p_random = mode.random_rate(c_at_position)
    if p_random <= 0.0:
        return False
    return rng.random() < p_random


def choose_from_planned(planned: str | None, c_at_position: float,
                        mode: ExplorationMode, rng: np.random.Generator) -> str:
    """Mix a planned action with uniform random actions.

    With no planned action the result is always uniform random: an agent that
    cannot plan (off-mesh or unreachable target) flails until it recovers.
    """
    if planned is None:
        return ACTIONS[rng.integers(4)]
    if exploration_decision(c_at_position, mode, rng):
        return ACTIONS[rng.integers(4)]
    return planned


def choose_action(plan_cache: PlanCache | None, c_at_position: float,
                  mode: ExplorationMode, rng: np.random.Generator) -> str:
    """Next action given a plan (or no-path) and local confidence.

    Raises:
        ValueError: if ``c_at_position`` is outside [0, 1].
    """
    if not 0.0 <= c_at_position <= 1.0:
        raise ValueError(f"confidence must be in [0, 1], got {c_at_position}")
    planned = plan_cache.next_action() if plan_cache is not None else None
    return choose_from_planned(planned, c_at_position, mode, rng)
