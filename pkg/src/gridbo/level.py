"""Deterministic grid-world level: geometry, agent movement, episode resets.

Levels are rectangular ASCII blocks::

    '#'  physical wall (collider, blocks movement, off the navmesh)
    'G'  ghost wall (rendered and navmesh-blocked, but NO collider -- the bug)
    '.'  free cell
    'S'  spawn (exactly one; free cell)

The navmesh marks cells that are both collider-free and not ghost walls; it
is what planning and target selection see. Ghost-wall cells are physically
traversable, so an agent can blunder through one -- that traversal is the
event the ghost-wall experiments count.

Movement is 4-connected; walking into a wall or off the edge leaves the agent
in place. Cells are ``(row, col)`` with row 0 at the top.
"""
from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

Cell = tuple[int, int]

ACTIONS = ("north", "east", "south", "west")
ACTION_DELTAS = {"north": (-1, 0), "east": (0, 1), "south": (1, 0), "west": (0, -1)}


class LevelParseError(ValueError):
    """Malformed level text; the message carries the offending row/column."""


@dataclass(frozen=True)
class LevelSpec:
    """Immutable level geometry with its derived navmesh."""

    width: int
    height: int
    physical_blocked: np.ndarray
    ghost_wall: np.ndarray
    spawn: Cell
    navmask: np.ndarray

    def __post_init__(self):
        if self.width < 4 or self.height < 4:
            raise ValueError(f"level must be at least 4x4, got {self.width}x{self.height}")
        if (self.ghost_wall & self.physical_blocked).any():
            raise ValueError("ghost-wall cells cannot also be physically blocked")
        r, c = self.spawn
        if self.physical_blocked[r, c] or not self.navmask[r, c]:
            raise ValueError(f"spawn {self.spawn} must be free and navmesh-valid")

    def in_bounds(self, cell: Cell) -> bool:
        r, c = cell
        return 0 <= r < self.height and 0 <= c < self.width


@dataclass(slots=True)
class AgentState:
    """Character pose plus the bookkeeping the reset rule needs."""

    position: Cell
    target: Cell | None = None
    steps_on_target: int = 0


@dataclass(slots=True)
class StepOutcome:
    """What a single action did: movement, ghost-wall entry, target arrival."""

    new_position: Cell
    moved: bool
    ghost_wall_entered: bool
    target_reached: bool


def load_level(text: str) -> LevelSpec:
    """Parse level text into a LevelSpec.

    Raises:
        LevelParseError: ragged rows, unknown glyphs, or a spawn count != 1,
            reported with the offending row/column.
    """
    lines = [line for line in text.splitlines() if line.strip() != ""]
    if not lines:
        raise LevelParseError("level text is empty")
    width = len(lines[0])
    height = len(lines)
    physical = np.zeros((height, width), dtype=bool)
    ghost = np.zeros((height, width), dtype=bool)
    spawn: Cell | None = None
    for r, line in enumerate(lines):
        if len(line) != width:
            raise LevelParseError(f"row {r}: length {len(line)} != expected {width}")
        for c, glyph in enumerate(line):
            if glyph == "#":
                physical[r, c] = True
            elif glyph == "G":
                ghost[r, c] = True
            elif glyph == "S":
                if spawn is not None:
                    raise LevelParseError(f"row {r}, col {c}: duplicate spawn 'S'")
                spawn = (r, c)
            elif glyph != ".":
                raise LevelParseError(f"row {r}, col {c}: unknown glyph {glyph!r}")
    if spawn is None:
        raise LevelParseError("no spawn 'S' in level")
    physical.setflags(write=False)
    ghost.setflags(write=False)
    navmask = ~physical & ~ghost
    navmask.setflags(write=False)
    return LevelSpec(width=width, height=height, physical_blocked=physical,
                     ghost_wall=ghost, spawn=spawn, navmask=navmask)


def load_level_file(path: str | Path) -> LevelSpec:
    return load_level(Path(path).read_text())


def bundled_level_path(name: str) -> Path:
    """Filesystem path of a level shipped with the package (e.g. "rooms_64")."""
    filename = name if name.endswith(".txt") else f"{name}.txt"
    return Path(str(resources.files("gridbo").joinpath("levels", filename)))


def step(level: LevelSpec, agent: AgentState, action: str) -> tuple[AgentState, StepOutcome]:
    """Apply one movement action; total for every action.

    The destination is the 4-neighbor in the action direction. Out-of-bounds
    or collider destinations leave the agent in place. Ghost-wall cells have
    no collider, so stepping into one moves the agent and flags the outcome.
    """
    dr, dc = ACTION_DELTAS[action]
    r, c = agent.position
    nr, nc = r + dr, c + dc
    if 0 <= nr < level.height and 0 <= nc < level.width and not level.physical_blocked[nr, nc]:
        pos = (nr, nc)
        moved = True
        ghost = bool(level.ghost_wall[nr, nc])
    else:
        pos = agent.position
        moved = False
        ghost = False
    reached = agent.target is not None and pos == agent.target
    new_agent = AgentState(position=pos, target=agent.target,
                           steps_on_target=agent.steps_on_target + 1)
    return new_agent, StepOutcome(new_position=pos, moved=moved,
                                  ghost_wall_entered=ghost, target_reached=reached)


def maybe_reset(level: LevelSpec, agent: AgentState, budget: int) -> AgentState:
    """Teleport a stalled agent back to spawn.

    Fires only when the step budget for the current target is exhausted and
    the target was not reached; the target is cleared so the caller picks a
    fresh one.

    Raises:
        ValueError: if ``budget < 1``.
    """
    if budget < 1:
        raise ValueError(f"budget must be >= 1, got {budget}")
    if agent.target is None:
        return agent
    reached = agent.position == agent.target
    if agent.steps_on_target >= budget and not reached:
        return AgentState(position=level.spawn, target=None, steps_on_target=0)
    return agent


def default_step_budget(level: LevelSpec) -> int:
    """Step-count stand-in for a wall-clock reach timeout."""
    return 4 * (level.width + level.height)
