"""One-parameter damaged-aircraft performance model.

Everything the planner needs about the airframe reduces to the clean,
wings-level best-glide ratio ``g0``, a table of drag multipliers and the
best-glide airspeed.  Banking by ``phi`` scales the glide ratio by
``cos(phi)``; the turn radius follows from the airspeed and bank.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

# Gravitational acceleration expressed in kn^2 / ft.  Kept at the rounded
# value so turn radii land on the published integers.
G_KN2_PER_FT = 11.29


class InfiniteRadius(ValueError):
    """Straight flight has no finite turn radius."""


@dataclass(frozen=True)
class DragConfig:
    name: str
    delta: float

    def __post_init__(self):
        if not 0.0 < self.delta <= 1.0:
            raise ValueError(f"drag multiplier must lie in (0, 1], got {self.delta}")


CLEAN = DragConfig("clean", 1.0)


def check_bank(bank: float) -> float:
    bank = float(bank)
    if not 0.0 <= bank < 90.0:
        raise ValueError(f"bank angle must lie in [0, 90), got {bank}")
    return bank


@dataclass(frozen=True)
class PerformanceModel:
    """Immutable aircraft model; use :meth:`with_g0` to derive a refined copy."""

    g0: float
    best_glide_speed: float
    drag_table: tuple[DragConfig, ...] = field(default=(CLEAN,))
    name: str = "aircraft"

    def __post_init__(self):
        if not self.g0 > 0:
            raise ValueError(f"g0 must be positive, got {self.g0}")
        if not self.best_glide_speed > 0:
            raise ValueError("best glide speed must be positive")
        names = [d.name for d in self.drag_table]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate drag configuration names: {names}")
        if self.drag("clean").delta != 1.0:
            raise ValueError("the clean configuration must have delta = 1")

    def drag(self, name: str) -> DragConfig:
        for d in self.drag_table:
            if d.name == name:
                return d
        raise KeyError(f"unknown drag configuration {name!r}")

    @property
    def clean(self) -> DragConfig:
        return self.drag("clean")

    @property
    def dirty(self) -> DragConfig:
        """The highest-drag configuration in the table."""
        return min(self.drag_table, key=lambda d: d.delta)

    def with_g0(self, g0: float) -> "PerformanceModel":
        return replace(self, g0=float(g0))

    def with_dirty_ratio(self, ratio: float, name: str = "dirty") -> "PerformanceModel":
        """Copy whose ``name`` configuration glides at ``ratio`` wings level."""
        dirty = DragConfig(name, ratio / self.g0)
        table = tuple(d for d in self.drag_table if d.name != name) + (dirty,)
        return replace(self, drag_table=table)

    def glide_ratio(self, bank: float, cfg: DragConfig | None = None) -> float:
        return glide_ratio(self, bank, cfg or self.clean)

    def turn_radius(self, bank: float) -> float:
        return turn_radius(bank, self.best_glide_speed)


def glide_ratio(m: PerformanceModel, bank: float, cfg: DragConfig = CLEAN) -> float:
    """``g0 * delta * cos(bank)``."""
    bank = check_bank(bank)
    if bank == 0.0:
        return m.g0 * cfg.delta
    return m.g0 * cfg.delta * math.cos(math.radians(bank))


def turn_radius(bank: float, speed: float) -> float:
    """Level-turn radius in feet for ``speed`` knots at ``bank`` degrees."""
    bank = check_bank(bank)
    if bank == 0.0:
        raise InfiniteRadius("wings-level flight does not turn")
    return speed * speed / (G_KN2_PER_FT * math.tan(math.radians(bank)))


def refine_baseline(observed: float, bank: float, cfg: DragConfig = CLEAN) -> float:
    """Baseline ratio implied by a glide ratio observed at ``bank`` in ``cfg``.

    Assumes the aircraft was flying at best-glide airspeed.
    """
    bank = check_bank(bank)
    if bank == 0.0:
        return observed / cfg.delta
    return observed / (cfg.delta * math.cos(math.radians(bank)))
