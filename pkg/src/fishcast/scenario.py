"""Human-impact warming scenarios and elapsed-time queries.

The regional warming trend is summarised by a single rate ``k`` (degrees C
per year, fitted to annual means). A dimensionless correction factor
``alpha`` scales that rate to represent mitigation intensity: 1.0 is
business as usual, smaller values slow the warming. Scenario fields are the
baseline plus ``alpha * k * n`` on every water cell at year ``n``; a config
switch can substitute externally supplied per-year fields (e.g. forecast
output) for the linear ramp.

An elapsed-time query runs the migration simulation over scenario fields
and reports the first year a boundary predicate holds, e.g. "the species
centroid has crossed column 20".
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .eca import CellSpace, centroid, run_simulation
from .fishstats import FishProfile
from .sst_data import GridField

__all__ = [
    "ALPHA_PRESETS",
    "BoundaryPredicate",
    "ScenarioConfig",
    "ElapsedTimeResult",
    "estimate_k",
    "corrected_field",
    "elapsed_time",
    "sweep_alpha",
    "write_sweep_csv",
]

# Named mitigation intensities; artifact conventions, not measured values.
ALPHA_PRESETS = {
    "business-as-usual": 1.0,
    "mitigation": 0.5,
    "aggressive-mitigation": 0.25,
}


def estimate_k(annual_means) -> float:
    """Least-squares slope of mean SST against year index, in degrees C/yr."""
    arr = np.asarray(annual_means, dtype=float)
    if arr.size < 2:
        raise ValueError(f"need at least 2 annual points to fit a rate, got {arr.size}")
    years = np.arange(arr.size, dtype=float)
    slope, _ = np.polyfit(years, arr, 1)
    return float(slope)


def corrected_field(baseline: GridField, k: float, alpha: float, n: int) -> GridField:
    """Baseline field uniformly warmed by ``alpha * k * n``; land untouched."""
    if n < 0:
        raise ValueError(f"year offset must be >= 0, got {n}")
    return baseline.shifted(alpha * k * n, year=n)


@dataclass(frozen=True)
class BoundaryPredicate:
    """Condition on a snapshot that ends an elapsed-time query.

    kind "centroid_cross":   the species centroid column reaches ``column``.
    kind "fraction_beyond":  at least ``fraction`` of the species' cells sit
                             at column >= ``column``.
    """

    kind: str
    species: str
    column: int
    fraction: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("centroid_cross", "fraction_beyond"):
            raise ValueError(f"unknown predicate kind '{self.kind}'")
        if self.kind == "fraction_beyond":
            if self.fraction is None or not (0.0 < self.fraction <= 1.0):
                raise ValueError("fraction_beyond needs a fraction in (0, 1]")

    def holds(self, space: CellSpace) -> bool:
        if not 0 <= self.column < space.cols:
            raise ValueError(f"column {self.column} outside grid of {space.cols} columns")
        if self.kind == "centroid_cross":
            _, col = centroid(space, self.species)
            return col >= self.column
        total = beyond = 0
        for gs in space.iter_states():
            for cell in gs.cells:
                if cell.species == self.species:
                    total += 1
                    if gs.j >= self.column:
                        beyond += 1
        if total == 0:
            raise ValueError(f"no cells of species '{self.species}' in the space")
        return beyond / total >= self.fraction

    @classmethod
    def parse(cls, text: str) -> "BoundaryPredicate":
        """Parse ``centroid_cross:col=20:species=herring`` style strings."""
        parts = text.split(":")
        kind = parts[0]
        kv: dict[str, str] = {}
        for part in parts[1:]:
            if "=" not in part:
                raise ValueError(f"bad predicate fragment '{part}' in '{text}'")
            key, val = part.split("=", 1)
            kv[key] = val
        try:
            column = int(kv.pop("col"))
            species = kv.pop("species")
        except KeyError as exc:
            raise ValueError(f"predicate '{text}' is missing {exc}") from exc
        fraction = float(kv.pop("frac")) if "frac" in kv else None
        if kv:
            raise ValueError(f"unknown predicate keys {sorted(kv)} in '{text}'")
        return cls(kind, species, column, fraction)

    def spec_string(self) -> str:
        base = f"{self.kind}:col={self.column}:species={self.species}"
        if self.fraction is not None:
            base += f":frac={self.fraction}"
        return base


@dataclass
class ScenarioConfig:
    """Everything an elapsed-time query needs besides the fish themselves."""

    alpha: float
    k: float
    baseline: GridField
    horizon: int
    predicate: BoundaryPredicate
    field_source: str = "linear"  # "linear" ramp | "lstm" (externally supplied fields)
    fields: list[GridField] | None = None  # required when field_source == "lstm"
    seed: int = 0
    hop_budget: int = 1

    def __post_init__(self) -> None:
        if self.alpha <= 0:
            raise ValueError("alpha must be > 0")
        if self.horizon < 1:
            raise ValueError("horizon must be >= 1")
        if self.field_source not in ("linear", "lstm"):
            raise ValueError(f"unknown field_source '{self.field_source}'")
        if self.field_source == "lstm" and not self.fields:
            raise ValueError("field_source 'lstm' needs a list of per-year fields")

    def yearly_fields(self) -> list[GridField]:
        """Temperature fields for simulated years 1..horizon."""
        if self.field_source == "lstm":
            fields = sorted(self.fields, key=lambda f: f.year)
            if len(fields) < self.horizon:
                raise ValueError(
                    f"need {self.horizon} provided fields, got {len(fields)}"
                )
            return fields[: self.horizon]
        return [
            corrected_field(self.baseline, self.k, self.alpha, n)
            for n in range(1, self.horizon + 1)
        ]


@dataclass
class ElapsedTimeResult:
    """Outcome of an elapsed-time query.

    ``years`` is None when the predicate never held within the horizon.
    """

    years: int | None
    trajectory: list = field(default_factory=list)

    @property
    def reached(self) -> bool:
        return self.years is not None


def elapsed_time(config: ScenarioConfig, initial: CellSpace,
                 profiles: dict[str, FishProfile]) -> ElapsedTimeResult:
    """First simulated year at which the boundary predicate holds.

    Year 0 is the initial state, checked before any warming is applied.
    """
    if config.predicate.holds(initial):
        return ElapsedTimeResult(years=0, trajectory=[])
    start = initial if initial.year == 1 else _with_year(initial, 1)
    trajectory = run_simulation(start, config.yearly_fields(), profiles,
                                seed=config.seed, hop_budget=config.hop_budget)
    for year, space, _ in trajectory:
        if config.predicate.holds(space):
            return ElapsedTimeResult(years=year, trajectory=trajectory)
    return ElapsedTimeResult(years=None, trajectory=trajectory)


def _with_year(space: CellSpace, year: int) -> CellSpace:
    dup = space.copy()
    dup.year = year
    return dup


def sweep_alpha(config: ScenarioConfig, alphas, initial: CellSpace,
                profiles: dict[str, FishProfile]) -> list[tuple[float, int | None]]:
    """Run the same elapsed-time query over several correction factors.

    Each run is an independent deterministic simulation from the same seed.
    """
    results = []
    for alpha in alphas:
        cfg = ScenarioConfig(
            alpha=float(alpha), k=config.k, baseline=config.baseline,
            horizon=config.horizon, predicate=config.predicate,
            field_source=config.field_source, fields=config.fields,
            seed=config.seed, hop_budget=config.hop_budget,
        )
        outcome = elapsed_time(cfg, initial, profiles)
        results.append((float(alpha), outcome.years))
    return results


def write_sweep_csv(results, path) -> None:
    """Sweep output CSV ``alpha,years_elapsed`` (empty field = not reached)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["alpha", "years_elapsed"])
        for alpha, years in results:
            writer.writerow([repr(float(alpha)), "" if years is None else years])
