"""Cellular-automata engine for thermally driven fish migration.

The sea is a lattice of grids. Each grid knows its row, column, current
temperature, and resident cells; a cell is a fixed quantum of 10,000 fish of
one species, and a grid holds at most three cells regardless of species.

Every simulated year the temperatures update, each cell is classified steady
(grid temperature inside the species' livable band) or unsteady, and each
unsteady cell tries to relocate: with the escape probability given by its
species' thermal profile it hops to the in-bounds, non-land, non-full
Von Neumann neighbour whose temperature is closest to the species' preferred
value. Cells process in row-major order and moves apply immediately, so the
occupancy cap sees same-year arrivals. A failed probability draw, a year
hop budget, or regaining steadiness ends a cell's attempts.

Fish neither spawn nor die here: total cell count per species is conserved
across the whole run, and every draw comes from one seeded generator, so a
trajectory is a pure function of (initial space, fields, profiles, seed,
hop budget).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .fishstats import FishProfile, transition_probability
from .sst_data import GridField, LandMask

__all__ = [
    "FISH_PER_CELL",
    "MAX_CELLS_PER_GRID",
    "Cell",
    "GridState",
    "CellSpace",
    "MoveEvent",
    "StepReport",
    "is_steady",
    "von_neumann_neighbors",
    "select_target",
    "step_year",
    "run_simulation",
    "centroid",
    "assert_space_invariants",
    "write_occupancy_csv",
    "write_movement_csv",
    "load_seeding_csv",
    "write_seeding_csv",
    "seed_uniform",
]

FISH_PER_CELL = 10_000
MAX_CELLS_PER_GRID = 3


@dataclass(eq=False)
class Cell:
    """One group of 10,000 fish of a single species.

    Compares by identity: two cells of the same species are still distinct
    groups of fish, and movement bookkeeping relies on that.
    """

    species: str
    steady: bool = False

    def copy(self) -> "Cell":
        return Cell(self.species, self.steady)


@dataclass
class GridState:
    """State of one grid: position, temperature, and resident cells."""

    i: int
    j: int
    temp: float | None  # None on land
    cells: list[Cell] = field(default_factory=list)

    @property
    def occupancy(self) -> int:
        return len(self.cells)


class CellSpace:
    """The full lattice of grid states plus the year counter.

    Year 1 is the first simulated year. Spaces returned by the stepping
    functions are fresh copies; treat them as immutable snapshots.
    """

    def __init__(self, mask: LandMask, temps: np.ndarray, year: int = 1, seed: int = 0):
        if temps.shape != (mask.rows, mask.cols):
            raise ValueError(f"temps {temps.shape} do not match mask {(mask.rows, mask.cols)}")
        self.mask = mask
        self.year = year
        self.seed = seed
        self.grid: list[list[GridState]] = [
            [
                GridState(i, j, None if mask.is_land(i, j) else float(temps[i, j]))
                for j in range(mask.cols)
            ]
            for i in range(mask.rows)
        ]

    # -- construction ------------------------------------------------------

    @classmethod
    def from_field(cls, field_: GridField, year: int = 1, seed: int = 0) -> "CellSpace":
        return cls(field_.mask, np.nan_to_num(field_.temps), year=year, seed=seed)

    def copy(self) -> "CellSpace":
        dup = CellSpace.__new__(CellSpace)
        dup.mask = self.mask
        dup.year = self.year
        dup.seed = self.seed
        dup.grid = [
            [GridState(g.i, g.j, g.temp, [c.copy() for c in g.cells]) for g in row]
            for row in self.grid
        ]
        return dup

    # -- geometry and access -----------------------------------------------

    @property
    def rows(self) -> int:
        return self.mask.rows

    @property
    def cols(self) -> int:
        return self.mask.cols

    def state(self, i: int, j: int) -> GridState:
        return self.grid[i][j]

    def is_water(self, i: int, j: int) -> bool:
        return not self.mask.is_land(i, j)

    def iter_states(self):
        """All grid states in row-major order."""
        for row in self.grid:
            yield from row

    # -- population --------------------------------------------------------

    def place(self, i: int, j: int, species: str, count: int = 1) -> None:
        """Add ``count`` cells of a species to grid (i, j)."""
        gs = self.grid[i][j]
        if self.mask.is_land(i, j):
            raise ValueError(f"cannot place cells on land at ({i}, {j})")
        if gs.occupancy + count > MAX_CELLS_PER_GRID:
            raise ValueError(
                f"grid ({i}, {j}) would exceed the occupancy cap of {MAX_CELLS_PER_GRID}"
            )
        for _ in range(count):
            gs.cells.append(Cell(species))

    def species_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for gs in self.iter_states():
            for cell in gs.cells:
                counts[cell.species] = counts.get(cell.species, 0) + 1
        return counts

    def total_cells(self) -> int:
        return sum(gs.occupancy for gs in self.iter_states())

    def update_temps(self, field_: GridField) -> None:
        if (field_.rows, field_.cols) != (self.rows, self.cols):
            raise ValueError(
                f"field {(field_.rows, field_.cols)} does not match space "
                f"{(self.rows, self.cols)}"
            )
        for gs in self.iter_states():
            gs.temp = field_.temp(gs.i, gs.j)


def is_steady(temp_c: float, profile: FishProfile) -> bool:
    """Steady means the grid temperature sits inside the closed livable band."""
    return profile.tolerates(temp_c)


def von_neumann_neighbors(i: int, j: int, dims: tuple[int, int]) -> list[tuple[int, int]]:
    """In-bounds orthogonal neighbours, in fixed up/down/left/right order."""
    rows, cols = dims
    if not (0 <= i < rows and 0 <= j < cols):
        raise ValueError(f"({i}, {j}) out of bounds for {rows}x{cols}")
    candidates = [(i - 1, j), (i + 1, j), (i, j - 1), (i, j + 1)]
    return [(a, b) for a, b in candidates if 0 <= a < rows and 0 <= b < cols]


def select_target(origin: tuple[int, int], space: CellSpace, field_: GridField,
                  profile: FishProfile) -> tuple[int, int] | None:
    """Best admissible neighbour for a fleeing cell, or None when boxed in.

    Admissible means water with spare capacity; best means temperature
    closest to the species' preferred value, earliest in the fixed
    neighbour order on ties.
    """
    best: tuple[int, int] | None = None
    best_gap = float("inf")
    for ni, nj in von_neumann_neighbors(origin[0], origin[1], (space.rows, space.cols)):
        temp = field_.temp(ni, nj)
        if temp is None:
            continue
        if space.state(ni, nj).occupancy >= MAX_CELLS_PER_GRID:
            continue
        gap = abs(temp - profile.preferred_temp)
        if gap < best_gap:
            best, best_gap = (ni, nj), gap
    return best


@dataclass(frozen=True)
class MoveEvent:
    """Audit record of one movement attempt."""

    species: str
    origin: tuple[int, int]
    target: tuple[int, int] | None
    hop: int
    probability: float
    draw: float
    outcome: str  # "moved" | "stayed" | "blocked"


@dataclass
class StepReport:
    """What happened during one simulated year."""

    year: int
    events: list[MoveEvent] = field(default_factory=list)
    steady_cells: int = 0
    unsteady_cells: int = 0
    blocked_cells: int = 0


def step_year(space: CellSpace, field_: GridField, profiles: dict[str, FishProfile],
              rng: np.random.Generator, hop_budget: int = 1) -> tuple[CellSpace, StepReport]:
    """Advance the space one year under the given temperature field.

    Temperatures update first, then every cell is classified, then unsteady
    cells attempt their moves in row-major grid order (cell index order
    within a grid). Returns a new space with the year counter incremented
    plus the audit report; the input space is left untouched.
    """
    if hop_budget < 1:
        raise ValueError("hop_budget must be >= 1")
    if field_.year != space.year:
        raise ValueError(f"field year {field_.year} != space year {space.year}")
    work = space.copy()
    work.update_temps(field_)

    report = StepReport(year=space.year)
    agenda: list[tuple[int, int, Cell]] = []
    for gs in work.iter_states():
        for cell in gs.cells:
            profile = _profile_for(profiles, cell.species)
            cell.steady = is_steady(gs.temp, profile)
            if cell.steady:
                report.steady_cells += 1
            else:
                report.unsteady_cells += 1
                agenda.append((gs.i, gs.j, cell))

    for i0, j0, cell in agenda:
        profile = _profile_for(profiles, cell.species)
        ci, cj = i0, j0
        for hop in range(1, hop_budget + 1):
            here = work.state(ci, cj)
            if is_steady(here.temp, profile):
                cell.steady = True
                break
            prob = transition_probability(here.temp, profile)
            draw = float(rng.random())
            if draw >= prob:
                report.events.append(
                    MoveEvent(cell.species, (ci, cj), None, hop, prob, draw, "stayed")
                )
                break
            target = select_target((ci, cj), work, field_, profile)
            if target is None:
                report.events.append(
                    MoveEvent(cell.species, (ci, cj), None, hop, prob, draw, "blocked")
                )
                report.blocked_cells += 1
                break
            ti, tj = target
            here.cells.remove(cell)
            work.state(ti, tj).cells.append(cell)
            report.events.append(
                MoveEvent(cell.species, (ci, cj), target, hop, prob, draw, "moved")
            )
            ci, cj = ti, tj
            cell.steady = is_steady(work.state(ci, cj).temp, profile)

    work.year = space.year + 1
    return work, report


def _profile_for(profiles: dict[str, FishProfile], species: str) -> FishProfile:
    try:
        return profiles[species]
    except KeyError:
        raise KeyError(f"no thermal profile for species '{species}'") from None


def run_simulation(initial: CellSpace, fields, profiles: dict[str, FishProfile],
                   seed: int | None = None, hop_budget: int = 1,
                   ) -> list[tuple[int, CellSpace, StepReport]]:
    """Step through consecutive yearly fields, returning every snapshot.

    ``fields`` must cover years initial.year, initial.year + 1, ... with no
    gaps. The returned trajectory holds (year, space after that year's step,
    report) and is bit-reproducible for a fixed seed.
    """
    rng = np.random.default_rng(initial.seed if seed is None else seed)
    space = initial
    expected_year = initial.year
    trajectory: list[tuple[int, CellSpace, StepReport]] = []
    for field_ in fields:
        if field_.year != expected_year:
            raise ValueError(f"missing field for year {expected_year}, got {field_.year}")
        space, report = step_year(space, field_, profiles, rng, hop_budget=hop_budget)
        trajectory.append((field_.year, space, report))
        expected_year += 1
    return trajectory


def centroid(space: CellSpace, species: str) -> tuple[float, float]:
    """Mean (row, col) of a species' cells, each cell weighing equally."""
    total_i = total_j = count = 0
    for gs in space.iter_states():
        n = sum(1 for c in gs.cells if c.species == species)
        total_i += gs.i * n
        total_j += gs.j * n
        count += n
    if count == 0:
        raise ValueError(f"no cells of species '{species}' in the space")
    return total_i / count, total_j / count


def assert_space_invariants(space: CellSpace,
                            expected_counts: dict[str, int] | None = None) -> None:
    """Raise if occupancy, land, or conservation rules are violated."""
    for gs in space.iter_states():
        if gs.occupancy > MAX_CELLS_PER_GRID:
            raise AssertionError(f"grid ({gs.i}, {gs.j}) holds {gs.occupancy} cells")
        if space.mask.is_land(gs.i, gs.j) and gs.cells:
            raise AssertionError(f"land grid ({gs.i}, {gs.j}) holds cells")
    if expected_counts is not None:
        actual = space.species_counts()
        if actual != expected_counts:
            raise AssertionError(f"cell counts changed: {actual} != {expected_counts}")


# ---------------------------------------------------------------------------
# seeding and export files


def load_seeding_csv(path, space: CellSpace) -> None:
    """Place cells into a space from a CSV ``i,j,species,cell_count``."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != ["i", "j", "species", "cell_count"]:
            raise ValueError(f"{path}: expected header i,j,species,cell_count")
        for lineno, row in enumerate(reader, start=2):
            try:
                space.place(int(row["i"]), int(row["j"]), row["species"],
                            int(row["cell_count"]))
            except (TypeError, ValueError) as exc:
                raise ValueError(f"{path}:{lineno}: bad seeding row: {exc}") from exc


def write_seeding_csv(space: CellSpace, path) -> None:
    """Dump current occupancy in the seeding-file format."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["i", "j", "species", "cell_count"])
        for gs in space.iter_states():
            counts: dict[str, int] = {}
            for cell in gs.cells:
                counts[cell.species] = counts.get(cell.species, 0) + 1
            for species in sorted(counts):
                writer.writerow([gs.i, gs.j, species, counts[species]])


def seed_uniform(space: CellSpace, species: str, n_cells: int,
                 profile: FishProfile, rng: np.random.Generator) -> int:
    """Scatter cells uniformly over livable water grids with spare capacity.

    Returns how many cells were actually placed (less than ``n_cells`` when
    capacity runs out).
    """
    placed = 0
    for _ in range(n_cells):
        candidates = [
            gs for gs in space.iter_states()
            if gs.temp is not None and profile.tolerates(gs.temp)
            and gs.occupancy < MAX_CELLS_PER_GRID
        ]
        if not candidates:
            break
        pick = candidates[int(rng.integers(len(candidates)))]
        space.place(pick.i, pick.j, species)
        placed += 1
    return placed


def write_occupancy_csv(trajectory, path) -> None:
    """Per-year occupancy CSV ``year,i,j,species,cells`` over a trajectory."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["year", "i", "j", "species", "cells"])
        for year, space, _ in trajectory:
            for gs in space.iter_states():
                counts: dict[str, int] = {}
                for cell in gs.cells:
                    counts[cell.species] = counts.get(cell.species, 0) + 1
                for species in sorted(counts):
                    writer.writerow([year, gs.i, gs.j, species, counts[species]])


def write_movement_csv(trajectory, path) -> None:
    """Movement audit log CSV over a trajectory."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["year", "species", "from_i", "from_j", "to_i", "to_j",
             "hop", "probability", "draw", "outcome"]
        )
        for year, _, report in trajectory:
            for ev in report.events:
                to_i = "" if ev.target is None else ev.target[0]
                to_j = "" if ev.target is None else ev.target[1]
                writer.writerow(
                    [year, ev.species, ev.origin[0], ev.origin[1], to_i, to_j,
                     ev.hop, repr(ev.probability), repr(ev.draw), ev.outcome]
                )
