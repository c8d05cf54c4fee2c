"""Seeded synthetic fixtures: SST archives, occurrences, seeding files.

Real archive access is out of scope for this toolkit, so every pipeline
stage can be exercised end to end on generated data instead. All generators
are deterministic functions of their seed.
"""

from __future__ import annotations

import csv
import math

import numpy as np

from .eca import MAX_CELLS_PER_GRID, CellSpace
from .fishstats import FishProfile
from .sst_data import GridExtent, GridField, LandMask, SstRecord, SstSeriesStore

__all__ = [
    "annual_series",
    "monthly_series",
    "synthetic_store",
    "write_synthetic_sst_csv",
    "occurrence_temps",
    "write_occurrences_csv",
    "gradient_strip_field",
    "seeded_strip_space",
    "write_uniform_seeding_csv",
]


def annual_series(n_years: int, base: float = 10.0, amplitude: float = 1.0,
                  period_years: float = 8.0, trend: float = 0.02,
                  noise_sigma: float = 0.1, seed: int = 0) -> np.ndarray:
    """One-sample-per-year series: sinusoid + linear trend + Gaussian noise."""
    rng = np.random.default_rng(seed)
    years = np.arange(n_years, dtype=float)
    values = (
        base
        + amplitude * np.sin(2.0 * math.pi * years / period_years)
        + trend * years
    )
    if noise_sigma > 0:
        values = values + rng.normal(0.0, noise_sigma, n_years)
    return values


def monthly_series(n_years: int, base: float = 10.0, seasonal_amp: float = 4.0,
                   trend: float = 0.02, noise_sigma: float = 0.1,
                   seed: int = 0) -> np.ndarray:
    """Monthly series with an annual cycle peaking in August."""
    rng = np.random.default_rng(seed)
    months = np.arange(n_years * 12, dtype=float)
    # cycle peaks at month index 7 (August) within each year
    values = (
        base
        + seasonal_amp * np.cos(2.0 * math.pi * (months % 12 - 7) / 12.0)
        + trend * months / 12.0
    )
    if noise_sigma > 0:
        values = values + rng.normal(0.0, noise_sigma, months.size)
    return values


def _vertex_base(lat: float, lon: float, extent: GridExtent) -> float:
    """Spatial mean temperature: warm in the south-west, cool north-east."""
    south = extent.lat_top - extent.rows
    return 11.5 - 0.65 * (lat - south) + 0.02 * (lon - extent.lon_left)


def synthetic_store(extent: GridExtent, start_year: int, n_years: int,
                    months=(8,), trend: float = 0.02, noise_sigma: float = 0.1,
                    seed: int = 0) -> SstSeriesStore:
    """Store with a full series at every vertex of the extent."""
    rng = np.random.default_rng(seed)
    store = SstSeriesStore()
    for vi in range(extent.rows + 1):
        lat = extent.lat_top - vi
        for vj in range(extent.cols + 1):
            lon = extent.lon_left + vj
            base = _vertex_base(lat, lon, extent)
            for offset in range(n_years):
                year = start_year + offset
                for month in months:
                    seasonal = 1.5 * math.cos(2.0 * math.pi * (month - 8) / 12.0)
                    temp = base + seasonal + trend * offset
                    if noise_sigma > 0:
                        temp += float(rng.normal(0.0, noise_sigma))
                    temp = min(44.0, max(-4.0, temp))
                    store.add(SstRecord(year, month, lat, lon, round(temp, 3)))
    return store


def write_synthetic_sst_csv(path, extent: GridExtent, start_year: int, n_years: int,
                            months=(8,), trend: float = 0.02,
                            noise_sigma: float = 0.1, seed: int = 0) -> int:
    """Generate and write a synthetic vertex-sample CSV; returns row count."""
    store = synthetic_store(extent, start_year, n_years, months=months,
                            trend=trend, noise_sigma=noise_sigma, seed=seed)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["year", "month", "lat", "lon", "temp_c"])
        count = 0
        for rec in store.iter_records():
            writer.writerow([rec.year, rec.month, rec.lat, rec.lon, repr(rec.temp_c)])
            count += 1
    return count


def occurrence_temps(mu: float, sigma: float, count: int, seed: int = 0) -> np.ndarray:
    """Normally distributed occurrence temperatures."""
    rng = np.random.default_rng(seed)
    return rng.normal(mu, sigma, count)


def write_occurrences_csv(path, species_params: dict[str, tuple[float, float, int]],
                          seed: int = 0) -> int:
    """Write occurrences for several species as ``species,sst_c`` rows.

    ``species_params`` maps species to (mu, sigma, count); each species draws
    from its own substream so adding one species does not reshuffle others.
    """
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["species", "sst_c"])
        rows = 0
        for idx, species in enumerate(sorted(species_params)):
            mu, sigma, count = species_params[species]
            temps = occurrence_temps(mu, sigma, count, seed=seed + idx)
            for temp in temps:
                writer.writerow([species, repr(round(float(temp), 4))])
                rows += 1
    return rows


def gradient_strip_field(cols: int = 10, west_temp: float = 11.0,
                         step: float = -0.5, year: int = 0) -> GridField:
    """1 x cols all-water strip with a linear west-to-east gradient.

    The default cools eastward so uniform warming pushes comfort-seeking
    fish east, one column at a time.
    """
    temps = np.array([[west_temp + step * j for j in range(cols)]])
    return GridField(year, temps, LandMask.all_water(1, cols))


def seeded_strip_space(field: GridField, species: str, column: int,
                       cells: int = 1, seed: int = 0) -> CellSpace:
    """Strip space with cells of one species parked at a single column."""
    space = CellSpace.from_field(field, year=1, seed=seed)
    space.place(0, column, species, cells)
    return space


def write_uniform_seeding_csv(path, field: GridField, profile: FishProfile,
                              n_cells: int, seed: int = 0) -> int:
    """Seeding CSV scattering cells uniformly over livable water grids."""
    rng = np.random.default_rng(seed)
    capacity: dict[tuple[int, int], int] = {}
    livable = []
    for i in range(field.rows):
        for j in range(field.cols):
            temp = field.temp(i, j)
            if temp is not None and profile.tolerates(temp):
                livable.append((i, j))
                capacity[(i, j)] = MAX_CELLS_PER_GRID
    placed: dict[tuple[int, int], int] = {}
    count = 0
    for _ in range(n_cells):
        open_grids = [g for g in livable if capacity[g] > 0]
        if not open_grids:
            break
        pick = open_grids[int(rng.integers(len(open_grids)))]
        capacity[pick] -= 1
        placed[pick] = placed.get(pick, 0) + 1
        count += 1
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["i", "j", "species", "cell_count"])
        for (i, j) in sorted(placed):
            writer.writerow([i, j, profile.species, placed[(i, j)]])
    return count
