"""Gridded sea-surface temperature ingestion and rendering.

Monthly SST samples live on a half-degree lattice of vertexes. The analysis
grid overlays that lattice with one-degree square cells whose corners sit on
lattice points; a cell's temperature is the plain average of its four corner
vertexes. A land mask marks cells that carry no water temperature at all.

Fields render to portable pixmaps with a linear blue-to-red ramp (cold to
warm, clamped to a fixed span) plus a sidecar CSV of the raw numbers.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "SstRecord",
    "SstSeriesStore",
    "SstValidationError",
    "LandMask",
    "GridExtent",
    "GridField",
    "DEFAULT_EXTENT",
    "load_sst_csv",
    "write_sst_csv",
    "filter_month",
    "cell_temperature",
    "vertex_layer",
    "build_grid_field",
    "field_from_cell_values",
    "render_heatmap",
    "write_field_csv",
    "load_field_csv",
]

TEMP_MIN_C = -5.0
TEMP_MAX_C = 45.0

# colour ramp endpoints for rendering, degrees C
RAMP_COLD_C = 2.0
RAMP_WARM_C = 12.0

LAND_RGB = (255, 255, 255)


class SstValidationError(ValueError):
    """Input file failed validation; ``line`` is the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


def _half_units(value: float) -> int:
    """Snap a coordinate to the half-degree lattice, in half-degree units."""
    doubled = value * 2.0
    snapped = round(doubled)
    if abs(doubled - snapped) > 1e-6:
        raise ValueError(f"coordinate {value} is not on the 0.5 degree lattice")
    return int(snapped)


@dataclass(frozen=True)
class SstRecord:
    """One monthly temperature sample at a lattice vertex."""

    year: int
    month: int
    lat: float
    lon: float
    temp_c: float

    def __post_init__(self) -> None:
        if not 1 <= self.month <= 12:
            raise ValueError(f"month {self.month} outside 1..12")
        if not TEMP_MIN_C <= self.temp_c <= TEMP_MAX_C:
            raise ValueError(
                f"temperature {self.temp_c} outside sane bounds "
                f"[{TEMP_MIN_C}, {TEMP_MAX_C}]"
            )
        _half_units(self.lat)
        _half_units(self.lon)


class SstSeriesStore:
    """Time-ordered temperature samples keyed by lattice vertex.

    Each vertex holds a sequence of (year, month, temp) strictly increasing
    in (year, month); duplicates are rejected at insertion.
    """

    def __init__(self) -> None:
        self._series: dict[tuple[int, int], list[tuple[int, int, float]]] = {}

    def __len__(self) -> int:
        return sum(len(seq) for seq in self._series.values())

    @property
    def n_vertices(self) -> int:
        return len(self._series)

    def add(self, record: SstRecord) -> None:
        key = (_half_units(record.lat), _half_units(record.lon))
        seq = self._series.setdefault(key, [])
        entry = (record.year, record.month, record.temp_c)
        if seq and (record.year, record.month) <= seq[-1][:2]:
            # keep the common append-fast path; fall back to a sorted insert
            stamp = (record.year, record.month)
            if any(stamp == (y, m) for y, m, _ in seq):
                raise ValueError(
                    f"duplicate sample for vertex ({record.lat}, {record.lon}) "
                    f"at {record.year}-{record.month:02d}"
                )
            seq.append(entry)
            seq.sort(key=lambda e: (e[0], e[1]))
        else:
            seq.append(entry)

    def vertices(self) -> list[tuple[float, float]]:
        """Vertex coordinates in degrees, sorted south-to-north, west-to-east."""
        return [(la / 2.0, lo / 2.0) for la, lo in sorted(self._series)]

    def series(self, lat: float, lon: float) -> list[tuple[int, int, float]]:
        key = (_half_units(lat), _half_units(lon))
        return list(self._series.get(key, []))

    def has_vertex(self, lat: float, lon: float) -> bool:
        return (_half_units(lat), _half_units(lon)) in self._series

    def annual_values(self, lat: float, lon: float) -> tuple[list[int], list[float]]:
        """(years, temps) for a vertex; meaningful after filtering to one month."""
        seq = self.series(lat, lon)
        return [y for y, _, _ in seq], [t for _, _, t in seq]

    def iter_records(self):
        for (la, lo), seq in sorted(self._series.items()):
            for year, month, temp in seq:
                yield SstRecord(year, month, la / 2.0, lo / 2.0, temp)


def load_sst_csv(path) -> SstSeriesStore:
    """Load a vertex-sample CSV with header ``year,month,lat,lon,temp_c``.

    Every malformed row aborts the load with its line number; valid files
    produce a store holding every row.
    """
    store = SstSeriesStore()
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["year", "month", "lat", "lon", "temp_c"]:
            raise SstValidationError(
                f"bad header {header}, expected year,month,lat,lon,temp_c", line=1
            )
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 5:
                raise SstValidationError(f"expected 5 fields, got {len(row)}", line=lineno)
            try:
                record = SstRecord(int(row[0]), int(row[1]), float(row[2]),
                                   float(row[3]), float(row[4]))
            except ValueError as exc:
                raise SstValidationError(str(exc), line=lineno) from exc
            try:
                store.add(record)
            except ValueError as exc:
                raise SstValidationError(str(exc), line=lineno) from exc
    return store


def write_sst_csv(store: SstSeriesStore, path) -> None:
    """Inverse of :func:`load_sst_csv` for valid stores."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["year", "month", "lat", "lon", "temp_c"])
        for rec in store.iter_records():
            writer.writerow([rec.year, rec.month, rec.lat, rec.lon, repr(float(rec.temp_c))])


def filter_month(store: SstSeriesStore, month: int) -> SstSeriesStore:
    """New store containing only the samples of the given calendar month."""
    if not 1 <= month <= 12:
        raise ValueError(f"month {month} outside 1..12")
    out = SstSeriesStore()
    for rec in store.iter_records():
        if rec.month == month:
            out.add(rec)
    return out


@dataclass(frozen=True)
class LandMask:
    """Boolean grid; True marks land cells that never carry a temperature."""

    land: np.ndarray  # (rows, cols) bool

    def __post_init__(self) -> None:
        if self.land.ndim != 2 or self.land.dtype != bool:
            raise ValueError("mask must be a 2-D boolean array")

    @property
    def rows(self) -> int:
        return self.land.shape[0]

    @property
    def cols(self) -> int:
        return self.land.shape[1]

    def is_land(self, i: int, j: int) -> bool:
        return bool(self.land[i, j])

    @classmethod
    def all_water(cls, rows: int, cols: int) -> "LandMask":
        return cls(np.zeros((rows, cols), dtype=bool))

    @classmethod
    def from_text(cls, path) -> "LandMask":
        """Parse a text grid of 0/1 characters, rows north-to-south."""
        rows = []
        with open(path) as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                if set(line) - {"0", "1"}:
                    raise ValueError(f"{path}:{lineno}: mask rows must be 0/1 characters")
                rows.append([ch == "1" for ch in line])
        if not rows:
            raise ValueError(f"{path}: empty mask file")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ValueError(f"{path}: ragged mask rows")
        return cls(np.array(rows, dtype=bool))

    def to_text(self, path) -> None:
        with open(path, "w") as fh:
            for row in self.land:
                fh.write("".join("1" if v else "0" for v in row) + "\n")


@dataclass(frozen=True)
class GridExtent:
    """Placement of the cell grid on the lattice.

    ``lat_top``/``lon_left`` locate the north-west corner vertex; cells are
    one degree square, rows run north to south and columns west to east.
    """

    lat_top: float = 68.0
    lon_left: float = -21.0
    rows: int = 13
    cols: int = 27

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1:
            raise ValueError("extent must have at least one row and column")
        _half_units(self.lat_top)
        _half_units(self.lon_left)

    def cell_corners(self, i: int, j: int) -> list[tuple[float, float]]:
        """(lat, lon) of the NW, NE, SW, SE corner vertexes of cell (i, j)."""
        north = self.lat_top - i
        south = north - 1.0
        west = self.lon_left + j
        east = west + 1.0
        return [(north, west), (north, east), (south, west), (south, east)]


DEFAULT_EXTENT = GridExtent()


@dataclass
class GridField:
    """Per-cell temperatures for one year; land cells hold NaN."""

    year: int
    temps: np.ndarray  # (rows, cols) float, NaN on land
    mask: LandMask
    extent: GridExtent | None = None

    def __post_init__(self) -> None:
        if self.temps.shape != (self.mask.rows, self.mask.cols):
            raise ValueError(
                f"field shape {self.temps.shape} does not match mask "
                f"{(self.mask.rows, self.mask.cols)}"
            )
        water = ~self.mask.land
        if not np.all(np.isfinite(self.temps[water])):
            raise ValueError("water cells must carry finite temperatures")

    @property
    def rows(self) -> int:
        return self.mask.rows

    @property
    def cols(self) -> int:
        return self.mask.cols

    def temp(self, i: int, j: int) -> float | None:
        """Cell temperature, or None on land."""
        if self.mask.is_land(i, j):
            return None
        return float(self.temps[i, j])

    def shifted(self, delta_c: float, year: int | None = None) -> "GridField":
        """Copy with every water temperature offset by ``delta_c``."""
        temps = self.temps.copy()
        temps[~self.mask.land] += delta_c
        return GridField(self.year if year is None else year, temps, self.mask, self.extent)


def cell_temperature(v_nw: float, v_ne: float, v_sw: float, v_se: float) -> float:
    """Cell temperature: arithmetic mean of the four corner vertexes."""
    corners = (v_nw, v_ne, v_sw, v_se)
    if not all(math.isfinite(v) for v in corners):
        raise ValueError(f"corner temperatures must be finite, got {corners}")
    return (v_nw + v_ne + v_sw + v_se) / 4.0


def vertex_layer(store: SstSeriesStore, year: int, month: int) -> dict[tuple[float, float], float]:
    """Per-vertex temperatures for one (year, month) slice of a store."""
    layer: dict[tuple[float, float], float] = {}
    for rec in store.iter_records():
        if rec.year == year and rec.month == month:
            layer[(rec.lat, rec.lon)] = rec.temp_c
    return layer


def build_grid_field(vertex_temps: dict[tuple[float, float], float], mask: LandMask,
                     extent: GridExtent, year: int) -> GridField:
    """Average corner vertexes into cell temperatures over the extent.

    Every water cell must have all four corners present in ``vertex_temps``;
    land cells need no data.
    """
    if (mask.rows, mask.cols) != (extent.rows, extent.cols):
        raise ValueError(
            f"mask {(mask.rows, mask.cols)} does not match extent "
            f"{(extent.rows, extent.cols)}"
        )
    keyed = {(_half_units(la), _half_units(lo)): t for (la, lo), t in vertex_temps.items()}
    temps = np.full((extent.rows, extent.cols), np.nan)
    for i in range(extent.rows):
        for j in range(extent.cols):
            if mask.is_land(i, j):
                continue
            corners = []
            for la, lo in extent.cell_corners(i, j):
                key = (_half_units(la), _half_units(lo))
                if key not in keyed:
                    raise ValueError(
                        f"water cell ({i}, {j}) is missing corner vertex ({la}, {lo})"
                    )
                corners.append(keyed[key])
            temps[i, j] = cell_temperature(*corners)
    return GridField(year, temps, mask, extent)


def field_from_cell_values(values: np.ndarray, mask: LandMask, year: int,
                           extent: GridExtent | None = None) -> GridField:
    """Wrap already-per-cell temperatures (e.g. forecast output) as a field."""
    temps = np.asarray(values, dtype=float).copy()
    temps[mask.land] = np.nan
    return GridField(year, temps, mask, extent)


# ---------------------------------------------------------------------------
# rendering


def ramp_color(temp_c: float, cold_c: float = RAMP_COLD_C,
               warm_c: float = RAMP_WARM_C) -> tuple[int, int, int]:
    """Linear blue-to-red ramp, clamped outside [cold_c, warm_c]."""
    frac = (temp_c - cold_c) / (warm_c - cold_c)
    frac = min(1.0, max(0.0, frac))
    red = int(255.0 * frac + 0.5)
    blue = int(255.0 * (1.0 - frac) + 0.5)
    return (red, 0, blue)


def render_heatmap(field: GridField, path, scale: int = 1,
                   cold_c: float = RAMP_COLD_C, warm_c: float = RAMP_WARM_C,
                   ascii_format: bool = False) -> None:
    """Write the field as a portable pixmap plus a sidecar CSV.

    One ``scale`` x ``scale`` pixel block per cell; land cells render pure
    white. The sidecar CSV lands next to the pixmap with a .csv suffix.
    """
    if scale < 1:
        raise ValueError("scale must be >= 1")
    rows, cols = field.rows, field.cols
    pixels = np.zeros((rows, cols, 3), dtype=np.uint8)
    for i in range(rows):
        for j in range(cols):
            temp = field.temp(i, j)
            pixels[i, j] = LAND_RGB if temp is None else ramp_color(temp, cold_c, warm_c)
    if scale > 1:
        pixels = np.repeat(np.repeat(pixels, scale, axis=0), scale, axis=1)
    height, width = pixels.shape[:2]
    if ascii_format:
        with open(path, "w") as fh:
            fh.write(f"P3\n{width} {height}\n255\n")
            for row in pixels:
                fh.write(" ".join(str(int(v)) for px in row for v in px) + "\n")
    else:
        with open(path, "wb") as fh:
            fh.write(f"P6\n{width} {height}\n255\n".encode("ascii"))
            fh.write(pixels.tobytes())
    sidecar = str(path)
    sidecar = sidecar[: sidecar.rfind(".")] + ".csv" if "." in sidecar else sidecar + ".csv"
    write_field_csv(field, sidecar)


def write_field_csv(field: GridField, path) -> None:
    """Cell temperatures as CSV ``i,j,temp_c``; land cells leave temp empty."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["i", "j", "temp_c"])
        for i in range(field.rows):
            for j in range(field.cols):
                temp = field.temp(i, j)
                writer.writerow([i, j, "" if temp is None else repr(temp)])


def load_field_csv(path, year: int = 0, extent: GridExtent | None = None) -> GridField:
    """Rebuild a field from a ``i,j,temp_c`` CSV (empty temp means land)."""
    entries: dict[tuple[int, int], float | None] = {}
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != ["i", "j", "temp_c"]:
            raise ValueError(f"{path}: expected header i,j,temp_c")
        for lineno, row in enumerate(reader, start=2):
            try:
                i, j = int(row["i"]), int(row["j"])
                raw = row["temp_c"]
                entries[(i, j)] = None if raw in ("", None) else float(raw)
            except (TypeError, ValueError) as exc:
                raise ValueError(f"{path}:{lineno}: bad field row: {exc}") from exc
    if not entries:
        raise ValueError(f"{path}: empty field file")
    rows = max(i for i, _ in entries) + 1
    cols = max(j for _, j in entries) + 1
    if len(entries) != rows * cols:
        raise ValueError(f"{path}: field file does not cover a full {rows}x{cols} grid")
    temps = np.full((rows, cols), np.nan)
    land = np.zeros((rows, cols), dtype=bool)
    for (i, j), temp in entries.items():
        if temp is None:
            land[i, j] = True
        else:
            temps[i, j] = temp
    return GridField(year, temps, LandMask(land), extent)
