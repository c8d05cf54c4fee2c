"""Thermal-tolerance statistics for fish species.

Occurrence records pair a species tag with the sea-surface temperature at
which the animal was observed. Sample temperatures are treated as normally
distributed; the fitted mean is the temperature a species prefers and the
two-sigma band around it is the range it tolerates. The same fit drives the
migration engine: the further a grid's temperature sits from the preferred
value, the more probability mass lies between them and the more likely the
resident fish are to leave.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from statistics import NormalDist

import numpy as np

__all__ = [
    "OccurrenceRecord",
    "FishProfile",
    "fit_normal",
    "fit_profiles",
    "livable_range",
    "normal_pdf",
    "normal_cdf",
    "transition_probability",
    "qq_points",
    "load_occurrences",
    "save_profiles",
    "load_profiles",
    "save_qq_points",
]

# Half-width of the livable band, in standard deviations. Two sigmas keep
# 95.45% of occurrence samples inside the band.
LIVABLE_SIGMAS = 2.0


@dataclass(frozen=True)
class OccurrenceRecord:
    """One occurrence observation: a species seen at a given SST."""

    species: str
    sst_c: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.sst_c):
            raise ValueError(f"occurrence temperature must be finite, got {self.sst_c}")


@dataclass(frozen=True)
class FishProfile:
    """Fitted thermal tolerance of one species.

    ``mu`` is both the distribution mean and the preferred temperature;
    ``sigma`` sets the width of the livable band [mu - 2*sigma, mu + 2*sigma].
    """

    species: str
    mu: float
    sigma: float

    def __post_init__(self) -> None:
        if not (self.sigma > 0 and math.isfinite(self.sigma)):
            raise ValueError(f"sigma must be positive and finite, got {self.sigma}")
        if not math.isfinite(self.mu):
            raise ValueError(f"mu must be finite, got {self.mu}")

    @property
    def preferred_temp(self) -> float:
        """Temperature the species is most comfortable at (the fitted mean)."""
        return self.mu

    @property
    def livable(self) -> tuple[float, float]:
        """Closed [low, high] interval of tolerable temperatures."""
        return livable_range(self.mu, self.sigma)

    def tolerates(self, temp_c: float) -> bool:
        """True when ``temp_c`` falls inside the closed livable interval."""
        lo, hi = self.livable
        return lo <= temp_c <= hi


def fit_normal(samples) -> tuple[float, float]:
    """Fit (mean, standard deviation) to temperature samples.

    Uses the unbiased estimator (n - 1 denominator). Requires at least two
    samples and nonzero spread.
    """
    arr = np.asarray(samples, dtype=float)
    if arr.ndim != 1:
        arr = arr.ravel()
    if arr.size < 2:
        raise ValueError(f"need at least 2 samples to fit a normal, got {arr.size}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("samples contain non-finite values")
    mu = float(arr.mean())
    sigma = float(arr.std(ddof=1))
    if sigma <= 0.0:
        raise ValueError("samples have zero variance; sigma must be positive")
    return mu, sigma


def fit_profiles(records) -> dict[str, FishProfile]:
    """Group occurrence records by species and fit a profile for each."""
    by_species: dict[str, list[float]] = {}
    for rec in records:
        by_species.setdefault(rec.species, []).append(rec.sst_c)
    return {
        species: FishProfile(species, *fit_normal(temps))
        for species, temps in sorted(by_species.items())
    }


def livable_range(mu: float, sigma: float) -> tuple[float, float]:
    """Closed interval [mu - 2*sigma, mu + 2*sigma] of tolerable temperatures."""
    if not (sigma > 0):
        raise ValueError(f"sigma must be positive, got {sigma}")
    return (mu - LIVABLE_SIGMAS * sigma, mu + LIVABLE_SIGMAS * sigma)


def normal_pdf(temp_c: float, profile: FishProfile) -> float:
    """Probability density of the species' fitted normal at ``temp_c``."""
    z = (temp_c - profile.mu) / profile.sigma
    return math.exp(-0.5 * z * z) / (math.sqrt(2.0 * math.pi) * profile.sigma)


def normal_cdf(temp_c: float, profile: FishProfile) -> float:
    """Cumulative probability of the species' fitted normal up to ``temp_c``.

    Evaluated through the error function; absolute error is at the level of
    double-precision rounding, far below the 1e-10 budget.
    """
    z = (temp_c - profile.mu) / (profile.sigma * math.sqrt(2.0))
    return 0.5 * (1.0 + math.erf(z))


def transition_probability(temp_c: float, profile: FishProfile) -> float:
    """Probability that a resident cell of fish leaves a grid at ``temp_c``.

    The probability mass between the current temperature and the preferred
    temperature, taken relative to half the total mass. Zero exactly at the
    preferred temperature, approaching one far away from it on either side.
    """
    p = 2.0 * abs(normal_cdf(temp_c, profile) - 0.5)
    return min(1.0, max(0.0, p))


def qq_points(samples) -> tuple[np.ndarray, float]:
    """Quantile-quantile points of samples against their own fitted normal.

    Sorted samples are paired with fitted-normal quantiles at plotting
    positions (i - 0.5) / n. Returns the (n, 2) array of
    (theoretical, empirical) pairs plus the maximum absolute deviation,
    a crude score of how non-normal the sample looks (0 = perfectly normal).
    """
    arr = np.sort(np.asarray(samples, dtype=float))
    n = arr.size
    if n < 3:
        raise ValueError(f"need at least 3 samples for a QQ comparison, got {n}")
    mu, sigma = fit_normal(arr)
    dist = NormalDist(mu, sigma)
    positions = (np.arange(1, n + 1) - 0.5) / n
    theoretical = np.array([dist.inv_cdf(p) for p in positions])
    points = np.column_stack([theoretical, arr])
    max_dev = float(np.max(np.abs(theoretical - arr)))
    return points, max_dev


# ---------------------------------------------------------------------------
# file formats


def load_occurrences(path) -> list[OccurrenceRecord]:
    """Read an occurrence CSV with header ``species,sst_c``."""
    records = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != ["species", "sst_c"]:
            raise ValueError(
                f"{path}: expected header 'species,sst_c', got {reader.fieldnames}"
            )
        for lineno, row in enumerate(reader, start=2):
            try:
                records.append(OccurrenceRecord(row["species"], float(row["sst_c"])))
            except (TypeError, ValueError) as exc:
                raise ValueError(f"{path}:{lineno}: bad occurrence row: {exc}") from exc
    return records


def save_profiles(profiles: dict[str, FishProfile], path) -> None:
    """Write profiles as CSV ``species,mu,sigma,tb,ts_lo,ts_hi``."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["species", "mu", "sigma", "tb", "ts_lo", "ts_hi"])
        for species in sorted(profiles):
            p = profiles[species]
            lo, hi = p.livable
            writer.writerow(
                [species, repr(float(p.mu)), repr(float(p.sigma)),
                 repr(float(p.preferred_temp)), repr(float(lo)), repr(float(hi))]
            )


def load_profiles(path) -> dict[str, FishProfile]:
    """Read a profile CSV written by :func:`save_profiles`."""
    profiles: dict[str, FishProfile] = {}
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        for lineno, row in enumerate(reader, start=2):
            try:
                profiles[row["species"]] = FishProfile(
                    row["species"], float(row["mu"]), float(row["sigma"])
                )
            except (TypeError, ValueError, KeyError) as exc:
                raise ValueError(f"{path}:{lineno}: bad profile row: {exc}") from exc
    return profiles


def save_qq_points(points: np.ndarray, path) -> None:
    """Write QQ pairs as CSV ``theoretical,empirical`` for plotting."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["theoretical", "empirical"])
        for theo, emp in points:
            writer.writerow([repr(float(theo)), repr(float(emp))])
