"""Time-domain feature vectors for SST forecasting.

A prediction for time t is conditioned on two windows drawn from the last
``lookback`` samples of the series: the ``adjacent`` consecutive samples
immediately before t (capturing the local trend and auto-correlation), and a
``seasonal`` window centred on the sample one period earlier (capturing the
seasonal level and its tendency). For monthly data the period is 12 samples;
for a one-sample-per-year series (e.g. August only) it is 1 and the seasonal
window collapses onto the previous year's sample.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

__all__ = ["TdfConfig", "TrainingPair", "build_features", "make_dataset", "save_dataset_csv"]


@dataclass(frozen=True)
class TdfConfig:
    """Window geometry for feature extraction.

    lookback:          total history length a target must have behind it
    adjacent:          samples taken immediately before the target
    seasonal:          samples centred one period before the target (0 = none)
    samples_per_year:  series period (12 for monthly data, 1 for annual)
    """

    lookback: int = 7
    adjacent: int = 6
    seasonal: int = 1
    samples_per_year: int = 1

    def __post_init__(self) -> None:
        if self.adjacent < 1:
            raise ValueError("adjacent window must hold at least 1 sample")
        if self.seasonal < 0:
            raise ValueError("seasonal window cannot be negative")
        if self.samples_per_year < 1:
            raise ValueError("samples_per_year must be >= 1")
        half_up = -(-self.seasonal // 2)  # ceil(seasonal / 2)
        if half_up > self.samples_per_year:
            raise ValueError(
                "seasonal window would reach past the target: "
                f"ceil({self.seasonal}/2) > period {self.samples_per_year}"
            )
        needed = max(self.adjacent, self.samples_per_year + half_up)
        if self.lookback < needed:
            raise ValueError(f"lookback {self.lookback} too short, need >= {needed}")

    @property
    def feature_length(self) -> int:
        return self.adjacent + self.seasonal

    @classmethod
    def monthly(cls, adjacent: int = 6, seasonal: int = 3) -> "TdfConfig":
        half_up = -(-seasonal // 2)
        return cls(lookback=12 + half_up, adjacent=adjacent, seasonal=seasonal,
                   samples_per_year=12)

    @classmethod
    def annual(cls, adjacent: int = 6, seasonal: int = 1) -> "TdfConfig":
        half_up = -(-seasonal // 2)
        return cls(lookback=max(adjacent + seasonal, 1 + half_up), adjacent=adjacent,
                   seasonal=seasonal, samples_per_year=1)


@dataclass(frozen=True)
class TrainingPair:
    """A feature vector and the series value it should predict."""

    features: np.ndarray
    target: float


def build_features(series, target_index: int, config: TdfConfig) -> np.ndarray:
    """Extract the feature vector for predicting ``series[target_index]``.

    The result concatenates the ``adjacent`` samples right before the target
    with the ``seasonal`` samples centred one period earlier, in series order.
    """
    arr = np.asarray(series, dtype=float)
    if target_index - config.lookback < 0:
        raise ValueError(
            f"insufficient history at index {target_index}: "
            f"need {config.lookback} samples, have {target_index}"
        )
    recent = arr[target_index - config.adjacent : target_index]
    parts = [recent]
    if config.seasonal > 0:
        centre = target_index - config.samples_per_year
        lo = centre - config.seasonal // 2
        hi = centre + (-(-config.seasonal // 2))  # exclusive
        parts.append(arr[lo:hi])
    features = np.concatenate(parts)
    if not np.all(np.isfinite(features)):
        raise ValueError(f"non-finite sample inside feature window at {target_index}")
    return features


def make_dataset(series, config: TdfConfig) -> list[TrainingPair]:
    """One training pair per admissible target index, in order."""
    arr = np.asarray(series, dtype=float)
    if arr.size <= config.lookback:
        raise ValueError(
            f"series of length {arr.size} too short for lookback {config.lookback}"
        )
    return [
        TrainingPair(build_features(arr, t, config), float(arr[t]))
        for t in range(config.lookback, arr.size)
    ]


def save_dataset_csv(pairs, path) -> None:
    """Dump pairs as ``f1..fk,target`` rows for inspection."""
    pairs = list(pairs)
    if not pairs:
        raise ValueError("no pairs to write")
    k = len(pairs[0].features)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"f{i + 1}" for i in range(k)] + ["target"])
        for pair in pairs:
            writer.writerow([repr(float(v)) for v in pair.features] + [repr(pair.target)])
