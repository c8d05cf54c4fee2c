"""Fleet economics: voyage profitability and strategy recommendations.

The profit model is deliberately small and piecewise linear. A voyage sails
out to the catch and back; fuel scales with distance, crew wages with days
at sea, and an unrefrigerated catch loses a fixed fraction of its value for
every day the return leg runs past the spoilage horizon (never below zero).
Refrigeration removes spoilage entirely in exchange for a capital outlay
amortised over a fixed number of seasons.

Strategy advice keys off how far the fish have drifted from the home port:
keep upgrading vessels while they stay close, expect consolidation of firms
at intermediate distances, and diversify into other income once the stock
is effectively out of reach. All parameters are user-supplied conventions,
not measured data.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from enum import Enum

from .eca import CellSpace, centroid

__all__ = [
    "FleetParams",
    "ProfitBreakdown",
    "StrategyOption",
    "StrategyThresholds",
    "SensitivityResult",
    "SpoilageKinkError",
    "voyage_profit",
    "sensitivity",
    "recommend",
    "recommend_track",
    "centroid_track",
    "load_params_file",
    "write_recommendations_csv",
]

KM_PER_DEGREE = 111.1  # ground distance of one grid column

FD_STEP_KM = 1e-3
FD_STEP_DAYS = 1e-3


class SpoilageKinkError(ValueError):
    """Raised when a derivative is requested exactly at a spoilage kink.

    Offset the evaluation point by more than the finite-difference step to
    get one-sided behaviour instead.
    """


class StrategyOption(Enum):
    UPGRADE_VESSELS = "upgrade_vessels"
    REPLACE_FIRMS = "replace_firms"
    DIVERSIFY = "diversify"


@dataclass(frozen=True)
class FleetParams:
    """Cost and revenue structure of a small fishing outfit.

    Defaults are illustrative conventions chosen to exercise every regime
    of the model; real studies should supply their own numbers.
    """

    revenue_per_cell: float = 1000.0   # currency per harvested cell of fish
    fuel_cost: float = 0.5             # currency per km sailed
    crew_cost: float = 100.0           # currency per day at sea
    vessel_speed: float = 200.0        # km per day
    spoilage_horizon: float = 2.0      # days the return leg may take unrefrigerated
    decay_rate: float = 0.25           # value fraction lost per day past the horizon
    refrigeration_capex: float = 600.0
    seasons: int = 10                  # amortisation window for the capex
    km_per_cell: float = KM_PER_DEGREE

    def __post_init__(self) -> None:
        for name in ("revenue_per_cell", "fuel_cost", "crew_cost", "spoilage_horizon",
                     "refrigeration_capex", "km_per_cell"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        if self.vessel_speed <= 0:
            raise ValueError("vessel_speed must be > 0")
        if not 0.0 <= self.decay_rate <= 1.0:
            raise ValueError("decay_rate must lie in [0, 1]")
        if self.seasons < 1:
            raise ValueError("seasons must be >= 1")


@dataclass(frozen=True)
class ProfitBreakdown:
    """Line items of one voyage; net = revenue - all costs."""

    revenue: float
    fuel: float
    crew: float
    spoilage: float
    amortization: float

    @property
    def net(self) -> float:
        return self.revenue - self.fuel - self.crew - self.spoilage - self.amortization


def _breakdown(distance_km: float, sailing_days: float, params: FleetParams,
               refrigerated: bool) -> ProfitBreakdown:
    """Profit line items with distance and sailing time as free variables.

    ``sailing_days`` is the round-trip time; the return leg takes half of it
    and is what spoilage clocks against.
    """
    fuel = params.fuel_cost * 2.0 * distance_km
    crew = params.crew_cost * sailing_days
    if refrigerated:
        spoilage = 0.0
        amortization = params.refrigeration_capex / params.seasons
    else:
        excess_days = max(0.0, sailing_days / 2.0 - params.spoilage_horizon)
        lost_fraction = min(1.0, params.decay_rate * excess_days)
        spoilage = params.revenue_per_cell * lost_fraction
        amortization = 0.0
    return ProfitBreakdown(params.revenue_per_cell, fuel, crew, spoilage, amortization)


def voyage_profit(distance_km: float, params: FleetParams,
                  refrigerated: bool = False) -> ProfitBreakdown:
    """Profit of one round trip to a catch ``distance_km`` away."""
    if distance_km < 0:
        raise ValueError(f"distance must be >= 0, got {distance_km}")
    sailing_days = 2.0 * distance_km / params.vessel_speed
    return _breakdown(distance_km, sailing_days, params, refrigerated)


def _distance_kinks(params: FleetParams) -> list[float]:
    """Distances where the unrefrigerated net profit changes slope."""
    kinks = [params.vessel_speed * params.spoilage_horizon]
    if params.decay_rate > 0:
        kinks.append(params.vessel_speed * (params.spoilage_horizon + 1.0 / params.decay_rate))
    return kinks


@dataclass(frozen=True)
class SensitivityResult:
    """Finite-difference and analytic slopes of net profit.

    Distance slopes follow the voyage (time moves with distance at vessel
    speed); time slopes hold distance fixed and vary days at sea alone.
    """

    distance_fd: float
    time_fd: float
    distance_analytic: float
    time_analytic: float


def sensitivity(params: FleetParams, distance_km: float,
                refrigerated: bool = False) -> SensitivityResult:
    """Partial sensitivities of net profit at a voyage distance.

    Raises :class:`SpoilageKinkError` when the finite-difference stencil
    would straddle a spoilage kink.
    """
    if distance_km < 0:
        raise ValueError(f"distance must be >= 0, got {distance_km}")
    sailing_days = 2.0 * distance_km / params.vessel_speed

    if not refrigerated:
        for kink in _distance_kinks(params):
            if abs(distance_km - kink) <= FD_STEP_KM:
                raise SpoilageKinkError(
                    f"net profit is not differentiable at {kink} km; "
                    f"evaluate at least {FD_STEP_KM} km away from the kink"
                )
            kink_days = 2.0 * kink / params.vessel_speed
            if abs(sailing_days - kink_days) <= FD_STEP_DAYS:
                raise SpoilageKinkError(
                    f"sailing time {sailing_days} days sits on the spoilage kink; "
                    "offset the distance and retry"
                )

    def net_at_distance(d: float) -> float:
        return _breakdown(d, 2.0 * d / params.vessel_speed, params, refrigerated).net

    def net_at_time(days: float) -> float:
        return _breakdown(distance_km, days, params, refrigerated).net

    d_lo = max(0.0, distance_km - FD_STEP_KM)
    distance_fd = (net_at_distance(distance_km + FD_STEP_KM) - net_at_distance(d_lo)) / (
        distance_km + FD_STEP_KM - d_lo
    )
    t_lo = max(0.0, sailing_days - FD_STEP_DAYS)
    time_fd = (net_at_time(sailing_days + FD_STEP_DAYS) - net_at_time(t_lo)) / (
        sailing_days + FD_STEP_DAYS - t_lo
    )

    distance_analytic = -2.0 * params.fuel_cost - 2.0 * params.crew_cost / params.vessel_speed
    time_analytic = -params.crew_cost
    if not refrigerated:
        excess = sailing_days / 2.0 - params.spoilage_horizon
        decaying = 0.0 < params.decay_rate * excess < 1.0 if excess > 0 else False
        if decaying:
            distance_analytic -= params.revenue_per_cell * params.decay_rate / params.vessel_speed
            time_analytic -= params.revenue_per_cell * params.decay_rate / 2.0

    return SensitivityResult(distance_fd, time_fd, distance_analytic, time_analytic)


# ---------------------------------------------------------------------------
# strategy recommendations


@dataclass(frozen=True)
class StrategyThresholds:
    """Distance bands separating the three strategies, in km."""

    upgrade_km: float = 333.0
    abandon_km: float = 999.0

    def __post_init__(self) -> None:
        if not 0 <= self.upgrade_km < self.abandon_km:
            raise ValueError("need 0 <= upgrade_km < abandon_km")

    def option_for(self, distance_km: float) -> StrategyOption:
        if distance_km <= self.upgrade_km:
            return StrategyOption.UPGRADE_VESSELS
        if distance_km <= self.abandon_km:
            return StrategyOption.REPLACE_FIRMS
        return StrategyOption.DIVERSIFY


@dataclass(frozen=True)
class YearAdvice:
    """Per-year recommendation line."""

    year: int
    distance_km: float
    option: StrategyOption
    net_profit: float


def centroid_track(trajectory, species: str) -> list[tuple[int, tuple[float, float]]]:
    """(year, species centroid) for every snapshot of a simulation run."""
    return [(year, centroid(space, species)) for year, space, _ in trajectory]


def recommend_track(track, home: tuple[float, float], params: FleetParams,
                    thresholds: StrategyThresholds = StrategyThresholds(),
                    refrigerated: bool = False) -> list[YearAdvice]:
    """Strategy per year from a (year, centroid) track.

    Distance is the Euclidean grid distance from home to the centroid,
    scaled by the ground size of one cell.
    """
    track = list(track)
    if not track:
        raise ValueError("empty trajectory")
    advice = []
    for year, (ci, cj) in track:
        distance = params.km_per_cell * math.hypot(ci - home[0], cj - home[1])
        option = thresholds.option_for(distance)
        net = voyage_profit(distance, params, refrigerated=refrigerated).net
        advice.append(YearAdvice(year, distance, option, net))
    return advice


def recommend(trajectory, home: tuple[float, float], species: str, params: FleetParams,
              thresholds: StrategyThresholds = StrategyThresholds(),
              refrigerated: bool = False) -> list[YearAdvice]:
    """Per-year strategy options over a migration trajectory."""
    return recommend_track(centroid_track(trajectory, species), home, params,
                           thresholds, refrigerated=refrigerated)


# ---------------------------------------------------------------------------
# files


def load_params_file(path) -> FleetParams:
    """Read fleet parameters from a ``key=value`` text file."""
    values: dict[str, float] = {}
    valid = {f.name for f in FleetParams.__dataclass_fields__.values()}
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got '{line}'")
            key, val = (part.strip() for part in line.split("=", 1))
            if key not in valid:
                raise ValueError(f"{path}:{lineno}: unknown fleet parameter '{key}'")
            values[key] = int(val) if key == "seasons" else float(val)
    return FleetParams(**values)


def write_recommendations_csv(advice, path) -> None:
    """Recommendation export CSV ``year,distance_km,option,net_profit``."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["year", "distance_km", "option", "net_profit"])
        for line in advice:
            writer.writerow(
                [line.year, repr(line.distance_km), line.option.value, repr(line.net_profit)]
            )
