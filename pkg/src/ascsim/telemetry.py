"""Vehicle movement along geographic routes, and shipment sensor telemetry.

Routes are waypoint polylines; distances are great-circle, because the
coordinates are geographic. Sensor values follow a mean-reverting walk with
bounded uniform noise, so a zero-noise profile converges geometrically to
its target — a property the tests pin down exactly.
"""

from __future__ import annotations

import hashlib
import math
import random
from dataclasses import dataclass
from enum import Enum

EARTH_RADIUS_KM = 6371.0

Coordinate = tuple[float, float]  # (latitude, longitude), degrees


def haversine_km(a: Coordinate, b: Coordinate) -> float:
    """Great-circle distance between two (lat, lng) points in kilometres."""
    lat1, lng1 = math.radians(a[0]), math.radians(a[1])
    lat2, lng2 = math.radians(b[0]), math.radians(b[1])
    dlat = lat2 - lat1
    dlng = lng2 - lng1
    h = math.sin(dlat / 2) ** 2 + math.cos(lat1) * math.cos(lat2) * math.sin(dlng / 2) ** 2
    return 2 * EARTH_RADIUS_KM * math.asin(math.sqrt(h))


class VehicleStatus(str, Enum):
    EN_ROUTE = "EnRoute"
    ARRIVED = "Arrived"


@dataclass(frozen=True)
class Route:
    """An ordered polyline with the physical travel speed along it."""

    waypoints: tuple[Coordinate, ...]
    speed_kmh: float

    def __post_init__(self) -> None:
        if len(self.waypoints) < 2:
            raise ValueError("route needs at least two waypoints")
        if self.speed_kmh <= 0:
            raise ValueError(f"speed must be positive, got {self.speed_kmh}")
        for prev, cur in zip(self.waypoints, self.waypoints[1:]):
            if prev == cur:
                raise ValueError(f"consecutive duplicate waypoint {cur}")

    @property
    def leg_lengths_km(self) -> tuple[float, ...]:
        return tuple(
            haversine_km(a, b) for a, b in zip(self.waypoints, self.waypoints[1:])
        )

    @property
    def length_km(self) -> float:
        return sum(self.leg_lengths_km)

    def duration_s(self) -> float:
        return self.length_km / self.speed_kmh * 3600.0


def _interpolate(a: Coordinate, b: Coordinate, t: float) -> Coordinate:
    return (a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t)


def vehicle_position(route: Route, elapsed_s: float) -> tuple[Coordinate, float]:
    """Where a vehicle is after ``elapsed_s`` seconds, and its progress fraction.

    Distance covered is speed × elapsed capped at the route length, so
    progress is monotone in elapsed time and clamps at exactly 1.0.
    """
    if elapsed_s < 0:
        raise ValueError(f"elapsed must be >= 0, got {elapsed_s}")
    total = route.length_km
    distance = min(route.speed_kmh * (elapsed_s / 3600.0), total)
    progress = distance / total
    if progress >= 1.0:
        return route.waypoints[-1], 1.0

    remaining = distance
    for (a, b), leg in zip(zip(route.waypoints, route.waypoints[1:]), route.leg_lengths_km):
        if remaining <= leg:
            return _interpolate(a, b, remaining / leg), progress
        remaining -= leg
    return route.waypoints[-1], 1.0


@dataclass(frozen=True)
class SensorProfile:
    """Generator and safety parameters for one ambient quantity."""

    kind: str  # temperature | humidity | illumination
    unit: str
    target: float  # reversion mean
    reversion: float  # fraction of the gap closed per sample, in [0,1]
    noise: float  # half-width of the uniform disturbance, >= 0
    safe_range: tuple[float, float]
    sample_period_s: float = 5.0
    initial: float | None = None  # first value; defaults to target

    def __post_init__(self) -> None:
        lo, hi = self.safe_range
        if lo >= hi:
            raise ValueError(f"{self.kind}: safe range [{lo}, {hi}] is empty")
        if not (0.0 <= self.reversion <= 1.0):
            raise ValueError(f"{self.kind}: reversion must be in [0,1]")
        if self.noise < 0:
            raise ValueError(f"{self.kind}: noise must be >= 0")
        if self.sample_period_s <= 0:
            raise ValueError(f"{self.kind}: sample period must be positive")

    @property
    def start_value(self) -> float:
        return self.target if self.initial is None else self.initial


def next_sensor_reading(profile: SensorProfile, prev: float, rng: random.Random) -> float:
    """One step of the mean-reverting walk: prev + θ(μ − prev) + σu, u ~ U[−1, 1].

    The rng is consumed even when σ = 0 so the draw schedule does not
    depend on profile parameters.
    """
    u = rng.uniform(-1.0, 1.0)
    return prev + profile.reversion * (profile.target - prev) + profile.noise * u


@dataclass(frozen=True)
class AmbientViolation:
    """A reading outside the closed safe interval."""

    kind: str
    value: float
    direction: str  # "low" | "high"
    excess: float  # distance past the violated bound, > 0

    def to_payload(self) -> dict:
        return {
            "kind": self.kind,
            "value": self.value,
            "direction": self.direction,
            "excess": self.excess,
        }


def detect_violation(kind: str, value: float, safe_range: tuple[float, float]) -> AmbientViolation | None:
    """None while lo <= value <= hi; the bounds themselves are safe."""
    lo, hi = safe_range
    if value < lo:
        return AmbientViolation(kind, value, "low", lo - value)
    if value > hi:
        return AmbientViolation(kind, value, "high", value - hi)
    return None


def sensor_series(
    profile: SensorProfile, rng: random.Random, count: int
) -> list[float]:
    """The first ``count`` readings of a fresh sensor (test and replay helper)."""
    values: list[float] = []
    prev = profile.start_value
    for _ in range(count):
        prev = next_sensor_reading(profile, prev, rng)
        values.append(prev)
    return values


def named_rng(seed: int, name: str) -> random.Random:
    """A generator for one named consumer, derived from the scenario seed.

    Independent streams per consumer mean adding a shipment or sensor never
    shifts the draws of any other.
    """
    digest = hashlib.sha256(f"{seed}:{name}".encode("utf-8")).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))
