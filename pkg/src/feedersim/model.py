"""Core entities, geometry, and the rail timetable.

Distances are km, times are minutes, speeds km/h. Walk and car legs pay the
street-network circuity factor; train legs use along-line rail distance.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Literal, Sequence

# Tolerance for comparing times (minutes) and distances.
TIME_EPS = 1e-9

Mode = Literal["walk", "car"]


@dataclass(frozen=True)
class ScenarioParams:
    area_width_km: float = 15.0
    area_height_km: float = 8.0
    n_stations: int = 10
    walk_speed_kmh: float = 4.5
    car_speed_kmh: float = 38.0
    train_speed_kmh: float = 60.0
    rider_density_per_km2_h: float = 8.3
    driver_density_per_km2_h: float = 4.8
    meeting_point_density_per_km2: float = 3.55
    station_cluster_min: int = 4
    station_cluster_max: int = 5
    station_cluster_radius_km: float = 0.3
    max_seats: int = 4
    circuity: float = 1.2
    max_wait_min: float = 45.0
    max_walk_km: float = 2.5
    max_detour_ratio: float = 1.15
    generation_window_min: float = 180.0
    measurement_window_min: float = 60.0
    train_headway_min: float = 15.0
    rng_seed: int = 0

    def __post_init__(self) -> None:
        for name in ("walk_speed_kmh", "car_speed_kmh", "train_speed_kmh"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0")
        if self.circuity < 1.0:
            raise ValueError("circuity must be >= 1")
        if self.max_detour_ratio < 1.0:
            raise ValueError("max_detour_ratio must be >= 1")
        if self.measurement_window_min > self.generation_window_min:
            raise ValueError("measurement window cannot exceed generation window")
        if self.area_width_km <= 0 or self.area_height_km <= 0:
            raise ValueError("area dimensions must be > 0")
        if self.station_cluster_min > self.station_cluster_max:
            raise ValueError("station_cluster_min > station_cluster_max")

    @property
    def area_km2(self) -> float:
        return self.area_width_km * self.area_height_km

    @property
    def walk_min_per_euclid_km(self) -> float:
        """Minutes walked per Euclidean km, circuity included."""
        return 60.0 * self.circuity / self.walk_speed_kmh

    @property
    def car_min_per_euclid_km(self) -> float:
        return 60.0 * self.circuity / self.car_speed_kmh


@dataclass(frozen=True)
class Point:
    x_km: float
    y_km: float


@dataclass(frozen=True)
class MeetingPoint:
    id: int
    location: Point
    is_station: bool = False


@dataclass(frozen=True)
class Rider:
    id: int
    origin: Point
    destination: Point
    departure_min: float


@dataclass(frozen=True)
class Driver:
    id: int
    origin_mp: int
    destination_mp: int
    departure_min: float
    seats: int = 4


@dataclass(frozen=True)
class RailLine:
    """One bidirectional commuter line.

    ``cum_km`` is the along-line distance of each station from the first
    station; trains leave each terminus every ``headway_min`` starting at
    t = 0 with zero dwell.
    """

    station_ids: tuple[int, ...]
    cum_km: tuple[float, ...]
    headway_min: float
    train_speed_kmh: float

    def __post_init__(self) -> None:
        if len(self.station_ids) != len(self.cum_km):
            raise ValueError("station_ids and cum_km length mismatch")
        if any(b <= a for a, b in zip(self.cum_km, self.cum_km[1:])):
            raise ValueError("cumulative distances must be strictly increasing")
        if self.headway_min <= 0 or self.train_speed_kmh <= 0:
            raise ValueError("headway and train speed must be > 0")

    def index_of(self, station_id: int) -> int:
        return self.station_ids.index(station_id)


def euclid(p: Point, q: Point) -> float:
    return math.hypot(p.x_km - q.x_km, p.y_km - q.y_km)


def road_distance(params: ScenarioParams, p: Point, q: Point) -> float:
    """Street distance between two points: circuity times Euclidean."""
    return params.circuity * euclid(p, q)


def travel_time(params: ScenarioParams, mode: Mode, p: Point, q: Point) -> float:
    """Minutes to cover the street distance from p to q at the mode's speed."""
    speed = params.walk_speed_kmh if mode == "walk" else params.car_speed_kmh
    return road_distance(params, p, q) / speed * 60.0


def nearest(p: Point, candidates: Sequence[MeetingPoint]) -> int:
    """Id of the candidate closest to p (Euclidean); ties go to the lowest id."""
    if not candidates:
        raise ValueError("nearest() requires a non-empty candidate set")
    best_id = -1
    best_d = math.inf
    for mp in sorted(candidates, key=lambda m: m.id):
        d = euclid(p, mp.location)
        if d < best_d:
            best_d = d
            best_id = mp.id
    return best_id


def train_trip(
    rail: RailLine, from_station: int, to_station: int, ready_min: float
) -> tuple[float, float, float]:
    """Next train from one station to another once ready.

    Returns (board_min, arrive_min, wait_min) for the earliest scheduled
    departure in the correct direction at or after ready_min.
    """
    if from_station == to_station:
        raise ValueError("train_trip requires distinct stations")
    i = rail.index_of(from_station)
    j = rail.index_of(to_station)
    total = rail.cum_km[-1]
    # Offset of the boarding station from the relevant terminus.
    offset = rail.cum_km[i] if i < j else total - rail.cum_km[i]
    speed_km_min = rail.train_speed_kmh / 60.0
    offset_min = offset / speed_km_min
    k = math.ceil((ready_min - offset_min) / rail.headway_min - TIME_EPS)
    k = max(k, 0)
    board = k * rail.headway_min + offset_min
    ride_min = abs(rail.cum_km[j] - rail.cum_km[i]) / speed_km_min
    wait = max(0.0, board - ready_min)
    return board, board + ride_min, wait


def default_rail(params: ScenarioParams) -> tuple[RailLine, list[MeetingPoint]]:
    """Stations evenly spaced on the horizontal mid-line, ids 0..n-1 by x."""
    n = params.n_stations
    spacing = 1.5
    x0 = (params.area_width_km - spacing * (n - 1)) / 2.0
    y = params.area_height_km / 2.0
    stations = [
        MeetingPoint(id=k, location=Point(x0 + spacing * k, y), is_station=True)
        for k in range(n)
    ]
    rail = RailLine(
        station_ids=tuple(range(n)),
        cum_km=tuple(spacing * k for k in range(n)),
        headway_min=params.train_headway_min,
        train_speed_kmh=params.train_speed_kmh,
    )
    return rail, stations
