"""Seeded scenario generation and file persistence.

Randomness comes from numpy's PCG64 seeded through a SeedSequence that is
split into one child stream per generation stage (meeting points, riders,
drivers), so changing the demand never perturbs the geography.
"""
from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass

import numpy as np

from .model import (
    Driver,
    MeetingPoint,
    Point,
    RailLine,
    Rider,
    ScenarioParams,
    default_rail,
)

FORMAT_NAME = "feedersim-scenario"
FORMAT_VERSION = 1


class ScenarioFormatError(ValueError):
    """Raised when a scenario file cannot be parsed or validated."""


@dataclass(frozen=True)
class Scenario:
    params: ScenarioParams
    meeting_points: tuple[MeetingPoint, ...]
    rail: RailLine
    riders: tuple[Rider, ...]
    drivers: tuple[Driver, ...]

    @property
    def stations(self) -> tuple[MeetingPoint, ...]:
        return tuple(mp for mp in self.meeting_points if mp.is_station)

    @property
    def non_station_points(self) -> tuple[MeetingPoint, ...]:
        return tuple(mp for mp in self.meeting_points if not mp.is_station)


def _uniform_points(rng: np.random.Generator, n: int, params: ScenarioParams):
    xs = rng.uniform(0.0, params.area_width_km, n)
    ys = rng.uniform(0.0, params.area_height_km, n)
    return xs, ys


def generate_meeting_points(
    params: ScenarioParams, rng: np.random.Generator
) -> tuple[RailLine, tuple[MeetingPoint, ...]]:
    """Stations, a Poisson field of uniform points, and clusters near stations."""
    rail, stations = default_rail(params)
    points: list[MeetingPoint] = list(stations)
    next_id = len(stations)

    n_uniform = rng.poisson(params.meeting_point_density_per_km2 * params.area_km2)
    xs, ys = _uniform_points(rng, n_uniform, params)
    for x, y in zip(xs, ys):
        points.append(MeetingPoint(next_id, Point(float(x), float(y))))
        next_id += 1

    for st in stations:
        k = rng.integers(params.station_cluster_min, params.station_cluster_max + 1)
        r = params.station_cluster_radius_km * np.sqrt(rng.uniform(0.0, 1.0, k))
        theta = rng.uniform(0.0, 2.0 * np.pi, k)
        for rr, th in zip(r, theta):
            x = min(max(st.location.x_km + rr * np.cos(th), 0.0), params.area_width_km)
            y = min(max(st.location.y_km + rr * np.sin(th), 0.0), params.area_height_km)
            points.append(MeetingPoint(next_id, Point(float(x), float(y))))
            next_id += 1

    return rail, tuple(points)


def generate_users(
    params: ScenarioParams,
    meeting_points: tuple[MeetingPoint, ...],
    rng: np.random.Generator,
) -> tuple[tuple[Rider, ...], tuple[Driver, ...]]:
    """Poisson numbers of riders and drivers over the generation window."""
    rider_rng, driver_rng = rng.spawn(2)
    hours = params.generation_window_min / 60.0

    n_riders = rider_rng.poisson(params.rider_density_per_km2_h * params.area_km2 * hours)
    ox, oy = _uniform_points(rider_rng, n_riders, params)
    dx, dy = _uniform_points(rider_rng, n_riders, params)
    dep = rider_rng.uniform(0.0, params.generation_window_min, n_riders)
    order = np.argsort(dep, kind="stable")
    riders = tuple(
        Rider(i, Point(float(ox[k]), float(oy[k])), Point(float(dx[k]), float(dy[k])),
              float(dep[k]))
        for i, k in enumerate(order)
    )

    pool = [mp.id for mp in meeting_points if not mp.is_station]
    n_drivers = driver_rng.poisson(params.driver_density_per_km2_h * params.area_km2 * hours)
    if n_drivers > 0 and len(pool) < 2:
        raise ValueError("need at least two non-station meeting points for drivers")
    ddep = driver_rng.uniform(0.0, params.generation_window_min, n_drivers)
    ods = [driver_rng.choice(len(pool), size=2, replace=False) for _ in range(n_drivers)]
    dorder = np.argsort(ddep, kind="stable")
    drivers = tuple(
        Driver(i, pool[ods[k][0]], pool[ods[k][1]], float(ddep[k]), params.max_seats)
        for i, k in enumerate(dorder)
    )
    return riders, drivers


def generate_scenario(params: ScenarioParams) -> Scenario:
    ss = np.random.SeedSequence(params.rng_seed)
    mp_seed, user_seed = ss.spawn(2)
    rail, points = generate_meeting_points(params, np.random.Generator(np.random.PCG64(mp_seed)))
    riders, drivers = generate_users(params, points, np.random.Generator(np.random.PCG64(user_seed)))
    return Scenario(params, points, rail, riders, drivers)


# ---------------------------------------------------------------------------
# Persistence
# ---------------------------------------------------------------------------


def save_scenario(scenario: Scenario, path) -> None:
    doc = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "params": dataclasses.asdict(scenario.params),
        "rail": {
            "station_ids": list(scenario.rail.station_ids),
            "cum_km": list(scenario.rail.cum_km),
            "headway_min": scenario.rail.headway_min,
            "train_speed_kmh": scenario.rail.train_speed_kmh,
        },
        "meeting_points": [
            [mp.id, mp.location.x_km, mp.location.y_km, int(mp.is_station)]
            for mp in scenario.meeting_points
        ],
        "riders": [
            [r.id, r.origin.x_km, r.origin.y_km, r.destination.x_km,
             r.destination.y_km, r.departure_min]
            for r in scenario.riders
        ],
        "drivers": [
            [d.id, d.origin_mp, d.destination_mp, d.departure_min, d.seats]
            for d in scenario.drivers
        ],
    }
    with open(path, "w") as f:
        json.dump(doc, f, indent=1)
        f.write("\n")


def _require(doc: dict, key: str):
    if key not in doc:
        raise ScenarioFormatError(f"scenario file is missing field '{key}'")
    return doc[key]


def load_scenario(path) -> Scenario:
    try:
        with open(path) as f:
            doc = json.load(f)
    except json.JSONDecodeError as e:
        raise ScenarioFormatError(
            f"malformed scenario file {path}: line {e.lineno} column {e.colno}: {e.msg}"
        ) from e
    if not isinstance(doc, dict) or doc.get("format") != FORMAT_NAME:
        raise ScenarioFormatError(f"{path} is not a {FORMAT_NAME} file")
    if doc.get("version") != FORMAT_VERSION:
        raise ScenarioFormatError(
            f"unsupported scenario format version {doc.get('version')!r}, "
            f"expected {FORMAT_VERSION}"
        )
    try:
        params = ScenarioParams(**_require(doc, "params"))
        rail_doc = _require(doc, "rail")
        rail = RailLine(
            station_ids=tuple(rail_doc["station_ids"]),
            cum_km=tuple(rail_doc["cum_km"]),
            headway_min=rail_doc["headway_min"],
            train_speed_kmh=rail_doc["train_speed_kmh"],
        )
        points = tuple(
            MeetingPoint(int(i), Point(float(x), float(y)), bool(s))
            for i, x, y, s in _require(doc, "meeting_points")
        )
        riders = tuple(
            Rider(int(i), Point(float(ox), float(oy)), Point(float(dx), float(dy)),
                  float(t))
            for i, ox, oy, dx, dy, t in _require(doc, "riders")
        )
        drivers = tuple(
            Driver(int(i), int(o), int(d), float(t), int(s))
            for i, o, d, t, s in _require(doc, "drivers")
        )
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, ScenarioFormatError):
            raise
        raise ScenarioFormatError(f"invalid scenario file {path}: {e}") from e
    station_ids = {mp.id for mp in points if mp.is_station}
    for d in drivers:
        if d.origin_mp in station_ids or d.destination_mp in station_ids:
            raise ScenarioFormatError(
                f"driver {d.id} uses a station as origin or destination"
            )
    return Scenario(params, points, rail, riders, drivers)
