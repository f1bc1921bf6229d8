import numpy as np
import pytest

from feedersim.model import (
    Driver,
    MeetingPoint,
    Point,
    RailLine,
    Rider,
    ScenarioParams,
)
from feedersim.scenario import Scenario


def build_scenario(params, station_xs, extra_points, riders=(), drivers=()):
    """Hand-built scenario: stations on the mid-line at the given x positions,
    then extra (non-station) meeting points; rider/driver specs as tuples."""
    y = params.area_height_km / 2.0
    xs = sorted(station_xs)
    points = [MeetingPoint(i, Point(float(x), y), True) for i, x in enumerate(xs)]
    for x, py in extra_points:
        points.append(MeetingPoint(len(points), Point(float(x), float(py)), False))
    rail = RailLine(tuple(range(len(xs))), tuple(x - xs[0] for x in xs),
                    params.train_headway_min, params.train_speed_kmh)
    rider_objs = tuple(
        Rider(i, Point(*o), Point(*d), t) for i, (o, d, t) in enumerate(riders)
    )
    driver_objs = tuple(
        Driver(i, o, d, t, params.max_seats)
        for i, (o, d, t) in enumerate(drivers)
    )
    return Scenario(params, tuple(points), rail, rider_objs, driver_objs)


@pytest.fixture
def params():
    return ScenarioParams()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
