import math

import pytest
from hypothesis import given, strategies as st

from feedersim.model import (
    MeetingPoint,
    Point,
    RailLine,
    ScenarioParams,
    default_rail,
    nearest,
    road_distance,
    train_trip,
    travel_time,
)

coords = st.floats(0.0, 15.0, allow_nan=False)
points = st.builds(Point, coords, coords)


class TestParams:
    def test_defaults_match_scenario_table(self, params):
        assert params.area_km2 == 120.0
        assert params.max_seats == 4
        assert params.circuity == 1.2
        assert params.max_detour_ratio == 1.15

    @pytest.mark.parametrize("bad", [
        dict(walk_speed_kmh=0.0),
        dict(circuity=0.9),
        dict(max_detour_ratio=0.5),
        dict(measurement_window_min=200.0),
    ])
    def test_invalid_params_rejected(self, bad):
        with pytest.raises(ValueError):
            ScenarioParams(**bad)


class TestRoadDistance:
    def test_three_four_five(self, params):
        assert road_distance(params, Point(0, 0), Point(3, 4)) == pytest.approx(6.0)

    def test_identity(self, params):
        p = Point(2.5, 3.5)
        assert road_distance(params, p, p) == 0.0

    @given(p=points, q=points)
    def test_symmetry(self, p, q):
        params = ScenarioParams()
        assert road_distance(params, p, q) == road_distance(params, q, p)

    @given(p=points, q=points, r=points)
    def test_triangle_inequality(self, p, q, r):
        params = ScenarioParams()
        assert road_distance(params, p, q) <= (
            road_distance(params, p, r) + road_distance(params, r, q) + 1e-9
        )


class TestTravelTime:
    def test_walk(self, params):
        # 1.5 km euclid -> 1.8 km walked at 4.5 km/h
        assert travel_time(params, "walk", Point(0, 0), Point(1.5, 0)) == pytest.approx(24.0)

    def test_car(self, params):
        assert travel_time(params, "car", Point(0, 0), Point(5, 0)) == pytest.approx(
            6.0 / 38.0 * 60.0)

    def test_zero_distance(self, params):
        p = Point(1, 1)
        assert travel_time(params, "walk", p, p) == 0.0
        assert travel_time(params, "car", p, p) == 0.0


class TestNearest:
    def setup_method(self):
        self.mps = [
            MeetingPoint(0, Point(0, 0)),
            MeetingPoint(1, Point(4, 0)),
            MeetingPoint(2, Point(2, 3)),
        ]

    def test_coincident(self):
        assert nearest(Point(4, 0), self.mps) == 1

    def test_tie_lowest_id(self):
        # (2, 0) is equidistant from ids 0 and 1
        assert nearest(Point(2, 0), self.mps) == 0

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            nearest(Point(0, 0), [])

    def test_matches_linear_scan(self, rng):
        mps = [MeetingPoint(i, Point(x, y))
               for i, (x, y) in enumerate(rng.uniform(0, 10, (40, 2)))]
        for x, y in rng.uniform(0, 10, (100, 2)):
            p = Point(x, y)
            want = min(mps, key=lambda m: (math.hypot(m.location.x_km - x,
                                                      m.location.y_km - y), m.id)).id
            assert nearest(p, mps) == want

    @given(st.randoms())
    def test_permutation_invariant(self, rand):
        mps = list(self.mps)
        rand.shuffle(mps)
        assert nearest(Point(1.9, 0.2), mps) == nearest(Point(1.9, 0.2), self.mps)


class TestTrainTrip:
    def setup_method(self):
        self.rail = RailLine(tuple(range(10)), tuple(1.5 * k for k in range(10)),
                             15.0, 60.0)

    def test_adjacent_ride_time(self):
        board, arrive, _ = train_trip(self.rail, 0, 1, 0.0)
        assert arrive - board == pytest.approx(1.5)

    def test_hand_timetable_trace(self):
        # station 3 km along the line, ready at 20: departures there are 3, 18, 33...
        board, _, wait = train_trip(self.rail, 2, 5, 20.0)
        assert board == pytest.approx(33.0)
        assert wait == pytest.approx(13.0)

    def test_ready_exactly_at_departure(self):
        board, _, wait = train_trip(self.rail, 2, 5, 18.0)
        assert board == pytest.approx(18.0)
        assert wait == pytest.approx(0.0, abs=1e-9)

    def test_reverse_direction_offsets(self):
        # going down-line, the terminus is the last station
        board, arrive, wait = train_trip(self.rail, 9, 0, 0.0)
        assert board == 0.0
        assert arrive == pytest.approx(13.5)

    @given(st.integers(0, 9), st.integers(0, 9), st.floats(0, 500, allow_nan=False))
    def test_wait_below_headway(self, i, j, ready):
        if i == j:
            return
        _, _, wait = train_trip(self.rail, i, j, ready)
        assert 0.0 <= wait < 15.0 + 1e-9

    def test_same_station_rejected(self):
        with pytest.raises(ValueError):
            train_trip(self.rail, 3, 3, 0.0)


class TestDefaultRail:
    def test_station_placement(self, params):
        rail, stations = default_rail(params)
        xs = [s.location.x_km for s in stations]
        assert xs == pytest.approx([0.75 + 1.5 * k for k in range(10)])
        assert all(s.location.y_km == 4.0 for s in stations)
        assert rail.cum_km == tuple(1.5 * k for k in range(10))
