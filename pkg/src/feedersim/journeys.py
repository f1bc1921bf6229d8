"""Driver journeys: optional station detours, seat ledger, station indexes.

A driver's planned journey (including every detour that fits the distance
cap) fixes her schedule for all matching and all quoted arrivals; detours
nobody uses are pruned only from the reported driven distance.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .model import Driver, MeetingPoint, Point, ScenarioParams, euclid, nearest
from .scenario import Scenario

MAX_STOPS = 4

FM = "fm"
LM = "lm"

SYSTEMS = ("no_carpooling", "current", "integrated")


@dataclass(frozen=True)
class SeatReservation:
    rider_id: int
    board_idx: int
    alight_idx: int

    def __post_init__(self) -> None:
        if self.board_idx >= self.alight_idx:
            raise ValueError("board index must precede alight index")


@dataclass
class Journey:
    driver_id: int
    stop_mps: list[int]
    stop_times: list[float]
    planned_detours: frozenset[str]
    detour_stop_idx: dict[str, int]
    direct_km: float
    planned_km: float
    seg_occupancy: np.ndarray  # view into the board's occupancy matrix
    reservations: list[SeatReservation] = field(default_factory=list)

    @property
    def n_segments(self) -> int:
        return len(self.stop_mps) - 1

    def max_occupancy(self) -> int:
        return int(self.seg_occupancy[: self.n_segments].max(initial=0))


def reserve(journey: Journey, board_idx: int, alight_idx: int, rider_id: int,
            max_seats: int) -> bool:
    """Reserve a seat over stops [board_idx, alight_idx); False if any segment is full."""
    if not (0 <= board_idx < alight_idx <= journey.n_segments):
        raise ValueError("reservation indices out of range")
    span = journey.seg_occupancy[board_idx:alight_idx]
    if (span >= max_seats).any():
        return False
    span += 1
    journey.reservations.append(SeatReservation(rider_id, board_idx, alight_idx))
    return True


def release(journey: Journey, reservation: SeatReservation) -> None:
    journey.seg_occupancy[reservation.board_idx:reservation.alight_idx] -= 1
    journey.reservations.remove(reservation)


def _path_km(params: ScenarioParams, pts: list[Point]) -> float:
    return params.circuity * sum(euclid(a, b) for a, b in zip(pts, pts[1:]))


def candidate_journeys(
    driver: Driver,
    system: str,
    params: ScenarioParams,
    mps: dict[int, MeetingPoint],
    stations: list[MeetingPoint],
) -> list[tuple[frozenset[str], list[int], float]]:
    """Candidate stop sequences with their road distance, direct first.

    Integrated drivers may detour through the stations nearest their origin
    and destination; elsewhere the only candidate is the direct trip.
    """
    org = mps[driver.origin_mp]
    dst = mps[driver.destination_mp]
    direct = [driver.origin_mp, driver.destination_mp]
    out = [(frozenset(), direct,
            _path_km(params, [org.location, dst.location]))]
    if system != "integrated":
        return out

    s_org = nearest(org.location, stations)
    s_dst = nearest(dst.location, stations)
    variants = [(frozenset({FM}), [s_org]), (frozenset({LM}), [s_dst]),
                (frozenset({FM, LM}), [s_org, s_dst])]
    if s_org == s_dst:
        # The two single-detour routes coincide; keep one, labelled FM.
        variants = [(frozenset({FM}), [s_org]), (frozenset({FM, LM}), [s_org])]
    for detours, vias in variants:
        stops = [driver.origin_mp]
        for v in vias:
            if v != stops[-1]:
                stops.append(v)
        if dst.id != stops[-1]:
            stops.append(dst.id)
        km = _path_km(params, [mps[s].location for s in stops])
        out.append((detours, stops, km))
    return out


def planned_journey(
    driver: Driver,
    system: str,
    params: ScenarioParams,
    mps: dict[int, MeetingPoint],
    stations: list[MeetingPoint],
    seg_occupancy: np.ndarray | None = None,
) -> Journey:
    """Pick the candidate with the most detours under the distance cap.

    Preference: both detours, then the cheaper single detour (FM on ties),
    then direct. The cap is closed: exactly 15 percent extra is accepted.
    """
    cands = candidate_journeys(driver, system, params, mps, stations)
    direct_km = cands[0][2]
    cap = params.max_detour_ratio * direct_km + 1e-9 * max(direct_km, 1.0)
    feas = [c for c in cands if c[2] <= cap]
    feas.sort(key=lambda c: (-len(c[0]), c[2], LM in c[0] and len(c[0]) == 1))
    detours, stops, km = feas[0]

    times = [driver.departure_min]
    for a, b in zip(stops, stops[1:]):
        times.append(times[-1] + params.circuity * euclid(mps[a].location, mps[b].location)
                     / params.car_speed_kmh * 60.0)
    detour_stop_idx = {}
    if FM in detours:
        detour_stop_idx[FM] = 1
    if LM in detours:
        detour_stop_idx[LM] = len(stops) - 2
    if seg_occupancy is None:
        seg_occupancy = np.zeros(MAX_STOPS - 1, dtype=np.int32)
    return Journey(driver.id, stops, times, detours, detour_stop_idx,
                   direct_km, km, seg_occupancy)


def realized_detours(journey: Journey) -> str:
    """Which planned detours some rider actually boards or alights at."""
    touched = set()
    for res in journey.reservations:
        touched.add(res.board_idx)
        touched.add(res.alight_idx)
    got = {d for d, idx in journey.detour_stop_idx.items() if idx in touched}
    if got == {FM, LM}:
        return "both"
    if got == {FM}:
        return FM
    if got == {LM}:
        return LM
    return "none"


def realized_distance_km(journey: Journey, params: ScenarioParams,
                         mps: dict[int, MeetingPoint]) -> float:
    """Driven distance with unused detour stops skipped."""
    touched = set()
    for res in journey.reservations:
        touched.add(res.board_idx)
        touched.add(res.alight_idx)
    keep = [i for i in range(len(journey.stop_mps))
            if i in (0, len(journey.stop_mps) - 1)
            or i not in journey.detour_stop_idx.values()
            or i in touched]
    pts = [mps[journey.stop_mps[i]].location for i in keep]
    return _path_km(params, pts)


# ---------------------------------------------------------------------------
# JourneyBoard: all journeys of one run plus the indexes the planner queries
# ---------------------------------------------------------------------------


@dataclass
class Triples:
    """Flattened (driver, board stop, alight stop) candidates for one station."""

    n: int
    driver: np.ndarray
    board_idx: np.ndarray
    alight_idx: np.ndarray
    board_x: np.ndarray
    board_y: np.ndarray
    alight_x: np.ndarray
    alight_y: np.ndarray
    depart_board: np.ndarray
    arrive_alight: np.ndarray
    seg_lo: np.ndarray
    seg_hi: np.ndarray


def _make_triples(rows: list[tuple]) -> Triples:
    if not rows:
        z = np.zeros(0)
        zi = np.zeros(0, dtype=np.int64)
        return Triples(0, zi, zi, zi, z, z, z, z, z, z, zi, zi)
    cols = list(zip(*rows))
    return Triples(
        n=len(rows),
        driver=np.asarray(cols[0], dtype=np.int64),
        board_idx=np.asarray(cols[1], dtype=np.int64),
        alight_idx=np.asarray(cols[2], dtype=np.int64),
        board_x=np.asarray(cols[3], dtype=np.float64),
        board_y=np.asarray(cols[4], dtype=np.float64),
        alight_x=np.asarray(cols[5], dtype=np.float64),
        alight_y=np.asarray(cols[6], dtype=np.float64),
        depart_board=np.asarray(cols[7], dtype=np.float64),
        arrive_alight=np.asarray(cols[8], dtype=np.float64),
        seg_lo=np.asarray(cols[1], dtype=np.int64),
        seg_hi=np.asarray(cols[2], dtype=np.int64),
    )


class JourneyBoard:
    """All planned journeys of one system run plus the seat ledger."""

    def __init__(self, scenario: Scenario, system: str):
        if system not in SYSTEMS:
            raise ValueError(f"unknown system {system!r}")
        self.system = system
        self.params = scenario.params
        self.mps = {mp.id: mp for mp in scenario.meeting_points}
        stations = list(scenario.stations)
        n = len(scenario.drivers)
        self.occupancy = np.zeros((max(n, 1), MAX_STOPS - 1), dtype=np.int32)
        self.journeys: list[Journey] = [
            planned_journey(d, system, scenario.params, self.mps, stations,
                            self.occupancy[d.id])
            for d in scenario.drivers
        ]
        self.by_od: dict[tuple[int, int], list[int]] = {}
        for d in scenario.drivers:
            self.by_od.setdefault((d.origin_mp, d.destination_mp), []).append(d.id)

        fm_rows: dict[int, list] = {}
        lm_rows: dict[int, list] = {}
        for j in self.journeys:
            for idx, mp_id in enumerate(j.stop_mps):
                if not self.mps[mp_id].is_station:
                    continue
                # First mile: a rider boards before this station and alights here.
                for b in range(idx):
                    p = self.mps[j.stop_mps[b]].location
                    fm_rows.setdefault(mp_id, []).append(
                        (j.driver_id, b, idx, p.x_km, p.y_km,
                         math.nan, math.nan, j.stop_times[b], j.stop_times[idx]))
                # Last mile: a rider boards here and alights later.
                for a in range(idx + 1, len(j.stop_mps)):
                    q = self.mps[j.stop_mps[a]].location
                    lm_rows.setdefault(mp_id, []).append(
                        (j.driver_id, idx, a, math.nan, math.nan,
                         q.x_km, q.y_km, j.stop_times[idx], j.stop_times[a]))
        self.fm_triples = {s: _make_triples(rows) for s, rows in fm_rows.items()}
        self.lm_triples = {s: _make_triples(rows) for s, rows in lm_rows.items()}
        self._empty = _make_triples([])

    def journey(self, driver_id: int) -> Journey:
        return self.journeys[driver_id]

    def span_free(self, driver_id: int, board_idx: int, alight_idx: int) -> bool:
        span = self.occupancy[driver_id, board_idx:alight_idx]
        return bool((span < self.params.max_seats).all())

    def fm_query(self, station_id: int, origin: Point, t_r: float):
        """Best (driver, board, alight, arrival) pickup towards a station, or None."""
        t = self.fm_triples.get(station_id, self._empty)
        k = kernels.fm_best(origin.x_km, origin.y_km, t_r,
                            self.params.walk_min_per_euclid_km,
                            t, self.occupancy, self.params.max_seats)
        if k < 0:
            return None
        return (int(t.driver[k]), int(t.board_idx[k]), int(t.alight_idx[k]),
                float(t.arrive_alight[k]))

    def lm_query(self, station_id: int, destination: Point, ready_min: float):
        """Best (driver, board, alight, arrival at destination) dropoff, or None."""
        t = self.lm_triples.get(station_id, self._empty)
        k, arrival = kernels.lm_best(destination.x_km, destination.y_km, ready_min,
                                     self.params.walk_min_per_euclid_km,
                                     t, self.occupancy, self.params.max_seats)
        if k < 0:
            return None
        return (int(t.driver[k]), int(t.board_idx[k]), int(t.alight_idx[k]), arrival)

    def reserve(self, driver_id: int, board_idx: int, alight_idx: int,
                rider_id: int) -> bool:
        return reserve(self.journeys[driver_id], board_idx, alight_idx, rider_id,
                       self.params.max_seats)

    def release(self, driver_id: int, rider_id: int) -> None:
        j = self.journeys[driver_id]
        for res in [r for r in j.reservations if r.rider_id == rider_id]:
            release(j, res)
