"""Rider transportation options, feasibility, and earliest-arrival selection.

Waiting accounting: a rider times her departure from home so she reaches the
first vehicle right as it leaves, but that slack is still counted as waiting
time, and journey time runs from her nominal departure.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .journeys import JourneyBoard
from .model import (
    TIME_EPS,
    Point,
    RailLine,
    Rider,
    ScenarioParams,
    euclid,
    nearest,
    road_distance,
    train_trip,
    travel_time,
)


class Kind(Enum):
    WALK_ONLY = "walk_only"
    TRANSIT_ONLY = "transit_only"
    CARPOOL_ONLY = "carpool_only"
    CARPOOL_FM_TRANSIT = "carpool_fm_transit"
    TRANSIT_CARPOOL_LM = "transit_carpool_lm"
    CARPOOL_FM_TRANSIT_CARPOOL_LM = "carpool_fm_transit_carpool_lm"


KIND_ORDER = {k: i for i, k in enumerate(Kind)}


@dataclass(frozen=True)
class Leg:
    mode: str  # walk | carpool | train
    frm: Point
    to: Point
    depart_min: float
    arrive_min: float
    wait_before_min: float = 0.0
    walk_km: float = 0.0
    driver_id: int | None = None
    board_idx: int | None = None
    alight_idx: int | None = None


@dataclass(frozen=True)
class Itinerary:
    rider_id: int
    kind: Kind
    legs: tuple[Leg, ...]
    total_wait_min: float
    total_walk_km: float
    arrival_min: float
    journey_min: float


@dataclass(frozen=True)
class Outcome:
    rider_id: int
    itinerary: Itinerary | None

    @property
    def served(self) -> bool:
        return self.itinerary is not None


@dataclass(frozen=True)
class RiderContext:
    """Per-rider nearest points, shared by every option builder."""

    m_org: int
    m_dst: int
    s_org: int
    s_dst: int


def make_context(rider: Rider, board: JourneyBoard) -> RiderContext:
    mps = list(board.mps.values())
    stations = [mp for mp in mps if mp.is_station]
    return RiderContext(
        m_org=nearest(rider.origin, mps),
        m_dst=nearest(rider.destination, mps),
        s_org=nearest(rider.origin, stations),
        s_dst=nearest(rider.destination, stations),
    )


def _finish(rider: Rider, kind: Kind, legs: list[Leg]) -> Itinerary:
    total_wait = sum(l.wait_before_min for l in legs if l.mode != "walk")
    total_walk = sum(l.walk_km for l in legs)
    arrival = legs[-1].arrive_min
    return Itinerary(rider.id, kind, tuple(legs), total_wait, total_walk,
                     arrival, arrival - rider.departure_min)


def _walk_leg(params: ScenarioParams, frm: Point, to: Point, depart: float) -> Leg:
    t = travel_time(params, "walk", frm, to)
    return Leg("walk", frm, to, depart, depart + t,
               walk_km=road_distance(params, frm, to))


def option_walk(params: ScenarioParams, rider: Rider) -> Itinerary:
    return _finish(rider, Kind.WALK_ONLY,
                   [_walk_leg(params, rider.origin, rider.destination,
                              rider.departure_min)])


def option_transit(params: ScenarioParams, rail: RailLine, rider: Rider,
                   ctx: RiderContext, board: JourneyBoard) -> Itinerary | None:
    if ctx.s_org == ctx.s_dst:
        return None
    s_org_pt = board.mps[ctx.s_org].location
    s_dst_pt = board.mps[ctx.s_dst].location
    w1 = _walk_leg(params, rider.origin, s_org_pt, rider.departure_min)
    b, a, wait = train_trip(rail, ctx.s_org, ctx.s_dst, w1.arrive_min)
    train = Leg("train", s_org_pt, s_dst_pt, b, a, wait_before_min=wait)
    w2 = _walk_leg(params, s_dst_pt, rider.destination, a)
    return _finish(rider, Kind.TRANSIT_ONLY, [w1, train, w2])


def option_carpool_only(params: ScenarioParams, rider: Rider, ctx: RiderContext,
                        board: JourneyBoard) -> Itinerary | None:
    if ctx.m_org == ctx.m_dst:
        return None
    candidates = board.by_od.get((ctx.m_org, ctx.m_dst), ())
    m_org_pt = board.mps[ctx.m_org].location
    m_dst_pt = board.mps[ctx.m_dst].location
    walk_t = travel_time(params, "walk", rider.origin, m_org_pt)
    best = None
    for d in candidates:  # candidates are sorted by driver id
        j = board.journey(d)
        depart = j.stop_times[0]
        if depart + TIME_EPS < rider.departure_min + walk_t:
            continue
        if not board.span_free(d, 0, j.n_segments):
            continue
        arrive_mp = j.stop_times[-1]
        arrival = arrive_mp + travel_time(params, "walk", m_dst_pt, rider.destination)
        if best is None or arrival < best[0] - TIME_EPS:
            best = (arrival, d, depart, arrive_mp, j.n_segments)
    if best is None:
        return None
    _, d, depart, arrive_mp, n_seg = best
    w1 = _walk_leg(params, rider.origin, m_org_pt, rider.departure_min)
    car = Leg("carpool", m_org_pt, m_dst_pt, depart, arrive_mp,
              wait_before_min=depart - w1.arrive_min, driver_id=d,
              board_idx=0, alight_idx=n_seg)
    w2 = _walk_leg(params, m_dst_pt, rider.destination, arrive_mp)
    return _finish(rider, Kind.CARPOOL_ONLY, [w1, car, w2])


def option_carpool_transit(params: ScenarioParams, rail: RailLine, rider: Rider,
                           ctx: RiderContext, board: JourneyBoard) -> Itinerary | None:
    """Carpool feeder to transit: fastest way to the origin station, the next
    train, then the fastest way from the destination station. Walking wins
    ties on both sub-legs; returns None if neither sub-leg carpools."""
    if board.system != "integrated" or ctx.s_org == ctx.s_dst:
        return None
    s_org_pt = board.mps[ctx.s_org].location
    s_dst_pt = board.mps[ctx.s_dst].location

    legs: list[Leg] = []
    walk_arrival = rider.departure_min + travel_time(params, "walk", rider.origin,
                                                     s_org_pt)
    fm = board.fm_query(ctx.s_org, rider.origin, rider.departure_min)
    fm_carpool = fm is not None and fm[3] < walk_arrival - TIME_EPS
    if fm_carpool:
        d, bi, ai, station_arrival = fm
        board_pt = board.mps[board.journey(d).stop_mps[bi]].location
        w1 = _walk_leg(params, rider.origin, board_pt, rider.departure_min)
        depart = board.journey(d).stop_times[bi]
        legs += [w1, Leg("carpool", board_pt, s_org_pt, depart, station_arrival,
                         wait_before_min=depart - w1.arrive_min, driver_id=d,
                         board_idx=bi, alight_idx=ai)]
    else:
        legs.append(_walk_leg(params, rider.origin, s_org_pt, rider.departure_min))
        station_arrival = walk_arrival

    b, a, wait = train_trip(rail, ctx.s_org, ctx.s_dst, station_arrival)
    legs.append(Leg("train", s_org_pt, s_dst_pt, b, a, wait_before_min=wait))

    lm_walk_arrival = a + travel_time(params, "walk", s_dst_pt, rider.destination)
    lm = board.lm_query(ctx.s_dst, rider.destination, a)
    lm_carpool = lm is not None and lm[3] < lm_walk_arrival - TIME_EPS
    if lm_carpool:
        d, bi, ai, _ = lm
        j = board.journey(d)
        alight_pt = board.mps[j.stop_mps[ai]].location
        depart = j.stop_times[bi]
        legs.append(Leg("carpool", s_dst_pt, alight_pt, depart, j.stop_times[ai],
                        wait_before_min=depart - a, driver_id=d,
                        board_idx=bi, alight_idx=ai))
        legs.append(_walk_leg(params, alight_pt, rider.destination, j.stop_times[ai]))
    else:
        legs.append(_walk_leg(params, s_dst_pt, rider.destination, a))

    if not fm_carpool and not lm_carpool:
        return None  # degenerates to the plain transit option
    kind = (Kind.CARPOOL_FM_TRANSIT_CARPOOL_LM if fm_carpool and lm_carpool
            else Kind.CARPOOL_FM_TRANSIT if fm_carpool
            else Kind.TRANSIT_CARPOOL_LM)
    return _finish(rider, kind, legs)


def feasible(params: ScenarioParams, it: Itinerary, walk_only_min: float) -> bool:
    """Def-style feasibility: wait and walk caps, and it must beat walking.

    The walk-only option is the baseline and is exempt from the last clause.
    """
    if it.total_wait_min > params.max_wait_min + TIME_EPS:
        return False
    if it.total_walk_km > params.max_walk_km + TIME_EPS:
        return False
    if it.kind is Kind.WALK_ONLY:
        return True
    return it.journey_min < walk_only_min - TIME_EPS


def _menu_key(it: Itinerary):
    return (it.arrival_min, len(it.legs), it.total_walk_km, KIND_ORDER[it.kind])


def build_menu(params: ScenarioParams, rail: RailLine, rider: Rider, system: str,
               board: JourneyBoard, ctx: RiderContext | None = None
               ) -> list[Itinerary]:
    """Feasible options for this rider, best first."""
    if ctx is None:
        ctx = make_context(rider, board)
    walk = option_walk(params, rider)
    options = [walk, option_transit(params, rail, rider, ctx, board)]
    if system in ("current", "integrated"):
        options.append(option_carpool_only(params, rider, ctx, board))
    if system == "integrated":
        options.append(option_carpool_transit(params, rail, rider, ctx, board))
    menu = [o for o in options
            if o is not None and feasible(params, o, walk.journey_min)]
    menu.sort(key=_menu_key)
    return menu


def select_option(params: ScenarioParams, rail: RailLine, rider: Rider, system: str,
                  board: JourneyBoard, ctx: RiderContext | None = None) -> Outcome:
    menu = build_menu(params, rail, rider, system, board, ctx)
    return Outcome(rider.id, menu[0] if menu else None)
