"""Run orchestration: one scenario through one or all three systems.

Riders are matched greedily in order of departure time (ties by id). A run
owns its journey state; nothing leaks between systems or repeated runs.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .journeys import SYSTEMS, Journey, JourneyBoard
from .planner import Itinerary, Outcome, RiderContext, build_menu
from .scenario import Scenario


@dataclass
class RunResult:
    system: str
    scenario: Scenario
    outcomes: list[Outcome]
    journeys: list[Journey]


def _rider_contexts(scenario: Scenario) -> list[RiderContext]:
    """Batch nearest-point lookups for all riders at once."""
    mps = scenario.meeting_points
    mx = np.array([mp.location.x_km for mp in mps])
    my = np.array([mp.location.y_km for mp in mps])
    st = [mp for mp in mps if mp.is_station]
    sx = np.array([mp.location.x_km for mp in st])
    sy = np.array([mp.location.y_km for mp in st])
    ox = np.array([r.origin.x_km for r in scenario.riders])
    oy = np.array([r.origin.y_km for r in scenario.riders])
    dx = np.array([r.destination.x_km for r in scenario.riders])
    dy = np.array([r.destination.y_km for r in scenario.riders])
    if len(scenario.riders) == 0:
        return []
    m_org = kernels.nearest_indices(ox, oy, mx, my)
    m_dst = kernels.nearest_indices(dx, dy, mx, my)
    s_org = kernels.nearest_indices(ox, oy, sx, sy)
    s_dst = kernels.nearest_indices(dx, dy, sx, sy)
    return [
        RiderContext(mps[m_org[k]].id, mps[m_dst[k]].id,
                     st[s_org[k]].id, st[s_dst[k]].id)
        for k in range(len(scenario.riders))
    ]


def _commit(board: JourneyBoard, it: Itinerary) -> bool:
    """Reserve every carpool leg atomically; roll back on refusal."""
    done = []
    for leg in it.legs:
        if leg.mode != "carpool":
            continue
        if board.reserve(leg.driver_id, leg.board_idx, leg.alight_idx, it.rider_id):
            done.append(leg.driver_id)
        else:
            for d in done:
                board.release(d, it.rider_id)
            return False
    return True


def run(scenario: Scenario, system: str,
        contexts: list[RiderContext] | None = None) -> RunResult:
    if system not in SYSTEMS:
        raise ValueError(f"unknown system {system!r}")
    board = JourneyBoard(scenario, system)
    if contexts is None:
        contexts = _rider_contexts(scenario)
    ordered = sorted(zip(scenario.riders, contexts),
                     key=lambda rc: (rc[0].departure_min, rc[0].id))
    outcomes: list[Outcome] = []
    for rider, ctx in ordered:
        menu = build_menu(scenario.params, scenario.rail, rider, system, board, ctx)
        chosen = None
        for it in menu:
            if _commit(board, it):
                chosen = it
                break
        outcomes.append(Outcome(rider.id, chosen))
    return RunResult(system, scenario, outcomes, board.journeys)


def run_all(scenario: Scenario) -> dict[str, RunResult]:
    contexts = _rider_contexts(scenario)
    return {system: run(scenario, system, contexts) for system in SYSTEMS}
