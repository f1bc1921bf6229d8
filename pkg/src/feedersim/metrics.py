"""Result metrics over the measurement window, plus CSV/JSON serialization.

The window filter applies to the departing user: rider metrics count riders
departing in the first measurement hour, driver metrics count such drivers.
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path

from .engine import RunResult
from .journeys import realized_detours
from .model import euclid
from .planner import Kind

MODE_CATEGORIES = ["unserved"] + [k.value for k in Kind]
DETOUR_CATEGORIES = ["none", "fm", "lm", "both"]


def in_window(departure_min: float, params) -> bool:
    return 0.0 <= departure_min < params.measurement_window_min


@dataclass(frozen=True)
class ModeBreakdown:
    counts: dict[str, int]
    total: int

    @property
    def shares(self) -> dict[str, float] | None:
        """None marks an empty measurement window."""
        if self.total == 0:
            return None
        return {c: n / self.total for c, n in self.counts.items()}


def _window_outcomes(result: RunResult):
    riders = {r.id: r for r in result.scenario.riders}
    return [(riders[o.rider_id], o) for o in result.outcomes
            if in_window(riders[o.rider_id].departure_min, result.scenario.params)]


def _window_journeys(result: RunResult):
    drivers = {d.id: d for d in result.scenario.drivers}
    return [j for j in result.journeys
            if in_window(drivers[j.driver_id].departure_min, result.scenario.params)]


def mode_breakdown(result: RunResult) -> ModeBreakdown:
    counts = {c: 0 for c in MODE_CATEGORIES}
    rows = _window_outcomes(result)
    for _, o in rows:
        counts["unserved" if o.itinerary is None else o.itinerary.kind.value] += 1
    return ModeBreakdown(counts, len(rows))


def travel_time_table(result: RunResult) -> list[dict]:
    rows = []
    for rider, o in _window_outcomes(result):
        rows.append({
            "rider_id": rider.id,
            "od_km": euclid(rider.origin, rider.destination),
            "journey_min": o.itinerary.journey_min if o.served else None,
            "kind": o.itinerary.kind.value if o.served else "unserved",
        })
    return rows


def occupancy_histogram(result: RunResult) -> dict[int, int]:
    counts = {k: 0 for k in range(result.scenario.params.max_seats + 1)}
    for j in _window_journeys(result):
        counts[j.max_occupancy()] += 1
    return counts


def detour_breakdown(result: RunResult) -> dict[str, int]:
    counts = {c: 0 for c in DETOUR_CATEGORIES}
    for j in _window_journeys(result):
        counts[realized_detours(j)] += 1
    return counts


# ---------------------------------------------------------------------------
# Serialization (CSV schemas documented in the README)
# ---------------------------------------------------------------------------


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def write_metrics(result: RunResult, out_dir) -> dict:
    """Write the four CSV families for one run; returns the summary dict."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    sysname = result.system

    mb = mode_breakdown(result)
    shares = mb.shares
    _write_csv(out / f"{sysname}_modes.csv", ["category", "count", "share"],
               [[c, mb.counts[c], None if shares is None else shares[c]]
                for c in MODE_CATEGORIES])

    tt = travel_time_table(result)
    _write_csv(out / f"{sysname}_travel_times.csv",
               ["rider_id", "od_km", "journey_min", "kind"],
               [[r["rider_id"], r["od_km"], r["journey_min"], r["kind"]] for r in tt])

    occ = occupancy_histogram(result)
    _write_csv(out / f"{sysname}_occupancy.csv", ["max_occupancy", "count"],
               [[k, occ[k]] for k in sorted(occ)])

    det = detour_breakdown(result)
    n_drv = sum(det.values())
    _write_csv(out / f"{sysname}_detours.csv", ["category", "count", "share"],
               [[c, det[c], det[c] / n_drv if n_drv else None]
                for c in DETOUR_CATEGORIES])

    n_occ = sum(occ.values())
    mean_occ = (sum(k * v for k, v in occ.items()) / n_occ) if n_occ else math.nan
    return {
        "system": sysname,
        "window_riders": mb.total,
        "window_drivers": n_occ,
        "mode_counts": mb.counts,
        "mode_shares": shares,
        "unserved_share": None if shares is None else shares["unserved"],
        "mean_max_occupancy": None if n_occ == 0 else mean_occ,
        "occupancy_counts": {str(k): v for k, v in occ.items()},
        "detour_counts": det,
    }


def write_summary(summaries: dict[str, dict], params, out_dir) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    doc = {
        "params": {k: getattr(params, k) for k in params.__dataclass_fields__},
        "walk_min_per_euclid_km": params.walk_min_per_euclid_km,
        "systems": summaries,
    }
    with open(out / "summary.json", "w") as f:
        json.dump(doc, f, indent=1, sort_keys=True)
        f.write("\n")
