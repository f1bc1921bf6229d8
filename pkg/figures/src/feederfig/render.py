"""Render figures from a feedersim results directory.

Read-only over the documented CSV schema; nothing is recomputed from the
simulation. All inputs are parsed and validated before any image is written,
so a malformed CSV never leaves a partial figure behind.
"""
from __future__ import annotations

import csv
import json
import warnings
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

SYSTEMS = ("no_carpooling", "current", "integrated")
SYSTEM_LABELS = {
    "no_carpooling": "No Carpooling",
    "current": "Current",
    "integrated": "Integrated",
}
MODE_LABELS = {
    "unserved": "Unserved",
    "walk_only": "Walk",
    "transit_only": "Transit",
    "carpool_only": "Carpool",
    "carpool_fm_transit": "Carpool FM + Transit",
    "transit_carpool_lm": "Transit + Carpool LM",
    "carpool_fm_transit_carpool_lm": "Carpool FM + Transit + Carpool LM",
}
DETOUR_LABELS = {"none": "No detour", "fm": "First mile", "lm": "Last mile",
                 "both": "Both"}


class FigureInputError(ValueError):
    """A results file is missing a column or holds an unparsable value."""


def _read_csv(path: Path, columns: list[str]) -> list[dict]:
    with open(path, newline="") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames is None or not set(columns) <= set(reader.fieldnames):
            raise FigureInputError(
                f"{path.name}: expected columns {columns}, found {reader.fieldnames}")
        rows = list(reader)
    return rows


def _float(path: Path, row: dict, key: str) -> float | None:
    raw = row.get(key, "")
    if raw == "":
        return None
    try:
        return float(raw)
    except ValueError as e:
        raise FigureInputError(f"{path.name}: bad {key} value {raw!r}") from e


def load_results(results_dir) -> dict:
    """Parse every per-system CSV present, validating eagerly."""
    results_dir = Path(results_dir)
    data: dict = {"systems": {}}
    summary = results_dir / "summary.json"
    if summary.exists():
        try:
            data["walk_slope"] = json.loads(summary.read_text())[
                "walk_min_per_euclid_km"]
        except (json.JSONDecodeError, KeyError) as e:
            raise FigureInputError(f"summary.json: {e}") from e
    else:
        warnings.warn("summary.json missing; walking reference line skipped")
        data["walk_slope"] = None

    for system in SYSTEMS:
        entry = {}
        modes = results_dir / f"{system}_modes.csv"
        if not modes.exists():
            continue
        rows = _read_csv(modes, ["category", "count", "share"])
        entry["modes"] = {r["category"]: _float(modes, r, "share") for r in rows}

        tt = results_dir / f"{system}_travel_times.csv"
        if tt.exists():
            rows = _read_csv(tt, ["rider_id", "od_km", "journey_min", "kind"])
            entry["travel"] = [
                (_float(tt, r, "od_km"), _float(tt, r, "journey_min"))
                for r in rows]
        else:
            warnings.warn(f"{tt.name} missing; travel-time figure skipped")

        occ = results_dir / f"{system}_occupancy.csv"
        if occ.exists():
            rows = _read_csv(occ, ["max_occupancy", "count"])
            entry["occupancy"] = {int(r["max_occupancy"]):
                                  int(_float(occ, r, "count")) for r in rows}
        else:
            warnings.warn(f"{occ.name} missing; occupancy figure skipped")

        det = results_dir / f"{system}_detours.csv"
        if det.exists():
            rows = _read_csv(det, ["category", "count", "share"])
            entry["detours"] = {r["category"]: _float(det, r, "share") for r in rows}
        else:
            warnings.warn(f"{det.name} missing; detour figure skipped")

        data["systems"][system] = entry
    if not data["systems"]:
        raise FigureInputError(f"no *_modes.csv files found in {results_dir}")
    return data


def _save(fig, out_dir: Path, stem: str, formats) -> list[Path]:
    paths = []
    for fmt in formats:
        p = out_dir / f"{stem}.{fmt}"
        fig.savefig(p, bbox_inches="tight", dpi=150)
        paths.append(p)
    plt.close(fig)
    return paths


def render_modes(system: str, shares: dict, out_dir: Path, formats) -> list[Path]:
    fig, ax = plt.subplots(figsize=(3.2, 4.5))
    bottom = 0.0
    for cat, label in MODE_LABELS.items():
        v = shares.get(cat)
        if v is None:
            continue
        ax.bar([0], [v * 100], bottom=bottom, label=label, width=0.5)
        bottom += v * 100
    ax.set_xticks([0], [SYSTEM_LABELS[system]])
    ax.set_ylabel("share of riders [%]")
    ax.set_ylim(0, 100)
    ax.legend(fontsize=7, loc="center left", bbox_to_anchor=(1.0, 0.5))
    ax.set_title("Transportation mode breakdown")
    return _save(fig, out_dir, f"modes_{system}", formats)


def render_travel_times(system: str, rows: list, walk_slope, out_dir: Path,
                        formats) -> tuple[list[Path], int]:
    served = [(d, t) for d, t in rows if t is not None]
    unserved = [d for d, t in rows if t is None]
    fig, (ax_top, ax) = plt.subplots(
        2, 1, figsize=(4.5, 4.5), sharex=True,
        gridspec_kw={"height_ratios": [1, 3]})
    bins = np.arange(0, 18, 1.0)
    ax_top.hist(unserved, bins=bins, color="0.4")
    ax_top.set_ylabel("unserved")
    if served:
        xs, ys = zip(*served)
        ax.scatter(xs, ys, s=4, alpha=0.5)
    if walk_slope is not None:
        grid = np.linspace(0, 17, 50)
        ax.plot(grid, walk_slope * grid, "k--", lw=1, label="walking")
        ax.legend(fontsize=8)
    ax.set_xlabel("origin-destination distance [km]")
    ax.set_ylabel("travel time [min]")
    ax_top.set_title(f"Travel times, {SYSTEM_LABELS[system]}")
    return _save(fig, out_dir, f"travel_times_{system}", formats), len(served)


def render_occupancy(system: str, hist: dict, out_dir: Path, formats) -> list[Path]:
    fig, ax = plt.subplots(figsize=(4.0, 3.0))
    ks = sorted(hist)
    ax.bar(ks, [hist[k] for k in ks], color="steelblue")
    ax.set_xticks(ks)
    ax.set_xlabel("maximum simultaneous riders")
    ax.set_ylabel("drivers")
    ax.set_title(f"Vehicle maximum occupancy, {SYSTEM_LABELS[system]}")
    return _save(fig, out_dir, f"occupancy_{system}", formats)


def render_detours(system: str, shares: dict, out_dir: Path, formats) -> list[Path]:
    fig, ax = plt.subplots(figsize=(4.0, 3.0))
    cats = [c for c in DETOUR_LABELS if shares.get(c) is not None]
    ax.bar(range(len(cats)), [shares[c] * 100 for c in cats], color="darkorange")
    ax.set_xticks(range(len(cats)), [DETOUR_LABELS[c] for c in cats])
    ax.set_ylabel("share of drivers [%]")
    ax.set_title(f"Realized detours, {SYSTEM_LABELS[system]}")
    return _save(fig, out_dir, f"detours_{system}", formats)


def render_all(results_dir, out_dir, formats=("png",)) -> dict:
    """Render every figure family for every system present.

    Returns {"images": [paths], "scatter_points": {system: n}}.
    """
    data = load_results(results_dir)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    images: list[Path] = []
    scatter_points: dict[str, int] = {}
    for system, entry in data["systems"].items():
        images += render_modes(system, entry["modes"], out, formats)
        if "travel" in entry:
            paths, n = render_travel_times(system, entry["travel"],
                                           data["walk_slope"], out, formats)
            images += paths
            scatter_points[system] = n
        if "occupancy" in entry:
            images += render_occupancy(system, entry["occupancy"], out, formats)
        if "detours" in entry:
            images += render_detours(system, entry["detours"], out, formats)
    return {"images": images, "scatter_points": scatter_points}
