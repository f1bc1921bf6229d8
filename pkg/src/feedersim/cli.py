"""Command-line entry point: generate scenarios, run systems, sweep seeds."""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

from . import engine, metrics
from .journeys import SYSTEMS
from .model import ScenarioParams
from .scenario import ScenarioFormatError, generate_scenario, load_scenario, save_scenario

DEFAULT_OUT_ENV = "FEEDERSIM_OUT"


def _params_from_args(args) -> ScenarioParams:
    overrides = {}
    if args.params:
        with open(args.params) as f:
            overrides.update(json.load(f))
    if getattr(args, "headway", None) is not None:
        overrides["train_headway_min"] = args.headway
    if getattr(args, "rider_density", None) is not None:
        overrides["rider_density_per_km2_h"] = args.rider_density
    if getattr(args, "driver_density", None) is not None:
        overrides["driver_density_per_km2_h"] = args.driver_density
    if getattr(args, "seed", None) is not None:
        overrides["rng_seed"] = args.seed
    return ScenarioParams(**overrides)


def _out_dir(args) -> Path:
    if args.out:
        return Path(args.out)
    return Path(os.environ.get(DEFAULT_OUT_ENV, "results"))


def _parse_systems(spec: str) -> list[str]:
    names = [s.strip() for s in spec.split(",") if s.strip()]
    for n in names:
        if n not in SYSTEMS:
            raise SystemExit(
                f"error: unknown system '{n}' (choose from {', '.join(SYSTEMS)})"
            )
    return names


def _parse_seeds(spec: str) -> list[int]:
    seeds: list[int] = []
    for part in spec.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part[1:]:
            lo, hi = part.split("-", 1)
            seeds.extend(range(int(lo), int(hi) + 1))
        else:
            seeds.append(int(part))
    if not seeds:
        raise SystemExit("error: empty seed set")
    return seeds


def cmd_generate(args) -> int:
    params = _params_from_args(args)
    scenario = generate_scenario(params)
    out = Path(args.scenario or "scenario.json")
    out.parent.mkdir(parents=True, exist_ok=True)
    save_scenario(scenario, out)
    print(f"wrote {out}: {len(scenario.meeting_points)} meeting points, "
          f"{len(scenario.riders)} riders, {len(scenario.drivers)} drivers")
    return 0


def _run_one(scenario, systems: list[str], out_dir: Path) -> dict[str, dict]:
    contexts = engine._rider_contexts(scenario)
    summaries = {}
    for system in systems:
        result = engine.run(scenario, system, contexts)
        summaries[system] = metrics.write_metrics(result, out_dir)
        s = summaries[system]
        share = s["unserved_share"]
        share_txt = "n/a" if share is None else f"{share:.1%}"
        print(f"{system}: {s['window_riders']} window riders, "
              f"unserved {share_txt}")
    metrics.write_summary(summaries, scenario.params, out_dir)
    return summaries


def cmd_run(args) -> int:
    systems = _parse_systems(args.systems)
    if args.scenario:
        scenario = load_scenario(args.scenario)
        if args.headway is not None and args.headway != scenario.params.train_headway_min:
            raise SystemExit("error: --headway conflicts with the loaded scenario; "
                             "regenerate instead")
    else:
        scenario = generate_scenario(_params_from_args(args))
    _run_one(scenario, systems, _out_dir(args))
    return 0


def cmd_sweep(args) -> int:
    seeds = _parse_seeds(args.seeds)
    systems = _parse_systems(args.systems)
    out = _out_dir(args)
    per_seed = []
    for seed in seeds:
        params = _params_from_args(args)
        params = ScenarioParams(**{**{k: getattr(params, k)
                                      for k in params.__dataclass_fields__},
                                   "rng_seed": seed})
        scenario = generate_scenario(params)
        print(f"--- seed {seed} ---")
        summaries = _run_one(scenario, systems, out / f"seed_{seed}")
        per_seed.append({"seed": seed, "systems": summaries})

    agg: dict[str, dict] = {}
    for system in systems:
        shares = [row["systems"][system]["unserved_share"] for row in per_seed
                  if row["systems"][system]["unserved_share"] is not None]
        occs = [row["systems"][system]["mean_max_occupancy"] for row in per_seed
                if row["systems"][system]["mean_max_occupancy"] is not None]
        agg[system] = {
            "unserved_share_mean": _mean(shares),
            "unserved_share_std": _std(shares),
            "unserved_share_stderr": _stderr(shares),
            "mean_max_occupancy_mean": _mean(occs),
            "mean_max_occupancy_std": _std(occs),
            "mean_max_occupancy_stderr": _stderr(occs),
            "n_seeds": len(shares),
        }
    doc = {"seeds": seeds, "per_seed": per_seed, "aggregate": agg}
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "sweep_summary.json", "w") as f:
        json.dump(doc, f, indent=1, sort_keys=True)
        f.write("\n")
    print(f"wrote {out / 'sweep_summary.json'}")
    return 0


def _mean(xs):
    return sum(xs) / len(xs) if xs else None


def _std(xs):
    if len(xs) < 2:
        return None
    m = _mean(xs)
    return math.sqrt(sum((x - m) ** 2 for x in xs) / (len(xs) - 1))


def _stderr(xs):
    s = _std(xs)
    return None if s is None else s / math.sqrt(len(xs))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="feedersim",
        description="Compare transit-only, carpooling, and carpooling-as-feeder "
                    "mobility systems on a synthetic suburban scenario.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, scenario_help):
        sp.add_argument("--seed", type=int, default=None, help="RNG seed")
        sp.add_argument("--params", help="JSON file with parameter overrides")
        sp.add_argument("--scenario", help=scenario_help)
        sp.add_argument("--headway", type=float, default=None,
                        help="train headway in minutes")
        sp.add_argument("--rider-density", type=float, default=None,
                        help="riders per km^2 per hour")
        sp.add_argument("--driver-density", type=float, default=None,
                        help="drivers per km^2 per hour")

    g = sub.add_parser("generate", help="generate and save a scenario file")
    common(g, "output scenario path (default scenario.json)")
    g.set_defaults(func=cmd_generate)

    r = sub.add_parser("run", help="run systems on one scenario, write metrics")
    common(r, "scenario file to load (default: generate from --seed/--params)")
    r.add_argument("--systems", default=",".join(SYSTEMS),
                   help="comma-separated subset of " + ",".join(SYSTEMS))
    r.add_argument("--out", help=f"output directory (default ${DEFAULT_OUT_ENV} or ./results)")
    r.set_defaults(func=cmd_run)

    s = sub.add_parser("sweep", help="replicate runs over a seed list")
    common(s, argparse.SUPPRESS)
    s.add_argument("--seeds", required=True,
                   help="seed list/ranges, e.g. 1,2,5-10")
    s.add_argument("--systems", default=",".join(SYSTEMS))
    s.add_argument("--out", help=f"output directory (default ${DEFAULT_OUT_ENV} or ./results)")
    s.set_defaults(func=cmd_sweep)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ScenarioFormatError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
