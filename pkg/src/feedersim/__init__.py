"""feedersim: transit, carpooling, and carpooling-as-feeder simulation."""

from .model import ScenarioParams
from .scenario import Scenario, generate_scenario, load_scenario, save_scenario
from .engine import run, run_all

__all__ = [
    "ScenarioParams",
    "Scenario",
    "generate_scenario",
    "load_scenario",
    "save_scenario",
    "run",
    "run_all",
]
