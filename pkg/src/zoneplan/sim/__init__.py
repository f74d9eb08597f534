"""Scenario-driven simulation harness: world stepping, traces, rendering, CLI."""

from .scenario import Scenario, ScenarioError, dumps, load_scenario, to_dict

__all__ = ["Scenario", "ScenarioError", "dumps", "load_scenario", "to_dict"]
