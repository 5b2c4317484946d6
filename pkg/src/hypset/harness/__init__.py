"""Scenario-driven audits and the command line front end."""

from .report import AuditReport, Budget, BudgetExceeded, SelfCheckError, Series
from .scenario import Scenario, ScenarioError, load_scenario, parse_scenario
from .audits import run_scenario, AUDITS

__all__ = [
    "AUDITS",
    "AuditReport",
    "Budget",
    "BudgetExceeded",
    "Scenario",
    "ScenarioError",
    "SelfCheckError",
    "Series",
    "load_scenario",
    "parse_scenario",
    "run_scenario",
]
