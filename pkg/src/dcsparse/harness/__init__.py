"""Instance generation, oracle suites and experiment orchestration."""

from .experiment import ExperimentPlan, render_table, run_experiment, summarize
from .generate import GenerationError, laminar17_instance, gen_instance, path3_instance
from .oracles import SCOPES, OracleGateError, OracleReport, oracle_check

__all__ = [
    "ExperimentPlan", "render_table", "run_experiment", "summarize",
    "GenerationError", "laminar17_instance", "gen_instance", "path3_instance",
    "SCOPES", "OracleGateError", "OracleReport", "oracle_check",
]
