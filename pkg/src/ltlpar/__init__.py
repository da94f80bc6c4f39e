"""Parallel satisfiability checking for LTL with a partitioned one-pass tableau."""

from .formula import Formula, ParseError, length, parse, render, to_nnf
from .gen import GenConfig, gen
from .jobs import JobOutcome, orchestrate, parse_job_env, run_job
from .partition import JobSpec, decline, to_job
from .tableau import SAT, UNSAT, Budget, BudgetExceeded, LassoModel, Verdict, check_witness, solve

__version__ = "0.1.0"

__all__ = [
    "Formula",
    "ParseError",
    "parse",
    "render",
    "to_nnf",
    "length",
    "GenConfig",
    "gen",
    "JobSpec",
    "to_job",
    "decline",
    "JobOutcome",
    "run_job",
    "orchestrate",
    "parse_job_env",
    "SAT",
    "UNSAT",
    "Budget",
    "BudgetExceeded",
    "LassoModel",
    "Verdict",
    "solve",
    "check_witness",
]
