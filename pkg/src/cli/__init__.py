"""Command line interface and JSON reports"""
from src.cli.config import CHECKS, VERB_CHECKS, RunConfig
from src.cli.report import SCHEMA_VERSION, Report, sanitize
from src.cli.runner import RunContext, prepare, run

__all__ = ["CHECKS", "SCHEMA_VERSION", "VERB_CHECKS", "Report", "RunConfig", "RunContext", "prepare", "run",
           "sanitize"]
