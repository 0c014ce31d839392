"""Modeling-language frontend and the ``cwp-verify`` command line."""

from cwp_verifier.cli.parser import parse_document, parse_model, parse_scenario
from cwp_verifier.cli.printer import print_model, print_scenario
from cwp_verifier.cli.report import Report, ReportFormat
from cwp_verifier.workmodel import WorkModel

__all__ = [
    "Report",
    "ReportFormat",
    "WorkModel",
    "parse_document",
    "parse_model",
    "parse_scenario",
    "print_model",
    "print_scenario",
]
