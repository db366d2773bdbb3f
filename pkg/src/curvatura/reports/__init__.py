"""Run reports and the writers that persist them."""

from .base import CheckOutcome, Report, Table, Verdict
from .file import CsvReportWriter, JsonReportWriter, render_json
from .in_memory import InMemoryReportWriter

__all__ = [
    "CheckOutcome",
    "CsvReportWriter",
    "InMemoryReportWriter",
    "JsonReportWriter",
    "Report",
    "Table",
    "Verdict",
    "render_json",
]
