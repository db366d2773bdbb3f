"""In-memory report writer for tests or library use."""

from typing import List, Optional

from ..interfaces import ReportWriter
from .base import Report


class InMemoryReportWriter(ReportWriter):
    """Keeps every written report in order."""

    def __init__(self) -> None:
        self.reports: List[Report] = []

    def write(self, report: Report) -> None:
        self.reports.append(report.model_copy(deep=True))

    @property
    def last(self) -> Optional[Report]:
        return self.reports[-1] if self.reports else None
